#include "mlmarket/stats.hpp"

#include <cmath>
#include <limits>

#include "mlmarket/errors.hpp"

namespace mlmarket {

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ValidationError("incomplete beta requires positive parameters");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_right_tail(double t, double dof) {
    if (!(dof > 0.0)) {
        throw ValidationError("degrees of freedom must be positive");
    }
    if (std::isinf(t)) return t > 0.0 ? 0.0 : 1.0;
    const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
    return t >= 0.0 ? tail : 1.0 - tail;
}

PairedTTest paired_t_test(std::span<const double> differences) {
    PairedTTest out;
    const std::size_t n = differences.size();
    out.mean_diff = mean(differences);
    if (n < 2) {
        out.t_stat = std::numeric_limits<double>::quiet_NaN();
        out.p_right = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.dof = n - 1;
    out.stderr_diff = sample_stddev(differences) / std::sqrt(static_cast<double>(n));
    if (out.stderr_diff == 0.0) {
        if (out.mean_diff == 0.0) {
            out.t_stat = 0.0;
            out.p_right = 0.5;
        } else {
            out.t_stat = out.mean_diff > 0.0 ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity();
            out.p_right = out.mean_diff > 0.0 ? 0.0 : 1.0;
        }
        return out;
    }
    out.t_stat = out.mean_diff / out.stderr_diff;
    out.p_right = student_t_right_tail(out.t_stat, static_cast<double>(out.dof));
    return out;
}

}  // namespace mlmarket
