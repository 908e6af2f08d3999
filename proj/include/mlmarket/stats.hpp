#pragma once

#include <cstddef>
#include <span>

namespace mlmarket {

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator). Zero for n < 2.
double sample_stddev(std::span<const double> values);

/// Regularized incomplete beta function I_x(a, b), by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Right-tail probability P(T > t) for Student's t with `dof` degrees of
/// freedom.
double student_t_right_tail(double t, double dof);

struct PairedTTest {
    double mean_diff = 0.0;
    double stderr_diff = 0.0;  // sample stddev of differences / sqrt(n)
    double t_stat = 0.0;
    double p_right = 0.5;      // P(T > t_stat), dof = n - 1
    std::size_t dof = 0;
};

/// Paired t-test on precomputed differences. Degenerate cases: with zero
/// variance the statistic is 0 (mean 0) or +/-infinity; with n < 2 the test
/// is undefined and t/p are NaN.
PairedTTest paired_t_test(std::span<const double> differences);

}  // namespace mlmarket
