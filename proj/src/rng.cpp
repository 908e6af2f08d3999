#include "mlmarket/rng.hpp"

#include <cmath>
#include <numbers>

#include "mlmarket/errors.hpp"

namespace mlmarket {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double Rng::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw ValidationError("gamma shape and scale must be positive");
    }
    if (shape < 1.0) {
        // Boost the shape and thin with a uniform power.
        const double boosted = gamma(shape + 1.0, scale);
        return boosted * std::pow(uniform_open01(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open01();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * v * scale;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v * scale;
        }
    }
}

std::uint64_t Rng::bounded(std::uint64_t n) {
    if (n == 0) {
        throw ValidationError("bounded(0) is undefined");
    }
    const std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    while (true) {
        const std::uint64_t r = engine_();
        if (r >= threshold) {
            return r % n;
        }
    }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    // splitmix64 finaliser over the combined value.
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace mlmarket
