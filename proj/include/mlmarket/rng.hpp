#pragma once

#include <cstdint>
#include <random>

namespace mlmarket {

/// Mersenne-twister generator with explicitly coded distributions, so streams
/// are reproducible across standard libraries and platforms for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1), never exactly zero.
    double uniform_open01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller, caching the second variate.
    double normal();

    /// Gamma(shape, scale) via Marsaglia-Tsang squeeze.
    double gamma(double shape, double scale);

    /// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
    std::uint64_t bounded(std::uint64_t n);

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Stream-splits a base seed: repetition r uses derive_seed(base, r),
/// independent of how many values earlier repetitions consumed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace mlmarket
