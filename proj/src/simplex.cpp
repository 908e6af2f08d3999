#include "mlmarket/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mlmarket/errors.hpp"

namespace mlmarket {

namespace {

constexpr double kSumTolerance = 1e-12;

void check_finite_nonnegative(std::span<const double> v) {
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k])) {
            throw ValidationError("simplex entry " + std::to_string(k) + " is not finite");
        }
        if (v[k] < 0.0) {
            throw ValidationError("simplex entry " + std::to_string(k) + " is negative (" +
                                  std::to_string(v[k]) + ")");
        }
    }
}

}  // namespace

SimplexVec::SimplexVec(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ValidationError("simplex vector must have at least one entry");
    }
    check_finite_nonnegative(entries_);
    const double sum = std::accumulate(entries_.begin(), entries_.end(), 0.0);
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw ValidationError("simplex vector sums to " + std::to_string(sum) + ", expected 1");
    }
}

SimplexVec SimplexVec::uniform(std::size_t n) {
    if (n == 0) {
        throw ValidationError("simplex vector must have at least one entry");
    }
    return SimplexVec(std::vector<double>(n, 1.0 / static_cast<double>(n)), Unchecked{});
}

SimplexVec normalize_simplex(std::span<const double> raw) {
    if (raw.empty()) {
        throw ValidationError("cannot normalize an empty vector");
    }
    check_finite_nonnegative(raw);
    const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (sum <= 0.0) {
        throw ValidationError("cannot normalize a vector with zero total mass");
    }
    std::vector<double> out(raw.begin(), raw.end());
    for (double& x : out) x /= sum;
    return SimplexVec(std::move(out), SimplexVec::Unchecked{});
}

SimplexVec clip_belief(const SimplexVec& p, double floor) {
    const std::size_t n = p.size();
    if (!(floor > 0.0) || !(floor < 1.0 / static_cast<double>(n))) {
        throw ValidationError("belief floor must lie in (0, 1/size)");
    }

    // Pin entries below the floor and rescale the free mass. Rescaling can
    // push further entries under the floor, so repeat until stable; each pass
    // pins at least one more entry, so this terminates in <= n passes.
    std::vector<double> out(p.entries());
    std::vector<bool> pinned(n, false);
    while (true) {
        double pinned_mass = 0.0;
        double free_mass = 0.0;
        bool new_pins = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (!pinned[k] && out[k] < floor) {
                pinned[k] = true;
                new_pins = true;
            }
            if (pinned[k]) {
                out[k] = floor;
                pinned_mass += floor;
            } else {
                free_mass += out[k];
            }
        }
        if (!new_pins) break;
        const double scale = (1.0 - pinned_mass) / free_mass;
        for (std::size_t k = 0; k < n; ++k) {
            if (!pinned[k]) out[k] *= scale;
        }
    }
    return SimplexVec(std::move(out), SimplexVec::Unchecked{});
}

}  // namespace mlmarket
