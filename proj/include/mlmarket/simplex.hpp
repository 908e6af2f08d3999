#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mlmarket {

/// A probability vector: nonnegative entries summing to one.
///
/// Every construction path validates (or restores) the invariant, so any
/// SimplexVec in flight can be consumed without re-checking. Immutable.
class SimplexVec {
  public:
    /// The trivial single-outcome distribution (1).
    SimplexVec() : entries_{1.0} {}

    /// Validates `entries` as-is: length >= 1, all entries >= 0,
    /// |sum - 1| <= 1e-12. Throws ValidationError otherwise.
    explicit SimplexVec(std::vector<double> entries);

    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t k) const { return entries_[k]; }
    const std::vector<double>& entries() const { return entries_; }
    std::span<const double> span() const { return entries_; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    bool operator==(const SimplexVec& other) const = default;

    /// Uniform distribution over `n` outcomes.
    static SimplexVec uniform(std::size_t n);

  private:
    struct Unchecked {};
    SimplexVec(std::vector<double> entries, Unchecked) : entries_(std::move(entries)) {}

    std::vector<double> entries_;

    friend SimplexVec normalize_simplex(std::span<const double>);
    friend SimplexVec clip_belief(const SimplexVec&, double);
};

/// Scales a nonnegative vector to sum to one. Throws ValidationError on an
/// empty vector, a negative entry, or an all-zero vector.
SimplexVec normalize_simplex(std::span<const double> raw);

inline SimplexVec normalize_simplex(const std::vector<double>& raw) {
    return normalize_simplex(std::span<const double>(raw));
}

/// Raises every entry to at least `floor` and rescales the remaining mass so
/// the result still sums to one. Entries already >= floor are only rescaled;
/// an input satisfying the floor everywhere is returned unchanged.
/// Requires 0 < floor < 1/size.
SimplexVec clip_belief(const SimplexVec& p, double floor);

/// Belief floor applied at every ingestion point. Keeps logarithmic-utility
/// payoffs finite when a provider emits a hard zero.
inline constexpr double kBeliefFloor = 1e-9;

}  // namespace mlmarket
