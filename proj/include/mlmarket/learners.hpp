#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mlmarket/dataset.hpp"
#include "mlmarket/market.hpp"
#include "mlmarket/simplex.hpp"

namespace mlmarket {

/// A trained classifier that supplies one agent's beliefs. Immutable after
/// training; shareable across threads.
class BeliefProvider {
  public:
    virtual ~BeliefProvider() = default;

    /// Class distribution for one feature vector.
    virtual SimplexVec predict(std::span<const double> features) const = 0;

    /// Feature count the provider was trained on (0 = accepts any).
    virtual std::size_t num_features() const = 0;

    virtual std::size_t num_classes() const = 0;
};

using BeliefProviderPtr = std::shared_ptr<const BeliefProvider>;

/// Emits the same belief for every query. Degenerate training sets collapse
/// to this, and tests use it directly.
BeliefProviderPtr make_constant_provider(SimplexVec belief);

/// One classification tree trained on a seeded bootstrap resample: greedy
/// Gini splits on axis-aligned thresholds, depth-limited, with every leaf
/// covering at least `min_leaf` resampled points. Leaves predict
/// add-one-smoothed class frequencies. Ties in split quality resolve to the
/// lowest feature index, then the lowest threshold.
BeliefProviderPtr train_bagged_tree(const Dataset& train, std::size_t depth_limit,
                                    std::size_t min_leaf, std::uint64_t seed);

/// Gaussian naive Bayes with per-class/per-feature moments, variances floored
/// at `var_floor`, and the empirical class prior.
BeliefProviderPtr train_gaussian_nb(const Dataset& train, double var_floor);

/// Evaluates every provider on every instance. Rows are floored at the
/// ingestion belief floor and renormalised, so downstream markets always see
/// strictly positive beliefs.
BeliefMatrix predict_beliefs(const std::vector<BeliefProviderPtr>& providers,
                             const Dataset& instances);

}  // namespace mlmarket
