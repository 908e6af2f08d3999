#include "mlmarket/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mlmarket/errors.hpp"
#include "mlmarket/rng.hpp"

namespace mlmarket {

namespace {

class ConstantProvider : public BeliefProvider {
  public:
    explicit ConstantProvider(SimplexVec belief) : belief_(std::move(belief)) {}

    SimplexVec predict(std::span<const double>) const override { return belief_; }
    std::size_t num_features() const override { return 0; }
    std::size_t num_classes() const override { return belief_.size(); }

  private:
    SimplexVec belief_;
};

struct TreeNode {
    // Internal nodes route on feature/threshold; leaves carry a distribution.
    std::size_t feature = 0;
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left;   // feature value <= threshold
    std::unique_ptr<TreeNode> right;  // feature value >  threshold
    std::vector<double> leaf_probs;

    bool is_leaf() const { return left == nullptr; }
};

std::vector<double> smoothed_leaf(const std::vector<std::size_t>& class_counts, std::size_t total) {
    std::vector<double> probs(class_counts.size());
    const double denom = static_cast<double>(total + class_counts.size());
    for (std::size_t c = 0; c < class_counts.size(); ++c) {
        probs[c] = (static_cast<double>(class_counts[c]) + 1.0) / denom;
    }
    return probs;
}

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();  // weighted child Gini
};

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    double sum_sq = 0.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

class TreeBuilder {
  public:
    TreeBuilder(const Dataset& data, std::size_t depth_limit, std::size_t min_leaf)
        : data_(data), depth_limit_(depth_limit), min_leaf_(min_leaf) {}

    std::unique_ptr<TreeNode> build(std::vector<std::size_t> rows, std::size_t depth) {
        std::vector<std::size_t> counts(data_.num_classes(), 0);
        for (std::size_t r : rows) ++counts[data_.labels[r]];

        const bool pure = std::count(counts.begin(), counts.end(), std::size_t{0}) + 1 ==
                          static_cast<long>(counts.size());
        auto node = std::make_unique<TreeNode>();
        if (depth >= depth_limit_ || pure || rows.size() < 2 * min_leaf_) {
            node->leaf_probs = smoothed_leaf(counts, rows.size());
            return node;
        }

        const SplitChoice split = best_split(rows, counts);
        if (!split.found) {
            node->leaf_probs = smoothed_leaf(counts, rows.size());
            return node;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            (data_.features[r][split.feature] <= split.threshold ? left_rows : right_rows)
                .push_back(r);
        }
        node->feature = split.feature;
        node->threshold = split.threshold;
        node->left = build(std::move(left_rows), depth + 1);
        node->right = build(std::move(right_rows), depth + 1);
        return node;
    }

  private:
    SplitChoice best_split(const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& total_counts) const {
        const std::size_t n = rows.size();
        const double parent_impurity = gini(total_counts, n);
        SplitChoice best;

        std::vector<std::size_t> sorted(rows);
        for (std::size_t f = 0; f < data_.num_features(); ++f) {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                if (data_.features[a][f] != data_.features[b][f]) {
                    return data_.features[a][f] < data_.features[b][f];
                }
                return a < b;
            });
            std::vector<std::size_t> left_counts(data_.num_classes(), 0);
            std::size_t left_total = 0;
            for (std::size_t pos = 0; pos + 1 < n; ++pos) {
                ++left_counts[data_.labels[sorted[pos]]];
                ++left_total;
                const double here = data_.features[sorted[pos]][f];
                const double next = data_.features[sorted[pos + 1]][f];
                if (here == next) continue;
                if (left_total < min_leaf_ || n - left_total < min_leaf_) continue;

                std::vector<std::size_t> right_counts(data_.num_classes());
                for (std::size_t c = 0; c < right_counts.size(); ++c) {
                    right_counts[c] = total_counts[c] - left_counts[c];
                }
                const double weighted =
                    (static_cast<double>(left_total) * gini(left_counts, left_total) +
                     static_cast<double>(n - left_total) * gini(right_counts, n - left_total)) /
                    static_cast<double>(n);
                // Strictly-better comparison plus ascending scan order gives
                // the lowest-feature, lowest-threshold tie-break.
                if (weighted < best.impurity && weighted < parent_impurity - 1e-12) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = 0.5 * (here + next);
                    best.impurity = weighted;
                }
            }
        }
        return best;
    }

    const Dataset& data_;
    std::size_t depth_limit_;
    std::size_t min_leaf_;
};

class BaggedTreeProvider : public BeliefProvider {
  public:
    BaggedTreeProvider(std::unique_ptr<TreeNode> root, std::size_t num_features,
                       std::size_t num_classes)
        : root_(std::move(root)), num_features_(num_features), num_classes_(num_classes) {}

    SimplexVec predict(std::span<const double> features) const override {
        if (features.size() != num_features_) {
            throw UsageError("tree expects " + std::to_string(num_features_) + " features, got " +
                             std::to_string(features.size()));
        }
        const TreeNode* node = root_.get();
        while (!node->is_leaf()) {
            node = features[node->feature] <= node->threshold ? node->left.get()
                                                              : node->right.get();
        }
        return normalize_simplex(node->leaf_probs);
    }

    std::size_t num_features() const override { return num_features_; }
    std::size_t num_classes() const override { return num_classes_; }

  private:
    std::unique_ptr<TreeNode> root_;
    std::size_t num_features_;
    std::size_t num_classes_;
};

class GaussianNbProvider : public BeliefProvider {
  public:
    GaussianNbProvider(std::vector<double> log_priors, std::vector<std::vector<double>> means,
                       std::vector<std::vector<double>> variances, std::size_t num_features)
        : log_priors_(std::move(log_priors)),
          means_(std::move(means)),
          variances_(std::move(variances)),
          num_features_(num_features) {}

    SimplexVec predict(std::span<const double> features) const override {
        if (features.size() != num_features_) {
            throw UsageError("model expects " + std::to_string(num_features_) +
                             " features, got " + std::to_string(features.size()));
        }
        std::vector<double> log_post(log_priors_.size());
        for (std::size_t c = 0; c < log_post.size(); ++c) {
            double lp = log_priors_[c];
            if (std::isfinite(lp)) {
                for (std::size_t f = 0; f < num_features_; ++f) {
                    const double var = variances_[c][f];
                    const double diff = features[f] - means_[c][f];
                    lp -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
                }
            }
            log_post[c] = lp;
        }
        const double peak = *std::max_element(log_post.begin(), log_post.end());
        std::vector<double> post(log_post.size());
        for (std::size_t c = 0; c < post.size(); ++c) {
            post[c] = std::isfinite(log_post[c]) ? std::exp(log_post[c] - peak) : 0.0;
        }
        return normalize_simplex(post);
    }

    std::size_t num_features() const override { return num_features_; }
    std::size_t num_classes() const override { return log_priors_.size(); }

  private:
    std::vector<double> log_priors_;
    std::vector<std::vector<double>> means_;      // class x feature
    std::vector<std::vector<double>> variances_;  // class x feature
    std::size_t num_features_;
};

}  // namespace

BeliefProviderPtr make_constant_provider(SimplexVec belief) {
    return std::make_shared<ConstantProvider>(std::move(belief));
}

BeliefProviderPtr train_bagged_tree(const Dataset& train, std::size_t depth_limit,
                                    std::size_t min_leaf, std::uint64_t seed) {
    train.validate();
    if (depth_limit < 1 || min_leaf < 1) {
        throw ValidationError("depth limit and min leaf size must be at least 1");
    }

    Dataset sample;
    sample.feature_names = train.feature_names;
    sample.class_names = train.class_names;
    Rng rng(seed);
    sample.features.reserve(train.size());
    sample.labels.reserve(train.size());
    for (std::size_t n = 0; n < train.size(); ++n) {
        const std::size_t pick = static_cast<std::size_t>(rng.bounded(train.size()));
        sample.features.push_back(train.features[pick]);
        sample.labels.push_back(train.labels[pick]);
    }

    std::vector<std::size_t> rows(sample.size());
    for (std::size_t n = 0; n < rows.size(); ++n) rows[n] = n;
    TreeBuilder builder(sample, depth_limit, min_leaf);
    auto root = builder.build(std::move(rows), 0);
    return std::make_shared<BaggedTreeProvider>(std::move(root), train.num_features(),
                                                train.num_classes());
}

BeliefProviderPtr train_gaussian_nb(const Dataset& train, double var_floor) {
    train.validate();
    if (!(var_floor > 0.0)) {
        throw ValidationError("variance floor must be positive");
    }
    const std::size_t classes = train.num_classes();
    const std::size_t features = train.num_features();

    std::vector<std::size_t> counts(classes, 0);
    std::vector<std::vector<double>> means(classes, std::vector<double>(features, 0.0));
    std::vector<std::vector<double>> variances(classes, std::vector<double>(features, 0.0));
    for (std::size_t n = 0; n < train.size(); ++n) {
        const std::size_t c = train.labels[n];
        ++counts[c];
        for (std::size_t f = 0; f < features; ++f) {
            means[c][f] += train.features[n][f];
        }
    }
    for (std::size_t c = 0; c < classes; ++c) {
        if (counts[c] == 0) continue;
        for (std::size_t f = 0; f < features; ++f) {
            means[c][f] /= static_cast<double>(counts[c]);
        }
    }
    for (std::size_t n = 0; n < train.size(); ++n) {
        const std::size_t c = train.labels[n];
        for (std::size_t f = 0; f < features; ++f) {
            const double diff = train.features[n][f] - means[c][f];
            variances[c][f] += diff * diff;
        }
    }
    std::vector<double> log_priors(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t f = 0; f < features; ++f) {
            const double var =
                counts[c] > 0 ? variances[c][f] / static_cast<double>(counts[c]) : 0.0;
            variances[c][f] = std::max(var, var_floor);
        }
        log_priors[c] = counts[c] > 0 ? std::log(static_cast<double>(counts[c]) /
                                                 static_cast<double>(train.size()))
                                      : -std::numeric_limits<double>::infinity();
    }
    return std::make_shared<GaussianNbProvider>(std::move(log_priors), std::move(means),
                                                std::move(variances), features);
}

BeliefMatrix predict_beliefs(const std::vector<BeliefProviderPtr>& providers,
                             const Dataset& instances) {
    if (providers.empty()) {
        throw ValidationError("need at least one provider");
    }
    for (const auto& provider : providers) {
        if (provider->num_features() != 0 && provider->num_features() != instances.num_features()) {
            throw UsageError("provider expects " + std::to_string(provider->num_features()) +
                             " features, dataset has " +
                             std::to_string(instances.num_features()));
        }
    }
    std::vector<SimplexVec> rows;
    rows.reserve(providers.size() * instances.size());
    for (const auto& provider : providers) {
        for (std::size_t n = 0; n < instances.size(); ++n) {
            rows.push_back(clip_belief(provider->predict(instances.features[n]), kBeliefFloor));
        }
    }
    return BeliefMatrix(providers.size(), instances.size(), std::move(rows));
}

}  // namespace mlmarket
