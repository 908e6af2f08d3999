#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mlmarket {

/// A classification dataset: dense numeric features and zero-based labels.
struct Dataset {
    std::vector<std::vector<double>> features;  // N x F
    std::vector<std::size_t> labels;            // N, each < num_classes()
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;

    std::size_t size() const { return features.size(); }
    std::size_t num_features() const { return feature_names.size(); }
    std::size_t num_classes() const { return class_names.size(); }

    void validate() const;
};

struct CsvLoadResult {
    Dataset data;
    std::size_t rejected_rows = 0;  // rows dropped for missing/non-numeric fields
};

/// Loads a CSV with a header row. `label_column` names the class column; all
/// other columns must be numeric and become features. Rows with empty or
/// non-numeric feature fields are dropped and counted. Class names are the
/// sorted distinct label values.
CsvLoadResult load_csv_dataset(const std::filesystem::path& path, const std::string& label_column);

struct SyntheticSpec {
    std::size_t classes = 3;
    std::size_t features = 2;
    std::size_t items = 3200;
    double separation = 2.0;  // distance of class means from the origin
    double noise = 1.0;       // within-class standard deviation
};

/// Class-conditional Gaussian blobs with means spread on a circle (first two
/// feature dimensions; any further dimensions are pure noise).
Dataset make_gaussian_blobs(const SyntheticSpec& spec, std::uint64_t seed);

/// Seeded permutation, truncation to max_items, then a train/test split at
/// floor(train_fraction * N). The two sides partition the truncated set
/// exactly. Throws ValidationError if either side would be empty.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double train_fraction,
                                          std::size_t max_items, std::uint64_t seed);

}  // namespace mlmarket
