#include "mlmarket/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "mlmarket/errors.hpp"
#include "mlmarket/rng.hpp"

namespace mlmarket {

void Dataset::validate() const {
    if (size() < 2) {
        throw ValidationError("dataset needs at least two rows");
    }
    if (labels.size() != size()) {
        throw ValidationError("dataset has " + std::to_string(labels.size()) + " labels for " +
                              std::to_string(size()) + " rows");
    }
    for (const auto& row : features) {
        if (row.size() != num_features()) {
            throw ValidationError("dataset rows differ in feature count");
        }
        for (double x : row) {
            if (!std::isfinite(x)) {
                throw ValidationError("dataset contains a non-finite feature");
            }
        }
    }
    for (std::size_t label : labels) {
        if (label >= num_classes()) {
            throw ValidationError("label index " + std::to_string(label) + " out of range");
        }
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) {
        // Trim surrounding whitespace.
        const auto begin = field.find_first_not_of(" \t\r");
        const auto end = field.find_last_not_of(" \t\r");
        fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
    }
    if (!line.empty() && line.back() == ',') {
        fields.push_back("");
    }
    return fields;
}

bool parse_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

CsvLoadResult load_csv_dataset(const std::filesystem::path& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open dataset file: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("dataset file is empty: " + path.string());
    }
    const std::vector<std::string> header = split_csv_line(line);
    std::size_t label_index = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == label_column) {
            label_index = j;
            break;
        }
    }
    if (label_index == header.size()) {
        throw ParseError("label column '" + label_column + "' not found in header");
    }

    CsvLoadResult result;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != label_index) result.data.feature_names.push_back(header[j]);
    }

    std::vector<std::string> raw_labels;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_number) + " has " +
                             std::to_string(fields.size()) + " fields, header has " +
                             std::to_string(header.size()));
        }
        std::vector<double> row;
        row.reserve(header.size() - 1);
        bool ok = !fields[label_index].empty();
        for (std::size_t j = 0; j < fields.size() && ok; ++j) {
            if (j == label_index) continue;
            double value = 0.0;
            if (parse_number(fields[j], value)) {
                row.push_back(value);
            } else {
                ok = false;
            }
        }
        if (!ok) {
            ++result.rejected_rows;
            continue;
        }
        result.data.features.push_back(std::move(row));
        raw_labels.push_back(fields[label_index]);
    }

    if (result.data.features.empty()) {
        throw ParseError("no usable rows in dataset file: " + path.string());
    }

    // Deterministic class indexing: sorted distinct label values.
    std::vector<std::string> classes(raw_labels);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    result.data.class_names = classes;
    std::map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < classes.size(); ++c) index[classes[c]] = c;
    result.data.labels.reserve(raw_labels.size());
    for (const std::string& label : raw_labels) {
        result.data.labels.push_back(index.at(label));
    }

    result.data.validate();
    return result;
}

Dataset make_gaussian_blobs(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.classes < 2 || spec.features < 1 || spec.items < 2) {
        throw ValidationError("synthetic spec needs >= 2 classes, >= 1 feature, >= 2 items");
    }
    if (!(spec.noise > 0.0)) {
        throw ValidationError("synthetic noise must be positive");
    }
    Dataset data;
    for (std::size_t j = 0; j < spec.features; ++j) {
        data.feature_names.push_back("x" + std::to_string(j));
    }
    for (std::size_t c = 0; c < spec.classes; ++c) {
        data.class_names.push_back("class_" + std::to_string(c));
    }

    Rng rng(seed);
    data.features.reserve(spec.items);
    data.labels.reserve(spec.items);
    for (std::size_t n = 0; n < spec.items; ++n) {
        const std::size_t label = static_cast<std::size_t>(rng.bounded(spec.classes));
        const double angle =
            2.0 * std::numbers::pi * static_cast<double>(label) / static_cast<double>(spec.classes);
        std::vector<double> row(spec.features);
        for (std::size_t j = 0; j < spec.features; ++j) {
            double mean = 0.0;
            if (j == 0) mean = spec.separation * std::cos(angle);
            if (j == 1) mean = spec.separation * std::sin(angle);
            row[j] = mean + spec.noise * rng.normal();
        }
        data.features.push_back(std::move(row));
        data.labels.push_back(label);
    }
    return data;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double train_fraction,
                                          std::size_t max_items, std::uint64_t seed) {
    data.validate();
    if (data.size() < 3) {
        throw ValidationError("need at least three rows to split");
    }
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw ValidationError("train fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> order(data.size());
    for (std::size_t n = 0; n < order.size(); ++n) order[n] = n;
    Rng rng(seed);
    for (std::size_t n = order.size() - 1; n > 0; --n) {
        std::swap(order[n], order[rng.bounded(n + 1)]);
    }

    const std::size_t kept = std::min(max_items, order.size());
    const std::size_t train_count =
        static_cast<std::size_t>(train_fraction * static_cast<double>(kept));
    if (train_count == 0 || train_count == kept) {
        throw ValidationError("split would leave an empty train or test side");
    }

    Dataset train, test;
    train.feature_names = test.feature_names = data.feature_names;
    train.class_names = test.class_names = data.class_names;
    for (std::size_t n = 0; n < kept; ++n) {
        Dataset& side = n < train_count ? train : test;
        side.features.push_back(data.features[order[n]]);
        side.labels.push_back(data.labels[order[n]]);
    }
    return {std::move(train), std::move(test)};
}

}  // namespace mlmarket
