#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace evofs {

enum class Split { train, validation, test };

Split parse_split(const std::string& tag);
const std::string& to_string(Split s);

struct CsvSchema {
    std::string label_column = "label";
    std::string split_column = "split";
    std::string group_column = "group";
};

// Immutable sample-by-feature matrix with class labels, split tags and
// optional group ids. Labels are stored as indices into class_ids(), which
// is the lexicographically sorted set of distinct label strings.
class FeatureDataset {
public:
    FeatureDataset(std::vector<double> values, std::size_t feature_count,
                   std::vector<std::string> labels, std::vector<Split> splits,
                   std::vector<std::string> groups = {});

    std::size_t row_count() const { return splits_.size(); }
    std::size_t feature_count() const { return feature_count_; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * feature_count_, feature_count_};
    }
    const std::vector<double>& values() const { return values_; }

    const std::vector<std::string>& class_ids() const { return class_ids_; }
    std::size_t class_count() const { return class_ids_.size(); }
    int class_index(std::size_t row) const { return class_indices_[row]; }
    const std::string& label(std::size_t row) const { return class_ids_[static_cast<std::size_t>(class_indices_[row])]; }

    Split split(std::size_t row) const { return splits_[row]; }
    std::vector<std::size_t> rows_with_split(Split s) const;

    bool has_groups() const { return !groups_.empty(); }
    const std::string& group(std::size_t row) const { return groups_[row]; }

    // Column-subset copy; indices refer to this dataset's features.
    FeatureDataset project(const std::vector<int>& feature_indices) const;

private:
    std::vector<double> values_;  // row-major, row_count x feature_count
    std::size_t feature_count_;
    std::vector<int> class_indices_;
    std::vector<std::string> class_ids_;
    std::vector<Split> splits_;
    std::vector<std::string> groups_;  // empty when absent
};

FeatureDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
void save_csv(const FeatureDataset& ds, const std::filesystem::path& path);
std::string to_csv(const FeatureDataset& ds);

// One output row per group: the arithmetic mean of its member rows. Groups
// appear in order of first occurrence; label and split are inherited and
// must be consistent within each group.
FeatureDataset mean_feature_vectors(const FeatureDataset& ds);

// Content hash (hex) over the canonical CSV serialization; independent of
// the bytes of whichever file the dataset was loaded from.
std::string dataset_fingerprint(const FeatureDataset& ds);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace evofs
