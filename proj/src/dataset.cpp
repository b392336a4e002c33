#include "evofs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "evofs/errors.hpp"

namespace evofs {

Split parse_split(const std::string& tag) {
    if (tag == "train") return Split::train;
    if (tag == "validation") return Split::validation;
    if (tag == "test") return Split::test;
    throw ValidationError("unknown split tag '" + tag + "' (expected train, validation or test)");
}

const std::string& to_string(Split s) {
    static const std::string names[] = {"train", "validation", "test"};
    return names[static_cast<int>(s)];
}

FeatureDataset::FeatureDataset(std::vector<double> values, std::size_t feature_count,
                               std::vector<std::string> labels, std::vector<Split> splits,
                               std::vector<std::string> groups)
    : values_(std::move(values)), feature_count_(feature_count), splits_(std::move(splits)),
      groups_(std::move(groups)) {
    const std::size_t rows = labels.size();
    if (feature_count_ == 0) throw ValidationError("dataset needs at least one feature column");
    if (rows == 0) throw ValidationError("dataset needs at least one row");
    if (values_.size() != rows * feature_count_)
        throw ValidationError("value buffer size does not match rows x features");
    if (splits_.size() != rows) throw ValidationError("split count does not match row count");
    if (!groups_.empty() && groups_.size() != rows)
        throw ValidationError("group count does not match row count");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw ValidationError("non-finite feature value at row " + std::to_string(i / feature_count_ + 1) +
                                  ", column f" + std::to_string(i % feature_count_));
    }
    auto csv_safe = [](const std::string& s) {
        return s.find_first_of(",\n\r") == std::string::npos;
    };
    for (const auto& l : labels) {
        if (l.empty() || !csv_safe(l))
            throw ValidationError("label '" + l + "' is empty or contains CSV metacharacters");
    }
    for (const auto& g : groups_) {
        if (!csv_safe(g)) throw ValidationError("group id '" + g + "' contains CSV metacharacters");
    }

    std::set<std::string> distinct(labels.begin(), labels.end());
    class_ids_.assign(distinct.begin(), distinct.end());  // sorted by construction
    std::map<std::string, int> index;
    for (std::size_t c = 0; c < class_ids_.size(); ++c) index[class_ids_[c]] = static_cast<int>(c);
    class_indices_.reserve(rows);
    for (const auto& l : labels) class_indices_.push_back(index[l]);
}

std::vector<std::size_t> FeatureDataset::rows_with_split(Split s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < splits_.size(); ++i) {
        if (splits_[i] == s) out.push_back(i);
    }
    return out;
}

FeatureDataset FeatureDataset::project(const std::vector<int>& feature_indices) const {
    if (feature_indices.empty()) throw ValidationError("projection needs at least one feature");
    for (int f : feature_indices) {
        if (f < 0 || static_cast<std::size_t>(f) >= feature_count_)
            throw ValidationError("projection index " + std::to_string(f) + " out of range");
    }
    const std::size_t rows = row_count();
    std::vector<double> values;
    values.reserve(rows * feature_indices.size());
    for (std::size_t r = 0; r < rows; ++r) {
        const auto src = row(r);
        for (int f : feature_indices) values.push_back(src[static_cast<std::size_t>(f)]);
    }
    std::vector<std::string> labels;
    labels.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) labels.push_back(label(r));
    return FeatureDataset(std::move(values), feature_indices.size(), std::move(labels), splits_, groups_);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_feature(const std::string& cell, std::size_t data_row, const std::string& column) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ParseError("row " + std::to_string(data_row) + ", column " + column +
                         ": cannot parse feature value '" + cell + "'");
    }
    return v;
}

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

FeatureDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty dataset file: " + path.string());
    const auto header = split_line(line);

    int label_col = -1, split_col = -1, group_col = -1;
    std::vector<int> feature_cols;
    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == schema.label_column) {
            if (label_col >= 0) throw ValidationError("duplicate label column in header");
            label_col = static_cast<int>(c);
        } else if (header[c] == schema.split_column) {
            if (split_col >= 0) throw ValidationError("duplicate split column in header");
            split_col = static_cast<int>(c);
        } else if (header[c] == schema.group_column) {
            if (group_col >= 0) throw ValidationError("duplicate group column in header");
            group_col = static_cast<int>(c);
        } else {
            feature_cols.push_back(static_cast<int>(c));
            feature_names.push_back(header[c]);
        }
    }
    if (label_col < 0)
        throw ValidationError("header is missing the label column '" + schema.label_column + "'");
    if (feature_cols.empty()) throw ValidationError("header names no feature columns");

    std::vector<double> values;
    std::vector<std::string> labels;
    std::vector<Split> splits;
    std::vector<std::string> groups;
    std::size_t data_row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++data_row;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw ParseError("row " + std::to_string(data_row) + ": expected " +
                             std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
        }
        for (std::size_t i = 0; i < feature_cols.size(); ++i) {
            values.push_back(parse_feature(cells[static_cast<std::size_t>(feature_cols[i])], data_row, feature_names[i]));
        }
        labels.push_back(cells[static_cast<std::size_t>(label_col)]);
        splits.push_back(split_col >= 0 ? parse_split(cells[static_cast<std::size_t>(split_col)]) : Split::train);
        if (group_col >= 0) groups.push_back(cells[static_cast<std::size_t>(group_col)]);
    }
    if (data_row == 0) throw ParseError("dataset file has a header but no rows: " + path.string());

    return FeatureDataset(std::move(values), feature_cols.size(), std::move(labels), std::move(splits),
                          std::move(groups));
}

std::string to_csv(const FeatureDataset& ds) {
    std::string out;
    const std::size_t d = ds.feature_count();
    for (std::size_t f = 0; f < d; ++f) {
        out += "f" + std::to_string(f) + ",";
    }
    out += "label,split";
    if (ds.has_groups()) out += ",group";
    out += "\n";
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
        const auto row = ds.row(r);
        for (std::size_t f = 0; f < d; ++f) {
            format_double(out, row[f]);
            out += ",";
        }
        out += ds.label(r);
        out += ",";
        out += to_string(ds.split(r));
        if (ds.has_groups()) {
            out += ",";
            out += ds.group(r);
        }
        out += "\n";
    }
    return out;
}

void save_csv(const FeatureDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write dataset file: " + path.string());
    out << to_csv(ds);
}

FeatureDataset mean_feature_vectors(const FeatureDataset& ds) {
    if (!ds.has_groups()) throw ValidationError("mean_feature_vectors requires a group id on every row");
    const std::size_t d = ds.feature_count();

    std::vector<std::string> order;  // groups by first appearance
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
        const std::string& g = ds.group(r);
        if (g.empty()) throw ValidationError("row " + std::to_string(r + 1) + " has an empty group id");
        if (index.emplace(g, order.size()).second) order.push_back(g);
    }

    const std::size_t n = order.size();
    std::vector<double> sums(n * d, 0.0);
    std::vector<long long> counts(n, 0);
    std::vector<std::string> labels(n);
    std::vector<Split> splits(n, Split::train);
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
        const std::size_t g = index[ds.group(r)];
        if (counts[g] == 0) {
            labels[g] = ds.label(r);
            splits[g] = ds.split(r);
        } else if (labels[g] != ds.label(r) || splits[g] != ds.split(r)) {
            throw ValidationError("group '" + ds.group(r) + "' mixes labels or splits");
        }
        const auto row = ds.row(r);
        for (std::size_t f = 0; f < d; ++f) sums[g * d + f] += row[f];
        ++counts[g];
    }
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t f = 0; f < d; ++f) sums[g * d + f] /= static_cast<double>(counts[g]);
    }
    return FeatureDataset(std::move(sums), d, std::move(labels), std::move(splits));
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string dataset_fingerprint(const FeatureDataset& ds) { return fnv1a_hex(to_csv(ds)); }

}  // namespace evofs
