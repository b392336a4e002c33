#include "evofs/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evofs/errors.hpp"

namespace evofs {
namespace reference {

namespace {

std::vector<std::vector<double>> masked_rows(const FeatureDataset& ds,
                                             const std::vector<std::size_t>& rows,
                                             const std::vector<int>& selected) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        const auto full = ds.row(r);
        std::vector<double> picked;
        picked.reserve(selected.size());
        for (int f : selected) picked.push_back(full[static_cast<std::size_t>(f)]);
        out.push_back(std::move(picked));
    }
    return out;
}

int predict_from_matrix(const std::vector<double>& distance_row, const std::vector<int>& labels,
                        std::size_t class_count, int k) {
    std::vector<int> order(distance_row.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (distance_row[static_cast<std::size_t>(a)] != distance_row[static_cast<std::size_t>(b)])
            return distance_row[static_cast<std::size_t>(a)] < distance_row[static_cast<std::size_t>(b)];
        return a < b;
    });
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());

    std::vector<int> votes(class_count, 0);
    for (std::size_t i = 0; i < kk; ++i) ++votes[static_cast<std::size_t>(labels[static_cast<std::size_t>(order[i])])];
    int best = 0;
    for (int v : votes) best = std::max(best, v);
    for (std::size_t i = 0; i < kk; ++i) {
        const int cls = labels[static_cast<std::size_t>(order[i])];
        if (votes[static_cast<std::size_t>(cls)] == best) return cls;
    }
    return labels[static_cast<std::size_t>(order[0])];
}

}  // namespace

int knn_predict(const std::vector<std::vector<double>>& train_rows, const std::vector<int>& train_labels,
                const std::vector<double>& query, int k) {
    if (train_rows.empty()) throw std::invalid_argument("reference knn: empty training set");
    if (k < 1) throw std::invalid_argument("reference knn: k must be >= 1");
    if (query.empty()) throw std::invalid_argument("reference knn: mask selects no features");

    std::vector<double> dist(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
        double acc = 0.0;
        for (std::size_t f = 0; f < query.size(); ++f) {
            const double diff = train_rows[i][f] - query[f];
            acc += diff * diff;
        }
        dist[i] = acc;
    }
    int max_label = 0;
    for (int l : train_labels) max_label = std::max(max_label, l);
    return predict_from_matrix(dist, train_labels, static_cast<std::size_t>(max_label) + 1, k);
}

ObjectiveVector evaluate_mask(const FeatureDataset& ds, const Mask& mask, int k, Split query_split,
                              int stage_dim) {
    if (mask.size() != ds.feature_count())
        throw std::invalid_argument("reference: mask length does not match feature count");
    const std::vector<int> selected = selected_indices(mask);
    if (selected.empty()) throw std::invalid_argument("reference: mask selects no features");

    const auto train_idx = ds.rows_with_split(Split::train);
    const auto query_idx = ds.rows_with_split(query_split);
    if (train_idx.empty()) throw ValidationError("reference: train split is empty");
    if (query_idx.empty()) throw ValidationError("reference: query split is empty");

    const auto train = masked_rows(ds, train_idx, selected);
    const auto queries = masked_rows(ds, query_idx, selected);
    std::vector<int> train_labels;
    train_labels.reserve(train_idx.size());
    for (std::size_t r : train_idx) train_labels.push_back(ds.class_index(r));

    // full query-by-train distance matrix
    std::vector<std::vector<double>> distances(queries.size(), std::vector<double>(train.size(), 0.0));
    for (std::size_t q = 0; q < queries.size(); ++q) {
        for (std::size_t t = 0; t < train.size(); ++t) {
            double acc = 0.0;
            for (std::size_t f = 0; f < selected.size(); ++f) {
                const double diff = train[t][f] - queries[q][f];
                acc += diff * diff;
            }
            distances[q][t] = acc;
        }
    }

    ConfusionCounts counts(ds.class_count());
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const int truth = ds.class_index(query_idx[q]);
        const int predicted = predict_from_matrix(distances[q], train_labels, ds.class_count(), k);
        if (predicted == truth) {
            ++counts.true_positive[static_cast<std::size_t>(truth)];
        } else {
            ++counts.false_positive[static_cast<std::size_t>(predicted)];
            ++counts.false_negative[static_cast<std::size_t>(truth)];
        }
    }

    ObjectiveVector obj;
    obj.raw_feature_count = static_cast<int>(selected.size());
    obj.feature_fraction = static_cast<double>(selected.size()) / static_cast<double>(stage_dim);
    obj.per_class_f1.resize(ds.class_count());
    double sum = 0.0;
    for (std::size_t c = 0; c < ds.class_count(); ++c) {
        const auto [p, r] = precision_recall(counts, static_cast<int>(c));
        obj.per_class_f1[c] = f1_score(p, r);
        sum += obj.per_class_f1[c];
    }
    obj.retrieval_error = 1.0 - sum / static_cast<double>(ds.class_count());
    return obj;
}

}  // namespace reference
}  // namespace evofs
