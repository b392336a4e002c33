#pragma once

#include <array>
#include <span>
#include <vector>

#include "evofs/dataset.hpp"
#include "evofs/mask.hpp"

namespace evofs {

struct ConfusionCounts {
    std::vector<long long> true_positive;
    std::vector<long long> false_positive;
    std::vector<long long> false_negative;

    explicit ConfusionCounts(std::size_t class_count)
        : true_positive(class_count, 0), false_positive(class_count, 0), false_negative(class_count, 0) {}

    long long evaluated_queries() const {
        long long n = 0;
        for (std::size_t c = 0; c < true_positive.size(); ++c) n += true_positive[c] + false_negative[c];
        return n;
    }
};

// Both objectives minimized and rescaled to [0,1]. per_class_f1 is aligned
// with the dataset's class_ids order.
struct ObjectiveVector {
    double feature_fraction = 0.0;
    double retrieval_error = 0.0;
    int raw_feature_count = 0;
    std::vector<double> per_class_f1;

    std::array<double, 2> objectives() const { return {feature_fraction, retrieval_error}; }
};

// precision = TP/(TP+FP), recall = TP/(TP+FN); 0 when a denominator is 0
std::pair<double, double> precision_recall(const ConfusionCounts& counts, int cls);

// harmonic mean; 0 when precision + recall == 0
double f1_score(double precision, double recall);

// Majority label among the k nearest training rows by Euclidean distance.
// Distance ties go to the lower row index; vote ties to the class of the
// nearest neighbor among the tied classes. Uses min(k, train size) rows.
int knn_predict(const std::vector<std::vector<double>>& train_rows,
                const std::vector<int>& train_labels,
                const std::vector<double>& query, int k);

// Precomputed retrieval context: query rows of one split classified against
// the train split of a fixed dataset. Immutable, safe to share across
// threads; evaluate() is pure.
class RetrievalEvaluator {
public:
    RetrievalEvaluator(const FeatureDataset& ds, int k, Split query_split);

    ObjectiveVector evaluate(const Mask& mask, int stage_dim) const;

    // OpenMP-parallel kernel over independent masks. Output slot i is
    // exactly evaluate(masks[i], stage_dim).
    std::vector<ObjectiveVector> evaluate_batch(std::span<const Mask> masks, int stage_dim) const;

    const FeatureDataset& dataset() const { return ds_; }
    std::size_t query_count() const { return query_rows_.size(); }
    std::size_t train_count() const { return train_rows_.size(); }
    int k() const { return k_; }

private:
    int predict(const std::vector<int>& selected, std::size_t query_row) const;

    const FeatureDataset& ds_;
    int k_;
    std::vector<std::size_t> train_rows_;
    std::vector<std::size_t> query_rows_;
    std::vector<int> train_class_;  // class index per train row, in train_rows_ order
};

// One-shot convenience wrapper around RetrievalEvaluator.
ObjectiveVector evaluate_mask(const FeatureDataset& ds, const Mask& mask, int k,
                              Split query_split, int stage_dim);

}  // namespace evofs
