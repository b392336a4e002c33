#include "evofs/retrieval.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evofs/errors.hpp"

namespace evofs {

std::pair<double, double> precision_recall(const ConfusionCounts& counts, int cls) {
    const auto c = static_cast<std::size_t>(cls);
    const double tp = static_cast<double>(counts.true_positive[c]);
    const double fp = static_cast<double>(counts.false_positive[c]);
    const double fn = static_cast<double>(counts.false_negative[c]);
    const double precision = (tp + fp) > 0.0 ? tp / (tp + fp) : 0.0;
    const double recall = (tp + fn) > 0.0 ? tp / (tp + fn) : 0.0;
    return {precision, recall};
}

double f1_score(double precision, double recall) {
    const double denom = precision + recall;
    return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

namespace {

struct Neighbor {
    double dist2;
    int index;

    bool operator<(const Neighbor& o) const {
        return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
    }
};

// Majority vote over neighbors sorted by (distance, index); a vote tie goes
// to the class of the nearest neighbor among the tied classes.
int vote(const std::vector<Neighbor>& nearest, const std::vector<int>& labels_by_position,
         std::size_t class_count) {
    std::vector<int> votes(class_count, 0);
    for (const auto& nb : nearest) ++votes[static_cast<std::size_t>(labels_by_position[static_cast<std::size_t>(nb.index)])];
    int best_count = 0;
    for (int v : votes) best_count = std::max(best_count, v);
    for (const auto& nb : nearest) {
        const int cls = labels_by_position[static_cast<std::size_t>(nb.index)];
        if (votes[static_cast<std::size_t>(cls)] == best_count) return cls;
    }
    return labels_by_position[static_cast<std::size_t>(nearest.front().index)];  // unreachable
}

// Keeps the k smallest (dist2, index) pairs while scanning candidates in
// ascending index order.
class TopK {
public:
    explicit TopK(std::size_t k) : k_(k) { heap_.reserve(k); }

    double bound() const {
        return heap_.size() < k_ ? std::numeric_limits<double>::infinity() : heap_.front().dist2;
    }

    void push(double dist2, int index) {
        if (heap_.size() < k_) {
            heap_.push_back({dist2, index});
            std::push_heap(heap_.begin(), heap_.end());
        } else if (Neighbor{dist2, index} < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = {dist2, index};
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    std::vector<Neighbor> sorted() && {
        std::sort(heap_.begin(), heap_.end());
        return std::move(heap_);
    }

private:
    std::size_t k_;
    std::vector<Neighbor> heap_;  // max-heap on (dist2, index)
};

}  // namespace

int knn_predict(const std::vector<std::vector<double>>& train_rows, const std::vector<int>& train_labels,
                const std::vector<double>& query, int k) {
    if (train_rows.empty()) throw std::invalid_argument("knn_predict: empty training set");
    if (train_rows.size() != train_labels.size())
        throw std::invalid_argument("knn_predict: label count does not match row count");
    if (k < 1) throw std::invalid_argument("knn_predict: k must be >= 1");
    if (query.empty()) throw std::invalid_argument("knn_predict: mask selects no features");

    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), train_rows.size());
    TopK top(kk);
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
        if (train_rows[i].size() != query.size())
            throw std::invalid_argument("knn_predict: row arity mismatch");
        double acc = 0.0;
        for (std::size_t f = 0; f < query.size(); ++f) {
            const double diff = train_rows[i][f] - query[f];
            acc += diff * diff;
        }
        top.push(acc, static_cast<int>(i));
    }
    const auto nearest = std::move(top).sorted();
    int max_label = 0;
    for (int l : train_labels) max_label = std::max(max_label, l);
    return vote(nearest, train_labels, static_cast<std::size_t>(max_label) + 1);
}

RetrievalEvaluator::RetrievalEvaluator(const FeatureDataset& ds, int k, Split query_split)
    : ds_(ds), k_(k) {
    if (k < 1) throw std::invalid_argument("retrieval: k must be >= 1");
    train_rows_ = ds.rows_with_split(Split::train);
    query_rows_ = ds.rows_with_split(query_split);
    if (train_rows_.empty()) throw ValidationError("retrieval: train split is empty");
    if (query_rows_.empty())
        throw ValidationError("retrieval: query split '" + to_string(query_split) + "' is empty");
    train_class_.reserve(train_rows_.size());
    for (std::size_t r : train_rows_) train_class_.push_back(ds.class_index(r));
}

int RetrievalEvaluator::predict(const std::vector<int>& selected, std::size_t query_row) const {
    const double* base = ds_.values().data();
    const std::size_t d = ds_.feature_count();
    const double* q = base + query_row * d;

    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k_), train_rows_.size());
    TopK top(kk);
    for (std::size_t i = 0; i < train_rows_.size(); ++i) {
        const double* t = base + train_rows_[i] * d;
        const double bound = top.bound();
        double acc = 0.0;
        for (int f : selected) {
            const double diff = t[f] - q[f];
            acc += diff * diff;
            // partial sums only grow; once past the current kth best this
            // row cannot win (equal final distance loses on index anyway)
            if (acc >= bound) break;
        }
        if (acc < bound) top.push(acc, static_cast<int>(i));
    }
    const auto nearest = std::move(top).sorted();
    return vote(nearest, train_class_, ds_.class_count());
}

ObjectiveVector RetrievalEvaluator::evaluate(const Mask& mask, int stage_dim) const {
    if (mask.size() != ds_.feature_count())
        throw std::invalid_argument("retrieval: mask length does not match feature count");
    const std::vector<int> selected = selected_indices(mask);
    if (selected.empty()) throw std::invalid_argument("retrieval: mask selects no features");
    if (stage_dim < 1) throw std::invalid_argument("retrieval: stage_dim must be >= 1");

    ConfusionCounts counts(ds_.class_count());
    for (std::size_t q : query_rows_) {
        const int truth = ds_.class_index(q);
        const int predicted = predict(selected, q);
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
    obj.per_class_f1.resize(ds_.class_count());
    double sum = 0.0;
    for (std::size_t c = 0; c < ds_.class_count(); ++c) {
        const auto [p, r] = precision_recall(counts, static_cast<int>(c));
        obj.per_class_f1[c] = f1_score(p, r);
        sum += obj.per_class_f1[c];
    }
    obj.retrieval_error = 1.0 - sum / static_cast<double>(ds_.class_count());
    return obj;
}

std::vector<ObjectiveVector> RetrievalEvaluator::evaluate_batch(std::span<const Mask> masks,
                                                                int stage_dim) const {
    // validate on the serial path; a throw inside the parallel region would
    // not propagate
    if (stage_dim < 1) throw std::invalid_argument("retrieval: stage_dim must be >= 1");
    for (const Mask& mask : masks) {
        if (mask.size() != ds_.feature_count())
            throw std::invalid_argument("retrieval: mask length does not match feature count");
        if (popcount(mask) < 1) throw std::invalid_argument("retrieval: mask selects no features");
    }
    std::vector<ObjectiveVector> out(masks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(masks.size()); ++i) {
        out[static_cast<std::size_t>(i)] = evaluate(masks[static_cast<std::size_t>(i)], stage_dim);
    }
    return out;
}

ObjectiveVector evaluate_mask(const FeatureDataset& ds, const Mask& mask, int k, Split query_split,
                              int stage_dim) {
    return RetrievalEvaluator(ds, k, query_split).evaluate(mask, stage_dim);
}

}  // namespace evofs
