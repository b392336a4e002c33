#pragma once

#include "evofs/retrieval.hpp"

namespace evofs {
namespace reference {

// Serial reference implementation of the retrieval objective: materializes
// the full query-by-train distance matrix, fully sorts every row, no
// pruning. Kept as an independent code path for tests and as the baseline
// side of the evaluator benchmark. Must agree exactly with
// RetrievalEvaluator::evaluate.
ObjectiveVector evaluate_mask(const FeatureDataset& ds, const Mask& mask, int k,
                              Split query_split, int stage_dim);

int knn_predict(const std::vector<std::vector<double>>& train_rows,
                const std::vector<int>& train_labels,
                const std::vector<double>& query, int k);

}  // namespace reference
}  // namespace evofs
