#pragma once

#include <string>
#include <vector>

#include "evofs/dataset.hpp"
#include "evofs/innovization.hpp"
#include "evofs/moea.hpp"

namespace evofs {

// The front member with minimum retrieval error; ties go to fewer features,
// then to the lexicographically smallest mask (bit 0 first).
const Individual& best_subset(const ParetoFront& front);

// |a ∩ b| / |a ∪ b| on feature index sets; both-empty input is rejected.
double jaccard(const std::vector<int>& a, const std::vector<int>& b);

// Mean pairwise Jaccard similarity over L >= 2 subsets.
double stability(const std::vector<std::vector<int>>& subsets);

struct StabilityReport {
    Stage stage = Stage::coarse;
    std::vector<std::vector<int>> subsets;
    std::vector<std::vector<double>> pairwise_jaccard;
    double s_index = 0.0;
};

StabilityReport stability_report(Stage stage, std::vector<std::vector<int>> subsets);

struct DecisionPoint {
    int raw_feature_count = 0;
    double class_error = 0.0;
    std::size_t member = 0;  // index into the originating front's solutions
};

// Per-class Pareto decomposition: every front member re-evaluated on the
// given split and projected to (feature count, per-class error), keeping
// the nondominated subset per class.
struct DecisionSpace {
    std::vector<std::string> class_ids;
    std::vector<std::vector<DecisionPoint>> per_class;
};

DecisionSpace decision_space(const ParetoFront& front, const FeatureDataset& ds, Split split, int k);

struct FeatureRankEntry {
    int feature = 0;
    double singleton_f1 = 0.0;
    double rank_fraction = 0.0;  // share of front features with strictly lower singleton F1
    double f1_difference = 0.0;  // singleton F1 minus the front-feature mean
};

// Table-style comparison of each top frequent feature against the distinct
// features appearing on the front, by single-feature retrieval F1.
std::vector<FeatureRankEntry> single_feature_rank(const FreqHistogram& h, const ParetoFront& front,
                                                  const FeatureDataset& ds, int top_n, Split split,
                                                  int k);

enum class WilcoxonTail { two_sided, greater, less };

// Paired signed-rank test on a - b. Zero differences are dropped; all-zero
// input degenerates to p = 1. Exact sign enumeration for n <= 12, normal
// approximation with tie correction and continuity correction above that.
double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                            WilcoxonTail tail = WilcoxonTail::two_sided);

}  // namespace evofs
