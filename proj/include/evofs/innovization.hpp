#pragma once

#include <string>
#include <vector>

#include "evofs/dataset.hpp"
#include "evofs/moea.hpp"

namespace evofs {

// Coarse-stage fronts from R independent runs, plus the fingerprints of the
// inputs that produced them.
struct RunArchive {
    std::vector<ParetoFront> fronts;
    std::string dataset_fingerprint;
    std::string config_fingerprint;

    int stage_dim() const;
    void validate() const;  // non-empty, shared stage_dim, distinct run_ids
};

// Per-feature prominence scores aggregated over the archive. top_order
// sorts features by score descending, ties broken by ascending index, so
// zero-score features trail in index order.
struct FreqHistogram {
    std::vector<double> scores;
    int run_count = 0;
    std::vector<int> top_order;

    int nonzero_count() const;
};

// Score of one feature: sum over runs containing it of (1 + Fr/R), where Fr
// is the number of distinct subsets on that run's front selecting the
// feature and R is the archive's run count.
double freq_score(const RunArchive& archive, int feature);

FreqHistogram build_histogram(const RunArchive& archive);

// First nff entries of top_order. When nff exceeds the number of
// nonzero-score features, zero-score features are admitted by index order.
std::vector<int> top_features(const FreqHistogram& h, int nff);

// Fine stage: re-optimize over the top-nff frequent features with the box
// constraint vacuous (CF = NFF) and feature fractions scaled by NFF.
// Returned masks are re-expressed in original feature indices.
ParetoFront run_fine_stage(const FeatureDataset& ds, const RunArchive& archive, int nff,
                           EngineConfig cfg, int run_id = 0);

// Same search on an explicit feature subset (e.g. a persisted top-NFF
// list). The subset is canonicalized to ascending index order first.
ParetoFront run_fine_on_features(const FeatureDataset& ds, std::vector<int> features,
                                 EngineConfig cfg, int run_id = 0);

// Baseline subset: the `size` highest-scoring features as a mask over the
// original feature space.
Mask ordered_selection(const FreqHistogram& h, int size);

}  // namespace evofs
