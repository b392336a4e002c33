#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "evofs/dataset.hpp"

namespace evofs {

// Desk-scale stand-in for precomputed deep-embedding features: a labeled
// Gaussian dataset with a planted set of discriminative columns.
struct SyntheticSpec {
    int feature_count = 64;
    int informative_count = 4;
    int class_count = 2;
    std::array<int, 3> samples_per_split = {20, 10, 10};  // per class: train, validation, test
    double separation = 3.0;
    double noise_sd = 1.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SyntheticDataset {
    FeatureDataset dataset;
    std::vector<int> informative_features;  // ground truth, ascending
};

// Informative columns are drawn around class centers spaced `separation`
// apart; all remaining columns share one zero-centered distribution.
// Bit-identical output for identical spec + seed.
SyntheticDataset synthesize(const SyntheticSpec& spec);

}  // namespace evofs
