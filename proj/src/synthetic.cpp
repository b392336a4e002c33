#include "evofs/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "evofs/errors.hpp"
#include "evofs/rng.hpp"

namespace evofs {

void SyntheticSpec::validate() const {
    if (feature_count < 1) throw ValidationError("synthetic: feature_count must be >= 1");
    if (informative_count < 1 || informative_count > feature_count)
        throw ValidationError("synthetic: informative_count must be in [1, feature_count]");
    if (class_count < 2) throw ValidationError("synthetic: class_count must be >= 2");
    for (int n : samples_per_split) {
        if (n < 0) throw ValidationError("synthetic: per-split sample counts must be >= 0");
    }
    if (samples_per_split[0] < 1) throw ValidationError("synthetic: train split needs at least one sample per class");
    if (separation <= 0.0) throw ValidationError("synthetic: separation must be > 0");
    if (noise_sd <= 0.0) throw ValidationError("synthetic: noise_sd must be > 0");
}

SyntheticDataset synthesize(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    // Draw order is fixed: informative indices first, then row values in
    // split-major, class-major, sample order, each row column by column.
    std::vector<int> informative = rng.sample_indices(spec.feature_count, spec.informative_count);
    std::sort(informative.begin(), informative.end());
    std::vector<char> is_informative(static_cast<std::size_t>(spec.feature_count), 0);
    for (int f : informative) is_informative[static_cast<std::size_t>(f)] = 1;

    const std::size_t d = static_cast<std::size_t>(spec.feature_count);
    std::vector<double> values;
    std::vector<std::string> labels;
    std::vector<Split> splits;

    constexpr Split split_order[] = {Split::train, Split::validation, Split::test};
    for (int s = 0; s < 3; ++s) {
        for (int c = 0; c < spec.class_count; ++c) {
            char name[16];
            std::snprintf(name, sizeof(name), "c%03d", c);
            for (int i = 0; i < spec.samples_per_split[static_cast<std::size_t>(s)]; ++i) {
                for (std::size_t f = 0; f < d; ++f) {
                    const double center = is_informative[f] ? c * spec.separation : 0.0;
                    values.push_back(rng.normal(center, spec.noise_sd));
                }
                labels.emplace_back(name);
                splits.push_back(split_order[s]);
            }
        }
    }

    FeatureDataset ds(std::move(values), d, std::move(labels), std::move(splits));
    return SyntheticDataset{std::move(ds), std::move(informative)};
}

}  // namespace evofs
