#include "evofs/innovization.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "evofs/errors.hpp"

namespace evofs {

int RunArchive::stage_dim() const {
    validate();
    return static_cast<int>(fronts.front().solutions.front().mask.size());
}

void RunArchive::validate() const {
    if (fronts.empty()) throw ValidationError("archive: no runs");
    std::set<int> run_ids;
    std::size_t dim = 0;
    for (const auto& front : fronts) {
        if (front.solutions.empty()) throw ValidationError("archive: empty front");
        if (!run_ids.insert(front.run_id).second)
            throw ValidationError("archive: duplicate run id " + std::to_string(front.run_id));
        for (const auto& ind : front.solutions) {
            if (dim == 0) dim = ind.mask.size();
            if (ind.mask.size() != dim) throw ValidationError("archive: fronts disagree on stage_dim");
        }
    }
}

int FreqHistogram::nonzero_count() const {
    int n = 0;
    for (double s : scores) {
        if (s > 0.0) ++n;
    }
    return n;
}

namespace {

// distinct-subset membership counts for one front: Fr(r, f)
std::vector<int> subset_counts(const ParetoFront& front, std::size_t dim) {
    std::set<Mask> distinct;
    for (const auto& ind : front.solutions) distinct.insert(ind.mask);
    std::vector<int> fr(dim, 0);
    for (const auto& mask : distinct) {
        for (std::size_t f = 0; f < dim; ++f) {
            if (mask[f]) ++fr[f];
        }
    }
    return fr;
}

}  // namespace

double freq_score(const RunArchive& archive, int feature) {
    archive.validate();
    const std::size_t dim = static_cast<std::size_t>(archive.stage_dim());
    if (feature < 0 || static_cast<std::size_t>(feature) >= dim)
        throw std::invalid_argument("freq_score: feature index out of range");

    const double runs = static_cast<double>(archive.fronts.size());
    double score = 0.0;
    for (const auto& front : archive.fronts) {
        const auto fr = subset_counts(front, dim);
        if (fr[static_cast<std::size_t>(feature)] > 0)
            score += 1.0 + static_cast<double>(fr[static_cast<std::size_t>(feature)]) / runs;
    }
    return score;
}

FreqHistogram build_histogram(const RunArchive& archive) {
    archive.validate();
    const std::size_t dim = static_cast<std::size_t>(archive.stage_dim());
    const double runs = static_cast<double>(archive.fronts.size());

    FreqHistogram h;
    h.run_count = static_cast<int>(archive.fronts.size());
    h.scores.assign(dim, 0.0);
    for (const auto& front : archive.fronts) {
        const auto fr = subset_counts(front, dim);
        for (std::size_t f = 0; f < dim; ++f) {
            if (fr[f] > 0) h.scores[f] += 1.0 + static_cast<double>(fr[f]) / runs;
        }
    }

    h.top_order.resize(dim);
    for (std::size_t f = 0; f < dim; ++f) h.top_order[f] = static_cast<int>(f);
    std::stable_sort(h.top_order.begin(), h.top_order.end(), [&](int a, int b) {
        const double sa = h.scores[static_cast<std::size_t>(a)];
        const double sb = h.scores[static_cast<std::size_t>(b)];
        return sa > sb || (sa == sb && a < b);
    });
    return h;
}

std::vector<int> top_features(const FreqHistogram& h, int nff) {
    if (nff < 1 || static_cast<std::size_t>(nff) > h.top_order.size())
        throw std::invalid_argument("top_features: nff out of range");
    return {h.top_order.begin(), h.top_order.begin() + nff};
}

ParetoFront run_fine_on_features(const FeatureDataset& ds, std::vector<int> features,
                                 EngineConfig cfg, int run_id) {
    if (features.empty()) throw std::invalid_argument("fine stage: empty feature subset");
    // canonical column order: ascending original index, so nff = stage_dim
    // reduces to an unconstrained run on the unmodified dataset
    std::sort(features.begin(), features.end());
    if (std::adjacent_find(features.begin(), features.end()) != features.end())
        throw ValidationError("fine stage: duplicate feature index in subset");

    cfg.stage_dim = static_cast<int>(features.size());
    cfg.cf = cfg.stage_dim;  // the box constraint is vacuous in the fine stage
    ParetoFront front = run_engine(ds, cfg, features, run_id);

    for (auto& ind : front.solutions) {
        Mask original(ds.feature_count(), 0);
        for (std::size_t j = 0; j < ind.mask.size(); ++j) {
            if (ind.mask[j]) original[static_cast<std::size_t>(features[j])] = 1;
        }
        ind.mask = std::move(original);
    }
    return front;
}

ParetoFront run_fine_stage(const FeatureDataset& ds, const RunArchive& archive, int nff,
                           EngineConfig cfg, int run_id) {
    archive.validate();
    if (static_cast<std::size_t>(archive.stage_dim()) != ds.feature_count())
        throw ValidationError("fine stage: archive stage_dim does not match the dataset");
    if (!archive.dataset_fingerprint.empty() &&
        archive.dataset_fingerprint != dataset_fingerprint(ds))
        throw ValidationError("fine stage: archive was built from a different dataset");

    const auto histogram = build_histogram(archive);
    return run_fine_on_features(ds, top_features(histogram, nff), std::move(cfg), run_id);
}

Mask ordered_selection(const FreqHistogram& h, int size) {
    if (size < 1) throw std::invalid_argument("ordered_selection: size must be >= 1");
    return mask_from_indices(top_features(h, size), h.top_order.size());
}

}  // namespace evofs
