#include "evofs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "evofs/errors.hpp"
#include "evofs/retrieval.hpp"

namespace evofs {

const Individual& best_subset(const ParetoFront& front) {
    if (front.solutions.empty()) throw std::invalid_argument("best_subset: empty front");
    const Individual* best = &front.solutions.front();
    for (const auto& ind : front.solutions) {
        if (ind.objectives.retrieval_error < best->objectives.retrieval_error) {
            best = &ind;
        } else if (ind.objectives.retrieval_error == best->objectives.retrieval_error) {
            if (ind.objectives.raw_feature_count < best->objectives.raw_feature_count ||
                (ind.objectives.raw_feature_count == best->objectives.raw_feature_count &&
                 ind.mask < best->mask)) {
                best = &ind;
            }
        }
    }
    return *best;
}

double jaccard(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() && b.empty()) throw std::invalid_argument("jaccard: both sets empty");
    const std::set<int> sa(a.begin(), a.end());
    const std::set<int> sb(b.begin(), b.end());
    std::size_t intersection = 0;
    for (int x : sa) intersection += sb.count(x);
    const std::size_t unions = sa.size() + sb.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(unions);
}

double stability(const std::vector<std::vector<int>>& subsets) {
    const std::size_t l = subsets.size();
    if (l < 2) throw std::invalid_argument("stability: need at least two subsets");
    double sum = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = i + 1; j < l; ++j) sum += jaccard(subsets[i], subsets[j]);
    }
    return sum * 2.0 / (static_cast<double>(l) * static_cast<double>(l - 1));
}

StabilityReport stability_report(Stage stage, std::vector<std::vector<int>> subsets) {
    StabilityReport report;
    report.stage = stage;
    report.s_index = stability(subsets);
    const std::size_t l = subsets.size();
    report.pairwise_jaccard.assign(l, std::vector<double>(l, 1.0));
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = i + 1; j < l; ++j) {
            const double jac = jaccard(subsets[i], subsets[j]);
            report.pairwise_jaccard[i][j] = jac;
            report.pairwise_jaccard[j][i] = jac;
        }
    }
    report.subsets = std::move(subsets);
    return report;
}

DecisionSpace decision_space(const ParetoFront& front, const FeatureDataset& ds, Split split, int k) {
    if (front.solutions.empty()) throw std::invalid_argument("decision_space: empty front");

    const RetrievalEvaluator evaluator(ds, k, split);
    std::vector<Mask> masks;
    masks.reserve(front.solutions.size());
    for (const auto& ind : front.solutions) masks.push_back(ind.mask);
    const auto evaluated = evaluator.evaluate_batch(masks, static_cast<int>(ds.feature_count()));

    DecisionSpace space;
    space.class_ids = ds.class_ids();
    space.per_class.resize(ds.class_count());
    for (std::size_t c = 0; c < ds.class_count(); ++c) {
        std::vector<DecisionPoint> candidates;
        candidates.reserve(evaluated.size());
        for (std::size_t m = 0; m < evaluated.size(); ++m) {
            candidates.push_back({evaluated[m].raw_feature_count, 1.0 - evaluated[m].per_class_f1[c], m});
        }
        // keep the nondominated subset (min feature count, min class error)
        std::vector<DecisionPoint> kept;
        for (const auto& p : candidates) {
            bool dominated = false;
            for (const auto& q : candidates) {
                const bool leq = q.raw_feature_count <= p.raw_feature_count && q.class_error <= p.class_error;
                const bool lt = q.raw_feature_count < p.raw_feature_count || q.class_error < p.class_error;
                if (leq && lt) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) kept.push_back(p);
        }
        std::sort(kept.begin(), kept.end(), [](const DecisionPoint& a, const DecisionPoint& b) {
            if (a.raw_feature_count != b.raw_feature_count) return a.raw_feature_count < b.raw_feature_count;
            if (a.class_error != b.class_error) return a.class_error < b.class_error;
            return a.member < b.member;
        });
        space.per_class[c] = std::move(kept);
    }
    return space;
}

std::vector<FeatureRankEntry> single_feature_rank(const FreqHistogram& h, const ParetoFront& front,
                                                  const FeatureDataset& ds, int top_n, Split split,
                                                  int k) {
    if (front.solutions.empty()) throw std::invalid_argument("single_feature_rank: empty front");

    const std::vector<int> frequent = top_features(h, top_n);
    std::set<int> front_features;
    for (const auto& ind : front.solutions) {
        for (int f : selected_indices(ind.mask)) front_features.insert(f);
    }

    std::set<int> all(front_features);
    all.insert(frequent.begin(), frequent.end());
    std::vector<int> order(all.begin(), all.end());
    std::vector<Mask> singletons;
    singletons.reserve(order.size());
    for (int f : order) singletons.push_back(mask_from_indices({f}, ds.feature_count()));

    const RetrievalEvaluator evaluator(ds, k, split);
    const auto evaluated = evaluator.evaluate_batch(singletons, static_cast<int>(ds.feature_count()));
    std::vector<double> f1_of(ds.feature_count(), 0.0);
    for (std::size_t i = 0; i < order.size(); ++i)
        f1_of[static_cast<std::size_t>(order[i])] = 1.0 - evaluated[i].retrieval_error;

    double front_mean = 0.0;
    for (int f : front_features) front_mean += f1_of[static_cast<std::size_t>(f)];
    front_mean /= static_cast<double>(front_features.size());

    std::vector<FeatureRankEntry> out;
    out.reserve(frequent.size());
    for (int f : frequent) {
        const double f1 = f1_of[static_cast<std::size_t>(f)];
        int lower = 0;
        for (int g : front_features) {
            if (f1_of[static_cast<std::size_t>(g)] < f1) ++lower;
        }
        out.push_back({f, f1, static_cast<double>(lower) / static_cast<double>(front_features.size()),
                       f1 - front_mean});
    }
    return out;
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// signed ranks of |d| with average ranks on ties; returns (ranks, tie term)
std::pair<std::vector<double>, double> ranked_magnitudes(const std::vector<double>& diffs) {
    const std::size_t n = diffs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(diffs[a]) < std::fabs(diffs[b]);
    });

    std::vector<double> ranks(n, 0.0);
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg_rank;
        const double ties = static_cast<double>(j - i + 1);
        tie_term += ties * ties * ties - ties;
        i = j + 1;
    }
    return {ranks, tie_term};
}

}  // namespace

double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                            WilcoxonTail tail) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: sample sizes differ");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) return 1.0;  // all pairs tie
    const std::size_t n = diffs.size();
    if (n < 5) throw std::invalid_argument("wilcoxon: need >= 5 nonzero differences");

    const auto [ranks, tie_term] = ranked_magnitudes(diffs);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) w_plus += ranks[i];
    }

    if (n <= 12) {
        // exact null distribution by full sign enumeration
        const std::uint64_t total = 1ull << n;
        std::uint64_t count_le = 0, count_ge = 0;
        constexpr double eps = 1e-9;
        for (std::uint64_t signs = 0; signs < total; ++signs) {
            double w = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (signs & (1ull << i)) w += ranks[i];
            }
            if (w <= w_plus + eps) ++count_le;
            if (w >= w_plus - eps) ++count_ge;
        }
        const double p_le = static_cast<double>(count_le) / static_cast<double>(total);
        const double p_ge = static_cast<double>(count_ge) / static_cast<double>(total);
        switch (tail) {
            case WilcoxonTail::greater: return p_ge;
            case WilcoxonTail::less: return p_le;
            case WilcoxonTail::two_sided: break;
        }
        return std::min(1.0, 2.0 * std::min(p_le, p_ge));
    }

    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double sd = std::sqrt(variance);
    auto z_with_continuity = [&](double w, double direction) {
        return (w - mean - direction * 0.5) / sd;
    };
    switch (tail) {
        case WilcoxonTail::greater: return 1.0 - normal_cdf(z_with_continuity(w_plus, 1.0));
        case WilcoxonTail::less: return normal_cdf(z_with_continuity(w_plus, -1.0));
        case WilcoxonTail::two_sided: break;
    }
    const double z = (std::fabs(w_plus - mean) - 0.5) / sd;
    return std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
}

}  // namespace evofs
