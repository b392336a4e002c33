#include "evofs/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>

#include "evofs/errors.hpp"

namespace evofs {

const std::string& to_string(Stage s) {
    static const std::string names[] = {"coarse", "fine"};
    return names[static_cast<int>(s)];
}

Stage parse_stage(const std::string& tag) {
    if (tag == "coarse") return Stage::coarse;
    if (tag == "fine") return Stage::fine;
    throw ValidationError("unknown stage tag '" + tag + "'");
}

void EngineConfig::validate() const {
    if (stage_dim < 1) throw ValidationError("engine: stage_dim must be >= 1");
    if (cf < 1 || cf > stage_dim) throw ValidationError("engine: cf must be in [1, stage_dim]");
    if (population_size < 4 || population_size % 2 != 0)
        throw ValidationError("engine: population_size must be even and >= 4");
    if (max_generations < 0) throw ValidationError("engine: max_generations must be >= 0");
    if (mutation_rate >= 0.0 && mutation_rate > 1.0)
        throw ValidationError("engine: mutation_rate must be in [0,1]");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
        throw ValidationError("engine: crossover_rate must be in [0,1]");
    if (k < 1) throw ValidationError("engine: k must be >= 1");
    if (max_evaluations < 0) throw ValidationError("engine: max_evaluations must be >= 0");
}

bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    return dominates(a.objectives(), b.objectives());
}

std::vector<std::vector<int>> nondominated_sort(const std::vector<std::array<double, 2>>& points) {
    if (points.empty()) throw std::invalid_argument("nondominated_sort: empty input");
    const int n = static_cast<int>(points.size());
    std::vector<int> domination_count(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> dominated_by(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& a = points[static_cast<std::size_t>(i)];
            const auto& b = points[static_cast<std::size_t>(j)];
            if (dominates(a, b)) {
                dominated_by[static_cast<std::size_t>(i)].push_back(j);
                ++domination_count[static_cast<std::size_t>(j)];
            } else if (dominates(b, a)) {
                dominated_by[static_cast<std::size_t>(j)].push_back(i);
                ++domination_count[static_cast<std::size_t>(i)];
            }
        }
    }

    std::vector<std::vector<int>> fronts;
    std::vector<int> current;
    for (int i = 0; i < n; ++i) {
        if (domination_count[static_cast<std::size_t>(i)] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated_by[static_cast<std::size_t>(i)]) {
                if (--domination_count[static_cast<std::size_t>(j)] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<std::array<double, 2>> reference_points(int np_target) {
    if (np_target < 2) throw std::invalid_argument("reference_points: need np_target >= 2");
    const int divisions = np_target - 1;
    std::vector<std::array<double, 2>> points;
    points.reserve(static_cast<std::size_t>(np_target));
    for (int i = 0; i <= divisions; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(divisions);
        points.push_back({x, 1.0 - x});
    }
    return points;
}

Mask repair_mask(Mask m, int cf, Rng& rng) {
    const int selected = popcount(m);
    if (selected == 0) {
        m[rng.uniform_below(m.size())] = 1;
        return m;
    }
    if (selected <= cf) return m;

    // EF > CF: remove RF of the selected bits, RF in [EF-CF, EF-1]; the
    // upper end is clamped one short of EF so the mask never empties.
    const int rf = static_cast<int>(rng.uniform_int(selected - cf, selected - 1));
    std::vector<int> on = selected_indices(m);
    for (int i = 0; i < rf; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) + rng.uniform_below(on.size() - static_cast<std::size_t>(i));
        std::swap(on[static_cast<std::size_t>(i)], on[j]);
        m[static_cast<std::size_t>(on[static_cast<std::size_t>(i)])] = 0;
    }
    return m;
}

std::vector<Individual> init_population(const EngineConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<Individual> pop(static_cast<std::size_t>(cfg.population_size));
    for (auto& ind : pop) {
        const int nf = static_cast<int>(rng.uniform_int(1, cfg.cf));
        ind.mask = mask_from_indices(rng.sample_indices(cfg.stage_dim, nf),
                                     static_cast<std::size_t>(cfg.stage_dim));
    }
    return pop;
}

std::pair<Mask, Mask> one_point_crossover_at(const Mask& p1, const Mask& p2, int cut) {
    if (p1.size() != p2.size()) throw std::invalid_argument("crossover: parent lengths differ");
    if (cut < 1 || static_cast<std::size_t>(cut) >= p1.size())
        throw std::invalid_argument("crossover: cut out of range");
    Mask c1 = p1;
    Mask c2 = p2;
    for (std::size_t i = static_cast<std::size_t>(cut); i < p1.size(); ++i) {
        c1[i] = p2[i];
        c2[i] = p1[i];
    }
    return {std::move(c1), std::move(c2)};
}

std::pair<Mask, Mask> one_point_crossover(const Mask& p1, const Mask& p2, int cf, Rng& rng) {
    if (p1.size() < 2) return {repair_mask(p1, cf, rng), repair_mask(p2, cf, rng)};
    const int cut = static_cast<int>(rng.uniform_int(1, static_cast<long long>(p1.size()) - 1));
    auto [c1, c2] = one_point_crossover_at(p1, p2, cut);
    return {repair_mask(std::move(c1), cf, rng), repair_mask(std::move(c2), cf, rng)};
}

Mask bitwise_mutation(const Mask& m, double rate, int cf, Rng& rng) {
    Mask out = m;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng.bernoulli(rate)) out[i] ^= 1;
    }
    return repair_mask(std::move(out), cf, rng);
}

namespace {

// perpendicular distance from point p to the line through the origin and w
double line_distance(const std::array<double, 2>& p, const std::array<double, 2>& w) {
    const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1]);
    const double proj = (p[0] * w[0] + p[1] * w[1]) / norm;
    const double dx = p[0] - proj * w[0] / norm;
    const double dy = p[1] - proj * w[1] / norm;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

std::vector<int> nsga3_select(const std::vector<Individual>& merged, int np, Rng& rng) {
    if (np < 2) throw std::invalid_argument("nsga3_select: np must be >= 2");
    if (static_cast<int>(merged.size()) < np)
        throw std::invalid_argument("nsga3_select: merged population smaller than np");
    for (const auto& ind : merged) {
        if (!ind.evaluated) throw std::invalid_argument("nsga3_select: unevaluated individual");
    }

    std::vector<std::array<double, 2>> points;
    points.reserve(merged.size());
    for (const auto& ind : merged) points.push_back(ind.objectives.objectives());

    const auto fronts = nondominated_sort(points);

    std::vector<int> selected;
    selected.reserve(static_cast<std::size_t>(np));
    std::size_t level = 0;
    while (level < fronts.size() &&
           selected.size() + fronts[level].size() <= static_cast<std::size_t>(np)) {
        selected.insert(selected.end(), fronts[level].begin(), fronts[level].end());
        ++level;
    }
    if (selected.size() == static_cast<std::size_t>(np)) return selected;

    const auto& splitting = fronts[level];

    // normalize by the merged ideal point and the extent of the first front
    std::array<double, 2> ideal = {std::numeric_limits<double>::infinity(),
                                   std::numeric_limits<double>::infinity()};
    for (const auto& p : points) {
        ideal[0] = std::min(ideal[0], p[0]);
        ideal[1] = std::min(ideal[1], p[1]);
    }
    std::array<double, 2> nadir = {-std::numeric_limits<double>::infinity(),
                                   -std::numeric_limits<double>::infinity()};
    for (int i : fronts[0]) {
        nadir[0] = std::max(nadir[0], points[static_cast<std::size_t>(i)][0]);
        nadir[1] = std::max(nadir[1], points[static_cast<std::size_t>(i)][1]);
    }
    std::array<double, 2> extent = {nadir[0] - ideal[0], nadir[1] - ideal[1]};
    if (extent[0] <= 0.0) extent[0] = 1.0;
    if (extent[1] <= 0.0) extent[1] = 1.0;

    auto normalized = [&](int i) -> std::array<double, 2> {
        const auto& p = points[static_cast<std::size_t>(i)];
        return {(p[0] - ideal[0]) / extent[0], (p[1] - ideal[1]) / extent[1]};
    };

    const auto refs = reference_points(np);
    auto nearest_line = [&](int i) -> std::pair<int, double> {
        const auto p = normalized(i);
        int best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < refs.size(); ++j) {
            const double d = line_distance(p, refs[j]);
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<int>(j);
            }
        }
        return {best, best_dist};
    };

    std::vector<int> niche_count(refs.size(), 0);
    for (int i : selected) ++niche_count[static_cast<std::size_t>(nearest_line(i).first)];

    struct Candidate {
        int index;
        double distance;
    };
    std::vector<std::vector<Candidate>> per_line(refs.size());
    for (int i : splitting) {
        const auto [line, dist] = nearest_line(i);
        per_line[static_cast<std::size_t>(line)].push_back({i, dist});
    }
    for (auto& cands : per_line) {
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
        });
    }

    while (selected.size() < static_cast<std::size_t>(np)) {
        // smallest niche count among lines that still have candidates
        int min_count = std::numeric_limits<int>::max();
        for (std::size_t j = 0; j < refs.size(); ++j) {
            if (!per_line[j].empty()) min_count = std::min(min_count, niche_count[j]);
        }
        std::vector<int> tied;
        for (std::size_t j = 0; j < refs.size(); ++j) {
            if (!per_line[j].empty() && niche_count[j] == min_count) tied.push_back(static_cast<int>(j));
        }
        const int line = tied[rng.uniform_below(tied.size())];

        auto& cands = per_line[static_cast<std::size_t>(line)];
        selected.push_back(cands.front().index);
        cands.erase(cands.begin());
        ++niche_count[static_cast<std::size_t>(line)];
    }
    return selected;
}

ParetoFront run_engine(const FeatureDataset& ds, const EngineConfig& cfg,
                       const std::vector<int>& feature_subspace, int run_id,
                       const EvalObserver& observer) {
    cfg.validate();

    const FeatureDataset* active = &ds;
    std::optional<FeatureDataset> projected;
    if (!feature_subspace.empty()) {
        if (static_cast<int>(feature_subspace.size()) != cfg.stage_dim)
            throw ValidationError("engine: stage_dim does not match the subspace size");
        projected.emplace(ds.project(feature_subspace));
        active = &*projected;
    } else if (static_cast<std::size_t>(cfg.stage_dim) != ds.feature_count()) {
        throw ValidationError("engine: stage_dim does not match the dataset feature count");
    }

    const RetrievalEvaluator evaluator(*active, cfg.k, Split::validation);
    const double mutation_rate = cfg.effective_mutation_rate();

    // One sequential stream drives every stochastic step in a fixed order:
    // init draws, then per generation the pairing shuffle, per pair the
    // crossover gate (plus cut and repair draws), per child the mutation
    // draws and repair draws, then the niching tie draws in selection.
    Rng rng(cfg.seed);
    long long evaluations = 0;

    auto evaluate_all = [&](std::vector<Individual>& group) {
        std::vector<Mask> masks;
        masks.reserve(group.size());
        for (const auto& ind : group) masks.push_back(ind.mask);
        auto results = evaluator.evaluate_batch(masks, cfg.stage_dim);
        for (std::size_t i = 0; i < group.size(); ++i) {
            group[i].objectives = std::move(results[i]);
            group[i].evaluated = true;
            ++evaluations;
            if (observer) observer(group[i].mask, group[i].objectives);
        }
    };

    std::vector<Individual> population = init_population(cfg, rng);
    evaluate_all(population);

    const int np = cfg.population_size;
    for (int gen = 0; gen < cfg.max_generations; ++gen) {
        if (cfg.max_evaluations > 0 && evaluations + np > cfg.max_evaluations) break;

        std::vector<int> order(static_cast<std::size_t>(np));
        for (int i = 0; i < np; ++i) order[static_cast<std::size_t>(i)] = i;
        rng.shuffle(order);

        std::vector<Individual> children;
        children.reserve(static_cast<std::size_t>(np));
        for (int p = 0; p < np; p += 2) {
            const Mask& a = population[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])].mask;
            const Mask& b = population[static_cast<std::size_t>(order[static_cast<std::size_t>(p + 1)])].mask;
            Mask c1, c2;
            if (rng.bernoulli(cfg.crossover_rate)) {
                std::tie(c1, c2) = one_point_crossover(a, b, cfg.cf, rng);
            } else {
                c1 = a;
                c2 = b;
            }
            children.push_back({bitwise_mutation(c1, mutation_rate, cfg.cf, rng), {}, false});
            children.push_back({bitwise_mutation(c2, mutation_rate, cfg.cf, rng), {}, false});
        }
        evaluate_all(children);

        std::vector<Individual> merged = population;
        merged.insert(merged.end(), std::make_move_iterator(children.begin()),
                      std::make_move_iterator(children.end()));
        const auto keep = nsga3_select(merged, np, rng);
        std::vector<Individual> next;
        next.reserve(static_cast<std::size_t>(np));
        for (int i : keep) next.push_back(std::move(merged[static_cast<std::size_t>(i)]));
        population = std::move(next);
    }

    // final nondominated subset, deduplicated by mask (first occurrence wins)
    std::vector<std::array<double, 2>> final_points;
    final_points.reserve(population.size());
    for (const auto& ind : population) final_points.push_back(ind.objectives.objectives());
    const auto final_fronts = nondominated_sort(final_points);

    ParetoFront front;
    front.run_id = run_id;
    front.stage = feature_subspace.empty() ? Stage::coarse : Stage::fine;
    front.seed = cfg.seed;
    front.evaluation_count = evaluations;
    std::set<Mask> seen;
    for (int i : final_fronts[0]) {
        auto& ind = population[static_cast<std::size_t>(i)];
        if (seen.insert(ind.mask).second) front.solutions.push_back(std::move(ind));
    }
    return front;
}

}  // namespace evofs
