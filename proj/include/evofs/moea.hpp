#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evofs/mask.hpp"
#include "evofs/retrieval.hpp"
#include "evofs/rng.hpp"

namespace evofs {

enum class Stage { coarse, fine };

const std::string& to_string(Stage s);
Stage parse_stage(const std::string& tag);

struct EngineConfig {
    int stage_dim = 0;           // search-space dimension D
    int cf = 50;                 // box constraint: max selected features
    int population_size = 50;    // NP, even and >= 4
    int max_generations = 200;   // generation budget
    double mutation_rate = -1.0; // per-bit flip probability; < 0 means 1/stage_dim
    double crossover_rate = 1.0; // probability a parent pair is recombined
    int k = 3;                   // retrieval neighbors
    std::uint64_t seed = 1;
    long long max_evaluations = 0;  // optional cap on fitness calls; 0 = off

    double effective_mutation_rate() const {
        return mutation_rate < 0.0 ? 1.0 / static_cast<double>(stage_dim) : mutation_rate;
    }
    void validate() const;
};

struct Individual {
    Mask mask;
    ObjectiveVector objectives;
    bool evaluated = false;
};

struct ParetoFront {
    std::vector<Individual> solutions;  // mutually nondominated, distinct masks
    int run_id = 0;
    Stage stage = Stage::coarse;
    std::uint64_t seed = 0;
    long long evaluation_count = 0;
};

// min-min dominance: a <= b componentwise with a < b somewhere
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);
bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b);

// Fast non-dominated sort. Front 0 is the nondominated set; front i is
// nondominated once fronts < i are removed. Within a front, indices ascend.
std::vector<std::vector<int>> nondominated_sort(const std::vector<std::array<double, 2>>& points);

// Das-Dennis directions for 2 objectives with (n-1) divisions:
// {(i/(n-1), 1 - i/(n-1))} for i = 0..n-1.
std::vector<std::array<double, 2>> reference_points(int np_target);

// Population init per the constrained scheme: per individual draw the
// selected-feature count uniformly from {1..CF}, then place that many bits
// uniformly at random.
std::vector<Individual> init_population(const EngineConfig& cfg, Rng& rng);

// Deterministic crossover at a fixed cut in {1..D-1}; no repair.
std::pair<Mask, Mask> one_point_crossover_at(const Mask& p1, const Mask& p2, int cut);
// Random cut, then repair on each child.
std::pair<Mask, Mask> one_point_crossover(const Mask& p1, const Mask& p2, int cf, Rng& rng);

// Independent per-bit flips, then repair.
Mask bitwise_mutation(const Mask& m, double rate, int cf, Rng& rng);

// Constraint repair: with EF selected features, EF > CF removes RF bits for
// RF drawn uniformly from [EF-CF, EF-1], keeping the result non-empty and
// a subset of the input selection; EF = 0 sets one random bit.
Mask repair_mask(Mask m, int cf, Rng& rng);

// NSGA-III environmental selection from a merged population of evaluated
// individuals. Whole fronts are admitted while they fit; the splitting
// front is filled by reference-line niching. Returns exactly np indices
// into `merged`.
std::vector<int> nsga3_select(const std::vector<Individual>& merged, int np, Rng& rng);

// Called once per fitness evaluation, sequentially, in population order.
using EvalObserver = std::function<void(const Mask&, const ObjectiveVector&)>;

// Generational loop: init, evaluate, then per generation produce NP children
// via random disjoint pairing + crossover + mutation + repair, evaluate and
// nsga3_select from the merged 2NP. Returns the deduplicated nondominated
// subset of the final population. When feature_subspace is non-empty the
// engine searches that column projection and the returned masks live in the
// projected space (cfg.stage_dim must equal the subspace size).
ParetoFront run_engine(const FeatureDataset& ds, const EngineConfig& cfg,
                       const std::vector<int>& feature_subspace = {}, int run_id = 0,
                       const EvalObserver& observer = {});

}  // namespace evofs
