#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "evofs/moea.hpp"

namespace evofs {

// Pipeline settings read from a flat key = value file; CLI flags override
// file values. Fine-stage fields inherit the coarse value when negative.
struct PipelineConfig {
    std::filesystem::path dataset;
    std::filesystem::path out_dir = "out";

    int r = 10;            // coarse runs feeding the histogram
    int nff = 30;          // fine search-space size
    std::uint64_t seed = 1;
    int k = 3;
    int dim = 0;           // optional cross-check; 0 = take D from the dataset

    // coarse engine
    int cf = 50;
    int np = 50;
    int generations = 200;
    double mutation_rate = -1.0;  // -1 = 1/D
    double crossover_rate = 1.0;
    long long max_evaluations = 0;

    // fine engine overrides (negative = inherit coarse / documented default)
    int fine_r = -1;              // default: r
    int fine_np = 30;
    int fine_generations = 1000;
    double fine_mutation_rate = -2.0;  // -2 = inherit, -1 = 1/NFF
    double fine_crossover_rate = -1.0;
    long long fine_max_evaluations = -1;

    int effective_fine_r() const { return fine_r < 0 ? r : fine_r; }

    EngineConfig coarse_engine(int stage_dim) const;
    EngineConfig fine_engine() const;  // stage_dim = nff, cf vacuous

    // Derived per-run seeds: coarse run i uses seed + i, fine run i uses
    // seed + r + i, so the two stages never share a stream.
    std::uint64_t coarse_seed(int run) const { return seed + static_cast<std::uint64_t>(run); }
    std::uint64_t fine_seed(int run) const {
        return seed + static_cast<std::uint64_t>(r) + static_cast<std::uint64_t>(run);
    }

    // Canonical key=value serialization; its hash is the config fingerprint
    // embedded in archive manifests.
    std::string canonical() const;
    std::string fingerprint() const;

    void validate() const;
};

PipelineConfig parse_config_file(const std::filesystem::path& path);

// Applies one key=value pair; throws ValidationError on unknown keys or
// unparseable values.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

}  // namespace evofs
