#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "evofs/config.hpp"
#include "evofs/dataset.hpp"
#include "evofs/synthetic.hpp"

namespace evofs {

// Subcommand bodies shared by the CLI and the integration tests. All
// functions throw on error; warnings go to `diag`.

struct SynthOptions {
    SyntheticSpec spec;
    std::filesystem::path out_csv;
    std::filesystem::path out_truth;  // ground-truth JSON
};

void cmd_synth(const SynthOptions& opt);

// R coarse runs -> out/coarse/run_<id>.jsonl + manifest.json
void cmd_coarse(const PipelineConfig& cfg, std::ostream& diag);

// Histogram from a coarse archive -> ffh.csv (by feature index),
// ffh_top.csv (by score) and ffh_manifest.json in out_dir.
void cmd_ffh(const std::filesystem::path& archive_dir, int nff,
             const std::filesystem::path& out_dir, std::ostream& diag);

// Fine runs over the top-NFF features listed in ffh_top_file ->
// out/fine/run_<id>.jsonl + manifest.json
void cmd_fine(const PipelineConfig& cfg, const std::filesystem::path& ffh_top_file,
              std::ostream& diag);

struct ReportOptions {
    std::filesystem::path coarse_dir;  // may be empty
    std::filesystem::path fine_dir;    // may be empty
    std::filesystem::path dataset;
    std::filesystem::path out_dir;
    Split split = Split::test;
    int k = 3;
    int rank_top = 10;  // frequent features in the single-feature table
};

void cmd_report(const ReportOptions& opt, std::ostream& diag);

struct ExportOptions {
    std::filesystem::path dataset;
    std::vector<int> indices;              // explicit feature subset, or
    std::filesystem::path front_file;      // take the best subset of this front
    std::filesystem::path out_csv;
};

// Writes the per-sample feature matrix restricted to the selected columns,
// for external plotting tools.
void cmd_export(const ExportOptions& opt);

}  // namespace evofs
