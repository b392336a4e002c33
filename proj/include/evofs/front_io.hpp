#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "evofs/innovization.hpp"
#include "evofs/moea.hpp"

namespace evofs {

// One Pareto-front member as persisted to JSON lines. Masks are stored as
// strictly ascending original-space feature indices.
struct FrontRecord {
    int run_id = 0;
    std::string stage;
    std::uint64_t seed = 0;
    std::vector<int> mask;
    int raw_feature_count = 0;
    double feature_fraction = 0.0;
    double retrieval_error = 0.0;
    std::map<std::string, double> per_class_f1;

    bool operator==(const FrontRecord&) const = default;
};

std::vector<FrontRecord> front_records(const ParetoFront& front, const std::vector<std::string>& class_ids);

void save_jsonl(const std::vector<FrontRecord>& records, const std::filesystem::path& path);
std::vector<FrontRecord> load_jsonl(const std::filesystem::path& path);

struct ArchiveManifest {
    std::string stage;
    int r = 0;
    std::uint64_t base_seed = 0;
    int stage_dim = 0;  // original feature-space dimension
    int nff = 0;        // fine stage only; 0 otherwise
    std::string dataset_fingerprint;
    std::string config_fingerprint;
    std::vector<std::uint64_t> seeds;
    std::vector<long long> evaluation_counts;
};

void save_manifest(const ArchiveManifest& m, const std::filesystem::path& path);
ArchiveManifest load_manifest(const std::filesystem::path& path);

// Reads manifest.json plus run_<id>.jsonl files from an archive directory
// written by the coarse or fine pipeline stages.
RunArchive load_archive(const std::filesystem::path& dir, ArchiveManifest* manifest_out = nullptr);

}  // namespace evofs
