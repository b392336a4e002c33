#include "evofs/front_io.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "evofs/errors.hpp"

namespace evofs {

using nlohmann::json;

namespace {

json to_json(const FrontRecord& r) {
    json j;
    j["run_id"] = r.run_id;
    j["stage"] = r.stage;
    j["seed"] = r.seed;
    j["mask"] = r.mask;
    j["raw_feature_count"] = r.raw_feature_count;
    j["feature_fraction"] = r.feature_fraction;
    j["retrieval_error"] = r.retrieval_error;
    j["per_class_f1"] = r.per_class_f1;
    return j;
}

FrontRecord from_json(const json& j) {
    FrontRecord r;
    r.run_id = j.at("run_id").get<int>();
    r.stage = j.at("stage").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.mask = j.at("mask").get<std::vector<int>>();
    if (!std::is_sorted(r.mask.begin(), r.mask.end()) ||
        std::adjacent_find(r.mask.begin(), r.mask.end()) != r.mask.end() ||
        (!r.mask.empty() && r.mask.front() < 0)) {
        throw ParseError("front record mask must list strictly ascending feature indices");
    }
    r.raw_feature_count = j.at("raw_feature_count").get<int>();
    r.feature_fraction = j.at("feature_fraction").get<double>();
    r.retrieval_error = j.at("retrieval_error").get<double>();
    r.per_class_f1 = j.at("per_class_f1").get<std::map<std::string, double>>();
    return r;
}

}  // namespace

std::vector<FrontRecord> front_records(const ParetoFront& front, const std::vector<std::string>& class_ids) {
    std::vector<FrontRecord> records;
    records.reserve(front.solutions.size());
    for (const auto& ind : front.solutions) {
        FrontRecord r;
        r.run_id = front.run_id;
        r.stage = to_string(front.stage);
        r.seed = front.seed;
        r.mask = selected_indices(ind.mask);
        r.raw_feature_count = ind.objectives.raw_feature_count;
        r.feature_fraction = ind.objectives.feature_fraction;
        r.retrieval_error = ind.objectives.retrieval_error;
        for (std::size_t c = 0; c < class_ids.size() && c < ind.objectives.per_class_f1.size(); ++c)
            r.per_class_f1[class_ids[c]] = ind.objectives.per_class_f1[c];
        records.push_back(std::move(r));
    }
    return records;
}

void save_jsonl(const std::vector<FrontRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write front file: " + path.string());
    for (const auto& r : records) out << to_json(r).dump() << "\n";
}

std::vector<FrontRecord> load_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open front file: " + path.string());
    std::vector<FrontRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON record");
        records.push_back(from_json(j));
    }
    return records;
}

void save_manifest(const ArchiveManifest& m, const std::filesystem::path& path) {
    json j;
    j["stage"] = m.stage;
    j["r"] = m.r;
    j["base_seed"] = m.base_seed;
    j["stage_dim"] = m.stage_dim;
    j["nff"] = m.nff;
    j["dataset_fingerprint"] = m.dataset_fingerprint;
    j["config_fingerprint"] = m.config_fingerprint;
    j["seeds"] = m.seeds;
    j["evaluation_counts"] = m.evaluation_counts;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write manifest: " + path.string());
    out << j.dump(2) << "\n";
}

ArchiveManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open manifest: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    ArchiveManifest m;
    m.stage = j.at("stage").get<std::string>();
    m.r = j.at("r").get<int>();
    m.base_seed = j.at("base_seed").get<std::uint64_t>();
    m.stage_dim = j.at("stage_dim").get<int>();
    m.nff = j.value("nff", 0);
    m.dataset_fingerprint = j.at("dataset_fingerprint").get<std::string>();
    m.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.evaluation_counts = j.at("evaluation_counts").get<std::vector<long long>>();
    return m;
}

RunArchive load_archive(const std::filesystem::path& dir, ArchiveManifest* manifest_out) {
    const auto manifest = load_manifest(dir / "manifest.json");
    if (manifest_out) *manifest_out = manifest;

    RunArchive archive;
    archive.dataset_fingerprint = manifest.dataset_fingerprint;
    archive.config_fingerprint = manifest.config_fingerprint;
    for (int run = 0; run < manifest.r; ++run) {
        const auto path = dir / ("run_" + std::to_string(run) + ".jsonl");
        const auto records = load_jsonl(path);
        if (records.empty()) throw ValidationError("archive: empty front in " + path.string());

        ParetoFront front;
        front.run_id = run;
        front.stage = parse_stage(records.front().stage);
        front.seed = records.front().seed;
        if (run < static_cast<int>(manifest.evaluation_counts.size()))
            front.evaluation_count = manifest.evaluation_counts[static_cast<std::size_t>(run)];
        for (const auto& rec : records) {
            Individual ind;
            ind.mask = mask_from_indices(rec.mask, static_cast<std::size_t>(manifest.stage_dim));
            ind.objectives.raw_feature_count = rec.raw_feature_count;
            ind.objectives.feature_fraction = rec.feature_fraction;
            ind.objectives.retrieval_error = rec.retrieval_error;
            for (const auto& [cls, f1] : rec.per_class_f1) ind.objectives.per_class_f1.push_back(f1);
            ind.evaluated = true;
            front.solutions.push_back(std::move(ind));
        }
        archive.fronts.push_back(std::move(front));
    }
    archive.validate();
    return archive;
}

}  // namespace evofs
