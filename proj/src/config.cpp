#include "evofs/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evofs/dataset.hpp"
#include "evofs/errors.hpp"

namespace evofs {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

long long parse_integer(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto* b = value.data();
    const auto* e = b + value.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e)
        throw ValidationError("config: key '" + key + "' expects an integer, got '" + value + "'");
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto* b = value.data();
    const auto* e = b + value.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e)
        throw ValidationError("config: key '" + key + "' expects a number, got '" + value + "'");
    return v;
}

void format_kv(std::string& out, const char* key, const std::string& value) {
    out += key;
    out += "=";
    out += value;
    out += "\n";
}

std::string real_to_string(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

EngineConfig PipelineConfig::coarse_engine(int stage_dim) const {
    EngineConfig e;
    e.stage_dim = stage_dim;
    e.cf = cf;
    e.population_size = np;
    e.max_generations = generations;
    e.mutation_rate = mutation_rate;
    e.crossover_rate = crossover_rate;
    e.k = k;
    e.max_evaluations = max_evaluations;
    return e;
}

EngineConfig PipelineConfig::fine_engine() const {
    EngineConfig e;
    e.stage_dim = nff;
    e.cf = nff;
    e.population_size = fine_np < 0 ? np : fine_np;
    e.max_generations = fine_generations < 0 ? generations : fine_generations;
    e.mutation_rate = fine_mutation_rate <= -2.0 ? mutation_rate : fine_mutation_rate;
    e.crossover_rate = fine_crossover_rate < 0.0 ? crossover_rate : fine_crossover_rate;
    e.k = k;
    e.max_evaluations = fine_max_evaluations < 0 ? max_evaluations : fine_max_evaluations;
    return e;
}

std::string PipelineConfig::canonical() const {
    std::string out;
    format_kv(out, "cf", std::to_string(cf));
    format_kv(out, "crossover_rate", real_to_string(crossover_rate));
    format_kv(out, "dataset", dataset.string());
    format_kv(out, "dim", std::to_string(dim));
    format_kv(out, "fine_crossover_rate", real_to_string(fine_crossover_rate));
    format_kv(out, "fine_generations", std::to_string(fine_generations));
    format_kv(out, "fine_max_evaluations", std::to_string(fine_max_evaluations));
    format_kv(out, "fine_mutation_rate", real_to_string(fine_mutation_rate));
    format_kv(out, "fine_np", std::to_string(fine_np));
    format_kv(out, "fine_r", std::to_string(fine_r));
    format_kv(out, "generations", std::to_string(generations));
    format_kv(out, "k", std::to_string(k));
    format_kv(out, "max_evaluations", std::to_string(max_evaluations));
    format_kv(out, "mutation_rate", real_to_string(mutation_rate));
    format_kv(out, "nff", std::to_string(nff));
    format_kv(out, "np", std::to_string(np));
    format_kv(out, "r", std::to_string(r));
    format_kv(out, "seed", std::to_string(seed));
    return out;
}

std::string PipelineConfig::fingerprint() const { return fnv1a_hex(canonical()); }

void PipelineConfig::validate() const {
    if (r < 1) throw ValidationError("config: r must be >= 1");
    if (nff < 1) throw ValidationError("config: nff must be >= 1");
    if (k < 1) throw ValidationError("config: k must be >= 1");
    if (cf < 1) throw ValidationError("config: cf must be >= 1");
    if (np < 4 || np % 2 != 0) throw ValidationError("config: np must be even and >= 4");
    const int fnp = fine_np < 0 ? np : fine_np;
    if (fnp < 4 || fnp % 2 != 0) throw ValidationError("config: fine_np must be even and >= 4");
    if (generations < 0) throw ValidationError("config: generations must be >= 0");
    if (dim < 0) throw ValidationError("config: dim must be >= 0");
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "dataset") {
        cfg.dataset = value;
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "r") {
        cfg.r = static_cast<int>(parse_integer(key, value));
    } else if (key == "nff") {
        cfg.nff = static_cast<int>(parse_integer(key, value));
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    } else if (key == "k") {
        cfg.k = static_cast<int>(parse_integer(key, value));
    } else if (key == "dim") {
        cfg.dim = static_cast<int>(parse_integer(key, value));
    } else if (key == "cf") {
        cfg.cf = static_cast<int>(parse_integer(key, value));
    } else if (key == "np") {
        cfg.np = static_cast<int>(parse_integer(key, value));
    } else if (key == "generations") {
        cfg.generations = static_cast<int>(parse_integer(key, value));
    } else if (key == "mutation_rate") {
        cfg.mutation_rate = parse_real(key, value);
    } else if (key == "crossover_rate") {
        cfg.crossover_rate = parse_real(key, value);
    } else if (key == "max_evaluations") {
        cfg.max_evaluations = parse_integer(key, value);
    } else if (key == "fine_r") {
        cfg.fine_r = static_cast<int>(parse_integer(key, value));
    } else if (key == "fine_np") {
        cfg.fine_np = static_cast<int>(parse_integer(key, value));
    } else if (key == "fine_generations") {
        cfg.fine_generations = static_cast<int>(parse_integer(key, value));
    } else if (key == "fine_mutation_rate") {
        cfg.fine_mutation_rate = parse_real(key, value);
    } else if (key == "fine_crossover_rate") {
        cfg.fine_crossover_rate = parse_real(key, value);
    } else if (key == "fine_max_evaluations") {
        cfg.fine_max_evaluations = parse_integer(key, value);
    } else {
        throw ValidationError("config: unknown key '" + key + "'");
    }
}

PipelineConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path.string());

    PipelineConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        try {
            apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

}  // namespace evofs
