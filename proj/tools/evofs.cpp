#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evofs/config.hpp"
#include "evofs/pipeline.hpp"

namespace {

// file values first, then explicit flags on top
evofs::PipelineConfig resolve_config(const std::string& config_path,
                                     const std::vector<std::pair<std::string, std::string>>& overrides) {
    evofs::PipelineConfig cfg;
    if (!config_path.empty()) cfg = evofs::parse_config_file(config_path);
    for (const auto& [key, value] : overrides) evofs::apply_config_entry(cfg, key, value);
    return cfg;
}

void add_engine_flags(CLI::App* cmd, std::vector<std::pair<std::string, std::string>>& overrides) {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"--dataset", "dataset"},
        {"--out", "out"},
        {"--r", "r"},
        {"--nff", "nff"},
        {"--seed", "seed"},
        {"--k", "k"},
        {"--cf", "cf"},
        {"--np", "np"},
        {"--generations", "generations"},
        {"--mutation-rate", "mutation_rate"},
        {"--crossover-rate", "crossover_rate"},
        {"--max-evals", "max_evaluations"},
        {"--fine-r", "fine_r"},
        {"--fine-np", "fine_np"},
        {"--fine-generations", "fine_generations"},
        {"--fine-mutation-rate", "fine_mutation_rate"},
        {"--fine-crossover-rate", "fine_crossover_rate"},
        {"--fine-max-evals", "fine_max_evaluations"},
    };
    for (const auto& [flag, key] : keys) {
        const std::string k = key;
        cmd->add_option_function<std::string>(
            flag, [&overrides, k](const std::string& v) { overrides.emplace_back(k, v); },
            "overrides config key " + k);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-stage evolutionary multi-objective feature selection over embedding vectors"};
    app.require_subcommand(1);

    // synth
    evofs::SynthOptions synth;
    std::string synth_out = "dataset.csv";
    std::string synth_truth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a labeled synthetic feature dataset");
    synth_cmd->add_option("--dim", synth.spec.feature_count, "feature count D")->required();
    synth_cmd->add_option("--informative", synth.spec.informative_count, "planted discriminative features")
        ->required();
    synth_cmd->add_option("--classes", synth.spec.class_count, "class count");
    synth_cmd->add_option("--train", synth.spec.samples_per_split[0], "train samples per class");
    synth_cmd->add_option("--val", synth.spec.samples_per_split[1], "validation samples per class");
    synth_cmd->add_option("--test", synth.spec.samples_per_split[2], "test samples per class");
    synth_cmd->add_option("--separation", synth.spec.separation, "class-center offset on informative features");
    synth_cmd->add_option("--noise-sd", synth.spec.noise_sd, "feature noise standard deviation");
    synth_cmd->add_option("--seed", synth.spec.seed, "generator seed");
    synth_cmd->add_option("--out", synth_out, "output CSV path");
    synth_cmd->add_option("--truth", synth_truth, "ground-truth JSON path (default: <out>.truth.json)");

    // coarse / fine share config flags
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    auto* coarse_cmd = app.add_subcommand("coarse", "run the R coarse constrained searches");
    coarse_cmd->add_option("--config", config_path, "flat key = value config file");
    add_engine_flags(coarse_cmd, overrides);

    std::string fine_ffh = "out/ffh_top.csv";
    auto* fine_cmd = app.add_subcommand("fine", "re-optimize over the top frequent features");
    fine_cmd->add_option("--config", config_path, "flat key = value config file");
    fine_cmd->add_option("--ffh", fine_ffh, "top-features CSV written by the ffh subcommand");
    add_engine_flags(fine_cmd, overrides);

    // ffh
    std::string ffh_archive = "out/coarse";
    std::string ffh_out = "out";
    int ffh_nff = 30;
    auto* ffh_cmd = app.add_subcommand("ffh", "build the frequent-features histogram from a coarse archive");
    ffh_cmd->add_option("--archive", ffh_archive, "coarse archive directory");
    ffh_cmd->add_option("--nff", ffh_nff, "number of top frequent features");
    ffh_cmd->add_option("--out", ffh_out, "output directory");

    // report
    evofs::ReportOptions report;
    std::string report_split = "test";
    auto* report_cmd = app.add_subcommand("report", "evaluation bundle: best subsets, stability, decision space");
    report_cmd->add_option("--coarse", report.coarse_dir, "coarse archive directory");
    report_cmd->add_option("--fine", report.fine_dir, "fine archive directory");
    report_cmd->add_option("--dataset", report.dataset, "dataset CSV")->required();
    report_cmd->add_option("--out", report.out_dir, "report output directory")->required();
    report_cmd->add_option("--split", report_split, "query split to evaluate on (train/validation/test)");
    report_cmd->add_option("--k", report.k, "retrieval neighbors");
    report_cmd->add_option("--rank-top", report.rank_top, "frequent features in the single-feature table");

    // export
    evofs::ExportOptions exp;
    std::string exp_indices;
    auto* export_cmd = app.add_subcommand("export", "write per-sample features masked to a feature subset");
    export_cmd->add_option("--dataset", exp.dataset, "dataset CSV")->required();
    export_cmd->add_option("--front", exp.front_file, "front file; its best subset selects the columns");
    export_cmd->add_option("--indices", exp_indices, "comma-separated feature indices");
    export_cmd->add_option("--out", exp.out_csv, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) {
            synth.out_csv = synth_out;
            synth.out_truth = synth_truth.empty() ? synth_out + ".truth.json" : synth_truth;
            evofs::cmd_synth(synth);
        } else if (coarse_cmd->parsed()) {
            evofs::cmd_coarse(resolve_config(config_path, overrides), std::cerr);
        } else if (ffh_cmd->parsed()) {
            evofs::cmd_ffh(ffh_archive, ffh_nff, ffh_out, std::cerr);
        } else if (fine_cmd->parsed()) {
            evofs::cmd_fine(resolve_config(config_path, overrides), fine_ffh, std::cerr);
        } else if (report_cmd->parsed()) {
            report.split = evofs::parse_split(report_split);
            evofs::cmd_report(report, std::cerr);
        } else if (export_cmd->parsed()) {
            if (!exp_indices.empty()) {
                std::size_t pos = 0;
                while (pos <= exp_indices.size()) {
                    const auto comma = exp_indices.find(',', pos);
                    const auto token = exp_indices.substr(pos, comma == std::string::npos ? std::string::npos
                                                                                          : comma - pos);
                    if (!token.empty()) exp.indices.push_back(std::stoi(token));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
            }
            evofs::cmd_export(exp);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
