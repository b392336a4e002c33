#include "evofs/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>

#include <json.hpp>

#include "evofs/analysis.hpp"
#include "evofs/errors.hpp"
#include "evofs/front_io.hpp"
#include "evofs/innovization.hpp"

namespace evofs {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_indices(const std::vector<int>& indices) {
    std::string out;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i) out += ";";
        out += std::to_string(indices[i]);
    }
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path.string());
    return out;
}

FeatureDataset load_dataset_checked(const fs::path& path, int expected_dim = 0) {
    if (path.empty()) throw ValidationError("no dataset path given");
    FeatureDataset ds = load_csv(path);
    if (expected_dim > 0 && ds.feature_count() != static_cast<std::size_t>(expected_dim)) {
        throw ValidationError("dataset has " + std::to_string(ds.feature_count()) +
                              " features but the config says dim=" + std::to_string(expected_dim));
    }
    return ds;
}

// Union of run fronts, deduplicated by mask, reduced to its nondominated
// subset; stands in for the per-stage Pareto front in report outputs.
ParetoFront merged_front(const RunArchive& archive) {
    std::vector<Individual> pool;
    std::set<Mask> seen;
    for (const auto& front : archive.fronts) {
        for (const auto& ind : front.solutions) {
            if (seen.insert(ind.mask).second) pool.push_back(ind);
        }
    }
    std::vector<std::array<double, 2>> points;
    points.reserve(pool.size());
    for (const auto& ind : pool) points.push_back(ind.objectives.objectives());
    const auto fronts = nondominated_sort(points);

    ParetoFront merged;
    merged.stage = archive.fronts.front().stage;
    merged.run_id = -1;
    for (int i : fronts[0]) merged.solutions.push_back(pool[static_cast<std::size_t>(i)]);
    return merged;
}

}  // namespace

void cmd_synth(const SynthOptions& opt) {
    const auto result = synthesize(opt.spec);
    fs::create_directories(fs::absolute(opt.out_csv).parent_path());
    save_csv(result.dataset, opt.out_csv);

    nlohmann::json truth;
    truth["feature_count"] = opt.spec.feature_count;
    truth["informative_count"] = opt.spec.informative_count;
    truth["class_count"] = opt.spec.class_count;
    truth["samples_per_split"] = opt.spec.samples_per_split;
    truth["separation"] = opt.spec.separation;
    truth["noise_sd"] = opt.spec.noise_sd;
    truth["seed"] = opt.spec.seed;
    truth["informative_features"] = result.informative_features;
    truth["dataset_fingerprint"] = dataset_fingerprint(result.dataset);
    auto out = open_out(opt.out_truth);
    out << truth.dump(2) << "\n";
}

void cmd_coarse(const PipelineConfig& cfg, std::ostream& diag) {
    cfg.validate();
    const auto ds = load_dataset_checked(cfg.dataset, cfg.dim);
    const auto dir = cfg.out_dir / "coarse";
    fs::create_directories(dir);

    EngineConfig engine = cfg.coarse_engine(static_cast<int>(ds.feature_count()));

    ArchiveManifest manifest;
    manifest.stage = "coarse";
    manifest.r = cfg.r;
    manifest.base_seed = cfg.seed;
    manifest.stage_dim = static_cast<int>(ds.feature_count());
    manifest.dataset_fingerprint = dataset_fingerprint(ds);
    manifest.config_fingerprint = cfg.fingerprint();

    for (int run = 0; run < cfg.r; ++run) {
        engine.seed = cfg.coarse_seed(run);
        try {
            const ParetoFront front = run_engine(ds, engine, {}, run);
            save_jsonl(front_records(front, ds.class_ids()), dir / ("run_" + std::to_string(run) + ".jsonl"));
            manifest.seeds.push_back(engine.seed);
            manifest.evaluation_counts.push_back(front.evaluation_count);
            diag << "coarse run " << run << ": " << front.solutions.size() << " front members, "
                 << front.evaluation_count << " evaluations\n";
        } catch (const std::exception& e) {
            throw std::runtime_error("coarse run " + std::to_string(run) + ": " + e.what());
        }
    }
    save_manifest(manifest, dir / "manifest.json");
}

void cmd_ffh(const fs::path& archive_dir, int nff, const fs::path& out_dir, std::ostream& diag) {
    ArchiveManifest source;
    const RunArchive archive = load_archive(archive_dir, &source);
    const auto histogram = build_histogram(archive);
    const int dim = archive.stage_dim();
    if (nff < 1 || nff > dim)
        throw ValidationError("ffh: nff must be in [1, " + std::to_string(dim) + "]");
    if (nff > histogram.nonzero_count()) {
        diag << "warning: nff=" << nff << " exceeds the " << histogram.nonzero_count()
             << " features with nonzero score; zero-score features admitted by index order\n";
    }

    fs::create_directories(out_dir);
    {
        auto out = open_out(out_dir / "ffh.csv");
        out << "feature_index,score\n";
        for (int f = 0; f < dim; ++f)
            out << f << "," << fmt(histogram.scores[static_cast<std::size_t>(f)]) << "\n";
    }
    {
        auto out = open_out(out_dir / "ffh_top.csv");
        out << "rank,feature_index,score\n";
        const auto top = top_features(histogram, nff);
        for (std::size_t i = 0; i < top.size(); ++i) {
            out << (i + 1) << "," << top[i] << ","
                << fmt(histogram.scores[static_cast<std::size_t>(top[i])]) << "\n";
        }
    }
    nlohmann::json meta;
    meta["nff"] = nff;
    meta["r"] = histogram.run_count;
    meta["stage_dim"] = dim;
    meta["dataset_fingerprint"] = source.dataset_fingerprint;
    meta["config_fingerprint"] = source.config_fingerprint;
    auto out = open_out(out_dir / "ffh_manifest.json");
    out << meta.dump(2) << "\n";
}

namespace {

std::vector<int> read_top_features(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open top-features file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty top-features file: " + path.string());
    std::vector<int> features;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        if (first == std::string::npos || second == std::string::npos)
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected rank,feature_index,score");
        int feature = 0;
        const char* b = line.data() + first + 1;
        const char* e = line.data() + second;
        auto [ptr, ec] = std::from_chars(b, e, feature);
        if (ec != std::errc{} || ptr != e)
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad feature index");
        features.push_back(feature);
    }
    if (features.empty()) throw ValidationError("top-features file lists no features: " + path.string());
    return features;
}

}  // namespace

void cmd_fine(const PipelineConfig& cfg, const fs::path& ffh_top_file, std::ostream& diag) {
    cfg.validate();
    const auto ds = load_dataset_checked(cfg.dataset, cfg.dim);
    const auto features = read_top_features(ffh_top_file);
    if (static_cast<int>(features.size()) != cfg.nff) {
        diag << "note: using the " << features.size() << " features listed in " << ffh_top_file.string()
             << " (config nff=" << cfg.nff << ")\n";
    }

    const auto dir = cfg.out_dir / "fine";
    fs::create_directories(dir);

    EngineConfig engine = cfg.fine_engine();
    const int fine_r = cfg.effective_fine_r();

    ArchiveManifest manifest;
    manifest.stage = "fine";
    manifest.r = fine_r;
    manifest.base_seed = cfg.seed;
    manifest.stage_dim = static_cast<int>(ds.feature_count());
    manifest.nff = static_cast<int>(features.size());
    manifest.dataset_fingerprint = dataset_fingerprint(ds);
    manifest.config_fingerprint = cfg.fingerprint();

    for (int run = 0; run < fine_r; ++run) {
        engine.seed = cfg.fine_seed(run);
        try {
            const ParetoFront front = run_fine_on_features(ds, features, engine, run);
            save_jsonl(front_records(front, ds.class_ids()), dir / ("run_" + std::to_string(run) + ".jsonl"));
            manifest.seeds.push_back(engine.seed);
            manifest.evaluation_counts.push_back(front.evaluation_count);
            diag << "fine run " << run << ": " << front.solutions.size() << " front members, "
                 << front.evaluation_count << " evaluations\n";
        } catch (const std::exception& e) {
            throw std::runtime_error("fine run " + std::to_string(run) + ": " + e.what());
        }
    }
    save_manifest(manifest, dir / "manifest.json");
}

namespace {

struct StageData {
    RunArchive archive;
    std::vector<const Individual*> best;       // per run
    std::vector<double> best_eval_f1;          // per run, on the report split
};

StageData load_stage(const fs::path& dir, const FeatureDataset& ds, const ReportOptions& opt) {
    ArchiveManifest manifest;
    StageData data{load_archive(dir, &manifest), {}, {}};
    const std::string actual = dataset_fingerprint(ds);
    if (manifest.dataset_fingerprint != actual) {
        throw ValidationError("report: archive " + dir.string() + " was produced from a dataset with fingerprint " +
                              manifest.dataset_fingerprint + " but --dataset has fingerprint " + actual +
                              "; refusing to mix them");
    }

    const RetrievalEvaluator evaluator(ds, opt.k, opt.split);
    std::vector<Mask> masks;
    for (const auto& front : data.archive.fronts) {
        data.best.push_back(&best_subset(front));
        masks.push_back(data.best.back()->mask);
    }
    const auto evaluated = evaluator.evaluate_batch(masks, static_cast<int>(ds.feature_count()));
    for (const auto& obj : evaluated) data.best_eval_f1.push_back(1.0 - obj.retrieval_error);
    return data;
}

void write_best_subsets(std::ofstream& out, const std::string& stage, const StageData& data) {
    for (std::size_t run = 0; run < data.archive.fronts.size(); ++run) {
        const auto& front = data.archive.fronts[run];
        const auto& best = *data.best[run];
        out << stage << "," << front.run_id << "," << front.seed << ","
            << best.objectives.raw_feature_count << "," << fmt(best.objectives.retrieval_error) << ","
            << fmt(data.best_eval_f1[run]) << "," << join_indices(selected_indices(best.mask)) << "\n";
    }
}

void write_stability(const fs::path& out_dir, const std::string& stage, const StageData& data,
                     std::ofstream& summary) {
    std::vector<std::vector<int>> subsets;
    for (const auto* best : data.best) subsets.push_back(selected_indices(best->mask));
    if (subsets.size() < 2) return;
    const auto report = stability_report(stage == "fine" ? Stage::fine : Stage::coarse, subsets);
    summary << stage << "," << subsets.size() << "," << fmt(report.s_index) << "\n";

    auto out = open_out(out_dir / ("stability_pairwise_" + stage + ".csv"));
    for (std::size_t i = 0; i < report.pairwise_jaccard.size(); ++i) {
        for (std::size_t j = 0; j < report.pairwise_jaccard[i].size(); ++j) {
            if (j) out << ",";
            out << fmt(report.pairwise_jaccard[i][j]);
        }
        out << "\n";
    }
}

void write_decision_space(const fs::path& out_dir, const std::string& stage, const RunArchive& archive,
                          const FeatureDataset& ds, const ReportOptions& opt) {
    const ParetoFront merged = merged_front(archive);
    const DecisionSpace space = decision_space(merged, ds, opt.split, opt.k);
    for (std::size_t c = 0; c < space.class_ids.size(); ++c) {
        auto out = open_out(out_dir / ("decision_" + stage + "_" + space.class_ids[c] + ".csv"));
        out << "feature_count,class_error,features\n";
        for (const auto& point : space.per_class[c]) {
            out << point.raw_feature_count << "," << fmt(point.class_error) << ","
                << join_indices(selected_indices(merged.solutions[point.member].mask)) << "\n";
        }
    }
}

void write_front_points(const fs::path& out_dir, const std::string& stage, const RunArchive& archive) {
    auto out = open_out(out_dir / ("front_points_" + stage + ".csv"));
    out << "run_id,raw_feature_count,feature_fraction,retrieval_error\n";
    for (const auto& front : archive.fronts) {
        for (const auto& ind : front.solutions) {
            out << front.run_id << "," << ind.objectives.raw_feature_count << ","
                << fmt(ind.objectives.feature_fraction) << "," << fmt(ind.objectives.retrieval_error)
                << "\n";
        }
    }
}

std::string wilcoxon_or_nan(const std::vector<double>& a, const std::vector<double>& b) {
    try {
        return fmt(wilcoxon_signed_rank(a, b));
    } catch (const std::invalid_argument&) {
        return "nan";  // fewer than 5 nonzero differences
    }
}

}  // namespace

void cmd_report(const ReportOptions& opt, std::ostream& diag) {
    if (opt.coarse_dir.empty() && opt.fine_dir.empty())
        throw ValidationError("report: need at least one of --coarse / --fine");
    const auto ds = load_dataset_checked(opt.dataset);
    fs::create_directories(opt.out_dir);

    std::optional<StageData> coarse, fine;
    if (!opt.coarse_dir.empty()) coarse.emplace(load_stage(opt.coarse_dir, ds, opt));
    if (!opt.fine_dir.empty()) fine.emplace(load_stage(opt.fine_dir, ds, opt));

    {
        auto out = open_out(opt.out_dir / "best_subsets.csv");
        out << "stage,run_id,seed,size,search_error,eval_macro_f1,features\n";
        if (coarse) write_best_subsets(out, "coarse", *coarse);
        if (fine) write_best_subsets(out, "fine", *fine);
    }
    {
        auto summary = open_out(opt.out_dir / "stability.csv");
        summary << "stage,subsets,s_index\n";
        if (coarse) write_stability(opt.out_dir, "coarse", *coarse, summary);
        if (fine) write_stability(opt.out_dir, "fine", *fine, summary);
    }
    if (coarse) {
        write_decision_space(opt.out_dir, "coarse", coarse->archive, ds, opt);
        write_front_points(opt.out_dir, "coarse", coarse->archive);
    }
    if (fine) {
        write_decision_space(opt.out_dir, "fine", fine->archive, ds, opt);
        write_front_points(opt.out_dir, "fine", fine->archive);
    }

    // ordered-selection baseline and single-feature ranking need the
    // coarse archive's histogram
    if (coarse) {
        const auto histogram = build_histogram(coarse->archive);
        if (fine) {
            auto out = open_out(opt.out_dir / "ordered_baseline.csv");
            out << "run_id,size,fine_macro_f1,ordered_macro_f1,difference\n";
            const RetrievalEvaluator evaluator(ds, opt.k, opt.split);
            std::vector<double> fine_f1, ordered_f1;
            for (std::size_t run = 0; run < fine->archive.fronts.size(); ++run) {
                const auto& best = *fine->best[run];
                const Mask baseline = ordered_selection(histogram, best.objectives.raw_feature_count);
                const auto obj = evaluator.evaluate(baseline, static_cast<int>(ds.feature_count()));
                fine_f1.push_back(fine->best_eval_f1[run]);
                ordered_f1.push_back(1.0 - obj.retrieval_error);
                out << fine->archive.fronts[run].run_id << "," << best.objectives.raw_feature_count << ","
                    << fmt(fine_f1.back()) << "," << fmt(ordered_f1.back()) << ","
                    << fmt(fine_f1.back() - ordered_f1.back()) << "\n";
            }

            auto wout = open_out(opt.out_dir / "wilcoxon.csv");
            wout << "comparison,pairs,p_value\n";
            const std::size_t pairs = std::min(coarse->best_eval_f1.size(), fine->best_eval_f1.size());
            std::vector<double> c(coarse->best_eval_f1.begin(), coarse->best_eval_f1.begin() + pairs);
            std::vector<double> f(fine->best_eval_f1.begin(), fine->best_eval_f1.begin() + pairs);
            wout << "fine_vs_coarse," << pairs << "," << wilcoxon_or_nan(f, c) << "\n";
            wout << "fine_vs_ordered," << fine_f1.size() << "," << wilcoxon_or_nan(fine_f1, ordered_f1) << "\n";
        }

        const ParetoFront merged = merged_front(coarse->archive);
        const int top_n = std::min(opt.rank_top, static_cast<int>(ds.feature_count()));
        const auto ranking = single_feature_rank(histogram, merged, ds, top_n, opt.split, opt.k);
        auto out = open_out(opt.out_dir / "feature_rank.csv");
        out << "feature_index,singleton_f1,rank_fraction,f1_difference\n";
        for (const auto& entry : ranking) {
            out << entry.feature << "," << fmt(entry.singleton_f1) << "," << fmt(entry.rank_fraction)
                << "," << fmt(entry.f1_difference) << "\n";
        }
    }
    diag << "report written to " << opt.out_dir.string() << "\n";
}

void cmd_export(const ExportOptions& opt) {
    const auto ds = load_dataset_checked(opt.dataset);

    std::vector<int> indices = opt.indices;
    if (indices.empty()) {
        if (opt.front_file.empty())
            throw ValidationError("export: need --indices or --front");
        const auto records = load_jsonl(opt.front_file);
        if (records.empty()) throw ValidationError("export: empty front file");
        ParetoFront front;
        for (const auto& rec : records) {
            Individual ind;
            ind.mask = mask_from_indices(rec.mask, ds.feature_count());
            ind.objectives.raw_feature_count = rec.raw_feature_count;
            ind.objectives.feature_fraction = rec.feature_fraction;
            ind.objectives.retrieval_error = rec.retrieval_error;
            ind.evaluated = true;
            front.solutions.push_back(std::move(ind));
        }
        indices = selected_indices(best_subset(front).mask);
    }
    std::sort(indices.begin(), indices.end());
    for (int f : indices) {
        if (f < 0 || static_cast<std::size_t>(f) >= ds.feature_count())
            throw ValidationError("export: feature index " + std::to_string(f) + " out of range");
    }

    auto out = open_out(opt.out_csv);
    for (int f : indices) out << "f" << f << ",";
    out << "label,split\n";
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
        const auto row = ds.row(r);
        for (int f : indices) out << fmt(row[static_cast<std::size_t>(f)]) << ",";
        out << ds.label(r) << "," << to_string(ds.split(r)) << "\n";
    }
}

}  // namespace evofs
