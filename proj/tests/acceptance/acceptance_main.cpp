// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.
//
// argv[1] must be the path to the evofs CLI binary (used by the
// determinism criterion).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evofs/analysis.hpp"
#include "evofs/front_io.hpp"
#include "evofs/innovization.hpp"
#include "evofs/moea.hpp"
#include "evofs/retrieval.hpp"
#include "evofs/rng.hpp"
#include "evofs/synthetic.hpp"
#include "oracles.hpp"

using namespace evofs;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void criterion(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

// ---- shared planted-feature setup (criteria 2, 4, 5, 6, 7) ----

constexpr int kDim = 256;
constexpr int kRuns = 10;        // coarse and fine runs per replicate
constexpr int kReplicates = 10;  // independent seeds
constexpr int kNff = 30;

SyntheticDataset planted_dataset() {
    SyntheticSpec spec;
    spec.feature_count = kDim;
    spec.informative_count = 8;
    spec.class_count = 4;
    spec.samples_per_split = {40, 20, 20};
    spec.separation = 1.5;
    spec.noise_sd = 1.0;
    spec.seed = 424242;
    return synthesize(spec);
}

EngineConfig planted_engine(std::uint64_t seed) {
    EngineConfig cfg;
    cfg.stage_dim = kDim;
    cfg.cf = 20;
    cfg.population_size = 20;
    cfg.max_generations = 50;
    cfg.seed = seed;
    return cfg;
}

struct Replicate {
    RunArchive coarse;
    std::vector<ParetoFront> fine;
    double coarse_mean_test_f1 = 0.0, fine_mean_test_f1 = 0.0;
    double coarse_mean_size = 0.0, fine_mean_size = 0.0;
    double s_coarse = 0.0, s_fine = 0.0;
    double run0_test_f1 = 0.0;                       // coarse run 0 best subset
    double fine_mean_val_f1 = 0.0, ordered_mean_val_f1 = 0.0;
    double max_coarse_run_seconds = 0.0;
};

Replicate run_replicate(const FeatureDataset& ds, int rep) {
    Replicate out;
    const std::uint64_t base = static_cast<std::uint64_t>(rep) * 1000;

    out.coarse.dataset_fingerprint = dataset_fingerprint(ds);
    for (int r = 0; r < kRuns; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        out.coarse.fronts.push_back(run_engine(ds, planted_engine(base + static_cast<std::uint64_t>(r)), {}, r));
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        out.max_coarse_run_seconds = std::max(out.max_coarse_run_seconds, dt.count());
    }
    const auto histogram = build_histogram(out.coarse);
    for (int r = 0; r < kRuns; ++r) {
        out.fine.push_back(run_fine_stage(ds, out.coarse, kNff,
                                          planted_engine(base + static_cast<std::uint64_t>(kRuns + r)), r));
    }

    const RetrievalEvaluator test_eval(ds, 3, Split::test);
    const RetrievalEvaluator val_eval(ds, 3, Split::validation);
    std::vector<std::vector<int>> coarse_sets, fine_sets;
    for (int r = 0; r < kRuns; ++r) {
        const auto& cb = best_subset(out.coarse.fronts[static_cast<std::size_t>(r)]);
        const auto& fb = best_subset(out.fine[static_cast<std::size_t>(r)]);
        coarse_sets.push_back(selected_indices(cb.mask));
        fine_sets.push_back(selected_indices(fb.mask));

        const double c_f1 = 1.0 - test_eval.evaluate(cb.mask, kDim).retrieval_error;
        const double f_f1 = 1.0 - test_eval.evaluate(fb.mask, kDim).retrieval_error;
        out.coarse_mean_test_f1 += c_f1;
        out.fine_mean_test_f1 += f_f1;
        out.coarse_mean_size += cb.objectives.raw_feature_count;
        out.fine_mean_size += fb.objectives.raw_feature_count;
        if (r == 0) out.run0_test_f1 = c_f1;

        // equal-size frequency-prefix baseline, on the optimization split
        const Mask ordered = ordered_selection(histogram, fb.objectives.raw_feature_count);
        out.fine_mean_val_f1 += 1.0 - fb.objectives.retrieval_error;
        out.ordered_mean_val_f1 += 1.0 - val_eval.evaluate(ordered, kDim).retrieval_error;
    }
    out.coarse_mean_test_f1 /= kRuns;
    out.fine_mean_test_f1 /= kRuns;
    out.coarse_mean_size /= kRuns;
    out.fine_mean_size /= kRuns;
    out.fine_mean_val_f1 /= kRuns;
    out.ordered_mean_val_f1 /= kRuns;
    out.s_coarse = stability(coarse_sets);
    out.s_fine = stability(fine_sets);
    return out;
}

// ---- criteria ----

void criterion_1_nds_oracle() {
    Rng rng(20260811);
    bool all_match = true;
    double sort_seconds = 0.0;
    for (int instance = 0; instance < 50; ++instance) {
        std::vector<std::array<double, 2>> points;
        for (int i = 0; i < 200; ++i) {
            // mixed continuous and gridded coordinates so duplicates occur
            if (rng.bernoulli(0.2)) {
                points.push_back({static_cast<double>(rng.uniform_int(0, 9)) / 9.0,
                                  static_cast<double>(rng.uniform_int(0, 9)) / 9.0});
            } else {
                points.push_back({rng.uniform_real(), rng.uniform_real()});
            }
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto fronts = nondominated_sort(points);
        sort_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (fronts != oracle::nds(points)) all_match = false;
    }
    criterion(1, "non-dominated sort matches the O(n^2) oracle", all_match && sort_seconds < 1.0,
              fmt("50 instances of 200 points, sort time %.3f s", sort_seconds));
}

void criterion_2_constraint(const FeatureDataset& ds) {
    long long violations = 0;
    long long evaluations = 0;
    const EngineConfig cfg = planted_engine(1000);
    run_engine(ds, cfg, {}, 0, [&](const Mask& mask, const ObjectiveVector&) {
        ++evaluations;
        const int bits = popcount(mask);
        if (bits < 1 || bits > 20) ++violations;
    });
    criterion(2, "every evaluated mask stays inside [1, CF]",
              violations == 0 && evaluations == 20LL * 51LL,
              fmt("%g violations in %g evaluations", static_cast<double>(violations),
                  static_cast<double>(evaluations)));
}

void criterion_3_freqscore(const Replicate& rep) {
    // serialize the archive, reload it, and recount Eq.-style scores from
    // the records alone
    const auto dir = fs::temp_directory_path() / "evofs_acceptance" / "freq";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<std::vector<FrontRecord>> per_run;
    for (int r = 0; r < kRuns; ++r) {
        const auto path = dir / ("run_" + std::to_string(r) + ".jsonl");
        save_jsonl(front_records(rep.coarse.fronts[static_cast<std::size_t>(r)], {"c000", "c001", "c002", "c003"}),
                   path);
        per_run.push_back(load_jsonl(path));
    }

    const auto histogram = build_histogram(rep.coarse);
    double worst = 0.0;
    for (int f = 0; f < kDim; ++f) {
        double expected = 0.0;
        for (const auto& records : per_run) {
            std::set<std::vector<int>> distinct;
            for (const auto& record : records) distinct.insert(record.mask);
            int fr = 0;
            for (const auto& mask : distinct) fr += std::binary_search(mask.begin(), mask.end(), f) ? 1 : 0;
            if (fr > 0) expected += 1.0 + static_cast<double>(fr) / kRuns;
        }
        worst = std::max(worst, std::fabs(freq_score(rep.coarse, f) - expected));
        worst = std::max(worst, std::fabs(histogram.scores[static_cast<std::size_t>(f)] - expected));
    }
    criterion(3, "FreqScore equals an independent recount over serialized fronts", worst <= 1e-12,
              fmt("max |difference| = %.2e over 10 runs x %g features", worst, kDim));
}

void criterion_4_planted_recovery(const FeatureDataset& ds, const std::vector<Replicate>& reps) {
    const double baseline =
        1.0 - evaluate_mask(ds, Mask(kDim, 1), 3, Split::test, kDim).retrieval_error;
    int wins = 0;
    double max_seconds = 0.0;
    for (const auto& rep : reps) {
        if (rep.run0_test_f1 - baseline >= 0.05) ++wins;
        max_seconds = std::max(max_seconds, rep.max_coarse_run_seconds);
    }
    criterion(4, "coarse best subset beats the all-features baseline by 0.05",
              wins >= 8 && max_seconds < 300.0,
              fmt("%g/10 seeds, baseline F1 %.3f, slowest run %.1f s", wins, baseline, max_seconds));
}

void criterion_5_fine_direction(const std::vector<Replicate>& reps) {
    std::vector<double> diffs, coarse_sizes, fine_sizes;
    for (const auto& rep : reps) {
        diffs.push_back(rep.fine_mean_test_f1 - rep.coarse_mean_test_f1);
        coarse_sizes.push_back(rep.coarse_mean_size);
        fine_sizes.push_back(rep.fine_mean_size);
    }
    const double med_diff = median(diffs);
    const double med_coarse = median(coarse_sizes);
    const double med_fine = median(fine_sizes);
    criterion(5, "fine stage keeps F1 within 0.02 of coarse at no larger size",
              med_diff >= -0.02 && med_fine <= med_coarse,
              fmt("median F1 diff %+.4f, median size %.1f vs %.1f", med_diff, med_fine, med_coarse));
}

void criterion_6_stability(const std::vector<Replicate>& reps) {
    int wins = 0;
    double mean_fine = 0.0, mean_coarse = 0.0;
    for (const auto& rep : reps) {
        if (rep.s_fine > rep.s_coarse) ++wins;
        mean_fine += rep.s_fine;
        mean_coarse += rep.s_coarse;
    }
    criterion(6, "fine-stage subsets are more stable than coarse",
              wins >= 8,
              fmt("%g/10 replicates, mean S %.3f vs %.3f", wins, mean_fine / kReplicates,
                  mean_coarse / kReplicates));
}

void criterion_7_ordered_baseline(const std::vector<Replicate>& reps) {
    int wins = 0;
    for (const auto& rep : reps) {
        if (rep.fine_mean_val_f1 >= rep.ordered_mean_val_f1) ++wins;
    }
    criterion(7, "fine subsets match or beat the equal-size frequency prefix", wins >= 7,
              fmt("%g/10 seeds on the optimization split", wins));
}

void criterion_8_wilcoxon() {
    const double fixture =
        wilcoxon_signed_rank({2, 3, 4, 5, 6}, {1, 2, 3, 4, 5});
    bool ok = fixture == 0.0625;

    Rng rng(7777);
    double worst = 0.0;
    int cases = 0;
    while (cases < 20) {
        const int n = static_cast<int>(rng.uniform_int(5, 12));
        std::vector<double> a, b, diffs;
        int nonzero = 0;
        for (int i = 0; i < n; ++i) {
            const double d = static_cast<double>(rng.uniform_int(-4, 4));
            b.push_back(static_cast<double>(rng.uniform_int(0, 9)));
            a.push_back(b.back() + d);
            diffs.push_back(d);
            nonzero += d != 0.0 ? 1 : 0;
        }
        if (nonzero < 5) continue;
        ++cases;
        worst = std::max(worst, std::fabs(wilcoxon_signed_rank(a, b) - oracle::wilcoxon_two_sided(diffs)));
    }
    ok = ok && worst <= 1e-15;
    criterion(8, "signed-rank p-values equal full sign enumeration for n <= 12", ok,
              fmt("all-positive n=5 case %.4f, max |difference| %.1e over 20 cases", fixture, worst));
}

void criterion_9_determinism(const std::string& cli) {
    const auto dir = fs::temp_directory_path() / "evofs_acceptance" / "determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto shell = [&](const std::string& command) {
        return std::system((command + " > /dev/null 2>&1").c_str()) == 0;
    };

    const std::string dataset = (dir / "ds.csv").string();
    bool ok = shell(cli + " synth --dim 64 --informative 4 --classes 3 --train 12 --val 6 --test 6" +
                    " --separation 2.0 --seed 9 --out " + dataset);

    std::ofstream config(dir / "run.cfg");
    config << "dataset = " << dataset << "\nr = 2\nnff = 12\nseed = 5\ncf = 10\nnp = 8\n"
           << "generations = 6\nfine_np = 8\nfine_generations = 6\n";
    config.close();

    auto pipeline = [&](const std::string& out) {
        return shell(cli + " coarse --config " + (dir / "run.cfg").string() + " --out " + out) &&
               shell(cli + " ffh --archive " + out + "/coarse --nff 12 --out " + out) &&
               shell(cli + " fine --config " + (dir / "run.cfg").string() + " --out " + out +
                     " --ffh " + out + "/ffh_top.csv") &&
               shell(cli + " report --coarse " + out + "/coarse --fine " + out + "/fine --dataset " +
                     dataset + " --out " + out + "/report");
    };
    ok = ok && pipeline((dir / "out1").string()) && pipeline((dir / "out2").string());

    int compared = 0;
    bool identical = ok;
    if (ok) {
        for (const auto& entry : fs::recursive_directory_iterator(dir / "out1")) {
            if (!entry.is_regular_file()) continue;
            const auto rel = fs::relative(entry.path(), dir / "out1");
            std::ifstream a(entry.path(), std::ios::binary), b(dir / "out2" / rel, std::ios::binary);
            std::ostringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            if (sa.str() != sb.str()) identical = false;
            ++compared;
        }
    }
    criterion(9, "two full pipeline executions are byte-identical", ok && identical && compared > 10,
              fmt("%g files compared", compared));
}

void criterion_10_fixtures() {
    const double s = stability({{1, 2}, {2, 3}, {1, 2}});
    const double j = jaccard({1, 2, 3}, {2, 3, 4});
    criterion(10, "stability and Jaccard formula fixtures", std::fabs(s - 5.0 / 9.0) <= 1e-12 && j == 0.5,
              fmt("S = %.12f, J = %.2f", s, j));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    std::printf("building the planted-feature replicates (%d x %d coarse + %d fine runs)...\n",
                kReplicates, kRuns, kRuns);
    std::fflush(stdout);
    const auto data = planted_dataset();
    std::vector<Replicate> replicates;
    for (int rep = 1; rep <= kReplicates; ++rep) replicates.push_back(run_replicate(data.dataset, rep));

    criterion_1_nds_oracle();
    criterion_2_constraint(data.dataset);
    criterion_3_freqscore(replicates.front());
    criterion_4_planted_recovery(data.dataset, replicates);
    criterion_5_fine_direction(replicates);
    criterion_6_stability(replicates);
    criterion_7_ordered_baseline(replicates);
    criterion_8_wilcoxon();
    if (!cli.empty()) {
        criterion_9_determinism(cli);
    } else {
        criterion(9, "two full pipeline executions are byte-identical", false,
                  "pass the evofs CLI path as argv[1]");
    }
    criterion_10_fixtures();

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures;
}
