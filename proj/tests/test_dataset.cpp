#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "evofs/dataset.hpp"
#include "evofs/errors.hpp"
#include "evofs/rng.hpp"
#include "evofs/synthetic.hpp"

using namespace evofs;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "evofs_dataset_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("load_csv reads a small labeled dataset") {
    const auto path = temp_file("small.csv");
    write_file(path,
               "f0,f1,f2,label,split\n"
               "1,2,3,A,train\n"
               "4,5,6,A,train\n"
               "7,8,9,B,validation\n"
               "1,1,1,B,test\n");
    const auto ds = load_csv(path);
    CHECK(ds.row_count() == 4);
    CHECK(ds.feature_count() == 3);
    CHECK(ds.class_ids() == std::vector<std::string>{"A", "B"});
    CHECK(ds.row(2)[1] == 8.0);
    CHECK(ds.split(3) == Split::test);
    CHECK(ds.label(0) == "A");
}

TEST_CASE("load_csv rejects a missing label column") {
    const auto path = temp_file("nolabel.csv");
    write_file(path, "f0,f1\n1,2\n");
    CHECK_THROWS_AS(load_csv(path), ValidationError);
}

TEST_CASE("load_csv rejects NaN feature cells naming the location") {
    const auto path = temp_file("nan.csv");
    write_file(path, "f0,f1,label\n1,2,A\n3,NaN,B\n");
    try {
        load_csv(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string what = e.what();
        CHECK(what.find("row 2") != std::string::npos);
        CHECK(what.find("f1") != std::string::npos);
    }
}

TEST_CASE("load_csv rejects wrong-arity rows and unknown split tags") {
    const auto bad_arity = temp_file("arity.csv");
    write_file(bad_arity, "f0,f1,label\n1,2,A\n3,B\n");
    CHECK_THROWS_AS(load_csv(bad_arity), ParseError);

    const auto bad_split = temp_file("split.csv");
    write_file(bad_split, "f0,label,split\n1,A,holdout\n");
    CHECK_THROWS_AS(load_csv(bad_split), ValidationError);
}

TEST_CASE("save then load is the identity on the dataset") {
    SyntheticSpec spec;
    spec.feature_count = 9;
    spec.class_count = 3;
    spec.informative_count = 2;
    spec.samples_per_split = {4, 2, 2};
    spec.seed = 77;
    const auto ds = synthesize(spec).dataset;

    const auto path = temp_file("roundtrip.csv");
    save_csv(ds, path);
    const auto back = load_csv(path);

    REQUIRE(back.row_count() == ds.row_count());
    REQUIRE(back.feature_count() == ds.feature_count());
    CHECK(back.class_ids() == ds.class_ids());
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
        CHECK(back.split(r) == ds.split(r));
        CHECK(back.label(r) == ds.label(r));
        for (std::size_t f = 0; f < ds.feature_count(); ++f) {
            CHECK(std::fabs(back.row(r)[f] - ds.row(r)[f]) <= 1e-9);
        }
    }
    CHECK(dataset_fingerprint(back) == dataset_fingerprint(ds));
}

TEST_CASE("mean_feature_vectors averages within groups") {
    const auto path = temp_file("groups.csv");
    write_file(path,
               "f0,f1,label,split,group\n"
               "0,2,A,train,g1\n"
               "2,0,A,train,g1\n"
               "5,5,B,train,g2\n");
    const auto out = mean_feature_vectors(load_csv(path));
    REQUIRE(out.row_count() == 2);
    CHECK(out.row(0)[0] == 1.0);
    CHECK(out.row(0)[1] == 1.0);
    CHECK(out.label(0) == "A");
    CHECK(out.row(1)[0] == 5.0);
    CHECK_FALSE(out.has_groups());
}

TEST_CASE("mean_feature_vectors is idempotent on constant groups") {
    std::vector<double> values;
    std::vector<std::string> labels;
    std::vector<Split> splits;
    std::vector<std::string> groups;
    for (int i = 0; i < 5; ++i) {
        values.insert(values.end(), {3.25, -1.5});
        labels.emplace_back("A");
        splits.push_back(Split::train);
        groups.emplace_back("g");
    }
    const FeatureDataset ds(std::move(values), 2, std::move(labels), std::move(splits), std::move(groups));
    const auto out = mean_feature_vectors(ds);
    REQUIRE(out.row_count() == 1);
    CHECK(out.row(0)[0] == 3.25);
    CHECK(out.row(0)[1] == -1.5);
}

TEST_CASE("mean_feature_vectors rejects groups with mixed labels") {
    const auto path = temp_file("badgroups.csv");
    write_file(path,
               "f0,label,split,group\n"
               "1,A,train,g1\n"
               "2,B,train,g1\n");
    CHECK_THROWS_AS(mean_feature_vectors(load_csv(path)), ValidationError);
}

TEST_CASE("mean_feature_vectors matches a two-pass summation oracle at scale") {
    // 3 slides x 135 patch rows of 1024 features
    const std::size_t d = 1024;
    const int patches = 135;
    Rng rng(2024);
    std::vector<double> values;
    std::vector<std::string> labels;
    std::vector<Split> splits;
    std::vector<std::string> groups;
    for (int g = 0; g < 3; ++g) {
        for (int p = 0; p < patches; ++p) {
            for (std::size_t f = 0; f < d; ++f) values.push_back(rng.normal(g, 1.0));
            labels.push_back("slide" + std::to_string(g));
            splits.push_back(Split::train);
            groups.push_back("w" + std::to_string(g));
        }
    }
    const FeatureDataset ds(std::move(values), d, std::move(labels), std::move(splits), std::move(groups));
    const auto out = mean_feature_vectors(ds);
    REQUIRE(out.row_count() == 3);
    REQUIRE(out.feature_count() == d);

    // independent two-pass mean: accumulate, then divide once
    for (std::size_t g = 0; g < 3; ++g) {
        for (std::size_t f = 0; f < d; f += 97) {
            double sum = 0.0;
            for (int p = 0; p < patches; ++p) sum += ds.row(g * patches + static_cast<std::size_t>(p))[f];
            const double mean = sum / patches;
            CHECK(out.row(g)[f] == doctest::Approx(mean).epsilon(1e-12));
        }
    }
}

TEST_CASE("output row count equals the number of distinct groups") {
    const auto path = temp_file("counts.csv");
    write_file(path,
               "f0,label,split,group\n"
               "1,A,train,x\n"
               "2,A,train,y\n"
               "3,A,train,x\n"
               "4,B,train,z\n");
    CHECK(mean_feature_vectors(load_csv(path)).row_count() == 3);
}

TEST_CASE("synthesize is deterministic and validates its spec") {
    SyntheticSpec spec;
    spec.feature_count = 16;
    spec.informative_count = 3;
    spec.class_count = 2;
    spec.samples_per_split = {5, 3, 3};
    spec.seed = 99;

    const auto a = synthesize(spec);
    const auto b = synthesize(spec);
    CHECK(a.dataset.values() == b.dataset.values());
    CHECK(a.informative_features == b.informative_features);
    CHECK(to_csv(a.dataset) == to_csv(b.dataset));

    SyntheticSpec bad = spec;
    bad.separation = 0.0;
    CHECK_THROWS_AS(synthesize(bad), ValidationError);
    bad = spec;
    bad.informative_count = 17;
    CHECK_THROWS_AS(synthesize(bad), ValidationError);
}

TEST_CASE("synthesize ground truth has the right shape") {
    SyntheticSpec spec;
    spec.feature_count = 32;
    spec.informative_count = 6;
    spec.class_count = 3;
    spec.samples_per_split = {4, 2, 2};
    spec.seed = 5;
    const auto result = synthesize(spec);
    CHECK(result.informative_features.size() == 6);
    std::set<int> distinct(result.informative_features.begin(), result.informative_features.end());
    CHECK(distinct.size() == 6);
    for (int f : result.informative_features) {
        CHECK(f >= 0);
        CHECK(f < 32);
    }
    CHECK(result.dataset.row_count() == 3u * (4 + 2 + 2));
}

TEST_CASE("synthesize separates class means on informative columns only") {
    SyntheticSpec spec;
    spec.feature_count = 64;
    spec.informative_count = 4;
    spec.class_count = 3;
    spec.samples_per_split = {60, 30, 30};
    spec.separation = 3.0;
    spec.noise_sd = 1.0;
    spec.seed = 31;
    const auto result = synthesize(spec);
    const auto& ds = result.dataset;

    const int per_class = 60 + 30 + 30;
    const double se = 1.0 / std::sqrt(per_class);

    std::set<int> informative(result.informative_features.begin(), result.informative_features.end());
    for (std::size_t f = 0; f < 64; ++f) {
        std::vector<double> mean(3, 0.0);
        std::vector<int> count(3, 0);
        for (std::size_t r = 0; r < ds.row_count(); ++r) {
            mean[static_cast<std::size_t>(ds.class_index(r))] += ds.row(r)[f];
            ++count[static_cast<std::size_t>(ds.class_index(r))];
        }
        for (int c = 0; c < 3; ++c) mean[static_cast<std::size_t>(c)] /= count[static_cast<std::size_t>(c)];
        const double gap01 = mean[1] - mean[0];
        const double gap12 = mean[2] - mean[1];
        const double band = 3.0 * se * std::sqrt(2.0);
        if (informative.count(static_cast<int>(f))) {
            CHECK(std::fabs(gap01 - 3.0) <= band);
            CHECK(std::fabs(gap12 - 3.0) <= band);
        } else {
            CHECK(std::fabs(gap01) <= band);
            CHECK(std::fabs(gap12) <= band);
        }
    }
}

TEST_CASE("project keeps rows and selects columns") {
    const auto path = temp_file("project.csv");
    write_file(path,
               "f0,f1,f2,label,split\n"
               "1,2,3,A,train\n"
               "4,5,6,B,validation\n");
    const auto ds = load_csv(path);
    const auto proj = ds.project({2, 0});
    REQUIRE(proj.feature_count() == 2);
    CHECK(proj.row(0)[0] == 3.0);
    CHECK(proj.row(0)[1] == 1.0);
    CHECK(proj.row(1)[0] == 6.0);
    CHECK(proj.label(1) == "B");
}
