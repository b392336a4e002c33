// Benchmark for the retrieval objective: the serial full-matrix reference
// versus the optimized evaluator, one mask at a time and as the
// OpenMP-parallel batch kernel. Verifies that all three paths return
// identical objectives before timing them.
//
// usage: evofs_bench [dim] [masks] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evofs/reference.hpp"
#include "evofs/retrieval.hpp"
#include "evofs/rng.hpp"
#include "evofs/synthetic.hpp"

using namespace evofs;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool equal(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.feature_fraction == b.feature_fraction && a.retrieval_error == b.retrieval_error &&
           a.raw_feature_count == b.raw_feature_count && a.per_class_f1 == b.per_class_f1;
}

}  // namespace

int main(int argc, char** argv) {
    const int dim = argc > 1 ? std::atoi(argv[1]) : 512;
    const int n_masks = argc > 2 ? std::atoi(argv[2]) : 64;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

    SyntheticSpec spec;
    spec.feature_count = dim;
    spec.informative_count = dim / 16;
    spec.class_count = 4;
    spec.samples_per_split = {60, 30, 30};
    spec.separation = 1.5;
    spec.seed = 99;
    const auto ds = synthesize(spec).dataset;
    const RetrievalEvaluator evaluator(ds, 3, Split::validation);

    Rng rng(1);
    std::vector<Mask> masks;
    for (int i = 0; i < n_masks; ++i) {
        const int bits = static_cast<int>(rng.uniform_int(1, 50));
        Mask m(static_cast<std::size_t>(dim), 0);
        for (int b : rng.sample_indices(dim, bits)) m[static_cast<std::size_t>(b)] = 1;
        masks.push_back(std::move(m));
    }

#ifdef _OPENMP
    std::printf("dim=%d masks=%d train=%zu queries=%zu threads=%d\n", dim, n_masks,
                evaluator.train_count(), evaluator.query_count(), omp_get_max_threads());
#else
    std::printf("dim=%d masks=%d train=%zu queries=%zu threads=1 (no OpenMP)\n", dim, n_masks,
                evaluator.train_count(), evaluator.query_count());
#endif

    // agreement check before timing
    const auto batch = evaluator.evaluate_batch(masks, dim);
    for (int i = 0; i < n_masks; ++i) {
        const auto serial = evaluator.evaluate(masks[static_cast<std::size_t>(i)], dim);
        const auto ref = reference::evaluate_mask(ds, masks[static_cast<std::size_t>(i)], 3,
                                                  Split::validation, dim);
        if (!equal(serial, ref) || !equal(batch[static_cast<std::size_t>(i)], ref)) {
            std::printf("MISMATCH on mask %d\n", i);
            return 1;
        }
    }
    std::printf("all %d masks agree across the three paths\n\n", n_masks);

    double t_reference = 1e300, t_serial = 1e300, t_batch = 1e300;
    for (int rep = 0; rep < repeats; ++rep) {
        auto t0 = clock_type::now();
        for (const auto& m : masks) (void)reference::evaluate_mask(ds, m, 3, Split::validation, dim);
        t_reference = std::min(t_reference, seconds_since(t0));

        t0 = clock_type::now();
        for (const auto& m : masks) (void)evaluator.evaluate(m, dim);
        t_serial = std::min(t_serial, seconds_since(t0));

        t0 = clock_type::now();
        (void)evaluator.evaluate_batch(masks, dim);
        t_batch = std::min(t_batch, seconds_since(t0));
    }

    const double per = 1e3 / n_masks;
    std::printf("%-28s %9.3f ms/batch  %8.4f ms/mask\n", "serial reference", t_reference * 1e3,
                t_reference * per);
    std::printf("%-28s %9.3f ms/batch  %8.4f ms/mask  (x%.1f vs reference)\n", "optimized serial",
                t_serial * 1e3, t_serial * per, t_reference / t_serial);
    std::printf("%-28s %9.3f ms/batch  %8.4f ms/mask  (x%.1f vs reference, x%.1f vs serial)\n",
                "openmp batch", t_batch * 1e3, t_batch * per, t_reference / t_batch,
                t_serial / t_batch);
    return 0;
}
