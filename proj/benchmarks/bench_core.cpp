#include <benchmark/benchmark.h>

#include <vector>

#include "clam/analysis.hpp"
#include "clam/layout_gen.hpp"
#include "clam/learning.hpp"
#include "clam/linalg.hpp"
#include "clam/noise.hpp"
#include "clam/recall.hpp"
#include "clam/rng.hpp"
#include "clam/subspace_gen.hpp"

using namespace clam;

namespace {

Dataset make_data(std::size_t k, std::size_t n) {
    const GeneratorSpec spec{k, n, 2, 2, 8, 3};
    return enumerate_patterns(make_generator_matrix(spec), spec.upsilon, spec.alphabet_size);
}

struct TrainedNetwork {
    Dataset data;
    ClusterLayout layout;
    std::vector<SparseWeightMatrix> weights;
    RecallConfig config;
};

const TrainedNetwork& network() {
    static const TrainedNetwork net = [] {
        Dataset data = make_data(12, 100);
        ClusterLayout layout = random_cluster_layout(100, 12, 5.0, 12.0, 7);
        std::vector<SparseWeightMatrix> weights;
        for (std::size_t l = 0; l < layout.cluster_count(); ++l) {
            RowSpace span(1e-8);
            for (std::size_t mu = 0; mu < data.size(); ++mu) {
                span.insert(extract_subpattern_real(data.pattern(mu), layout, l));
                if (span.rank() == layout.cluster_size(l)) break;
            }
            const std::size_t m = layout.cluster_size(l) - span.rank();
            LearningConfig cfg;
            cfg.seed = derive_seed(7, 0xb, l);
            weights.push_back(learn_cluster(data, layout, l, m, cfg).weights);
        }
        RecallConfig rc;
        rc.sat_tol = calibrate_sat_tol(weights, layout, data);
        return TrainedNetwork{std::move(data), std::move(layout), std::move(weights), rc};
    }();
    return net;
}

}  // namespace

static void BM_learn_step(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    auto w = rng.unit_vector(dim);
    std::vector<double> x(dim);
    for (auto& v : x) v = static_cast<double>(rng.range(0, 7));
    for (auto _ : state) {
        w = learn_step(w, x, 1e-3, 10.0, 0.01);
        benchmark::DoNotOptimize(w.data());
    }
}
BENCHMARK(BM_learn_step)->Arg(40)->Arg(100);

static void BM_learn_constraint(benchmark::State& state) {
    const auto data = make_data(8, 24);
    std::vector<std::size_t> all(24);
    for (std::size_t i = 0; i < 24; ++i) all[i] = i;
    const ClusterLayout layout(24, {all});
    std::uint64_t seed = 0;
    for (auto _ : state) {
        LearningConfig cfg;
        cfg.seed = seed++;
        benchmark::DoNotOptimize(learn_constraint(data, layout, 0, cfg));
    }
}
BENCHMARK(BM_learn_constraint)->Unit(benchmark::kMillisecond);

static void BM_intra_correct_single_error(benchmark::State& state) {
    const auto& net = network();
    const auto truth = net.data.pattern(5);
    auto sub = extract_subpattern(truth, net.layout, 0);
    sub[3] += 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            intra_correct(net.weights[0], sub, net.config, net.data.alphabet_size()));
}
BENCHMARK(BM_intra_correct_single_error);

static void BM_peel_trial(benchmark::State& state) {
    const auto& net = network();
    const double p_e = static_cast<double>(state.range(0)) / 100.0;
    std::uint64_t trial = 0;
    for (auto _ : state) {
        Rng rng(derive_seed(123, trial++));
        const auto truth = net.data.pattern(rng.index(net.data.size()));
        const auto noisy = apply_noise(truth, {p_e, rng.bits()}, net.data.alphabet_size());
        benchmark::DoNotOptimize(
            peel(net.weights, net.layout, noisy.pattern, net.config, net.data.alphabet_size()));
    }
}
BENCHMARK(BM_peel_trial)->Arg(2)->Arg(8)->Unit(benchmark::kMicrosecond);

static void BM_de_threshold(benchmark::State& state) {
    const std::vector<double> lambda{0.0, 0.0, 1.0};
    const std::vector<double> rho{0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(de_threshold(lambda, rho, 1.0, 1e-4));
}
BENCHMARK(BM_de_threshold)->Unit(benchmark::kMillisecond);

static void BM_eigen_spectrum(benchmark::State& state) {
    const auto data = make_data(12, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(eigen_spectrum(data));
}
BENCHMARK(BM_eigen_spectrum)->Arg(24)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_verify_rank(benchmark::State& state) {
    const auto data = make_data(12, 24);
    for (auto _ : state) benchmark::DoNotOptimize(verify_rank(data));
}
BENCHMARK(BM_verify_rank)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
