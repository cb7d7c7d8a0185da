#include "clam/experiment.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "clam/analysis.hpp"
#include "clam/noise.hpp"
#include "clam/rng.hpp"

namespace clam {

void parallel_for_index(std::size_t count, std::size_t threads,
                        const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::min(threads, count);
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

SweepPoint sweep_per_point(const Dataset& dataset, const ClusterLayout& layout,
                           const std::vector<SparseWeightMatrix>& weights, double p_e,
                           std::size_t trials, const RecallConfig& config, std::uint64_t seed,
                           std::uint64_t point_tag, std::size_t threads) {
    if (dataset.size() == 0) throw std::invalid_argument("sweep_per_point: empty dataset");
    config.validate();

    std::vector<std::uint8_t> pattern_fail(trials, 0);
    std::vector<std::uint32_t> symbol_fail(trials, 0);

    parallel_for_index(trials, threads, [&](std::size_t t) {
        Rng rng(derive_seed(seed, point_tag, t));
        const auto truth = dataset.pattern(rng.index(dataset.size()));

        NoiseSpec noise;
        noise.p_e = p_e;
        noise.rng_seed = rng.bits();
        const auto noisy = apply_noise(truth, noise, dataset.alphabet_size());

        const auto res = peel(weights, layout, noisy.pattern, config, dataset.alphabet_size());
        std::uint32_t wrong = 0;
        for (std::size_t j = 0; j < truth.size(); ++j)
            if (res.pattern[j] != truth[j]) ++wrong;
        symbol_fail[t] = wrong;
        pattern_fail[t] = wrong > 0 ? 1 : 0;
    });

    SweepPoint out;
    out.p_e = p_e;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        out.pattern_errors += pattern_fail[t];
        out.symbol_errors += symbol_fail[t];
    }
    out.per = trials ? static_cast<double>(out.pattern_errors) / static_cast<double>(trials) : 0.0;
    out.ser = trials ? static_cast<double>(out.symbol_errors) /
                           (static_cast<double>(trials) * static_cast<double>(dataset.length()))
                     : 0.0;
    return out;
}

std::vector<SweepPoint> sweep_per(const Dataset& dataset, const ClusterLayout& layout,
                                  const std::vector<SparseWeightMatrix>& weights,
                                  const std::vector<double>& p_e_list, std::size_t trials,
                                  const RecallConfig& config, std::uint64_t seed,
                                  std::size_t threads) {
    std::vector<SweepPoint> out;
    out.reserve(p_e_list.size());
    for (std::size_t i = 0; i < p_e_list.size(); ++i)
        out.push_back(sweep_per_point(dataset, layout, weights, p_e_list[i], trials, config, seed,
                                      i, threads));
    return out;
}

double average_cluster_correction(const std::vector<SparseWeightMatrix>& weights,
                                  const RecallConfig& config, std::size_t trials_per_cluster,
                                  std::uint64_t seed) {
    if (weights.empty()) throw std::invalid_argument("average_cluster_correction: no clusters");
    double acc = 0.0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto est =
            pc_monte_carlo(weights[l], config, trials_per_cluster, derive_seed(seed, 0xa77, l));
        acc += est.p_hat;
    }
    return acc / static_cast<double>(weights.size());
}

}  // namespace clam
