#include "clam/layout_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "clam/rng.hpp"

namespace clam {

ClusterLayout random_cluster_layout(std::size_t neuron_count, std::size_t cluster_count,
                                    double target_membership, double size_spread,
                                    std::uint64_t seed) {
    if (cluster_count == 0 || neuron_count < cluster_count)
        throw std::invalid_argument("random_cluster_layout: need n >= L >= 1");
    if (target_membership < 1.0)
        throw std::invalid_argument("random_cluster_layout: target membership must be >= 1");
    if (target_membership > static_cast<double>(cluster_count))
        throw std::invalid_argument("random_cluster_layout: target membership exceeds cluster count");

    Rng rng(seed);

    // Membership counts: floor(target) + Bernoulli(fractional part).
    const double base = std::floor(target_membership);
    const double frac = target_membership - base;
    std::vector<std::size_t> member_count(neuron_count);
    for (auto& m : member_count) {
        double v = base + (rng.bernoulli(frac) ? 1.0 : 0.0);
        v = std::clamp(v, 1.0, static_cast<double>(cluster_count));
        m = static_cast<std::size_t>(v);
    }

    // Capacity-balanced assignment: each neuron joins the smallest clusters,
    // with seeded random tie-breaking among equal sizes.
    std::vector<std::vector<std::size_t>> clusters(cluster_count);
    std::vector<bool> covered(neuron_count, false);
    std::vector<std::size_t> order(cluster_count);
    for (std::size_t j = 0; j < neuron_count; ++j) {
        const auto tiebreak = rng.permutation(cluster_count);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (clusters[a].size() != clusters[b].size())
                return clusters[a].size() < clusters[b].size();
            return tiebreak[a] < tiebreak[b];
        });
        for (std::size_t i = 0; i < member_count[j]; ++i) clusters[order[i]].push_back(j);
        if (member_count[j] > 0) covered[j] = true;
    }

    // Orphan guard; unreachable with member counts >= 1 but cheap to keep.
    for (std::size_t j = 0; j < neuron_count; ++j) {
        if (!covered[j]) {
            auto smallest = std::min_element(clusters.begin(), clusters.end(),
                                             [](const auto& a, const auto& b) {
                                                 return a.size() < b.size();
                                             });
            smallest->push_back(j);
        }
    }

    for (auto& c : clusters) std::sort(c.begin(), c.end());

    const double target_size =
        static_cast<double>(neuron_count) * target_membership / static_cast<double>(cluster_count);
    for (std::size_t l = 0; l < cluster_count; ++l) {
        const double dev = std::abs(static_cast<double>(clusters[l].size()) - target_size);
        if (dev > size_spread)
            throw std::runtime_error("random_cluster_layout: cluster " + std::to_string(l) +
                                     " size deviates by " + std::to_string(dev) +
                                     ", beyond the requested spread");
    }

    return ClusterLayout(neuron_count, std::move(clusters));
}

}  // namespace clam
