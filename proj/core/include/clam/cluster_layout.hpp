#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace clam {

// L overlapping index sets into [0, n). Every neuron belongs to at least one
// cluster and the membership map is the exact inverse of the cluster lists.
class ClusterLayout {
public:
    ClusterLayout(std::size_t neuron_count, std::vector<std::vector<std::size_t>> clusters);

    std::size_t neuron_count() const { return neuron_count_; }   // n
    std::size_t cluster_count() const { return clusters_.size(); }  // L

    const std::vector<std::size_t>& cluster(std::size_t l) const;
    const std::vector<std::size_t>& memberships(std::size_t neuron) const;
    const std::vector<std::vector<std::size_t>>& clusters() const { return clusters_; }

    std::size_t cluster_size(std::size_t l) const { return cluster(l).size(); }

private:
    std::size_t neuron_count_;
    std::vector<std::vector<std::size_t>> clusters_;
    std::vector<std::vector<std::size_t>> membership_;
};

// Restriction of a pattern to cluster l's indices, in index order.
std::vector<int> extract_subpattern(std::span<const int> pattern, const ClusterLayout& layout,
                                    std::size_t l);
std::vector<double> extract_subpattern_real(std::span<const int> pattern,
                                            const ClusterLayout& layout, std::size_t l);

}  // namespace clam
