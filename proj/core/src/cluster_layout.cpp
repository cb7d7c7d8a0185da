#include "clam/cluster_layout.hpp"

#include <stdexcept>
#include <string>

namespace clam {

ClusterLayout::ClusterLayout(std::size_t neuron_count,
                             std::vector<std::vector<std::size_t>> clusters)
    : neuron_count_(neuron_count), clusters_(std::move(clusters)) {
    if (neuron_count_ == 0) throw std::invalid_argument("ClusterLayout: zero neurons");
    if (clusters_.empty()) throw std::invalid_argument("ClusterLayout: no clusters");

    membership_.assign(neuron_count_, {});
    for (std::size_t l = 0; l < clusters_.size(); ++l) {
        const auto& c = clusters_[l];
        if (c.empty())
            throw std::invalid_argument("ClusterLayout: cluster " + std::to_string(l) + " is empty");
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] >= neuron_count_)
                throw std::invalid_argument("ClusterLayout: index out of range in cluster " +
                                            std::to_string(l));
            if (i > 0 && c[i] <= c[i - 1])
                throw std::invalid_argument(
                    "ClusterLayout: indices not strictly increasing in cluster " + std::to_string(l));
            membership_[c[i]].push_back(l);
        }
    }
    for (std::size_t j = 0; j < neuron_count_; ++j) {
        if (membership_[j].empty())
            throw std::invalid_argument("ClusterLayout: neuron " + std::to_string(j) +
                                        " belongs to no cluster");
    }
}

const std::vector<std::size_t>& ClusterLayout::cluster(std::size_t l) const {
    if (l >= clusters_.size()) throw std::out_of_range("ClusterLayout: cluster id out of range");
    return clusters_[l];
}

const std::vector<std::size_t>& ClusterLayout::memberships(std::size_t neuron) const {
    if (neuron >= neuron_count_) throw std::out_of_range("ClusterLayout: neuron out of range");
    return membership_[neuron];
}

std::vector<int> extract_subpattern(std::span<const int> pattern, const ClusterLayout& layout,
                                    std::size_t l) {
    if (pattern.size() != layout.neuron_count())
        throw std::invalid_argument("extract_subpattern: pattern length mismatch");
    const auto& idx = layout.cluster(l);
    std::vector<int> sub(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) sub[i] = pattern[idx[i]];
    return sub;
}

std::vector<double> extract_subpattern_real(std::span<const int> pattern,
                                            const ClusterLayout& layout, std::size_t l) {
    if (pattern.size() != layout.neuron_count())
        throw std::invalid_argument("extract_subpattern: pattern length mismatch");
    const auto& idx = layout.cluster(l);
    std::vector<double> sub(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) sub[i] = static_cast<double>(pattern[idx[i]]);
    return sub;
}

}  // namespace clam
