#pragma once

#include <cstdint>

#include "clam/cluster_layout.hpp"

namespace clam {

// Random overlapping layout: each neuron's membership count is drawn from a
// narrow distribution around target_membership and assigned to the currently
// smallest clusters, which keeps every cluster size within size_spread of
// n * target_membership / L. Pure function of the seed.
ClusterLayout random_cluster_layout(std::size_t neuron_count, std::size_t cluster_count,
                                    double target_membership, double size_spread,
                                    std::uint64_t seed);

}  // namespace clam
