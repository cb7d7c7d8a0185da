#pragma once

#include <cstddef>
#include <vector>

#include "clam/cluster_layout.hpp"
#include "clam/sparse_weights.hpp"

namespace clam {

// Node-perspective degree distribution of the pattern neurons inside one
// cluster's bipartite graph: fraction[d] is the share of columns with exactly
// d stored entries; Lambda(x) = sum_d fraction[d] x^d.
struct NodeDegreeDistribution {
    std::vector<double> fraction;
    double mean_degree = 0.0;

    double eval(double x) const;
};

NodeDegreeDistribution node_degree_distribution(const SparseWeightMatrix& weights);

// Edge-perspective distributions of the contracted graph, where the edges are
// the neuron/cluster membership pairs. neuron[d] (resp. cluster[d]) is the
// fraction of edges whose pattern-node (resp. super-constraint-node) endpoint
// has degree d.
struct EdgeDegreeDistributions {
    std::vector<double> neuron;   // lambda-tilde, indexed by degree
    std::vector<double> cluster;  // rho-tilde, indexed by degree
};

EdgeDegreeDistributions edge_degree_distributions(const ClusterLayout& layout);

// Power-basis coefficients of the edge-perspective polynomial
// sum_d frac[d] z^(d-1): coefficient of z^p sits at index p.
std::vector<double> edge_poly_coeffs(const std::vector<double>& fraction_by_degree);

// Full degree summary of a trained network.
struct DegreeDistributions {
    std::vector<NodeDegreeDistribution> node;  // one per cluster
    EdgeDegreeDistributions edge;
};

DegreeDistributions collect_degree_distributions(const std::vector<SparseWeightMatrix>& weights,
                                                 const ClusterLayout& layout);

}  // namespace clam
