#include "clam/degree.hpp"

#include <stdexcept>

#include "clam/linalg.hpp"

namespace clam {

double NodeDegreeDistribution::eval(double x) const { return horner(fraction, x); }

NodeDegreeDistribution node_degree_distribution(const SparseWeightMatrix& weights) {
    const auto degrees = weights.column_degrees();
    std::size_t max_deg = 0;
    for (auto d : degrees) max_deg = std::max(max_deg, d);

    NodeDegreeDistribution out;
    out.fraction.assign(max_deg + 1, 0.0);
    double total = 0.0;
    for (auto d : degrees) {
        out.fraction[d] += 1.0;
        total += static_cast<double>(d);
    }
    const double n = static_cast<double>(degrees.size());
    for (auto& f : out.fraction) f /= n;
    out.mean_degree = total / n;
    return out;
}

EdgeDegreeDistributions edge_degree_distributions(const ClusterLayout& layout) {
    double edge_count = 0.0;
    std::size_t max_neuron_deg = 0;
    std::size_t max_cluster_deg = 0;
    for (std::size_t j = 0; j < layout.neuron_count(); ++j)
        max_neuron_deg = std::max(max_neuron_deg, layout.memberships(j).size());
    for (std::size_t l = 0; l < layout.cluster_count(); ++l) {
        max_cluster_deg = std::max(max_cluster_deg, layout.cluster_size(l));
        edge_count += static_cast<double>(layout.cluster_size(l));
    }

    EdgeDegreeDistributions out;
    out.neuron.assign(max_neuron_deg + 1, 0.0);
    out.cluster.assign(max_cluster_deg + 1, 0.0);
    for (std::size_t j = 0; j < layout.neuron_count(); ++j) {
        const auto d = layout.memberships(j).size();
        out.neuron[d] += static_cast<double>(d) / edge_count;
    }
    for (std::size_t l = 0; l < layout.cluster_count(); ++l) {
        const auto s = layout.cluster_size(l);
        out.cluster[s] += static_cast<double>(s) / edge_count;
    }
    return out;
}

std::vector<double> edge_poly_coeffs(const std::vector<double>& fraction_by_degree) {
    // Degree-0 endpoints carry no edges, so index 0 must be empty mass.
    if (!fraction_by_degree.empty() && fraction_by_degree[0] != 0.0)
        throw std::invalid_argument("edge_poly_coeffs: nonzero mass at degree 0");
    std::vector<double> coeffs;
    if (fraction_by_degree.size() > 1)
        coeffs.assign(fraction_by_degree.begin() + 1, fraction_by_degree.end());
    if (coeffs.empty()) coeffs.push_back(0.0);
    return coeffs;
}

DegreeDistributions collect_degree_distributions(const std::vector<SparseWeightMatrix>& weights,
                                                 const ClusterLayout& layout) {
    if (weights.size() != layout.cluster_count())
        throw std::invalid_argument("collect_degree_distributions: weights/layout mismatch");
    DegreeDistributions out;
    out.node.reserve(weights.size());
    for (const auto& w : weights) out.node.push_back(node_degree_distribution(w));
    out.edge = edge_degree_distributions(layout);
    return out;
}

}  // namespace clam
