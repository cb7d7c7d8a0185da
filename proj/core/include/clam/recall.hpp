#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clam/cluster_layout.hpp"
#include "clam/dataset.hpp"
#include "clam/sparse_weights.hpp"

namespace clam {

struct RecallConfig {
    double phi = 0.82;   // feedback threshold for updating a pattern neuron
    double psi = 0.005;  // constraint activation threshold
    std::size_t t_max = 20;
    std::size_t peel_rounds_max = 80;
    // Syndrome tolerance for "satisfied". Negative selects the automatic
    // per-cluster value 1e-6 * max row 1-norm, suitable for exact-subspace
    // data; approximate-subspace pipelines calibrate an absolute value.
    double sat_tol = -1.0;

    void validate() const;
};

double resolve_sat_tol(const RecallConfig& config, const SparseWeightMatrix& weights);

// Absolute syndrome tolerance for weights learned by stochastic descent:
// 1.5x the largest |h| over all constraints of all clusters on the
// noise-free training patterns, so every training pattern counts as
// satisfied while genuine +/-1 errors (|h| at the weight-entry scale) stay
// detectable.
double calibrate_sat_tol(const std::vector<SparseWeightMatrix>& weights,
                         const ClusterLayout& layout, const Dataset& dataset);

struct SyndromeResult {
    std::vector<double> h;  // W * x, one value per constraint neuron
    bool satisfied = false;
};

SyndromeResult cluster_syndrome(const SparseWeightMatrix& weights, std::span<const int> state,
                                double sat_tol);

// Forward step: y_i = sign(h_i) gated by |h_i| > psi; sign(0) = 0.
std::vector<int> constraint_signs(std::span<const double> h, double psi);

// Backward step: g_j = sum_i W_ij y_i / sum_i |W_ij| (0 for empty columns).
std::vector<double> neuron_feedback(const SparseWeightMatrix& weights, std::span<const int> y);

struct IntraCorrectResult {
    std::vector<int> state;
    bool satisfied = false;
    std::size_t iterations = 0;  // update rounds executed
};

// Forward/backward bit-flipping rounds: neurons with |g_j| > phi step by
// -sign(g_j), clamped into [0, Q-1]; exits early once the syndrome is
// satisfied or a round changes nothing.
IntraCorrectResult intra_correct(const SparseWeightMatrix& weights, std::span<const int> state,
                                 const RecallConfig& config, int alphabet_size);

// Same dynamics on a subspace deviation (no alphabet clamping). This is the
// single-error engine behind the cluster-level correction probability: the
// deviation plays the role of noise around an interior null-space pattern.
IntraCorrectResult correct_deviation(const SparseWeightMatrix& weights,
                                     std::span<const int> deviation, const RecallConfig& config);

// Contraction of each cluster's constraint neurons into one super node.
struct ContractedGraph {
    std::vector<std::vector<std::size_t>> super_nodes;   // cluster -> neuron indices
    std::vector<std::vector<std::size_t>> neuron_edges;  // neuron -> cluster ids
};

ContractedGraph build_contracted(const ClusterLayout& layout);

struct PeelEvent {
    std::size_t round = 0;
    std::size_t cluster = 0;
    bool attempted = false;  // cluster was unsatisfied and ran the corrector
    bool succeeded = false;  // satisfied after the visit
    std::size_t changed_neurons = 0;
};

struct PeelResult {
    std::vector<int> pattern;
    bool success = false;
    std::size_t rounds = 0;
    std::vector<PeelEvent> log;
};

// Round-robin schedule over clusters: an unsatisfied cluster runs
// intra_correct on a snapshot of its sub-pattern; the result is committed
// only when the cluster ends satisfied, otherwise the snapshot is discarded
// (neurons revert to their values at the start of that attempt). Success once
// every super node is satisfied; failure when rounds run out or a full round
// makes no progress.
PeelResult peel(const std::vector<SparseWeightMatrix>& weights, const ClusterLayout& layout,
                std::span<const int> noisy, const RecallConfig& config, int alphabet_size);

}  // namespace clam
