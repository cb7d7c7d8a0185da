#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "clam/cluster_layout.hpp"
#include "clam/dataset.hpp"
#include "clam/recall.hpp"
#include "clam/sparse_weights.hpp"

namespace clam {

// Runs fn(0..count-1) across a pool of worker threads. Results must be
// written into per-index slots by the callee; the partitioning is static so
// the outcome does not depend on the worker count.
void parallel_for_index(std::size_t count, std::size_t threads,
                        const std::function<void(std::size_t)>& fn);

struct SweepPoint {
    double p_e = 0.0;
    std::size_t trials = 0;
    std::size_t pattern_errors = 0;  // trials not perfectly recovered
    std::size_t symbol_errors = 0;   // total wrong entries after recall
    double per = 0.0;
    double ser = 0.0;
};

// One point of a recall-performance sweep: per trial, draw a training pattern
// uniformly, corrupt it entrywise at p_e, run the peeling recall, and compare
// with the truth. Trial seeds are derived from (seed, point tag, trial), so
// the outcome is a pure function of the arguments.
SweepPoint sweep_per_point(const Dataset& dataset, const ClusterLayout& layout,
                           const std::vector<SparseWeightMatrix>& weights, double p_e,
                           std::size_t trials, const RecallConfig& config, std::uint64_t seed,
                           std::uint64_t point_tag, std::size_t threads);

std::vector<SweepPoint> sweep_per(const Dataset& dataset, const ClusterLayout& layout,
                                  const std::vector<SparseWeightMatrix>& weights,
                                  const std::vector<double>& p_e_list, std::size_t trials,
                                  const RecallConfig& config, std::uint64_t seed,
                                  std::size_t threads);

// Average single-error correction probability over all clusters, estimated
// with trials_per_cluster Monte Carlo trials each.
double average_cluster_correction(const std::vector<SparseWeightMatrix>& weights,
                                  const RecallConfig& config, std::size_t trials_per_cluster,
                                  std::uint64_t seed);

}  // namespace clam
