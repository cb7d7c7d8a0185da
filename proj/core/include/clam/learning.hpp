#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clam/cluster_layout.hpp"
#include "clam/dataset.hpp"
#include "clam/sparse_weights.hpp"

namespace clam {

// Stochastic-descent schedules for learning one constraint vector. The step
// size decays as alpha_t = alpha0 * alpha_decay / t with t counting epochs
// (full passes over the dataset). alpha0 <= 0 selects the automatic scale
// 1.5 / mean ||x_sub||^2, which puts the average pattern's per-visit step
// slightly past critical for any pattern alphabet; the occasional expansive
// draw is what stochastic descent tolerates anyway and the norm guard caps
// drift. The penalty weight eta is either fixed
// or coupled so that alpha_t * eta_t = kappa stays constant; the soft
// threshold decays as theta_t = theta0 / t. Under the coupled policy entries
// below theta_t shrink by the factor 1 - kappa on every draw, so theta0 sets
// how aggressively the support is pruned.
struct LearningConfig {
    double alpha0 = -1.0;      // <= 0: auto-scale from the training sub-patterns
    double alpha_decay = 0.95;
    bool coupled_eta = true;
    double kappa = 0.75;       // alpha_t * eta_t when coupled
    double eta = 1.0;          // penalty weight when not coupled
    double theta0 = 0.005;
    double sigma = 100.0;      // tanh penalty sharpness
    double epsilon_stop = 1e-6;
    std::size_t max_epochs = 10;
    double zero_epsilon_rel = 1e-4;  // final sparsification cutoff, relative to max|w_i|
    bool require_convergence = true;
    std::uint64_t seed = 0;

    void validate() const;

    static LearningConfig synthetic_defaults() { return LearningConfig{}; }
    // Binary image mode: fixed eta = 1, theta_t = 0.01/t, 200-epoch cap,
    // non-converged constraints accepted (patterns only approximately span a
    // subspace).
    static LearningConfig image_defaults();
};

// Inner product <x, w>.
double project(std::span<const double> x, std::span<const double> w);

// Sparsity penalty g(w) = sum_i tanh(sigma w_i^2) and its exact gradient
// 2 sigma w_i (1 - tanh^2(sigma w_i^2)).
double penalty(std::span<const double> w, double sigma);
std::vector<double> penalty_gradient_exact(std::span<const double> w, double sigma);

// Piecewise gradient surrogate: z_i where |z_i| <= theta, else 0.
std::vector<double> soft_threshold(std::span<const double> z, double theta);

// One stochastic step:
//   w' = w - alpha ( y (x - y w / ||w||^2) + eta * soft_threshold(w, theta) )
// with y = <x, w>. No renormalization.
std::vector<double> learn_step(std::span<const double> w, std::span<const double> x, double alpha,
                               double eta, double theta);

// Mean squared projection of w over all sub-patterns of cluster l.
double cost(std::span<const double> w, const Dataset& dataset, const ClusterLayout& layout,
            std::size_t l);

struct ConstraintResult {
    std::vector<double> w;
    std::vector<double> cost_trace;  // cost after each epoch
    bool converged = false;
    std::size_t epochs = 0;
};

// Learns one constraint vector for cluster l: uniform random pattern draws
// with learn_step until the cost drops to epsilon_stop or the epoch cap is
// hit, then sparsifies small entries and canonicalizes the sign (largest
// magnitude entry positive). Non-convergence returns the best vector seen
// with converged = false.
ConstraintResult learn_constraint(const Dataset& dataset, const ClusterLayout& layout,
                                  std::size_t l, const LearningConfig& config);

struct ClusterResult {
    SparseWeightMatrix weights;
    std::vector<ConstraintResult> constraints;
};

// Learns m linearly independent constraints from independent seeds; dependent
// or (by default) non-converged results are re-drawn under a bounded retry
// budget.
ClusterResult learn_cluster(const Dataset& dataset, const ClusterLayout& layout, std::size_t l,
                            std::size_t m, const LearningConfig& config);

}  // namespace clam
