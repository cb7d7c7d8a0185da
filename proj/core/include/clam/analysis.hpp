#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clam/dataset.hpp"
#include "clam/recall.hpp"
#include "clam/sparse_weights.hpp"

namespace clam {

// Fixed-point recursion parameters. Edge-perspective polynomials are given as
// power-basis coefficient vectors: coeffs[p] multiplies z^p, so the classic
// pair lambda(z) = z^2, rho(z) = z^5 reads {0,0,1} / {0,0,0,0,0,1}.
struct DEParams {
    std::vector<double> edge_lambda;
    std::vector<double> edge_rho;
    double p_c = 1.0;  // probability a cluster corrects a single internal error
    double p_e = 0.0;  // initial per-neuron corruption probability

    void validate() const;
};

// One recursion step z' = p_e * lambda(1 - p_c * rho(1 - z)).
double de_step(double z, const DEParams& params);

// Iterates from z(0) = p_e until the step change drops below 1e-12 or
// max_steps; returns the whole trajectory including z(0).
std::vector<double> de_trajectory(const DEParams& params, std::size_t max_steps);

// Largest p_e for which p_e * lambda(1 - p_c * rho(1 - z)) < z holds for all
// z in (0, p_e), located by bisection to absolute tolerance tol. The
// predicate is checked on a dense grid with local refinement around the
// tightest point.
double de_threshold(std::span<const double> edge_lambda, std::span<const double> edge_rho,
                    double p_c, double tol);

// Closed-form lower bound (1 - Lambda(mean_degree / m))^(n_l - 1) on the
// probability that a cluster corrects a single error. node_lambda[d] is the
// fraction of pattern neurons with degree d.
double pc_lower_bound(std::span<const double> node_lambda, double mean_degree, std::size_t m,
                      std::size_t n_l);

struct MonteCarloEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
    std::size_t successes = 0;
};

// Empirical single-error correction probability: each trial plants one +/-1
// error at a uniform position of a null-space pattern and runs the
// intra-cluster corrector on the deviation; success means the deviation
// returns to exactly zero.
MonteCarloEstimate pc_monte_carlo(const SparseWeightMatrix& weights, const RecallConfig& config,
                                  std::size_t trials, std::uint64_t seed);

// Eigenvalues of the correlation matrix X^T X, descending, computed by Jacobi
// rotations; values below 1e-10 * max are clamped to zero.
std::vector<double> eigen_spectrum(const Dataset& dataset);

}  // namespace clam
