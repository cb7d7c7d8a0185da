#include "clam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "clam/linalg.hpp"
#include "clam/rng.hpp"

namespace clam {

namespace {

void validate_distribution(std::span<const double> coeffs, const char* name) {
    if (coeffs.empty()) throw std::invalid_argument(std::string(name) + ": empty coefficients");
    double sum = 0.0;
    for (double c : coeffs) {
        if (c < 0.0) throw std::invalid_argument(std::string(name) + ": negative coefficient");
        sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(name) + ": coefficients must sum to 1");
}

}  // namespace

void DEParams::validate() const {
    validate_distribution(edge_lambda, "DEParams.edge_lambda");
    validate_distribution(edge_rho, "DEParams.edge_rho");
    if (!(p_c >= 0.0 && p_c <= 1.0)) throw std::invalid_argument("DEParams: p_c outside [0, 1]");
    if (!(p_e >= 0.0 && p_e <= 1.0)) throw std::invalid_argument("DEParams: p_e outside [0, 1]");
}

double de_step(double z, const DEParams& params) {
    if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("de_step: z outside [0, 1]");
    const double pi = 1.0 - params.p_c * horner(params.edge_rho, 1.0 - z);
    return params.p_e * horner(params.edge_lambda, pi);
}

std::vector<double> de_trajectory(const DEParams& params, std::size_t max_steps) {
    params.validate();
    if (max_steps == 0) throw std::invalid_argument("de_trajectory: max_steps must be >= 1");
    std::vector<double> traj{params.p_e};
    for (std::size_t t = 0; t < max_steps; ++t) {
        const double next = de_step(traj.back(), params);
        const bool fixed = std::abs(next - traj.back()) < 1e-12;
        traj.push_back(next);
        if (fixed) break;
    }
    return traj;
}

double de_threshold(std::span<const double> edge_lambda, std::span<const double> edge_rho,
                    double p_c, double tol) {
    validate_distribution(edge_lambda, "de_threshold.edge_lambda");
    validate_distribution(edge_rho, "de_threshold.edge_rho");
    if (!(p_c >= 0.0 && p_c <= 1.0)) throw std::invalid_argument("de_threshold: p_c outside [0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("de_threshold: tol must be > 0");

    const auto step = [&](double z, double p_e) {
        return p_e * horner(edge_lambda, 1.0 - p_c * horner(edge_rho, 1.0 - z));
    };

    const std::size_t grid = 10000;
    const auto holds = [&](double p_e) {
        if (p_e <= 0.0) return true;
        double worst_margin = std::numeric_limits<double>::infinity();
        double worst_z = 0.0;
        for (std::size_t i = 1; i < grid; ++i) {
            const double z = p_e * static_cast<double>(i) / static_cast<double>(grid);
            const double margin = z - step(z, p_e);
            if (margin <= 0.0) return false;
            if (margin < worst_margin) {
                worst_margin = margin;
                worst_z = z;
            }
        }
        // Refine around the tightest point; a violation interval narrower
        // than the grid spacing would otherwise slip through. The window is
        // clamped to the first grid point: for p_c < 1 the recursion always
        // keeps a sub-resolution floor near z = 0 (a neuron whose clusters
        // all fail stays noisy), and probing below the grid would declare
        // every threshold zero.
        const double h = p_e / static_cast<double>(grid);
        const std::size_t fine = 200;
        for (std::size_t i = 0; i <= fine; ++i) {
            const double z =
                worst_z - h + 2.0 * h * static_cast<double>(i) / static_cast<double>(fine);
            if (z < h || z >= p_e) continue;
            if (z - step(z, p_e) <= 0.0) return false;
        }
        return true;
    };

    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double pc_lower_bound(std::span<const double> node_lambda, double mean_degree, std::size_t m,
                      std::size_t n_l) {
    validate_distribution(node_lambda, "pc_lower_bound.node_lambda");
    if (n_l < 1) throw std::invalid_argument("pc_lower_bound: n_l must be >= 1");
    if (m == 0 || mean_degree > static_cast<double>(m))
        throw std::invalid_argument("pc_lower_bound: mean degree exceeds constraint count");
    const double miss = horner(node_lambda, mean_degree / static_cast<double>(m));
    return std::pow(1.0 - miss, static_cast<double>(n_l - 1));
}

MonteCarloEstimate pc_monte_carlo(const SparseWeightMatrix& weights, const RecallConfig& config,
                                  std::size_t trials, std::uint64_t seed) {
    config.validate();
    if (trials == 0) throw std::invalid_argument("pc_monte_carlo: trials must be >= 1");

    MonteCarloEstimate est;
    est.trials = trials;
    std::vector<int> deviation(weights.cols(), 0);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, 0x70636d63, t));
        const std::size_t pos = rng.index(weights.cols());
        const int sign = rng.bernoulli(0.5) ? 1 : -1;
        std::fill(deviation.begin(), deviation.end(), 0);
        deviation[pos] = sign;

        const auto res = correct_deviation(weights, deviation, config);
        bool clean = true;
        for (int v : res.state)
            if (v != 0) {
                clean = false;
                break;
            }
        if (clean) ++est.successes;
    }
    est.p_hat = static_cast<double>(est.successes) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
    return est;
}

std::vector<double> eigen_spectrum(const Dataset& dataset) {
    if (dataset.size() == 0) throw std::invalid_argument("eigen_spectrum: empty dataset");
    const std::size_t n = dataset.length();

    std::vector<double> a(n * n, 0.0);
    for (std::size_t mu = 0; mu < dataset.size(); ++mu) {
        const auto x = dataset.pattern(mu);
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = static_cast<double>(x[i]);
            if (xi == 0.0) continue;
            for (std::size_t j = i; j < n; ++j) a[i * n + j] += xi * static_cast<double>(x[j]);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) a[i * n + j] = a[j * n + i];

    auto eig = jacobi_eigenvalues(std::move(a), n);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    const double max_eig = eig.empty() ? 0.0 : std::max(eig.front(), 0.0);
    for (auto& v : eig)
        if (v < 1e-10 * max_eig) v = 0.0;
    return eig;
}

}  // namespace clam
