#include "clam/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clam/linalg.hpp"
#include "clam/rng.hpp"

namespace clam {

void LearningConfig::validate() const {
    if (alpha_decay <= 0.0) throw std::invalid_argument("LearningConfig: alpha_decay must be > 0");
    if (sigma <= 0.0) throw std::invalid_argument("LearningConfig: sigma must be > 0");
    if (theta0 < 0.0) throw std::invalid_argument("LearningConfig: theta0 must be >= 0");
    if (epsilon_stop < 0.0) throw std::invalid_argument("LearningConfig: epsilon_stop must be >= 0");
    if (max_epochs == 0) throw std::invalid_argument("LearningConfig: max_epochs must be >= 1");
    if (zero_epsilon_rel < 0.0)
        throw std::invalid_argument("LearningConfig: zero_epsilon_rel must be >= 0");
    if (coupled_eta) {
        if (!(kappa < 1.0) || kappa < 0.0)
            throw std::invalid_argument("LearningConfig: coupled policy needs 0 <= kappa < 1");
    } else if (eta < 0.0) {
        throw std::invalid_argument("LearningConfig: eta must be >= 0");
    }
}

LearningConfig LearningConfig::image_defaults() {
    LearningConfig c;
    c.coupled_eta = false;
    c.eta = 1.0;
    c.theta0 = 0.01;
    c.max_epochs = 200;
    c.require_convergence = false;
    return c;
}

double project(std::span<const double> x, std::span<const double> w) {
    if (x.size() != w.size()) throw std::invalid_argument("project: length mismatch");
    return dot(x, w);
}

double penalty(std::span<const double> w, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("penalty: sigma must be > 0");
    double s = 0.0;
    for (double v : w) s += std::tanh(sigma * v * v);
    return s;
}

std::vector<double> penalty_gradient_exact(std::span<const double> w, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("penalty_gradient_exact: sigma must be > 0");
    std::vector<double> g(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double t = std::tanh(sigma * w[i] * w[i]);
        g[i] = 2.0 * sigma * w[i] * (1.0 - t * t);
    }
    return g;
}

std::vector<double> soft_threshold(std::span<const double> z, double theta) {
    if (theta < 0.0) throw std::invalid_argument("soft_threshold: theta must be >= 0");
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::abs(z[i]) <= theta ? z[i] : 0.0;
    return out;
}

std::vector<double> learn_step(std::span<const double> w, std::span<const double> x, double alpha,
                               double eta, double theta) {
    if (w.size() != x.size()) throw std::invalid_argument("learn_step: length mismatch");
    const double wn2 = norm2(w);
    if (wn2 <= 0.0) throw std::invalid_argument("learn_step: zero-norm weight vector");
    const double y = dot(x, w);
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double gamma_i = std::abs(w[i]) <= theta ? w[i] : 0.0;
        out[i] = w[i] - alpha * (y * (x[i] - y * w[i] / wn2) + eta * gamma_i);
    }
    return out;
}

double cost(std::span<const double> w, const Dataset& dataset, const ClusterLayout& layout,
            std::size_t l) {
    if (dataset.size() == 0) throw std::invalid_argument("cost: empty dataset");
    const auto& idx = layout.cluster(l);
    if (w.size() != idx.size()) throw std::invalid_argument("cost: weight length mismatch");
    double acc = 0.0;
    for (std::size_t mu = 0; mu < dataset.size(); ++mu) {
        const auto p = dataset.pattern(mu);
        double y = 0.0;
        for (std::size_t i = 0; i < idx.size(); ++i) y += w[i] * static_cast<double>(p[idx[i]]);
        acc += y * y;
    }
    return acc / static_cast<double>(dataset.size());
}

namespace {

// Flat copy of one cluster's sub-patterns, for the hot training loop.
struct SubpatternBuffer {
    std::size_t count;
    std::size_t width;
    std::vector<double> flat;
    double max_norm2 = 0.0;
    double mean_norm2 = 0.0;

    SubpatternBuffer(const Dataset& dataset, const ClusterLayout& layout, std::size_t l)
        : count(dataset.size()), width(layout.cluster_size(l)) {
        const auto& idx = layout.cluster(l);
        flat.resize(count * width);
        for (std::size_t mu = 0; mu < count; ++mu) {
            const auto p = dataset.pattern(mu);
            double n2 = 0.0;
            for (std::size_t i = 0; i < width; ++i) {
                const double v = static_cast<double>(p[idx[i]]);
                flat[mu * width + i] = v;
                n2 += v * v;
            }
            max_norm2 = std::max(max_norm2, n2);
            mean_norm2 += n2;
        }
        mean_norm2 /= static_cast<double>(count);
    }

    std::span<const double> at(std::size_t mu) const { return {flat.data() + mu * width, width}; }

    double mean_cost(std::span<const double> w) const {
        double acc = 0.0;
        for (std::size_t mu = 0; mu < count; ++mu) {
            const double y = dot(at(mu), w);
            acc += y * y;
        }
        return acc / static_cast<double>(count);
    }
};

void sparsify_in_place(std::vector<double>& w, double rel_cutoff) {
    double max_abs = 0.0;
    for (double v : w) max_abs = std::max(max_abs, std::abs(v));
    const double cutoff = rel_cutoff * max_abs;
    for (auto& v : w)
        if (std::abs(v) <= cutoff) v = 0.0;
}

void canonicalize_sign(std::vector<double>& w) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (std::abs(w[i]) > std::abs(w[arg])) arg = i;
    if (w[arg] < 0.0)
        for (auto& v : w) v = -v;
}

}  // namespace

ConstraintResult learn_constraint(const Dataset& dataset, const ClusterLayout& layout,
                                  std::size_t l, const LearningConfig& config) {
    config.validate();
    if (dataset.size() == 0) throw std::invalid_argument("learn_constraint: empty dataset");

    const SubpatternBuffer data(dataset, layout, l);
    const double alpha_base =
        config.alpha0 > 0.0 ? config.alpha0 : 1.5 / std::max(data.mean_norm2, 1.0);

    // Norm-positivity precondition: alpha_1 * eta < 1.
    if (!config.coupled_eta) {
        const double alpha1 = alpha_base * config.alpha_decay;
        if (!(alpha1 * config.eta < 1.0))
            throw std::invalid_argument("learn_constraint: alpha_1 * eta must be < 1");
    }

    Rng rng(derive_seed(config.seed, 0x6c65726e, l));
    ConstraintResult res;
    res.w = rng.unit_vector(data.width);

    std::vector<double> best_w = res.w;
    double best_cost = std::numeric_limits<double>::infinity();

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        const double alpha = alpha_base * config.alpha_decay / static_cast<double>(epoch);
        const double eta = config.coupled_eta ? config.kappa / alpha : config.eta;
        const double theta = config.theta0 / static_cast<double>(epoch);

        for (std::size_t step = 0; step < data.count; ++step) {
            const auto x = data.at(rng.index(data.count));
            res.w = learn_step(res.w, x, alpha, eta, theta);
            // Numeric drift guard only; the update itself never renormalizes.
            const double n = norm(res.w);
            if (n < 0.1 || n > 10.0) {
                const double inv = 1.0 / n;
                for (auto& v : res.w) v *= inv;
            }
        }

        const double e = data.mean_cost(res.w);
        res.cost_trace.push_back(e);
        res.epochs = epoch;
        if (e < best_cost) {
            best_cost = e;
            best_w = res.w;
        }
        if (e <= config.epsilon_stop) {
            res.converged = true;
            break;
        }
    }

    if (!res.converged) res.w = best_w;
    sparsify_in_place(res.w, config.zero_epsilon_rel);
    canonicalize_sign(res.w);
    return res;
}

ClusterResult learn_cluster(const Dataset& dataset, const ClusterLayout& layout, std::size_t l,
                            std::size_t m, const LearningConfig& config) {
    config.validate();
    const std::size_t width = layout.cluster_size(l);

    RowSpace span(1e-8);
    std::vector<std::vector<double>> rows;
    std::vector<ConstraintResult> kept;
    const int retry_budget = 25;

    for (std::size_t c = 0; c < m; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < retry_budget; ++attempt) {
            LearningConfig local = config;
            local.seed = derive_seed(config.seed, l, c, static_cast<std::uint64_t>(attempt));
            auto res = learn_constraint(dataset, layout, l, local);
            if (!res.converged && config.require_convergence) continue;
            if (!span.insert(res.w)) continue;  // linearly dependent, redraw
            rows.push_back(res.w);
            kept.push_back(std::move(res));
            placed = true;
            break;
        }
        if (!placed)
            throw std::runtime_error("learn_cluster: retry budget exhausted for constraint " +
                                     std::to_string(c));
    }

    // Rows arrive already sparsified at this cutoff; re-deriving it here only
    // records the epsilon on the matrix.
    return ClusterResult{sparsify_rows(l, rows, width, config.zero_epsilon_rel), std::move(kept)};
}

}  // namespace clam
