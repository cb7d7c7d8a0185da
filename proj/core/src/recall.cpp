#include "clam/recall.hpp"

#include "clam/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace clam {

void RecallConfig::validate() const {
    if (!(phi > 0.0 && phi <= 1.0)) throw std::invalid_argument("RecallConfig: phi outside (0, 1]");
    if (psi < 0.0) throw std::invalid_argument("RecallConfig: psi must be >= 0");
    if (t_max == 0) throw std::invalid_argument("RecallConfig: t_max must be >= 1");
}

double resolve_sat_tol(const RecallConfig& config, const SparseWeightMatrix& weights) {
    if (config.sat_tol >= 0.0) return config.sat_tol;
    return 1e-6 * weights.max_row_abs_sum();
}

SyndromeResult cluster_syndrome(const SparseWeightMatrix& weights, std::span<const int> state,
                                double sat_tol) {
    if (state.size() != weights.cols())
        throw std::invalid_argument("cluster_syndrome: state length mismatch");
    SyndromeResult out;
    out.h.assign(weights.rows(), 0.0);
    for (const auto& e : weights.entries()) out.h[e.row] += e.value * state[e.col];
    out.satisfied = true;
    for (double v : out.h) {
        if (std::abs(v) > sat_tol) {
            out.satisfied = false;
            break;
        }
    }
    return out;
}

std::vector<int> constraint_signs(std::span<const double> h, double psi) {
    std::vector<int> y(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (std::abs(h[i]) > psi)
            y[i] = h[i] > 0.0 ? 1 : -1;
        else
            y[i] = 0;
    }
    return y;
}

std::vector<double> neuron_feedback(const SparseWeightMatrix& weights, std::span<const int> y) {
    if (y.size() != weights.rows())
        throw std::invalid_argument("neuron_feedback: y length mismatch");
    std::vector<double> g(weights.cols(), 0.0);
    for (std::size_t j = 0; j < weights.cols(); ++j) {
        double num = 0.0;
        double den = 0.0;
        for (const auto& e : weights.column(j)) {
            num += e.value * y[e.row];
            den += std::abs(e.value);
        }
        g[j] = den > 0.0 ? num / den : 0.0;
    }
    return g;
}

namespace {

// Shared forward/backward loop; lo/hi bound the updated states.
IntraCorrectResult run_correction(const SparseWeightMatrix& weights, std::span<const int> state,
                                  const RecallConfig& config, int lo, int hi) {
    config.validate();
    const double sat_tol = resolve_sat_tol(config, weights);

    IntraCorrectResult res;
    res.state.assign(state.begin(), state.end());

    for (std::size_t t = 0; t < config.t_max; ++t) {
        const auto syn = cluster_syndrome(weights, res.state, sat_tol);
        if (syn.satisfied) {
            res.satisfied = true;
            return res;
        }
        const auto y = constraint_signs(syn.h, config.psi);
        const auto g = neuron_feedback(weights, y);

        bool changed = false;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (std::abs(g[j]) > config.phi) {
                const int step = g[j] > 0.0 ? 1 : -1;
                const int next = std::clamp(res.state[j] - step, lo, hi);
                if (next != res.state[j]) {
                    res.state[j] = next;
                    changed = true;
                }
            }
        }
        res.iterations = t + 1;
        if (!changed) return res;  // stalled; the syndrome cannot move further
    }

    res.satisfied = cluster_syndrome(weights, res.state, sat_tol).satisfied;
    return res;
}

}  // namespace

IntraCorrectResult intra_correct(const SparseWeightMatrix& weights, std::span<const int> state,
                                 const RecallConfig& config, int alphabet_size) {
    if (alphabet_size < 2) throw std::invalid_argument("intra_correct: alphabet size must be >= 2");
    return run_correction(weights, state, config, 0, alphabet_size - 1);
}

IntraCorrectResult correct_deviation(const SparseWeightMatrix& weights,
                                     std::span<const int> deviation, const RecallConfig& config) {
    const int inf = std::numeric_limits<int>::max() / 2;
    return run_correction(weights, deviation, config, -inf, inf);
}

double calibrate_sat_tol(const std::vector<SparseWeightMatrix>& weights,
                         const ClusterLayout& layout, const Dataset& dataset) {
    if (weights.size() != layout.cluster_count())
        throw std::invalid_argument("calibrate_sat_tol: weights/layout mismatch");
    if (dataset.size() == 0) throw std::invalid_argument("calibrate_sat_tol: empty dataset");

    std::vector<double> values;
    for (std::size_t mu = 0; mu < dataset.size(); ++mu) {
        for (std::size_t l = 0; l < weights.size(); ++l) {
            const auto sub = extract_subpattern(dataset.pattern(mu), layout, l);
            const auto syn = cluster_syndrome(weights[l], sub, 0.0);
            for (double h : syn.h) values.push_back(std::abs(h));
        }
    }
    if (values.empty()) return 0.0;
    // Headroom over the worst training syndrome: every training pattern must
    // count as satisfied, otherwise its residual (far below the integer
    // correction scale) can never be cleared and the cluster is stuck
    // unsatisfied forever.
    double max_abs = 0.0;
    for (double v : values) max_abs = std::max(max_abs, v);
    return 1.5 * max_abs;
}

ContractedGraph build_contracted(const ClusterLayout& layout) {
    ContractedGraph g;
    g.super_nodes.reserve(layout.cluster_count());
    for (std::size_t l = 0; l < layout.cluster_count(); ++l)
        g.super_nodes.push_back(layout.cluster(l));
    g.neuron_edges.reserve(layout.neuron_count());
    for (std::size_t j = 0; j < layout.neuron_count(); ++j)
        g.neuron_edges.push_back(layout.memberships(j));
    return g;
}

PeelResult peel(const std::vector<SparseWeightMatrix>& weights, const ClusterLayout& layout,
                std::span<const int> noisy, const RecallConfig& config, int alphabet_size) {
    config.validate();
    if (weights.size() != layout.cluster_count())
        throw std::invalid_argument("peel: one weight matrix per cluster required");
    if (noisy.size() != layout.neuron_count())
        throw std::invalid_argument("peel: pattern length mismatch");

    PeelResult res;
    res.pattern.assign(noisy.begin(), noisy.end());

    std::vector<double> sat_tol(weights.size());
    for (std::size_t l = 0; l < weights.size(); ++l)
        sat_tol[l] = resolve_sat_tol(config, weights[l]);

    auto unsatisfied = [&](std::size_t l) {
        const auto sub = extract_subpattern(res.pattern, layout, l);
        return !cluster_syndrome(weights[l], sub, sat_tol[l]).satisfied;
    };

    auto all_satisfied = [&]() {
        for (std::size_t l = 0; l < weights.size(); ++l)
            if (unsatisfied(l)) return false;
        return true;
    };

    if (all_satisfied()) {
        res.success = true;
        return res;
    }

    for (std::size_t round = 1; round <= config.peel_rounds_max; ++round) {
        res.rounds = round;
        bool progress = false;
        for (std::size_t l = 0; l < weights.size(); ++l) {
            PeelEvent ev;
            ev.round = round;
            ev.cluster = l;

            auto sub = extract_subpattern(res.pattern, layout, l);
            const auto before = cluster_syndrome(weights[l], sub, sat_tol[l]);
            if (before.satisfied) {
                ev.succeeded = true;
                res.log.push_back(ev);
                continue;
            }

            ev.attempted = true;
            auto attempt = intra_correct(weights[l], sub, config, alphabet_size);
            if (attempt.satisfied) {
                ev.succeeded = true;
                const auto& idx = layout.cluster(l);
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    if (res.pattern[idx[i]] != attempt.state[i]) {
                        res.pattern[idx[i]] = attempt.state[i];
                        ++ev.changed_neurons;
                    }
                }
                if (ev.changed_neurons > 0) progress = true;
            }
            // On failure the attempt's states are simply discarded; the
            // committed pattern still holds the values from the start of this
            // visit.
            res.log.push_back(ev);
        }

        if (all_satisfied()) {
            res.success = true;
            return res;
        }
        if (!progress) return res;  // deterministic, nothing will change next round
    }
    return res;
}

}  // namespace clam
