// clam: clustered associative memory toolkit.
//
// Subcommands cover the full batch-experiment loop: synthetic dataset
// generation, layout generation, constraint learning, recall, performance
// sweeps, degree reports, density-evolution analysis, eigen spectra, and the
// grayscale image pipeline. Every command is a pure function of its flags and
// seed; rerunning with the same arguments reproduces every output byte.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "clam/analysis.hpp"
#include "clam/degree.hpp"
#include "clam/experiment.hpp"
#include "clam/image.hpp"
#include "clam/io.hpp"
#include "clam/layout_gen.hpp"
#include "clam/learning.hpp"
#include "clam/linalg.hpp"
#include "clam/noise.hpp"
#include "clam/recall.hpp"
#include "clam/rng.hpp"
#include "clam/subspace_gen.hpp"
#include "clam/version.hpp"

namespace fs = std::filesystem;
using namespace clam;

namespace {

// All floats in CSV output carry 9 significant digits.
std::string g9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

// run.meta: sorted key=value lines next to the primary output.
void write_meta(const fs::path& primary_output, const std::string& command,
                const std::map<std::string, std::string>& kv) {
    fs::path dir = primary_output.has_parent_path() ? primary_output.parent_path() : fs::path(".");
    fs::create_directories(dir);
    std::ofstream out(dir / "run.meta");
    out << "command=" << command << '\n';
    out << "version=" << kVersion << '\n';
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

std::vector<double> parse_coeffs(const std::string& csv) {
    std::vector<double> out;
    std::stringstream s(csv);
    std::string tok;
    while (std::getline(s, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw CLI::ValidationError("empty coefficient list");
    return out;
}

struct LearnFlags {
    double alpha0 = -1.0;
    double alpha_decay = 0.95;
    double kappa = 0.75;
    double eta = -1.0;  // >= 0 switches to the fixed-eta policy
    double theta0 = -1.0;
    double sigma = 100.0;
    double epsilon = -1.0;
    std::size_t max_epochs = 0;
    double zero_eps = 1e-4;
    bool image_mode = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha0", alpha0, "base step size; <=0 auto-scales from the data");
        cmd->add_option("--alpha-decay", alpha_decay, "per-epoch decay constant");
        cmd->add_option("--kappa", kappa, "coupled penalty strength alpha*eta (must stay < 1)");
        cmd->add_option("--eta", eta, "fixed penalty weight; setting this disables the coupling");
        cmd->add_option("--theta0", theta0, "initial soft threshold");
        cmd->add_option("--sigma", sigma, "tanh penalty sharpness");
        cmd->add_option("--epsilon", epsilon, "stopping cost");
        cmd->add_option("--max-epochs", max_epochs, "epoch cap per constraint");
        cmd->add_option("--zero-eps", zero_eps, "relative sparsification cutoff");
        cmd->add_flag("--image-mode", image_mode, "binary image defaults (eta=1, theta0=0.01)");
    }

    LearningConfig build(std::uint64_t seed) const {
        LearningConfig cfg =
            image_mode ? LearningConfig::image_defaults() : LearningConfig::synthetic_defaults();
        cfg.alpha0 = alpha0;
        cfg.alpha_decay = alpha_decay;
        cfg.kappa = kappa;
        cfg.sigma = sigma;
        cfg.zero_epsilon_rel = zero_eps;
        if (eta >= 0.0) {
            cfg.coupled_eta = false;
            cfg.eta = eta;
        }
        if (theta0 >= 0.0) cfg.theta0 = theta0;
        if (epsilon >= 0.0) cfg.epsilon_stop = epsilon;
        if (max_epochs > 0) cfg.max_epochs = max_epochs;
        cfg.seed = seed;
        return cfg;
    }

    void describe(std::map<std::string, std::string>& kv) const {
        kv["alpha0"] = g9(alpha0);
        kv["alpha_decay"] = g9(alpha_decay);
        kv["kappa"] = g9(kappa);
        kv["eta"] = g9(eta);
        kv["theta0"] = g9(theta0);
        kv["sigma"] = g9(sigma);
        kv["epsilon"] = g9(epsilon);
        kv["max_epochs"] = std::to_string(max_epochs);
        kv["zero_eps"] = g9(zero_eps);
        kv["image_mode"] = image_mode ? "1" : "0";
    }
};

struct RecallFlags {
    double phi = 0.82;
    double psi = 0.005;
    std::size_t t_max = 20;
    std::size_t peel_rounds = 80;
    double sat_tol = -1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--phi", phi, "neuron update threshold in (0,1]");
        cmd->add_option("--psi", psi, "constraint activation threshold");
        cmd->add_option("--t-max", t_max, "bit-flipping rounds per cluster attempt");
        cmd->add_option("--peel-rounds", peel_rounds, "round-robin sweeps over the clusters");
        cmd->add_option("--sat-tol", sat_tol,
                        "absolute syndrome tolerance; <0 derives it per cluster");
    }

    RecallConfig build() const {
        RecallConfig cfg;
        cfg.phi = phi;
        cfg.psi = psi;
        cfg.t_max = t_max;
        cfg.peel_rounds_max = peel_rounds;
        cfg.sat_tol = sat_tol;
        return cfg;
    }

    void describe(std::map<std::string, std::string>& kv) const {
        kv["phi"] = g9(phi);
        kv["psi"] = g9(psi);
        kv["t_max"] = std::to_string(t_max);
        kv["peel_rounds"] = std::to_string(peel_rounds);
        kv["sat_tol"] = g9(sat_tol);
    }
};

// Learns every cluster of a layout; m = 0 selects n_l - rank(subpatterns).
// Clusters run in parallel with per-cluster seeds, merged by index.
std::vector<ClusterResult> learn_all_clusters(const Dataset& data, const ClusterLayout& layout,
                                              std::size_t m_fixed, const LearningConfig& base,
                                              std::size_t threads) {
    std::vector<ClusterResult> results(layout.cluster_count(),
                                       ClusterResult{SparseWeightMatrix(0, 0, 1, {}, 0.0), {}});
    std::vector<std::string> errors(layout.cluster_count());
    parallel_for_index(layout.cluster_count(), threads, [&](std::size_t l) {
        try {
            std::size_t m = m_fixed;
            if (m == 0) {
                RowSpace span(1e-8);
                for (std::size_t mu = 0; mu < data.size(); ++mu) {
                    span.insert(extract_subpattern_real(data.pattern(mu), layout, l));
                    if (span.rank() == layout.cluster_size(l)) break;
                }
                if (span.rank() >= layout.cluster_size(l))
                    throw std::runtime_error("cluster " + std::to_string(l) +
                                             ": sub-patterns span the full space, nothing to learn");
                m = layout.cluster_size(l) - span.rank();
            }
            LearningConfig cfg = base;
            cfg.seed = derive_seed(base.seed, 0x636c7573, l);
            results[l] = learn_cluster(data, layout, l, m, cfg);
        } catch (const std::exception& e) {
            errors[l] = e.what();
        }
    });
    for (const auto& err : errors)
        if (!err.empty()) throw std::runtime_error(err);
    return results;
}

// ---------------------------------------------------------------------------
// gen-data
// ---------------------------------------------------------------------------
void setup_gen_data(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen-data", "generate a subspace-structured dataset");
    auto spec = std::make_shared<GeneratorSpec>();
    auto limit = std::make_shared<std::size_t>(0);
    auto allow_reject = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--k", spec->k, "subspace dimension")->required();
    cmd->add_option("--n", spec->n, "pattern length")->required();
    cmd->add_option("--gamma", spec->gamma, "generator alphabet size");
    cmd->add_option("--upsilon", spec->upsilon, "coefficient alphabet size");
    cmd->add_option("--q", spec->alphabet_size, "pattern alphabet size")->required();
    cmd->add_option("--seed", spec->seed, "rng seed");
    cmd->add_option("--limit", *limit, "emit only the first patterns in enumeration order");
    cmd->add_flag("--allow-reject", *allow_reject,
                  "skip out-of-alphabet candidates instead of enforcing the degree bound");
    cmd->add_option("-o,--out", *out, "dataset file")->required();

    cmd->callback([spec, limit, allow_reject, out]() {
        spec->validate();  // fail before touching the filesystem
        const auto g = make_generator_matrix(*spec);
        const auto data = enumerate_patterns(
            g, spec->upsilon, spec->alphabet_size,
            *limit > 0 ? std::optional<std::size_t>(*limit) : std::nullopt, *allow_reject);
        write_dataset(fs::path(*out), data);
        std::map<std::string, std::string> kv{
            {"k", std::to_string(spec->k)},
            {"n", std::to_string(spec->n)},
            {"gamma", std::to_string(spec->gamma)},
            {"upsilon", std::to_string(spec->upsilon)},
            {"q", std::to_string(spec->alphabet_size)},
            {"seed", std::to_string(spec->seed)},
            {"limit", std::to_string(*limit)},
            {"allow_reject", *allow_reject ? "1" : "0"},
            {"patterns", std::to_string(data.size())},
            {"max_column_degree", std::to_string(g.max_column_degree())},
        };
        write_meta(fs::path(*out), "gen-data", kv);
        std::cout << "wrote " << data.size() << " patterns to " << *out << '\n';
    });
}

// ---------------------------------------------------------------------------
// gen-layout
// ---------------------------------------------------------------------------
void setup_gen_layout(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen-layout", "generate a random overlapping cluster layout");
    struct Args {
        std::size_t n = 0, clusters = 0;
        double membership = 5.0, spread = -1.0;
        std::uint64_t seed = 0;
        std::string out;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--n", a->n, "neuron count")->required();
    cmd->add_option("--clusters", a->clusters, "cluster count")->required();
    cmd->add_option("--membership", a->membership, "target clusters per neuron");
    cmd->add_option("--spread", a->spread, "allowed cluster size deviation; <0 picks a default");
    cmd->add_option("--seed", a->seed, "rng seed");
    cmd->add_option("-o,--out", a->out, "layout file")->required();

    cmd->callback([a]() {
        const double target_size =
            static_cast<double>(a->n) * a->membership / static_cast<double>(a->clusters);
        const double spread = a->spread >= 0.0 ? a->spread : std::max(2.0, 0.25 * target_size);
        const auto layout =
            random_cluster_layout(a->n, a->clusters, a->membership, spread, a->seed);
        write_layout(fs::path(a->out), layout);
        write_meta(fs::path(a->out), "gen-layout",
                   {{"n", std::to_string(a->n)},
                    {"clusters", std::to_string(a->clusters)},
                    {"membership", g9(a->membership)},
                    {"spread", g9(spread)},
                    {"seed", std::to_string(a->seed)}});
        std::cout << "wrote layout with " << a->clusters << " clusters to " << a->out << '\n';
    });
}

// ---------------------------------------------------------------------------
// learn
// ---------------------------------------------------------------------------
void setup_learn(CLI::App& app) {
    auto* cmd = app.add_subcommand("learn", "learn sparse constraint matrices for every cluster");
    struct Args {
        std::string data, layout, out, trace;
        std::size_t constraints = 0;
        std::uint64_t seed = 0;
        std::size_t threads = 1;
    };
    auto a = std::make_shared<Args>();
    auto lf = std::make_shared<LearnFlags>();
    cmd->add_option("--data", a->data, "training dataset file")->required();
    cmd->add_option("--layout", a->layout, "cluster layout file")->required();
    cmd->add_option("--constraints", a->constraints,
                    "constraints per cluster; 0 learns the full null space");
    cmd->add_option("--seed", a->seed, "rng seed");
    cmd->add_option("--threads", a->threads, "worker threads across clusters");
    cmd->add_option("-o,--out", a->out, "weights file")->required();
    cmd->add_option("--trace", a->trace, "per-constraint cost trace CSV");
    lf->attach(cmd);

    cmd->callback([a, lf]() {
        const auto data = read_dataset(fs::path(a->data));
        const auto layout = read_layout(fs::path(a->layout));
        LearningConfig base = lf->build(a->seed);
        const auto results = learn_all_clusters(data, layout, a->constraints, base, a->threads);

        std::vector<SparseWeightMatrix> weights;
        weights.reserve(results.size());
        for (const auto& r : results) weights.push_back(r.weights);
        write_weights(fs::path(a->out), weights);

        if (!a->trace.empty()) {
            auto out = open_out(fs::path(a->trace));
            out << "constraint,epoch,cost\n";
            std::size_t id = 0;  // global index, cluster-major
            for (const auto& r : results) {
                for (const auto& c : r.constraints) {
                    for (std::size_t e = 0; e < c.cost_trace.size(); ++e)
                        out << id << ',' << e + 1 << ',' << g9(c.cost_trace[e]) << '\n';
                    ++id;
                }
            }
        }
        std::map<std::string, std::string> kv{{"data", a->data},
                                              {"layout", a->layout},
                                              {"constraints", std::to_string(a->constraints)},
                                              {"seed", std::to_string(a->seed)}};
        lf->describe(kv);
        write_meta(fs::path(a->out), "learn", kv);

        std::size_t trained = 0;
        for (const auto& r : results) trained += r.weights.rows();
        std::cout << "learned " << trained << " constraints across " << layout.cluster_count()
                  << " clusters\n";
    });
}

// ---------------------------------------------------------------------------
// recall
// ---------------------------------------------------------------------------
void setup_recall(CLI::App& app) {
    auto* cmd = app.add_subcommand("recall", "denoise patterns with the peeling schedule");
    struct Args {
        std::string weights, layout, data, out, log, calibrate;
    };
    auto a = std::make_shared<Args>();
    auto rf = std::make_shared<RecallFlags>();
    cmd->add_option("--weights", a->weights, "weights file")->required();
    cmd->add_option("--layout", a->layout, "layout file")->required();
    cmd->add_option("--data", a->data, "noisy patterns (dataset format)")->required();
    cmd->add_option("-o,--out", a->out, "corrected patterns file")->required();
    cmd->add_option("--log", a->log, "per-attempt event log CSV");
    cmd->add_option("--calibrate-data", a->calibrate,
                    "noise-free training dataset used to calibrate the syndrome tolerance");
    rf->attach(cmd);

    cmd->callback([a, rf]() {
        const auto weights = read_weights(fs::path(a->weights));
        const auto layout = read_layout(fs::path(a->layout));
        const auto noisy = read_dataset(fs::path(a->data));
        auto cfg = rf->build();
        if (cfg.sat_tol < 0.0 && !a->calibrate.empty())
            cfg.sat_tol = calibrate_sat_tol(weights, layout, read_dataset(fs::path(a->calibrate)));

        std::vector<int> corrected;
        corrected.reserve(noisy.flat().size());
        std::ofstream log;
        if (!a->log.empty()) {
            log = open_out(fs::path(a->log));
            log << "pattern,round,cluster,attempted,succeeded,changed_neurons\n";
        }
        std::size_t failures = 0;
        for (std::size_t i = 0; i < noisy.size(); ++i) {
            const auto res = peel(weights, layout, noisy.pattern(i), cfg, noisy.alphabet_size());
            corrected.insert(corrected.end(), res.pattern.begin(), res.pattern.end());
            if (!res.success) ++failures;
            if (log.is_open()) {
                for (const auto& ev : res.log)
                    log << i << ',' << ev.round << ',' << ev.cluster << ','
                        << (ev.attempted ? 1 : 0) << ',' << (ev.succeeded ? 1 : 0) << ','
                        << ev.changed_neurons << '\n';
            }
        }
        write_dataset(fs::path(a->out), Dataset(noisy.length(), noisy.alphabet_size(), corrected));

        std::map<std::string, std::string> kv{
            {"weights", a->weights}, {"layout", a->layout}, {"data", a->data}};
        rf->describe(kv);
        write_meta(fs::path(a->out), "recall", kv);
        std::cout << noisy.size() - failures << "/" << noisy.size() << " patterns satisfied\n";
    });
}

// ---------------------------------------------------------------------------
// sweep-per
// ---------------------------------------------------------------------------
void setup_sweep_per(CLI::App& app) {
    auto* cmd = app.add_subcommand("sweep-per", "pattern/symbol error rates against noise level");
    struct Args {
        std::string data, layout, weights, out, pe_csv;
        std::size_t trials = 1000;
        std::uint64_t seed = 0;
        std::size_t threads = 1;
    };
    auto a = std::make_shared<Args>();
    auto rf = std::make_shared<RecallFlags>();
    cmd->add_option("--data", a->data, "training dataset file")->required();
    cmd->add_option("--layout", a->layout, "layout file")->required();
    cmd->add_option("--weights", a->weights, "weights file")->required();
    cmd->add_option("--pe", a->pe_csv, "comma-separated corruption probabilities")->required();
    cmd->add_option("--trials", a->trials, "trials per point");
    cmd->add_option("--seed", a->seed, "rng seed");
    cmd->add_option("--threads", a->threads, "worker threads across trials");
    cmd->add_option("-o,--out", a->out, "sweep CSV")->required();
    rf->attach(cmd);

    cmd->callback([a, rf]() {
        const auto data = read_dataset(fs::path(a->data));
        const auto layout = read_layout(fs::path(a->layout));
        const auto weights = read_weights(fs::path(a->weights));
        const auto pes = parse_coeffs(a->pe_csv);
        auto cfg = rf->build();
        // Learned weights are only approximately orthogonal to the training
        // set; the satisfied test needs a tolerance calibrated on it.
        if (cfg.sat_tol < 0.0) cfg.sat_tol = calibrate_sat_tol(weights, layout, data);
        const auto points =
            sweep_per(data, layout, weights, pes, a->trials, cfg, a->seed, a->threads);

        auto out = open_out(fs::path(a->out));
        out << "p_e,trials,pattern_errors,PER,symbol_errors,SER\n";
        for (const auto& p : points)
            out << g9(p.p_e) << ',' << p.trials << ',' << p.pattern_errors << ',' << g9(p.per)
                << ',' << p.symbol_errors << ',' << g9(p.ser) << '\n';

        std::map<std::string, std::string> kv{{"data", a->data},
                                              {"layout", a->layout},
                                              {"weights", a->weights},
                                              {"pe", a->pe_csv},
                                              {"trials", std::to_string(a->trials)},
                                              {"seed", std::to_string(a->seed)}};
        rf->describe(kv);
        write_meta(fs::path(a->out), "sweep-per", kv);
        std::cout << "wrote " << points.size() << " sweep points to " << a->out << '\n';
    });
}

// ---------------------------------------------------------------------------
// degree-report
// ---------------------------------------------------------------------------
void setup_degree_report(CLI::App& app) {
    auto* cmd = app.add_subcommand("degree-report", "normalized degree histograms per cluster");
    auto weights_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--weights", *weights_path, "weights file")->required();
    cmd->add_option("-o,--out", *out_path, "histogram CSV")->required();

    cmd->callback([weights_path, out_path]() {
        const auto weights = read_weights(fs::path(*weights_path));
        auto out = open_out(fs::path(*out_path));
        out << "cluster,side,degree,normalized_degree,fraction\n";
        for (const auto& w : weights) {
            // Pattern side: column degrees out of m constraint neurons.
            const auto node = node_degree_distribution(w);
            const double m = static_cast<double>(w.rows());
            for (std::size_t d = 0; d < node.fraction.size(); ++d) {
                if (node.fraction[d] == 0.0) continue;
                out << w.cluster_id() << ",pattern," << d << ','
                    << g9(m > 0 ? static_cast<double>(d) / m : 0.0) << ',' << g9(node.fraction[d])
                    << '\n';
            }
            // Constraint side: row degrees out of n_l pattern neurons.
            std::vector<std::size_t> row_deg(w.rows(), 0);
            for (const auto& e : w.entries()) row_deg[e.row]++;
            std::map<std::size_t, double> hist;
            for (auto d : row_deg) hist[d] += 1.0;
            for (const auto& [d, count] : hist) {
                out << w.cluster_id() << ",constraint," << d << ','
                    << g9(static_cast<double>(d) / static_cast<double>(w.cols())) << ','
                    << g9(count / std::max(m, 1.0)) << '\n';
            }
        }
        write_meta(fs::path(*out_path), "degree-report", {{"weights", *weights_path}});
        std::cout << "wrote degree report to " << *out_path << '\n';
    });
}

// ---------------------------------------------------------------------------
// de-threshold / de-curve
// ---------------------------------------------------------------------------
void setup_de_threshold(CLI::App& app) {
    auto* cmd = app.add_subcommand("de-threshold", "noise threshold of the peeling recursion");
    struct Args {
        std::string lambda, rho, out;
        double pc = 1.0, tol = 1e-4;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--lambda", a->lambda, "edge-perspective neuron coefficients, power basis")
        ->required();
    cmd->add_option("--rho", a->rho, "edge-perspective cluster coefficients, power basis")
        ->required();
    cmd->add_option("--pc", a->pc, "single-error correction probability");
    cmd->add_option("--tol", a->tol, "absolute bisection tolerance");
    cmd->add_option("-o,--out", a->out, "optional curve CSV (p_e,z_limit,success)");

    cmd->callback([a]() {
        const auto lambda = parse_coeffs(a->lambda);
        const auto rho = parse_coeffs(a->rho);
        const double threshold = de_threshold(lambda, rho, a->pc, a->tol);
        std::cout << "p_e_threshold = " << g9(threshold) << '\n';
        if (!a->out.empty()) {
            auto out = open_out(fs::path(a->out));
            out << "p_e,z_limit,success\n";
            for (int i = 1; i <= 40; ++i) {
                const double pe = static_cast<double>(i) / 40.0;
                DEParams params{lambda, rho, a->pc, pe};
                const double z = de_trajectory(params, 100000).back();
                out << g9(pe) << ',' << g9(z) << ',' << (z < 1e-9 ? 1 : 0) << '\n';
            }
            write_meta(fs::path(a->out), "de-threshold",
                       {{"lambda", a->lambda},
                        {"rho", a->rho},
                        {"pc", g9(a->pc)},
                        {"tol", g9(a->tol)},
                        {"threshold", g9(threshold)}});
        }
    });
}

void setup_de_curve(CLI::App& app) {
    auto* cmd = app.add_subcommand("de-curve", "fixed-point limits of the peeling recursion");
    struct Args {
        std::string lambda, rho, out;
        double pc = 1.0, pe_min = 0.0, pe_max = 1.0;
        std::size_t points = 50;
        std::size_t max_steps = 100000;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--lambda", a->lambda, "edge-perspective neuron coefficients, power basis")
        ->required();
    cmd->add_option("--rho", a->rho, "edge-perspective cluster coefficients, power basis")
        ->required();
    cmd->add_option("--pc", a->pc, "single-error correction probability");
    cmd->add_option("--pe-min", a->pe_min, "lowest corruption probability");
    cmd->add_option("--pe-max", a->pe_max, "highest corruption probability");
    cmd->add_option("--points", a->points, "grid size");
    cmd->add_option("--max-steps", a->max_steps, "iteration cap per point");
    cmd->add_option("-o,--out", a->out, "curve CSV (p_e,z_limit,success)")->required();

    cmd->callback([a]() {
        const auto lambda = parse_coeffs(a->lambda);
        const auto rho = parse_coeffs(a->rho);
        if (a->points < 2) throw CLI::ValidationError("--points must be >= 2");
        auto out = open_out(fs::path(a->out));
        out << "p_e,z_limit,success\n";
        for (std::size_t i = 0; i < a->points; ++i) {
            const double pe = a->pe_min + (a->pe_max - a->pe_min) * static_cast<double>(i) /
                                              static_cast<double>(a->points - 1);
            DEParams params{lambda, rho, a->pc, pe};
            const double z = de_trajectory(params, a->max_steps).back();
            out << g9(pe) << ',' << g9(z) << ',' << (z < 1e-9 ? 1 : 0) << '\n';
        }
        write_meta(fs::path(a->out), "de-curve",
                   {{"lambda", a->lambda},
                    {"rho", a->rho},
                    {"pc", g9(a->pc)},
                    {"pe_min", g9(a->pe_min)},
                    {"pe_max", g9(a->pe_max)},
                    {"points", std::to_string(a->points)}});
        std::cout << "wrote " << a->points << " curve points to " << a->out << '\n';
    });
}

// ---------------------------------------------------------------------------
// eigen
// ---------------------------------------------------------------------------
void setup_eigen(CLI::App& app) {
    auto* cmd = app.add_subcommand("eigen", "eigenvalues of the pattern correlation matrix");
    auto data_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--data", *data_path, "dataset file")->required();
    cmd->add_option("-o,--out", *out_path, "spectrum CSV")->required();

    cmd->callback([data_path, out_path]() {
        const auto data = read_dataset(fs::path(*data_path));
        const auto eig = eigen_spectrum(data);
        auto out = open_out(fs::path(*out_path));
        out << "index,eigenvalue\n";
        for (std::size_t i = 0; i < eig.size(); ++i) out << i << ',' << g9(eig[i]) << '\n';
        write_meta(fs::path(*out_path), "eigen", {{"data", *data_path}});
        std::cout << "wrote " << eig.size() << " eigenvalues to " << *out_path << '\n';
    });
}

// ---------------------------------------------------------------------------
// image-pipeline
// ---------------------------------------------------------------------------
void setup_image_pipeline(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "image-pipeline", "quantize, learn, project and denoise a directory of P2 PGM images");
    struct Args {
        std::string images, outdir;
        int q = 16;
        std::size_t clusters = 0;
        double membership = 3.0;
        double pe = 0.02;
        std::uint64_t seed = 0;
        std::size_t threads = 1;
        std::size_t constraints = 0;
    };
    auto a = std::make_shared<Args>();
    auto lf = std::make_shared<LearnFlags>();
    auto rf = std::make_shared<RecallFlags>();
    lf->image_mode = true;
    rf->phi = 0.85;
    cmd->add_option("--images", a->images, "directory of P2 PGM files")->required();
    cmd->add_option("--q", a->q, "quantization levels (power of two)");
    cmd->add_option("--clusters", a->clusters, "cluster count; 0 picks one per 64 binary neurons");
    cmd->add_option("--membership", a->membership, "target clusters per binary neuron");
    cmd->add_option("--pe", a->pe, "corruption probability for the denoising report");
    cmd->add_option("--seed", a->seed, "rng seed");
    cmd->add_option("--threads", a->threads, "worker threads for learning");
    cmd->add_option("--constraints", a->constraints,
                    "constraints per cluster; 0 = full null space");
    cmd->add_option("-o,--outdir", a->outdir, "output directory")->required();
    lf->attach(cmd);
    rf->attach(cmd);

    cmd->callback([a, lf, rf]() {
        // Deterministic image order.
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(a->images))
            if (entry.is_regular_file() && entry.path().extension() == ".pgm")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw std::runtime_error("no .pgm files in " + a->images);

        std::vector<ImagePattern> images;
        std::vector<std::vector<int>> binaries;
        for (const auto& f : files) {
            images.push_back(read_pgm(f));
            if (images.back().width != images.front().width ||
                images.back().height != images.front().height)
                throw std::runtime_error("image dimensions differ: " + f.string());
            binaries.push_back(binary_expand(quantize(images.back(), a->q), a->q));
        }
        const std::size_t bits = binaries.front().size();

        std::vector<int> flat;
        for (const auto& b : binaries) flat.insert(flat.end(), b.begin(), b.end());
        const Dataset data(bits, 2, flat);

        const std::size_t cluster_count =
            a->clusters > 0 ? a->clusters : std::max<std::size_t>(2, bits / 64);
        const double target_size =
            static_cast<double>(bits) * a->membership / static_cast<double>(cluster_count);
        const auto layout = random_cluster_layout(bits, cluster_count, a->membership,
                                                  std::max(2.0, 0.25 * target_size), a->seed);

        LearningConfig base = lf->build(a->seed);
        const auto results = learn_all_clusters(data, layout, a->constraints, base, a->threads);
        std::vector<SparseWeightMatrix> weights;
        for (const auto& r : results) weights.push_back(r.weights);

        RecallConfig rc = rf->build();
        if (rc.sat_tol < 0.0) rc.sat_tol = calibrate_sat_tol(weights, layout, data);

        fs::create_directories(a->outdir);
        const fs::path outdir(a->outdir);
        write_layout(outdir / "layout.txt", layout);
        write_weights(outdir / "weights.txt", weights);

        auto report = open_out(outdir / "report.csv");
        report << "image,snr_in,snr_out,residual_clusters\n";
        for (std::size_t i = 0; i < files.size(); ++i) {
            const auto name = files[i].stem().string();
            const auto projected = project_to_learned(binaries[i], weights, layout, rc);

            const auto learned_levels = binary_collapse(projected.pattern, a->q);
            ImagePattern learned_img;
            learned_img.width = images[i].width;
            learned_img.height = images[i].height;
            learned_img.pixels = learned_levels;
            write_pgm(outdir / ("learned_" + name + ".pgm"), learned_img, a->q - 1);

            NoiseSpec noise{a->pe, derive_seed(a->seed, 0x696d67, i)};
            const auto corrupted = apply_noise(projected.pattern, noise, 2);
            const auto recalled = peel(weights, layout, corrupted.pattern, rc, 2);

            const auto in_levels = binary_collapse(corrupted.pattern, a->q);
            const auto out_levels = binary_collapse(recalled.pattern, a->q);
            const double snr_in = snr_db(learned_levels, in_levels);
            const double snr_out = snr_db(learned_levels, out_levels);

            ImagePattern denoised_img;
            denoised_img.width = images[i].width;
            denoised_img.height = images[i].height;
            denoised_img.pixels = out_levels;
            write_pgm(outdir / ("denoised_" + name + ".pgm"), denoised_img, a->q - 1);

            report << name << ',' << g9(snr_in) << ',' << g9(snr_out) << ','
                   << projected.residual_clusters << '\n';
        }

        std::map<std::string, std::string> kv{{"images", a->images},
                                              {"q", std::to_string(a->q)},
                                              {"clusters", std::to_string(cluster_count)},
                                              {"membership", g9(a->membership)},
                                              {"pe", g9(a->pe)},
                                              {"seed", std::to_string(a->seed)},
                                              {"sat_tol", g9(rc.sat_tol)}};
        lf->describe(kv);
        rf->describe(kv);
        write_meta(outdir / "report.csv", "image-pipeline", kv);
        std::cout << "processed " << files.size() << " images into " << a->outdir << '\n';
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clustered associative memory toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file");

    setup_gen_data(app);
    setup_gen_layout(app);
    setup_learn(app);
    setup_recall(app);
    setup_sweep_per(app);
    setup_degree_report(app);
    setup_de_threshold(app);
    setup_de_curve(app);
    setup_eigen(app);
    setup_image_pipeline(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // Usage problems exit 2; --help and friends keep their 0.
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
