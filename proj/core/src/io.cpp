#include "clam/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace clam {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Dataset read_dataset(std::istream& in) {
    std::size_t n = 0, count = 0;
    int q = 0;
    if (!(in >> n >> q >> count)) throw std::runtime_error("dataset file: bad header");
    std::vector<int> flat;
    flat.reserve(n * count);
    for (std::size_t i = 0; i < n * count; ++i) {
        int v;
        if (!(in >> v)) throw std::runtime_error("dataset file: truncated patterns");
        flat.push_back(v);
    }
    return Dataset(n, q, std::move(flat));
}

Dataset read_dataset(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
    out << dataset.length() << ' ' << dataset.alphabet_size() << ' ' << dataset.size() << '\n';
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto row = dataset.pattern(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ' ';
            out << row[j];
        }
        out << '\n';
    }
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
    auto out = open_output(path);
    write_dataset(out, dataset);
}

ClusterLayout read_layout(std::istream& in) {
    std::size_t n = 0, count = 0;
    if (!(in >> n >> count)) throw std::runtime_error("layout file: bad header");
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    std::vector<std::vector<std::size_t>> clusters(count);
    for (std::size_t l = 0; l < count; ++l) {
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("layout file: truncated clusters");
        std::istringstream ls(line);
        std::size_t idx;
        while (ls >> idx) clusters[l].push_back(idx);
    }
    return ClusterLayout(n, std::move(clusters));
}

ClusterLayout read_layout(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_layout(in);
}

void write_layout(std::ostream& out, const ClusterLayout& layout) {
    out << layout.neuron_count() << ' ' << layout.cluster_count() << '\n';
    for (std::size_t l = 0; l < layout.cluster_count(); ++l) {
        const auto& c = layout.cluster(l);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) out << ' ';
            out << c[i];
        }
        out << '\n';
    }
}

void write_layout(const std::filesystem::path& path, const ClusterLayout& layout) {
    auto out = open_output(path);
    write_layout(out, layout);
}

std::vector<SparseWeightMatrix> read_weights(std::istream& in) {
    std::vector<SparseWeightMatrix> out;
    std::string tok;
    while (in >> tok) {
        if (tok != "cluster") throw std::runtime_error("weights file: expected 'cluster' header");
        std::size_t id = 0, m = 0, nl = 0;
        if (!(in >> id >> m >> nl)) throw std::runtime_error("weights file: bad cluster header");
        std::vector<WeightEntry> entries;
        // Triplets run until the next "cluster" keyword or end of file.
        while (true) {
            const auto pos = in.tellg();
            std::string next;
            if (!(in >> next)) break;
            if (next == "cluster") {
                in.seekg(pos);
                break;
            }
            WeightEntry e{};
            e.row = std::stoul(next);
            if (!(in >> e.col >> e.value)) throw std::runtime_error("weights file: bad triplet");
            entries.push_back(e);
        }
        out.emplace_back(id, m, nl, std::move(entries), 0.0);
    }
    if (out.empty()) throw std::runtime_error("weights file: no clusters");
    return out;
}

std::vector<SparseWeightMatrix> read_weights(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_weights(in);
}

void write_weights(std::ostream& out, const std::vector<SparseWeightMatrix>& weights) {
    for (const auto& w : weights) {
        out << "cluster " << w.cluster_id() << ' ' << w.rows() << ' ' << w.cols() << '\n';
        for (const auto& e : w.entries())
            out << e.row << ' ' << e.col << ' ' << full_precision(e.value) << '\n';
    }
}

void write_weights(const std::filesystem::path& path,
                   const std::vector<SparseWeightMatrix>& weights) {
    auto out = open_output(path);
    write_weights(out, weights);
}

}  // namespace clam
