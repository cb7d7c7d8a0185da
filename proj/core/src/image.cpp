#include "clam/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace clam {

void ImagePattern::validate() const {
    if (width == 0 || height == 0) throw std::invalid_argument("ImagePattern: empty dimensions");
    if (pixels.size() != width * height)
        throw std::invalid_argument("ImagePattern: pixel count does not match dimensions");
    for (int p : pixels)
        if (p < 0 || p > 255) throw std::invalid_argument("ImagePattern: pixel outside [0, 255]");
}

namespace {

// Next whitespace-separated token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        return tok;
    }
    throw std::runtime_error("pgm: unexpected end of file");
}

}  // namespace

ImagePattern read_pgm(std::istream& in) {
    if (next_token(in) != "P2") throw std::runtime_error("pgm: expected P2 magic");
    ImagePattern img;
    img.width = std::stoul(next_token(in));
    img.height = std::stoul(next_token(in));
    const int max_value = std::stoi(next_token(in));
    if (max_value <= 0 || max_value > 65535) throw std::runtime_error("pgm: bad max value");
    img.pixels.resize(img.width * img.height);
    for (auto& p : img.pixels) {
        p = std::stoi(next_token(in));
        if (p < 0 || p > max_value) throw std::runtime_error("pgm: sample out of range");
        // Rescale into [0, 255] when the file uses another max value.
        if (max_value != 255) p = (p * 255 + max_value / 2) / max_value;
    }
    img.validate();
    return img;
}

ImagePattern read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const ImagePattern& image, int max_value) {
    if (image.width == 0 || image.height == 0 || image.pixels.size() != image.width * image.height)
        throw std::invalid_argument("write_pgm: malformed image");
    out << "P2\n" << image.width << ' ' << image.height << '\n' << max_value << '\n';
    for (std::size_t r = 0; r < image.height; ++r) {
        for (std::size_t c = 0; c < image.width; ++c) {
            if (c) out << ' ';
            out << image.pixels[r * image.width + c];
        }
        out << '\n';
    }
}

void write_pgm(const std::filesystem::path& path, const ImagePattern& image, int max_value) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_pgm(out, image, max_value);
}

std::vector<int> quantize(const ImagePattern& image, int levels) {
    image.validate();
    if (levels < 2 || levels > 256) throw std::invalid_argument("quantize: levels outside [2, 256]");
    std::vector<int> out(image.pixels.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = image.pixels[i] * levels / 256;
    return out;
}

namespace {

int log2_exact(int levels) {
    if (levels < 2 || (levels & (levels - 1)) != 0)
        throw std::invalid_argument("binary expansion requires a power-of-two alphabet");
    int b = 0;
    while ((1 << b) < levels) ++b;
    return b;
}

}  // namespace

std::vector<int> binary_expand(std::span<const int> pattern, int levels) {
    const int bits = log2_exact(levels);
    std::vector<int> out;
    out.reserve(pattern.size() * static_cast<std::size_t>(bits));
    for (int v : pattern) {
        if (v < 0 || v >= levels) throw std::invalid_argument("binary_expand: value out of range");
        for (int b = bits - 1; b >= 0; --b) out.push_back((v >> b) & 1);
    }
    return out;
}

std::vector<int> binary_collapse(std::span<const int> bits, int levels) {
    const int width = log2_exact(levels);
    if (bits.size() % static_cast<std::size_t>(width) != 0)
        throw std::invalid_argument("binary_collapse: length not divisible by bit width");
    std::vector<int> out(bits.size() / static_cast<std::size_t>(width));
    for (std::size_t i = 0; i < out.size(); ++i) {
        int v = 0;
        for (int b = 0; b < width; ++b) {
            const int bit = bits[i * static_cast<std::size_t>(width) + static_cast<std::size_t>(b)];
            if (bit != 0 && bit != 1) throw std::invalid_argument("binary_collapse: non-binary entry");
            v = (v << 1) | bit;
        }
        out[i] = v;
    }
    return out;
}

double snr_db(std::span<const int> reference, std::span<const int> test) {
    if (reference.size() != test.size()) throw std::invalid_argument("snr_db: length mismatch");
    double sig = 0.0;
    double noise = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        sig += static_cast<double>(reference[i]) * reference[i];
        const double d = static_cast<double>(test[i]) - reference[i];
        noise += d * d;
    }
    if (sig == 0.0) throw std::invalid_argument("snr_db: all-zero reference");
    if (noise == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(sig / noise);
}

ProjectionResult project_to_learned(std::span<const int> pattern,
                                    const std::vector<SparseWeightMatrix>& weights,
                                    const ClusterLayout& layout, const RecallConfig& config) {
    config.validate();
    if (weights.size() != layout.cluster_count())
        throw std::invalid_argument("project_to_learned: weights/layout mismatch");
    if (pattern.size() != layout.neuron_count())
        throw std::invalid_argument("project_to_learned: pattern length mismatch");

    ProjectionResult res;
    res.pattern.assign(pattern.begin(), pattern.end());

    // First sweep commits whatever each unsatisfied cluster settles on; the
    // pattern is pulled toward the learned subspace rather than denoised.
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto sub = extract_subpattern(res.pattern, layout, l);
        const double tol = resolve_sat_tol(config, weights[l]);
        if (cluster_syndrome(weights[l], sub, tol).satisfied) continue;
        const auto corrected = intra_correct(weights[l], sub, config, 2);
        const auto& idx = layout.cluster(l);
        for (std::size_t i = 0; i < idx.size(); ++i) res.pattern[idx[i]] = corrected.state[i];
    }

    // Peeling reconciles overlapping clusters.
    const auto peeled = peel(weights, layout, res.pattern, config, 2);
    res.pattern = peeled.pattern;

    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto sub = extract_subpattern(res.pattern, layout, l);
        const double tol = resolve_sat_tol(config, weights[l]);
        if (!cluster_syndrome(weights[l], sub, tol).satisfied) ++res.residual_clusters;
    }
    return res;
}

}  // namespace clam
