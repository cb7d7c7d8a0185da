#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "clam/cluster_layout.hpp"
#include "clam/dataset.hpp"
#include "clam/recall.hpp"
#include "clam/sparse_weights.hpp"

namespace clam {

struct ImagePattern {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<int> pixels;  // row-major, [0, 255]

    void validate() const;
};

// Plain text (P2) portable graymap.
ImagePattern read_pgm(std::istream& in);
ImagePattern read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const ImagePattern& image, int max_value = 255);
void write_pgm(const std::filesystem::path& path, const ImagePattern& image, int max_value = 255);

// level = floor(pixel * Q / 256).
std::vector<int> quantize(const ImagePattern& image, int levels);

// Big-endian log2(Q)-bit expansion of every entry; Q must be a power of two.
std::vector<int> binary_expand(std::span<const int> pattern, int levels);
// Exact inverse of binary_expand.
std::vector<int> binary_collapse(std::span<const int> bits, int levels);

// 10 log10(||reference||^2 / ||test - reference||^2); +infinity when equal.
double snr_db(std::span<const int> reference, std::span<const int> test);

struct ProjectionResult {
    std::vector<int> pattern;
    std::size_t residual_clusters = 0;  // clusters still unsatisfied
};

// Projection of a binary pattern onto the learned set: one sweep of
// intra-cluster correction treating the deviation from the subspace as noise
// (committing whatever each cluster settles on), then the peeling schedule to
// reconcile overlaps. residual_clusters > 0 flags an incomplete projection.
ProjectionResult project_to_learned(std::span<const int> pattern,
                                    const std::vector<SparseWeightMatrix>& weights,
                                    const ClusterLayout& layout, const RecallConfig& config);

}  // namespace clam
