#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "clam/cluster_layout.hpp"
#include "clam/dataset.hpp"
#include "clam/sparse_weights.hpp"

namespace clam {

// Text file formats.
//
// Dataset:  header line "n Q C", then C rows of n whitespace-separated
//           integers.
// Layout:   header line "n L", then L lines of space-separated sorted
//           indices.
// Weights:  per cluster, a header line "cluster <id> <m> <n_l>" followed by
//           one "row col value" triplet per stored entry, values written in
//           full double precision.

Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const Dataset& dataset);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

ClusterLayout read_layout(std::istream& in);
ClusterLayout read_layout(const std::filesystem::path& path);
void write_layout(std::ostream& out, const ClusterLayout& layout);
void write_layout(const std::filesystem::path& path, const ClusterLayout& layout);

std::vector<SparseWeightMatrix> read_weights(std::istream& in);
std::vector<SparseWeightMatrix> read_weights(const std::filesystem::path& path);
void write_weights(std::ostream& out, const std::vector<SparseWeightMatrix>& weights);
void write_weights(const std::filesystem::path& path, const std::vector<SparseWeightMatrix>& weights);

}  // namespace clam
