#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clam/dataset.hpp"

namespace clam {

// Parameters of the subspace construction: patterns are x = G^T u for a
// k x n integer generator G with entries in [0, gamma-1] and coefficient
// vectors u in [0, upsilon-1]^k. Per-entry values obey
// x_j <= d_j (gamma-1)(upsilon-1), so bounding the maximum column degree by
// (Q-1) / ((gamma-1)(upsilon-1)) keeps every pattern inside the alphabet.
struct GeneratorSpec {
    std::size_t k = 0;       // subspace dimension
    std::size_t n = 0;       // pattern length
    int gamma = 2;           // generator alphabet size
    int upsilon = 2;         // coefficient alphabet size
    int alphabet_size = 0;   // Q
    std::uint64_t seed = 0;

    double ratio() const { return static_cast<double>(k) / static_cast<double>(n); }
    // Largest admissible column degree.
    std::size_t degree_budget() const;
    void validate() const;
};

struct GeneratorMatrix {
    std::size_t k = 0;
    std::size_t n = 0;
    std::vector<int> data;  // row-major, k x n

    int at(std::size_t i, std::size_t j) const { return data[i * n + j]; }
    std::size_t column_degree(std::size_t j) const;
    std::size_t max_column_degree() const;
};

// Rank-k generator under the degree budget: a permuted scaled identity block
// guarantees the rank, remaining columns are sparse random. Deterministic
// given the seed; throws when the spec admits no rank-k matrix.
GeneratorMatrix make_generator_matrix(const GeneratorSpec& spec);

// All upsilon^k patterns x = G^T u in lexicographic u order (u[0] most
// significant), or the first `limit` of them. With the degree budget enforced
// no candidate is ever rejected; reject_out_of_range instead silently skips
// candidates that leave the alphabet (for generators built without the
// budget).
Dataset enumerate_patterns(const GeneratorMatrix& generator, int upsilon, int alphabet_size,
                           std::optional<std::size_t> limit = std::nullopt,
                           bool reject_out_of_range = false,
                           std::size_t pattern_budget = std::size_t{1} << 24);

// Exact rank of the C x n integer pattern matrix, computed with fraction-free
// elimination over arbitrary-precision integers.
std::size_t verify_rank(const Dataset& dataset);

}  // namespace clam
