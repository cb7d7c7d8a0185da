#include "clam/subspace_gen.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

#include "clam/rng.hpp"

namespace clam {

namespace {

using boost::multiprecision::cpp_int;

// Incremental fraction-free Gaussian elimination. Rows are fed one at a time;
// each is reduced against the pivots found so far, gcd-normalized, and kept
// when nonzero.
class ExactRowReducer {
public:
    explicit ExactRowReducer(std::size_t width) : width_(width) {}

    // Returns true when the row extended the rank.
    bool feed(std::vector<cpp_int> row) {
        for (const auto& p : pivots_) {
            if (row[p.col] == 0) continue;
            const cpp_int factor = row[p.col];
            for (std::size_t j = 0; j < width_; ++j)
                row[j] = row[j] * p.row[p.col] - p.row[j] * factor;
            normalize(row);
        }
        for (std::size_t j = 0; j < width_; ++j) {
            if (row[j] != 0) {
                normalize(row);
                pivots_.push_back({j, std::move(row)});
                return true;
            }
        }
        return false;
    }

    std::size_t rank() const { return pivots_.size(); }

private:
    struct Pivot {
        std::size_t col;
        std::vector<cpp_int> row;
    };

    static void normalize(std::vector<cpp_int>& row) {
        cpp_int g = 0;
        for (const auto& v : row) g = boost::multiprecision::gcd(g, v);
        if (g > 1)
            for (auto& v : row) v /= g;
    }

    std::size_t width_;
    std::vector<Pivot> pivots_;
};

std::size_t exact_rank_of_int_rows(const std::vector<std::vector<int>>& rows, std::size_t width) {
    ExactRowReducer reducer(width);
    for (const auto& r : rows) {
        std::vector<cpp_int> row(width);
        for (std::size_t j = 0; j < width; ++j) row[j] = r[j];
        reducer.feed(std::move(row));
        if (reducer.rank() == width) break;
    }
    return reducer.rank();
}

}  // namespace

std::size_t GeneratorSpec::degree_budget() const {
    const long long denom = static_cast<long long>(gamma - 1) * (upsilon - 1);
    return static_cast<std::size_t>((alphabet_size - 1) / denom);
}

void GeneratorSpec::validate() const {
    if (k == 0 || n == 0 || k > n) throw std::invalid_argument("GeneratorSpec: need 1 <= k <= n");
    if (gamma < 2 || upsilon < 2)
        throw std::invalid_argument("GeneratorSpec: gamma and upsilon must be >= 2");
    if (alphabet_size < 2) throw std::invalid_argument("GeneratorSpec: alphabet size must be >= 2");
    if (degree_budget() < 1)
        throw std::invalid_argument(
            "GeneratorSpec: alphabet too small, no column may carry even one entry");
}

std::size_t GeneratorMatrix::column_degree(std::size_t j) const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (at(i, j) != 0) ++d;
    return d;
}

std::size_t GeneratorMatrix::max_column_degree() const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n; ++j) d = std::max(d, column_degree(j));
    return d;
}

GeneratorMatrix make_generator_matrix(const GeneratorSpec& spec) {
    spec.validate();
    const std::size_t budget = spec.degree_budget();
    const int max_entry = spec.gamma - 1;

    const int retry_budget = 100;
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        Rng rng(derive_seed(spec.seed, 0x67656e, static_cast<std::uint64_t>(attempt)));
        GeneratorMatrix g;
        g.k = spec.k;
        g.n = spec.n;
        g.data.assign(spec.k * spec.n, 0);

        // Permuted scaled identity block pins the rank at k.
        const auto id_cols = rng.permutation(spec.n);
        std::vector<bool> is_identity(spec.n, false);
        for (std::size_t i = 0; i < spec.k; ++i) {
            g.data[i * spec.n + id_cols[i]] = rng.range(1, max_entry);
            is_identity[id_cols[i]] = true;
        }

        // Remaining columns: sparse random under the degree budget.
        const std::size_t max_deg = std::min(spec.k, budget);
        for (std::size_t j = 0; j < spec.n; ++j) {
            if (is_identity[j]) continue;
            const std::size_t deg = 1 + rng.index(max_deg);
            const auto rows = rng.permutation(spec.k);
            for (std::size_t r = 0; r < deg; ++r)
                g.data[rows[r] * spec.n + j] = rng.range(1, max_entry);
        }

        std::vector<std::vector<int>> rows(spec.k, std::vector<int>(spec.n));
        for (std::size_t i = 0; i < spec.k; ++i)
            for (std::size_t j = 0; j < spec.n; ++j) rows[i][j] = g.at(i, j);
        if (exact_rank_of_int_rows(rows, spec.n) == spec.k) return g;
    }
    throw std::runtime_error("make_generator_matrix: could not reach rank k within retry budget");
}

Dataset enumerate_patterns(const GeneratorMatrix& generator, int upsilon, int alphabet_size,
                           std::optional<std::size_t> limit, bool reject_out_of_range,
                           std::size_t pattern_budget) {
    if (upsilon < 2) throw std::invalid_argument("enumerate_patterns: upsilon must be >= 2");
    if (generator.k == 0 || generator.data.size() != generator.k * generator.n)
        throw std::invalid_argument("enumerate_patterns: malformed generator");

    // upsilon^k with overflow guard.
    std::size_t total = 1;
    bool overflow = false;
    for (std::size_t i = 0; i < generator.k; ++i) {
        if (total > pattern_budget / static_cast<std::size_t>(upsilon) + 1) {
            overflow = true;
            break;
        }
        total *= static_cast<std::size_t>(upsilon);
    }
    if ((overflow || total > pattern_budget) && !limit)
        throw std::runtime_error("enumerate_patterns: upsilon^k exceeds the pattern budget; pass a limit");

    const std::size_t want = limit ? *limit : total;

    std::vector<int> flat;
    flat.reserve(std::min(want, total == 0 ? want : total) * generator.n);
    std::vector<int> u(generator.k, 0);
    std::vector<int> x(generator.n);
    std::size_t emitted = 0;
    while (emitted < want) {
        bool ok = true;
        std::fill(x.begin(), x.end(), 0);
        for (std::size_t i = 0; i < generator.k; ++i) {
            if (u[i] == 0) continue;
            for (std::size_t j = 0; j < generator.n; ++j) x[j] += u[i] * generator.at(i, j);
        }
        for (int v : x) {
            if (v < 0 || v >= alphabet_size) {
                ok = false;
                break;
            }
        }
        if (ok) {
            flat.insert(flat.end(), x.begin(), x.end());
            ++emitted;
        } else if (!reject_out_of_range) {
            throw std::runtime_error(
                "enumerate_patterns: pattern leaves the alphabet; generator violates the degree bound");
        }

        // Odometer increment, u[0] most significant.
        std::size_t pos = generator.k;
        while (pos > 0) {
            if (++u[pos - 1] < upsilon) break;
            u[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) break;  // u space exhausted
    }

    return Dataset(generator.n, alphabet_size, std::move(flat));
}

std::size_t verify_rank(const Dataset& dataset) {
    if (dataset.size() == 0) throw std::invalid_argument("verify_rank: empty dataset");
    ExactRowReducer reducer(dataset.length());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto p = dataset.pattern(i);
        std::vector<cpp_int> row(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) row[j] = p[j];
        reducer.feed(std::move(row));
        if (reducer.rank() == dataset.length()) break;
    }
    return reducer.rank();
}

}  // namespace clam
