#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "clam/subspace_gen.hpp"
#include "oracles.hpp"

using namespace clam;

namespace {

std::vector<std::vector<long long>> dataset_rows(const Dataset& d) {
    std::vector<std::vector<long long>> rows;
    rows.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto p = d.pattern(i);
        rows.emplace_back(p.begin(), p.end());
    }
    return rows;
}

std::vector<std::vector<long long>> generator_rows(const GeneratorMatrix& g) {
    std::vector<std::vector<long long>> rows(g.k, std::vector<long long>(g.n));
    for (std::size_t i = 0; i < g.k; ++i)
        for (std::size_t j = 0; j < g.n; ++j) rows[i][j] = g.at(i, j);
    return rows;
}

}  // namespace

TEST_CASE("generator spec validation") {
    GeneratorSpec spec{12, 24, 2, 2, 16, 0};
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.degree_budget() == 15);

    GeneratorSpec bad = spec;
    bad.k = 24;
    bad.n = 12;
    CHECK_THROWS(bad.validate());

    // gamma=2, upsilon=2, Q=3: column degrees capped at 2.
    GeneratorSpec tight{2, 4, 2, 2, 3, 0};
    CHECK(tight.degree_budget() == 2);

    GeneratorSpec hopeless{2, 4, 3, 3, 3, 0};  // budget (3-1)/4 = 0
    CHECK_THROWS(hopeless.validate());
}

TEST_CASE("make_generator_matrix") {
    SUBCASE("trivial 1x1") {
        const auto g = make_generator_matrix({1, 1, 2, 2, 4, 5});
        CHECK(g.k == 1);
        CHECK(g.n == 1);
        CHECK(g.at(0, 0) == 1);
    }
    SUBCASE("rank and degree budget hold across seeds") {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const GeneratorSpec spec{5, 12, 3, 2, 9, seed};
            const auto g = make_generator_matrix(spec);
            CHECK(g.max_column_degree() <= spec.degree_budget());
            for (int v : g.data) {
                CHECK(v >= 0);
                CHECK(v <= 2);
            }
            // Independent rank check over two prime fields.
            const auto rows = generator_rows(g);
            CHECK(testing::modular_rank(rows, 2147483647ULL) == 5);
            CHECK(testing::modular_rank(rows, 1000000007ULL) == 5);
        }
    }
    SUBCASE("deterministic given the seed") {
        const auto a = make_generator_matrix({4, 10, 2, 2, 8, 11});
        const auto b = make_generator_matrix({4, 10, 2, 2, 8, 11});
        CHECK(a.data == b.data);
    }
}

TEST_CASE("enumerate_patterns on a fixed generator") {
    // G = [[1,0,1],[0,1,1]], upsilon = 2.
    GeneratorMatrix g;
    g.k = 2;
    g.n = 3;
    g.data = {1, 0, 1, 0, 1, 1};

    const auto d = enumerate_patterns(g, 2, 4);
    CHECK(d.size() == 4);  // upsilon^k
    std::set<std::vector<int>> got;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto p = d.pattern(i);
        got.insert(std::vector<int>(p.begin(), p.end()));
    }
    const std::set<std::vector<int>> want{{0, 0, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 2}};
    CHECK(got == want);

    SUBCASE("all-zero pattern comes first") {
        const auto first = d.pattern(0);
        CHECK(std::all_of(first.begin(), first.end(), [](int v) { return v == 0; }));
    }
    SUBCASE("limit truncates in enumeration order") {
        const auto few = enumerate_patterns(g, 2, 4, 3);
        CHECK(few.size() == 3);
        for (std::size_t i = 0; i < few.size(); ++i) {
            const auto a = few.pattern(i);
            const auto b = d.pattern(i);
            CHECK(std::equal(a.begin(), a.end(), b.begin()));
        }
    }
    SUBCASE("alphabet violation throws unless rejection is requested") {
        CHECK_THROWS(enumerate_patterns(g, 2, 2));  // pattern (1,1,2) leaves {0,1}
        const auto filtered = enumerate_patterns(g, 2, 2, std::nullopt, true);
        CHECK(filtered.size() == 3);
    }
    SUBCASE("budget overflow requires a limit") {
        GeneratorMatrix big;
        big.k = 40;
        big.n = 41;
        big.data.assign(big.k * big.n, 0);
        for (std::size_t i = 0; i < big.k; ++i) big.data[i * big.n + i] = 1;
        CHECK_THROWS(enumerate_patterns(big, 2, 4));
        CHECK(enumerate_patterns(big, 2, 4, 5).size() == 5);
    }
}

TEST_CASE("exponential pattern count at desk scale") {
    const GeneratorSpec spec{12, 24, 2, 2, 8, 3};
    const auto g = make_generator_matrix(spec);
    const auto d = enumerate_patterns(g, spec.upsilon, spec.alphabet_size);
    CHECK(d.size() == 4096);  // upsilon^k with zero rejections
    int max_entry = 0;
    for (int v : d.flat()) max_entry = std::max(max_entry, v);
    CHECK(max_entry <= spec.alphabet_size - 1);
}

TEST_CASE("verify_rank") {
    SUBCASE("fixed 4-pattern dataset has rank 2") {
        const Dataset d(3, 4, {0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 2});
        CHECK(verify_rank(d) == 2);
        CHECK(testing::modular_rank(dataset_rows(d), 2147483647ULL) == 2);
    }
    SUBCASE("all-zero dataset has rank 0") {
        const Dataset d(3, 2, {0, 0, 0, 0, 0, 0});
        CHECK(verify_rank(d) == 0);
    }
    SUBCASE("synthetic dataset ranks match the construction and the modular oracle") {
        const GeneratorSpec spec{12, 24, 2, 2, 8, 17};
        const auto g = make_generator_matrix(spec);
        const auto d = enumerate_patterns(g, spec.upsilon, spec.alphabet_size);
        CHECK(verify_rank(d) == 12);
        CHECK(testing::modular_rank(dataset_rows(d), 1000000007ULL) == 12);
    }
    SUBCASE("empty dataset rejected") {
        const Dataset d(3, 2, {});
        CHECK_THROWS(verify_rank(d));
    }
}

TEST_CASE("patterns are orthogonal to the exact null space of G") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const GeneratorSpec spec{6, 14, 2, 3, 11, seed};
        const auto g = make_generator_matrix(spec);
        const auto d = enumerate_patterns(g, spec.upsilon, spec.alphabet_size);
        const auto basis = testing::integer_nullspace(generator_rows(g));
        CHECK(basis.size() == g.n - g.k);
        for (const auto& w : basis) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                const auto x = d.pattern(i);
                long long acc = 0;
                for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * x[j];
                CHECK(acc == 0);
            }
        }
    }
}
