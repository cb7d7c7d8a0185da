#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace clam {

// SplitMix64 finalizer. Used to derive independent stream seeds from a base
// seed plus stream coordinates (trial index, constraint index, ...).
std::uint64_t mix_seed(std::uint64_t z);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

// mt19937_64 with explicit draw helpers. The standard <random> distributions
// are implementation-defined, so all draws below pin the exact output
// sequence. Every randomized operation in the library is a pure function of
// its seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n); n > 0.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

    // Inclusive integer range.
    int range(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller.
    double normal();

    // Uniform direction on the unit sphere.
    std::vector<double> unit_vector(std::size_t dim);

    // Fisher-Yates shuffle of [0, n).
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace clam
