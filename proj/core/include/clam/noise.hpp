#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace clam {

struct NoiseSpec {
    double p_e = 0.0;           // per-entry corruption probability
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct NoisyPattern {
    std::vector<int> pattern;  // clamped to [0, Q-1]
    std::vector<int> noise;    // drawn noise before clamping, entries in {-1, 0, +1}
};

// Each entry independently receives +1 or -1 with probability p_e/2 each.
// The returned noise vector records the draw before clamping, so error-rate
// accounting matches the pre-clamp corruption probability.
NoisyPattern apply_noise(std::span<const int> pattern, const NoiseSpec& spec, int alphabet_size);

}  // namespace clam
