#include "clam/noise.hpp"

#include <algorithm>
#include <stdexcept>

#include "clam/rng.hpp"

namespace clam {

void NoiseSpec::validate() const {
    if (!(p_e >= 0.0 && p_e <= 1.0)) throw std::invalid_argument("NoiseSpec: p_e outside [0, 1]");
}

NoisyPattern apply_noise(std::span<const int> pattern, const NoiseSpec& spec, int alphabet_size) {
    spec.validate();
    if (alphabet_size < 2) throw std::invalid_argument("apply_noise: alphabet size must be >= 2");

    Rng rng(spec.rng_seed);
    NoisyPattern out;
    out.pattern.resize(pattern.size());
    out.noise.resize(pattern.size());
    const double half = spec.p_e / 2.0;
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        const double u = rng.uniform();
        const int e = u < half ? +1 : (u < spec.p_e ? -1 : 0);
        out.noise[j] = e;
        out.pattern[j] = std::clamp(pattern[j] + e, 0, alphabet_size - 1);
    }
    return out;
}

}  // namespace clam
