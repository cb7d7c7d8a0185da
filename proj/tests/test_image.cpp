#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "clam/image.hpp"
#include "clam/layout_gen.hpp"
#include "clam/learning.hpp"
#include "clam/linalg.hpp"
#include "clam/noise.hpp"
#include "clam/rng.hpp"

using namespace clam;

namespace {

// Smooth deterministic grayscale patch: gradient plus a soft blob.
ImagePattern synth_image(std::size_t side, std::uint64_t seed) {
    Rng rng(seed);
    const double cx = rng.uniform(2.0, side - 2.0);
    const double cy = rng.uniform(2.0, side - 2.0);
    const double amp = rng.uniform(60.0, 120.0);
    const double slope = rng.uniform(2.0, 6.0);
    ImagePattern img;
    img.width = side;
    img.height = side;
    img.pixels.resize(side * side);
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const double d2 = (r - cy) * (r - cy) + (c - cx) * (c - cx);
            double v = 40.0 + slope * static_cast<double>(r + c) + amp * std::exp(-d2 / 18.0);
            img.pixels[r * side + c] = std::clamp(static_cast<int>(v), 0, 255);
        }
    }
    return img;
}

}  // namespace

TEST_CASE("pgm round trip") {
    const auto img = synth_image(8, 1);
    std::stringstream s;
    write_pgm(s, img);
    const auto back = read_pgm(s);
    CHECK(back.width == 8);
    CHECK(back.height == 8);
    CHECK(back.pixels == img.pixels);

    SUBCASE("comments and odd whitespace are tolerated") {
        std::stringstream in("P2 # magic\n# a comment line\n2 2\n15\n0 5\n10 15\n");
        const auto p = read_pgm(in);
        CHECK(p.width == 2);
        // maxval 15 rescales into [0, 255]
        CHECK(p.pixels[3] == 255);
    }
    SUBCASE("bad magic rejected") {
        std::stringstream in("P5\n2 2\n255\n");
        CHECK_THROWS(read_pgm(in));
    }
}

TEST_CASE("quantize") {
    ImagePattern img;
    img.width = 3;
    img.height = 1;
    img.pixels = {255, 0, 128};
    const auto q = quantize(img, 16);
    CHECK(q == std::vector<int>{15, 0, 8});

    SUBCASE("monotone in pixel value") {
        ImagePattern ramp;
        ramp.width = 256;
        ramp.height = 1;
        ramp.pixels.resize(256);
        for (int i = 0; i < 256; ++i) ramp.pixels[i] = i;
        const auto lv = quantize(ramp, 16);
        for (std::size_t i = 1; i < lv.size(); ++i) CHECK(lv[i] >= lv[i - 1]);
        CHECK(lv.front() == 0);
        CHECK(lv.back() == 15);
    }
}

TEST_CASE("binary expansion") {
    SUBCASE("pinned values") {
        const auto bits = binary_expand(std::vector<int>{9}, 16);
        CHECK(bits == std::vector<int>{1, 0, 0, 1});
        CHECK(binary_collapse(bits, 16) == std::vector<int>{9});
        CHECK(binary_expand(std::vector<int>{0, 0}, 16) == std::vector<int>(8, 0));
    }
    SUBCASE("length scales by log2(Q)") {
        const std::vector<int> x(1024, 3);
        CHECK(binary_expand(x, 16).size() == 4096);
    }
    SUBCASE("round trip on random patterns") {
        Rng rng(5);
        for (int t = 0; t < 50; ++t) {
            std::vector<int> x(32);
            for (auto& v : x) v = static_cast<int>(rng.index(16));
            CHECK(binary_collapse(binary_expand(x, 16), 16) == x);
        }
    }
    SUBCASE("non-power-of-two alphabet rejected") {
        CHECK_THROWS(binary_expand(std::vector<int>{1}, 12));
        CHECK_THROWS(binary_collapse(std::vector<int>{1, 0}, 12));
    }
    SUBCASE("malformed collapse input rejected") {
        CHECK_THROWS(binary_collapse(std::vector<int>{1, 0, 1}, 16));   // length
        CHECK_THROWS(binary_collapse(std::vector<int>{2, 0, 1, 1}, 16));  // non-binary
    }
}

TEST_CASE("snr") {
    SUBCASE("equal patterns give the infinity sentinel") {
        const std::vector<int> x{1, 2, 3};
        CHECK(std::isinf(snr_db(x, x)));
    }
    SUBCASE("hand arithmetic") {
        CHECK(snr_db(std::vector<int>{3, 4}, std::vector<int>{3, 3}) ==
              doctest::Approx(10.0 * std::log10(25.0)).epsilon(1e-12));
    }
    SUBCASE("doubling the noise power costs about 3 dB") {
        const std::vector<int> ref{10, 10, 10, 10};
        const double one = snr_db(ref, std::vector<int>{11, 10, 10, 10});
        const double two = snr_db(ref, std::vector<int>{11, 11, 10, 10});
        CHECK(one - two == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-9));
    }
    SUBCASE("all-zero reference rejected") {
        CHECK_THROWS(snr_db(std::vector<int>{0, 0}, std::vector<int>{1, 0}));
    }
}

TEST_CASE("projection pipeline on an exact-subspace binary dataset") {
    // Learn weights on binary-expanded quantized images; with far fewer
    // patterns than cluster width the null spaces are exact.
    const int q_levels = 16;
    const std::size_t side = 8;  // 64 pixels, 256 binary neurons
    std::vector<std::vector<int>> binaries;
    for (std::uint64_t s = 0; s < 12; ++s)
        binaries.push_back(binary_expand(quantize(synth_image(side, s), q_levels), q_levels));

    std::vector<int> flat;
    for (const auto& b : binaries) flat.insert(flat.end(), b.begin(), b.end());
    const Dataset data(256, 2, flat);
    const auto layout = random_cluster_layout(256, 8, 2.0, 10.0, 3);

    auto cfg = LearningConfig::image_defaults();
    cfg.seed = 11;
    std::vector<SparseWeightMatrix> weights;
    for (std::size_t l = 0; l < layout.cluster_count(); ++l) {
        std::vector<std::vector<double>> rows;
        for (std::size_t mu = 0; mu < data.size(); ++mu)
            rows.push_back(extract_subpattern_real(data.pattern(mu), layout, l));
        const std::size_t m = layout.cluster_size(l) - real_rank(rows, 1e-8);
        weights.push_back(learn_cluster(data, layout, l, m, cfg).weights);
    }

    RecallConfig rc;
    rc.phi = 0.85;
    rc.psi = 0.005;
    rc.sat_tol = calibrate_sat_tol(weights, layout, data);

    SUBCASE("training patterns are already projections") {
        for (const auto& b : binaries) {
            const auto res = project_to_learned(b, weights, layout, rc);
            CHECK(res.residual_clusters == 0);
            CHECK(res.pattern == b);
        }
    }
    SUBCASE("projection is idempotent") {
        for (std::size_t i = 0; i < 4; ++i) {
            auto noisy = binaries[i];
            // A couple of bit flips pull the pattern off the subspace.
            noisy[7] ^= 1;
            noisy[100] ^= 1;
            const auto once = project_to_learned(noisy, weights, layout, rc);
            const auto twice = project_to_learned(once.pattern, weights, layout, rc);
            if (once.residual_clusters == 0) CHECK(twice.pattern == once.pattern);
        }
    }
    SUBCASE("small corruption recovers with SNR gain") {
        std::size_t improved = 0;
        std::size_t total = 0;
        for (std::size_t i = 0; i < binaries.size(); ++i) {
            NoiseSpec noise{0.02, derive_seed(99, i)};
            const auto corrupted = apply_noise(binaries[i], noise, 2);
            const auto recalled = peel(weights, layout, corrupted.pattern, rc, 2);
            const auto ref = binary_collapse(binaries[i], q_levels);
            const auto in_lv = binary_collapse(corrupted.pattern, q_levels);
            const auto out_lv = binary_collapse(recalled.pattern, q_levels);
            const double snr_in = snr_db(ref, in_lv);
            const double snr_out = snr_db(ref, out_lv);
            ++total;
            if (snr_out >= snr_in) ++improved;
        }
        CHECK(improved * 10 >= total * 9);
    }
}
