#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lifpocs/encoder.hpp"
#include "lifpocs/kernels.hpp"
#include "oracles.hpp"

using namespace lifpocs;

namespace {

BandlimitedSignal constant_signal(int period, double level) {
    auto s = BandlimitedSignal::zero(period);
    s.coeff(0) = level;
    return s;
}

// Rejects the rare draw whose interpolant dips below -offset.
BandlimitedSignal positive_input(int period, double amp, double offset, std::uint64_t seed) {
    for (int retry = 0; retry < 64; ++retry) {
        const auto x = random_bandlimited(period, amp, seed + 997ULL * retry);
        const TimeGrid grid(period);
        double lowest = offset;
        for (int i = 0; i < grid.count(); ++i) {
            lowest = std::min(lowest, x.eval(grid.instant(i)) + offset);
        }
        if (lowest > 1e-6) return x;
    }
    throw std::runtime_error("no positive draw");
}

}  // namespace

TEST_CASE("constant input, ideal integrator: equally spaced spikes") {
    const double a = 0.8, theta = 0.3;
    const auto x = constant_signal(11, a);
    const LifParams p{0.0, 0.0, theta, Polarity::unipolar};
    const SpikeTrain s = encode(x, p, TimeGrid(11));
    REQUIRE(s.size() > 0);
    const double dt = theta / a;
    for (std::size_t n = 0; n < s.size(); ++n) {
        CHECK(s.times[n] == doctest::Approx((n + 1) * dt).epsilon(1e-10));
        CHECK(s.signs[n] == 1);
    }
    CHECK(s.size() == static_cast<std::size_t>(11.0 * a / theta));
}

TEST_CASE("constant input with leakage: closed-form interval") {
    const double a = 1.0, theta = 0.25, alpha = 0.9;
    REQUIRE(a > alpha * theta);
    const auto x = constant_signal(11, a);
    const LifParams p{alpha, 0.0, theta, Polarity::unipolar};
    const SpikeTrain s = encode(x, p, TimeGrid(11));
    REQUIRE(s.size() > 2);
    const double dt = -std::log(1.0 - alpha * theta / a) / alpha;
    for (std::size_t n = 0; n < s.size(); ++n) {
        CHECK(s.delta(n) == doctest::Approx(dt).epsilon(1e-9));
    }
}

TEST_CASE("defining property: every kernel sample hits the threshold") {
    for (double alpha : {0.0, 0.03, 0.8, 1.5}) {
        for (int pol = 0; pol < 2; ++pol) {
            const bool unipolar = pol == 0;
            const auto x = pol == 0 ? positive_input(21, 0.7, 1.0, 900)
                                    : random_bandlimited(21, 0.7, 901);
            LifParams p;
            p.alpha = alpha;
            p.offset = unipolar ? 1.0 : 0.0;
            p.threshold = unipolar ? 0.45 : 0.2;
            p.mode = unipolar ? Polarity::unipolar : Polarity::bipolar;
            const SpikeTrain s = encode(x, p, TimeGrid(21));
            REQUIRE(s.size() > 0);
            const KernelSystem ks = build_system(s, p);
            for (int n = 0; n < ks.size(); ++n) {
                // <h_n, x> = theta_n restates |integral| = threshold.
                CHECK(std::abs(ks.inner_with(n, x) - ks.samples()[n]) < 1e-9);
            }
        }
    }
}

TEST_CASE("between spikes the running integral stays below threshold") {
    const auto x = positive_input(21, 0.7, 1.0, 77);
    const LifParams p{0.4, 1.0, 0.6, Polarity::unipolar};
    const SpikeTrain s = encode(x, p, TimeGrid(21));
    REQUIRE(s.size() > 1);
    double prev = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        for (int i = 1; i < 16; ++i) {
            const double t = prev + (s.times[n] - prev) * i / 16.0;
            CHECK(std::abs(leaky_antiderivative(x, p.offset, prev, t, p.alpha)) <
                  p.threshold + 1e-9);
        }
        prev = s.times[n];
    }
}

TEST_CASE("bipolar encoding produces signed spikes") {
    const auto x = random_bandlimited(21, 0.7, 3);
    const LifParams p{0.0, 0.0, 0.35, Polarity::bipolar};
    const SpikeTrain s = encode(x, p, TimeGrid(21));
    REQUIRE(s.size() > 1);
    bool has_pos = false, has_neg = false;
    for (const int e : s.signs) {
        has_pos = has_pos || e == 1;
        has_neg = has_neg || e == -1;
    }
    CHECK(has_pos);
    CHECK(has_neg);
    for (std::size_t n = 1; n < s.size(); ++n) CHECK(s.times[n] > s.times[n - 1]);
    CHECK(s.times.back() <= 21.0);
}

TEST_CASE("unipolar positivity is enforced") {
    const auto x = random_bandlimited(21, 0.7, 5);
    const LifParams p{0.0, 0.0, 0.3, Polarity::unipolar};  // offset 0: x dips negative
    CHECK_THROWS(encode(x, p, TimeGrid(21)));
}

TEST_CASE("oversized threshold yields an empty, flagged train") {
    const auto x = constant_signal(11, 0.5);
    const LifParams p{1.0, 0.0, 10.0, Polarity::unipolar};  // saturation level 0.5 < 10
    const SpikeTrain s = encode(x, p, TimeGrid(11));
    CHECK(s.size() == 0);
    CHECK(s.saturated);
}

TEST_CASE("invalid parameters are rejected") {
    const auto x = constant_signal(11, 0.5);
    CHECK_THROWS(encode(x, LifParams{0.0, 0.0, 0.0, Polarity::unipolar}, TimeGrid(11)));
    CHECK_THROWS(encode(x, LifParams{-0.1, 0.0, 1.0, Polarity::unipolar}, TimeGrid(11)));
    CHECK_THROWS(encode(x, LifParams{0.0, -0.5, 1.0, Polarity::unipolar}, TimeGrid(11)));
    CHECK_THROWS(encode(x, LifParams{0.0, 0.0, 1.0, Polarity::unipolar}, TimeGrid(21)));
}

TEST_CASE("threshold calibration") {
    SUBCASE("constant input closed form") {
        const double a = 0.9, rho = 1.5;
        const std::vector<BandlimitedSignal> inputs{constant_signal(21, a)};
        const LifParams p{0.0, 0.0, 1.0, Polarity::unipolar};
        const double theta = calibrate_threshold(inputs, p, rho);
        const SpikeTrain s = encode(inputs[0], {0.0, 0.0, theta, Polarity::unipolar}, TimeGrid(21));
        CHECK(std::abs(static_cast<double>(s.size()) / 21.0 - rho) <= 0.02 * rho);
        CHECK(theta == doctest::Approx(a / rho).epsilon(0.05));
    }
    SUBCASE("seeded ensemble hits the target density band") {
        std::vector<BandlimitedSignal> inputs;
        for (int j = 0; j < 20; ++j) {
            inputs.push_back(positive_input(61, 0.7, 1.0, 4000 + static_cast<std::uint64_t>(j)));
        }
        LifParams p{0.03, 1.0, 1.0, Polarity::unipolar};
        const double theta = calibrate_threshold(inputs, p, 1.5);
        p.threshold = theta;
        double density = 0.0;
        for (const auto& x : inputs) {
            density += static_cast<double>(encode(x, p, TimeGrid(61)).size()) / 61.0;
        }
        density /= 20.0;
        CHECK(density >= 1.47);
        CHECK(density <= 1.53);
    }
    SUBCASE("monotonicity: doubling the threshold never adds spikes") {
        for (int trial = 0; trial < 5; ++trial) {
            const auto x = positive_input(21, 0.7, 1.0, 6000 + static_cast<std::uint64_t>(trial));
            LifParams p{0.5, 1.0, 0.2 + 0.2 * trial, Polarity::unipolar};
            const std::size_t n1 = encode(x, p, TimeGrid(21)).size();
            p.threshold *= 2.0;
            const std::size_t n2 = encode(x, p, TimeGrid(21)).size();
            CHECK(n2 <= n1);
        }
    }
    SUBCASE("unreachable target reports the achieved range") {
        const std::vector<BandlimitedSignal> inputs{constant_signal(11, 0.5)};
        const LifParams p{0.0, 0.0, 1.0, Polarity::unipolar};
        CHECK_THROWS_WITH_AS(calibrate_threshold(inputs, p, 1e-5),
                             doctest::Contains("achieved"), std::runtime_error);
    }
    SUBCASE("input validation") {
        const LifParams p{0.0, 0.0, 1.0, Polarity::unipolar};
        CHECK_THROWS(calibrate_threshold({}, p, 1.5));
        CHECK_THROWS(calibrate_threshold({constant_signal(11, 0.5)}, p, 0.0));
    }
}

TEST_CASE("time quantization") {
    SUBCASE("grid-aligned times are unchanged") {
        SpikeTrain s;
        s.period = 11;
        s.times = {0.25, 0.75, 2.0};
        s.signs = {1, -1, 1};
        const SpikeTrain q = quantize_times(s, 2);
        CHECK(q.times == s.times);
        CHECK(q.signs == s.signs);
    }
    SUBCASE("rounding to the nearest quantum") {
        SpikeTrain s;
        s.period = 11;
        s.times = {0.3};
        s.signs = {1};
        const SpikeTrain q = quantize_times(s, 2);
        CHECK(q.times[0] == doctest::Approx(0.25));
    }
    SUBCASE("collision repair pushes the later spike up") {
        SpikeTrain s;
        s.period = 11;
        s.times = {0.26, 0.27};
        s.signs = {1, 1};
        const SpikeTrain q = quantize_times(s, 2);
        REQUIRE(q.size() == 2);
        CHECK(q.times[0] == doctest::Approx(0.25));
        CHECK(q.times[1] == doctest::Approx(0.50));
    }
    SUBCASE("quantized trains stay strictly increasing") {
        for (int seed = 0; seed < 10; ++seed) {
            const auto x = positive_input(21, 0.7, 1.0, 7000 + static_cast<std::uint64_t>(seed));
            const LifParams p{0.03, 1.0, 0.4, Polarity::unipolar};
            const SpikeTrain s = encode(x, p, TimeGrid(21));
            for (int b = 1; b <= 6; ++b) {
                const SpikeTrain q = quantize_times(s, b);
                double prev = 0.0;
                for (const double t : q.times) {
                    CHECK(t > prev);
                    CHECK(t <= 21.0);
                    prev = t;
                }
            }
        }
    }
    SUBCASE("bit depth validation") {
        SpikeTrain s;
        s.period = 11;
        CHECK_THROWS(quantize_times(s, 0));
    }
}
