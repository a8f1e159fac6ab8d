#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "lifpocs/signal.hpp"
#include "oracles.hpp"

using namespace lifpocs;

namespace {

BandlimitedSignal random_signal(int period, oracles::Rng& rng) {
    std::vector<double> samples(static_cast<std::size_t>(period));
    for (auto& s : samples) s = rng.uniform(-0.7, 0.7);
    return BandlimitedSignal::from_nyquist_samples(period, samples);
}

}  // namespace

TEST_CASE("dirichlet kernel values") {
    CHECK(dirichlet_eval(0.0, 5) == doctest::Approx(1.0));
    CHECK(dirichlet_eval(2.0, 5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dirichlet_eval(0.5, 5) == doctest::Approx(0.647214).epsilon(1e-6));
    // independent closed form
    CHECK(dirichlet_eval(0.5, 5) ==
          doctest::Approx(std::sin(M_PI * 0.5) / (5.0 * std::sin(M_PI * 0.5 / 5.0))).epsilon(1e-14));
    CHECK(dirichlet_eval(7.25, 5) == doctest::Approx(dirichlet_eval(2.25, 5)).epsilon(1e-13));
    CHECK(dirichlet_eval(5.0, 5) == doctest::Approx(1.0));
    CHECK_THROWS(dirichlet_eval(1.0, 4));
    CHECK_THROWS(dirichlet_eval(1.0, -3));
}

TEST_CASE("evaluation basics") {
    const auto zero = BandlimitedSignal::zero(7);
    CHECK(zero.eval(1.234) == 0.0);

    auto dc = BandlimitedSignal::zero(7);
    dc.coeff(0) = 2.5;
    CHECK(dc.eval(0.0) == doctest::Approx(2.5));
    CHECK(dc.eval(3.7) == doctest::Approx(2.5));

    oracles::Rng rng(11);
    std::vector<double> samples(21);
    for (auto& s : samples) s = rng.uniform(-1.0, 1.0);
    const auto sig = BandlimitedSignal::from_nyquist_samples(21, samples);
    for (int j = 0; j < 21; ++j) {
        CHECK(sig.eval(j) == doctest::Approx(samples[static_cast<std::size_t>(j)]).epsilon(1e-12));
    }
}

TEST_CASE("construction validation") {
    CHECK_THROWS(BandlimitedSignal::zero(6));
    CHECK_THROWS(BandlimitedSignal::zero(0));
    CHECK_THROWS(BandlimitedSignal::from_coeffs(5, {{1.0, 0.0}, {0.0, 0.0}}));  // wrong count
    CHECK_THROWS(BandlimitedSignal::from_coeffs(5, {{1.0, 0.5}, {0, 0}, {0, 0}}));  // complex DC
    CHECK_THROWS(BandlimitedSignal::from_nyquist_samples(5, {1.0, 2.0}));
}

TEST_CASE("inner product") {
    auto dc = BandlimitedSignal::zero(5);
    dc.coeff(0) = 1.0;
    CHECK(inner_product(dc, dc) == doctest::Approx(5.0));

    auto h1 = BandlimitedSignal::zero(7);
    auto h2 = BandlimitedSignal::zero(7);
    h1.coeff(1) = {0.3, -0.4};
    h2.coeff(2) = {-0.1, 0.9};
    CHECK(inner_product(h1, h2) == doctest::Approx(0.0).epsilon(1e-15));

    CHECK_THROWS(inner_product(dc, h1));

    oracles::Rng rng(42);
    const auto u = random_signal(21, rng);
    const auto v = random_signal(21, rng);
    const double quad = oracles::trapezoid_periodic(
        [&](double t) { return u.eval(t) * v.eval(t); }, 21.0, 1024);
    CHECK(inner_product(u, v) == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("parseval against quadrature over random signals") {
    oracles::Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto u = random_signal(11, rng);
        const double quad =
            oracles::trapezoid_periodic([&](double t) { return u.eval(t) * u.eval(t); }, 11.0, 1024);
        CHECK(norm_sq(u) == doctest::Approx(quad).epsilon(1e-8));
    }
}

TEST_CASE("dirichlet reproducing property") {
    oracles::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_signal(21, rng);
        const double t0 = rng.uniform(0.0, 21.0);
        auto shifted = BandlimitedSignal::zero(21);
        shifted.add_shifted_dirichlet(1.0, t0);
        CHECK(inner_product(shifted, u) == doctest::Approx(u.eval(t0)).epsilon(1e-10));
    }
}

TEST_CASE("leaky antiderivative closed forms") {
    auto dc = BandlimitedSignal::zero(5);
    dc.coeff(0) = 0.8;

    SUBCASE("plain integral at alpha = 0") {
        CHECK(leaky_antiderivative(dc, 0.0, 1.0, 3.5, 0.0) == doctest::Approx(0.8 * 2.5));
    }
    SUBCASE("constant input with leakage") {
        const double alpha = 0.7, tau = 0.4, t = 2.9, a = 0.8;
        const double expect = (a / alpha) * (1.0 - std::exp(-alpha * (t - tau)));
        CHECK(leaky_antiderivative(dc, 0.0, tau, t, alpha) == doctest::Approx(expect).epsilon(1e-13));
        const double quad = oracles::integrate(
            [&](double s) { return std::exp(-alpha * (t - s)) * dc.eval(s); }, tau, t, 32);
        CHECK(leaky_antiderivative(dc, 0.0, tau, t, alpha) == doctest::Approx(quad).epsilon(1e-12));
    }
    SUBCASE("random signal against quadrature") {
        oracles::Rng rng(3);
        const auto x = random_signal(11, rng);
        for (double alpha : {0.0, 0.03, 1.5}) {
            const double tau = 0.37, t = 6.11, c = 0.5;
            const double quad = oracles::integrate(
                [&](double s) { return std::exp(-alpha * (t - s)) * (x.eval(s) + c); }, tau, t, 128);
            CHECK(leaky_antiderivative(x, c, tau, t, alpha) == doctest::Approx(quad).epsilon(1e-11));
        }
    }
    SUBCASE("semigroup splitting") {
        oracles::Rng rng(9);
        const auto x = random_signal(11, rng);
        const double alpha = 0.8, tau = 0.2, s = 1.7, t = 4.3, c = 1.0;
        const double whole = leaky_antiderivative(x, c, tau, t, alpha);
        const double split = std::exp(-alpha * (t - s)) * leaky_antiderivative(x, c, tau, s, alpha) +
                             leaky_antiderivative(x, c, s, t, alpha);
        CHECK(whole == doctest::Approx(split).epsilon(1e-12));
    }
    SUBCASE("degenerate and invalid ranges") {
        CHECK(leaky_antiderivative(dc, 1.0, 2.0, 2.0, 0.5) == 0.0);
        CHECK_THROWS(leaky_antiderivative(dc, 0.0, 2.0, 1.0, 0.5));
        CHECK_THROWS(leaky_antiderivative(dc, 0.0, 1.0, 2.0, -0.1));
    }
}

TEST_CASE("leaky filter is the periodic steady state") {
    oracles::Rng rng(13);
    const auto u = random_signal(11, rng);
    const double alpha = 0.6;
    const auto y = leaky_filter(u, alpha);
    // One-period balance: y(t)(1 - e^{-alpha T}) equals the leaky integral of
    // u over the trailing period.
    for (double t : {0.9, 4.2, 10.6}) {
        const double lhs = y.eval(t) * (1.0 - std::exp(-alpha * 11.0));
        const double rhs = leaky_antiderivative(u, 0.0, t - 11.0, t, alpha);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
    CHECK_THROWS(leaky_filter(u, 0.0));
}

TEST_CASE("random bandlimited inputs") {
    const auto a = random_bandlimited(61, 0.7, 123);
    const auto b = random_bandlimited(61, 0.7, 123);
    const auto c = random_bandlimited(61, 0.7, 124);
    REQUIRE(a.coeffs().size() == b.coeffs().size());
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) {
        CHECK(a.coeffs()[k] == b.coeffs()[k]);
    }
    CHECK(norm_sq(a - c) > 0.0);

    for (int j = 0; j < 61; ++j) {
        CHECK(std::abs(a.eval(j)) <= 0.7);
    }

    // DC statistics: mean of c_0 over 1000 draws within 3 sigma of the
    // uniform law (var(c_0) = amp^2 / (3 T)).
    double mean = 0.0;
    const int draws = 1000;
    for (int i = 0; i < draws; ++i) {
        mean += random_bandlimited(61, 0.7, 1000 + static_cast<std::uint64_t>(i)).coeff(0).real();
    }
    mean /= draws;
    const double sigma = 0.7 / std::sqrt(3.0 * 61.0 * draws);
    CHECK(std::abs(mean) < 3.0 * sigma);

    CHECK_THROWS(random_bandlimited(61, 0.0, 1));
}

TEST_CASE("mse in decibels") {
    oracles::Rng rng(21);
    const auto x = random_signal(11, rng);
    CHECK(mse_db(x, x, norm_sq(x)) == doctest::Approx(-200.0));
    CHECK(mse_db(BandlimitedSignal::zero(11), x, norm_sq(x)) == doctest::Approx(0.0).epsilon(1e-12));
    const double p = norm_sq(x);
    CHECK(power_db(p / 10.0, p) == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK_THROWS(mse_db(x, x, 0.0));
    CHECK_THROWS(mse_db(x, x, -1.0));
}

TEST_CASE("orthonormal coordinates") {
    oracles::Rng rng(31);
    const auto u = random_signal(21, rng);
    const auto v = random_signal(21, rng);
    const auto cu = orthonormal_coords(u);
    const auto cv = orthonormal_coords(v);
    REQUIRE(cu.size() == 21);
    double dot = 0.0;
    for (std::size_t i = 0; i < cu.size(); ++i) dot += cu[i] * cv[i];
    CHECK(dot == doctest::Approx(inner_product(u, v)).epsilon(1e-12));

    const auto back = signal_from_coords(21, cu);
    CHECK(norm_sq(back - u) < 1e-24);
}

TEST_CASE("signal arithmetic keeps the band structure") {
    oracles::Rng rng(17);
    const auto u = random_signal(11, rng);
    const auto v = random_signal(11, rng);
    const auto w = u + v;
    CHECK(w.eval(2.3) == doctest::Approx(u.eval(2.3) + v.eval(2.3)).epsilon(1e-12));
    const auto d = u - v;
    CHECK(d.eval(0.7) == doctest::Approx(u.eval(0.7) - v.eval(0.7)).epsilon(1e-12));
    const auto s = 2.5 * u;
    CHECK(s.eval(5.1) == doctest::Approx(2.5 * u.eval(5.1)).epsilon(1e-12));
    CHECK(static_cast<int>(w.coeffs().size()) == w.max_harmonic() + 1);
}
