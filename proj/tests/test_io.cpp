#include "doctest.h"

#include <cmath>
#include <string>

#include "lifpocs/experiments.hpp"
#include "lifpocs/serialize.hpp"
#include "oracles.hpp"

using namespace lifpocs;

TEST_CASE("double formatting round-trips exactly") {
    oracles::Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.03) == "0.03");
    CHECK(parse_double("-200") == -200.0);
    CHECK_THROWS(parse_double("1.2.3"));
    CHECK_THROWS(parse_double("abc"));
}

TEST_CASE("signal JSON round trip") {
    const auto x = random_bandlimited(21, 0.7, 99);
    const auto text = signal_to_json(x);
    const auto back = signal_from_json(text);
    CHECK(back.period() == 21);
    REQUIRE(back.coeffs().size() == x.coeffs().size());
    for (std::size_t k = 0; k < x.coeffs().size(); ++k) {
        CHECK(back.coeffs()[k] == x.coeffs()[k]);
    }
}

TEST_CASE("spike train serialization") {
    SpikeTrain s;
    s.period = 11;
    s.times = {0.25, 1.5, 7.75};
    s.signs = {1, -1, 1};

    SUBCASE("JSON") {
        const auto back = spikes_from_json(spikes_to_json(s));
        CHECK(back.period == s.period);
        CHECK(back.times == s.times);
        CHECK(back.signs == s.signs);
    }
    SUBCASE("CSV") {
        const auto csv = spikes_to_csv(s);
        CHECK(csv.substr(0, 10) == "time,sign\n");
        const auto back = spikes_from_csv(csv, 11);
        CHECK(back.times == s.times);
        CHECK(back.signs == s.signs);
    }
}

TEST_CASE("wiener filter JSON round trip") {
    WienerFilter f;
    f.period = 11;
    f.response = {{0.4, 0.0}, {0.1, -0.2}, {0.0, 0.3}, {1.0, 0.0}, {0.5, 0.5}, {-0.25, 0.0}};
    f.ensemble_size = 7;
    f.params = {0.3, 1.0, 0.45, Polarity::unipolar};
    const auto back = wiener_from_json(wiener_to_json(f));
    CHECK(back.period == f.period);
    CHECK(back.response == f.response);
    CHECK(back.ensemble_size == 7);
    CHECK(back.params.alpha == f.params.alpha);
    CHECK(back.params.mode == Polarity::unipolar);
}

TEST_CASE("pocs state JSON round trip") {
    PocsState st;
    st.iteration = 17;
    st.residual = Eigen::Vector3d(0.1, -0.2, 0.3);
    st.coeffs = Eigen::Vector3d(1.0, 2.0, -3.0);
    const auto back = pocs_state_from_json(pocs_state_to_json(st));
    CHECK(back.iteration == 17);
    CHECK(back.residual == st.residual);
    CHECK(back.coeffs == st.coeffs);
}

TEST_CASE("matrix CSV") {
    Eigen::MatrixXd m(2, 3);
    m << 1.0, 0.25, -3.5, 0.0, 1e-9, 2.0;
    CHECK(matrix_to_csv(m) == "1,0.25,-3.5\n0,1e-09,2\n");
}

TEST_CASE("svg rendering is deterministic") {
    PlotSeries a{"rising", {0, 1, 2, 3}, {-30, -20, -10, -5}, false};
    PlotSeries b{"floor", {0}, {-25}, true};
    const auto svg1 = render_line_plot_svg("demo", "iteration", "MSE (dB)", {a, b});
    const auto svg2 = render_line_plot_svg("demo", "iteration", "MSE (dB)", {a, b});
    CHECK(svg1 == svg2);
    CHECK(svg1.find("<svg") == 0);
    CHECK(svg1.find("polyline") != std::string::npos);
    CHECK(svg1.find("stroke-dasharray") != std::string::npos);  // constant rule is dashed
    CHECK(svg1.find("rising") != std::string::npos);
}

TEST_CASE("experiment CSV round trips") {
    SUBCASE("fig1 rows") {
        std::vector<Fig1Row> rows{{0.03, "unipolar", "naive", -12.25},
                                  {0.03, "unipolar", "wiener", -14.5},
                                  {1.5, "bipolar", "feichtinger", -3.0}};
        const auto csv = fig1_rows_to_csv(rows);
        const auto back = fig1_rows_from_csv(csv);
        REQUIRE(back.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(back[i].alpha == rows[i].alpha);
            CHECK(back[i].polarity == rows[i].polarity);
            CHECK(back[i].method == rows[i].method);
            CHECK(back[i].mse_db == rows[i].mse_db);
        }
        CHECK(fig1_rows_to_csv(back) == csv);
    }
    SUBCASE("traces") {
        std::vector<Trace> traces{{"unipolar/a0.03/pocs", {0.0, -3.5, -7.25}},
                                  {"pinv_b4", {-22.125}}};
        const auto csv = traces_to_csv(traces);
        const auto back = traces_from_csv(csv);
        REQUIRE(back.size() == 2);
        CHECK(back[0].arm == traces[0].arm);
        CHECK(back[0].mse_db == traces[0].mse_db);
        CHECK(back[1].mse_db == traces[1].mse_db);
        CHECK(traces_to_csv(back) == csv);
    }
}

TEST_CASE("config parsing") {
    const std::string text = R"(
# experiment configuration
experiment = quant
T = 31
ensemble = 12
seed = 42
alphas = 0.03, 0.5
polarity = unipolar
rho = 1.25
rho_dense = 2.5
c_unipolar = 0.9
amplitude = 0.6
iterations = 250
bits = 4, 6, 8
train_ensemble = 50
calib_ensemble = 10
)";
    const auto cfg = parse_config(text);
    CHECK(cfg.experiment == "quant");
    CHECK(cfg.period == 31);
    CHECK(cfg.ensemble == 12);
    CHECK(cfg.seed == 42);
    CHECK(cfg.alphas == std::vector<double>{0.03, 0.5});
    CHECK(cfg.polarity == "unipolar");
    CHECK(cfg.target_rate == 1.25);
    CHECK(cfg.dense_rate == 2.5);
    CHECK(cfg.offset_unipolar == 0.9);
    CHECK(cfg.amplitude == 0.6);
    CHECK(cfg.iterations == 250);
    CHECK(cfg.bits == std::vector<int>{4, 6, 8});
    CHECK(cfg.train_ensemble == 50);
    CHECK(cfg.calib_ensemble == 10);
    cfg.validate();

    CHECK_THROWS(parse_config("nonsense_key = 1\n"));
    CHECK_THROWS(parse_config("just some text\n"));

    ExperimentConfig bad;
    bad.period = 10;
    CHECK_THROWS(bad.validate());
    bad = {};
    bad.experiment = "mystery";
    CHECK_THROWS(bad.validate());
    bad = {};
    bad.polarity = "sideways";
    CHECK_THROWS(bad.validate());
}
