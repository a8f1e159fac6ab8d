#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lifpocs/pocs.hpp"
#include "lifpocs/reconstruct.hpp"
#include "lifpocs/version.hpp"

namespace lifpocs {

/// Seeded configuration for the experiment families. A flat key = value file
/// maps onto these fields (see parse_config).
struct ExperimentConfig {
    std::string experiment = "fig1";  // fig1 | figiter | quant
    int period = 61;
    int ensemble = 100;
    std::uint64_t seed = 1;
    std::vector<double> alphas = {0.03, 0.3, 0.8, 1.5};
    std::string polarity = "both";  // unipolar | bipolar | both
    double target_rate = 1.5;
    double dense_rate = 2.0;  // second oversampling arm / quant setting
    double offset_unipolar = 1.0;
    double offset_bipolar = 0.0;
    double amplitude = 0.7;
    int iterations = 2000;
    std::vector<int> bits = {4, 5, 6, 7, 8, 9, 10};
    int train_ensemble = 1000;
    int calib_ensemble = 20;

    void validate() const;
};

ExperimentConfig parse_config(const std::string& text);

struct Fig1Row {
    double alpha = 0.0;
    std::string polarity;
    std::string method;  // naive | feichtinger | wiener
    double mse_db = 0.0;
};

/// Ensemble-averaged MSE trace; single-value traces are constants (the
/// pseudo-inverse floors of the quantization family).
struct Trace {
    std::string arm;
    std::vector<double> mse_db;
};

struct ExperimentRecord {
    ExperimentConfig config;
    std::vector<Fig1Row> fig1_rows;
    std::vector<Trace> traces;
    double wall_seconds = 0.0;
    std::string version = LIFPOCS_VERSION;
};

ExperimentRecord run_fig1(const ExperimentConfig& cfg);
ExperimentRecord run_figiter(const ExperimentConfig& cfg);
ExperimentRecord run_quant(const ExperimentConfig& cfg);
ExperimentRecord run_experiment(const ExperimentConfig& cfg);

std::string fig1_rows_to_csv(const std::vector<Fig1Row>& rows);
std::vector<Fig1Row> fig1_rows_from_csv(const std::string& text);
std::string traces_to_csv(const std::vector<Trace>& traces);
std::vector<Trace> traces_from_csv(const std::string& text);

std::string record_to_json(const ExperimentRecord& rec);

/// Writes the family CSV and one SVG line plot per figure, rendered from the
/// re-ingested CSV so a round trip is byte-identical. Returns written paths.
std::vector<std::string> render_plots(const ExperimentRecord& rec, const std::string& out_dir);

/// Worker count from LIFPOCS_THREADS, else hardware concurrency.
int thread_count();
/// Runs fn(0..count-1) across workers; results must go into per-index slots.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace lifpocs
