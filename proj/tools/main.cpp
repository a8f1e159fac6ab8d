#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lifpocs/experiments.hpp"
#include "lifpocs/pocs.hpp"
#include "lifpocs/serialize.hpp"
#include "lifpocs/version.hpp"

namespace fs = std::filesystem;
using namespace lifpocs;

namespace {

ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    return parse_config(read_text_file(path));
}

Polarity parse_polarity(const std::string& s) {
    if (s == "unipolar") return Polarity::unipolar;
    if (s == "bipolar") return Polarity::bipolar;
    throw CLI::ValidationError("polarity must be unipolar or bipolar");
}

BandlimitedSignal draw_signal(int period, double amp, double offset, Polarity pol,
                              std::uint64_t seed) {
    for (int retry = 0; retry < 64; ++retry) {
        BandlimitedSignal x = random_bandlimited(period, amp, substream_seed(seed, 7, retry));
        if (pol == Polarity::bipolar) return x;
        const TimeGrid grid(period);
        double lowest = offset;
        for (int i = 0; i < grid.count(); ++i) {
            lowest = std::min(lowest, x.eval(grid.instant(i)) + offset);
        }
        if (lowest > 1e-6) return x;
    }
    throw std::runtime_error("could not draw a positive unipolar input");
}

void write_out(const fs::path& dir, const std::string& name, const std::string& content,
               bool announce = true) {
    fs::create_directories(dir);
    const std::string path = (dir / name).string();
    write_text_file(path, content);
    if (announce) std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LIF encoding and bandlimited reconstruction experiments"};
    app.set_version_flag("--version", LIFPOCS_VERSION);
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;

    // ---- encode ----
    auto* enc = app.add_subcommand("encode", "draw a random input and encode it");
    std::string enc_polarity = "bipolar";
    double enc_alpha = -1.0, enc_offset = -1.0, enc_theta = 0.0, enc_rho = 0.0;
    enc->add_option("--config", config_path, "key = value configuration file");
    enc->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_set = true; });
    enc->add_option("--out-dir", out_dir, "output directory");
    enc->add_option("--format", format, "spike output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    enc->add_option("--polarity", enc_polarity, "unipolar or bipolar")
        ->check(CLI::IsMember({"unipolar", "bipolar"}));
    enc->add_option("--alpha", enc_alpha, "leakage");
    enc->add_option("--c", enc_offset, "input offset");
    enc->add_option("--theta", enc_theta, "threshold (calibrated to --rho when omitted)");
    enc->add_option("--rho", enc_rho, "target firing density for calibration");

    // ---- reconstruct ----
    auto* recon = app.add_subcommand("reconstruct", "reconstruct a signal from spikes");
    std::string spikes_path, truth_path, resume_path, method = "pocs";
    double rc_alpha = 0.0, rc_offset = 0.0, rc_theta = 1.0;
    int rc_iterations = 1000;
    bool dump_matrices = false;
    recon->add_option("--spikes", spikes_path, "spike train JSON")->required();
    recon->add_option("--method", method, "naive | feichtinger | lazar | pocs | yeh_stark | pinv")
        ->check(CLI::IsMember({"naive", "feichtinger", "lazar", "pocs", "yeh_stark", "pinv"}));
    recon->add_option("--alpha", rc_alpha, "leakage used by the encoder");
    recon->add_option("--c", rc_offset, "offset used by the encoder");
    recon->add_option("--theta", rc_theta, "threshold used by the encoder");
    recon->add_option("--iterations", rc_iterations, "iteration budget");
    recon->add_option("--signal", truth_path, "ground-truth signal JSON (enables the MSE trace)");
    recon->add_option("--resume", resume_path, "iteration state JSON to continue from (pocs)");
    recon->add_flag("--dump-matrices", dump_matrices,
                    "also write the iteration and operator matrices as CSV");
    recon->add_option("--polarity", enc_polarity, "unipolar or bipolar")
        ->check(CLI::IsMember({"unipolar", "bipolar"}));
    recon->add_option("--out-dir", out_dir, "output directory");

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "run an experiment family");
    std::string family;
    exp->add_option("family", family, "fig1 | figiter | quant")
        ->required()
        ->check(CLI::IsMember({"fig1", "figiter", "quant"}));
    exp->add_option("--config", config_path, "key = value configuration file");
    exp->add_option("--seed", seed, "RNG seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    exp->add_option("--out-dir", out_dir, "output directory");
    exp->add_option("--format", format, "csv (plots + csv) or json (additionally the full record)")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enc) {
            ExperimentConfig cfg = load_config(config_path);
            if (seed_set) cfg.seed = seed;
            const Polarity pol = parse_polarity(enc_polarity);
            LifParams p;
            p.alpha = (enc_alpha >= 0.0) ? enc_alpha : cfg.alphas.front();
            p.offset = (enc_offset >= 0.0)
                           ? enc_offset
                           : (pol == Polarity::unipolar ? cfg.offset_unipolar : cfg.offset_bipolar);
            p.mode = pol;
            const BandlimitedSignal x = draw_signal(cfg.period, cfg.amplitude, p.offset, pol, cfg.seed);
            if (enc_theta > 0.0) {
                p.threshold = enc_theta;
            } else {
                const double rho = (enc_rho > 0.0) ? enc_rho : cfg.target_rate;
                p.threshold = calibrate_threshold({x}, p, rho);
            }
            const SpikeTrain s = encode(x, p, TimeGrid(cfg.period));
            write_out(out_dir, "signal.json", signal_to_json(x));
            if (format == "json") {
                write_out(out_dir, "spikes.json", spikes_to_json(s));
            } else {
                write_out(out_dir, "spikes.csv", spikes_to_csv(s));
            }
            std::cout << "encoded " << s.size() << " spikes (density "
                      << static_cast<double>(s.size()) / cfg.period << "/Nyquist period, threshold "
                      << format_double(p.threshold) << ")\n";
            if (s.saturated) std::cout << "warning: threshold never reached, train is empty\n";
            return 0;
        }

        if (*recon) {
            const SpikeTrain s = spikes_from_json(read_text_file(spikes_path));
            LifParams p{rc_alpha, rc_offset, rc_theta, parse_polarity(enc_polarity)};
            BandlimitedSignal estimate = BandlimitedSignal::zero(s.period);
            const bool have_truth = !truth_path.empty();
            BandlimitedSignal truth = BandlimitedSignal::zero(s.period);
            if (have_truth) truth = signal_from_json(read_text_file(truth_path));

            if (method == "naive") {
                estimate = naive_estimate(s, p.threshold);
                estimate.coeff(0) -= p.offset;
            } else if (method == "feichtinger") {
                estimate = feichtinger_estimate(s, p.threshold, p.alpha);
                estimate.coeff(0) -= p.offset;
            } else {
                const KernelSystem ks = build_system(s, p);
                if (dump_matrices) {
                    write_out(out_dir, "iteration_matrix.csv", matrix_to_csv(ks.iteration_matrix()));
                    write_out(out_dir, "operator_matrix.csv", matrix_to_csv(ks.operator_matrix()));
                }
                if (method == "pinv") {
                    estimate = pseudo_inverse(ks, ks.samples());
                } else if (method == "pocs") {
                    PocsState state = resume_path.empty()
                                          ? pocs_init(ks)
                                          : pocs_state_from_json(read_text_file(resume_path));
                    if (state.residual.size() != ks.size()) {
                        throw std::runtime_error("resume state does not match the spike train");
                    }
                    for (int k = 0; k < rc_iterations; ++k) pocs_step(state, ks);
                    estimate = ks.synthesize(state.coeffs);
                    write_out(out_dir, "pocs_state.json", pocs_state_to_json(state));
                } else if (method == "yeh_stark") {
                    estimate = BandlimitedSignal::zero(s.period);
                    for (int k = 0; k < rc_iterations; ++k) estimate = yeh_stark_sweep(estimate, ks);
                } else {  // lazar
                    estimate = BandlimitedSignal::zero(s.period);
                    for (int k = 0; k < rc_iterations; ++k) estimate = lazar_iterate(ks, estimate);
                }
                if (have_truth && (method == "pocs")) {
                    std::vector<Trace> tr{{method, mse_trace(ks, truth, rc_iterations)}};
                    write_out(out_dir, "trace.csv", traces_to_csv(tr));
                }
            }
            write_out(out_dir, "estimate.json", signal_to_json(estimate));
            if (have_truth) {
                std::cout << "MSE " << mse_db(estimate, truth, norm_sq(truth)) << " dB\n";
            }
            return 0;
        }

        if (*exp) {
            ExperimentConfig cfg = load_config(config_path);
            cfg.experiment = family;
            if (seed_set) cfg.seed = seed;
            const ExperimentRecord rec = run_experiment(cfg);
            for (const auto& path : render_plots(rec, out_dir)) {
                std::cout << "wrote " << path << "\n";
            }
            if (format == "json") {
                write_out(out_dir, "record.json", record_to_json(rec));
            }
            for (const auto& r : rec.fig1_rows) {
                std::cout << r.polarity << " alpha=" << r.alpha << " " << r.method << ": "
                          << r.mse_db << " dB\n";
            }
            for (const auto& tr : rec.traces) {
                std::cout << tr.arm << ": final " << tr.mse_db.back() << " dB ("
                          << tr.mse_db.size() - 1 << " iterations)\n";
            }
            std::cout << "completed in " << rec.wall_seconds << " s\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
