#include "lifpocs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "lifpocs/serialize.hpp"

namespace lifpocs {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
// Divergent iterations (Lazar under leakage) are held at this power ratio so
// every reported dB value stays finite.
constexpr double kPowerCapRatio = 1e20;

enum StreamPurpose : std::uint64_t { kCalibStream = 1, kTrainStream = 2, kEvalStream = 3 };

std::uint64_t cell_stream(std::uint64_t purpose, int pol_idx, int alpha_idx) {
    return purpose * 1000000ULL + static_cast<std::uint64_t>(pol_idx) * 1000ULL +
           static_cast<std::uint64_t>(alpha_idx);
}

std::vector<Polarity> polarities_of(const ExperimentConfig& cfg) {
    if (cfg.polarity == "unipolar") return {Polarity::unipolar};
    if (cfg.polarity == "bipolar") return {Polarity::bipolar};
    return {Polarity::unipolar, Polarity::bipolar};
}

const char* pol_name(Polarity p) { return p == Polarity::unipolar ? "unipolar" : "bipolar"; }

/// Random input for one ensemble member. Unipolar cells reject the rare draw
/// whose interpolant dips below -offset and move to the next sub-seed.
BandlimitedSignal draw_input(const ExperimentConfig& cfg, Polarity pol, double offset,
                             std::uint64_t stream, int member) {
    for (int retry = 0; retry < 64; ++retry) {
        const std::uint64_t seed = substream_seed(
            cfg.seed, stream, static_cast<std::uint64_t>(member) * 131ULL + retry);
        BandlimitedSignal x = random_bandlimited(cfg.period, cfg.amplitude, seed);
        if (pol == Polarity::bipolar) return x;
        const TimeGrid grid(cfg.period);
        double lowest = offset;
        for (int i = 0; i < grid.count(); ++i) {
            lowest = std::min(lowest, x.eval(grid.instant(i)) + offset);
        }
        if (lowest > 1e-6) return x;
    }
    throw std::runtime_error("could not draw a positive unipolar input");
}

double capped_power(double p, double ref) {
    if (!std::isfinite(p) || p > ref * kPowerCapRatio) return ref * kPowerCapRatio;
    return p;
}

/// Error powers of the contraction iteration from zero, padded at the cap
/// once the iterates blow up.
std::vector<double> lazar_error_powers(const KernelSystem& ks, const BandlimitedSignal& x,
                                       int iterations) {
    const int T = ks.period();
    const int modes = (T - 1) / 2 + 1;
    const int N = ks.size();
    const double w0 = 2.0 * kPi / T;

    // inner_n = Re(B u) and the midpoint correction u += Mid d, in coefficient
    // space for speed.
    Eigen::MatrixXcd B(N, modes);
    Eigen::MatrixXcd Mid(modes, N);
    for (int n = 0; n < N; ++n) {
        const BandlimitedSignal hk = ks.filtered_kernel(n);
        B(n, 0) = static_cast<double>(T) * std::conj(hk.coeff(0));
        const double midpoint = 0.5 * (ks.time(n) + ks.time(n + 1));
        Mid(0, n) = 1.0 / T;
        for (int k = 1; k < modes; ++k) {
            B(n, k) = 2.0 * T * std::conj(hk.coeff(k));
            Mid(k, n) = std::polar(1.0 / T, -w0 * k * midpoint);
        }
    }
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(modes);
    Eigen::VectorXcd xc(modes);
    for (int k = 0; k < modes; ++k) xc[k] = x.coeff(k);
    auto err_power = [&]() {
        double acc = std::norm(u[0] - xc[0]);
        for (int k = 1; k < modes; ++k) acc += 2.0 * std::norm(u[k] - xc[k]);
        return T * acc;
    };

    const double ref = norm_sq(x);
    std::vector<double> powers;
    powers.reserve(static_cast<std::size_t>(iterations) + 1);
    powers.push_back(err_power());
    for (int k = 1; k <= iterations; ++k) {
        const Eigen::VectorXd inner = (B * u).real();
        const Eigen::VectorXd d = ks.samples() - inner;
        u += Mid * d.cast<std::complex<double>>();
        const double p = err_power();
        if (!std::isfinite(p) || p > ref * kPowerCapRatio) {
            while (static_cast<int>(powers.size()) <= iterations) {
                powers.push_back(ref * kPowerCapRatio);
            }
            break;
        }
        powers.push_back(p);
    }
    return powers;
}

Trace averaged_trace(std::string arm, const std::vector<std::vector<double>>& member_powers,
                     double total_ref, int members) {
    Trace tr;
    tr.arm = std::move(arm);
    if (member_powers.empty()) return tr;
    const std::size_t len = member_powers.front().size();
    const double avg_ref = total_ref / members;
    for (std::size_t k = 0; k < len; ++k) {
        double acc = 0.0;
        for (const auto& p : member_powers) acc += capped_power(p[k], avg_ref);
        tr.mse_db.push_back(power_db(std::min(acc / members, avg_ref * kPowerCapRatio), avg_ref));
    }
    return tr;
}

std::string arm_prefix(Polarity pol, double alpha) {
    return std::string(pol_name(pol)) + "/a" + format_double(alpha) + "/";
}

}  // namespace

void ExperimentConfig::validate() const {
    if (experiment != "fig1" && experiment != "figiter" && experiment != "quant") {
        throw std::invalid_argument("unknown experiment: " + experiment);
    }
    if (period <= 0 || period % 2 == 0) throw std::invalid_argument("period must be odd positive");
    if (ensemble < 1 || train_ensemble < 1 || calib_ensemble < 1) {
        throw std::invalid_argument("ensemble sizes must be at least 1");
    }
    if (alphas.empty()) throw std::invalid_argument("need at least one leakage value");
    for (const double a : alphas) {
        if (a < 0.0 || (experiment == "fig1" && a <= 0.0)) {
            throw std::invalid_argument("leakage values must be positive");
        }
    }
    if (polarity != "unipolar" && polarity != "bipolar" && polarity != "both") {
        throw std::invalid_argument("polarity must be unipolar, bipolar or both");
    }
    if (target_rate <= 0.0 || dense_rate <= 0.0) throw std::invalid_argument("rates must be positive");
    if (amplitude <= 0.0) throw std::invalid_argument("amplitude must be positive");
    if (iterations < 0) throw std::invalid_argument("iteration budget must be nonnegative");
    if (offset_unipolar < 0.0 || offset_bipolar < 0.0) {
        throw std::invalid_argument("offsets must be nonnegative");
    }
    for (const int b : bits) {
        if (b < 1) throw std::invalid_argument("bit depths must be at least 1");
    }
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return (a == std::string::npos) ? std::string{} : s.substr(a, b - a + 1);
    };
    auto parse_list_d = [&](const std::string& v) {
        std::vector<double> out;
        std::istringstream items(v);
        std::string item;
        while (std::getline(items, item, ',')) out.push_back(parse_double(trim(item)));
        return out;
    };
    auto parse_list_i = [&](const std::string& v) {
        std::vector<int> out;
        for (const double d : parse_list_d(v)) out.push_back(static_cast<int>(d));
        return out;
    };
    while (std::getline(in, line)) {
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad config line: " + line);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "experiment") cfg.experiment = value;
        else if (key == "T") cfg.period = static_cast<int>(parse_double(value));
        else if (key == "ensemble") cfg.ensemble = static_cast<int>(parse_double(value));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(value));
        else if (key == "alphas") cfg.alphas = parse_list_d(value);
        else if (key == "polarity") cfg.polarity = value;
        else if (key == "rho") cfg.target_rate = parse_double(value);
        else if (key == "rho_dense") cfg.dense_rate = parse_double(value);
        else if (key == "c_unipolar") cfg.offset_unipolar = parse_double(value);
        else if (key == "c_bipolar") cfg.offset_bipolar = parse_double(value);
        else if (key == "amplitude") cfg.amplitude = parse_double(value);
        else if (key == "iterations") cfg.iterations = static_cast<int>(parse_double(value));
        else if (key == "bits") cfg.bits = parse_list_i(value);
        else if (key == "train_ensemble") cfg.train_ensemble = static_cast<int>(parse_double(value));
        else if (key == "calib_ensemble") cfg.calib_ensemble = static_cast<int>(parse_double(value));
        else throw std::invalid_argument("unknown config key: " + key);
    }
    return cfg;
}

int thread_count() {
    if (const char* env = std::getenv("LIFPOCS_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

ExperimentRecord run_fig1(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig c = cfg;
    c.experiment = "fig1";
    c.validate();
    ExperimentRecord rec;
    rec.config = c;

    const auto pols = polarities_of(c);
    for (int pol_idx = 0; pol_idx < static_cast<int>(pols.size()); ++pol_idx) {
        const Polarity pol = pols[static_cast<std::size_t>(pol_idx)];
        const double offset = (pol == Polarity::unipolar) ? c.offset_unipolar : c.offset_bipolar;
        for (int a_idx = 0; a_idx < static_cast<int>(c.alphas.size()); ++a_idx) {
            const double alpha = c.alphas[static_cast<std::size_t>(a_idx)];
            LifParams params{alpha, offset, 1.0, pol};

            std::vector<BandlimitedSignal> calib;
            calib.reserve(static_cast<std::size_t>(c.calib_ensemble));
            for (int j = 0; j < c.calib_ensemble; ++j) {
                calib.push_back(
                    draw_input(c, pol, offset, cell_stream(kCalibStream, pol_idx, a_idx), j));
            }
            params.threshold = calibrate_threshold(calib, params, c.target_rate);

            std::vector<std::pair<BandlimitedSignal, SpikeTrain>> pairs(
                static_cast<std::size_t>(c.train_ensemble));
            parallel_for(c.train_ensemble, [&](int j) {
                BandlimitedSignal x =
                    draw_input(c, pol, offset, cell_stream(kTrainStream, pol_idx, a_idx), j);
                SpikeTrain s = encode(x, params, TimeGrid(c.period));
                pairs[static_cast<std::size_t>(j)] = {std::move(x), std::move(s)};
            });
            const WienerFilter filter = wiener_fit(pairs, params);

            struct Errors {
                double naive = 0, feich = 0, wiener = 0, ref = 0;
            };
            std::vector<Errors> cells(static_cast<std::size_t>(c.ensemble));
            parallel_for(c.ensemble, [&](int j) {
                const BandlimitedSignal x =
                    draw_input(c, pol, offset, cell_stream(kEvalStream, pol_idx, a_idx), j);
                const SpikeTrain s = encode(x, params, TimeGrid(c.period));
                BandlimitedSignal xc = x;
                xc.coeff(0) += offset;
                Errors& e = cells[static_cast<std::size_t>(j)];
                e.naive = norm_sq(naive_estimate(s, params.threshold) - xc);
                e.feich = norm_sq(feichtinger_estimate(s, params.threshold, alpha) - xc);
                e.wiener = norm_sq(wiener_apply(filter, s) - xc);
                e.ref = norm_sq(x);
            });
            Errors sum;
            for (const auto& e : cells) {
                sum.naive += e.naive;
                sum.feich += e.feich;
                sum.wiener += e.wiener;
                sum.ref += e.ref;
            }
            rec.fig1_rows.push_back({alpha, pol_name(pol), "naive", power_db(sum.naive, sum.ref)});
            rec.fig1_rows.push_back(
                {alpha, pol_name(pol), "feichtinger", power_db(sum.feich, sum.ref)});
            rec.fig1_rows.push_back(
                {alpha, pol_name(pol), "wiener", power_db(sum.wiener, sum.ref)});
        }
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

ExperimentRecord run_figiter(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig c = cfg;
    c.experiment = "figiter";
    c.validate();
    ExperimentRecord rec;
    rec.config = c;

    const auto pols = polarities_of(c);
    for (int pol_idx = 0; pol_idx < static_cast<int>(pols.size()); ++pol_idx) {
        const Polarity pol = pols[static_cast<std::size_t>(pol_idx)];
        const double offset = (pol == Polarity::unipolar) ? c.offset_unipolar : c.offset_bipolar;
        for (int a_idx = 0; a_idx < static_cast<int>(c.alphas.size()); ++a_idx) {
            const double alpha = c.alphas[static_cast<std::size_t>(a_idx)];
            LifParams sparse{alpha, offset, 1.0, pol};
            LifParams dense = sparse;

            std::vector<BandlimitedSignal> calib;
            for (int j = 0; j < c.calib_ensemble; ++j) {
                calib.push_back(
                    draw_input(c, pol, offset, cell_stream(kCalibStream, pol_idx, a_idx), j));
            }
            sparse.threshold = calibrate_threshold(calib, sparse, c.target_rate);
            dense.threshold = calibrate_threshold(calib, dense, c.dense_rate);

            std::vector<std::pair<BandlimitedSignal, SpikeTrain>> pairs(
                static_cast<std::size_t>(c.train_ensemble));
            parallel_for(c.train_ensemble, [&](int j) {
                BandlimitedSignal x =
                    draw_input(c, pol, offset, cell_stream(kTrainStream, pol_idx, a_idx), j);
                SpikeTrain s = encode(x, sparse, TimeGrid(c.period));
                pairs[static_cast<std::size_t>(j)] = {std::move(x), std::move(s)};
            });
            const WienerFilter filter = wiener_fit(pairs, sparse);

            struct MemberTraces {
                std::vector<double> lazar, pocs, warm, dense;
                double ref = 0.0;
            };
            std::vector<MemberTraces> members(static_cast<std::size_t>(c.ensemble));
            parallel_for(c.ensemble, [&](int j) {
                MemberTraces& m = members[static_cast<std::size_t>(j)];
                const BandlimitedSignal x =
                    draw_input(c, pol, offset, cell_stream(kEvalStream, pol_idx, a_idx), j);
                m.ref = norm_sq(x);

                const SpikeTrain s = encode(x, sparse, TimeGrid(c.period));
                const KernelSystem ks = build_system(s, sparse);
                m.lazar = lazar_error_powers(ks, x, c.iterations);
                m.pocs = pocs_error_powers(ks, x, c.iterations);
                BandlimitedSignal warm_start = wiener_apply(filter, s);
                warm_start.coeff(0) -= offset;  // estimate of x rather than x + c
                m.warm = pocs_error_powers(ks, x, c.iterations, &warm_start);

                const SpikeTrain s2 = encode(x, dense, TimeGrid(c.period));
                const KernelSystem ks2 = build_system(s2, dense);
                m.dense = pocs_error_powers(ks2, x, c.iterations);
            });

            double total_ref = 0.0;
            for (const auto& m : members) total_ref += m.ref;
            const std::string prefix = arm_prefix(pol, alpha);
            auto collect = [&](const char* arm, auto member_field) {
                std::vector<std::vector<double>> all;
                all.reserve(members.size());
                for (const auto& m : members) all.push_back(member_field(m));
                rec.traces.push_back(
                    averaged_trace(prefix + arm, all, total_ref, c.ensemble));
            };
            collect("lazar", [](const MemberTraces& m) { return m.lazar; });
            collect("pocs", [](const MemberTraces& m) { return m.pocs; });
            collect("pocs_warm", [](const MemberTraces& m) { return m.warm; });
            collect("pocs_rho2", [](const MemberTraces& m) { return m.dense; });
        }
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

ExperimentRecord run_quant(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig c = cfg;
    c.experiment = "quant";
    c.validate();
    ExperimentRecord rec;
    rec.config = c;

    const Polarity pol = Polarity::unipolar;
    const double offset = c.offset_unipolar;
    const double alpha = c.alphas.front();
    LifParams params{alpha, offset, 1.0, pol};

    std::vector<BandlimitedSignal> calib;
    for (int j = 0; j < c.calib_ensemble; ++j) {
        calib.push_back(draw_input(c, pol, offset, cell_stream(kCalibStream, 0, 0), j));
    }
    params.threshold = calibrate_threshold(calib, params, c.dense_rate);

    struct MemberTraces {
        std::vector<std::vector<double>> pocs;  // per bit depth
        std::vector<double> pinv;               // per bit depth
        double ref = 0.0;
    };
    std::vector<MemberTraces> members(static_cast<std::size_t>(c.ensemble));
    parallel_for(c.ensemble, [&](int j) {
        MemberTraces& m = members[static_cast<std::size_t>(j)];
        const BandlimitedSignal x = draw_input(c, pol, offset, cell_stream(kEvalStream, 0, 0), j);
        m.ref = norm_sq(x);
        const SpikeTrain s = encode(x, params, TimeGrid(c.period));
        for (const int b : c.bits) {
            const SpikeTrain sq = quantize_times(s, b);
            const KernelSystem ks = build_system(sq, params);
            m.pocs.push_back(pocs_error_powers(ks, x, c.iterations));
            m.pinv.push_back(norm_sq(pseudo_inverse(ks, ks.samples()) - x));
        }
    });

    double total_ref = 0.0;
    for (const auto& m : members) total_ref += m.ref;
    for (std::size_t bi = 0; bi < c.bits.size(); ++bi) {
        std::vector<std::vector<double>> pocs_all, pinv_all;
        for (const auto& m : members) {
            pocs_all.push_back(m.pocs[bi]);
            pinv_all.push_back({m.pinv[bi]});
        }
        const std::string suffix = "_b" + std::to_string(c.bits[bi]);
        rec.traces.push_back(averaged_trace("pocs" + suffix, pocs_all, total_ref, c.ensemble));
        rec.traces.push_back(averaged_trace("pinv" + suffix, pinv_all, total_ref, c.ensemble));
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == "fig1") return run_fig1(cfg);
    if (cfg.experiment == "figiter") return run_figiter(cfg);
    if (cfg.experiment == "quant") return run_quant(cfg);
    throw std::invalid_argument("unknown experiment: " + cfg.experiment);
}

std::string fig1_rows_to_csv(const std::vector<Fig1Row>& rows) {
    std::ostringstream out;
    out << "alpha,polarity,method,mse_db\n";
    for (const auto& r : rows) {
        out << format_double(r.alpha) << "," << r.polarity << "," << r.method << ","
            << format_double(r.mse_db) << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::vector<Fig1Row> fig1_rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Fig1Row> rows;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 4) throw std::runtime_error("bad fig1 CSV row: " + line);
        rows.push_back({parse_double(f[0]), f[1], f[2], parse_double(f[3])});
    }
    return rows;
}

std::string traces_to_csv(const std::vector<Trace>& traces) {
    std::ostringstream out;
    out << "arm,k,mse_db\n";
    for (const auto& tr : traces) {
        for (std::size_t k = 0; k < tr.mse_db.size(); ++k) {
            out << tr.arm << "," << k << "," << format_double(tr.mse_db[k]) << "\n";
        }
    }
    return out.str();
}

std::vector<Trace> traces_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Trace> traces;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 3) throw std::runtime_error("bad trace CSV row: " + line);
        if (traces.empty() || traces.back().arm != f[0]) {
            traces.push_back({f[0], {}});
        }
        traces.back().mse_db.push_back(parse_double(f[2]));
    }
    return traces;
}

namespace {

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["T"] = c.period;
    j["ensemble"] = c.ensemble;
    j["seed"] = c.seed;
    j["alphas"] = c.alphas;
    j["polarity"] = c.polarity;
    j["rho"] = c.target_rate;
    j["rho_dense"] = c.dense_rate;
    j["c_unipolar"] = c.offset_unipolar;
    j["c_bipolar"] = c.offset_bipolar;
    j["amplitude"] = c.amplitude;
    j["iterations"] = c.iterations;
    j["bits"] = c.bits;
    j["train_ensemble"] = c.train_ensemble;
    j["calib_ensemble"] = c.calib_ensemble;
    return j;
}

}  // namespace

std::string record_to_json(const ExperimentRecord& rec) {
    json j;
    j["config"] = config_to_json(rec.config);
    j["version"] = rec.version;
    j["wall_seconds"] = rec.wall_seconds;
    if (!rec.fig1_rows.empty()) {
        json rows = json::array();
        for (const auto& r : rec.fig1_rows) {
            rows.push_back({{"alpha", r.alpha},
                            {"polarity", r.polarity},
                            {"method", r.method},
                            {"mse_db", r.mse_db}});
        }
        j["fig1"] = rows;
    }
    if (!rec.traces.empty()) {
        json arr = json::array();
        for (const auto& tr : rec.traces) {
            arr.push_back({{"arm", tr.arm}, {"mse_db", tr.mse_db}});
        }
        j["traces"] = arr;
    }
    return j.dump(2) + "\n";
}

std::vector<std::string> render_plots(const ExperimentRecord& rec, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_text_file(path, content);
        written.push_back(path);
    };

    const std::string& family = rec.config.experiment;
    if (family == "fig1") {
        emit("fig1.csv", fig1_rows_to_csv(rec.fig1_rows));
        const auto rows = fig1_rows_from_csv(read_text_file(written.back()));
        std::vector<std::string> pol_order;
        for (const auto& r : rows) {
            if (std::find(pol_order.begin(), pol_order.end(), r.polarity) == pol_order.end()) {
                pol_order.push_back(r.polarity);
            }
        }
        for (const auto& pol : pol_order) {
            const char* methods[] = {"naive", "feichtinger", "wiener"};
            std::vector<PlotSeries> series;
            for (const char* method : methods) {
                PlotSeries s;
                s.label = method;
                for (const auto& r : rows) {
                    if (r.polarity == pol && r.method == method) {
                        s.x.push_back(r.alpha);
                        s.y.push_back(r.mse_db);
                    }
                }
                if (!s.x.empty()) series.push_back(std::move(s));
            }
            emit("fig1_" + pol + ".svg",
                 render_line_plot_svg("one-step estimates, " + pol, "leakage", "MSE (dB)", series));
        }
    } else if (family == "figiter") {
        emit("figiter.csv", traces_to_csv(rec.traces));
        const auto traces = traces_from_csv(read_text_file(written.back()));
        std::vector<std::string> prefixes;
        for (const auto& tr : traces) {
            const auto slash = tr.arm.rfind('/');
            const std::string prefix = (slash == std::string::npos) ? "" : tr.arm.substr(0, slash);
            if (std::find(prefixes.begin(), prefixes.end(), prefix) == prefixes.end()) {
                prefixes.push_back(prefix);
            }
        }
        for (const auto& prefix : prefixes) {
            std::vector<PlotSeries> series;
            for (const auto& tr : traces) {
                if (tr.arm.rfind(prefix + "/", 0) != 0) continue;
                PlotSeries s;
                s.label = tr.arm.substr(prefix.size() + 1);
                for (std::size_t k = 0; k < tr.mse_db.size(); ++k) {
                    s.x.push_back(static_cast<double>(k));
                    s.y.push_back(tr.mse_db[k]);
                }
                series.push_back(std::move(s));
            }
            std::string stem = prefix;
            std::replace(stem.begin(), stem.end(), '/', '_');
            emit("figiter_" + stem + ".svg",
                 render_line_plot_svg("iterative reconstruction, " + prefix, "iteration",
                                      "MSE (dB)", series));
        }
    } else if (family == "quant") {
        emit("quant.csv", traces_to_csv(rec.traces));
        const auto traces = traces_from_csv(read_text_file(written.back()));
        std::vector<PlotSeries> series;
        for (const auto& tr : traces) {
            PlotSeries s;
            s.label = tr.arm;
            s.dashed = tr.arm.rfind("pinv", 0) == 0;
            for (std::size_t k = 0; k < tr.mse_db.size(); ++k) {
                s.x.push_back(static_cast<double>(k));
                s.y.push_back(tr.mse_db[k]);
            }
            series.push_back(std::move(s));
        }
        emit("quant.svg", render_line_plot_svg("time quantization", "iteration", "MSE (dB)", series));
    } else {
        throw std::invalid_argument("unknown experiment family: " + family);
    }
    return written;
}

}  // namespace lifpocs
