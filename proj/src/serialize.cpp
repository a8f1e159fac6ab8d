#include "lifpocs/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lifpocs {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return {buf, ptr};
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    while (begin < end && *begin == ' ') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) throw std::runtime_error("bad numeric field: " + s);
    return v;
}

namespace {

json complex_list(const std::vector<std::complex<double>>& cs) {
    json arr = json::array();
    for (const auto& c : cs) arr.push_back({c.real(), c.imag()});
    return arr;
}

std::vector<std::complex<double>> complex_list_from(const json& arr) {
    std::vector<std::complex<double>> out;
    for (const auto& p : arr) out.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return out;
}

}  // namespace

std::string signal_to_json(const BandlimitedSignal& u) {
    json j;
    j["T"] = u.period();
    j["coeffs"] = complex_list(u.coeffs());
    return j.dump(2) + "\n";
}

BandlimitedSignal signal_from_json(const std::string& text) {
    const json j = json::parse(text);
    return BandlimitedSignal::from_coeffs(j.at("T").get<int>(),
                                          complex_list_from(j.at("coeffs")));
}

std::string spikes_to_json(const SpikeTrain& s) {
    json j;
    j["T"] = s.period;
    j["times"] = s.times;
    j["signs"] = s.signs;
    return j.dump(2) + "\n";
}

SpikeTrain spikes_from_json(const std::string& text) {
    const json j = json::parse(text);
    SpikeTrain s;
    s.period = j.at("T").get<int>();
    s.times = j.at("times").get<std::vector<double>>();
    s.signs = j.at("signs").get<std::vector<int>>();
    if (s.times.size() != s.signs.size()) throw std::runtime_error("times/signs length mismatch");
    return s;
}

std::string spikes_to_csv(const SpikeTrain& s) {
    std::ostringstream out;
    out << "time,sign\n";
    for (std::size_t n = 0; n < s.size(); ++n) {
        out << format_double(s.times[n]) << "," << s.signs[n] << "\n";
    }
    return out.str();
}

SpikeTrain spikes_from_csv(const std::string& text, int period) {
    std::istringstream in(text);
    std::string line;
    SpikeTrain s;
    s.period = period;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("bad spike CSV row: " + line);
        s.times.push_back(parse_double(line.substr(0, comma)));
        s.signs.push_back(static_cast<int>(parse_double(line.substr(comma + 1))));
    }
    return s;
}

std::string wiener_to_json(const WienerFilter& f) {
    json j;
    j["T"] = f.period;
    j["response"] = complex_list(f.response);
    j["ensemble_size"] = f.ensemble_size;
    j["alpha"] = f.params.alpha;
    j["offset"] = f.params.offset;
    j["threshold"] = f.params.threshold;
    j["mode"] = (f.params.mode == Polarity::unipolar) ? "unipolar" : "bipolar";
    return j.dump(2) + "\n";
}

WienerFilter wiener_from_json(const std::string& text) {
    const json j = json::parse(text);
    WienerFilter f;
    f.period = j.at("T").get<int>();
    f.response = complex_list_from(j.at("response"));
    f.ensemble_size = j.at("ensemble_size").get<int>();
    f.params.alpha = j.at("alpha").get<double>();
    f.params.offset = j.at("offset").get<double>();
    f.params.threshold = j.at("threshold").get<double>();
    f.params.mode =
        (j.at("mode").get<std::string>() == "unipolar") ? Polarity::unipolar : Polarity::bipolar;
    return f;
}

std::string pocs_state_to_json(const PocsState& state) {
    json j;
    j["k"] = state.iteration;
    j["r"] = std::vector<double>(state.residual.data(), state.residual.data() + state.residual.size());
    j["c"] = std::vector<double>(state.coeffs.data(), state.coeffs.data() + state.coeffs.size());
    return j.dump(2) + "\n";
}

PocsState pocs_state_from_json(const std::string& text) {
    const json j = json::parse(text);
    PocsState state;
    state.iteration = j.at("k").get<int>();
    const auto r = j.at("r").get<std::vector<double>>();
    const auto c = j.at("c").get<std::vector<double>>();
    if (r.size() != c.size()) throw std::runtime_error("state vector length mismatch");
    state.residual = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
    state.coeffs = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    return state;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ",";
            out << format_double(m(i, j));
        }
        out << "\n";
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

std::string render_line_plot_svg(const std::string& title, const std::string& x_label,
                                 const std::string& y_label,
                                 const std::vector<PlotSeries>& series) {
    constexpr double W = 720, H = 480;
    constexpr double L = 64, R = 180, Tm = 40, B = 48;  // margins, legend on the right

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - Tm - B); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt_px((L + W - R) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << title << "</text>\n";

    // frame and ticks
    svg << "<rect x=\"" << fmt_px(L) << "\" y=\"" << fmt_px(Tm) << "\" width=\""
        << fmt_px(W - L - R) << "\" height=\"" << fmt_px(H - Tm - B)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        svg << "<line x1=\"" << fmt_px(px(xv)) << "\" y1=\"" << fmt_px(H - B) << "\" x2=\""
            << fmt_px(px(xv)) << "\" y2=\"" << fmt_px(H - B + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_px(px(xv)) << "\" y=\"" << fmt_px(H - B + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(xv) << "</text>\n";
        svg << "<line x1=\"" << fmt_px(L - 5) << "\" y1=\"" << fmt_px(py(yv)) << "\" x2=\""
            << fmt_px(L) << "\" y2=\"" << fmt_px(py(yv)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_px(L - 8) << "\" y=\"" << fmt_px(py(yv) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(yv)
            << "</text>\n";
    }
    svg << "<text x=\"" << fmt_px((L + W - R) / 2) << "\" y=\"" << fmt_px(H - 10)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << fmt_px((Tm + H - B) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
        << fmt_px((Tm + H - B) / 2) << ")\">" << y_label << "</text>\n";

    int color_idx = 0;
    double legend_y = Tm + 12;
    for (const auto& s : series) {
        const char* color = kPalette[color_idx % 8];
        ++color_idx;
        const char* dash = s.dashed ? " stroke-dasharray=\"6 4\"" : "";
        if (s.x.size() == 1) {
            // constant rule across the full x span
            svg << "<line x1=\"" << fmt_px(L) << "\" y1=\"" << fmt_px(py(s.y[0])) << "\" x2=\""
                << fmt_px(W - R) << "\" y2=\"" << fmt_px(py(s.y[0])) << "\" stroke=\"" << color
                << "\" fill=\"none\"" << dash << "/>\n";
        } else {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\"" << dash << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) svg << " ";
                svg << fmt_px(px(s.x[i])) << "," << fmt_px(py(std::clamp(s.y[i], ymin, ymax)));
            }
            svg << "\"/>\n";
        }
        svg << "<line x1=\"" << fmt_px(W - R + 10) << "\" y1=\"" << fmt_px(legend_y) << "\" x2=\""
            << fmt_px(W - R + 34) << "\" y2=\"" << fmt_px(legend_y) << "\" stroke=\"" << color
            << "\"" << dash << "/>\n";
        svg << "<text x=\"" << fmt_px(W - R + 40) << "\" y=\"" << fmt_px(legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        legend_y += 16;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace lifpocs
