#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "lifpocs/encoder.hpp"
#include "lifpocs/pocs.hpp"
#include "lifpocs/reconstruct.hpp"
#include "lifpocs/signal.hpp"

namespace lifpocs {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

std::string signal_to_json(const BandlimitedSignal& u);
BandlimitedSignal signal_from_json(const std::string& text);

std::string spikes_to_json(const SpikeTrain& s);
SpikeTrain spikes_from_json(const std::string& text);
std::string spikes_to_csv(const SpikeTrain& s);
SpikeTrain spikes_from_csv(const std::string& text, int period);

std::string wiener_to_json(const WienerFilter& f);
WienerFilter wiener_from_json(const std::string& text);

std::string pocs_state_to_json(const PocsState& state);
PocsState pocs_state_from_json(const std::string& text);

std::string matrix_to_csv(const Eigen::MatrixXd& m);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// One polyline of a line plot; constant series of length 1 draw as a
/// horizontal dashed rule.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

/// Deterministic standalone SVG line plot; identical inputs give identical
/// bytes.
std::string render_line_plot_svg(const std::string& title, const std::string& x_label,
                                 const std::string& y_label,
                                 const std::vector<PlotSeries>& series);

}  // namespace lifpocs
