#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "lifpocs/signal.hpp"

namespace lifpocs {

enum class Polarity { unipolar, bipolar };

/// Leaky integrate-and-fire parameters. The encoder integrates x + offset
/// with exponential forgetting rate alpha and fires whenever the magnitude
/// of the running integral reaches threshold, then restarts the integral.
struct LifParams {
    double alpha = 0.0;
    double offset = 0.0;
    double threshold = 1.0;
    Polarity mode = Polarity::bipolar;

    void validate() const;
};

/// Firing instants in (0, T] with signs, one encoding pass over a period.
/// The integrator starts at t = 0; the implicit t_0 = 0 carries no spike.
struct SpikeTrain {
    int period = 0;
    std::vector<double> times;
    std::vector<int> signs;
    /// Set when the threshold was never reached (empty train).
    bool saturated = false;
    /// Set when encoding stopped early at a spike cap.
    bool truncated = false;

    std::size_t size() const { return times.size(); }
    /// Interval length t_n - t_{n-1}, with t_0 = 0.
    double delta(std::size_t n) const { return times[n] - (n == 0 ? 0.0 : times[n - 1]); }
};

/// Runs the firing recursion over [0, T]. Crossings are bracketed on the
/// scan grid and refined to 1e-12 absolute. Unipolar mode requires
/// x + offset > 0 on the grid.
SpikeTrain encode(const BandlimitedSignal& x, const LifParams& p, const TimeGrid& grid,
                  std::size_t max_spikes = std::numeric_limits<std::size_t>::max());

/// Bisects the threshold until the ensemble-average firing density N/T is
/// within 2% of target_rate (spikes per Nyquist period).
double calibrate_threshold(const std::vector<BandlimitedSignal>& inputs, const LifParams& p,
                           double target_rate);

/// Rounds every firing instant to the nearest multiple of 2^-bits. A spike
/// that collides with its predecessor is pushed up by one quantum so the
/// train stays strictly increasing.
SpikeTrain quantize_times(const SpikeTrain& s, int bits);

}  // namespace lifpocs
