#include "lifpocs/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lifpocs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCrossingTol = 1e-12;

/// Evaluates the running leaky integral A_tau(x + c)(t) in O(harmonics) per
/// point. The harmonic weights c_k/(alpha + i w_k) do not depend on the
/// integration start, so a firing reset only refreshes two scalars.
class LeakyIntegralScanner {
public:
    LeakyIntegralScanner(const BandlimitedSignal& x, double offset, double alpha)
        : alpha_(alpha), w0_(2.0 * kPi / x.period()), dc_(x.coeff(0).real() + offset) {
        weights_.resize(static_cast<std::size_t>(x.max_harmonic()));
        for (int k = 1; k <= x.max_harmonic(); ++k) {
            weights_[static_cast<std::size_t>(k - 1)] =
                x.coeff(k) / std::complex<double>{alpha_, w0_ * k};
        }
        reset(0.0);
    }

    void reset(double tau) {
        tau_ = tau;
        steady_at_tau_ = steady(tau);
    }

    double value(double t) const {
        const double d = t - tau_;
        const double dc_part = (alpha_ > 0.0) ? -dc_ * std::expm1(-alpha_ * d) / alpha_ : dc_ * d;
        return dc_part + steady(t) - std::exp(-alpha_ * d) * steady_at_tau_;
    }

private:
    double steady(double t) const {
        double acc = 0.0;
        for (int k = 0; k < static_cast<int>(weights_.size()); ++k) {
            acc += 2.0 *
                   (weights_[static_cast<std::size_t>(k)] * std::polar(1.0, w0_ * (k + 1) * t)).real();
        }
        return acc;
    }

    double alpha_;
    double w0_;
    double dc_;
    std::vector<std::complex<double>> weights_;
    double tau_ = 0.0;
    double steady_at_tau_ = 0.0;
};

/// Root of sign*A(t) - theta on a bracket [lo, hi] with f(lo) < 0 <= f(hi).
/// Newton steps use the integrator ODE A' = x + c - alpha A for the slope
/// and fall back to bisection whenever a step leaves the bracket.
double refine_crossing(const LeakyIntegralScanner& scan, const BandlimitedSignal& x, double offset,
                       double alpha, double sign, double theta, double lo, double hi) {
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 120 && hi - lo > kCrossingTol; ++it) {
        const double a = scan.value(t);
        const double ft = sign * a - theta;
        if (ft >= 0.0) {
            hi = t;
        } else {
            lo = t;
        }
        const double slope = sign * (x.eval(t) + offset - alpha * a);
        double next = (slope != 0.0) ? t - ft / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void LifParams::validate() const {
    if (threshold <= 0.0) throw std::invalid_argument("threshold must be positive");
    if (alpha < 0.0) throw std::invalid_argument("leakage must be nonnegative");
    if (offset < 0.0) throw std::invalid_argument("offset must be nonnegative");
}

SpikeTrain encode(const BandlimitedSignal& x, const LifParams& p, const TimeGrid& grid,
                  std::size_t max_spikes) {
    p.validate();
    if (grid.period != x.period()) throw std::invalid_argument("grid period mismatch");
    if (p.mode == Polarity::unipolar) {
        for (int i = 0; i < grid.count(); ++i) {
            if (x.eval(grid.instant(i)) + p.offset <= 0.0) {
                throw std::invalid_argument("unipolar mode requires x + offset > 0");
            }
        }
    }

    SpikeTrain train;
    train.period = x.period();
    LeakyIntegralScanner scan(x, p.offset, p.alpha);

    const double T = static_cast<double>(x.period());
    // Scan instants i/oversampling for i = 1..count-1, then exactly T. A cell
    // whose endpoint shows |A| >= theta is bracketed against the current
    // position and refined; the cell is then re-scanned from the fresh reset
    // in case it holds a second crossing. A magnitude excursion that returns
    // below theta between two scan instants is not detected; the grid density
    // is chosen so bandlimited drives cannot swing that fast.
    double prev_t = 0.0;
    int i = 1;
    while (prev_t < T) {
        const double t = (i < grid.count()) ? grid.instant(i) : T;
        if (t <= prev_t) {
            ++i;
            continue;
        }
        const double a = scan.value(t);
        if (std::abs(a) >= p.threshold) {
            const double sign = (a >= 0.0) ? 1.0 : -1.0;
            const double t_star =
                refine_crossing(scan, x, p.offset, p.alpha, sign, p.threshold, prev_t, t);
            train.times.push_back(t_star);
            train.signs.push_back(static_cast<int>(sign));
            if (train.times.size() >= max_spikes) {
                train.truncated = true;
                return train;
            }
            scan.reset(t_star);
            prev_t = t_star;
        } else {
            prev_t = t;
            if (t >= T) break;
            ++i;
        }
    }
    train.saturated = train.times.empty();
    return train;
}

namespace {

double ensemble_density(const std::vector<BandlimitedSignal>& inputs, LifParams p, double theta,
                        std::size_t cap) {
    p.threshold = theta;
    double total = 0.0;
    for (const auto& x : inputs) {
        const TimeGrid grid(x.period());
        const SpikeTrain s = encode(x, p, grid, cap);
        total += static_cast<double>(s.size()) / x.period();
    }
    return total / static_cast<double>(inputs.size());
}

}  // namespace

double calibrate_threshold(const std::vector<BandlimitedSignal>& inputs, const LifParams& p,
                           double target_rate) {
    if (inputs.empty()) throw std::invalid_argument("calibration needs at least one input");
    if (target_rate <= 0.0) throw std::invalid_argument("target rate must be positive");
    constexpr double kThetaMin = 1e-6;
    constexpr double kThetaMax = 1e3;
    const double tol = 0.02 * target_rate;
    const std::size_t cap =
        static_cast<std::size_t>(50.0 * target_rate * inputs.front().period()) + 1000;

    // Scale guess from the RMS level of x + c, then expand into a bracket
    // with density(lo) >= target >= density(hi); density is non-increasing
    // in the threshold.
    double rms = 0.0;
    for (const auto& x : inputs) rms += norm_sq(x) / x.period();
    rms = std::sqrt(rms / static_cast<double>(inputs.size()));
    const double guess = std::clamp((rms + p.offset) / target_rate, kThetaMin, kThetaMax);

    auto density = [&](double theta) { return ensemble_density(inputs, p, theta, cap); };

    double lo = guess, hi = guess;
    double d_lo = density(lo), d_hi = d_lo;
    while (d_lo < target_rate && lo > kThetaMin) {
        lo = std::max(lo * 0.5, kThetaMin);
        d_lo = density(lo);
    }
    while (d_hi > target_rate && hi < kThetaMax) {
        hi = std::min(hi * 2.0, kThetaMax);
        d_hi = density(hi);
    }
    if (std::abs(d_lo - target_rate) <= tol) return lo;
    if (std::abs(d_hi - target_rate) <= tol) return hi;
    if (d_lo < target_rate || d_hi > target_rate) {
        std::ostringstream msg;
        msg << "target density " << target_rate << " unreachable for thresholds in [" << kThetaMin
            << ", " << kThetaMax << "]; achieved range [" << d_hi << ", " << d_lo << "]";
        throw std::runtime_error(msg.str());
    }

    double best_theta = lo;
    double best_density = d_lo;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d = density(mid);
        if (std::abs(d - target_rate) < std::abs(best_density - target_rate)) {
            best_density = d;
            best_theta = mid;
        }
        if (std::abs(d - target_rate) <= tol) return mid;
        if (d > target_rate) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (std::abs(best_density - target_rate) <= tol) return best_theta;
    std::ostringstream msg;
    msg << "calibration stalled for target " << target_rate << "; best achieved density "
        << best_density << " at threshold " << best_theta;
    throw std::runtime_error(msg.str());
}

SpikeTrain quantize_times(const SpikeTrain& s, int bits) {
    if (bits < 1) throw std::invalid_argument("need at least one bit of time resolution");
    const double q = std::ldexp(1.0, -bits);
    SpikeTrain out;
    out.period = s.period;
    double prev = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        double t = std::round(s.times[n] / q) * q;
        if (t <= prev) t = prev + q;  // collision repair: push up one quantum
        if (t > static_cast<double>(s.period)) continue;  // pushed past the window
        out.times.push_back(t);
        out.signs.push_back(s.signs[n]);
        prev = t;
    }
    out.saturated = out.times.empty();
    return out;
}

}  // namespace lifpocs
