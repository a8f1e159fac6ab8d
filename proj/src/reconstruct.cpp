#include "lifpocs/reconstruct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lifpocs {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<std::complex<double>> spike_spectrum(const SpikeTrain& s) {
    const int harmonics = (s.period - 1) / 2;
    const double w0 = 2.0 * kPi / s.period;
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(harmonics + 1));
    for (int k = 0; k <= harmonics; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t n = 0; n < s.size(); ++n) {
            acc += static_cast<double>(s.signs[n]) * std::polar(1.0, -w0 * k * s.times[n]);
        }
        spec[static_cast<std::size_t>(k)] = acc;
    }
    return spec;
}

BandlimitedSignal naive_estimate(const SpikeTrain& s, double threshold) {
    auto spec = spike_spectrum(s);
    for (auto& c : spec) c *= threshold / s.period;
    return BandlimitedSignal::from_coeffs(s.period, std::move(spec));
}

double integrated_spikes(const SpikeTrain& s, double threshold, double alpha, double t) {
    if (alpha <= 0.0) throw std::invalid_argument("integrated spike train needs alpha > 0");
    const double T = s.period;
    const double wrap = 1.0 / -std::expm1(-alpha * T);  // 1/(1 - e^{-alpha T})
    double acc = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        double d = std::fmod(t - s.times[n], T);
        if (d < 0.0) d += T;
        acc += s.signs[n] * threshold * std::exp(-alpha * d);
    }
    return acc * wrap;
}

BandlimitedSignal feichtinger_estimate(const SpikeTrain& s, double threshold, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("aliased estimate needs alpha > 0");
    const int T = s.period;
    std::vector<double> samples(static_cast<std::size_t>(T));
    for (int j = 0; j < T; ++j) {
        samples[static_cast<std::size_t>(j)] = integrated_spikes(s, threshold, alpha, j);
    }
    // Interpolate the integrator samples with psi = phi' + alpha phi, i.e.
    // multiply the Dirichlet interpolant by (alpha + i w_k) per harmonic.
    BandlimitedSignal interp = BandlimitedSignal::from_nyquist_samples(T, samples);
    std::vector<std::complex<double>> coeffs(interp.coeffs());
    const double w0 = 2.0 * kPi / T;
    for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) {
        coeffs[static_cast<std::size_t>(k)] *= std::complex<double>{alpha, w0 * k};
    }
    return BandlimitedSignal::from_coeffs(T, std::move(coeffs));
}

WienerFilter wiener_fit(const std::vector<std::pair<BandlimitedSignal, SpikeTrain>>& pairs,
                        const LifParams& p) {
    if (pairs.empty()) throw std::invalid_argument("filter fit needs a non-empty ensemble");
    const int T = pairs.front().first.period();
    const int harmonics = (T - 1) / 2;
    std::vector<std::complex<double>> num(static_cast<std::size_t>(harmonics + 1));
    std::vector<double> den(static_cast<std::size_t>(harmonics + 1));
    for (const auto& [x, s] : pairs) {
        if (x.period() != T || s.period != T) throw std::invalid_argument("period mismatch");
        const auto spec = spike_spectrum(s);
        for (int k = 0; k <= harmonics; ++k) {
            // Target is x + c; the offset only moves the DC harmonic.
            std::complex<double> target = x.coeff(k) * static_cast<double>(T);
            if (k == 0) target += p.offset * T;
            num[static_cast<std::size_t>(k)] += std::conj(spec[static_cast<std::size_t>(k)]) * target;
            den[static_cast<std::size_t>(k)] += std::norm(spec[static_cast<std::size_t>(k)]);
        }
    }
    WienerFilter f;
    f.period = T;
    f.ensemble_size = static_cast<int>(pairs.size());
    f.params = p;
    f.response.resize(static_cast<std::size_t>(harmonics + 1));
    for (int k = 0; k <= harmonics; ++k) {
        const auto i = static_cast<std::size_t>(k);
        f.response[i] = (den[i] > 0.0) ? num[i] / den[i] : std::complex<double>{0.0, 0.0};
    }
    f.response[0] = {f.response[0].real(), 0.0};
    return f;
}

BandlimitedSignal wiener_apply(const WienerFilter& f, const SpikeTrain& s) {
    if (f.period != s.period) throw std::invalid_argument("period mismatch");
    auto spec = spike_spectrum(s);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        spec[k] *= f.response[k] / static_cast<double>(f.period);
    }
    return BandlimitedSignal::from_coeffs(f.period, std::move(spec));
}

BandlimitedSignal lazar_iterate(const KernelSystem& ks, const BandlimitedSignal& u) {
    if (u.period() != ks.period()) throw std::invalid_argument("period mismatch");
    const Eigen::VectorXd inner = ks.apply_operator(u);
    BandlimitedSignal out = u;
    for (int n = 0; n < ks.size(); ++n) {
        const double midpoint = 0.5 * (ks.time(n) + ks.time(n + 1));
        out.add_shifted_dirichlet(ks.samples()[n] - inner[n], midpoint);
    }
    return out;
}

}  // namespace lifpocs
