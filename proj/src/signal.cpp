#include "lifpocs/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace lifpocs {

namespace {

constexpr double kPi = std::numbers::pi;

void require_odd_period(int period) {
    if (period <= 0 || period % 2 == 0) {
        throw std::invalid_argument("period must be a positive odd integer of Nyquist periods");
    }
}

}  // namespace

BandlimitedSignal BandlimitedSignal::zero(int period) {
    require_odd_period(period);
    return {period, std::vector<std::complex<double>>(static_cast<std::size_t>((period + 1) / 2))};
}

BandlimitedSignal BandlimitedSignal::from_coeffs(int period, std::vector<std::complex<double>> coeffs) {
    require_odd_period(period);
    if (coeffs.size() != static_cast<std::size_t>((period + 1) / 2)) {
        throw std::invalid_argument("coefficient count must be (period+1)/2");
    }
    // c_0 must be real for a real signal; tolerate roundoff-level residue.
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    if (std::abs(coeffs[0].imag()) > 1e-9 * std::max(scale, 1.0)) {
        throw std::invalid_argument("DC coefficient must be real");
    }
    coeffs[0] = {coeffs[0].real(), 0.0};
    return {period, std::move(coeffs)};
}

BandlimitedSignal BandlimitedSignal::from_nyquist_samples(int period, const std::vector<double>& samples) {
    require_odd_period(period);
    if (samples.size() != static_cast<std::size_t>(period)) {
        throw std::invalid_argument("need exactly one Nyquist sample per Nyquist period");
    }
    const int harmonics = (period - 1) / 2;
    std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(harmonics + 1));
    for (int k = 0; k <= harmonics; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (int j = 0; j < period; ++j) {
            acc += samples[static_cast<std::size_t>(j)] *
                   std::polar(1.0, -2.0 * kPi * k * j / period);
        }
        coeffs[static_cast<std::size_t>(k)] = acc / static_cast<double>(period);
    }
    coeffs[0] = {coeffs[0].real(), 0.0};
    return {period, std::move(coeffs)};
}

double BandlimitedSignal::eval(double t) const {
    const double w0 = 2.0 * kPi / period_;
    double acc = coeffs_[0].real();
    for (int k = 1; k <= max_harmonic(); ++k) {
        acc += 2.0 * (coeffs_[static_cast<std::size_t>(k)] * std::polar(1.0, w0 * k * t)).real();
    }
    return acc;
}

void BandlimitedSignal::add_shifted_dirichlet(double amp, double t0) {
    const double w0 = 2.0 * kPi / period_;
    const double scale = amp / period_;
    coeffs_[0] += scale;
    for (int k = 1; k <= max_harmonic(); ++k) {
        coeffs_[static_cast<std::size_t>(k)] += scale * std::polar(1.0, -w0 * k * t0);
    }
}

BandlimitedSignal& BandlimitedSignal::operator+=(const BandlimitedSignal& rhs) {
    if (period_ != rhs.period_) throw std::invalid_argument("period mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

BandlimitedSignal& BandlimitedSignal::operator-=(const BandlimitedSignal& rhs) {
    if (period_ != rhs.period_) throw std::invalid_argument("period mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

BandlimitedSignal& BandlimitedSignal::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

TimeGrid::TimeGrid(int period_, int oversampling_) : period(period_), oversampling(oversampling_) {
    require_odd_period(period);
    if (oversampling <= 0) throw std::invalid_argument("oversampling must be positive");
}

double dirichlet_eval(double t, int period) {
    require_odd_period(period);
    const double r = std::remainder(t, static_cast<double>(period));
    if (r == 0.0) return 1.0;
    return std::sin(kPi * r) / (period * std::sin(kPi * r / period));
}

double inner_product(const BandlimitedSignal& u, const BandlimitedSignal& v) {
    if (u.period() != v.period()) throw std::invalid_argument("period mismatch");
    double acc = u.coeff(0).real() * v.coeff(0).real();
    for (int k = 1; k <= u.max_harmonic(); ++k) {
        acc += 2.0 * (std::conj(u.coeff(k)) * v.coeff(k)).real();
    }
    return u.period() * acc;
}

double norm_sq(const BandlimitedSignal& u) { return inner_product(u, u); }

double leaky_antiderivative(const BandlimitedSignal& sig, double offset, double tau, double t,
                            double alpha) {
    if (t < tau) throw std::invalid_argument("upper limit precedes lower limit");
    if (alpha < 0.0) throw std::invalid_argument("leakage must be nonnegative");
    const double d = t - tau;
    const double a0 = sig.coeff(0).real() + offset;
    double acc = (alpha > 0.0) ? -a0 * std::expm1(-alpha * d) / alpha : a0 * d;
    const double w0 = 2.0 * kPi / sig.period();
    const double decay = std::exp(-alpha * d);
    for (int k = 1; k <= sig.max_harmonic(); ++k) {
        const double w = w0 * k;
        const std::complex<double> den{alpha, w};
        const std::complex<double> num =
            sig.coeff(k) * (std::polar(1.0, w * t) - decay * std::polar(1.0, w * tau));
        acc += 2.0 * (num / den).real();
    }
    return acc;
}

BandlimitedSignal leaky_filter(const BandlimitedSignal& sig, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("leaky filter needs alpha > 0");
    std::vector<std::complex<double>> coeffs(sig.coeffs());
    const double w0 = 2.0 * kPi / sig.period();
    for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) {
        coeffs[static_cast<std::size_t>(k)] /= std::complex<double>{alpha, w0 * k};
    }
    return BandlimitedSignal::from_coeffs(sig.period(), std::move(coeffs));
}

BandlimitedSignal random_bandlimited(int period, double amp, std::uint64_t seed) {
    require_odd_period(period);
    if (amp <= 0.0) throw std::invalid_argument("amplitude must be positive");
    std::mt19937_64 eng(seed);
    std::vector<double> samples(static_cast<std::size_t>(period));
    for (auto& s : samples) {
        // 53-bit mantissa draw; portable across standard libraries.
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        s = amp * (2.0 * u - 1.0);
    }
    return BandlimitedSignal::from_nyquist_samples(period, samples);
}

double power_db(double power, double ref_power) {
    if (ref_power <= 0.0) throw std::invalid_argument("reference power must be positive");
    const double ratio = power / ref_power;
    if (!(ratio > 1e-20)) return -200.0;
    return 10.0 * std::log10(ratio);
}

double mse_db(const BandlimitedSignal& u, const BandlimitedSignal& x, double ref_power) {
    return power_db(norm_sq(u - x), ref_power);
}

std::vector<double> orthonormal_coords(const BandlimitedSignal& u) {
    const double st = std::sqrt(static_cast<double>(u.period()));
    const double s2t = std::sqrt(2.0 * u.period());
    std::vector<double> coords(static_cast<std::size_t>(u.period()));
    coords[0] = st * u.coeff(0).real();
    for (int k = 1; k <= u.max_harmonic(); ++k) {
        coords[static_cast<std::size_t>(2 * k - 1)] = s2t * u.coeff(k).real();
        coords[static_cast<std::size_t>(2 * k)] = -s2t * u.coeff(k).imag();
    }
    return coords;
}

BandlimitedSignal signal_from_coords(int period, const std::vector<double>& coords) {
    require_odd_period(period);
    if (coords.size() != static_cast<std::size_t>(period)) {
        throw std::invalid_argument("coordinate count must equal the period");
    }
    const double st = std::sqrt(static_cast<double>(period));
    const double s2t = std::sqrt(2.0 * period);
    std::vector<std::complex<double>> coeffs(static_cast<std::size_t>((period + 1) / 2));
    coeffs[0] = {coords[0] / st, 0.0};
    for (int k = 1; k < static_cast<int>(coeffs.size()); ++k) {
        coeffs[static_cast<std::size_t>(k)] = {coords[static_cast<std::size_t>(2 * k - 1)] / s2t,
                                               -coords[static_cast<std::size_t>(2 * k)] / s2t};
    }
    return BandlimitedSignal::from_coeffs(period, std::move(coeffs));
}

std::uint64_t substream_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t member) {
    // splitmix64 finalizer over a combined word.
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1) + 0xbf58476d1ce4e5b9ULL * (member + 1);
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

}  // namespace lifpocs
