#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace lifpocs {

/// Real T-periodic bandlimited signal stored as Fourier coefficients c_k for
/// k = 0..(T-1)/2. Negative harmonics are implied by conjugate symmetry, so
/// the representation is real and bandlimited by construction. The period T
/// is an odd number of Nyquist periods (Nyquist period normalized to 1).
class BandlimitedSignal {
public:
    BandlimitedSignal() = default;

    static BandlimitedSignal zero(int period);
    static BandlimitedSignal from_coeffs(int period, std::vector<std::complex<double>> coeffs);
    static BandlimitedSignal from_nyquist_samples(int period, const std::vector<double>& samples);

    int period() const { return period_; }
    /// Highest harmonic index, (T-1)/2.
    int max_harmonic() const { return static_cast<int>(coeffs_.size()) - 1; }

    std::complex<double> coeff(int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
    std::complex<double>& coeff(int k) { return coeffs_[static_cast<std::size_t>(k)]; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

    /// Time-domain value c_0 + 2 Re sum_k c_k e^{i w_k t}.
    double eval(double t) const;

    /// Adds amp * phi(. - t0), phi the Dirichlet kernel of this period.
    void add_shifted_dirichlet(double amp, double t0);

    BandlimitedSignal& operator+=(const BandlimitedSignal& rhs);
    BandlimitedSignal& operator-=(const BandlimitedSignal& rhs);
    BandlimitedSignal& operator*=(double s);

    friend BandlimitedSignal operator+(BandlimitedSignal a, const BandlimitedSignal& b) { return a += b; }
    friend BandlimitedSignal operator-(BandlimitedSignal a, const BandlimitedSignal& b) { return a -= b; }
    friend BandlimitedSignal operator*(double s, BandlimitedSignal a) { return a *= s; }

private:
    BandlimitedSignal(int period, std::vector<std::complex<double>> coeffs)
        : period_(period), coeffs_(std::move(coeffs)) {}

    int period_ = 0;
    std::vector<std::complex<double>> coeffs_;
};

/// Uniform scan grid covering [0, T) with `oversampling` instants per
/// Nyquist period.
struct TimeGrid {
    int period = 0;
    int oversampling = 64;

    explicit TimeGrid(int period_, int oversampling_ = 64);

    int count() const { return period * oversampling; }
    double step() const { return 1.0 / oversampling; }
    double instant(int i) const { return static_cast<double>(i) / oversampling; }
};

/// Periodic sinc sin(pi t)/(T sin(pi t/T)); value 1 at t = 0 mod T.
double dirichlet_eval(double t, int period);

/// Integral inner product over one period, computed as T sum_k conj(c_k) c_k'.
double inner_product(const BandlimitedSignal& u, const BandlimitedSignal& v);
double norm_sq(const BandlimitedSignal& u);

/// Running leaky integral of sig + offset from tau to t:
/// int_tau^t e^{-alpha (t-s)} (sig(s) + offset) ds, per-mode closed form.
double leaky_antiderivative(const BandlimitedSignal& sig, double offset, double tau, double t,
                            double alpha);

/// Periodic steady-state response of the leaky integrator, i.e. per-mode
/// division by (alpha + i w_k). Requires alpha > 0.
BandlimitedSignal leaky_filter(const BandlimitedSignal& sig, double alpha);

/// Dirichlet interpolant of T Nyquist samples drawn i.i.d. uniform in
/// [-amp, amp]. Deterministic under a fixed seed.
BandlimitedSignal random_bandlimited(int period, double amp, std::uint64_t seed);

/// 10 log10(|u - x|^2 / ref_power), floored at -200 dB.
double mse_db(const BandlimitedSignal& u, const BandlimitedSignal& x, double ref_power);
double power_db(double power, double ref_power);

/// Coordinates of u against the orthonormal harmonic basis of the T-dim
/// bandlimited space: [sqrt(T) c_0, sqrt(2T) Re c_k, -sqrt(2T) Im c_k, ...].
/// The Euclidean dot product of coordinates equals inner_product.
std::vector<double> orthonormal_coords(const BandlimitedSignal& u);
BandlimitedSignal signal_from_coords(int period, const std::vector<double>& coords);

/// Derived seed for a named substream; keeps ensemble members independent of
/// scheduling order.
std::uint64_t substream_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t member);

}  // namespace lifpocs
