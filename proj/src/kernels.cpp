#include "lifpocs/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lifpocs {

namespace {

constexpr double kPi = std::numbers::pi;

/// Oscillatory part of the g kernel without its k = 0 mode:
/// (1/T) sum_{k>=1} 2 cos(w_k t) / (alpha^2 + w_k^2). Even and bounded.
double g_oscillatory(double t, double alpha, int period) {
    const double w0 = 2.0 * kPi / period;
    const int harmonics = (period - 1) / 2;
    double acc = 0.0;
    for (int k = 1; k <= harmonics; ++k) {
        const double w = w0 * k;
        acc += 2.0 * std::cos(w * t) / (alpha * alpha + w * w);
    }
    return acc / period;
}

/// k = 0 contribution of the four-point kernel combination:
/// (1 - e^{-alpha dm})(1 - e^{-alpha dn}) / (T alpha^2), with the alpha -> 0
/// limit dm dn / T.
double gram_dc_term(double alpha, double dm, double dn, int period) {
    if (alpha > 0.0) {
        return std::expm1(-alpha * dm) * std::expm1(-alpha * dn) / (period * alpha * alpha);
    }
    return dm * dn / period;
}

}  // namespace

Eigen::VectorXd sample_values(const SpikeTrain& s, const LifParams& p) {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(s.size()));
    for (std::size_t n = 0; n < s.size(); ++n) {
        const double dt = s.delta(n);
        const double drift = (p.alpha > 0.0) ? -p.offset * std::expm1(-p.alpha * dt) / p.alpha
                                             : p.offset * dt;
        theta[static_cast<Eigen::Index>(n)] = s.signs[n] * p.threshold - drift;
    }
    return theta;
}

double h_norm_sq(double alpha, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("kernel support must have positive length");
    if (alpha > 0.0) return -std::expm1(-2.0 * alpha * dt) / (2.0 * alpha);
    return dt;
}

std::vector<std::complex<double>> h_fourier(double t_prev, double t_cur, double alpha, int period) {
    if (!(t_prev >= 0.0 && t_prev < t_cur && t_cur <= period)) {
        throw std::invalid_argument("kernel interval must satisfy 0 <= t_prev < t_cur <= period");
    }
    const double dt = t_cur - t_prev;
    const double q = std::exp(-alpha * dt);
    const double w0 = 2.0 * kPi / period;
    const int harmonics = (period - 1) / 2;
    std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(harmonics + 1));
    coeffs[0] = (alpha > 0.0) ? -std::expm1(-alpha * dt) / (period * alpha) : dt / period;
    for (int k = 1; k <= harmonics; ++k) {
        const double w = w0 * k;
        const std::complex<double> num =
            std::polar(1.0, -w * t_cur) - q * std::polar(1.0, -w * t_prev);
        coeffs[static_cast<std::size_t>(k)] = num / (std::complex<double>{alpha, -w} * double(period));
    }
    return coeffs;
}

double g_function(double t, double alpha, int period) {
    if (period <= 0 || period % 2 == 0) {
        throw std::invalid_argument("period must be a positive odd integer");
    }
    const double w0 = 2.0 * kPi / period;
    const int harmonics = (period - 1) / 2;
    double acc;
    if (alpha > 0.0) {
        const double s = std::sinh(0.5 * alpha * t) / alpha;
        acc = 2.0 * s * s;  // (cosh(alpha t) - 1)/alpha^2
        const double ch = std::cosh(alpha * t);
        for (int k = 1; k <= harmonics; ++k) {
            const double w = w0 * k;
            acc += 2.0 * (ch - std::cos(w * t)) / (alpha * alpha + w * w);
        }
    } else {
        acc = 0.5 * t * t;
        for (int k = 1; k <= harmonics; ++k) {
            const double w = w0 * k;
            acc += 2.0 * (1.0 - std::cos(w * t)) / (w * w);
        }
    }
    return acc / period;
}

KernelSystem::KernelSystem(SpikeTrain train, LifParams params)
    : train_(std::move(train)), params_(params) {
    const int N = size();
    if (N < 1) throw std::invalid_argument("kernel system needs at least one spike");
    const int T = train_.period;
    const double alpha = params_.alpha;

    times_.resize(static_cast<std::size_t>(N + 1));
    times_[0] = 0.0;
    for (int n = 0; n < N; ++n) {
        const double t = train_.times[static_cast<std::size_t>(n)];
        if (!(t > times_[static_cast<std::size_t>(n)] && t <= T)) {
            throw std::invalid_argument("spike times must be strictly increasing in (0, T]");
        }
        times_[static_cast<std::size_t>(n + 1)] = t;
    }

    deltas_.resize(N);
    decays_.resize(N);
    norms_sq_.resize(N);
    for (int n = 0; n < N; ++n) {
        deltas_[n] = times_[static_cast<std::size_t>(n + 1)] - times_[static_cast<std::size_t>(n)];
        decays_[n] = std::exp(-alpha * deltas_[n]);
        norms_sq_[n] = h_norm_sq(alpha, deltas_[n]);
    }
    samples_ = sample_values(train_, params_);

    const int harmonics = (T - 1) / 2;
    kernel_coeffs_.resize(N, harmonics + 1);
    for (int n = 0; n < N; ++n) {
        const auto coeffs = h_fourier(times_[static_cast<std::size_t>(n)],
                                      times_[static_cast<std::size_t>(n + 1)], alpha, T);
        for (int k = 0; k <= harmonics; ++k) {
            kernel_coeffs_(n, k) = coeffs[static_cast<std::size_t>(k)];
        }
    }

    op_.resize(N, T);
    const double st = std::sqrt(static_cast<double>(T));
    const double s2t = std::sqrt(2.0 * T);
    for (int n = 0; n < N; ++n) {
        op_(n, 0) = st * kernel_coeffs_(n, 0).real();
        for (int k = 1; k <= harmonics; ++k) {
            op_(n, 2 * k - 1) = s2t * kernel_coeffs_(n, k).real();
            op_(n, 2 * k) = -s2t * kernel_coeffs_(n, k).imag();
        }
    }

    // Four-point assembly over the pairwise time offsets; the g table is
    // symmetric because the oscillatory part is even.
    Eigen::MatrixXd g_table(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = g_oscillatory(times_[static_cast<std::size_t>(i)] -
                                               times_[static_cast<std::size_t>(j)],
                                           alpha, T);
            g_table(i, j) = v;
            g_table(j, i) = v;
        }
    }
    gram_.resize(N, N);
    filtered_norms_sq_.resize(N);
    for (int m = 0; m < N; ++m) {
        for (int n = 0; n < N; ++n) {
            const double raw = gram_dc_term(alpha, deltas_[m], deltas_[n], T) +
                               g_table(m + 1, n + 1) - decays_[n] * g_table(m + 1, n) -
                               decays_[m] * g_table(m, n + 1) +
                               decays_[m] * decays_[n] * g_table(m, n);
            gram_(m, n) = raw / norms_sq_[m];
            if (m == n) filtered_norms_sq_[n] = raw;
        }
    }

    Eigen::MatrixXd normalized = norms_sq_.cwiseSqrt().cwiseInverse().asDiagonal() * op_;
    auto svd = std::make_shared<Eigen::JacobiSVD<Eigen::MatrixXd>>(
        normalized, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd->setThreshold(1e-10);
    svd_ = std::move(svd);
}

BandlimitedSignal KernelSystem::filtered_kernel(int n) const {
    std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(kernel_coeffs_.cols()));
    for (Eigen::Index k = 0; k < kernel_coeffs_.cols(); ++k) {
        coeffs[static_cast<std::size_t>(k)] = kernel_coeffs_(n, k);
    }
    return BandlimitedSignal::from_coeffs(period(), std::move(coeffs));
}

BandlimitedSignal KernelSystem::synthesize(const Eigen::VectorXd& coeffs) const {
    Eigen::VectorXcd out = kernel_coeffs_.transpose() * coeffs.cast<std::complex<double>>();
    std::vector<std::complex<double>> c(static_cast<std::size_t>(out.size()));
    for (Eigen::Index k = 0; k < out.size(); ++k) c[static_cast<std::size_t>(k)] = out[k];
    return BandlimitedSignal::from_coeffs(period(), std::move(c));
}

double KernelSystem::inner_with(int n, const BandlimitedSignal& u) const {
    if (u.period() != period()) throw std::invalid_argument("period mismatch");
    double acc = kernel_coeffs_(n, 0).real() * u.coeff(0).real();
    for (int k = 1; k <= u.max_harmonic(); ++k) {
        acc += 2.0 * (std::conj(kernel_coeffs_(n, k)) * u.coeff(k)).real();
    }
    return period() * acc;
}

Eigen::VectorXd KernelSystem::apply_operator(const BandlimitedSignal& u) const {
    if (u.period() != period()) throw std::invalid_argument("period mismatch");
    const std::vector<double> coords = orthonormal_coords(u);
    return op_ * Eigen::Map<const Eigen::VectorXd>(coords.data(),
                                                   static_cast<Eigen::Index>(coords.size()));
}

KernelSystem KernelSystem::with_samples(Eigen::VectorXd samples) const {
    if (samples.size() != samples_.size()) throw std::invalid_argument("sample count mismatch");
    KernelSystem copy = *this;
    copy.samples_ = std::move(samples);
    return copy;
}

KernelSystem build_system(const SpikeTrain& s, const LifParams& p) { return {s, p}; }

double gram_entry(int m, int n, const KernelSystem& ks) {
    const double alpha = ks.alpha();
    const int T = ks.period();
    const double am = ks.time(m), bm = ks.time(m + 1);
    const double an = ks.time(n), bn = ks.time(n + 1);
    const double qm = std::exp(-alpha * ks.delta(m));
    const double qn = std::exp(-alpha * ks.delta(n));
    return gram_dc_term(alpha, ks.delta(m), ks.delta(n), T) + g_oscillatory(bm - bn, alpha, T) -
           qn * g_oscillatory(bm - an, alpha, T) - qm * g_oscillatory(am - bn, alpha, T) +
           qm * qn * g_oscillatory(am - an, alpha, T);
}

double inner_h_shifted(int m, const BandlimitedSignal& f, double shift, const KernelSystem& ks) {
    if (f.period() != ks.period()) throw std::invalid_argument("period mismatch");
    const double alpha = ks.alpha();
    const double a = ks.time(m), b = ks.time(m + 1);
    const double dt = b - a;
    const double q = std::exp(-alpha * dt);
    const double w0 = 2.0 * kPi / ks.period();
    double acc = f.coeff(0).real() * ((alpha > 0.0) ? -std::expm1(-alpha * dt) / alpha : dt);
    for (int k = 1; k <= f.max_harmonic(); ++k) {
        const double w = w0 * k;
        const std::complex<double> num =
            std::polar(1.0, w * (b - shift)) - q * std::polar(1.0, w * (a - shift));
        acc += 2.0 * (f.coeff(k) * num / std::complex<double>{alpha, w}).real();
    }
    return acc;
}

}  // namespace lifpocs
