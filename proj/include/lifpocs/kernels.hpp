#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>
#include <complex>
#include <memory>
#include <vector>

#include "lifpocs/encoder.hpp"
#include "lifpocs/signal.hpp"

namespace lifpocs {

/// Per-spike sample values theta_n = eps_n theta - (c/alpha)(1 - e^{-alpha dt_n}).
Eigen::VectorXd sample_values(const SpikeTrain& s, const LifParams& p);

/// |h_n|^2 = (1 - e^{-2 alpha dt})/(2 alpha); dt at alpha = 0.
double h_norm_sq(double alpha, double dt);

/// In-band Fourier coefficients (k = 0..(T-1)/2) of the exponential window
/// e^{-alpha(t_cur - t)} on [t_prev, t_cur). Defines the filtered kernel.
std::vector<std::complex<double>> h_fourier(double t_prev, double t_cur, double alpha, int period);

/// g(t) = (1/alpha) int_0^t sinh(alpha(t-s)) phi(s) ds with phi the Dirichlet
/// kernel, evaluated per Fourier mode. Even in t; g(0) = 0.
double g_function(double t, double alpha, int period);

/// Sampling-kernel system for one spike train: sample values, kernel norms,
/// in-band kernel coefficients, the iteration matrix and the operator matrix
/// of u -> (<h_n, u>)_n against the orthonormal harmonic basis.
class KernelSystem {
public:
    KernelSystem(SpikeTrain train, LifParams params);

    int size() const { return static_cast<int>(train_.size()); }
    int period() const { return train_.period; }
    double alpha() const { return params_.alpha; }
    const SpikeTrain& train() const { return train_; }
    const LifParams& params() const { return params_; }

    /// t_n with the implicit t_0 = 0 at index 0.
    double time(int i) const { return times_[static_cast<std::size_t>(i)]; }
    double delta(int n) const { return deltas_[n]; }

    const Eigen::VectorXd& samples() const { return samples_; }
    const Eigen::VectorXd& norms_sq() const { return norms_sq_; }
    /// <h_n, filtered h_n> = |filtered h_n|^2.
    const Eigen::VectorXd& filtered_norms_sq() const { return filtered_norms_sq_; }

    /// Iteration matrix with entries <h_m, filtered h_n> / |h_m|^2.
    const Eigen::MatrixXd& iteration_matrix() const { return gram_; }
    /// N x T operator matrix; row n holds the coordinates of filtered h_n.
    const Eigen::MatrixXd& operator_matrix() const { return op_; }

    BandlimitedSignal filtered_kernel(int n) const;
    /// sum_n c_n * filtered h_n as a signal.
    BandlimitedSignal synthesize(const Eigen::VectorXd& coeffs) const;

    /// <h_n, u> for in-band u.
    double inner_with(int n, const BandlimitedSignal& u) const;
    /// All N inner products at once (the sampling operator).
    Eigen::VectorXd apply_operator(const BandlimitedSignal& u) const;

    /// Same geometry with replaced sample values.
    KernelSystem with_samples(Eigen::VectorXd samples) const;

    /// SVD of the row-normalized operator matrix, shared across copies.
    const Eigen::JacobiSVD<Eigen::MatrixXd>& normalized_svd() const { return *svd_; }

private:
    SpikeTrain train_;
    LifParams params_;
    std::vector<double> times_;  // t_0 = 0 prepended
    Eigen::VectorXd deltas_;
    Eigen::VectorXd decays_;  // e^{-alpha dt_n}
    Eigen::VectorXd samples_;
    Eigen::VectorXd norms_sq_;
    Eigen::VectorXd filtered_norms_sq_;
    Eigen::MatrixXcd kernel_coeffs_;  // N x (harmonics+1)
    Eigen::MatrixXd gram_;
    Eigen::MatrixXd op_;
    std::shared_ptr<const Eigen::JacobiSVD<Eigen::MatrixXd>> svd_;
};

/// Builds the full system; throws on an empty train.
KernelSystem build_system(const SpikeTrain& s, const LifParams& p);

/// <h_m, filtered h_n> by the four-point combination of the kernel inner
/// products in g; the exponentially growing parts of g cancel across the
/// four terms and are dropped analytically, which keeps the entry accurate
/// for large alpha |t_m - t_n|.
double gram_entry(int m, int n, const KernelSystem& ks);

/// <h_m, f(. - shift)> for in-band f, per Fourier mode.
double inner_h_shifted(int m, const BandlimitedSignal& f, double shift, const KernelSystem& ks);

}  // namespace lifpocs
