#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "lifpocs/kernels.hpp"
#include "lifpocs/signal.hpp"

namespace lifpocs {

/// State of the discretized alternating-projection recursion
///   r <- r - H r,  c <- c + r
/// from r = (theta_n/|h_n|^2)_n, c = 0. The synthesized signal after k steps
/// equals k applications of the filtered consistency projection to zero.
struct PocsState {
    Eigen::VectorXd residual;
    Eigen::VectorXd coeffs;
    int iteration = 0;
};

PocsState pocs_init(const KernelSystem& ks);
void pocs_step(PocsState& state, const KernelSystem& ks);

/// Runs the recursion `iterations` steps (fewer when the weighted residual
/// norm drops below residual_tol > 0) and synthesizes the signal once.
std::pair<PocsState, BandlimitedSignal> pocs_run(const KernelSystem& ks, int iterations,
                                                 double residual_tol = 0.0);

/// Iterates from a nonzero in-band start by space translation: the sample
/// vector is shifted by -Hu, the zero-start recursion runs on the shifted
/// system, and u is added back.
BandlimitedSignal pocs_run_from(const BandlimitedSignal& u, const KernelSystem& ks, int iterations);

/// One filtered consistency projection
///   u + sum_n ((theta_n - <h_n, u>)/|h_n|^2) filtered_h_n.
BandlimitedSignal project_consistent(const BandlimitedSignal& u, const KernelSystem& ks);

/// One sequential sweep of elementary in-band projections, constraint
/// n = 1..N in order.
BandlimitedSignal yeh_stark_sweep(const BandlimitedSignal& u, const KernelSystem& ks);

/// Minimal-norm least-squares reconstruction from sample values via the SVD
/// of the row-normalized operator matrix (relative cutoff 1e-10).
BandlimitedSignal pseudo_inverse(const KernelSystem& ks, const Eigen::VectorXd& samples);

/// Orthogonal projection of a sample vector onto the operator range under
/// the weighted inner product sum u_n v_n / |h_n|^2.
Eigen::VectorXd project_range(const KernelSystem& ks, const Eigen::VectorXd& samples);

double weighted_norm_sq(const KernelSystem& ks, const Eigen::VectorXd& v);

/// Squared L2 error |u_k - x|^2 of the iterate for k = 0..iterations,
/// optionally starting from a nonzero estimate.
std::vector<double> pocs_error_powers(const KernelSystem& ks, const BandlimitedSignal& x,
                                      int iterations,
                                      const BandlimitedSignal* start = nullptr);

/// Per-iteration MSE in dB against x, floored at -200 dB. ref_power <= 0
/// selects |x|^2.
std::vector<double> mse_trace(const KernelSystem& ks, const BandlimitedSignal& x, int iterations,
                              const BandlimitedSignal* start = nullptr, double ref_power = 0.0);

/// Observed sample vector with, in synthetic settings, the noise-free vector
/// it deviates from.
struct NoisySamples {
    Eigen::VectorXd observed;
    std::optional<Eigen::VectorXd> clean;

    Eigen::VectorXd deviation() const;
    /// Component of the deviation inside the operator range; the part the
    /// reconstruction cannot reject.
    Eigen::VectorXd surviving_deviation(const KernelSystem& ks) const;
};

}  // namespace lifpocs
