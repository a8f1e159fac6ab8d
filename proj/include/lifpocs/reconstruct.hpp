#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "lifpocs/kernels.hpp"

namespace lifpocs {

/// Spike spectrum S(w_k) = sum_n eps_n e^{-i w_k t_n}, k = 0..(T-1)/2.
std::vector<std::complex<double>> spike_spectrum(const SpikeTrain& s);

/// Bandlimited spike sum: sum_n eps_n theta phi(. - t_n). Estimates x + c.
BandlimitedSignal naive_estimate(const SpikeTrain& s, double threshold);

/// Nyquist-rate aliased reconstruction through the leaky integrator: the
/// integrated spike train is resampled at the integers and interpolated with
/// psi = phi' + alpha phi. Needs alpha > 0 for the periodic steady state.
BandlimitedSignal feichtinger_estimate(const SpikeTrain& s, double threshold, double alpha);

/// Integrated spike train at time t (periodic steady state of the leaky
/// integrator applied to sum_n eps_n theta delta(. - t_n)).
double integrated_spikes(const SpikeTrain& s, double threshold, double alpha, double t);

/// Per-harmonic convolutional reconstruction filter fitted on an ensemble.
struct WienerFilter {
    int period = 0;
    std::vector<std::complex<double>> response;  // F(w_k), k = 0..(T-1)/2
    int ensemble_size = 0;
    LifParams params;
};

/// Least-squares fit of the filter response per harmonic against x + c over
/// the ensemble. Harmonics with zero spike energy get zero response.
WienerFilter wiener_fit(const std::vector<std::pair<BandlimitedSignal, SpikeTrain>>& pairs,
                        const LifParams& p);

/// Applies the filter to a spike train: c_k(u) = F(w_k) S(w_k) / T.
BandlimitedSignal wiener_apply(const WienerFilter& f, const SpikeTrain& s);

/// One step of the contraction iteration
/// u + sum_n (theta_n - <h_n, u>) phi(. - tau_n), tau_n the interval midpoints.
BandlimitedSignal lazar_iterate(const KernelSystem& ks, const BandlimitedSignal& u);

}  // namespace lifpocs
