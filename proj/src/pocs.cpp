#include "lifpocs/pocs.hpp"

#include <cmath>
#include <stdexcept>

namespace lifpocs {

PocsState pocs_init(const KernelSystem& ks) {
    PocsState state;
    state.residual = ks.samples().cwiseQuotient(ks.norms_sq());
    state.coeffs = Eigen::VectorXd::Zero(ks.size());
    state.iteration = 0;
    return state;
}

void pocs_step(PocsState& state, const KernelSystem& ks) {
    const Eigen::VectorXd filtered = ks.iteration_matrix() * state.residual;
    state.coeffs += state.residual;
    state.residual -= filtered;
    ++state.iteration;
}

std::pair<PocsState, BandlimitedSignal> pocs_run(const KernelSystem& ks, int iterations,
                                                 double residual_tol) {
    if (iterations < 0) throw std::invalid_argument("iteration count must be nonnegative");
    PocsState state = pocs_init(ks);
    for (int k = 0; k < iterations; ++k) {
        if (residual_tol > 0.0 &&
            std::sqrt(weighted_norm_sq(ks, state.residual)) < residual_tol) {
            break;
        }
        pocs_step(state, ks);
    }
    BandlimitedSignal out = ks.synthesize(state.coeffs);
    return {std::move(state), std::move(out)};
}

BandlimitedSignal pocs_run_from(const BandlimitedSignal& u, const KernelSystem& ks,
                                int iterations) {
    const Eigen::VectorXd shifted = ks.samples() - ks.apply_operator(u);
    const KernelSystem translated = ks.with_samples(shifted);
    auto [state, correction] = pocs_run(translated, iterations);
    return u + correction;
}

BandlimitedSignal project_consistent(const BandlimitedSignal& u, const KernelSystem& ks) {
    if (u.period() != ks.period()) throw std::invalid_argument("period mismatch");
    const Eigen::VectorXd residual =
        (ks.samples() - ks.apply_operator(u)).cwiseQuotient(ks.norms_sq());
    return u + ks.synthesize(residual);
}

BandlimitedSignal yeh_stark_sweep(const BandlimitedSignal& u, const KernelSystem& ks) {
    if (u.period() != ks.period()) throw std::invalid_argument("period mismatch");
    const std::vector<double> c = orthonormal_coords(u);
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    const Eigen::MatrixXd& op = ks.operator_matrix();
    for (int n = 0; n < ks.size(); ++n) {
        const double factor = (ks.samples()[n] - op.row(n).dot(a)) / ks.filtered_norms_sq()[n];
        a += factor * op.row(n).transpose();
    }
    return signal_from_coords(ks.period(), std::vector<double>(a.data(), a.data() + a.size()));
}

BandlimitedSignal pseudo_inverse(const KernelSystem& ks, const Eigen::VectorXd& samples) {
    if (samples.size() != ks.size()) throw std::invalid_argument("sample count mismatch");
    const Eigen::VectorXd rhs = samples.cwiseQuotient(ks.norms_sq().cwiseSqrt());
    const Eigen::VectorXd coords = ks.normalized_svd().solve(rhs);
    return signal_from_coords(ks.period(),
                              std::vector<double>(coords.data(), coords.data() + coords.size()));
}

Eigen::VectorXd project_range(const KernelSystem& ks, const Eigen::VectorXd& samples) {
    if (samples.size() != ks.size()) throw std::invalid_argument("sample count mismatch");
    const Eigen::VectorXd scale = ks.norms_sq().cwiseSqrt();
    const Eigen::VectorXd rhs = samples.cwiseQuotient(scale);
    const Eigen::VectorXd coords = ks.normalized_svd().solve(rhs);
    const Eigen::MatrixXd normalized = scale.cwiseInverse().asDiagonal() * ks.operator_matrix();
    return (normalized * coords).cwiseProduct(scale);
}

double weighted_norm_sq(const KernelSystem& ks, const Eigen::VectorXd& v) {
    return v.cwiseProduct(v).cwiseQuotient(ks.norms_sq()).sum();
}

std::vector<double> pocs_error_powers(const KernelSystem& ks, const BandlimitedSignal& x,
                                      int iterations, const BandlimitedSignal* start) {
    if (iterations < 0) throw std::invalid_argument("iteration count must be nonnegative");
    const KernelSystem* system = &ks;
    KernelSystem translated = ks;
    BandlimitedSignal base = BandlimitedSignal::zero(ks.period());
    if (start != nullptr) {
        translated = ks.with_samples(ks.samples() - ks.apply_operator(*start));
        system = &translated;
        base = *start;
    }
    std::vector<double> powers;
    powers.reserve(static_cast<std::size_t>(iterations) + 1);
    PocsState state = pocs_init(*system);
    for (int k = 0;; ++k) {
        const BandlimitedSignal iterate = base + system->synthesize(state.coeffs);
        powers.push_back(norm_sq(iterate - x));
        if (k == iterations) break;
        pocs_step(state, *system);
    }
    return powers;
}

std::vector<double> mse_trace(const KernelSystem& ks, const BandlimitedSignal& x, int iterations,
                              const BandlimitedSignal* start, double ref_power) {
    const double ref = (ref_power > 0.0) ? ref_power : norm_sq(x);
    std::vector<double> out;
    for (const double p : pocs_error_powers(ks, x, iterations, start)) {
        out.push_back(power_db(p, ref));
    }
    return out;
}

Eigen::VectorXd NoisySamples::deviation() const {
    if (!clean) throw std::logic_error("deviation undefined without the clean sample vector");
    return observed - *clean;
}

Eigen::VectorXd NoisySamples::surviving_deviation(const KernelSystem& ks) const {
    return project_range(ks, deviation());
}

}  // namespace lifpocs
