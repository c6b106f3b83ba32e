#pragma once

// GLME kernel synthesis from scattering data:
//
//   Omega(t) = 1/(2 pi) Int l(xi) e^{-i xi t} dxi  -  i Sum_n l_n e^{-i zeta_n t}
//
// The continuous integral is evaluated with a two-sided Gregory rule on the
// xi-grid of the data.

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "inft/quadrature.hpp"
#include "inft/signal.hpp"
#include "inft/types.hpp"

namespace inft {

/// Evaluates Omega(t) for fixed data and quadrature weights. Coefficients
/// w_j l(xi_j) are folded once; each evaluation is a single pass over the grid.
class KernelEvaluator {
public:
    KernelEvaluator(const SpectralData& sd, const WeightVector& w) : discrete_(sd.discrete) {
        sd.validate();
        require(w.size() == sd.nodes(), "xi weights do not match the xi grid");
        xi_.resize(sd.nodes());
        coef_.resize(sd.nodes());
        for (std::size_t j = 0; j < sd.nodes(); ++j) {
            xi_[j] = sd.xi(j);
            coef_[j] = w.weights[j] * sd.reflection[j];
        }
        scale_ = sd.xi_step() / (2.0 * kPi);
    }

    /// Two-sided Gregory rule of order n on the data's own grid.
    KernelEvaluator(const SpectralData& sd, int n)
        : KernelEvaluator(sd, gregory_weights(n, static_cast<int>(sd.nodes()) - 1, Sidedness::two_sided)) {}

    cd operator()(double t) const {
        cd acc{0.0, 0.0};
        for (std::size_t j = 0; j < xi_.size(); ++j) acc += coef_[j] * std::polar(1.0, -xi_[j] * t);
        acc *= scale_;
        for (const auto& d : discrete_) acc -= cd(0.0, 1.0) * d.norm * std::exp(cd(0.0, -1.0) * d.zeta * t);
        return acc;
    }

    cd continuous_part(double t) const {
        cd acc{0.0, 0.0};
        for (std::size_t j = 0; j < xi_.size(); ++j) acc += coef_[j] * std::polar(1.0, -xi_[j] * t);
        return acc * scale_;
    }

private:
    std::vector<double> xi_;
    std::vector<cd> coef_;
    double scale_ = 0.0;
    std::vector<DiscreteEigenvalue> discrete_;
};

inline cd kernel_value(const SpectralData& sd, double t, const WeightVector& w) {
    return KernelEvaluator(sd, w)(t);
}

/// Omega sampled once on x_k = x0 + k dx, k = 0..count-1; lookups replay the
/// same values an on-demand evaluator would produce.
class KernelCache {
public:
    KernelCache(const KernelEvaluator& eval, double x0, double dx, int count) : x0_(x0), dx_(dx) {
        values_.resize(count);
        for (int k = 0; k < count; ++k) values_[k] = eval(x0 + dx * k);
    }

    cd at_index(int k) const { return values_.at(k); }
    double x0() const noexcept { return x0_; }
    double dx() const noexcept { return dx_; }
    int size() const noexcept { return static_cast<int>(values_.size()); }

private:
    double x0_;
    double dx_;
    std::vector<cd> values_;
};

/// omega_k = Omega(2t - k h), k = 0..2M.
struct KernelTrack {
    double t = 0.0;
    double h = 0.0;
    int M = 0;
    std::vector<cd> omega;
};

template <typename Kernel>
KernelTrack init_track(const Kernel& kernel, double t0, double h, int M) {
    require(M >= 1, "kernel track needs M >= 1");
    require(h > 0.0, "kernel track needs h > 0");
    KernelTrack kt;
    kt.t = t0;
    kt.h = h;
    kt.M = M;
    kt.omega.resize(2 * static_cast<std::size_t>(M) + 1);
    for (int k = 0; k <= 2 * M; ++k) kt.omega[k] = kernel(2.0 * t0 - k * h);
    return kt;
}

inline KernelTrack init_track(const SpectralData& sd, double t0, double h, int M, const WeightVector& w) {
    return init_track(KernelEvaluator(sd, w), t0, h, M);
}

/// Moves the track to t + h/2: omega shifts one slot right, one fresh value
/// Omega(2t + h) enters at k = 0 and omega_{2M} drops out.
template <typename Kernel>
void advance_track_in_place(KernelTrack& kt, const Kernel& kernel) {
    const cd fresh = kernel(2.0 * kt.t + kt.h);
    std::move_backward(kt.omega.begin(), kt.omega.end() - 1, kt.omega.end());
    kt.omega.front() = fresh;
    kt.t += 0.5 * kt.h;
}

template <typename Kernel>
KernelTrack advance_track(KernelTrack kt, const Kernel& kernel) {
    advance_track_in_place(kt, kernel);
    return kt;
}

inline KernelTrack advance_track(const KernelTrack& kt, const SpectralData& sd, const WeightVector& w) {
    return advance_track(kt, KernelEvaluator(sd, w));
}

/// Left data of the time-reversed signal q(-t), labelled as right-side data.
/// `oracle` maps a signal to its left spectral data; the recovered samples of
/// the reversed signal are later index-flipped back onto t > 0.
template <typename Oracle>
SpectralData time_reverse(const SignalSamples& signal, Oracle&& oracle) {
    SpectralData sd = std::forward<Oracle>(oracle)(reverse_signal(signal));
    sd.side = Side::right;
    return sd;
}

}  // namespace inft
