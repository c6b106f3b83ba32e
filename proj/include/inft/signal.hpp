#pragma once

// Test signals: closed-form families and their uniform samplings.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "inft/types.hpp"

namespace inft {

enum class SignalKind { zero, chirped_sech, sech, rectangle, soliton };

/// A closed-form potential. `reversed` evaluates q(-t).
struct SignalSpec {
    SignalKind kind = SignalKind::zero;
    double amplitude = 0.0;  // A
    double chirp = 0.0;      // C (chirped_sech)
    double width = 2.0;      // rectangle full width
    cd zeta{0.0, 0.5};       // soliton eigenvalue
    cd norm{0.0, -1.0};      // soliton norming constant
    bool reversed = false;

    static SignalSpec chirped_sech_of(double A, double C) {
        SignalSpec s;
        s.kind = SignalKind::chirped_sech;
        s.amplitude = A;
        s.chirp = C;
        return s;
    }
    static SignalSpec sech_of(double A) {
        SignalSpec s;
        s.kind = SignalKind::sech;
        s.amplitude = A;
        return s;
    }
    static SignalSpec rectangle_of(double A, double width) {
        SignalSpec s;
        s.kind = SignalKind::rectangle;
        s.amplitude = A;
        s.width = width;
        return s;
    }
    static SignalSpec soliton_of(cd zeta, cd norm) {
        require(zeta.imag() > 0.0, "soliton eigenvalue must lie in the upper half-plane");
        SignalSpec s;
        s.kind = SignalKind::soliton;
        s.zeta = zeta;
        s.norm = norm;
        return s;
    }

    /// log(cosh t) without overflow.
    static double log_cosh(double t) {
        const double a = std::abs(t);
        return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
    }

    cd operator()(double t) const {
        if (reversed) t = -t;
        switch (kind) {
            case SignalKind::zero:
                return {0.0, 0.0};
            case SignalKind::chirped_sech:
                // A sech(t)^{1+iC} = A exp(-(1+iC) log cosh t)
                return amplitude * std::exp(-cd(1.0, chirp) * log_cosh(t));
            case SignalKind::sech:
                return {amplitude * std::exp(-log_cosh(t)), 0.0};
            case SignalKind::rectangle:
                return std::abs(t) <= 0.5 * width ? cd(amplitude, 0.0) : cd(0.0, 0.0);
            case SignalKind::soliton: {
                // Closed form of the one-eigenvalue GLME solution for the left
                // data {zeta, norm}; anomalous dispersion.
                const double eta = zeta.imag();
                const cd c = cd(0.0, -1.0) * norm;
                const double ac = std::abs(c);
                // |c|^2 e^{4 eta t} / (4 eta^2) = e^{2y}, y = 2 eta t + log(|c| / 2 eta)
                const double y = 2.0 * eta * t + std::log(ac / (2.0 * eta));
                // q = -2 c e^{-2 i zeta t} / (1 + e^{2y}) = -(c/|c|) 2 eta sech(y) e^{-2 i Re(zeta) t}
                const double sech_y = 1.0 / std::cosh(y);
                const cd phase = std::exp(cd(0.0, -2.0 * zeta.real() * t));
                return -2.0 * (c / ac) * phase * eta * sech_y;
            }
        }
        return {0.0, 0.0};
    }

    /// max |q| over the real line (exact for every family).
    double peak() const {
        switch (kind) {
            case SignalKind::zero:
                return 0.0;
            case SignalKind::chirped_sech:
            case SignalKind::sech:
            case SignalKind::rectangle:
                return std::abs(amplitude);
            case SignalKind::soliton:
                return 2.0 * zeta.imag();
        }
        return 0.0;
    }

    /// Half-width beyond which |q| < rel * peak.
    double decay_radius(double rel) const {
        switch (kind) {
            case SignalKind::zero:
                return 0.0;
            case SignalKind::rectangle:
                return 0.5 * width;
            case SignalKind::chirped_sech:
            case SignalKind::sech:
                return std::log(2.0 / rel);
            case SignalKind::soliton: {
                const double eta = zeta.imag();
                const double t0 = -std::log(std::abs(norm) / (2.0 * eta)) / (2.0 * eta);
                return std::abs(t0) + std::log(2.0 / rel) / (2.0 * eta);
            }
        }
        return 0.0;
    }
};

inline std::string to_string(SignalKind k) {
    switch (k) {
        case SignalKind::zero: return "zero";
        case SignalKind::chirped_sech: return "chirped_sech";
        case SignalKind::sech: return "sech";
        case SignalKind::rectangle: return "rectangle";
        case SignalKind::soliton: return "soliton";
    }
    return "unknown";
}

inline SignalKind parse_signal_kind(const std::string& s) {
    for (auto k : {SignalKind::zero, SignalKind::chirped_sech, SignalKind::sech, SignalKind::rectangle,
                   SignalKind::soliton})
        if (to_string(k) == s) return k;
    throw InvalidArgument("unknown signal '" + s + "'");
}

/// Uniform samples of a potential on [-L/2, L/2].
struct SignalSamples {
    double t_min = 0.0;
    double step = 0.0;
    std::vector<cd> q;
    std::optional<SignalSpec> closed_form;

    std::size_t size() const noexcept { return q.size(); }
    double t(std::size_t j) const { return t_min + step * static_cast<double>(j); }
};

inline SignalSamples make_signal(const SignalSpec& spec, double L, int M_out) {
    require(L > 0.0 && M_out >= 1, "signal grid needs L > 0 and M_out >= 1");
    SignalSamples s;
    s.t_min = -0.5 * L;
    s.step = L / static_cast<double>(M_out);
    s.q.resize(static_cast<std::size_t>(M_out) + 1);
    for (int j = 0; j <= M_out; ++j) s.q[j] = spec(s.t(j));
    s.closed_form = spec;
    return s;
}

/// q(-t) on the mirrored grid.
inline SignalSamples reverse_signal(const SignalSamples& s) {
    SignalSamples r = s;
    const double t_max = s.t(s.size() - 1);
    r.t_min = -t_max;
    std::reverse(r.q.begin(), r.q.end());
    if (r.closed_form) r.closed_form->reversed = !r.closed_form->reversed;
    return r;
}

}  // namespace inft
