#pragma once

// Forward Zakharov-Shabat scattering, used as the reference for round trips.
//
//   psi1' = -i zeta psi1 + q psi2,   psi2' = i zeta psi2 + s q* psi1
//
// with s = -1 (anomalous) or +1 (normal). The left Jost solution
// phi ~ (e^{-i zeta t}, 0) at -inf behaves as (a e^{-i zeta t}, b e^{i zeta t})
// at +inf. Conventions, fixed by the one-soliton round trip:
//
//   l(xi) = conj(b(xi)) / a(xi),   l_n = 1 / (b_n a'(zeta_n)),
//
// where b_n is the proportionality phi = b_n psi at an eigenvalue and psi is
// the right Jost solution ~ (0, e^{i zeta t}) at +inf.
//
// The integrator is piecewise constant (midpoint samples) with the exact
// exponential on each cell, so the error expands in even powers of the step.
// Two Richardson stages over dt, dt/2, dt/4 lift it to sixth order.
//
// This header only depends on the core types and the signal definitions.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inft/signal.hpp"
#include "inft/types.hpp"

namespace inft {

struct ForwardOptions {
    double T = 0.0;         // scattering domain [-T, T]; 0 picks it from the signal decay
    double max_step = 0.01; // coarsest cell size before Richardson
    bool richardson = true;
};

struct EigenvalueResult {
    cd zeta;
    cd norm;
    double residual = 0.0;  // |a(zeta)| after polishing
    int iterations = 0;
};

struct EigenvalueSearch {
    double re_min = -5.0, re_max = 5.0;
    double im_min = 0.0, im_max = 0.0;  // im_max = 0 -> max|q| (plus margin)
    double spacing = 0.1;
    int max_iterations = 50;
    double tolerance = 1e-10;
};

struct NewtonFailure {
    cd seed;
    cd last;
    double residual;
};

struct ScatteringResult {
    Dispersion dispersion = Dispersion::anomalous;
    std::vector<double> xi;
    std::vector<cd> a, b, reflection;
    std::vector<EigenvalueResult> eigenvalues;
    std::vector<NewtonFailure> failures;
    int argument_principle_count = -1;  // -1 when not computed
    // max | |a|^2 - s|b|^2 - 1 | / (|a|^2 + |b|^2) over the xi grid; relative,
    // because |a| grows large for strong normal-dispersion pulses
    double max_unitarity_error = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

// Midpoint samples of q on n cells of [-T, T].
struct CellSamples {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<cd> q;
};

inline CellSamples cells_from_spec(const SignalSpec& spec, double T, int n) {
    CellSamples c;
    c.t0 = -T;
    c.dt = 2.0 * T / n;
    c.q.resize(n);
    for (int j = 0; j < n; ++j) c.q[j] = spec(-T + (j + 0.5) * c.dt);
    return c;
}

// cosh(k dt) and sinh(k dt)/k as functions of z = (k dt)^2.
inline void cell_coefficients(cd z, double dt, cd& c, cd& s) {
    // 1/((2n-1)(2n)) and 1/((2n)(2n+1)) for the Taylor terms.
    static constexpr double kc[] = {1.0 / 2, 1.0 / 12, 1.0 / 30, 1.0 / 56, 1.0 / 90, 1.0 / 132, 1.0 / 182, 1.0 / 240, 1.0 / 306};
    static constexpr double ks[] = {1.0 / 6, 1.0 / 20, 1.0 / 42, 1.0 / 72, 1.0 / 110, 1.0 / 156, 1.0 / 210, 1.0 / 272, 1.0 / 342};
    const double az = std::abs(z);
    if (az < 0.25) {
        // Enough terms for full double precision at this |z|.
        const int terms = az < 0.01 ? 5 : (az < 0.05 ? 6 : 9);
        cd cs = 1.0, ss = 1.0;
        for (int n = terms - 1; n >= 0; --n) {
            cs = 1.0 + z * kc[n] * cs;
            ss = 1.0 + z * ks[n] * ss;
        }
        c = cs;
        s = ss * dt;
    } else {
        const cd kdt = std::sqrt(z);
        c = std::cosh(kdt);
        s = std::sinh(kdt) / kdt * dt;
    }
}

// u = phi e^{i zeta t} propagated from u(-T) = (1, 0) across the cells; returns u(T).
inline Eigen::Vector2cd propagate_left(const CellSamples& cells, cd zeta, double sign) {
    const cd i(0.0, 1.0);
    const cd phase = std::exp(i * zeta * cells.dt);
    const double dt2 = cells.dt * cells.dt;
    cd u1 = 1.0, u2 = 0.0;
    for (const cd& q : cells.q) {
        const cd z = (sign * std::norm(q) - zeta * zeta) * dt2;
        cd c, s;
        cell_coefficients(z, cells.dt, c, s);
        const cd m1 = -i * zeta * u1 + q * u2;
        const cd m2 = sign * std::conj(q) * u1 + i * zeta * u2;
        u1 = phase * (c * u1 + s * m1);
        u2 = phase * (c * u2 + s * m2);
    }
    return {u1, u2};
}

// (a, b) at one resolution.
inline std::pair<cd, cd> ab_single(const CellSamples& cells, cd zeta, double sign) {
    const Eigen::Vector2cd u = propagate_left(cells, zeta, sign);
    const double T = -cells.t0;
    return {u(0), u(1) * std::exp(cd(0.0, -2.0) * zeta * T)};
}

// Unscaled phi (from -T) and psi (from +T, backwards) at the cell boundary
// index `mid`. Returns b_n such that phi = b_n psi, from the larger component.
inline cd b_ratio_single(const CellSamples& cells, cd zeta, double sign, int mid) {
    const cd i(0.0, 1.0);
    const double dt = cells.dt;
    const double T = -cells.t0;
    const int n = static_cast<int>(cells.q.size());
    const auto step = [&](cd q, double h, cd& v1, cd& v2) {
        const cd z = (sign * std::norm(q) - zeta * zeta) * h * h;
        cd c, s;
        cell_coefficients(z, h, c, s);
        const cd m1 = -i * zeta * v1 + q * v2;
        const cd m2 = sign * std::conj(q) * v1 + i * zeta * v2;
        const cd n1 = c * v1 + s * m1;
        const cd n2 = c * v2 + s * m2;
        v1 = n1;
        v2 = n2;
    };
    cd p1 = std::exp(i * zeta * T), p2 = 0.0;  // phi(-T) = (e^{-i zeta (-T)}, 0)
    for (int j = 0; j < mid; ++j) step(cells.q[j], dt, p1, p2);
    cd r1 = 0.0, r2 = std::exp(i * zeta * T);  // psi(T) = (0, e^{i zeta T})
    for (int j = n - 1; j >= mid; --j) step(cells.q[j], -dt, r1, r2);
    return std::abs(r1) > std::abs(r2) ? p1 / r1 : p2 / r2;
}

// Richardson over (f(h), f(h/2), f(h/4)) for an even-power error expansion.
inline cd richardson(cd f1, cd f2, cd f4) {
    const cd r12 = (4.0 * f2 - f1) / 3.0;
    const cd r24 = (4.0 * f4 - f2) / 3.0;
    return (16.0 * r24 - r12) / 15.0;
}

}  // namespace detail

/// Evaluates a, b (and b_n at eigenvalues) for one potential at fixed resolution.
class ForwardScatterer {
public:
    ForwardScatterer(const SignalSpec& spec, Dispersion dispersion, const ForwardOptions& opt = {})
        : dispersion_(dispersion), richardson_(opt.richardson) {
        T_ = opt.T > 0.0 ? opt.T : default_domain(spec);
        int n = static_cast<int>(std::ceil(2.0 * T_ / opt.max_step));
        n += n % 2;
        const int levels = richardson_ ? 3 : 1;
        for (int l = 0; l < levels; ++l) cells_.push_back(detail::cells_from_spec(spec, T_, n << l));
        const double peak = spec.peak();
        const double edge = std::max(std::abs(spec(-T_)), std::abs(spec(T_)));
        if (peak > 0.0 && edge > 1e-6 * peak)
            warnings_.push_back("potential does not decay at the scattering boundary (|q(+-T)| = " +
                                std::to_string(edge) + ")");
    }

    /// Piecewise-constant cells taken directly from the samples (second order, no Richardson).
    ForwardScatterer(const SignalSamples& sig, Dispersion dispersion) : dispersion_(dispersion), richardson_(false) {
        require(sig.size() >= 2, "signal needs at least two samples");
        detail::CellSamples c;
        c.dt = sig.step;
        c.t0 = sig.t(0) - 0.5 * sig.step;
        c.q = sig.q;
        // Symmetrize the domain so that T = -t0 holds for the b scaling.
        const double right = sig.t(sig.size() - 1) + 0.5 * sig.step;
        require(std::abs(right + c.t0) < 1e-9 * std::max(1.0, right), "sample grid must be symmetric about 0");
        T_ = -c.t0;
        cells_.push_back(std::move(c));
        double peak = 0.0;
        for (const auto& v : sig.q) peak = std::max(peak, std::abs(v));
        const double edge = std::max(std::abs(sig.q.front()), std::abs(sig.q.back()));
        if (peak > 0.0 && edge > 1e-6 * peak)
            warnings_.push_back("potential does not decay at the sample boundary");
    }

    static double default_domain(const SignalSpec& spec) {
        return std::max(10.0, spec.decay_radius(1e-17));
    }

    double T() const noexcept { return T_; }
    Dispersion dispersion() const noexcept { return dispersion_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    std::pair<cd, cd> ab(cd zeta) const {
        const double s = zs_sign(dispersion_);
        if (!richardson_) return detail::ab_single(cells_[0], zeta, s);
        const auto r1 = detail::ab_single(cells_[0], zeta, s);
        const auto r2 = detail::ab_single(cells_[1], zeta, s);
        const auto r4 = detail::ab_single(cells_[2], zeta, s);
        return {detail::richardson(r1.first, r2.first, r4.first), detail::richardson(r1.second, r2.second, r4.second)};
    }

    cd a(cd zeta) const {
        const double s = zs_sign(dispersion_);
        if (!richardson_) return detail::propagate_left(cells_[0], zeta, s)(0);
        return detail::richardson(detail::propagate_left(cells_[0], zeta, s)(0),
                                  detail::propagate_left(cells_[1], zeta, s)(0),
                                  detail::propagate_left(cells_[2], zeta, s)(0));
    }

    /// Cheap single-resolution a(zeta) on the coarsest cells (for seeding).
    cd a_coarse(cd zeta) const { return detail::propagate_left(cells_[0], zeta, zs_sign(dispersion_))(0); }

    /// a'(zeta) by a fourth-order central difference.
    cd a_prime(cd zeta, double d = 1e-3) const {
        return (a(zeta - 2.0 * d) - 8.0 * a(zeta - d) + 8.0 * a(zeta + d) - a(zeta + 2.0 * d)) / (12.0 * d);
    }

    cd b_at_eigenvalue(cd zeta) const {
        const double s = zs_sign(dispersion_);
        const auto at = [&](const detail::CellSamples& c) {
            return detail::b_ratio_single(c, zeta, s, static_cast<int>(c.q.size()) / 2);
        };
        if (!richardson_) return at(cells_[0]);
        return detail::richardson(at(cells_[0]), at(cells_[1]), at(cells_[2]));
    }

    cd norming_constant(cd zeta) const { return 1.0 / (b_at_eigenvalue(zeta) * a_prime(zeta)); }

private:
    Dispersion dispersion_;
    bool richardson_;
    double T_ = 0.0;
    std::vector<detail::CellSamples> cells_;
    std::vector<std::string> warnings_;
};

/// Number of zeros of a inside the box from the winding of a along its boundary.
inline int argument_principle_count(const ForwardScatterer& fs, double re_min, double re_max, double im_min,
                                    double im_max, int samples_per_side = 800) {
    std::vector<cd> corners{{re_min, im_min}, {re_max, im_min}, {re_max, im_max}, {re_min, im_max}};
    double total = 0.0;
    cd prev = fs.a_coarse(corners[0]);
    for (int side = 0; side < 4; ++side) {
        const cd z0 = corners[side], z1 = corners[(side + 1) % 4];
        for (int k = 1; k <= samples_per_side; ++k) {
            const cd z = z0 + (z1 - z0) * (static_cast<double>(k) / samples_per_side);
            const cd v = fs.a_coarse(z);
            total += std::arg(v / prev);
            prev = v;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

/// Zeros of a(zeta) in the search box: local minima of |a| on a seed grid,
/// polished by Newton on the extrapolated a, then deduplicated.
inline std::vector<EigenvalueResult> find_eigenvalues(const ForwardScatterer& fs, const EigenvalueSearch& box,
                                                      std::vector<NewtonFailure>* failures = nullptr) {
    require(fs.dispersion() == Dispersion::anomalous, "eigenvalue search needs anomalous dispersion");
    require(box.im_max > box.im_min && box.re_max > box.re_min, "empty eigenvalue search box");
    const double sp = box.spacing;
    const int nr = static_cast<int>(std::ceil((box.re_max - box.re_min) / sp)) + 1;
    const int ni = static_cast<int>(std::ceil((box.im_max - box.im_min) / sp));
    std::vector<double> mag(static_cast<std::size_t>(nr) * ni);
    const auto at = [&](int r, int k) -> double& { return mag[static_cast<std::size_t>(r) * ni + k]; };
    const auto node = [&](int r, int k) { return cd(box.re_min + r * sp, box.im_min + (k + 1) * sp); };
    for (int r = 0; r < nr; ++r)
        for (int k = 0; k < ni; ++k) at(r, k) = std::abs(fs.a_coarse(node(r, k)));

    std::vector<cd> seeds;
    for (int r = 0; r < nr; ++r)
        for (int k = 0; k < ni; ++k) {
            bool minimum = true;
            for (int dr = -1; dr <= 1 && minimum; ++dr)
                for (int dk = -1; dk <= 1; ++dk) {
                    if (dr == 0 && dk == 0) continue;
                    const int rr = r + dr, kk = k + dk;
                    if (rr < 0 || rr >= nr || kk < 0 || kk >= ni) continue;
                    if (at(rr, kk) < at(r, k)) {
                        minimum = false;
                        break;
                    }
                }
            if (minimum) seeds.push_back(node(r, k));
        }

    std::vector<EigenvalueResult> roots;
    for (const cd& seed : seeds) {
        cd z = seed;
        cd v = fs.a(z);
        int it = 0;
        while (it < box.max_iterations && std::abs(v) > box.tolerance) {
            const double d = 1e-6 * std::max(1.0, std::abs(z));
            const cd deriv = (fs.a(z + d) - fs.a(z - d)) / (2.0 * d);
            if (deriv == 0.0) break;
            z -= v / deriv;
            v = fs.a(z);
            ++it;
        }
        if (!(std::abs(v) <= box.tolerance) || !(z.imag() > 0.0)) {
            // Shallow minima of |a| that lead nowhere are not roots; only
            // seeds that looked like zeros count as failures.
            if (failures && z.imag() > 0.0 && std::abs(fs.a_coarse(seed)) < 0.1)
                failures->push_back({seed, z, std::abs(v)});
            continue;
        }
        const bool dup = std::any_of(roots.begin(), roots.end(),
                                     [&](const EigenvalueResult& e) { return std::abs(e.zeta - z) < 1e-6; });
        if (!dup) roots.push_back({z, cd{}, std::abs(v), it});
    }
    for (auto& e : roots) e.norm = fs.norming_constant(e.zeta);
    std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.zeta.imag() > y.zeta.imag(); });
    return roots;
}

inline EigenvalueSearch default_search(const SignalSpec& spec) {
    EigenvalueSearch box;
    box.im_min = 0.0;
    box.im_max = std::max(1.0, spec.peak() + 0.5);
    return box;
}

/// a, b and l on the xi grid; eigenvalues and norming constants for anomalous dispersion.
inline ScatteringResult forward_scatter(const ForwardScatterer& fs, const std::vector<double>& xi,
                                        const std::optional<EigenvalueSearch>& box = std::nullopt) {
    ScatteringResult out;
    out.dispersion = fs.dispersion();
    out.xi = xi;
    out.a.resize(xi.size());
    out.b.resize(xi.size());
    out.reflection.resize(xi.size());
    const double s = zs_sign(fs.dispersion());
    for (std::size_t j = 0; j < xi.size(); ++j) {
        const auto [a, b] = fs.ab(cd(xi[j], 0.0));
        out.a[j] = a;
        out.b[j] = b;
        out.reflection[j] = std::conj(b) / a;
        out.max_unitarity_error = std::max(out.max_unitarity_error,
                                           std::abs(std::norm(a) - s * std::norm(b) - 1.0) / (std::norm(a) + std::norm(b)));
    }
    out.warnings = fs.warnings();
    if (fs.dispersion() == Dispersion::anomalous && box) {
        out.eigenvalues = find_eigenvalues(fs, *box, &out.failures);
        // Bottom edge lifted off the real axis, where a has no zeros.
        const double lift = std::min(0.05, 0.5 * box->spacing);
        out.argument_principle_count =
            argument_principle_count(fs, box->re_min, box->re_max, box->im_min + lift, box->im_max);
        if (out.argument_principle_count != static_cast<int>(out.eigenvalues.size()))
            out.warnings.push_back("eigenvalue count " + std::to_string(out.eigenvalues.size()) +
                                   " differs from the argument-principle count " +
                                   std::to_string(out.argument_principle_count));
    }
    return out;
}

inline SpectralData to_spectral_data(const ScatteringResult& r, double xi_min, double xi_max, Side side = Side::left) {
    SpectralData sd;
    sd.side = side;
    sd.dispersion = r.dispersion;
    sd.xi_min = xi_min;
    sd.xi_max = xi_max;
    sd.reflection = r.reflection;
    for (const auto& e : r.eigenvalues) sd.discrete.push_back({e.zeta, e.norm});
    sd.validate();
    return sd;
}

/// Left spectral data of a closed-form signal on `nodes` xi points over [-width/2, width/2].
inline SpectralData spectrum_of(const SignalSpec& spec, Dispersion dispersion, double xi_width, int nodes,
                                const ForwardOptions& opt = {}, ScatteringResult* details = nullptr) {
    const ForwardScatterer fs(spec, dispersion, opt);
    const auto xi = xi_grid(xi_width, nodes);
    std::optional<EigenvalueSearch> box;
    if (dispersion == Dispersion::anomalous && spec.kind != SignalKind::zero) box = default_search(spec);
    ScatteringResult r = forward_scatter(fs, xi, box);
    SpectralData sd = to_spectral_data(r, xi.front(), xi.back(), spec.reversed ? Side::right : Side::left);
    if (details) *details = std::move(r);
    return sd;
}

/// Right-side data: left data of q(-t), labelled side = right.
inline SpectralData right_spectrum_of(SignalSpec spec, Dispersion dispersion, double xi_width, int nodes,
                                      const ForwardOptions& opt = {}, ScatteringResult* details = nullptr) {
    spec.reversed = !spec.reversed;
    SpectralData sd = spectrum_of(spec, dispersion, xi_width, nodes, opt, details);
    sd.side = Side::right;
    return sd;
}

}  // namespace inft
