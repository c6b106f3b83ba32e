#pragma once

// Inverse transform by the left Gelfand-Levitan-Marchenko equations.
//
// At time t the equations are discretized on k, p in {0, h, ..., m h} with
// Gregory weights W and kernel samples omega_k = Omega(2t - k h). After the
// substitution Y = W X and flipping the second block by the exchange matrix J
// the system reads
//
//   [ W^{-1}   s T^* ] [ Y1   ]   [ 0   ]
//   [ T     JW^{-1}J ] [ J Y2 ] = [ J F ],    T[i][j] = h omega_{m-i+j},
//
// with s = -1 (anomalous) or +1 (normal) and F = -(omega_0..omega_m). This is
// A - R with A block-Toeplitz (2x2 blocks after interleaving Y1 and J Y2) and R
// diagonal of low rank, so it is solved by the Woodbury steps on top of the
// block Levinson recursion, and q(t) = -2 s X2(0, t).
//
// The sweep starts at t = -L/2 with a single node and advances t by h/2 = tau.
// Because the integration length grows as P(t) = 2t + L, the kernel samples
// h Omega(-L - d h) that define block t_d do not depend on t: each half-step
// borders the same infinite block-Toeplitz matrix by one block. Corrections
// at the fixed leading edge are tracked as ordinary right-hand sides; those at
// the moving trailing edge are tracked in the block-reversed system.

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inft/quadrature.hpp"
#include "inft/spectral.hpp"
#include "inft/toeplitz.hpp"
#include "inft/types.hpp"
#include "inft/woodbury.hpp"

namespace inft {

enum class SchemeFamily { TIB, G2, G3, G4, G5, G6, G2d, G3d, G4d, G5d, G6d };

struct SchemeSpec {
    SchemeFamily family = SchemeFamily::G6;

    int n() const {
        switch (family) {
            case SchemeFamily::TIB: return 1;
            case SchemeFamily::G2: case SchemeFamily::G2d: return 2;
            case SchemeFamily::G3: case SchemeFamily::G3d: return 3;
            case SchemeFamily::G4: case SchemeFamily::G4d: return 4;
            case SchemeFamily::G5: case SchemeFamily::G5d: return 5;
            case SchemeFamily::G6: case SchemeFamily::G6d: return 6;
        }
        return 1;
    }

    bool two_sided() const {
        switch (family) {
            case SchemeFamily::G2d: case SchemeFamily::G3d: case SchemeFamily::G4d:
            case SchemeFamily::G5d: case SchemeFamily::G6d:
                return true;
            default:
                return false;
        }
    }

    bool is_tib() const { return family == SchemeFamily::TIB; }

    /// Sidedness of the GLME rule in the integration variable p; one-sided
    /// schemes correct the p = 0 edge, where the solution does not vanish.
    Sidedness sidedness() const { return two_sided() ? Sidedness::two_sided : Sidedness::left_sided; }

    /// Rank of the Woodbury correction once the system is large enough.
    int rank() const { return is_tib() ? 2 : (two_sided() ? 4 * n() : 2 * n()); }

    std::string name() const {
        if (is_tib()) return "TIB";
        return "G" + std::to_string(n()) + (two_sided() ? "d" : "");
    }

    static SchemeSpec parse(const std::string& s) {
        for (int f = 0; f <= static_cast<int>(SchemeFamily::G6d); ++f) {
            SchemeSpec spec{static_cast<SchemeFamily>(f)};
            if (spec.name() == s) return spec;
        }
        throw InvalidArgument("unknown scheme '" + s + "'");
    }

    static std::vector<SchemeSpec> all() {
        std::vector<SchemeSpec> out;
        for (int f = 0; f <= static_cast<int>(SchemeFamily::G6d); ++f) out.push_back({static_cast<SchemeFamily>(f)});
        return out;
    }
};

enum class Split { split_at_zero, left_only };

/// Output grid t_j = -L/2 + j tau, j = 0..M_out, tau = L / M_out; GLME step h = 2 tau.
struct GridConfig {
    double L = 40.0;
    int M_out = 1024;
    Split split = Split::split_at_zero;

    double tau() const { return L / M_out; }
    double h() const { return 2.0 * tau(); }
    double t(int j) const { return -0.5 * L + j * tau(); }

    /// Number of GLME subintervals at the last sweep point of the left part.
    int glme_M() const { return split == Split::split_at_zero ? M_out / 2 : M_out; }

    void validate(const SchemeSpec& scheme) const {
        require(L > 0.0, "grid length must be positive");
        require(M_out >= 2 && M_out % 2 == 0, "M_out must be even and >= 2");
        const int need = scheme.two_sided() ? 2 * scheme.n() : scheme.n();
        require(glme_M() >= need, "grid too coarse for scheme " + scheme.name() + " (need GLME M >= " +
                                      std::to_string(need) + ")");
    }
};

struct RecoveredPotential {
    std::vector<double> t;
    std::vector<cd> q;
    SchemeSpec scheme;
    /// Condition estimate of the Woodbury capacity matrix at each output point.
    std::vector<double> capacity_condition;
    /// Relative residual of the full corrected system (NaN unless requested).
    std::vector<double> residual;
    double kernel_seconds = 0.0;
    double sweep_seconds = 0.0;
};

/// How Z = A^{-1} U is obtained at each point.
enum class ZMode { incremental, resolve };

struct SweepOptions {
    ZMode z_mode = ZMode::incremental;
    bool check_residuals = false;
};

/// Weights in the integration variable on m+1 nodes as used by the sweep.
/// Near the start the system is smaller than the rule: one-sided rules then
/// keep the corrections that fit, and two-sided rules switch on the trailing
/// edge once m >= 2n.
inline WeightVector sweep_weights(const SchemeSpec& scheme, int m) {
    const int n = scheme.n();
    const auto& edge = gregory_edge_weights(n);
    WeightVector w;
    w.n = n;
    w.sidedness = scheme.sidedness();
    w.exact_degree = gregory_exact_degree(n, w.sidedness);
    w.weights.assign(static_cast<std::size_t>(m) + 1, 1.0);
    for (int p = 0; p < n && p <= m; ++p) w.weights[p] = edge[p];
    if (scheme.two_sided() && m >= 2 * n)
        for (int p = 0; p < n; ++p) w.weights[m - p] = edge[p];
    return w;
}

/// Kernel quadrature rule over xi: trapezoid for TIB, otherwise the scheme's
/// Gregory order applied at both edges.
inline KernelEvaluator scheme_kernel(const SpectralData& sd, const SchemeSpec& scheme) {
    return KernelEvaluator(sd, scheme.is_tib() ? 1 : scheme.n());
}

struct AssembledSystem {
    BlockToeplitzSystem A;
    BlockVector rhs;
    LowRankCorrection correction;
};

/// Block-Toeplitz operator A, right-hand side (0, J F) and correction R for a
/// track with M subintervals.
inline AssembledSystem assemble_system(const KernelTrack& kt, const WeightVector& w, Dispersion dispersion) {
    const int M = kt.M;
    require(static_cast<int>(kt.omega.size()) == 2 * M + 1, "kernel track must hold 2M+1 samples");
    require(static_cast<int>(w.size()) == M + 1, "weights must have M+1 entries");
    AssembledSystem sys{BlockToeplitzSystem(M), BlockVector(M + 1), build_correction(w, M)};
    const auto g = [&](int d) { return kt.h * kt.omega[M + d]; };
    for (int d = -M; d <= M; ++d) sys.A.block(d) = glme_block(g(d), g(-d), dispersion, d == 0);
    for (int i = 0; i <= M; ++i) sys.rhs[i] = Vec2(0.0, -kt.omega[M - i]);
    return sys;
}

/// q(t) = -2 s X2(0, t) with X2(0) = (J Y2)[M] / w_0.
inline cd potential_from_solution(cd jy2_last, double w0, Dispersion dispersion) {
    return -2.0 * zs_sign(dispersion) * jy2_last / w0;
}

/// Solves one GLME point from scratch: Levinson for A (r + 1 solves) plus the
/// Woodbury capacity step. Returns the full interleaved solution.
inline Eigen::VectorXcd solve_point(const AssembledSystem& sys) {
    return woodbury_solve(levinson_solver(sys.A), sys.correction, flatten(sys.rhs));
}

/// Track truncated to its first 2m+1 samples (the size-m system at the same t).
inline KernelTrack truncate_track(const KernelTrack& kt, int m) {
    KernelTrack out;
    out.t = kt.t;
    out.h = kt.h;
    out.M = m;
    out.omega.assign(kt.omega.begin(), kt.omega.begin() + 2 * m + 1);
    return out;
}

namespace detail {

class Stopwatch {
public:
    void start() { t0_ = std::chrono::steady_clock::now(); }
    void stop() { total_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }
    double seconds() const { return total_; }

private:
    std::chrono::steady_clock::time_point t0_{};
    double total_ = 0.0;
};

template <typename Kernel>
class TimedKernel {
public:
    TimedKernel(const Kernel& k, Stopwatch& w) : kernel_(k), watch_(w) {}
    cd operator()(double x) const {
        watch_.start();
        const cd v = kernel_(x);
        watch_.stop();
        return v;
    }

private:
    const Kernel& kernel_;
    Stopwatch& watch_;
};

// Which solve supplies a column of Z = A^{-1} U.
struct ZSource {
    enum Kind { forward_predictor, backward_predictor, tracked, tracked_reversed } kind;
    int component;  // column of the predictor, or unit component of a tracked rhs
    int id;         // tracked rhs id
};

struct ActiveCorrection {
    Position pos;
    double value;
    ZSource source;
};

struct SweepResult {
    std::vector<cd> q;  // q at t_j = -L/2 + j tau, j = 0..steps
    std::vector<double> capacity_condition;
    std::vector<double> residual;
};

}  // namespace detail

/// One left-GLME sweep over t_j = -L/2 + j h/2, j = 0..steps.
template <typename Kernel>
detail::SweepResult sweep_left(const Kernel& kernel, Dispersion dispersion, const SchemeSpec& scheme, double L,
                               double h, int steps, const SweepOptions& opt = {}) {
    require(steps >= 0, "sweep needs a non-negative step count");
    const int n = scheme.n();
    const bool two = scheme.two_sided();
    const auto& edge = gregory_edge_weights(n);
    const double w0 = edge[0];

    detail::SweepResult out;
    out.q.reserve(steps + 1);
    const int window = std::max(steps, 1);
    KernelTrack kt = init_track(kernel, -0.5 * L, h, window);

    const auto g = [&](int d, int j) { return h * kt.omega[j + d]; };
    const auto rhs_block = [&]() { return Vec2(0.0, -kt.omega[0]); };

    LevinsonState state(glme_block(g(0, 0), g(0, 0), dispersion, true));
    state.add_rhs(rhs_block());

    // Unit right-hand sides e_{(p, c)} for p = 1..n-1; p = 0 is read off the predictors.
    struct Unit {
        int p;
        int c;
        int id;
    };
    std::vector<Unit> fwd_units, rev_units;
    if (!scheme.is_tib() && opt.z_mode == ZMode::incremental) {
        for (int p = 1; p < n; ++p) {
            fwd_units.push_back({p, 0, state.add_rhs(Vec2::Zero())});
            rev_units.push_back({p, 1, state.add_reversed_rhs(Vec2::Zero())});
            if (two) {
                fwd_units.push_back({p, 1, state.add_rhs(Vec2::Zero())});
                rev_units.push_back({p, 0, state.add_reversed_rhs(Vec2::Zero())});
            }
        }
    }
    const auto find_id = [](const std::vector<Unit>& units, int p, int c) {
        for (const auto& u : units)
            if (u.p == p && u.c == c) return u.id;
        return -1;
    };

    std::vector<Vec2> fwd_new(state.rhs_count()), rev_new(state.reversed_rhs_count());
    std::vector<detail::ActiveCorrection> active;

    for (int j = 0; j <= steps; ++j) try {
        if (j > 0) {
            advance_track_in_place(kt, kernel);
            fwd_new[0] = rhs_block();
            for (const auto& u : fwd_units) fwd_new[u.id] = (u.p == j) ? Vec2(Vec2::Unit(u.c)) : Vec2(Vec2::Zero());
            for (const auto& u : rev_units) rev_new[u.id] = (u.p == j) ? Vec2(Vec2::Unit(u.c)) : Vec2(Vec2::Zero());
            state.extend(glme_block(g(-j, j), g(j, j), dispersion, false),
                         glme_block(g(j, j), g(-j, j), dispersion, false), fwd_new, rev_new);
        }
        const int m = j;

        // Active diagonal corrections at this size.
        active.clear();
        const auto fwd_src = [&](int p, int c) {
            return p == 0 ? detail::ZSource{detail::ZSource::forward_predictor, c, -1}
                          : detail::ZSource{detail::ZSource::tracked, c, find_id(fwd_units, p, c)};
        };
        const auto rev_src = [&](int p, int c) {
            return p == 0 ? detail::ZSource{detail::ZSource::backward_predictor, c, -1}
                          : detail::ZSource{detail::ZSource::tracked_reversed, c, find_id(rev_units, p, c)};
        };
        for (int p = 0; p < n && p <= m; ++p) {
            const double d = 1.0 - 1.0 / edge[p];
            active.push_back({{p, 0}, d, fwd_src(p, 0)});
            active.push_back({{m - p, 1}, d, rev_src(p, 1)});
        }
        if (two && m >= 2 * n) {
            for (int p = 0; p < n; ++p) {
                const double d = 1.0 - 1.0 / edge[p];
                active.push_back({{m - p, 0}, d, rev_src(p, 0)});
                active.push_back({{p, 1}, d, fwd_src(p, 1)});
            }
        }

        if (opt.z_mode == ZMode::resolve || opt.check_residuals) {
            // Independent route: assemble and solve the size-m system from scratch.
            const WeightVector w = sweep_weights(scheme, m);
            const AssembledSystem sys = assemble_system(truncate_track(kt, m), w, dispersion);
            const Eigen::VectorXcd x = solve_point(sys);
            if (opt.check_residuals) {
                const Eigen::VectorXcd Ax = flatten(sys.A.apply(unflatten(x)));
                const Eigen::VectorXcd Bx = Ax - sys.correction.U * (sys.correction.V * x);
                const Eigen::VectorXcd b = flatten(sys.rhs);
                const double bn = b.norm();
                out.residual.push_back(bn > 0.0 ? (Bx - b).norm() / bn : (Bx - b).norm());
            } else {
                out.residual.push_back(std::numeric_limits<double>::quiet_NaN());
            }
            if (opt.z_mode == ZMode::resolve) {
                out.q.push_back(potential_from_solution(x(2 * m + 1), w0, dispersion));
                out.capacity_condition.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
        } else {
            out.residual.push_back(std::numeric_limits<double>::quiet_NaN());
        }

        const auto& y = state.solution(0);
        const auto& F = state.forward();
        const auto& B = state.backward();
        // Entry `pos` of the Z column supplied by `src`.
        const auto z_entry = [&](const detail::ZSource& src, const Position& pos) -> cd {
            switch (src.kind) {
                case detail::ZSource::forward_predictor:
                    return F[pos.index](pos.component, src.component);
                case detail::ZSource::backward_predictor:
                    return B[pos.index](pos.component, src.component);
                case detail::ZSource::tracked:
                    return state.solution(src.id)[pos.index](pos.component);
                case detail::ZSource::tracked_reversed:
                    return state.reversed_solution(src.id)[m - pos.index](pos.component);
            }
            return {};
        };

        const auto r = static_cast<Eigen::Index>(active.size());
        const Position qpos{m, 1};
        cd x_q = y[m](1);
        double cond = 1.0;
        if (r > 0) {
            Eigen::MatrixXcd Zp(r, r);
            Eigen::VectorXcd yp(r);
            std::vector<double> values(r);
            for (Eigen::Index a = 0; a < r; ++a) {
                values[a] = active[a].value;
                yp(a) = y[active[a].pos.index](active[a].pos.component);
                for (Eigen::Index b = 0; b < r; ++b) Zp(a, b) = z_entry(active[b].source, active[a].pos);
            }
            if (scheme.is_tib()) {
                // Rank-2 capacity system solved by Cramer's rule.
                const cd c00 = 1.0 - values[0] * Zp(0, 0), c01 = -values[0] * Zp(0, 1);
                const cd c10 = -values[1] * Zp(1, 0), c11 = 1.0 - values[1] * Zp(1, 1);
                const cd v0 = values[0] * yp(0), v1 = values[1] * yp(1);
                const cd det = c00 * c11 - c01 * c10;
                if (!(std::abs(det) > 0.0)) throw Breakdown("singular TIB edge correction", m + 1, INFINITY);
                const cd z0 = (v0 * c11 - c01 * v1) / det;
                const cd z1 = (c00 * v1 - v0 * c10) / det;
                x_q += z_entry(active[0].source, qpos) * z0 + z_entry(active[1].source, qpos) * z1;
                cond = (std::norm(c00) + std::norm(c01) + std::norm(c10) + std::norm(c11)) / std::abs(det);
            } else {
                const CapacitySolution cap = solve_diagonal_capacity(values, Zp, yp, m + 1);
                for (Eigen::Index b = 0; b < r; ++b) x_q += z_entry(active[b].source, qpos) * cap.z(b);
                cond = cap.condition;
            }
        }
        out.q.push_back(potential_from_solution(x_q, w0, dispersion));
        out.capacity_condition.push_back(cond);
    } catch (const Breakdown& b) {
        throw b.has_time() ? b : b.at_time(-0.5 * L + 0.5 * h * j);
    }
    return out;
}

/// Full recovery on the output grid: left GLME for t <= 0 and, in split mode,
/// the time-reversed data (side = right) for t > 0.
inline RecoveredPotential recover(const SpectralData& sd_left, const std::optional<SpectralData>& sd_right,
                                  const GridConfig& grid, const SchemeSpec& scheme, const SweepOptions& opt = {}) {
    grid.validate(scheme);
    const bool split = grid.split == Split::split_at_zero;
    require(!split || sd_right.has_value(), "split recovery needs right-side spectral data");
    require(sd_left.dispersion == (sd_right ? sd_right->dispersion : sd_left.dispersion),
            "left and right data disagree on dispersion");

    RecoveredPotential rp;
    rp.scheme = scheme;
    rp.t.resize(grid.M_out + 1);
    for (int j = 0; j <= grid.M_out; ++j) rp.t[j] = grid.t(j);
    rp.q.assign(grid.M_out + 1, cd{});
    rp.capacity_condition.assign(grid.M_out + 1, 0.0);
    rp.residual.assign(grid.M_out + 1, std::numeric_limits<double>::quiet_NaN());

    detail::Stopwatch kernel_watch, total_watch;
    total_watch.start();
    {
        const KernelEvaluator ev = scheme_kernel(sd_left, scheme);
        const detail::TimedKernel<KernelEvaluator> timed(ev, kernel_watch);
        const int steps = grid.glme_M();
        const auto res = sweep_left(timed, sd_left.dispersion, scheme, grid.L, grid.h(), steps, opt);
        for (int j = 0; j <= steps; ++j) {
            rp.q[j] = res.q[j];
            rp.capacity_condition[j] = res.capacity_condition[j];
            rp.residual[j] = res.residual[j];
        }
    }
    if (split) {
        const KernelEvaluator ev = scheme_kernel(*sd_right, scheme);
        const detail::TimedKernel<KernelEvaluator> timed(ev, kernel_watch);
        const int steps = grid.M_out / 2 - 1;
        const auto res = sweep_left(timed, sd_right->dispersion, scheme, grid.L, grid.h(), steps, opt);
        for (int j = 0; j <= steps; ++j) {
            rp.q[grid.M_out - j] = res.q[j];
            rp.capacity_condition[grid.M_out - j] = res.capacity_condition[j];
            rp.residual[grid.M_out - j] = res.residual[j];
        }
    }
    total_watch.stop();
    rp.kernel_seconds = kernel_watch.seconds();
    rp.sweep_seconds = total_watch.seconds() - kernel_watch.seconds();
    return rp;
}

/// Second-order baseline: trapezoid rule everywhere, edge weight folded into
/// the predictors.
inline RecoveredPotential recover_reference_tib(const SpectralData& sd_left, const std::optional<SpectralData>& sd_right,
                                                const GridConfig& grid, const SweepOptions& opt = {}) {
    return recover(sd_left, sd_right, grid, SchemeSpec{SchemeFamily::TIB}, opt);
}

}  // namespace inft
