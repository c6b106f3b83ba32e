#pragma once

// Solve (A - U V) x = b given a solver for A:
//   1. A y = b
//   2. A Z = U            (r solves)
//   3. (E_r - V Z) z = V y
//   4. x = y + Z z
//
// In the GLME the correction R = diag(E - W^{-1}, E - J W^{-1} J) is diagonal,
// so U holds unit columns at the non-unit weight positions and V holds the
// matching diagonal values.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "inft/error.hpp"
#include "inft/quadrature.hpp"
#include "inft/toeplitz.hpp"

namespace inft {

inline constexpr double kMaxCapacityCondition = 1e12;

/// Entry of the interleaved block vector: block index and component (0 = Y1, 1 = J Y2).
struct Position {
    int index = 0;
    int component = 0;

    int flat() const noexcept { return 2 * index + component; }
    friend bool operator==(const Position&, const Position&) = default;
};

struct LowRankCorrection {
    int r = 0;
    std::vector<Position> positions;
    std::vector<double> values;  // diagonal of R at `positions`
    Eigen::MatrixXcd U;          // (2M+2) x r
    Eigen::MatrixXcd V;          // r x (2M+2)
};

/// Correction for weights on M+1 nodes. The first block uses W^{-1}; the second,
/// flipped by the exchange matrix, uses J W^{-1} J, i.e. index i carries
/// weight w_{M-i}.
inline LowRankCorrection build_correction(const WeightVector& w, int M) {
    require(static_cast<int>(w.size()) == M + 1, "weight vector length must be M+1");
    LowRankCorrection corr;
    for (int p = 0; p <= M; ++p)
        if (w.weights[p] != 1.0) {
            corr.positions.push_back({p, 0});
            corr.values.push_back(1.0 - 1.0 / w.weights[p]);
        }
    for (int i = 0; i <= M; ++i)
        if (w.weights[M - i] != 1.0) {
            corr.positions.push_back({i, 1});
            corr.values.push_back(1.0 - 1.0 / w.weights[M - i]);
        }
    corr.r = static_cast<int>(corr.positions.size());
    const int N = 2 * (M + 1);
    corr.U = Eigen::MatrixXcd::Zero(N, corr.r);
    corr.V = Eigen::MatrixXcd::Zero(corr.r, N);
    for (int a = 0; a < corr.r; ++a) {
        corr.U(corr.positions[a].flat(), a) = 1.0;
        corr.V(a, corr.positions[a].flat()) = corr.values[a];
    }
    return corr;
}

struct CapacitySolution {
    Eigen::VectorXcd z;
    double condition = 1.0;
};

/// Step 3: solve (E_r - V Z) z = V y with V Z and V y supplied.
inline CapacitySolution solve_capacity(const Eigen::MatrixXcd& VZ, const Eigen::VectorXcd& Vy, int size_hint = 0) {
    const auto r = VZ.rows();
    CapacitySolution out;
    if (r == 0) {
        out.z = Eigen::VectorXcd(0);
        return out;
    }
    const Eigen::MatrixXcd C = Eigen::MatrixXcd::Identity(r, r) - VZ;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(C);
    const double rcond = lu.rcond();
    out.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(out.condition <= kMaxCapacityCondition))
        throw Breakdown("singular Woodbury capacity matrix", size_hint, out.condition);
    out.z = lu.solve(Vy);
    return out;
}

/// Capacity solve for a diagonal correction given y and Z sampled at the
/// correction positions: VZ(a, b) = d_a Z_b[pos_a], Vy(a) = d_a y[pos_a].
inline CapacitySolution solve_diagonal_capacity(std::span<const double> values, const Eigen::MatrixXcd& Z_at_positions,
                                                const Eigen::VectorXcd& y_at_positions, int size_hint = 0) {
    const auto r = static_cast<Eigen::Index>(values.size());
    Eigen::MatrixXcd VZ(r, r);
    Eigen::VectorXcd Vy(r);
    for (Eigen::Index a = 0; a < r; ++a) {
        VZ.row(a) = values[a] * Z_at_positions.row(a);
        Vy(a) = values[a] * y_at_positions(a);
    }
    return solve_capacity(VZ, Vy, size_hint);
}

/// x = (A - U V)^{-1} b. `solve_A` maps a vector to A^{-1} times it and is
/// called exactly r + 1 times.
template <typename SolveA>
Eigen::VectorXcd woodbury_solve(SolveA&& solve_A, const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& V,
                                const Eigen::VectorXcd& b) {
    require(U.cols() == V.rows() && U.rows() == V.cols() && U.rows() == b.size(),
            "Woodbury factor shapes do not match");
    const Eigen::VectorXcd y = solve_A(b);
    const auto r = U.cols();
    if (r == 0) return y;
    Eigen::MatrixXcd Z(U.rows(), r);
    for (Eigen::Index c = 0; c < r; ++c) Z.col(c) = solve_A(Eigen::VectorXcd(U.col(c)));
    const CapacitySolution cap = solve_capacity(V * Z, V * y, static_cast<int>(b.size()));
    return y + Z * cap.z;
}

template <typename SolveA>
Eigen::VectorXcd woodbury_solve(SolveA&& solve_A, const LowRankCorrection& corr, const Eigen::VectorXcd& b) {
    return woodbury_solve(std::forward<SolveA>(solve_A), corr.U, corr.V, b);
}

/// Interleaved flat layout [y_0, z_0, y_1, z_1, ...] <-> block vector.
inline Eigen::VectorXcd flatten(const BlockVector& x) {
    Eigen::VectorXcd out(2 * static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) out.segment<2>(2 * static_cast<Eigen::Index>(i)) = x[i];
    return out;
}

inline BlockVector unflatten(const Eigen::VectorXcd& x) {
    require(x.size() % 2 == 0, "interleaved vector must have even length");
    BlockVector out(static_cast<std::size_t>(x.size() / 2));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.segment<2>(2 * static_cast<Eigen::Index>(i));
    return out;
}

/// A-solver backed by the block Levinson recursion (one fresh recursion per call).
inline auto levinson_solver(const BlockToeplitzSystem& sys) {
    return [&sys](const Eigen::VectorXcd& b) { return flatten(levinson_solve(sys, {unflatten(b)}).front()); };
}

}  // namespace inft
