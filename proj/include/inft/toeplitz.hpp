#pragma once

// Block Levinson recursion for block-Toeplitz systems with 2x2 blocks,
//
//   sum_j t_{j-i} x_j = f_i,   i, j = 0..m,
//
// grown one block row/column at a time (bordering). The state keeps the
// forward predictor F (A F = E_0) and the backward predictor B (A B = E_m),
// each a column of 2x2 blocks, and carries any number of right-hand sides
// through the same predictor recursion.
//
// Besides ordinary right-hand sides, "reversed" right-hand sides solve the
// block-reversed system J A J (blocks t_{i-j}) whose leading sections grow
// together with A. For a unit right-hand side e_i this yields A^{-1} e_{m-i},
// i.e. columns of A^{-1} anchored to the moving trailing edge. Its backward
// predictor is J F, so no second predictor recursion is needed.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "inft/error.hpp"
#include "inft/types.hpp"

namespace inft {

using Block = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using BlockVector = std::vector<Vec2>;

inline constexpr double kMaxPivotCondition = 1e12;

/// Frobenius-norm condition number of a 2x2 block, in closed form.
inline double block_condition(const Block& m) {
    const double det = std::abs(m.determinant());
    const double fro2 = m.squaredNorm();
    if (det == 0.0) return std::numeric_limits<double>::infinity();
    return fro2 / det;
}

/// Closed-form inverse of a 2x2 block; throws Breakdown when the condition
/// estimate exceeds `max_condition`.
inline Block checked_inverse(const Block& m, int size, double max_condition) {
    const double cond = block_condition(m);
    if (!(cond <= max_condition)) throw Breakdown("singular leading block minor", size, cond);
    const cd det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Block inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / det;
}

/// GLME block t_d = [[delta_d0, s conj(g_{-d})], [g_d, delta_d0]] with s = -1
/// for anomalous and +1 for normal dispersion.
inline Block glme_block(cd g_d, cd g_minus_d, Dispersion dispersion, bool diagonal) {
    Block b;
    const double unit = diagonal ? 1.0 : 0.0;
    b << unit, zs_sign(dispersion) * std::conj(g_minus_d), g_d, unit;
    return b;
}

/// Blocks t_{-M}..t_{M} of an (M+1)x(M+1) block-Toeplitz matrix.
class BlockToeplitzSystem {
public:
    BlockToeplitzSystem() = default;
    explicit BlockToeplitzSystem(int M) : M_(M), blocks_(2 * static_cast<std::size_t>(M) + 1, Block::Zero()) {
        require(M >= 0, "block-Toeplitz size must be non-negative");
    }

    int M() const noexcept { return M_; }
    int block_rows() const noexcept { return M_ + 1; }

    Block& block(int d) { return blocks_.at(static_cast<std::size_t>(d + M_)); }
    const Block& block(int d) const { return blocks_.at(static_cast<std::size_t>(d + M_)); }

    /// sum_j t_{j-i} x_j
    BlockVector apply(const BlockVector& x) const {
        require(static_cast<int>(x.size()) == block_rows(), "vector length does not match system size");
        BlockVector y(x.size(), Vec2::Zero());
        for (int i = 0; i <= M_; ++i)
            for (int j = 0; j <= M_; ++j) y[i] += block(j - i) * x[j];
        return y;
    }

private:
    int M_ = 0;
    std::vector<Block> blocks_;
};

class LevinsonState {
public:
    explicit LevinsonState(const Block& t0, double max_condition = kMaxPivotCondition)
        : max_condition_(max_condition) {
        const Block inv = checked_inverse(t0, 1, max_condition_);
        pivot_conditions_.push_back(block_condition(t0));
        t_pos_.push_back(t0);
        t_neg_.push_back(t0);
        forward_.push_back(inv);
        backward_.push_back(inv);
    }

    int block_rows() const noexcept { return static_cast<int>(forward_.size()); }

    /// Tracks A x = f; `f0` is the first rhs block. Must be called at size 1.
    int add_rhs(const Vec2& f0) {
        require(block_rows() == 1, "right-hand sides are registered before the first extend");
        solutions_.push_back({forward_[0] * f0});
        return static_cast<int>(solutions_.size()) - 1;
    }

    /// Tracks (J A J) x = f for the block-reversed system.
    int add_reversed_rhs(const Vec2& f0) {
        require(block_rows() == 1, "right-hand sides are registered before the first extend");
        reversed_.push_back({forward_[0] * f0});
        return static_cast<int>(reversed_.size()) - 1;
    }

    int rhs_count() const noexcept { return static_cast<int>(solutions_.size()); }
    int reversed_rhs_count() const noexcept { return static_cast<int>(reversed_.size()); }

    /// Borders the system with t_{-(m+1)} and t_{m+1}; `rhs` / `reversed_rhs`
    /// hold the new block of every tracked right-hand side in registration order.
    void extend(const Block& t_minus, const Block& t_plus, std::span<const Vec2> rhs,
                std::span<const Vec2> reversed_rhs) {
        require(static_cast<int>(rhs.size()) == rhs_count(), "one new rhs block per tracked rhs");
        require(static_cast<int>(reversed_rhs.size()) == reversed_rhs_count(),
                "one new rhs block per tracked reversed rhs");
        const int s = block_rows();  // index of the new block row
        t_neg_.push_back(t_minus);
        t_pos_.push_back(t_plus);

        Block ef = Block::Zero();
        Block eb = Block::Zero();
        for (int j = 0; j < s; ++j) {
            ef.noalias() += t_neg_[s - j] * forward_[j];
            eb.noalias() += t_pos_[j + 1] * backward_[j];
        }
        const Block I = Block::Identity();
        const Block pivot = I - eb * ef;
        pivot_conditions_.push_back(block_condition(pivot));
        const Block alpha = checked_inverse(pivot, s + 1, max_condition_);
        const Block delta = checked_inverse(I - ef * eb, s + 1, max_condition_);
        const Block beta = -ef * alpha;
        const Block gamma = -eb * delta;

        forward_.push_back(Block::Zero());
        backward_.push_back(Block::Zero());
        Block prev_b = Block::Zero();  // old B[j-1]
        for (int j = 0; j <= s; ++j) {
            const Block f_old = forward_[j];
            const Block b_old = backward_[j];
            forward_[j] = f_old * alpha + prev_b * beta;
            backward_[j] = f_old * gamma + prev_b * delta;
            prev_b = b_old;
        }

        for (std::size_t r = 0; r < solutions_.size(); ++r) {
            auto& x = solutions_[r];
            Vec2 e = Vec2::Zero();
            for (int j = 0; j < s; ++j) e.noalias() += t_neg_[s - j] * x[j];
            const Vec2 c = rhs[r] - e;
            x.push_back(Vec2::Zero());
            for (int j = 0; j <= s; ++j) x[j].noalias() += backward_[j] * c;
        }
        for (std::size_t r = 0; r < reversed_.size(); ++r) {
            auto& x = reversed_[r];
            Vec2 e = Vec2::Zero();
            for (int j = 0; j < s; ++j) e.noalias() += t_pos_[s - j] * x[j];
            const Vec2 c = reversed_rhs[r] - e;
            x.push_back(Vec2::Zero());
            for (int j = 0; j <= s; ++j) x[j].noalias() += forward_[s - j] * c;
        }
    }

    const BlockVector& solution(int id) const { return solutions_.at(id); }

    /// Solution of the reversed system, in reversed-system index order.
    const BlockVector& reversed_solution(int id) const { return reversed_.at(id); }

    /// The same solution flipped back: for rhs e_i this is A^{-1} e_{m-i}.
    BlockVector reversed_solution_flipped(int id) const {
        const auto& x = reversed_.at(id);
        return BlockVector(x.rbegin(), x.rend());
    }

    const std::vector<Block>& forward() const noexcept { return forward_; }
    const std::vector<Block>& backward() const noexcept { return backward_; }
    const std::vector<double>& pivot_conditions() const noexcept { return pivot_conditions_; }

    /// t_d for |d| < block_rows()
    const Block& block(int d) const { return d >= 0 ? t_pos_.at(d) : t_neg_.at(-d); }

private:
    double max_condition_;
    std::vector<Block> t_pos_;  // t_0, t_1, ...
    std::vector<Block> t_neg_;  // t_0, t_{-1}, ...
    std::vector<Block> forward_;
    std::vector<Block> backward_;
    std::vector<BlockVector> solutions_;
    std::vector<BlockVector> reversed_;
    std::vector<double> pivot_conditions_;
};

/// Builds the state for sys's leading block and borders it up to full size.
inline LevinsonState levinson_extend_to(const BlockToeplitzSystem& sys, const std::vector<BlockVector>& rhs,
                                        double max_condition = kMaxPivotCondition) {
    for (const auto& f : rhs)
        require(static_cast<int>(f.size()) == sys.block_rows(), "rhs length does not match system size");
    LevinsonState state(sys.block(0), max_condition);
    for (const auto& f : rhs) state.add_rhs(f[0]);
    std::vector<Vec2> fresh(rhs.size());
    for (int s = 1; s <= sys.M(); ++s) {
        for (std::size_t r = 0; r < rhs.size(); ++r) fresh[r] = rhs[r][s];
        state.extend(sys.block(-s), sys.block(s), fresh, {});
    }
    return state;
}

/// Solves sum_j t_{j-i} x_j = f_i for every rhs in one predictor recursion.
inline std::vector<BlockVector> levinson_solve(const BlockToeplitzSystem& sys, const std::vector<BlockVector>& rhs,
                                               double max_condition = kMaxPivotCondition) {
    const LevinsonState state = levinson_extend_to(sys, rhs, max_condition);
    std::vector<BlockVector> out;
    out.reserve(rhs.size());
    for (int r = 0; r < state.rhs_count(); ++r) out.push_back(state.solution(r));
    return out;
}

}  // namespace inft
