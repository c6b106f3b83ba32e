#pragma once

// Gregory quadrature on uniform grids.
//
// The rule is the trapezoid rule with its first n weights at a corrected edge
// replaced by endpoint-corrected values. The corrections are obtained from the
// endpoint moment conditions of the Euler-Maclaurin expansion: the edge weights
// reproduce the endpoint contribution exactly for every polynomial of degree
// below n. Two-sided rules apply the correction at both ends (palindromic);
// one-sided rules apply it at one end and leave the other endpoint at weight 1,
// which is only meaningful for integrands that vanish there.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "inft/error.hpp"

namespace inft {

enum class Sidedness { two_sided, left_sided, right_sided };

inline constexpr int kMaxGregoryOrder = 6;

struct WeightVector {
    int n = 1;
    Sidedness sidedness = Sidedness::two_sided;
    std::vector<double> weights;
    int exact_degree = 1;

    std::size_t size() const noexcept { return weights.size(); }
    double operator[](std::size_t j) const { return weights[j]; }
};

namespace detail {

// Bernoulli numbers B_0..B_max with B_1 = -1/2.
inline std::vector<long double> bernoulli_numbers(int max_index) {
    std::vector<long double> b(max_index + 1, 0.0L);
    b[0] = 1.0L;
    for (int m = 1; m <= max_index; ++m) {
        long double acc = 0.0L;
        long double binom = 1.0L;  // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            acc += binom * b[k];
            binom = binom * static_cast<long double>(m + 1 - k) / static_cast<long double>(k + 1);
        }
        b[m] = -acc / static_cast<long double>(m + 1);
    }
    return b;
}

// Edge weights c_0..c_{n-1} (c_j = 1 + a_j) solving
//   sum_j a_j j^k = mu_k,  k = 0..n-1,
// where mu_k is minus the left-endpoint Euler-Maclaurin term for x^k:
//   mu_0 = -1/2, mu_k = B_{k+1}/(k+1) for odd k, 0 for even k >= 2.
inline std::vector<double> solve_edge_weights(int n) {
    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const auto bern = bernoulli_numbers(n + 1);
    Mat vander(n, n);
    Vec moments(n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            long double p = 1.0L;
            for (int e = 0; e < k; ++e) p *= static_cast<long double>(j);
            vander(k, j) = p;
        }
        if (k == 0)
            moments(k) = -0.5L;
        else if (k % 2 == 1)
            moments(k) = bern[k + 1] / static_cast<long double>(k + 1);
        else
            moments(k) = 0.0L;
    }
    const Vec corr = vander.partialPivLu().solve(moments);
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = static_cast<double>(1.0L + corr(j));
    return out;
}

inline const std::array<std::vector<double>, kMaxGregoryOrder + 1>& edge_table() {
    static const auto table = [] {
        std::array<std::vector<double>, kMaxGregoryOrder + 1> t;
        for (int n = 1; n <= kMaxGregoryOrder; ++n) t[n] = solve_edge_weights(n);
        return t;
    }();
    return table;
}

}  // namespace detail

/// The n non-unit weights of a corrected edge, ordered from the endpoint inward.
inline const std::vector<double>& gregory_edge_weights(int n) {
    require(n >= 1 && n <= kMaxGregoryOrder, "Gregory order must be in 1..6");
    return detail::edge_table()[n];
}

/// Highest monomial degree integrated exactly. Two-sided rules gain the next
/// odd degree from symmetry; one-sided rules are exact to n-1 at the corrected
/// edge.
inline int gregory_exact_degree(int n, Sidedness sidedness) {
    if (sidedness == Sidedness::two_sided) return 2 * ((n + 1) / 2) - 1;
    return n - 1;
}

/// Diagonal of the Gregory weight matrix on M+1 nodes.
inline WeightVector gregory_weights(int n, int M, Sidedness sidedness) {
    require(n >= 1 && n <= kMaxGregoryOrder, "Gregory order must be in 1..6");
    if (sidedness == Sidedness::two_sided)
        require(M >= 2 * n, "two-sided Gregory rule needs M >= 2n subintervals");
    else
        require(M >= n, "one-sided Gregory rule needs M >= n subintervals");

    const auto& edge = gregory_edge_weights(n);
    WeightVector w;
    w.n = n;
    w.sidedness = sidedness;
    w.exact_degree = gregory_exact_degree(n, sidedness);
    w.weights.assign(static_cast<std::size_t>(M) + 1, 1.0);
    const bool left = sidedness != Sidedness::right_sided;
    const bool right = sidedness != Sidedness::left_sided;
    for (int j = 0; j < n; ++j) {
        if (left) w.weights[j] = edge[j];
        if (right) w.weights[M - j] = edge[j];
    }
    return w;
}

/// h * sum_j w_j f_j
template <typename T>
T integrate(std::span<const T> samples, double h, const WeightVector& w) {
    require(samples.size() == w.size(), "sample count does not match weight count");
    T acc{};
    for (std::size_t j = 0; j < samples.size(); ++j) acc += w.weights[j] * samples[j];
    return acc * h;
}

inline std::complex<double> integrate(const std::vector<std::complex<double>>& samples, double h,
                                      const WeightVector& w) {
    return integrate(std::span<const std::complex<double>>(samples), h, w);
}

inline double integrate(const std::vector<double>& samples, double h, const WeightVector& w) {
    return integrate(std::span<const double>(samples), h, w);
}

}  // namespace inft
