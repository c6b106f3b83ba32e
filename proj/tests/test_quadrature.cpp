#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "inft/quadrature.hpp"
#include "support/gregory_reference.hpp"

using namespace inft;
using namespace inft::reference;

namespace {

std::vector<double> edge(const WeightVector& w, int count) { return {w.weights.begin(), w.weights.begin() + count}; }

}  // namespace

TEST(GregoryWeights, TrapezoidTwoSided) {
    const auto w = gregory_weights(1, 4, Sidedness::two_sided);
    const std::vector<double> expected{0.5, 1.0, 1.0, 1.0, 0.5};
    ASSERT_EQ(w.weights.size(), expected.size());
    for (std::size_t j = 0; j < expected.size(); ++j) EXPECT_DOUBLE_EQ(w.weights[j], expected[j]);
}

TEST(GregoryWeights, PrintedEdgePatterns) {
    const std::vector<std::vector<double>> printed{
        {1.0 / 2},
        {5.0 / 12, 13.0 / 12},
        {3.0 / 8, 7.0 / 6, 23.0 / 24},
        {251.0 / 720, 299.0 / 240, 211.0 / 240, 739.0 / 720},
    };
    for (int n = 1; n <= 4; ++n) {
        const auto& e = gregory_edge_weights(n);
        for (int j = 0; j < n; ++j) EXPECT_NEAR(e[j], printed[n - 1][j], 1e-15) << "n=" << n << " j=" << j;
    }
}

TEST(GregoryWeights, FourTwoSidedLayout) {
    const auto w = gregory_weights(4, 10, Sidedness::two_sided);
    ASSERT_EQ(w.size(), 11u);
    const std::vector<double> e{251.0 / 720, 299.0 / 240, 211.0 / 240, 739.0 / 720};
    for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(w[j], e[j], 1e-15);
        EXPECT_NEAR(w[10 - j], e[j], 1e-15);
    }
    for (int j = 4; j <= 6; ++j) EXPECT_EQ(w[j], 1.0);
}

TEST(GregoryWeights, TwoLeftSided) {
    const auto w = gregory_weights(2, 6, Sidedness::left_sided);
    const std::vector<double> expected{5.0 / 12, 13.0 / 12, 1, 1, 1, 1, 1};
    ASSERT_EQ(w.size(), expected.size());
    for (std::size_t j = 0; j < expected.size(); ++j) EXPECT_NEAR(w[j], expected[j], 1e-15);
}

TEST(GregoryWeights, RightSidedMirrorsLeft) {
    for (int n = 1; n <= kMaxGregoryOrder; ++n) {
        const auto l = gregory_weights(n, 3 * n, Sidedness::left_sided);
        const auto r = gregory_weights(n, 3 * n, Sidedness::right_sided);
        for (int j = 0; j <= 3 * n; ++j) EXPECT_EQ(l[j], r[3 * n - j]);
    }
}

TEST(GregoryWeights, StructuralInvariants) {
    for (int n = 1; n <= kMaxGregoryOrder; ++n) {
        const int M = 2 * n + 5;
        const auto w = gregory_weights(n, M, Sidedness::two_sided);
        for (int j = 0; j <= M; ++j) {
            EXPECT_GT(w[j], 0.0);
            EXPECT_EQ(w[j], w[M - j]) << "palindromic, n=" << n;
            if (j >= n && j <= M - n) EXPECT_EQ(w[j], 1.0);
        }
        const int k = (n + 1) / 2;
        EXPECT_EQ(w.exact_degree, 2 * k - 1);
    }
}

TEST(GregoryWeights, RejectsBadArguments) {
    EXPECT_THROW(gregory_weights(0, 10, Sidedness::two_sided), InvalidArgument);
    EXPECT_THROW(gregory_weights(7, 40, Sidedness::two_sided), InvalidArgument);
    EXPECT_THROW(gregory_weights(3, 5, Sidedness::two_sided), InvalidArgument);
    EXPECT_THROW(gregory_weights(3, 2, Sidedness::left_sided), InvalidArgument);
    EXPECT_NO_THROW(gregory_weights(3, 6, Sidedness::two_sided));
    EXPECT_NO_THROW(gregory_weights(3, 3, Sidedness::left_sided));
}

TEST(GregoryWeights, FiveTwoSidedExactToDegreeFive) {
    const int M = 12;
    const double h = 0.25;
    const auto w = gregory_weights(5, M, Sidedness::two_sided);
    for (int k = 0; k <= 5; ++k) {
        std::vector<double> f(M + 1);
        for (int j = 0; j <= M; ++j) f[j] = std::pow(j * h, k);
        const double exact = std::pow(M * h, k + 1) / (k + 1);
        EXPECT_NEAR(integrate(f, h, w), exact, 1e-13 * exact) << "degree " << k;
    }
}

TEST(GregoryWeights, MonomialExactnessTwoSided) {
    for (int n = 1; n <= kMaxGregoryOrder; ++n)
        for (int M : {2 * n, 2 * n + 1, 3 * n + 4})
            for (int k = 0; k <= gregory_exact_degree(n, Sidedness::two_sided); ++k)
                EXPECT_LT(two_sided_monomial_error(n, M, k), 1e-12) << "n=" << n << " M=" << M << " k=" << k;
}

TEST(GregoryWeights, MonomialExactnessOneSided) {
    for (int n = 1; n <= kMaxGregoryOrder; ++n)
        for (auto side : {Sidedness::left_sided, Sidedness::right_sided}) {
            EXPECT_EQ(gregory_weights(n, 4000, side).exact_degree, n - 1);
            for (int k = 0; k < n; ++k) EXPECT_LT(one_sided_monomial_error(n, side, k), 1e-12) << "n=" << n << " k=" << k;
        }
}

TEST(Integrate, ConstantGivesLength) {
    for (int n = 1; n <= kMaxGregoryOrder; ++n) {
        const int M = 2 * n + 3;
        const double h = 0.3;
        for (auto side : {Sidedness::two_sided, Sidedness::left_sided}) {
            const auto w = gregory_weights(n, M, side);
            const std::vector<double> one(M + 1, 1.0);
            // one-sided rules drop the far endpoint's 1/2 correction
            const double expected = side == Sidedness::two_sided ? M * h : (M + 0.5) * h;
            EXPECT_NEAR(integrate(one, h, w), expected, 1e-13);
        }
    }
}

TEST(Integrate, CubicWithFourCorrections) {
    const int M = 16;
    const auto w = gregory_weights(4, M, Sidedness::two_sided);
    std::vector<double> f(M + 1);
    for (int j = 0; j <= M; ++j) f[j] = std::pow(static_cast<double>(j) / M, 3);
    EXPECT_NEAR(integrate(f, 1.0 / M, w), 0.25, 1e-14);
}

TEST(Integrate, ComplexSamples) {
    const int M = 8;
    const auto w = gregory_weights(2, M, Sidedness::two_sided);
    std::vector<std::complex<double>> f(M + 1, {1.0, -2.0});
    const auto v = integrate(f, 0.5, w);
    EXPECT_NEAR(v.real(), 4.0, 1e-14);
    EXPECT_NEAR(v.imag(), -8.0, 1e-14);
}

TEST(Integrate, LengthMismatch) {
    const auto w = gregory_weights(1, 4, Sidedness::two_sided);
    EXPECT_THROW(integrate(std::vector<double>(3, 1.0), 0.1, w), InvalidArgument);
}

// e^x on [0, 1]: the n = 6 error falls by about 2^7 per halving.
TEST(Integrate, SixCorrectionsConvergence) {
    const auto err = [](int M) {
        const auto w = gregory_weights(6, M, Sidedness::two_sided);
        std::vector<double> f(M + 1);
        for (int j = 0; j <= M; ++j) f[j] = std::exp(static_cast<double>(j) / M);
        return std::abs(integrate(f, 1.0 / M, w) - (std::exp(1.0) - 1.0));
    };
    const double ratio = err(16) / err(32);
    EXPECT_GT(ratio, 0.8 * 128.0);
    EXPECT_LT(ratio, 1.25 * 128.0);
}

TEST(Integrate, ConvergenceRateMatchesDegree) {
    for (int n = 1; n <= kMaxGregoryOrder; ++n) {
        const auto err = [n](int M) {
            const auto w = gregory_weights(n, M, Sidedness::two_sided);
            std::vector<double> f(M + 1);
            for (int j = 0; j <= M; ++j) f[j] = std::cos(2.0 * j / M);
            return std::abs(integrate(f, 1.0 / M, w) - std::sin(2.0) / 2.0);
        };
        const int deg = gregory_exact_degree(n, Sidedness::two_sided);
        EXPECT_GE(err(24) / err(48), 0.8 * std::pow(2.0, deg + 1)) << "n=" << n;
    }
}
