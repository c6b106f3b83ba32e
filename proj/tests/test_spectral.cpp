#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "inft/spectral.hpp"
#include "inft/zs_oracle.hpp"

using namespace inft;

namespace {

SpectralData empty_data(int nodes = 65) {
    SpectralData sd;
    sd.reflection.assign(nodes, cd{});
    return sd;
}

SpectralData soliton_data(cd zeta, cd norm, int nodes = 65) {
    SpectralData sd = empty_data(nodes);
    sd.discrete.push_back({zeta, norm});
    return sd;
}

// A smooth reflection coefficient with a discrete pair, for algebraic checks.
SpectralData synthetic_data(int nodes = 129) {
    SpectralData sd = empty_data(nodes);
    for (std::size_t j = 0; j < sd.nodes(); ++j) {
        const double x = sd.xi(j);
        sd.reflection[j] = cd(0.3, -0.2) * std::exp(-0.2 * x * x) * std::polar(1.0, 0.7 * x);
    }
    sd.discrete.push_back({cd(0.2, 0.7), cd(-0.4, 0.9)});
    return sd;
}

}  // namespace

TEST(KernelValue, ZeroData) {
    const auto sd = empty_data();
    const auto w = gregory_weights(3, 64, Sidedness::two_sided);
    for (double t : {-3.0, 0.0, 1.7}) EXPECT_EQ(kernel_value(sd, t, w), cd{});
}

TEST(KernelValue, SingleDiscretePairAtZero) {
    const auto sd = soliton_data(cd(0.0, 0.5), cd(0.0, 1.0));
    const auto w = gregory_weights(1, 64, Sidedness::two_sided);
    const cd v = kernel_value(sd, 0.0, w);
    EXPECT_NEAR(v.real(), 1.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(KernelValue, DiscreteOnlyMatchesExponentialSum) {
    SpectralData sd = empty_data();
    sd.discrete = {{cd(0.3, 1.1), cd(0.5, -2.0)}, {cd(-1.0, 0.4), cd(-0.1, 0.3)}};
    const KernelEvaluator ev(sd, 6);
    for (double t : {-4.0, -0.5, 0.0, 2.25}) {
        cd expected{};
        for (const auto& d : sd.discrete) expected += -cd(0, 1) * d.norm * std::exp(-cd(0, 1) * d.zeta * t);
        EXPECT_LT(std::abs(ev(t) - expected), 1e-14 * std::max(1.0, std::abs(expected))) << t;
    }
}

TEST(KernelValue, Linearity) {
    const SpectralData full = synthetic_data();
    SpectralData cont = full, disc = full;
    cont.discrete.clear();
    std::fill(disc.reflection.begin(), disc.reflection.end(), cd{});
    const KernelEvaluator f(full, 4), c(cont, 4), d(disc, 4);
    for (double t : {-2.0, 0.0, 0.3, 5.0}) EXPECT_LT(std::abs(f(t) - c(t) - d(t)), 1e-15);
}

TEST(KernelValue, RejectsBadInput) {
    auto sd = synthetic_data();
    const auto w = gregory_weights(2, 64, Sidedness::two_sided);
    EXPECT_THROW(kernel_value(sd, 0.0, w), InvalidArgument);
    sd.discrete.push_back({cd(1.0, -0.1), cd(1.0, 0.0)});
    const auto ok = gregory_weights(2, static_cast<int>(sd.nodes()) - 1, Sidedness::two_sided);
    EXPECT_THROW(kernel_value(sd, 0.0, ok), InvalidArgument);
}

// Chirped-sech data on the default grid against the same integrand on a grid
// 16 times finer. Both grids are filled by the same (cheap) oracle setting, so
// the comparison isolates the xi quadrature.
TEST(KernelValue, ChirpedSechMatchesFineGrid) {
    ForwardOptions opt;
    opt.richardson = false;
    opt.max_step = 0.05;
    const auto spec = SignalSpec::chirped_sech_of(5.2, 4.0);
    const ForwardScatterer fs(spec, Dispersion::anomalous, opt);
    const auto coarse = to_spectral_data(forward_scatter(fs, xi_grid(40.0, 2049)), -20.0, 20.0);
    const auto fine = to_spectral_data(forward_scatter(fs, xi_grid(40.0, 16 * 2048 + 1)), -20.0, 20.0);
    const KernelEvaluator c(coarse, 6), f(fine, 6);
    const cd vc = c(0.0), vf = f(0.0);
    EXPECT_LT(std::abs(vc - vf), 1e-8 * std::max(1.0, std::abs(vf)));
}

TEST(KernelTrack, ZeroSpectrumTrack) {
    const auto sd = empty_data();
    const KernelEvaluator ev(sd, 1);
    auto kt = init_track(ev, -1.0, 0.1, 5);
    for (const cd& v : kt.omega) EXPECT_EQ(v, cd{});
    advance_track_in_place(kt, ev);
    for (const cd& v : kt.omega) EXPECT_EQ(v, cd{});
}

TEST(KernelTrack, SolitonInitTrack) {
    const cd zeta(0.0, 0.5), norm(0.3, -0.8);
    const auto sd = soliton_data(zeta, norm);
    const auto w = gregory_weights(1, 64, Sidedness::two_sided);
    const auto kt = init_track(sd, 0.0, 0.1, 4, w);
    ASSERT_EQ(kt.omega.size(), 9u);
    for (int k = 0; k <= 8; ++k) {
        const cd expected = -cd(0, 1) * norm * std::exp(-cd(0, 1) * zeta * (-k * 0.1));
        EXPECT_LT(std::abs(kt.omega[k] - expected), 1e-15);
    }
}

TEST(KernelTrack, InitRejectsBadArguments) {
    const KernelEvaluator ev(empty_data(), 1);
    EXPECT_THROW(init_track(ev, 0.0, 0.1, 0), InvalidArgument);
    EXPECT_THROW(init_track(ev, 0.0, -0.1, 3), InvalidArgument);
}

TEST(KernelTrack, AdvanceEqualsFreshInit) {
    const auto sd = synthetic_data();
    const KernelEvaluator ev(sd, 5);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> t0(-8.0, 4.0), step(0.01, 0.3);
    std::uniform_int_distribution<int> size(1, 12);
    for (int trial = 0; trial < 120; ++trial) {
        const double h = step(rng);
        const int M = size(rng);
        auto kt = init_track(ev, t0(rng), h, M);
        const auto before = kt.omega;
        advance_track_in_place(kt, ev);
        const auto fresh = init_track(ev, kt.t, h, M);
        for (int k = 0; k <= 2 * M; ++k) {
            EXPECT_LT(std::abs(kt.omega[k] - fresh.omega[k]), 1e-13 * std::max(1.0, std::abs(fresh.omega[k])));
            if (k > 0) EXPECT_EQ(kt.omega[k], before[k - 1]);
        }
    }
}

TEST(KernelTrack, AdvanceByValueMatchesInPlace) {
    const auto sd = soliton_data(cd(0.1, 0.6), cd(0.0, -1.0));
    const auto w = gregory_weights(2, 64, Sidedness::two_sided);
    const auto kt = init_track(sd, -2.0, 0.2, 3, w);
    const auto a = advance_track(kt, sd, w);
    auto b = kt;
    advance_track_in_place(b, KernelEvaluator(sd, w));
    EXPECT_EQ(a.omega, b.omega);
    EXPECT_DOUBLE_EQ(a.t, -1.9);
}

TEST(KernelCache, ReplaysOnDemandValues) {
    const auto sd = synthetic_data();
    const KernelEvaluator ev(sd, 3);
    const KernelCache cache(ev, -5.0, 0.05, 40);
    for (int k = 0; k < cache.size(); ++k) EXPECT_EQ(cache.at_index(k), ev(-5.0 + 0.05 * k));
}

TEST(TimeReverse, EvenSignalsKeepTheirData) {
    ForwardOptions opt;
    opt.max_step = 0.05;
    const auto oracle = [&](const SignalSamples& s) {
        return spectrum_of(*s.closed_form, Dispersion::anomalous, 20.0, 65, opt);
    };
    for (const auto& spec : {SignalSpec::sech_of(1.0), SignalSpec::rectangle_of(1.0, 2.0)}) {
        const auto sig = make_signal(spec, 20.0, 64);
        const auto fwd = oracle(sig);
        const auto rev = time_reverse(sig, oracle);
        EXPECT_EQ(rev.side, Side::right);
        ASSERT_EQ(fwd.nodes(), rev.nodes());
        for (std::size_t j = 0; j < fwd.nodes(); ++j)
            EXPECT_LT(std::abs(fwd.reflection[j] - rev.reflection[j]), 1e-10);
        ASSERT_EQ(fwd.discrete.size(), rev.discrete.size());
        for (std::size_t j = 0; j < fwd.discrete.size(); ++j) {
            EXPECT_LT(std::abs(fwd.discrete[j].zeta - rev.discrete[j].zeta), 1e-9);
            EXPECT_LT(std::abs(fwd.discrete[j].norm - rev.discrete[j].norm), 1e-7);
        }
    }
}

TEST(SpectralData, Validation) {
    SpectralData sd = empty_data();
    EXPECT_NO_THROW(sd.validate());
    sd.dispersion = Dispersion::normal;
    sd.discrete.push_back({cd(0.0, 1.0), cd(1.0, 0.0)});
    EXPECT_THROW(sd.validate(), InvalidArgument);
    SpectralData one;
    one.reflection = {cd{}};
    EXPECT_THROW(one.validate(), InvalidArgument);
    EXPECT_NEAR(empty_data(2049).xi_step(), 40.0 / 2048, 1e-15);
}
