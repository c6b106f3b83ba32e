#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "inft/experiment.hpp"

using namespace inft;

namespace {

// Soliton fixture with analytic spectra: cheap and exact.
ExperimentConfig soliton_config() {
    ExperimentConfig cfg;
    cfg.signal = SignalSpec::soliton_of(cd(0.0, 0.5), cd(0.0, -1.0));
    cfg.ladder = {128, 256};
    cfg.schemes = {SchemeSpec::parse("TIB"), SchemeSpec::parse("G4")};
    cfg.xi_nodes = 65;
    cfg.L = 40.0;
    return cfg;
}

SpectraPair soliton_spectra(const ExperimentConfig& cfg) {
    SpectraPair p;
    p.left.reflection.assign(cfg.xi_nodes, cd{});
    p.left.discrete = {{cd(0.0, 0.5), cd(0.0, -1.0)}};
    p.right = p.left;
    p.right.side = Side::right;
    return p;
}

// Table text without the timing columns (the last three).
std::string strip_timing(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        for (int k = 0; k < 3; ++k) line = line.substr(0, line.rfind(','));
        out += line + '\n';
    }
    return out;
}

}  // namespace

TEST(Metrics, ExactReferenceGivesZero) {
    RecoveredPotential rp;
    const auto spec = SignalSpec::sech_of(1.0);
    for (int j = 0; j <= 10; ++j) {
        rp.t.push_back(-5.0 + j);
        rp.q.push_back(spec(rp.t.back()));
    }
    const auto eps = pointwise_error(rp, spec);
    for (double e : eps) EXPECT_EQ(e, 0.0);
    EXPECT_EQ(rmse(eps), 0.0);
}

TEST(Metrics, OrderOfFourfoldDrop) { EXPECT_DOUBLE_EQ(approximation_order(1e-2, 2.5e-3), 2.0); }

TEST(Metrics, ZeroReferenceRefused) {
    RecoveredPotential rp;
    rp.t = {0.0, 1.0};
    rp.q = {cd{}, cd{}};
    EXPECT_THROW(pointwise_error(rp, SignalSpec{}), InvalidArgument);
}

TEST(Metrics, Median) {
    EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_DOUBLE_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
    EXPECT_DOUBLE_EQ(median({NAN, 5.0}), 5.0);
}

TEST(Config, Validation) {
    ExperimentConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.ladder = {1024, 1000};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg.ladder = {2048, 1024};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg.ladder = {1024};
    cfg.schemes.clear();
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Convergence, SolitonLadder) {
    const auto cfg = soliton_config();
    const auto cells = run_convergence(cfg, soliton_spectra(cfg));
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_TRUE(all_ok(cells));
    EXPECT_TRUE(std::isnan(cells[0].order));
    EXPECT_NEAR(cells[1].order, 2.0, 0.1);  // TIB
    EXPECT_GT(cells[3].order, 3.5);         // G4
    EXPECT_NEAR(mean_order(cells, "TIB"), cells[1].order, 1e-15);
}

TEST(Convergence, FailuresAreRecordedPerCell) {
    auto cfg = soliton_config();
    cfg.ladder = {8, 32};
    cfg.schemes = {SchemeSpec::parse("G6")};  // M = 8 cannot host six corrections per edge
    const auto cells = run_convergence(cfg, soliton_spectra(cfg));
    ASSERT_EQ(cells.size(), 2u);
    EXPECT_FALSE(cells[0].ok);
    EXPECT_FALSE(cells[0].error.empty());
    EXPECT_TRUE(cells[1].ok);
    EXPECT_FALSE(all_ok(cells));
}

TEST(Convergence, WorkersGiveSameErrors) {
    auto cfg = soliton_config();
    const auto spectra = soliton_spectra(cfg);
    const auto serial = run_convergence(cfg, spectra);
    cfg.workers = 3;
    const auto pooled = run_convergence(cfg, spectra);
    ASSERT_EQ(serial.size(), pooled.size());
    for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(serial[i].rmse, pooled[i].rmse);
}

TEST(Convergence, DeterministicTables) {
    const auto cfg = soliton_config();
    const auto spectra = soliton_spectra(cfg);
    std::ostringstream a, b;
    write_cells_csv(a, run_convergence(cfg, spectra), cfg);
    write_cells_csv(b, run_convergence(cfg, spectra), cfg);
    EXPECT_EQ(strip_timing(a.str()), strip_timing(b.str()));
    EXPECT_NE(a.str().find("scheme,M,rmse,order,status,dispersion,seed,version"), std::string::npos);
}

TEST(Pareto, SingleCellGivesOneRow) {
    auto cfg = soliton_config();
    cfg.ladder = {128};
    cfg.schemes = {SchemeSpec::parse("G2")};
    EXPECT_EQ(run_pareto(cfg, soliton_spectra(cfg)).size(), 1u);
}

TEST(Pareto, SummaryPicksFastestReachingTarget) {
    std::vector<CellResult> cells(4);
    cells[0] = {"TIB", 1024, 1e-3, NAN, 0.1, 0.0, true, {}, {}};
    cells[1] = {"TIB", 2048, 2.5e-4, NAN, 0.4, 0.0, true, {}, {}};
    cells[2] = {"G6", 1024, 5e-4, NAN, 0.2, 0.0, true, {}, {}};
    cells[3] = {"G6", 2048, 1e-6, NAN, 0.5, 0.0, true, {}, {}};
    const auto s = pareto_summary(cells, {1e-3, 3e-4, 1e-5, 1e-9});
    EXPECT_EQ(s[0].fastest.value(), "TIB");
    EXPECT_EQ(s[1].fastest.value(), "TIB");
    EXPECT_EQ(s[2].fastest.value(), "G6");
    EXPECT_FALSE(s[3].fastest.has_value());
    EXPECT_TRUE(std::isinf(s[2].time_to_target[0].second));
}

TEST(Pointwise, ZeroSignalRefused) {
    auto cfg = soliton_config();
    cfg.signal = SignalSpec{};
    EXPECT_THROW(run_pointwise(cfg, soliton_spectra(cfg)), InvalidArgument);
}

TEST(Pointwise, SolitonErrorsFinite) {
    auto cfg = soliton_config();
    cfg.schemes = {SchemeSpec::parse("G3")};
    const auto tabs = run_pointwise(cfg, soliton_spectra(cfg));
    ASSERT_EQ(tabs.size(), 2u);
    for (const auto& tab : tabs) {
        ASSERT_EQ(tab.eps.size(), static_cast<std::size_t>(tab.M) + 1);
        for (double e : tab.eps) EXPECT_TRUE(std::isfinite(e));
    }
    // per-point orders live on the shared (coarse) points only
    EXPECT_TRUE(std::isfinite(tabs[1].order[0]));
    EXPECT_TRUE(std::isnan(tabs[1].order[1]));
    EXPECT_TRUE(std::isnan(tabs[0].order[0]));
}
