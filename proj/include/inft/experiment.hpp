#pragma once

// Convergence, timing trade-off and pointwise-error studies.
//
//   eps(t) = |q(t) - q_exact(t)| / max |q_exact|,   RMSE = sqrt(mean eps^2)
//   order  = log2(RMSE_M / RMSE_2M)

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "inft/glme.hpp"
#include "inft/signal.hpp"
#include "inft/version.hpp"
#include "inft/zs_oracle.hpp"

namespace inft {

struct ExperimentConfig {
    SignalSpec signal = SignalSpec::chirped_sech_of(5.2, 4.0);
    Dispersion dispersion = Dispersion::anomalous;
    std::vector<int> ladder{1024, 2048, 4096, 8192};
    std::vector<SchemeSpec> schemes{SchemeSpec{SchemeFamily::G6}};
    int xi_nodes = 2049;
    double xi_width = 40.0;
    double L = 60.0;
    unsigned seed = 0;
    int timing_repeats = 1;  // wall times are the minimum over repeats
    int workers = 1;         // ladder cells run concurrently when > 1

    void validate() const {
        require(!ladder.empty(), "ladder must not be empty");
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            const int M = ladder[i];
            require(M >= 2 && (M & (M - 1)) == 0, "ladder rungs must be powers of two");
            require(i == 0 || M > ladder[i - 1], "ladder must be strictly increasing");
        }
        require(!schemes.empty(), "scheme list must not be empty");
        require(xi_nodes >= 2 && xi_width > 0.0, "invalid spectral grid");
        require(L > 0.0, "invalid computational interval");
        require(timing_repeats >= 1 && workers >= 1, "repeats and workers must be positive");
    }
};

struct SpectraPair {
    SpectralData left;
    SpectralData right;
    ScatteringResult left_details;
    ScatteringResult right_details;
};

inline SpectraPair prepare_spectra(const ExperimentConfig& cfg, const ForwardOptions& opt = {}) {
    SpectraPair p;
    p.left = spectrum_of(cfg.signal, cfg.dispersion, cfg.xi_width, cfg.xi_nodes, opt, &p.left_details);
    p.right = right_spectrum_of(cfg.signal, cfg.dispersion, cfg.xi_width, cfg.xi_nodes, opt, &p.right_details);
    return p;
}

inline std::vector<double> pointwise_error(const RecoveredPotential& rp, const SignalSpec& exact) {
    double peak = 0.0;
    for (double t : rp.t) peak = std::max(peak, std::abs(exact(t)));
    require(peak > 0.0, "relative error undefined: max |q_exact| = 0 on the grid");
    std::vector<double> eps(rp.t.size());
    for (std::size_t j = 0; j < rp.t.size(); ++j) eps[j] = std::abs(rp.q[j] - exact(rp.t[j])) / peak;
    return eps;
}

inline double rmse(const std::vector<double>& eps) {
    double acc = 0.0;
    for (double e : eps) acc += e * e;
    return std::sqrt(acc / static_cast<double>(eps.size()));
}

inline double approximation_order(double rmse_coarse, double rmse_fine) { return std::log2(rmse_coarse / rmse_fine); }

struct CellResult {
    std::string scheme;
    int M = 0;
    double rmse = std::numeric_limits<double>::quiet_NaN();
    double order = std::numeric_limits<double>::quiet_NaN();  // vs previous rung
    double kernel_seconds = 0.0;
    double sweep_seconds = 0.0;
    bool ok = false;
    std::string error;
    std::vector<double> eps;  // kept for pointwise studies

    double total_seconds() const { return kernel_seconds + sweep_seconds; }
};

/// One (scheme, M) cell; failures are captured, not thrown.
inline CellResult run_cell(const ExperimentConfig& cfg, const SpectraPair& spectra, const SchemeSpec& scheme, int M,
                           bool keep_eps = false) {
    CellResult c;
    c.scheme = scheme.name();
    c.M = M;
    try {
        GridConfig grid;
        grid.L = cfg.L;
        grid.M_out = M;
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < cfg.timing_repeats; ++rep) {
            const RecoveredPotential rp = recover(spectra.left, spectra.right, grid, scheme);
            if (rp.kernel_seconds + rp.sweep_seconds < best) {
                best = rp.kernel_seconds + rp.sweep_seconds;
                c.kernel_seconds = rp.kernel_seconds;
                c.sweep_seconds = rp.sweep_seconds;
            }
            if (rep == 0) {
                std::vector<double> eps = pointwise_error(rp, cfg.signal);
                c.rmse = rmse(eps);
                if (keep_eps) c.eps = std::move(eps);
            }
        }
        c.ok = std::isfinite(c.rmse);
        if (!c.ok) c.error = "non-finite error";
    } catch (const std::exception& e) {
        c.ok = false;
        c.error = e.what();
    }
    return c;
}

/// All (scheme, M) cells; orders between consecutive rungs of the same scheme.
inline std::vector<CellResult> run_convergence(const ExperimentConfig& cfg, const SpectraPair& spectra,
                                               bool keep_eps = false) {
    cfg.validate();
    std::vector<CellResult> cells;
    std::vector<std::pair<SchemeSpec, int>> jobs;
    for (const auto& s : cfg.schemes)
        for (int M : cfg.ladder) jobs.emplace_back(s, M);
    cells.resize(jobs.size());
    if (cfg.workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            cells[i] = run_cell(cfg, spectra, jobs[i].first, jobs[i].second, keep_eps);
    } else {
        for (std::size_t start = 0; start < jobs.size(); start += cfg.workers) {
            std::vector<std::future<CellResult>> batch;
            const std::size_t end = std::min(jobs.size(), start + static_cast<std::size_t>(cfg.workers));
            for (std::size_t i = start; i < end; ++i)
                batch.push_back(std::async(std::launch::async, [&, i] {
                    return run_cell(cfg, spectra, jobs[i].first, jobs[i].second, keep_eps);
                }));
            for (std::size_t i = start; i < end; ++i) cells[i] = batch[i - start].get();
        }
    }
    for (std::size_t i = 1; i < cells.size(); ++i)
        if (cells[i].scheme == cells[i - 1].scheme && cells[i].ok && cells[i - 1].ok)
            cells[i].order = approximation_order(cells[i - 1].rmse, cells[i].rmse);
    return cells;
}

/// Mean of the consecutive-rung orders of one scheme (NaN if none).
inline double mean_order(const std::vector<CellResult>& cells, const std::string& scheme) {
    double sum = 0.0;
    int count = 0;
    for (const auto& c : cells)
        if (c.scheme == scheme && std::isfinite(c.order)) {
            sum += c.order;
            ++count;
        }
    return count ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

inline bool all_ok(const std::vector<CellResult>& cells) {
    return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
}

struct ParetoSummary {
    double target = 0.0;
    std::optional<std::string> fastest;       // scheme reaching the target in the least time
    std::vector<std::pair<std::string, double>> time_to_target;  // +inf when not reached
};

/// For each target RMSE, the least wall time among the cells of each scheme
/// that reach it, and the scheme that gets there first.
inline std::vector<ParetoSummary> pareto_summary(const std::vector<CellResult>& cells,
                                                 const std::vector<double>& targets) {
    std::vector<std::string> schemes;
    for (const auto& c : cells)
        if (std::find(schemes.begin(), schemes.end(), c.scheme) == schemes.end()) schemes.push_back(c.scheme);
    std::vector<ParetoSummary> out;
    for (double target : targets) {
        ParetoSummary s;
        s.target = target;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& name : schemes) {
            double t = std::numeric_limits<double>::infinity();
            for (const auto& c : cells)
                if (c.scheme == name && c.ok && c.rmse <= target) t = std::min(t, c.total_seconds());
            s.time_to_target.emplace_back(name, t);
            if (t < best) {
                best = t;
                s.fastest = name;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// (RMSE, wall time) per scheme and M. A comparison needs two schemes, but a
/// single scheme still yields its rows.
inline std::vector<CellResult> run_pareto(const ExperimentConfig& cfg, const SpectraPair& spectra) {
    return run_convergence(cfg, spectra);
}

/// eps(t) per (scheme, M) and the per-point order between consecutive rungs,
/// evaluated on the coarser grid (every other point of the finer one).
struct PointwiseTable {
    std::string scheme;
    int M = 0;
    std::vector<double> t;
    std::vector<double> eps;
    std::vector<double> order;  // NaN on the first rung
};

inline std::vector<PointwiseTable> run_pointwise(const ExperimentConfig& cfg, const SpectraPair& spectra) {
    cfg.validate();
    // Refuse up front when the relative error has no scale.
    double peak = 0.0;
    const int M_max = cfg.ladder.back();
    for (int j = 0; j <= M_max; ++j) peak = std::max(peak, std::abs(cfg.signal(-0.5 * cfg.L + j * cfg.L / M_max)));
    require(peak > 0.0, "pointwise error undefined for a signal with max |q_exact| = 0");

    const auto cells = run_convergence(cfg, spectra, true);
    std::vector<PointwiseTable> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        PointwiseTable tab;
        tab.scheme = c.scheme;
        tab.M = c.M;
        if (c.ok) {
            tab.eps = c.eps;
            for (int j = 0; j <= c.M; ++j) tab.t.push_back(-0.5 * cfg.L + j * cfg.L / c.M);
            tab.order.assign(tab.t.size(), std::numeric_limits<double>::quiet_NaN());
            if (i > 0 && cells[i - 1].scheme == c.scheme && cells[i - 1].ok && c.M == 2 * cells[i - 1].M) {
                // Coarse point j coincides with fine point 2j.
                const auto& coarse = cells[i - 1].eps;
                for (int j = 0; j <= cells[i - 1].M; ++j) tab.order[2 * j] = std::log2(coarse[j] / c.eps[2 * j]);
            }
        }
        out.push_back(std::move(tab));
    }
    return out;
}

inline double median(std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2) return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

/// Table rows carry provenance; timing columns come last so that they can be
/// dropped when comparing runs.
inline void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells, const ExperimentConfig& cfg) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "scheme,M,rmse,order,status,dispersion,seed,version,kernel_s,sweep_s,total_s\n";
    for (const auto& c : cells) {
        out << c.scheme << ',' << c.M << ',' << c.rmse << ',' << c.order << ',' << (c.ok ? "ok" : "failed") << ','
            << to_string(cfg.dispersion) << ',' << cfg.seed << ',' << kVersion << ',' << c.kernel_seconds << ','
            << c.sweep_seconds << ',' << c.total_seconds() << '\n';
    }
}

inline void write_pointwise_csv(std::ostream& out, const std::vector<PointwiseTable>& tabs, const ExperimentConfig& cfg) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "scheme,M,t,eps,order,dispersion,seed,version\n";
    for (const auto& tab : tabs)
        for (std::size_t j = 0; j < tab.t.size(); ++j)
            out << tab.scheme << ',' << tab.M << ',' << tab.t[j] << ',' << tab.eps[j] << ',' << tab.order[j] << ','
                << to_string(cfg.dispersion) << ',' << cfg.seed << ',' << kVersion << '\n';
}

}  // namespace inft
