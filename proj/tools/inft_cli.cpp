// Command-line front end: spectrum, recover, convergence, pareto, pointwise.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inft/experiment.hpp"
#include "inft/io.hpp"

namespace {

using namespace inft;

struct SignalFlags {
    std::string kind = "chirped_sech";
    double A = 5.2;
    double C = 4.0;
    double width = 2.0;
    double zeta_re = 0.0, zeta_im = 0.5;
    double norm_re = 0.0, norm_im = -1.0;

    void attach(CLI::App* app) {
        app->add_option("--signal", kind, "zero | chirped_sech | sech | rectangle | soliton")->capture_default_str();
        app->add_option("--A", A, "amplitude")->capture_default_str();
        app->add_option("--C", C, "chirp")->capture_default_str();
        app->add_option("--width", width, "rectangle full width")->capture_default_str();
        app->add_option("--zeta-re", zeta_re, "soliton eigenvalue, real part")->capture_default_str();
        app->add_option("--zeta-im", zeta_im, "soliton eigenvalue, imaginary part")->capture_default_str();
        app->add_option("--norm-re", norm_re, "soliton norming constant, real part")->capture_default_str();
        app->add_option("--norm-im", norm_im, "soliton norming constant, imaginary part")->capture_default_str();
    }

    SignalSpec spec() const {
        switch (parse_signal_kind(kind)) {
            case SignalKind::zero: return SignalSpec{};
            case SignalKind::chirped_sech: return SignalSpec::chirped_sech_of(A, C);
            case SignalKind::sech: return SignalSpec::sech_of(A);
            case SignalKind::rectangle: return SignalSpec::rectangle_of(A, width);
            case SignalKind::soliton: return SignalSpec::soliton_of({zeta_re, zeta_im}, {norm_re, norm_im});
        }
        return SignalSpec{};
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// Output goes to `path`, or stdout for "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    fn(out);
}

struct StudyFlags {
    SignalFlags signal;
    std::string config;
    std::string dispersion = "anomalous";
    std::string schemes = "G6";
    std::string ladder = "1024,2048,4096,8192";
    int Mxi = 2049;
    double Lxi = 40.0;
    double L = 60.0;
    unsigned seed = 0;
    int repeats = 1;
    int workers = 1;
    std::string out = "-";

    void attach(CLI::App* app) {
        signal.attach(app);
        app->add_option("--config", config, "JSON config; explicit flags override it");
        app->add_option("--dispersion", dispersion, "anomalous | normal")->capture_default_str();
        app->add_option("--scheme", schemes, "comma-separated schemes (TIB, G2..G6, G2d..G6d)")->capture_default_str();
        app->add_option("--ladder", ladder, "comma-separated M values")->capture_default_str();
        app->add_option("--Mxi", Mxi, "number of xi nodes")->capture_default_str();
        app->add_option("--Lxi", Lxi, "width of the xi domain")->capture_default_str();
        app->add_option("--L", L, "length of the time interval")->capture_default_str();
        app->add_option("--seed", seed, "seed recorded with every row")->capture_default_str();
        app->add_option("--repeats", repeats, "timing repeats (minimum is kept)")->capture_default_str();
        app->add_option("--workers", workers, "concurrent ladder cells")->capture_default_str();
        app->add_option("--out", out, "output CSV ('-' for stdout)")->capture_default_str();
    }

    // Config file values first, then any flag given on the command line.
    ExperimentConfig build(const CLI::App* app) {
        if (!config.empty()) {
            std::ifstream in(config);
            require(in.good(), "cannot open " + config);
            const nlohmann::json j = nlohmann::json::parse(in);
            const auto take = [&](const char* key, const char* flag, auto& dst) {
                if (j.contains(key) && app->count(flag) == 0) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
            };
            take("signal", "--signal", signal.kind);
            take("A", "--A", signal.A);
            take("C", "--C", signal.C);
            take("width", "--width", signal.width);
            take("dispersion", "--dispersion", dispersion);
            // lists may be given as arrays or as comma-separated strings
            const auto take_list = [&](const char* key, const char* flag, std::string& dst) {
                if (!j.contains(key) || app->count(flag) != 0) return;
                const auto& v = j.at(key);
                if (!v.is_array()) {
                    dst = v.get<std::string>();
                    return;
                }
                dst.clear();
                for (const auto& e : v) dst += (dst.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
            };
            take_list("schemes", "--scheme", schemes);
            take_list("ladder", "--ladder", ladder);
            take("Mxi", "--Mxi", Mxi);
            take("Lxi", "--Lxi", Lxi);
            take("L", "--L", L);
            take("seed", "--seed", seed);
            take("repeats", "--repeats", repeats);
            take("workers", "--workers", workers);
        }
        ExperimentConfig cfg;
        cfg.signal = signal.spec();
        cfg.dispersion = parse_dispersion(dispersion);
        cfg.schemes.clear();
        for (const auto& s : split_list(schemes)) cfg.schemes.push_back(SchemeSpec::parse(s));
        cfg.ladder.clear();
        for (const auto& m : split_list(ladder)) cfg.ladder.push_back(std::stoi(m));
        cfg.xi_nodes = Mxi;
        cfg.xi_width = Lxi;
        cfg.L = L;
        cfg.seed = seed;
        cfg.timing_repeats = repeats;
        cfg.workers = workers;
        cfg.validate();
        return cfg;
    }
};

void report_failures(const std::vector<CellResult>& cells) {
    for (const auto& c : cells)
        if (!c.ok) std::cerr << "cell " << c.scheme << " M=" << c.M << " failed: " << c.error << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse nonlinear Fourier transform by the left/right GLME"};
    app.require_subcommand(1);

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "signal -> spectral data JSON");
    SignalFlags sp_signal;
    sp_signal.attach(spectrum);
    std::string sp_dispersion = "anomalous", sp_side = "left", sp_out = "-";
    int sp_Mxi = 2049;
    double sp_Lxi = 40.0;
    spectrum->add_option("--dispersion", sp_dispersion, "anomalous | normal")->capture_default_str();
    spectrum->add_option("--side", sp_side, "left, or right (data of q(-t))")->capture_default_str();
    spectrum->add_option("--Mxi", sp_Mxi, "number of xi nodes")->capture_default_str();
    spectrum->add_option("--Lxi", sp_Lxi, "width of the xi domain")->capture_default_str();
    spectrum->add_option("--out", sp_out, "output JSON ('-' for stdout)")->capture_default_str();

    // recover
    auto* recover_cmd = app.add_subcommand("recover", "spectral data -> potential CSV");
    std::string rc_left, rc_right, rc_scheme = "G6", rc_out = "-";
    int rc_M = 1024;
    double rc_L = 60.0;
    SignalFlags rc_signal;
    recover_cmd->add_option("--left", rc_left, "left spectral data JSON")->required();
    recover_cmd->add_option("--right", rc_right, "right spectral data JSON; without it only the left sweep runs");
    recover_cmd->add_option("--scheme", rc_scheme, "TIB, G2..G6, G2d..G6d")->capture_default_str();
    recover_cmd->add_option("--M", rc_M, "number of output subintervals")->capture_default_str();
    recover_cmd->add_option("--L", rc_L, "length of the time interval")->capture_default_str();
    recover_cmd->add_option("--out", rc_out, "output CSV ('-' for stdout)")->capture_default_str();
    auto* rc_exact = recover_cmd->add_flag("--with-error", "add eps(t) against the closed form given by --signal");
    rc_signal.attach(recover_cmd);

    auto* convergence = app.add_subcommand("convergence", "RMSE and order per scheme and M");
    StudyFlags cv;
    cv.attach(convergence);

    auto* pareto = app.add_subcommand("pareto", "RMSE / wall-time trade-off");
    StudyFlags pa;
    pa.schemes = "TIB,G6";
    pa.attach(pareto);
    std::string pa_targets = "1e-2,1e-3,1e-4,1e-6,1e-8";
    pareto->add_option("--targets", pa_targets, "comma-separated RMSE targets")->capture_default_str();

    auto* pointwise = app.add_subcommand("pointwise", "eps(t) and per-point order");
    StudyFlags pw;
    pw.attach(pointwise);

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) {
            const SignalSpec spec = sp_signal.spec();
            const Dispersion d = parse_dispersion(sp_dispersion);
            ScatteringResult details;
            const SpectralData sd = parse_side(sp_side) == Side::left
                                        ? spectrum_of(spec, d, sp_Lxi, sp_Mxi, {}, &details)
                                        : right_spectrum_of(spec, d, sp_Lxi, sp_Mxi, {}, &details);
            for (const auto& w : details.warnings) std::cerr << "warning: " << w << '\n';
            for (const auto& f : details.failures)
                std::cerr << "warning: Newton did not converge from seed " << f.seed << " (|a| = " << f.residual
                          << ")\n";
            with_output(sp_out, [&](std::ostream& os) { os << to_json(sd).dump(1) << '\n'; });
            return details.failures.empty() ? 0 : 1;
        }
        if (recover_cmd->parsed()) {
            const SpectralData left = read_spectral(rc_left);
            std::optional<SpectralData> right;
            GridConfig grid;
            grid.L = rc_L;
            grid.M_out = rc_M;
            if (!rc_right.empty()) {
                right = read_spectral(rc_right);
                require(right->side == Side::right, rc_right + " does not hold right-side data");
            } else {
                grid.split = Split::left_only;
            }
            // The xi quadrature makes the kernel periodic in its argument.
            const double period = 2.0 * std::numbers::pi / left.xi_step();
            if (period < 3.0 * rc_L)
                std::cerr << "warning: xi step " << left.xi_step() << " makes the kernel " << period
                          << "-periodic, too short for L = " << rc_L << "; use more xi nodes\n";
            const RecoveredPotential rp = recover(left, right, grid, SchemeSpec::parse(rc_scheme));
            with_output(rc_out, [&](std::ostream& os) {
                if (*rc_exact) {
                    const SignalSpec spec = rc_signal.spec();
                    double peak = 0.0;
                    for (double t : rp.t) peak = std::max(peak, std::abs(spec(t)));
                    require(peak > 0.0, "eps(t) undefined: max |q_exact| = 0");
                    write_potential_csv(os, rp, &spec, peak);
                } else {
                    write_potential_csv<SignalSpec>(os, rp, nullptr, 1.0);
                }
            });
            return 0;
        }
        if (convergence->parsed()) {
            const ExperimentConfig cfg = cv.build(convergence);
            const SpectraPair spectra = prepare_spectra(cfg);
            const auto cells = run_convergence(cfg, spectra);
            with_output(cv.out, [&](std::ostream& os) { write_cells_csv(os, cells, cfg); });
            for (const auto& s : cfg.schemes)
                std::cerr << s.name() << ": mean order " << mean_order(cells, s.name()) << '\n';
            report_failures(cells);
            return all_ok(cells) ? 0 : 1;
        }
        if (pareto->parsed()) {
            const ExperimentConfig cfg = pa.build(pareto);
            const SpectraPair spectra = prepare_spectra(cfg);
            const auto cells = run_pareto(cfg, spectra);
            with_output(pa.out, [&](std::ostream& os) { write_cells_csv(os, cells, cfg); });
            std::vector<double> targets;
            for (const auto& t : split_list(pa_targets)) targets.push_back(std::stod(t));
            for (const auto& s : pareto_summary(cells, targets))
                std::cerr << "target " << s.target << ": fastest " << s.fastest.value_or("none") << '\n';
            report_failures(cells);
            return all_ok(cells) ? 0 : 1;
        }
        if (pointwise->parsed()) {
            const ExperimentConfig cfg = pw.build(pointwise);
            const SpectraPair spectra = prepare_spectra(cfg);
            const auto tabs = run_pointwise(cfg, spectra);
            with_output(pw.out, [&](std::ostream& os) { write_pointwise_csv(os, tabs, cfg); });
            bool ok = true;
            for (const auto& t : tabs)
                if (t.eps.empty()) {
                    ok = false;
                    std::cerr << "cell " << t.scheme << " M=" << t.M << " failed\n";
                }
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
