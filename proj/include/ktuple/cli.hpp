// cli.hpp: the `ktuple` command line
//
// Subcommands: find, scan-manifold, sweep, spectrum, trajectory, simulate,
// analyze, calibrate. Options can come from an INI-style --config file (one
// [section] per subcommand); flags given on the command line win.
//
// Exit codes: 0 ok, 2 usage / malformed input, 3 not found or insufficient
// data, 4 numerical contract violation.

#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ktuple/errors.hpp"
#include "ktuple/experiment.hpp"
#include "ktuple/fixtures.hpp"
#include "ktuple/floquet.hpp"
#include "ktuple/io.hpp"
#include "ktuple/ktupling.hpp"
#include "ktuple/signal.hpp"
#include "ktuple/version.hpp"

namespace ktuple::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNotFound = 3, kContract = 4, kIo = 1 };

namespace detail {

// "--nu-d" plus an underscore spelling so config keys like nu_d_mhz match.
inline std::string names(std::initializer_list<std::string> dashed) {
    std::string out;
    for (const auto& n : dashed) {
        std::string u = n;
        std::replace(u.begin(), u.end(), '-', '_');
        out += (out.empty() ? "" : ",") + ("--" + n);
        if (u != n) out += ",--" + u;
    }
    return out;
}

inline std::string grid_pm(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7f", v);
    return buf;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("grid needs at least one point");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

struct Common {
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 1;
    bool print_config = false;

    [[nodiscard]] std::string path(const std::string& file) const {
        return (std::filesystem::path(out_dir) / file).string();
    }
};

struct ModelOpts {
    std::string model = "tls";
    double delta0_mhz = 1.0;
    std::string fixture = "paper-sim";
    int steps = 1024;
};

inline void add_model(CLI::App* sub, ModelOpts& m, bool allow_nv) {
    if (allow_nv)
        sub->add_option(names({"model"}), m.model, "tls or nv")->check(CLI::IsMember({"tls", "nv"}))->capture_default_str();
    sub->add_option(names({"delta0-mhz"}), m.delta0_mhz, "two-level spacing (MHz)")->capture_default_str();
    if (allow_nv)
        sub->add_option(names({"fixture"}), m.fixture, "NV fixture: paper-sim or paper-exp")->capture_default_str();
    sub->add_option(names({"steps-per-period"}), m.steps, "integrator steps per drive period")->capture_default_str();
}

}  // namespace detail

// Parses and runs one command. Output goes to `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using detail::names;
    CLI::App app{"Period k-tupling in driven two-level and NV spin systems", "ktuple"};
    app.set_version_flag("--version", KTUPLE_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "INI config file, one [section] per command");

    detail::Common common;
    app.add_option("--out", common.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", common.seed, "random seed")->capture_default_str();
    app.add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--print-config", common.print_config, "print the resolved configuration and exit");

    // ---------------------------------------------------------------- find
    auto* find = app.add_subcommand("find", "amplitude of period k-tupling (root of the quasi-energy condition)");
    detail::ModelOpts find_m;
    int find_j = 1, find_k = 2;
    double find_nu = 0.0, scan_min = 0.0, scan_max = 1.2;
    int scan_grid = 2048;
    bool find_certify = false;
    find->add_option(names({"k"}), find_k, "period multiple k")->required();
    find->add_option(names({"j"}), find_j, "numerator j, gcd(j, k) = 1")->capture_default_str();
    find->add_option(names({"nu-d", "nu-d-mhz"}), find_nu, "drive frequency (MHz); 0 = in tune")->capture_default_str();
    find->add_option(names({"scan-min", "scan-min-delta0"}), scan_min, "scan start (units of Delta0)")->capture_default_str();
    find->add_option(names({"scan-max", "scan-max-delta0"}), scan_max, "scan end (units of Delta0)")->capture_default_str();
    find->add_option(names({"grid-points"}), scan_grid, "amplitude grid points")->capture_default_str();
    find->add_flag(names({"certify"}), find_certify, "run the k-period revival check");
    detail::add_model(find, find_m, true);

    // ---------------------------------------------------------------- scan-manifold
    auto* manifold = app.add_subcommand("scan-manifold", "k-tupling amplitudes over a drive-frequency grid");
    detail::ModelOpts man_m;
    int man_j = 1, man_k = 2, man_points = 21, man_grid = 2048;
    double man_nu_min = 0.9, man_nu_max = 1.1, man_scan_max = 1.2;
    bool man_certify = false;
    manifold->add_option(names({"k"}), man_k, "period multiple k")->required();
    manifold->add_option(names({"j"}), man_j, "numerator j")->capture_default_str();
    manifold->add_option(names({"nu-min", "nu-min-delta0"}), man_nu_min, "lowest drive frequency (units of Delta0)")->capture_default_str();
    manifold->add_option(names({"nu-max", "nu-max-delta0"}), man_nu_max, "highest drive frequency (units of Delta0)")->capture_default_str();
    manifold->add_option(names({"nu-points"}), man_points, "frequency grid points")->capture_default_str();
    manifold->add_option(names({"scan-max", "scan-max-delta0"}), man_scan_max, "amplitude scan end (units of Delta0)")->capture_default_str();
    manifold->add_option(names({"grid-points"}), man_grid, "amplitude grid points")->capture_default_str();
    manifold->add_flag(names({"certify"}), man_certify, "run the k-period revival check per point");
    detail::add_model(manifold, man_m, false);

    // ---------------------------------------------------------------- sweep / spectrum
    struct SweepOpts {
        double a_min = 0.45, a_max = 0.55;
        int a_points = 41, periods = 200;
        double nu = 0.0;
        double t_relax = std::numeric_limits<double>::infinity();
        double noise = 0.0;
    };
    auto add_sweep = [&](CLI::App* sub, SweepOpts& s) {
        sub->add_option(names({"a-min", "a-min-delta0"}), s.a_min, "lowest amplitude (units of Delta0)")->capture_default_str();
        sub->add_option(names({"a-max", "a-max-delta0"}), s.a_max, "highest amplitude (units of Delta0)")->capture_default_str();
        sub->add_option(names({"a-points"}), s.a_points, "amplitude grid points")->capture_default_str();
        sub->add_option(names({"periods"}), s.periods, "drive periods N")->capture_default_str();
        sub->add_option(names({"nu-d", "nu-d-mhz"}), s.nu, "drive frequency (MHz); 0 = in tune")->capture_default_str();
        sub->add_option(names({"t-relax", "t-relax-periods"}), s.t_relax, "decay time (periods)")->capture_default_str();
        sub->add_option(names({"noise-sigma"}), s.noise, "additive noise on <sigma_z>")->capture_default_str();
    };
    auto* sweep = app.add_subcommand("sweep", "stroboscopic <sigma_z> of the two-level model over an amplitude grid");
    detail::ModelOpts sweep_m;
    SweepOpts sweep_o;
    add_sweep(sweep, sweep_o);
    detail::add_model(sweep, sweep_m, false);

    auto* spectrum = app.add_subcommand("spectrum", "DFT heatmap of a campaign (from --in or a two-level sweep)");
    detail::ModelOpts spec_m;
    SweepOpts spec_o;
    std::string spec_in;
    add_sweep(spectrum, spec_o);
    detail::add_model(spectrum, spec_m, false);
    spectrum->add_option(names({"in"}), spec_in, "series CSV (amplitude,n,value,sigma)");

    // ---------------------------------------------------------------- trajectory
    auto* trajectory = app.add_subcommand("trajectory", "continuous-time Bloch trajectory of the two-level model");
    detail::ModelOpts traj_m;
    double traj_a = 0.0, traj_nu = 0.0;
    int traj_periods = 2, traj_samples = 256;
    trajectory->add_option(names({"amplitude", "amplitude-delta0"}), traj_a, "drive amplitude (units of Delta0); 0 = A_P2")->capture_default_str();
    trajectory->add_option(names({"nu-d", "nu-d-mhz"}), traj_nu, "drive frequency (MHz); 0 = in tune")->capture_default_str();
    trajectory->add_option(names({"periods"}), traj_periods, "periods to trace")->capture_default_str();
    trajectory->add_option(names({"samples-per-period"}), traj_samples, "samples per period")->capture_default_str();
    detail::add_model(trajectory, traj_m, false);

    // ---------------------------------------------------------------- simulate
    auto* simulate = app.add_subcommand("simulate", "six-level NV measurement campaign");
    std::string sim_fixture = "paper-sim";
    double sim_a_min = 30.0, sim_a_max = 37.0, sim_nu = 0.0, sim_p = 0.95, sim_share = 0.5;
    double sim_relax = 300.0, sim_shot = 0.0, sim_bright = 1.0, sim_dark = 0.7;
    int sim_points = 15, sim_periods = 200, sim_steps = 4096;
    simulate->add_option(names({"fixture"}), sim_fixture, "paper-sim or paper-exp")->capture_default_str();
    simulate->add_option(names({"a-min", "a-min-mv"}), sim_a_min, "lowest amplitude (mV)")->capture_default_str();
    simulate->add_option(names({"a-max", "a-max-mv"}), sim_a_max, "highest amplitude (mV)")->capture_default_str();
    simulate->add_option(names({"a-points"}), sim_points, "amplitude grid points")->capture_default_str();
    simulate->add_option(names({"periods"}), sim_periods, "drive periods N")->capture_default_str();
    simulate->add_option(names({"nu-d", "nu-d-mhz"}), sim_nu, "drive frequency (MHz); 0 = in tune")->capture_default_str();
    simulate->add_option(names({"p-target"}), sim_p, "initial population of |0,+1/2>")->capture_default_str();
    simulate->add_option(names({"nuclear-share"}), sim_share, "share of the remainder in |0,-1/2>")->capture_default_str();
    simulate->add_option(names({"t-relax", "t-relax-periods"}), sim_relax, "decay time (periods); inf disables")->capture_default_str();
    simulate->add_option(names({"shot-noise"}), sim_shot, "photons at the bright level; 0 disables")->capture_default_str();
    simulate->add_option(names({"pl-bright"}), sim_bright, "PL of m_S = 0")->capture_default_str();
    simulate->add_option(names({"pl-dark"}), sim_dark, "PL of m_S = +-1")->capture_default_str();
    simulate->add_option(names({"steps-per-period"}), sim_steps, "integrator steps per period")->capture_default_str();

    // ---------------------------------------------------------------- analyze
    auto* analyze = app.add_subcommand("analyze", "modulation-period fits and hyperbola apex per k");
    std::string an_in, an_unit = "mV";
    std::vector<int> an_k{2};
    double an_frac = 0.5, an_floor = 1e-3;
    analyze->add_option(names({"in"}), an_in, "series CSV (amplitude,n,value,sigma)")->required();
    analyze->add_option(names({"k"}), an_k, "period multiples to analyze")->capture_default_str();
    analyze->add_option(names({"max-tau-fraction"}), an_frac, "drop fits with tau above this fraction of N")->capture_default_str();
    analyze->add_option(names({"sigma-floor"}), an_floor, "relative floor on fitted tau uncertainty")->capture_default_str();
    analyze->add_option(names({"unit"}), an_unit, "amplitude unit label for the report")->capture_default_str();

    // ---------------------------------------------------------------- calibrate
    auto* calibrate = app.add_subcommand("calibrate", "fit NV hyperfine parameters to a level spacing and hybridization");
    double cal_b = 1020.874, cal_d0 = 7.50, cal_alpha = 0.9044, cal_d = 2870.0, cal_tune = 0.0, cal_mv = 0.06;
    std::string cal_name = "paper-sim";
    calibrate->add_option(names({"b-z-gauss"}), cal_b, "static field (G)")->capture_default_str();
    calibrate->add_option(names({"delta0-mhz"}), cal_d0, "target selected spacing (MHz)")->capture_default_str();
    calibrate->add_option(names({"alpha-sq"}), cal_alpha, "target |alpha|^2")->capture_default_str();
    calibrate->add_option(names({"d-zfs-mhz"}), cal_d, "zero-field splitting (MHz)")->capture_default_str();
    calibrate->add_option(names({"tune-delta0-mhz"}), cal_tune, "afterwards move B_z to this spacing (0 = off)")->capture_default_str();
    calibrate->add_option(names({"calibration-g-per-mv"}), cal_mv, "instrument calibration written to the fixture")->capture_default_str();
    calibrate->add_option(names({"name"}), cal_name, "fixture name")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << KTUPLE_VERSION << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    if (common.print_config) {
        // Globals, then the selected command as a [section]; the output is a valid --config file.
        out << "out = \"" << common.out_dir << "\"\nseed = " << common.seed << "\nthreads = " << common.threads << '\n';
        for (const auto* sub : app.get_subcommands()) out << '[' << sub->get_name() << "]\n" << sub->config_to_str(true, false);
        return kOk;
    }

    try {
        std::filesystem::create_directories(common.out_dir);

        auto scheme_cfg = [](int steps) { return floquet::IntegratorConfig{steps, floquet::Scheme::CommutatorFree4}; };

        if (find->parsed()) {
            ktupling::ScanConfig sc{scan_min, scan_max, scan_grid, 80, common.threads};
            const auto cfg = scheme_cfg(find_m.steps);
            ktupling::KTuplingPoint p;
            std::string unit = "MHz";
            double d0 = find_m.delta0_mhz;
            if (find_m.model == "nv") {
                const auto nv = fixtures::by_name(find_m.fixture);
                d0 = model::nv_eigenstructure(nv).delta0_selected_mhz;
                p = ktupling::find_amplitude_nv(find_j, find_k, nv, sc, cfg, find_nu);
                unit = "mV";
                if (find_certify) {
                    const model::TlsModel tls{d0};
                    auto q = ktupling::find_amplitude(find_j, find_k, p.nu_d_mhz, sc, tls, cfg);
                    p.certificate_fidelity = ktupling::revival_certificate(q, tls, cfg);
                }
            } else {
                const model::TlsModel tls{d0};
                p = ktupling::find_amplitude(find_j, find_k, find_nu > 0.0 ? find_nu : d0, sc, tls, cfg);
                if (find_certify) p.certificate_fidelity = ktupling::revival_certificate(p, tls, cfg);
            }
            out << "A_P" << find_k << " (j=" << find_j << ") = " << io::fmt(p.amplitude) << ' ' << unit << '\n';
            if (unit == "MHz") out << "A/Delta0 = " << detail::grid_pm(p.amplitude / d0) << '\n';
            out << "nu_d = " << io::fmt(p.nu_d_mhz) << " MHz, residual = " << io::fmt(p.residual)
                << ", brackets = " << p.bracket_count << '\n';
            if (!std::isnan(p.certificate_fidelity))
                out << "revival fidelity (min over 10 states) = " << io::fmt(p.certificate_fidelity) << '\n';
            io::write_file(common.path("ktupling.csv"), io::ktupling_csv({p}));
            return kOk;
        }

        if (manifold->parsed()) {
            const model::TlsModel tls{man_m.delta0_mhz};
            auto nus = detail::linspace(man_nu_min * tls.level_spacing_mhz, man_nu_max * tls.level_spacing_mhz, man_points);
            ktupling::ScanConfig sc{0.0, man_scan_max, man_grid, 80, common.threads};
            const auto curve = ktupling::scan_manifold(man_j, man_k, nus, sc, tls, scheme_cfg(man_m.steps), man_certify);
            io::write_file(common.path("manifold.csv"), io::ktupling_csv(curve.points));
            out << curve.points.size() << " points, " << curve.gaps.size() << " gaps\n";
            for (double g : curve.gaps) out << "gap at nu_d = " << io::fmt(g) << " MHz\n";
            return kOk;
        }

        auto tls_sweep = [&](const detail::ModelOpts& m, const SweepOpts& s) {
            const model::TlsModel tls{m.delta0_mhz};
            experiment::TlsProtocol pr;
            for (double a : detail::linspace(s.a_min, s.a_max, s.a_points)) pr.amplitudes_mhz.push_back(a * m.delta0_mhz);
            pr.n_periods = s.periods;
            pr.nu_d_mhz = s.nu;
            pr.t_relax_periods = s.t_relax;
            pr.noise_sigma = s.noise;
            pr.seed = common.seed;
            pr.integrator = scheme_cfg(m.steps);
            pr.threads = common.threads;
            return experiment::reference_campaign_tls(tls, pr);
        };

        if (sweep->parsed()) {
            const auto ds = tls_sweep(sweep_m, sweep_o);
            io::write_file(common.path("sweep.csv"), io::series_csv(ds.series));
            io::write_file(common.path("sweep.meta"), io::metadata_text(ds.metadata));
            io::write_file(common.path("sweep.ppm"), io::ppm(experiment::series_grid(ds)));
            out << "wrote " << ds.series.size() << " series of " << sweep_o.periods << " periods\n";
            return kOk;
        }

        if (spectrum->parsed()) {
            experiment::CampaignDataset ds;
            if (!spec_in.empty()) {
                ds.series = io::read_series_csv(spec_in);
            } else {
                ds = tls_sweep(spec_m, spec_o);
            }
            const auto grid = experiment::dft_campaign(ds);
            io::write_file(common.path("spectrum.csv"), io::grid_csv(grid));
            io::write_file(common.path("spectrum.ppm"), io::ppm(grid));
            out << "amplitude,dominant_frequency,peaks\n";
            for (const auto& s : ds.series) {
                const auto sp = signal::dft_magnitude(s);
                out << io::fmt(s.amplitude) << ',' << io::fmt(sp[signal::dominant_bin(sp)].frequency) << ','
                    << signal::count_spectral_peaks(sp) << '\n';
            }
            return kOk;
        }

        if (trajectory->parsed()) {
            const model::TlsModel tls{traj_m.delta0_mhz};
            const auto cfg = scheme_cfg(traj_m.steps);
            const double nu = traj_nu > 0.0 ? traj_nu : tls.level_spacing_mhz;
            double a = traj_a * tls.level_spacing_mhz;
            if (!(traj_a > 0.0)) a = ktupling::find_amplitude(1, 2, nu, {0.0, 1.2, 2048, 80, common.threads}, tls, cfg).amplitude;
            const auto traj = floquet::intra_period_trajectory(model::tls_ground(), traj_periods, traj_samples, tls,
                                                               {a, nu, 0.0}, cfg);
            io::write_file(common.path("trajectory.csv"), io::trajectory_csv(traj));
            io::write_file(common.path("trajectory.ppm"), io::ppm(io::trajectory_grid(traj)));
            const auto b0 = linalg::bloch_vector(traj.front().state);
            const auto b1 = linalg::bloch_vector(traj.back().state);
            out << "amplitude = " << io::fmt(a) << " MHz, endpoint distance = " << io::fmt((b1 - b0).norm()) << '\n';
            return kOk;
        }

        if (simulate->parsed()) {
            const auto nv = fixtures::by_name(sim_fixture);
            experiment::ProtocolConfig cfg;
            cfg.amplitudes_mv = detail::linspace(sim_a_min, sim_a_max, sim_points);
            cfg.n_periods = sim_periods;
            cfg.nu_d_mhz = sim_nu;
            cfg.init = {sim_p, sim_share};
            cfg.t_relax_periods = sim_relax;
            cfg.shot_noise = sim_shot;
            cfg.seed = common.seed;
            cfg.integrator = scheme_cfg(sim_steps);
            cfg.pl = {sim_bright, sim_dark};
            cfg.threads = common.threads;
            const auto ds = experiment::simulate_campaign(nv, cfg, sim_fixture);
            io::write_file(common.path("campaign.csv"), io::series_csv(ds.series));
            io::write_file(common.path("campaign.meta"), io::metadata_text(ds.metadata));
            io::write_file(common.path("campaign.ppm"), io::ppm(experiment::series_grid(ds)));
            io::write_file(common.path("campaign_dft.ppm"), io::ppm(experiment::dft_campaign(ds)));
            out << "wrote " << ds.series.size() << " series of " << sim_periods << " periods\n";
            return kOk;
        }

        if (analyze->parsed()) {
            const auto series = io::read_series_csv(an_in);
            signal::AnalysisOptions opt;
            opt.max_tau_fraction = an_frac;
            opt.relative_sigma_floor = an_floor;
            opt.threads = common.threads;
            std::vector<signal::KTuplingAnalysis> all;
            std::vector<signal::ReportRow> rows;
            std::string fits;
            for (int k : an_k) {
                auto an = signal::analyze_ktupling(series, k, opt);
                rows.push_back({k, an.a_pk, an.sigma_a_pk, an.c_k, an.sigma_c_k});
                const auto csv = io::fits_csv(an);
                fits += fits.empty() ? csv : csv.substr(csv.find('\n') + 1);
                for (const auto& sub : an.subsequences)
                    out << "k=" << k << " l=" << sub.l << ": A_P = "
                        << signal::format_pm(sub.hyperbola.a_p, sub.hyperbola.sigma_a_p) << '\n';
                if (!an.consistent) out << "k=" << k << ": subsequence estimates disagree beyond 3 sigma\n";
                all.push_back(std::move(an));
            }
            const auto report = signal::format_report(rows, an_unit);
            out << report;
            io::write_file(common.path("report.txt"), report);
            io::write_file(common.path("fits.csv"), fits);
            io::write_file(common.path("hyperbola.csv"), io::hyperbola_csv(all));
            return kOk;
        }

        if (calibrate->parsed()) {
            model::NvModel templ;
            templ.d_zfs_mhz = cal_d;
            auto m = model::calibrate_hyperfine(templ, {cal_b, cal_d0, cal_alpha});
            if (cal_tune > 0.0) m = model::tune_field_for_spacing(m, cal_tune);
            m.amplitude_calibration_g_per_mv = cal_mv;
            const auto s = model::nv_eigenstructure(m);
            out << "# fixture " << cal_name << "\n[" << cal_name << "]\n"
                << "d_zfs_mhz = " << io::fmt(m.d_zfs_mhz) << '\n'
                << "b_z_gauss = " << io::fmt(m.b_z_gauss) << '\n'
                << "a_par_mhz = " << io::fmt(m.a_par_mhz) << '\n'
                << "a_perp_mhz = " << io::fmt(m.a_perp_mhz) << '\n'
                << "amplitude_calibration_g_per_mv = " << io::fmt(m.amplitude_calibration_g_per_mv) << '\n'
                << "# check: delta0_selected_mhz = " << io::fmt(s.delta0_selected_mhz) << '\n'
                << "# check: alpha_sq = " << io::fmt(s.alpha_sq) << '\n';
            return kOk;
        }
    } catch (const NotFoundError& e) {
        err << "not found: " << e.what() << '\n';
        return kNotFound;
    } catch (const InsufficientDataError& e) {
        err << "insufficient data: " << e.what() << '\n';
        return kNotFound;
    } catch (const CalibrationError& e) {
        err << "calibration failed: " << e.what() << '\n';
        return kNotFound;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ContractViolation& e) {
        err << "numerical contract violated: " << e.what() << '\n';
        return kContract;
    } catch (const IntegratorAccuracyError& e) {
        err << "integrator: " << e.what() << '\n';
        return kContract;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}

}  // namespace ktuple::cli
