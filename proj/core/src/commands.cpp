#include "sphereqed/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "sphereqed/csv.hpp"
#include "sphereqed/dynamics.hpp"
#include "sphereqed/entanglement.hpp"
#include "sphereqed/errors.hpp"
#include "sphereqed/parallel.hpp"
#include "sphereqed/rates.hpp"
#include "sphereqed/textio.hpp"

namespace sqed::cli {

namespace {

using textio::format_sig;

rates::SeriesOptions series_options(const RunConfig& c) {
    rates::SeriesOptions o;
    if (c.series_l_max > 0) o.l_max = c.series_l_max;
    o.l_max_cap = c.series_l_max_cap;
    return o;
}

dyn::TimeGrid time_grid_or(const RunConfig& c, double def_stop, int def_points) {
    if (c.sweep_axis == SweepAxis::time)
        return dyn::TimeGrid::uniform(c.sweep_start, c.sweep_stop, c.sweep_points);
    return dyn::TimeGrid::uniform(0.0, def_stop, def_points);
}

dyn::StrongCouplingParams strong_params_from_config(const RunConfig& c) {
    return dyn::StrongCouplingParams::from_ratios(c.strong_ratio_pm, c.strong_ratio_donor, 1.0);
}

// First maximum of 2 sqrt(2) e^{-dwc (t + pi/rabi_d)} sin^2(rabi_pm t / 2).
double first_bell_maximum(double dwc, double rabi_pm, double rabi_donor) {
    const double nu = 0.5 * rabi_pm;
    const double t_star = std::atan2(2.0 * nu, dwc) / nu;
    const double s = std::sin(nu * t_star);
    return 2.0 * std::sqrt(2.0) * std::exp(-dwc * (t_star + M_PI / rabi_donor)) * s * s;
}

}  // namespace

std::string default_out_path(const std::string& subcommand) {
    if (subcommand == "resonances") return "resonances.tsv";
    return subcommand + ".csv";
}

void cmd_resonances(const RunConfig& config, const std::string& out_path, std::ostream& log) {
    config.validate();
    const std::string fingerprint = config.fingerprint("resonances");

    std::vector<sphere::ModeResonance> modes;
    const auto cached = sphere::read_resonance_cache(out_path, fingerprint);
    if (cached) {
        modes = *cached;
        log << "resonances: reusing cache " << out_path << " (" << modes.size() << " modes)\n";
    } else {
        sphere::ResonanceScan scan = config.scan;
        scan.threads = config.threads;
        modes = sphere::find_resonances(scan, config.material, config.geometry);
        for (const auto& m : modes) {
            if (!m.fit_ok)
                log << "warning: Lorentzian fit residual " << format_sig(m.fit_residual, 3)
                    << " for l = " << m.l << " at omega_C = " << format_sig(m.omega_C)
                    << " (half-maximum values reported)\n";
        }
        sphere::write_resonance_cache(out_path, modes, fingerprint);
        log << "resonances: wrote " << modes.size() << " modes to " << out_path << "\n";
    }

    if (modes.empty()) {
        log << "warning: no resonances found in window [" << format_sig(config.scan.omega_lo)
            << ", " << format_sig(config.scan.omega_hi) << "] for l in [" << config.scan.l_min
            << ", " << config.scan.l_max << "]\n";
        return;
    }
    const auto nearest = sphere::nearest_mode(modes, config.atom_omega);
    log << "nearest mode to omega_A = " << format_sig(config.atom_omega) << ": l = " << nearest->l
        << ", omega_C = " << format_sig(nearest->omega_C)
        << ", delta_omega_C = " << format_sig(nearest->delta_omega_C)
        << ", Q = " << format_sig(nearest->quality)
        << ", kind = " << (nearest->kind == sphere::ModeKind::SG ? "SG" : "WG") << "\n";
}

void cmd_rates(const RunConfig& config, const std::string& out_path, std::ostream& log) {
    config.validate();
    if (config.sweep_axis == SweepAxis::time)
        throw ConfigError("rates: sweep.axis must be frequency or distance");

    const int n = config.sweep_points;
    const auto opts = series_options(config);
    const bool by_distance = config.sweep_axis == SweepAxis::distance;

    // For a distance sweep the reflection coefficients depend only on the
    // fixed frequency, so share one caching provider across all points,
    // pinned at the series cap so its values cannot depend on request order.
    const rates::ReflectionProvider shared =
        rates::sphere_reflection(config.material, config.geometry,
                                 opts.l_max.value_or(opts.l_max_cap));

    struct Row {
        double x = 0.0, gp = 0.0, gm = 0.0;
        bool converged = false, failed = false;
    };
    std::vector<Row> rows(static_cast<size_t>(n));
    parallel::for_index(static_cast<size_t>(n), config.threads, [&](size_t i) {
        const double x = config.sweep_start +
                         (config.sweep_stop - config.sweep_start) * static_cast<double>(i) /
                             (n - 1);
        Row r;
        r.x = x;
        try {
            rates::RateSet rs;
            if (by_distance) {
                sphere::SphereGeometry g = config.geometry;
                g.atom_distance = x;
                g.second_atom_distance = x;
                rs = rates::pair_decay_rates_with(config.atom_omega, g, shared, opts);
            } else {
                rs = rates::pair_decay_rates(x, config.geometry, config.material, opts);
            }
            r.gp = rs.gamma_plus;
            r.gm = rs.gamma_minus;
            r.converged = rs.converged;
        } catch (const NumericalError&) {
            r.failed = true;
        }
        rows[i] = r;
    });

    CsvWriter csv(out_path, config, by_distance ? "rates (distance sweep)" : "rates (frequency sweep)",
                  {"x", "gamma_plus_over_gamma0", "gamma_minus_over_gamma0", "converged"});
    csv.comment(by_distance ? "x: atom-surface distance in lambda_T"
                            : "x: transition frequency in omega_T");
    int n_failed = 0;
    for (const auto& r : rows) {
        if (r.failed) {
            ++n_failed;
            csv.row_mixed({format_sig(r.x, config.precision), "nan", "nan", "0"});
        } else {
            csv.row({r.x, r.gp, r.gm, r.converged ? 1.0 : 0.0});
        }
    }
    csv.close();
    if (n_failed > 0) log << "warning: " << n_failed << " sweep points failed numerically\n";
    log << "rates: wrote " << n << " points to " << out_path << "\n";
}

void cmd_eof(const RunConfig& config, EofRegime regime, const std::string& out_path,
             std::ostream& log) {
    config.validate();
    if (regime == EofRegime::weak) {
        // Time axis is Gamma_pm * t; p = |C_pm|^2 = e^{-x} / 2 in these units.
        const dyn::TimeGrid grid = time_grid_or(config, 5.0, 1001);
        CsvWriter csv(out_path, config, "eof (weak coupling)",
                      {"t_gamma_pm", "p", "E_F", "bound_p"});
        csv.comment("time in units of 1/Gamma_pm (surviving-branch decay rate)");
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.t(i);
            const double p = 0.5 * std::exp(-x);
            const auto rho = ent::build_mixed_state(p, ent::MixSign::plus);
            csv.row({x, p, ent::entanglement_of_formation(rho), p});
        }
        csv.close();
        log << "eof: wrote weak-coupling series to " << out_path << "\n";
        return;
    }

    const dyn::StrongCouplingParams p = strong_params_from_config(config);
    if (p.delta_omega_C / p.rabi_pm > 0.1)
        log << "warning: delta_omega_C / Omega_pm = " << format_sig(p.delta_omega_C / p.rabi_pm, 3)
            << " is outside the strong-coupling regime\n";
    const dyn::TimeGrid grid = time_grid_or(config, 60.0, 4001);  // t in 1/Omega
    CsvWriter csv(out_path, config, "eof (strong coupling)", {"t_omega", "p", "E_F"});
    csv.comment("time in units of 1/Omega (single-atom Rabi frequency)");
    std::ofstream density;
    if (!config.density_path.empty()) {
        density.open(config.density_path, std::ios::binary);
        if (!density) throw IoError("cannot open density dump: " + config.density_path);
    }
    for (int i = 0; i < grid.n; ++i) {
        const double t = grid.t(i);  // rabi = 1 in ratio mode
        const auto amps = dyn::strong_amplitudes(p, t);
        const double weight = std::norm(p.branch == dyn::Branch::plus ? amps.first : amps.second);
        const auto rho = ent::build_mixed_state(
            weight, p.branch == dyn::Branch::plus ? ent::MixSign::plus : ent::MixSign::minus);
        csv.row({t * p.rabi, weight, ent::entanglement_of_formation(rho)});
        if (density.is_open()) ent::write_density_row(density, t * p.rabi, rho.rho, config.precision);
    }
    csv.close();
    if (density.is_open()) {
        density.flush();
        if (!density) throw IoError("failed writing density dump: " + config.density_path);
        log << "eof: wrote density dump to " << config.density_path << "\n";
    }
    if (!config.trajectory_path.empty()) {
        // the same run solved through the Volterra route, exported as raw
        // complex amplitudes
        std::ofstream tr(config.trajectory_path, std::ios::binary);
        if (!tr) throw IoError("cannot open trajectory export: " + config.trajectory_path);
        const auto traj = dyn::donor_driven_pair(p, dyn::DonorPlacement::at_A, grid);
        dyn::write_trajectory_csv(tr, traj, config.precision);
        if (!tr) throw IoError("failed writing trajectory export: " + config.trajectory_path);
        log << "eof: wrote amplitude trajectories to " << config.trajectory_path << "\n";
    }
}

namespace {

void bell_time_series(CsvWriter& csv, const dyn::StrongCouplingParams& p, double theta,
                      const dyn::TimeGrid& grid, const std::optional<double>& gamma_column) {
    for (int i = 0; i < grid.n; ++i) {
        const double t = grid.t(i);
        const auto amps = dyn::strong_amplitudes(p, t);
        const double weight = std::norm(p.branch == dyn::Branch::plus ? amps.first : amps.second);
        const auto rho = ent::build_mixed_state(
            weight, p.branch == dyn::Branch::plus ? ent::MixSign::plus : ent::MixSign::minus);
        const double bs = ent::bell_parameter(rho, theta);
        if (gamma_column)
            csv.row({*gamma_column, t * p.rabi, bs});
        else
            csv.row({t * p.rabi, bs});
    }
}

}  // namespace

void cmd_bell(const RunConfig& config, const std::string& out_path, std::ostream& log) {
    config.validate();

    if (!config.strong_physical) {
        const dyn::StrongCouplingParams p = strong_params_from_config(config);
        const dyn::TimeGrid grid = time_grid_or(config, 40.0, 4001);
        CsvWriter csv(out_path, config, "bell (ratio parameterization)", {"t_omega", "B_S"});
        csv.comment("time in units of 1/Omega; theta = " + format_sig(config.bell_theta));
        bell_time_series(csv, p, config.bell_theta, grid, std::nullopt);
        csv.close();
        log << "bell: wrote time series to " << out_path << "\n";
        return;
    }

    // Physical path: resonance data per configured material linewidth.
    CsvWriter csv(out_path, config, "bell (physical parameterization)", {"gamma", "t_omega", "B_S"});
    csv.comment("one series per material.gamma; time in units of 1/Omega of that series");
    std::optional<dyn::StrongCouplingParams> first_params;
    for (const double gamma : config.bell_gamma_list) {
        sphere::PermittivityParams mat = config.material;
        mat.gamma = gamma;
        sphere::ResonanceScan scan = config.scan;
        scan.threads = config.threads;
        const auto modes = sphere::find_resonances(scan, mat, config.geometry);
        const auto mode = sphere::nearest_mode(modes, config.atom_omega);
        if (!mode) {
            log << "warning: no resonance found for gamma = " << format_sig(gamma) << ", skipped\n";
            continue;
        }
        const auto rs = rates::pair_decay_rates(mode->omega_C, config.geometry, mat,
                                                series_options(config));
        const auto p = dyn::StrongCouplingParams::from_resonance(
            *mode, rs.gamma_single, config.atom_gamma0, config.strong_donor_rabi_ratio);
        log << "bell: gamma = " << format_sig(gamma) << " -> l = " << mode->l
            << ", omega_C = " << format_sig(mode->omega_C)
            << ", Omega/delta_omega_C = " << format_sig(p.rabi / p.delta_omega_C, 6) << "\n";
        if (!first_params) first_params = p;
        const dyn::TimeGrid grid = time_grid_or(config, 40.0 / p.rabi, 4001);
        bell_time_series(csv, p, config.bell_theta, grid, gamma);
    }
    csv.close();
    log << "bell: wrote time series to " << out_path << "\n";

    if (!first_params) return;
    // Distance scan of the coupling ratio and of the first B_S maximum.
    const std::string scan_path = out_path + ".scan.csv";
    CsvWriter scan_csv(scan_path, config, "bell (distance scan)",
                       {"delta_r", "omega_over_delta_omega_C", "first_max_B_S"});
    const double lo = std::log(config.bell_scan_lo);
    const double hi = std::log(config.bell_scan_hi);
    const int n = config.bell_scan_points;
    std::vector<std::array<double, 3>> rows(static_cast<size_t>(n));
    const double omega_c = first_params->omega_C;
    const double dwc = first_params->delta_omega_C;
    parallel::for_index(static_cast<size_t>(n), config.threads, [&](size_t i) {
        const double dr = std::exp(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
        sphere::SphereGeometry g = config.geometry;
        g.atom_distance = dr;
        g.second_atom_distance = dr;
        const auto rs = rates::pair_decay_rates(omega_c, g, config.material, series_options(config));
        const double rabi = std::sqrt(2.0 * rs.gamma_single * config.atom_gamma0 * dwc);
        const double rabi_pm = std::sqrt(2.0) * rabi;
        const double rabi_d = config.strong_donor_rabi_ratio * rabi;
        rows[i] = {dr, rabi / dwc, first_bell_maximum(dwc, rabi_pm, rabi_d)};
    });
    for (const auto& r : rows) scan_csv.row({r[0], r[1], r[2]});
    scan_csv.close();
    log << "bell: wrote distance scan to " << scan_path << "\n";
}

void cmd_tripartite(const RunConfig& config, TripartiteMode mode, const std::string& out_path,
                    std::ostream& log) {
    config.validate();
    log << "note: assumes three equivalent atom placements (all pair kernels equal)\n";

    dyn::Trajectory traj;
    std::string flavor;
    if (mode == TripartiteMode::weak_A_excited) {
        flavor = "tripartite (weak coupling, atom A excited)";
        const dyn::TimeGrid grid = time_grid_or(config, 12.0, 1201);  // t in 1/Gamma
        traj = dyn::tripartite_weak(1.0, config.tripartite_gamma_ab,
                                    dyn::TripartiteInitial::A_excited, grid);
    } else {
        flavor = "tripartite (strong coupling, symmetric driving)";
        const dyn::StrongCouplingParams p = strong_params_from_config(config);
        const dyn::TimeGrid grid = time_grid_or(config, 40.0, 4001);  // t in 1/Omega
        traj = dyn::tripartite_strong(p, grid);
    }

    CsvWriter csv(out_path, config, flavor, {"t", "c1_abs2", "c2_abs2", "c3_abs2"});
    csv.comment(mode == TripartiteMode::weak_A_excited ? "time in units of 1/Gamma"
                                                       : "time in units of 1/Omega");
    for (int i = 0; i < traj.grid.n; ++i)
        csv.row({traj.grid.t(i), traj.abs2(0, i), traj.abs2(1, i), traj.abs2(2, i)});
    if (mode == TripartiteMode::weak_A_excited) {
        // Frozen components survive at t -> infinity only for vanishing rates.
        const double g1 = 1.0 + 2.0 * config.tripartite_gamma_ab;
        const double g2 = 1.0 - config.tripartite_gamma_ab;
        const double w1 = g1 == 0.0 ? 1.0 / 3.0 : 0.0;
        const double w2 = g2 == 0.0 ? 2.0 / 3.0 : 0.0;
        csv.comment("asymptotic_weight_1 = " + format_sig(w1));
        csv.comment("asymptotic_weight_2 = " + format_sig(w2));
        csv.comment("asymptotic_weight_3 = 0");
    }
    csv.close();
    log << "tripartite: wrote " << out_path << "\n";
}

}  // namespace sqed::cli
