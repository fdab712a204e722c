#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sphereqed/sphere.hpp"

namespace sqed::cli {

enum class SweepAxis { frequency, distance, time };

/// Resolved run configuration. Defaults reproduce the reference microsphere:
/// R = 10 lambda_T, omega_P = 0.5 omega_T, gamma = 1e-6 omega_T,
/// atom-surface distance 0.02 lambda_T, Gamma0 = 1e-6 omega_T.
struct RunConfig {
    sphere::PermittivityParams material{};
    sphere::SphereGeometry geometry{};

    double atom_omega = 1.0501;  // omega_A in omega_T units
    double atom_gamma0 = 1e-6;   // free-space rate in omega_T units

    SweepAxis sweep_axis = SweepAxis::frequency;
    double sweep_start = 1.04;
    double sweep_stop = 1.06;
    int sweep_points = 2001;

    // Resonance scan window and controls.
    sphere::ResonanceScan scan{};

    // Strong-coupling inputs. The ratio pair is the figure parameterization
    // (delta_omega_C / Omega_pm and pi delta_omega_C / Omega_D); the physical
    // path derives everything from the sphere instead.
    double strong_ratio_pm = 0.01;
    double strong_ratio_donor = 0.01;
    double strong_donor_rabi_ratio = 1.0;  // Omega_D / Omega for physical runs
    bool strong_physical = false;

    // Rate series controls (0 = adaptive).
    int series_l_max = 0;
    int series_l_max_cap = 8000;

    // Bell subcommand: material linewidths for the time-series runs, and the
    // analyzer angle.
    std::vector<double> bell_gamma_list{1e-6, 1e-5};
    double bell_theta = M_PI / 4.0;
    double bell_scan_lo = 1e-3;  // distance scan lower edge, lambda_T
    double bell_scan_hi = 0.2;
    int bell_scan_points = 40;

    // Tripartite subcommand.
    double tripartite_gamma_ab = -0.5;  // Gamma_AB / Gamma in weak mode

    int threads = 0;        // 0 = machine parallelism
    int precision = 12;     // CSV significant digits
    std::string out_path;          // empty = subcommand default
    std::string trajectory_path;   // optional amplitude-trajectory export
    std::string density_path;      // optional density-matrix dump

    void validate() const;
    /// Flat key = value view of every resolved setting, sorted by key
    /// (echoed into CSV headers and used for cache fingerprints).
    std::vector<std::pair<std::string, std::string>> resolved() const;
    std::string fingerprint(const std::string& scope) const;
};

/// Parses the line-oriented `key = value` format with '#' comments and dotted
/// section keys. Unknown keys and malformed values raise ConfigError.
RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides);

/// Applies one `key=value` override to an existing config.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace sqed::cli
