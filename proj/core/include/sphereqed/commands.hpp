#pragma once

#include <iosfwd>
#include <string>

#include "sphereqed/config.hpp"

namespace sqed::cli {

/// Process exit codes: 0 success, 1 config error, 2 numerical failure,
/// 3 I/O error.
enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2, exit_io = 3 };

enum class EofRegime { weak, strong };
enum class TripartiteMode { weak_A_excited, strong_symmetric };

/// Scans the configured window, writes/reuses the resonance cache at
/// out_path and prints the mode nearest atom.omega_A.
void cmd_resonances(const RunConfig& config, const std::string& out_path, std::ostream& log);

/// Frequency or distance sweep of Gamma_+- / Gamma0
/// (columns x, gamma_plus_over_gamma0, gamma_minus_over_gamma0, converged).
void cmd_rates(const RunConfig& config, const std::string& out_path, std::ostream& log);

/// Entanglement-of-formation time series; weak emits
/// (t_gamma_pm, p, E_F, bound_p), strong (t_omega, p, E_F).
void cmd_eof(const RunConfig& config, EofRegime regime, const std::string& out_path,
             std::ostream& log);

/// Bell-parameter time series (t, B_S); the physical path adds one series
/// per configured material linewidth and a distance scan of Omega/delta_omega_C
/// with the first B_S maximum.
void cmd_bell(const RunConfig& config, const std::string& out_path, std::ostream& log);

/// Three-atom single-excitation dynamics (t, |C1|^2, |C2|^2, |C3|^2) plus
/// asymptotic weights.
void cmd_tripartite(const RunConfig& config, TripartiteMode mode, const std::string& out_path,
                    std::ostream& log);

/// Runs the built-in oracle suite and prints one pass/fail line per check.
/// Returns the number of failures.
int cmd_validate(std::ostream& log);

/// Default output path per subcommand when --out is not given.
std::string default_out_path(const std::string& subcommand);

}  // namespace sqed::cli
