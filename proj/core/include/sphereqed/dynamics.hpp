#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sphereqed/sphere.hpp"

namespace sqed::dyn {

using Complex = std::complex<double>;

enum class Branch { plus, minus };
enum class DonorPlacement { at_A, at_B };

/// Parameters of the strong-coupling regime at one sharp sphere resonance.
/// rabi = sqrt(2 Gamma_C delta_omega_C) is the single-atom Rabi frequency;
/// the two-atom superposition oscillates at rabi_pm = sqrt(2) rabi.
struct StrongCouplingParams {
    double omega_C = 0.0;
    double delta_omega_C = 0.0;
    double gamma_C = 0.0;  // Gamma at omega_C, Gamma0 units (informational)
    double rabi = 1.0;
    double rabi_pm = std::sqrt(2.0);
    double rabi_donor = 1.0;
    double donor_time = 0.0;  // Delta t = pi / rabi_donor
    double detuning = 0.0;
    Branch branch = Branch::plus;  // which superposition is strongly coupled

    /// Build from the dimensionless ratios the figures are stated in:
    /// r_pm = delta_omega_C / rabi_pm and r_d = pi delta_omega_C / rabi_donor,
    /// with the single-atom Rabi frequency normalized to rabi_scale.
    static StrongCouplingParams from_ratios(double r_pm, double r_d, double rabi_scale = 1.0);

    /// Build from a sphere resonance: gamma_c_over_gamma0 is the single-atom
    /// rate at omega_C in Gamma0 units, gamma0 the free-space rate in omega_T
    /// units. rabi_donor = donor_rabi_ratio * rabi.
    static StrongCouplingParams from_resonance(const sphere::ModeResonance& mode,
                                               double gamma_c_over_gamma0, double gamma0,
                                               double donor_rabi_ratio = 1.0);

    void validate() const;
};

/// Lorentzian memory kernel K(tau) = amplitude * exp(-(decay - i detuning) tau).
/// amplitude is -Omega_eff^2 / 4 for the resonant single-mode model; decay is
/// the resonance linewidth delta_omega_C.
struct KernelModel {
    Complex amplitude{0.0, 0.0};
    double decay = 0.0;
    double detuning = 0.0;
    int parity_sign = +1;  // sign sigma in K_AB = sigma K at the shared resonance

    Complex lambda() const { return {decay, -detuning}; }
    Complex at(double tau) const { return amplitude * std::exp(-lambda() * tau); }
};

struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    int n = 0;  // number of points, n >= 2

    double t(int i) const { return t0 + dt * i; }
    static TimeGrid uniform(double t0, double t1, int points);
};

/// Complex probability amplitudes on a uniform grid, one sequence per label.
struct Trajectory {
    TimeGrid grid;
    std::vector<std::string> labels;
    std::vector<std::vector<Complex>> amplitudes;

    const std::vector<Complex>& amplitude(const std::string& label) const;
    double abs2(size_t series, int i) const {
        return std::norm(amplitudes[series][static_cast<size_t>(i)]);
    }
    double total_abs2(int i) const;
    /// Largest sum over labels of |C|^2 across the grid (<= 1 + 1e-9 for
    /// physical single-excitation dynamics).
    double max_total_abs2() const;
};

/// CSV export: header `t,<label>_re,<label>_im,<label>_abs2` per tracked
/// state, time column in the grid's declared units.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int precision = 12);

/// Markov-limit amplitude C(t) = exp(-rate t / 2) C(0).
Complex weak_amplitude(double rate, double t, Complex initial);

/// Strong-coupling pair amplitudes after donor transfer:
/// the coupled branch carries -exp(-delta_omega_C (t + pi/rabi_donor)/2)
/// sin(rabi_pm t / 2), the other branch stays zero. Donor placement at atom B
/// flips the sign of the minus branch.
std::pair<Complex, Complex> strong_amplitudes(const StrongCouplingParams& p, double t,
                                              DonorPlacement placement = DonorPlacement::at_A);

/// Donor upper-state amplitude on t in [-donor_time, 0].
Complex donor_amplitude(const StrongCouplingParams& p, double t);

/// Driving assembled from the donor interval [-donor_time, 0]:
/// f(t) = prefactor * K_cross convolved with the donor amplitude, where
/// K_cross has amplitude -(rabi_atom * rabi_donor)/4 and the kernel's decay.
struct DonorDrive {
    double rabi_atom = 1.0;
    double rabi_donor = 1.0;
    double donor_time = 0.0;
    double prefactor = std::sqrt(2.0);  // +-sqrt(2) for pair runs, sqrt(3) tripartite
    int simpson_intervals = 512;
};

/// Solves Cdot(t) = int_0^t K(t - t') C(t') dt' + f(t) by the exponential
/// kernel reduction (auxiliary y(t) = int_0^t e^{-lambda (t-t')} C dt' turns
/// the system into two ODEs) integrated with classical RK4. The step must
/// satisfy dt <= 0.02 min(2 pi / Omega_eff, 2 / decay); |C| > 1.01 aborts.
Trajectory volterra_solve(const KernelModel& kernel, const std::function<Complex(double)>& driving,
                          const TimeGrid& grid, Complex initial, const std::string& label = "C");

Trajectory volterra_solve(const KernelModel& kernel, const DonorDrive& drive,
                          const TimeGrid& grid, Complex initial = {0.0, 0.0},
                          const std::string& label = "C");

/// Two-atom donor-driven run: both superposition branches on one grid,
/// labels "C+" and "C-". The branch selected by p.branch couples strongly;
/// the other is exactly dark in the single-resonance model.
Trajectory donor_driven_pair(const StrongCouplingParams& p, DonorPlacement placement,
                             const TimeGrid& grid);

/// Density-operator trajectory of the dissipative master equation
/// rhodot = -1/2 sum_{AA'} Gamma_AA' (s+_A s-_A' rho - 2 s-_A' rho s+_A
/// + rho s+_A s-_A'), RK4, trace drift checked to 1e-9 and positivity to
/// -1e-8 at every stored point.
struct DensityTrajectory {
    TimeGrid grid;
    std::vector<Eigen::MatrixXcd> rho;
};

DensityTrajectory lindblad_evolve(int n_atoms, const Eigen::MatrixXd& gamma_matrix,
                                  const Eigen::MatrixXcd& rho0, const TimeGrid& grid);

/// Weak-coupling three-atom amplitudes in the W-class basis:
/// C_i(t) = exp(-Gamma_i t / 2) C_i(0) with Gamma_1 = Gamma + 2 Gamma_AB and
/// Gamma_2 = Gamma_3 = Gamma - Gamma_AB. Labels "C1", "C2", "C3".
enum class TripartiteInitial { A_excited };

Trajectory tripartite_weak(double gamma, double gamma_ab, TripartiteInitial initial,
                           const TimeGrid& grid);
Trajectory tripartite_weak(double gamma, double gamma_ab, const std::array<Complex, 3>& initial,
                           const TimeGrid& grid);

/// Strong-coupling symmetric-driving run: |1> oscillates at the collective
/// Rabi frequency sqrt(3) rabi, |2> and |3> stay dark.
Trajectory tripartite_strong(const StrongCouplingParams& p, const TimeGrid& grid);

}  // namespace sqed::dyn
