#include "sphereqed/dynamics.hpp"

#include <cmath>
#include <ostream>

#include "sphereqed/errors.hpp"
#include "sphereqed/textio.hpp"

namespace sqed::dyn {

namespace {

constexpr Complex kI{0.0, 1.0};

// Composite Simpson over [-dt, 0] of e^{lambda t'} C_D(t').
Complex donor_overlap(const KernelModel& kernel, const StrongCouplingParams& p, int intervals) {
    const Complex lam = kernel.lambda();
    const int n = intervals % 2 == 0 ? intervals : intervals + 1;
    const double h = p.donor_time / n;
    auto integrand = [&](double tp) {
        return std::exp(lam * tp) * donor_amplitude(p, tp);
    };
    Complex sum = integrand(-p.donor_time) + integrand(0.0);
    for (int i = 1; i < n; ++i) {
        const double tp = -p.donor_time + h * i;
        sum += integrand(tp) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    return sum * (h / 3.0);
}

StrongCouplingParams params_for_drive(const KernelModel& kernel, const DonorDrive& d) {
    StrongCouplingParams p;
    p.delta_omega_C = kernel.decay;
    p.rabi = d.rabi_atom;
    p.rabi_pm = std::sqrt(2.0) * d.rabi_atom;
    p.rabi_donor = d.rabi_donor;
    p.donor_time = d.donor_time > 0.0 ? d.donor_time : M_PI / d.rabi_donor;
    return p;
}

}  // namespace

StrongCouplingParams StrongCouplingParams::from_ratios(double r_pm, double r_d,
                                                       double rabi_scale) {
    if (r_pm <= 0.0 || r_d <= 0.0) throw std::invalid_argument("strong-coupling ratios must be > 0");
    StrongCouplingParams p;
    p.rabi = rabi_scale;
    p.rabi_pm = std::sqrt(2.0) * rabi_scale;
    p.delta_omega_C = r_pm * p.rabi_pm;
    p.rabi_donor = M_PI * p.delta_omega_C / r_d;
    p.donor_time = M_PI / p.rabi_donor;
    p.validate();
    return p;
}

StrongCouplingParams StrongCouplingParams::from_resonance(const sphere::ModeResonance& mode,
                                                          double gamma_c_over_gamma0,
                                                          double gamma0, double donor_rabi_ratio) {
    StrongCouplingParams p;
    p.omega_C = mode.omega_C;
    p.delta_omega_C = mode.delta_omega_C;
    p.gamma_C = gamma_c_over_gamma0;
    p.rabi = std::sqrt(2.0 * gamma_c_over_gamma0 * gamma0 * mode.delta_omega_C);
    p.rabi_pm = std::sqrt(2.0) * p.rabi;
    p.rabi_donor = donor_rabi_ratio * p.rabi;
    p.donor_time = M_PI / p.rabi_donor;
    p.branch = (mode.l % 2 != 0) ? Branch::plus : Branch::minus;
    p.validate();
    return p;
}

void StrongCouplingParams::validate() const {
    if (rabi <= 0.0 || rabi_pm <= 0.0 || rabi_donor <= 0.0)
        throw std::invalid_argument("Rabi frequencies must be positive");
    if (delta_omega_C < 0.0) throw std::invalid_argument("linewidth must be non-negative");
    if (std::abs(rabi_pm - std::sqrt(2.0) * rabi) > 1e-12 * rabi_pm)
        throw std::invalid_argument("rabi_pm must equal sqrt(2) rabi");
    if (donor_time > 0.0 && std::abs(donor_time - M_PI / rabi_donor) > 1e-12 * donor_time)
        throw std::invalid_argument("donor_time must equal pi / rabi_donor");
}

TimeGrid TimeGrid::uniform(double t0, double t1, int points) {
    if (points < 2 || t1 <= t0) throw std::invalid_argument("bad time grid");
    return {t0, (t1 - t0) / (points - 1), points};
}

const std::vector<Complex>& Trajectory::amplitude(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return amplitudes[i];
    throw std::out_of_range("trajectory has no label " + label);
}

double Trajectory::total_abs2(int i) const {
    double s = 0.0;
    for (size_t k = 0; k < amplitudes.size(); ++k) s += abs2(k, i);
    return s;
}

double Trajectory::max_total_abs2() const {
    double m = 0.0;
    for (int i = 0; i < grid.n; ++i) m = std::max(m, total_abs2(i));
    return m;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int precision) {
    out << "t";
    for (const auto& label : traj.labels)
        out << ',' << label << "_re," << label << "_im," << label << "_abs2";
    out << '\n';
    for (int i = 0; i < traj.grid.n; ++i) {
        out << textio::format_sig(traj.grid.t(i), precision);
        for (size_t k = 0; k < traj.amplitudes.size(); ++k) {
            const Complex c = traj.amplitudes[k][static_cast<size_t>(i)];
            out << ',' << textio::format_sig(c.real(), precision) << ','
                << textio::format_sig(c.imag(), precision) << ','
                << textio::format_sig(std::norm(c), precision);
        }
        out << '\n';
    }
}

Complex weak_amplitude(double rate, double t, Complex initial) {
    if (t < 0.0) throw std::domain_error("weak_amplitude: t must be >= 0");
    if (rate < 0.0) throw std::domain_error("weak_amplitude: rate must be >= 0");
    return std::exp(-0.5 * rate * t) * initial;
}

std::pair<Complex, Complex> strong_amplitudes(const StrongCouplingParams& p, double t,
                                              DonorPlacement placement) {
    if (t < 0.0) throw std::domain_error("strong_amplitudes: t must be >= 0");
    const double envelope = std::exp(-0.5 * p.delta_omega_C * (t + M_PI / p.rabi_donor));
    Complex active = -envelope * std::sin(0.5 * p.rabi_pm * t);
    if (p.branch == Branch::minus && placement == DonorPlacement::at_B) active = -active;
    if (p.branch == Branch::plus) return {active, Complex{0.0, 0.0}};
    return {Complex{0.0, 0.0}, active};
}

Complex donor_amplitude(const StrongCouplingParams& p, double t) {
    if (t < -p.donor_time - 1e-12 || t > 1e-12)
        throw std::domain_error("donor_amplitude: t must lie in [-donor_time, 0]");
    const double s = t + p.donor_time;
    return std::exp(-0.5 * p.delta_omega_C * s) * std::cos(0.5 * p.rabi_donor * s);
}

Trajectory volterra_solve(const KernelModel& kernel, const std::function<Complex(double)>& driving,
                          const TimeGrid& grid, Complex initial, const std::string& label) {
    if (grid.n < 2 || grid.dt <= 0.0) throw std::invalid_argument("volterra_solve: bad grid");
    const double omega_eff = 2.0 * std::sqrt(std::abs(kernel.amplitude));
    double h_max = std::numeric_limits<double>::infinity();
    if (omega_eff > 0.0) h_max = std::min(h_max, 0.02 * 2.0 * M_PI / omega_eff);
    if (kernel.decay > 0.0) h_max = std::min(h_max, 0.02 * 2.0 / kernel.decay);
    if (grid.dt > h_max)
        throw NumericalError("volterra_solve: step " + std::to_string(grid.dt) +
                             " exceeds the resolution bound " + std::to_string(h_max));

    // State (C, y) with ydot = C - lambda y, Cdot = A y + f.
    const Complex lam = kernel.lambda();
    const Complex amp = kernel.amplitude;
    auto rhs = [&](double t, Complex c, Complex y, Complex& dc, Complex& dy) {
        dc = amp * y + driving(t);
        dy = c - lam * y;
    };

    Trajectory traj;
    traj.grid = grid;
    traj.labels = {label};
    traj.amplitudes.resize(1);
    auto& out = traj.amplitudes[0];
    out.resize(static_cast<size_t>(grid.n));

    Complex c = initial;
    Complex y{0.0, 0.0};
    out[0] = c;
    const double h = grid.dt;
    for (int i = 1; i < grid.n; ++i) {
        const double t = grid.t(i - 1);
        Complex k1c, k1y, k2c, k2y, k3c, k3y, k4c, k4y;
        rhs(t, c, y, k1c, k1y);
        rhs(t + 0.5 * h, c + 0.5 * h * k1c, y + 0.5 * h * k1y, k2c, k2y);
        rhs(t + 0.5 * h, c + 0.5 * h * k2c, y + 0.5 * h * k2y, k3c, k3y);
        rhs(t + h, c + h * k3c, y + h * k3y, k4c, k4y);
        c += (h / 6.0) * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        if (std::abs(c) > 1.01)
            throw NumericalError("volterra_solve: |C| = " + std::to_string(std::abs(c)) +
                                 " exceeded 1.01 at t = " + std::to_string(grid.t(i)) +
                                 " (diverging integration)");
        out[static_cast<size_t>(i)] = c;
    }
    return traj;
}

Trajectory volterra_solve(const KernelModel& kernel, const DonorDrive& drive,
                          const TimeGrid& grid, Complex initial, const std::string& label) {
    const StrongCouplingParams p = params_for_drive(kernel, drive);
    const Complex overlap = donor_overlap(kernel, p, drive.simpson_intervals);
    const Complex cross_amp = -0.25 * drive.rabi_atom * drive.rabi_donor;
    const Complex lam = kernel.lambda();
    const Complex f0 = drive.prefactor * cross_amp * overlap;
    auto f = [f0, lam](double t) { return f0 * std::exp(-lam * t); };
    return volterra_solve(kernel, f, grid, initial, label);
}

Trajectory donor_driven_pair(const StrongCouplingParams& p, DonorPlacement placement,
                             const TimeGrid& grid) {
    p.validate();
    const bool plus_active = (p.branch == Branch::plus);

    KernelModel active_kernel;
    active_kernel.amplitude = -0.25 * p.rabi_pm * p.rabi_pm;
    active_kernel.decay = p.delta_omega_C;
    active_kernel.detuning = p.detuning;
    active_kernel.parity_sign = plus_active ? +1 : -1;

    DonorDrive drive;
    drive.rabi_atom = p.rabi;
    drive.rabi_donor = p.rabi_donor;
    drive.donor_time = p.donor_time;
    // f_pm = 2^{-1/2} [K_AD +- K_BD] * C_D; at the matched parity this is
    // sqrt(2) K_cross, with the minus branch flipped for a donor at atom B.
    double sign = 1.0;
    if (!plus_active && placement == DonorPlacement::at_B) sign = -1.0;
    drive.prefactor = sign * std::sqrt(2.0);

    Trajectory active = volterra_solve(active_kernel, drive, grid, {0.0, 0.0}, "C");

    Trajectory traj;
    traj.grid = grid;
    traj.labels = {"C+", "C-"};
    traj.amplitudes.resize(2);
    std::vector<Complex> zeros(static_cast<size_t>(grid.n), Complex{0.0, 0.0});
    if (plus_active) {
        traj.amplitudes[0] = std::move(active.amplitudes[0]);
        traj.amplitudes[1] = std::move(zeros);
    } else {
        traj.amplitudes[0] = std::move(zeros);
        traj.amplitudes[1] = std::move(active.amplitudes[0]);
    }
    return traj;
}

DensityTrajectory lindblad_evolve(int n_atoms, const Eigen::MatrixXd& gamma_matrix,
                                  const Eigen::MatrixXcd& rho0, const TimeGrid& grid) {
    if (n_atoms != 2 && n_atoms != 3)
        throw std::invalid_argument("lindblad_evolve: n_atoms must be 2 or 3");
    if (gamma_matrix.rows() != n_atoms || gamma_matrix.cols() != n_atoms)
        throw std::invalid_argument("lindblad_evolve: gamma matrix shape mismatch");
    if (!gamma_matrix.isApprox(gamma_matrix.transpose(), 1e-12))
        throw std::invalid_argument("lindblad_evolve: gamma matrix must be symmetric");
    const int dim = 1 << n_atoms;
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw std::invalid_argument("lindblad_evolve: rho0 shape mismatch");

    // Dissipator positivity for the collective-decay form: eigenvalues of the
    // rate matrix must be non-negative (Gamma +- Gamma_AB >= 0 for two atoms).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(gamma_matrix);
    if (ges.eigenvalues().minCoeff() < -1e-12)
        throw std::invalid_argument("lindblad_evolve: rate matrix not positive semidefinite");

    // Lowering operator of each atom in the product basis (qubit 0 = upper).
    std::vector<Eigen::MatrixXcd> lower(static_cast<size_t>(n_atoms));
    for (int a = 0; a < n_atoms; ++a) {
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
        for (int s = 0; s < dim; ++s) {
            const int bit = n_atoms - 1 - a;
            if (((s >> bit) & 1) == 0) op(s | (1 << bit), s) = 1.0;
        }
        lower[static_cast<size_t>(a)] = op;
    }

    auto rhs = [&](const Eigen::MatrixXcd& rho) {
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
        for (int a = 0; a < n_atoms; ++a) {
            for (int b = 0; b < n_atoms; ++b) {
                const double g = gamma_matrix(a, b);
                if (g == 0.0) continue;
                const Eigen::MatrixXcd raise_a = lower[static_cast<size_t>(a)].adjoint();
                const Eigen::MatrixXcd& low_b = lower[static_cast<size_t>(b)];
                d -= 0.5 * g *
                     (raise_a * low_b * rho - 2.0 * low_b * rho * raise_a + rho * raise_a * low_b);
            }
        }
        return d;
    };

    DensityTrajectory out;
    out.grid = grid;
    out.rho.reserve(static_cast<size_t>(grid.n));
    Eigen::MatrixXcd rho = rho0;
    out.rho.push_back(rho);
    const double h = grid.dt;
    for (int i = 1; i < grid.n; ++i) {
        const Eigen::MatrixXcd k1 = rhs(rho);
        const Eigen::MatrixXcd k2 = rhs(rho + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = rhs(rho + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = rhs(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double trace_drift = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
        if (trace_drift > 1e-9)
            throw NumericalError("lindblad_evolve: trace drift " + std::to_string(trace_drift) +
                                 " at t = " + std::to_string(grid.t(i)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw NumericalError("lindblad_evolve: density matrix lost positivity (min eig = " +
                                 std::to_string(es.eigenvalues().minCoeff()) + ") at t = " +
                                 std::to_string(grid.t(i)));
        out.rho.push_back(rho);
    }
    return out;
}

Trajectory tripartite_weak(double gamma, double gamma_ab, const std::array<Complex, 3>& initial,
                           const TimeGrid& grid) {
    const double g1 = gamma + 2.0 * gamma_ab;
    const double g23 = gamma - gamma_ab;
    if (g1 < 0.0 || g23 < 0.0)
        throw std::invalid_argument("tripartite_weak: negative collective rate (Gamma_1 = " +
                                    std::to_string(g1) + ", Gamma_2 = " + std::to_string(g23) + ")");
    Trajectory traj;
    traj.grid = grid;
    traj.labels = {"C1", "C2", "C3"};
    traj.amplitudes.assign(3, std::vector<Complex>(static_cast<size_t>(grid.n)));
    const double rates[3] = {g1, g23, g23};
    for (int i = 0; i < grid.n; ++i) {
        const double t = grid.t(i);
        for (int k = 0; k < 3; ++k)
            traj.amplitudes[static_cast<size_t>(k)][static_cast<size_t>(i)] =
                weak_amplitude(rates[k], t, initial[static_cast<size_t>(k)]);
    }
    return traj;
}

Trajectory tripartite_weak(double gamma, double gamma_ab, TripartiteInitial,
                           const TimeGrid& grid) {
    // Atom A excited at t = 0 in the W-class basis.
    const std::array<Complex, 3> c0 = {Complex{1.0 / std::sqrt(3.0), 0.0},
                                       Complex{std::sqrt(2.0 / 3.0), 0.0}, Complex{0.0, 0.0}};
    return tripartite_weak(gamma, gamma_ab, c0, grid);
}

Trajectory tripartite_strong(const StrongCouplingParams& p, const TimeGrid& grid) {
    p.validate();
    const double rabi_collective = std::sqrt(3.0) * p.rabi;
    Trajectory traj;
    traj.grid = grid;
    traj.labels = {"C1", "C2", "C3"};
    traj.amplitudes.assign(3, std::vector<Complex>(static_cast<size_t>(grid.n)));
    for (int i = 0; i < grid.n; ++i) {
        const double t = grid.t(i);
        const double envelope = std::exp(-0.5 * p.delta_omega_C * (t + M_PI / p.rabi_donor));
        traj.amplitudes[0][static_cast<size_t>(i)] =
            -envelope * std::sin(0.5 * rabi_collective * t);
        traj.amplitudes[1][static_cast<size_t>(i)] = Complex{0.0, 0.0};
        traj.amplitudes[2][static_cast<size_t>(i)] = Complex{0.0, 0.0};
    }
    return traj;
}

}  // namespace sqed::dyn
