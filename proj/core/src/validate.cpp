#include <algorithm>
#include <cmath>
#include <ostream>

#include "sphereqed/bessel.hpp"
#include "sphereqed/commands.hpp"
#include "sphereqed/dynamics.hpp"
#include "sphereqed/entanglement.hpp"
#include "sphereqed/textio.hpp"

namespace sqed::cli {

namespace {

using textio::format_sig;

struct Check {
    std::string name;
    double residual;
    double limit;
    bool pass() const { return residual < limit; }
};

double sum_rule_residual(double x) {
    const int l_max = bessel::recommended_l_max(x) + 10;
    const bessel::Ladder lj = bessel::ladder_j(l_max, {x, 0.0});
    double s = 0.0;
    for (int l = 1; l <= l_max; ++l) {
        const double j = lj.get(l).real();
        const double ll = l;
        s += ll * (ll + 1.0) * (2.0 * ll + 1.0) * j * j / (x * x);
    }
    return std::abs(1.5 * s - 1.0);
}

double wronskian_residual(int l, double x) {
    const auto j = bessel::spherical_j(l, {x, 0.0});
    const auto jm = bessel::spherical_j(l - 1, {x, 0.0});
    const auto y = bessel::spherical_y(l, {x, 0.0});
    const auto ym = bessel::spherical_y(l - 1, {x, 0.0});
    // f' = f_{l-1} - (l+1)/x f
    const auto jp = jm - (l + 1.0) / x * j;
    const auto yp = ym - (l + 1.0) / x * y;
    const double w = (j * yp - jp * y).real();
    return std::abs(w * x * x - 1.0);
}

double lindblad_vs_analytic() {
    const double g = 1.0, gab = 0.6;
    Eigen::MatrixXd gamma(2, 2);
    gamma << g, gab, gab, g;
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(4, 4);
    // |+><+| in the product basis.
    rho0(1, 1) = 0.5;
    rho0(2, 2) = 0.5;
    rho0(1, 2) = 0.5;
    rho0(2, 1) = 0.5;
    const auto grid = dyn::TimeGrid::uniform(0.0, 3.0, 601);
    const auto traj = dyn::lindblad_evolve(2, gamma, rho0, grid);
    double worst = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const auto& rho = traj.rho[static_cast<size_t>(i)];
        const double pop =
            0.5 * (rho(1, 1) + rho(2, 2) + rho(1, 2) + rho(2, 1)).real();
        const double expected = std::exp(-(g + gab) * grid.t(i));
        worst = std::max(worst, std::abs(pop - expected));
    }
    return worst;
}

double volterra_vs_strong(double ratio, double* h_used = nullptr) {
    const auto p = dyn::StrongCouplingParams::from_ratios(ratio, 0.01, 1.0);
    const double t_peak = M_PI / p.rabi_pm;
    const double h = 2.0 * M_PI / p.rabi_pm / 400.0;
    if (h_used) *h_used = h;
    const int n = static_cast<int>(std::ceil(1.5 * t_peak / h)) + 1;
    const auto traj = dyn::donor_driven_pair(p, dyn::DonorPlacement::at_A, {0.0, h, n});
    double peak = 0.0;
    for (int i = 0; i < n; ++i) peak = std::max(peak, traj.abs2(0, i));
    const double expected = std::norm(dyn::strong_amplitudes(p, t_peak).first);
    return std::abs(peak - expected) / expected;
}

double concurrence_eigen_oracle(const ent::TwoQubitState& state) {
    // Independent route: Hermitian eigenvalues of sqrt(rho) rho~ sqrt(rho).
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(state.rho);
    Eigen::Matrix4cd sqrt_rho = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) {
        const double ev = std::max(0.0, es.eigenvalues()(i));
        sqrt_rho += std::sqrt(ev) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    // sigma_y x sigma_y has +-1 on the anti-diagonal: (0,3) = (3,0) = -1, (1,2) = (2,1) = +1.
    yy(0, 3) = -1.0;
    yy(3, 0) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    const Eigen::Matrix4cd rho_tilde = yy * state.rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2(
        (sqrt_rho * rho_tilde * sqrt_rho).eval());
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) lam[static_cast<size_t>(i)] = std::sqrt(std::max(0.0, es2.eigenvalues()(i)));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

}  // namespace

int cmd_validate(std::ostream& log) {
    std::vector<Check> checks;

    for (const double x : {0.5, 5.0, 50.0})
        checks.push_back({"free-space sum rule (x = " + format_sig(x, 3) + ")",
                          sum_rule_residual(x), 1e-8});

    double worst_wronskian = 0.0;
    for (const double x : {0.1, 1.0, 10.0, 100.0})
        for (const int l : {1, 5, 20, 80})
            worst_wronskian = std::max(worst_wronskian, wronskian_residual(l, x));
    checks.push_back({"Wronskian identity (grid)", worst_wronskian, 1e-10});

    checks.push_back({"Lindblad vs analytic |+> population", lindblad_vs_analytic(), 1e-6});

    checks.push_back({"Volterra vs strong-coupling first peak (ratio 0.01)",
                      volterra_vs_strong(0.01), 0.05});

    double worst_conc = 0.0;
    for (const double p : {0.1, 0.5, 0.9}) {
        const auto st = ent::build_mixed_state(p, ent::MixSign::plus);
        worst_conc = std::max(worst_conc,
                              std::abs(ent::concurrence(st) - concurrence_eigen_oracle(st)));
    }
    checks.push_back({"Wootters concurrence vs eigenvalue oracle", worst_conc, 1e-10});

    // RK4 order: halving the step must shrink the defect against a fine
    // reference by at least 8x.
    {
        const auto p = dyn::StrongCouplingParams::from_ratios(0.01, 0.01, 1.0);
        dyn::KernelModel k;
        k.amplitude = -0.25 * p.rabi_pm * p.rabi_pm;
        k.decay = p.delta_omega_C;
        const double t_end = 2.0 * M_PI / p.rabi_pm;
        auto run = [&](int steps) {
            const auto traj = dyn::volterra_solve(
                k, [](double) { return dyn::Complex{0.0, 0.0}; },
                dyn::TimeGrid{0.0, t_end / steps, steps + 1}, {1.0, 0.0});
            return traj.amplitudes[0].back();
        };
        const auto ref = run(4096);
        const double e1 = std::abs(run(128) - ref);
        const double e2 = std::abs(run(256) - ref);
        checks.push_back({"RK4 step-halving error ratio >= 8", e2 > 0.0 ? 8.0 / (e1 / e2) : 0.0,
                          1.0});
    }

    int failures = 0;
    for (const auto& c : checks) {
        const bool ok = c.pass();
        if (!ok) ++failures;
        log << (ok ? "pass" : "FAIL") << "  " << c.name << "  residual = " << format_sig(c.residual, 4)
            << " (limit " << format_sig(c.limit, 3) << ")\n";
    }
    log << (failures == 0 ? "validate: all checks passed\n"
                          : "validate: " + std::to_string(failures) + " check(s) failed\n");
    return failures;
}

}  // namespace sqed::cli
