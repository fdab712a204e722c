#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sphereqed/dynamics.hpp"
#include "sphereqed/errors.hpp"

using namespace sqed;
using dyn::Branch;
using dyn::Complex;
using dyn::DonorPlacement;
using dyn::KernelModel;
using dyn::StrongCouplingParams;
using dyn::TimeGrid;

namespace {

StrongCouplingParams reference_ratios() {
    // delta_omega_C / Omega_pm = 0.01, pi delta_omega_C / Omega_D = 0.01
    return StrongCouplingParams::from_ratios(0.01, 0.01, 1.0);
}

KernelModel pair_kernel(const StrongCouplingParams& p) {
    KernelModel k;
    k.amplitude = -0.25 * p.rabi_pm * p.rabi_pm;
    k.decay = p.delta_omega_C;
    return k;
}

}  // namespace

TEST_CASE("weak amplitude") {
    CHECK(dyn::weak_amplitude(0.7, 0.0, {0.3, 0.1}) == Complex{0.3, 0.1});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (const double t : {0.1, 1.0, 4.0}) {
        const double got = std::norm(dyn::weak_amplitude(1.3, t, {inv_sqrt2, 0.0}));
        CHECK(got == doctest::Approx(0.5 * std::exp(-1.3 * t)).epsilon(1e-12));
    }
    CHECK(dyn::weak_amplitude(0.0, 77.0, {0.5, 0.0}) == Complex{0.5, 0.0});
    CHECK_THROWS_AS((void)dyn::weak_amplitude(1.0, -0.1, {1.0, 0.0}), std::domain_error);
}

TEST_CASE("strong-coupling amplitudes") {
    const auto p = reference_ratios();
    const auto at0 = dyn::strong_amplitudes(p, 0.0);
    CHECK(at0.first == Complex{0.0, 0.0});
    CHECK(at0.second == Complex{0.0, 0.0});

    // first peak |C|^2 = exp(-(0.01 pi + 0.01)) at t = pi / Omega_pm
    const double t_peak = M_PI / p.rabi_pm;
    const double expected = std::exp(-(0.01 * M_PI + 0.01));
    CHECK(std::norm(dyn::strong_amplitudes(p, t_peak).first) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.959429994553980684).epsilon(1e-12));
    CHECK(dyn::strong_amplitudes(p, t_peak).second == Complex{0.0, 0.0});

    // undamped limit reaches a full Rabi peak
    StrongCouplingParams undamped = p;
    undamped.delta_omega_C = 0.0;
    CHECK(std::norm(dyn::strong_amplitudes(undamped, t_peak).first) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // minus branch with the donor at atom B flips sign
    StrongCouplingParams minus = p;
    minus.branch = Branch::minus;
    const auto at_a = dyn::strong_amplitudes(minus, 0.3, DonorPlacement::at_A);
    const auto at_b = dyn::strong_amplitudes(minus, 0.3, DonorPlacement::at_B);
    CHECK(at_a.second == -at_b.second);
    CHECK(at_a.first == Complex{0.0, 0.0});
}

TEST_CASE("donor amplitude") {
    const auto p = reference_ratios();
    CHECK(dyn::donor_amplitude(p, -p.donor_time) == Complex{1.0, 0.0});
    CHECK(std::abs(dyn::donor_amplitude(p, 0.0)) < 1e-12);
    const double mid = -0.5 * p.donor_time;
    const double expected =
        std::exp(-p.delta_omega_C * p.donor_time / 4.0) * std::cos(M_PI / 4.0);
    CHECK(dyn::donor_amplitude(p, mid).real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS((void)dyn::donor_amplitude(p, 0.5), std::domain_error);
}

TEST_CASE("volterra reproduces the damped Rabi solution") {
    const auto p = reference_ratios();
    KernelModel k;
    k.amplitude = -0.25 * p.rabi * p.rabi;  // single-atom kernel
    k.decay = p.delta_omega_C;
    const double t_end = 4.0 * M_PI / p.rabi;
    const int n = 2001;
    const auto traj = dyn::volterra_solve(
        k, [](double) { return Complex{0.0, 0.0}; }, TimeGrid::uniform(0.0, t_end, n), {1.0, 0.0});
    for (int i = 0; i < n; i += 50) {
        const double t = traj.grid.t(i);
        const double approx = std::exp(-0.5 * k.decay * t) * std::cos(0.5 * p.rabi * t);
        CHECK(std::abs(traj.amplitudes[0][static_cast<size_t>(i)].real() - approx) < 0.05);
    }
    CHECK(traj.max_total_abs2() <= 1.0 + 1e-9);
}

TEST_CASE("zero kernel, zero driving: constant amplitude") {
    KernelModel k;
    k.amplitude = {0.0, 0.0};
    k.decay = 1.0;
    const auto traj = dyn::volterra_solve(
        k, [](double) { return Complex{0.0, 0.0}; }, TimeGrid::uniform(0.0, 5.0, 201),
        {0.25, -0.5});
    for (const auto& c : traj.amplitudes[0]) CHECK(std::abs(c - Complex{0.25, -0.5}) < 1e-12);
}

TEST_CASE("donor-driven pair matches the analytic first peak") {
    const auto p = reference_ratios();
    const double t_peak = M_PI / p.rabi_pm;
    const double h = 2.0 * M_PI / p.rabi_pm / 600.0;
    const int n = static_cast<int>(std::ceil(1.3 * t_peak / h));
    const auto traj = dyn::donor_driven_pair(p, DonorPlacement::at_A, {0.0, h, n});
    double peak = 0.0;
    for (int i = 0; i < n; ++i) peak = std::max(peak, traj.abs2(0, i));
    const double expected = std::norm(dyn::strong_amplitudes(p, t_peak).first);
    CHECK(std::abs(peak - expected) / expected < 0.05);
    // the dark branch stays dark
    for (int i = 0; i < n; i += 100) CHECK(traj.abs2(1, i) == 0.0);
}

TEST_CASE("volterra/analytic agreement improves as the ratios shrink") {
    // Both stated ratios scale together (the analytic form drops terms of
    // first order in each).
    double prev = 1.0;
    for (const double ratio : {0.02, 0.01, 0.005}) {
        const auto p = StrongCouplingParams::from_ratios(ratio, ratio, 1.0);
        const double t_peak = M_PI / p.rabi_pm;
        const double h = 2.0 * M_PI / p.rabi_pm / 600.0;
        const int n = static_cast<int>(std::ceil(1.3 * t_peak / h));
        const auto traj = dyn::donor_driven_pair(p, DonorPlacement::at_A, {0.0, h, n});
        double peak = 0.0;
        for (int i = 0; i < n; ++i) peak = std::max(peak, traj.abs2(0, i));
        const double expected = std::norm(dyn::strong_amplitudes(p, t_peak).first);
        const double err = std::abs(peak - expected) / expected;
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("step-size contract") {
    const auto p = reference_ratios();
    KernelModel k = pair_kernel(p);
    // grid step far above 0.02 * 2 pi / Omega_pm
    const double bad_h = 2.0 * M_PI / p.rabi_pm;
    CHECK_THROWS_AS((void)dyn::volterra_solve(k, [](double) { return Complex{0.0, 0.0}; },
                                              TimeGrid{0.0, bad_h, 10}, {1.0, 0.0}),
                    NumericalError);
}

TEST_CASE("divergence guard aborts unstable runs") {
    KernelModel k;
    k.amplitude = {+4.0, 0.0};  // growth instead of decay
    k.decay = 1.0;
    CHECK_THROWS_AS((void)dyn::volterra_solve(k, [](double) { return Complex{0.0, 0.0}; },
                                              TimeGrid{0.0, 0.01, 2001}, {1.0, 0.0}),
                    NumericalError);
}

TEST_CASE("volterra reduces to the Markov decay for a broad kernel") {
    // kernel memory much faster than the coupling: C(t) -> e^{-Gamma t/2}
    // with Gamma = Omega^2 / (2 decay)
    KernelModel k;
    k.amplitude = {-0.25, 0.0};  // Omega = 1
    k.decay = 20.0;
    const double gamma_eff = 1.0 / (2.0 * k.decay);
    const double t_end = 2.0 / gamma_eff;
    const int n = 40001;
    const auto traj = dyn::volterra_solve(
        k, [](double) { return Complex{0.0, 0.0}; }, TimeGrid::uniform(0.0, t_end, n),
        {1.0, 0.0});
    for (int i = 0; i < n; i += 4000) {
        const double expected = std::exp(-0.5 * gamma_eff * traj.grid.t(i));
        CHECK(std::abs(std::abs(traj.amplitudes[0][static_cast<size_t>(i)]) - expected) < 0.02);
    }
}

TEST_CASE("RK4 order from step halving") {
    const auto p = reference_ratios();
    KernelModel k = pair_kernel(p);
    const double t_end = 2.0 * M_PI / p.rabi_pm;
    auto at_end = [&](int steps) {
        const auto traj = dyn::volterra_solve(
            k, [](double) { return Complex{0.0, 0.0}; }, TimeGrid{0.0, t_end / steps, steps + 1},
            {1.0, 0.0});
        return traj.amplitudes[0].back();
    };
    const Complex ref = at_end(16384);
    const double e1 = std::abs(at_end(256) - ref);
    const double e2 = std::abs(at_end(512) - ref);
    CHECK(e1 / e2 > std::pow(2.0, 3.5));
}

TEST_CASE("strong-coupling peak times") {
    // Figure-resolution grid: the envelope shifts each peak earlier by
    // O(delta_omega_C / rabi_pm^2), below one step at this spacing.
    const auto p = reference_ratios();
    const double h = 2.0 * M_PI / p.rabi_pm / 100.0;
    const int n = static_cast<int>(std::ceil(6.5 * M_PI / p.rabi_pm / h));
    int found = 0;
    double prev2 = 0.0, prev1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = std::norm(dyn::strong_amplitudes(p, i * h).first);
        if (i >= 2 && prev1 >= prev2 && prev1 >= v && prev1 > 0.1) {
            ++found;
            const double t_max = (i - 1) * h;
            const double expected = (2.0 * found - 1.0) * M_PI / p.rabi_pm;
            CHECK(std::abs(t_max - expected) <= h);
        }
        prev2 = prev1;
        prev1 = v;
    }
    CHECK(found >= 3);
}

TEST_CASE("lindblad: dark ground state stays put") {
    Eigen::MatrixXd gamma(2, 2);
    gamma << 1.0, 0.5, 0.5, 1.0;
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(4, 4);
    rho0(3, 3) = 1.0;
    const auto traj = dyn::lindblad_evolve(2, gamma, rho0, TimeGrid::uniform(0.0, 5.0, 201));
    CHECK((traj.rho.back() - rho0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lindblad matches the analytic |+> decay") {
    const double g = 1.0, gab = 0.8;
    Eigen::MatrixXd gamma(2, 2);
    gamma << g, gab, gab, g;
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(4, 4);
    rho0(1, 1) = 0.5;
    rho0(2, 2) = 0.5;
    rho0(1, 2) = 0.5;
    rho0(2, 1) = 0.5;
    const auto grid = TimeGrid::uniform(0.0, 4.0, 801);
    const auto traj = dyn::lindblad_evolve(2, gamma, rho0, grid);
    for (int i = 0; i < grid.n; i += 40) {
        const auto& rho = traj.rho[static_cast<size_t>(i)];
        const double plus_pop = 0.5 * (rho(1, 1) + rho(2, 2) + rho(1, 2) + rho(2, 1)).real();
        CHECK(std::abs(plus_pop - std::exp(-(g + gab) * grid.t(i))) < 1e-6);
    }
}

TEST_CASE("lindblad matches the two-branch mixture from |U_A>") {
    const double g = 1.0, gab = 0.4;
    Eigen::MatrixXd gamma(2, 2);
    gamma << g, gab, gab, g;
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(4, 4);
    rho0(1, 1) = 1.0;  // |U_A L_B>
    const auto grid = TimeGrid::uniform(0.0, 4.0, 801);
    const auto traj = dyn::lindblad_evolve(2, gamma, rho0, grid);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < grid.n; i += 80) {
        const double t = grid.t(i);
        const Complex cp = dyn::weak_amplitude(g + gab, t, {inv_sqrt2, 0.0});
        const Complex cm = dyn::weak_amplitude(g - gab, t, {inv_sqrt2, 0.0});
        // |psi> = cp |+> + cm |->; in the product basis the single-excitation
        // block is [(cp + cm), (cp - cm)] / sqrt(2).
        const Complex ua = (cp + cm) * inv_sqrt2;
        const Complex ub = (cp - cm) * inv_sqrt2;
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
        expected(1, 1) = std::norm(ua);
        expected(2, 2) = std::norm(ub);
        expected(1, 2) = ua * std::conj(ub);
        expected(2, 1) = std::conj(expected(1, 2));
        expected(3, 3) = 1.0 - std::norm(ua) - std::norm(ub);
        // trace distance = (1/2) sum |eigenvalues| of the difference
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            (traj.rho[static_cast<size_t>(i)] - expected).eval());
        CHECK(0.5 * es.eigenvalues().cwiseAbs().sum() < 1e-6);
    }
}

TEST_CASE("lindblad input validation and numerical guards") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.2, 0.3, 1.0;
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(4, 4);
    rho0(3, 3) = 1.0;
    CHECK_THROWS_AS((void)dyn::lindblad_evolve(2, asym, rho0, TimeGrid::uniform(0, 1, 11)),
                    std::invalid_argument);

    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 1.5, 1.5, 1.0;  // Gamma - Gamma_AB < 0
    CHECK_THROWS_AS((void)dyn::lindblad_evolve(2, indefinite, rho0, TimeGrid::uniform(0, 1, 11)),
                    std::invalid_argument);

    // wildly large step drives RK4 unstable and trips a guard
    Eigen::MatrixXd gamma(2, 2);
    gamma << 1.0, 0.0, 0.0, 1.0;
    Eigen::MatrixXcd excited = Eigen::MatrixXcd::Zero(4, 4);
    excited(0, 0) = 1.0;
    CHECK_THROWS_AS((void)dyn::lindblad_evolve(2, gamma, excited, TimeGrid{0.0, 8.0, 600}),
                    NumericalError);
}

TEST_CASE("tripartite weak-coupling limits") {
    const auto grid = TimeGrid::uniform(0.0, 10.0, 501);

    // independent atoms: common decay
    const auto ind = dyn::tripartite_weak(1.0, 0.0, dyn::TripartiteInitial::A_excited, grid);
    for (int i = 0; i < grid.n; i += 50) {
        const double decay = std::exp(-0.5 * grid.t(i));
        CHECK(std::abs(ind.amplitudes[0][static_cast<size_t>(i)].real() -
                       decay / std::sqrt(3.0)) < 1e-12);
        CHECK(std::abs(ind.amplitudes[1][static_cast<size_t>(i)].real() -
                       decay * std::sqrt(2.0 / 3.0)) < 1e-12);
    }

    // Gamma_AB = -Gamma/2 freezes |1>
    const auto frozen1 = dyn::tripartite_weak(1.0, -0.5, dyn::TripartiteInitial::A_excited, grid);
    for (int i = 0; i < grid.n; i += 50)
        CHECK(frozen1.abs2(0, i) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(frozen1.abs2(1, grid.n - 1) <
          std::exp(-1.4 * grid.t(grid.n - 1)));  // decays at 3/2 Gamma

    // Gamma_AB = Gamma freezes |2>
    const auto frozen2 = dyn::tripartite_weak(1.0, 1.0, dyn::TripartiteInitial::A_excited, grid);
    for (int i = 0; i < grid.n; i += 50)
        CHECK(frozen2.abs2(1, i) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(frozen2.abs2(0, grid.n - 1) < 1e-10);

    // C3 never acquires amplitude from the A-excited start
    for (int i = 0; i < grid.n; i += 50) CHECK(frozen1.abs2(2, i) == 0.0);

    CHECK_THROWS_AS(
        (void)dyn::tripartite_weak(1.0, -0.6, dyn::TripartiteInitial::A_excited, grid),
        std::invalid_argument);
    CHECK_THROWS_AS((void)dyn::tripartite_weak(1.0, 1.2, dyn::TripartiteInitial::A_excited, grid),
                    std::invalid_argument);
}

TEST_CASE("tripartite strong coupling stays in |1>") {
    const auto p = reference_ratios();
    const auto grid = TimeGrid::uniform(0.0, 3.0 * M_PI / p.rabi, 2001);
    const auto traj = dyn::tripartite_strong(p, grid);
    CHECK(traj.abs2(0, 0) == 0.0);
    for (int i = 0; i < grid.n; i += 100) {
        CHECK(traj.abs2(1, i) == 0.0);
        CHECK(traj.abs2(2, i) == 0.0);
    }
    CHECK(traj.max_total_abs2() <= 1.0 + 1e-9);

    // cross-check against the Volterra solution with kernel K + 2 K_AB = 3 K
    KernelModel k3;
    k3.amplitude = -0.75 * p.rabi * p.rabi;
    k3.decay = p.delta_omega_C;
    dyn::DonorDrive drive;
    drive.rabi_atom = p.rabi;
    drive.rabi_donor = p.rabi_donor;
    drive.donor_time = p.donor_time;
    drive.prefactor = std::sqrt(3.0);
    const double rabi1 = std::sqrt(3.0) * p.rabi;
    const double t_peak = M_PI / rabi1;
    const double h = 2.0 * M_PI / rabi1 / 600.0;
    const int n = static_cast<int>(std::ceil(1.3 * t_peak / h));
    const auto vt = dyn::volterra_solve(k3, drive, {0.0, h, n});
    double peak_v = 0.0;
    for (int i = 0; i < n; ++i) peak_v = std::max(peak_v, vt.abs2(0, i));
    double peak_a = 0.0;
    const auto fine = TimeGrid::uniform(0.0, 1.3 * t_peak, 4001);
    const auto analytic = dyn::tripartite_strong(p, fine);
    for (int i = 0; i < fine.n; ++i) peak_a = std::max(peak_a, analytic.abs2(0, i));
    CHECK(std::abs(peak_v - peak_a) / peak_a < 0.05);
}

TEST_CASE("trajectory CSV export format") {
    dyn::Trajectory traj;
    traj.grid = {0.0, 0.5, 2};
    traj.labels = {"C+", "C-"};
    traj.amplitudes = {{{1.0, 0.0}, {0.5, -0.5}}, {{0.0, 0.0}, {0.0, 0.25}}};
    std::ostringstream out;
    dyn::write_trajectory_csv(out, traj);
    CHECK(out.str() ==
          "t,C+_re,C+_im,C+_abs2,C-_re,C-_im,C-_abs2\n"
          "0,1,0,1,0,0,0\n"
          "0.5,0.5,-0.5,0.5,0,0.25,0.0625\n");
}

TEST_CASE("strong-coupling params from ratios and resonances") {
    const auto p = reference_ratios();
    CHECK(p.rabi_pm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(p.delta_omega_C == doctest::Approx(0.01 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(p.donor_time * p.rabi_donor == doctest::Approx(M_PI).epsilon(1e-12));
    // pi * dwc / rabi_donor = 0.01
    CHECK(M_PI * p.delta_omega_C / p.rabi_donor == doctest::Approx(0.01).epsilon(1e-12));

    sphere::ModeResonance mode;
    mode.l = 120;
    mode.omega_C = 1.0498984;
    mode.delta_omega_C = 9.77e-7;
    const auto q = StrongCouplingParams::from_resonance(mode, 8000.0, 1e-6, 1.0);
    CHECK(q.branch == Branch::minus);
    CHECK(q.rabi == doctest::Approx(std::sqrt(2.0 * 8000.0 * 1e-6 * 9.77e-7)).epsilon(1e-12));
    CHECK(q.rabi_donor == doctest::Approx(q.rabi).epsilon(1e-12));

    CHECK_THROWS_AS((void)StrongCouplingParams::from_ratios(-0.01, 0.01), std::invalid_argument);
}
