#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <iosfwd>

namespace sqed::ent {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;

/// Two-qubit density matrix in the product basis
/// {|U_A U_B>, |U_A L_B>, |L_A U_B>, |L_A L_B>} (index = 2 a_A + a_B,
/// 0 = upper). validate() enforces hermiticity (1e-12), unit trace (1e-12)
/// and positivity (min eigenvalue >= -1e-10).
struct TwoQubitState {
    Matrix4 rho = Matrix4::Zero();

    void validate() const;
    double population_uu() const { return rho(0, 0).real(); }
};

enum class MixSign { plus, minus };

/// rho = p |pm><pm| + (1 - p) |L><L| with |pm> = (|U_A L_B> pm |L_A U_B>)/sqrt(2).
/// The doubly excited state carries no population.
TwoQubitState build_mixed_state(double p, MixSign sign);

/// Wootters concurrence C(rho) in [0, 1].
double concurrence(const TwoQubitState& state);

/// Entanglement of formation in ebits: h((1 + sqrt(1 - C^2))/2) with the
/// binary entropy h.
double entanglement_of_formation(const TwoQubitState& state);

/// Minimum eigenvalue of the partial transpose over atom B; negative means
/// inseparable (necessary and sufficient for two qubits).
double ppt_min_eigenvalue(const TwoQubitState& state);

/// Same criterion transposed over atom A (the spectra agree; kept for tests).
double ppt_min_eigenvalue_over_a(const TwoQubitState& state);

/// Correlation E(theta1, theta2) = <sigma^theta1_A sigma^theta2_B> with
/// sigma^theta = cos(theta) sigma_x + sin(theta) sigma_y.
double bell_correlation(const TwoQubitState& state, double theta1, double theta2);

/// CHSH analyzer settings: either four raw angles or the collapsed
/// equal-spacing pattern theta = t1 - t2 = t2 - t1' = t1' - t2'.
struct BellSetting {
    bool collapsed = true;
    double theta = M_PI / 4.0;
    std::array<double, 4> raw{0.0, 0.0, 0.0, 0.0};  // t1, t2, t1', t2'

    static BellSetting collapsed_theta(double theta);
    static BellSetting raw_angles(double t1, double t2, double t1p, double t2p);
    /// The four analyzer angles this setting expands to.
    std::array<double, 4> angles() const;
};

/// Four-angle CHSH combination
/// |E(t1,t2) - E(t1,t2') + E(t1',t2) + E(t1',t2')|.
double bell_parameter_raw(const TwoQubitState& state, double t1, double t2, double t1p,
                          double t2p);

/// Collapsed form B_S = |3 E(theta,0) - E(3 theta,0)|, valid when the doubly
/// excited state is unpopulated; otherwise falls back to the four-angle form
/// with the equal-spacing pattern.
double bell_parameter(const TwoQubitState& state, double theta);

double bell_parameter(const TwoQubitState& state, const BellSetting& setting);

/// Density-matrix dump row: the time value followed by the 16 entries in
/// row-major order as (re, im) CSV pairs, one matrix per line.
void write_density_row(std::ostream& out, double time, const Matrix4& rho, int precision = 12);

}  // namespace sqed::ent
