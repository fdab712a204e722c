#include "sphereqed/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sphereqed/textio.hpp"

namespace sqed::ent {

namespace {

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << Complex{0.0, 0.0}, Complex{0.0, -1.0}, Complex{0.0, 1.0}, Complex{0.0, 0.0};
    return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace

void TwoQubitState::validate() const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("two-qubit state is not Hermitian");
    if (std::abs(rho.trace() - Complex{1.0, 0.0}) > 1e-12)
        throw std::invalid_argument("two-qubit state trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix4> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("two-qubit state is not positive semidefinite");
}

TwoQubitState build_mixed_state(double p, MixSign sign) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("mixed-state weight p must be in [0, 1]");
    const double s = sign == MixSign::plus ? 1.0 : -1.0;
    TwoQubitState st;
    st.rho.setZero();
    st.rho(1, 1) = 0.5 * p;
    st.rho(2, 2) = 0.5 * p;
    st.rho(1, 2) = 0.5 * p * s;
    st.rho(2, 1) = 0.5 * p * s;
    st.rho(3, 3) = 1.0 - p;
    return st;
}

double concurrence(const TwoQubitState& state) {
    state.validate();
    const Matrix4 yy = kron2(pauli_y(), pauli_y());
    const Matrix4 rho_tilde = yy * state.rho.conjugate() * yy;
    const Eigen::ComplexEigenSolver<Matrix4> es(state.rho * rho_tilde);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) lam[static_cast<size_t>(i)] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double entanglement_of_formation(const TwoQubitState& state) {
    const double c = concurrence(state);
    const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
    return binary_entropy(x);
}

namespace {

double ppt_min(const Matrix4& rho, bool over_b) {
    Matrix4 pt;
    // Index (a, b) -> 2a + b. Partial transpose swaps the chosen qubit's
    // bra/ket indices.
    for (int a1 = 0; a1 < 2; ++a1)
        for (int b1 = 0; b1 < 2; ++b1)
            for (int a2 = 0; a2 < 2; ++a2)
                for (int b2 = 0; b2 < 2; ++b2) {
                    const int row = 2 * a1 + b1;
                    const int col = 2 * a2 + b2;
                    const int src_row = over_b ? 2 * a1 + b2 : 2 * a2 + b1;
                    const int src_col = over_b ? 2 * a2 + b1 : 2 * a1 + b2;
                    pt(row, col) = rho(src_row, src_col);
                }
    Eigen::SelfAdjointEigenSolver<Matrix4> es(pt);
    return es.eigenvalues().minCoeff();
}

}  // namespace

double ppt_min_eigenvalue(const TwoQubitState& state) {
    state.validate();
    return ppt_min(state.rho, true);
}

double ppt_min_eigenvalue_over_a(const TwoQubitState& state) {
    state.validate();
    return ppt_min(state.rho, false);
}

double bell_correlation(const TwoQubitState& state, double theta1, double theta2) {
    state.validate();
    const Eigen::Matrix2cd s1 = std::cos(theta1) * pauli_x() + std::sin(theta1) * pauli_y();
    const Eigen::Matrix2cd s2 = std::cos(theta2) * pauli_x() + std::sin(theta2) * pauli_y();
    return (state.rho * kron2(s1, s2)).trace().real();
}

BellSetting BellSetting::collapsed_theta(double theta) {
    BellSetting s;
    s.collapsed = true;
    s.theta = theta;
    return s;
}

BellSetting BellSetting::raw_angles(double t1, double t2, double t1p, double t2p) {
    BellSetting s;
    s.collapsed = false;
    s.raw = {t1, t2, t1p, t2p};
    return s;
}

std::array<double, 4> BellSetting::angles() const {
    if (!collapsed) return raw;
    // Equal spacing theta = t1 - t2 = t2 - t1' = t1' - t2', anchored at t1 = 0.
    return {0.0, -theta, -2.0 * theta, -3.0 * theta};
}

double bell_parameter_raw(const TwoQubitState& state, double t1, double t2, double t1p,
                          double t2p) {
    return std::abs(bell_correlation(state, t1, t2) - bell_correlation(state, t1, t2p) +
                    bell_correlation(state, t1p, t2) + bell_correlation(state, t1p, t2p));
}

double bell_parameter(const TwoQubitState& state, double theta) {
    state.validate();
    if (state.population_uu() < 1e-12) {
        return std::abs(3.0 * bell_correlation(state, theta, 0.0) -
                        bell_correlation(state, 3.0 * theta, 0.0));
    }
    // Doubly excited population present: the simplification does not apply,
    // use the four-angle form with the equal-spacing pattern.
    const auto a = BellSetting::collapsed_theta(theta).angles();
    return bell_parameter_raw(state, a[0], a[1], a[2], a[3]);
}

double bell_parameter(const TwoQubitState& state, const BellSetting& setting) {
    if (setting.collapsed) return bell_parameter(state, setting.theta);
    return bell_parameter_raw(state, setting.raw[0], setting.raw[1], setting.raw[2],
                              setting.raw[3]);
}

void write_density_row(std::ostream& out, double time, const Matrix4& rho, int precision) {
    out << textio::format_sig(time, precision);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out << ',' << textio::format_sig(rho(i, j).real(), precision) << ','
                << textio::format_sig(rho(i, j).imag(), precision);
    out << '\n';
}

}  // namespace sqed::ent
