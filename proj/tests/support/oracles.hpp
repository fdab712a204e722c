#pragma once

// Test-only reference implementations, independent of the library's
// evaluation paths: power-series Bessel sums in extended precision, finite
// differences, principal-value quadrature, and a Hermitian-route concurrence.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>

namespace oracles {

/// j_l(z) by direct power-series summation in long double (~18-19 digits on
/// x86), valid where the series is well conditioned (|z| modest).
inline std::complex<double> spherical_j_series(int l, std::complex<double> z) {
    using C = std::complex<long double>;
    const C zl(static_cast<long double>(z.real()), static_cast<long double>(z.imag()));
    long double dfact = 1.0L;
    for (int m = 3; m <= 2 * l + 1; m += 2) dfact *= m;
    C sum = 1.0L;
    C term = 1.0L;
    const C z2 = -0.5L * zl * zl;
    for (int k = 1; k < 200; ++k) {
        term *= z2 / static_cast<long double>(k * (2 * l + 2 * k + 1));
        sum += term;
        if (std::abs(term) < 1e-24L * std::abs(sum)) break;
    }
    C pw = 1.0L;
    for (int m = 0; m < l; ++m) pw *= zl;
    const C r = pw / dfact * sum;
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

/// Central finite difference with step h.
inline std::complex<double> central_difference(
    const std::function<std::complex<double>(std::complex<double>)>& f, std::complex<double> z,
    double h) {
    return (f(z + h) - f(z - h)) / (2.0 * h);
}

/// Principal-value integral int_0^upper g(x) / (x^2 - a^2) dx by subtracting
/// the singular part analytically and Simpson-integrating the regular rest.
inline double principal_value_over_x2(const std::function<double(double)>& g, double a,
                                      double upper, int intervals) {
    const int n = intervals % 2 == 0 ? intervals : intervals + 1;
    const double h = upper / n;
    const double ga = g(a);
    auto regular = [&](double x) {
        const double den = x * x - a * a;
        if (std::abs(x - a) < 1e-9) {
            // limit of (g(x) - g(a)) / (x^2 - a^2) = g'(a) / (2a)
            const double gp = (g(a + 1e-6) - g(a - 1e-6)) / 2e-6;
            return gp / (2.0 * a);
        }
        return (g(x) - ga) / den;
    };
    double sum = regular(0.0) + regular(upper);
    for (int i = 1; i < n; ++i) sum += regular(h * i) * ((i % 2 == 1) ? 4.0 : 2.0);
    const double smooth = sum * h / 3.0;
    // PV of int_0^L dx / (x^2 - a^2) = (1 / 2a) ln((L - a) / (L + a))
    const double singular = ga * std::log((upper - a) / (upper + a)) / (2.0 * a);
    return smooth + singular;
}

/// Concurrence via the Hermitian route: eigenvalues of
/// sqrt(rho) rho~ sqrt(rho), independent of the library's non-Hermitian
/// eigenvalue path.
inline double concurrence_hermitian(const Eigen::Matrix4cd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    Eigen::Matrix4cd sqrt_rho = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) {
        const double ev = std::max(0.0, es.eigenvalues()(i));
        sqrt_rho += std::sqrt(ev) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(3, 0) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    const Eigen::Matrix4cd rho_tilde = yy * rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2((sqrt_rho * rho_tilde * sqrt_rho).eval());
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i)
        lam[static_cast<size_t>(i)] = std::sqrt(std::max(0.0, es2.eigenvalues()(i)));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

}  // namespace oracles
