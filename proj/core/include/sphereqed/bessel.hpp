#pragma once

#include <complex>
#include <vector>

#include "sphereqed/scaled.hpp"

namespace sqed::bessel {

using Complex = std::complex<double>;

enum class Kind { J, H1 };

/// Spherical Bessel function of the first kind, j_l(z), complex argument.
/// Stable for all l >= 0; z = 0 returns the exact limit (1 for l = 0,
/// else 0). Values outside the double range saturate to 0 / inf.
Complex spherical_j(int l, Complex z);

/// Spherical Bessel function of the second kind, y_l(z). z must be nonzero.
Complex spherical_y(int l, Complex z);

/// Spherical Hankel function of the first kind, h_l^(1) = j_l + i y_l.
/// Throws std::domain_error at the z = 0 pole.
Complex spherical_h1(int l, Complex z);

/// d/dz [z f_l(z)] via the identity z f_{l-1}(z) - l f_l(z).
Complex riccati_derivative(Kind kind, int l, Complex z);

/// One evaluation bundled with its Riccati derivative and range flag.
struct SphericalBesselValue {
    int order = 0;
    Complex argument{};
    Complex value{};
    Complex riccati_derivative{};
    bool out_of_range = false;  // true when the value saturated to 0 or inf
};

SphericalBesselValue evaluate(Kind kind, int l, Complex z);

/// Truncation heuristic for Mie-type sums: ceil(x + 4 x^{1/3} + 12).
int recommended_l_max(double x);

/// All orders 0..l_max at a fixed argument, in scaled form so that orders far
/// beyond the turning point stay exact. get() saturates to 0 / inf.
class Ladder {
  public:
    Ladder() = default;
    Ladder(std::vector<detail::ScaledComplex> values, Complex argument)
        : values_(std::move(values)), argument_(argument) {}

    int l_max() const { return static_cast<int>(values_.size()) - 1; }
    Complex argument() const { return argument_; }
    const detail::ScaledComplex& scaled(int l) const { return values_[static_cast<size_t>(l)]; }
    Complex get(int l) const { return values_[static_cast<size_t>(l)].to_complex(); }

  private:
    std::vector<detail::ScaledComplex> values_;
    Complex argument_{};
};

/// j_0..j_{l_max}(z) by downward (Miller) recurrence normalized against the
/// closed-form order 0/1 values.
Ladder ladder_j(int l_max, Complex z);

/// h^(1)_0..h^(1)_{l_max}(z) by upward recurrence (dominant solution).
Ladder ladder_h1(int l_max, Complex z);

/// Logarithmic derivatives D_l(z) = psi_l'(z)/psi_l(z) of the Riccati-Bessel
/// function psi_l(z) = z j_l(z), l = 0..l_max, by downward recurrence.
std::vector<Complex> riccati_log_derivative(int l_max, Complex z);

}  // namespace sqed::bessel
