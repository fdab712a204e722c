#pragma once

#include <functional>
#include <optional>

#include "sphereqed/scaled.hpp"
#include "sphereqed/sphere.hpp"

namespace sqed::rates {

/// Normalized decay rates of the two-atom system at one frequency and
/// geometry. gamma_plus/minus are the rates of the symmetric/antisymmetric
/// superposition states; gamma_single +- gamma_cross reproduces them exactly.
struct RateSet {
    double gamma_single = 0.0;  // Gamma / Gamma0
    double gamma_cross = 0.0;   // Gamma_AB / Gamma0
    double gamma_plus = 0.0;    // Gamma_+ / Gamma0
    double gamma_minus = 0.0;   // Gamma_- / Gamma0
    double omega = 0.0;         // evaluation frequency, omega_T units
    int truncation = 0;         // multipole order the series stopped at
    bool converged = false;
};

struct SeriesOptions {
    std::optional<int> l_max;  // explicit truncation; unset = adaptive
    int l_max_cap = 8000;      // ceiling for the adaptive extension
    double rel_tol = 1e-10;    // per-term relative convergence target
};

/// Reflection coefficients for the multipole series, supplied per order at a
/// fixed frequency. The library route wraps reflection_tm_array; tests swap
/// in the zero coefficient (free space) or a sign-flipped one.
using ReflectionProvider =
    std::function<std::vector<detail::ScaledComplex>(int l_max, double omega)>;

/// fixed_l_max > 0 pins the ladder depth of the cached coefficients, making
/// the values independent of request order (required for byte-deterministic
/// sweeps that share one provider across worker threads). 0 grows on demand.
ReflectionProvider sphere_reflection(const sphere::PermittivityParams& params,
                                     const sphere::SphereGeometry& geometry,
                                     int fixed_l_max = 0);
ReflectionProvider free_space_reflection();

/// Multipole series for Gamma_+- of two atoms at diametrically opposite
/// positions with radially oriented dipoles. Requires equal atom-surface
/// distances. Rates come back in Gamma0 units; converged reports whether the
/// adaptive tail passed the relative tolerance (never silently truncated).
/// Throws on rate values below -1e-9 (sign-convention violation).
RateSet pair_decay_rates(double omega, const sphere::SphereGeometry& geometry,
                         const sphere::PermittivityParams& params, const SeriesOptions& opts = {});

RateSet pair_decay_rates_with(double omega, const sphere::SphereGeometry& geometry,
                              const ReflectionProvider& reflection, const SeriesOptions& opts = {});

/// Single-resonance approximation of the single-atom rate at multipole l.
/// valid is false when the single term strays more than 10% from the full
/// series (the approximation premise is then violated).
struct ResonantRate {
    double value = 0.0;  // Gamma / Gamma0
    bool valid = false;
    double relative_deviation = 0.0;  // |single - series| / series
};

ResonantRate single_rate_resonant(double omega, const sphere::SphereGeometry& geometry,
                                  const sphere::PermittivityParams& params, int l);

/// Parity rule at a resonance of multipole order l:
/// Gamma_+- = Gamma [1 -+ (-1)^l].
std::pair<double, double> parity_rates(double gamma_single, int l);

/// Closed-form free-space cross rate Gamma_AB / Gamma0 for two dipoles
/// oriented along their separation axis, distance d apart (lambda_T units).
double cross_rate_free_space(double separation, double omega);

}  // namespace sqed::rates
