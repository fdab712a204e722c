#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sphereqed/bessel.hpp"
#include "sphereqed/scaled.hpp"

namespace sqed::sphere {

using Complex = std::complex<double>;

/// Single-resonance Drude-Lorentz material. All frequencies in units of the
/// medium oscillation frequency omega_T; lengths in units of
/// lambda_T = 2 pi c / omega_T.
struct PermittivityParams {
    double omega_T = 1.0;
    double omega_P = 0.5;
    double gamma = 1e-6;

    void validate() const;
    /// Upper band-gap edge omega_L = sqrt(omega_T^2 + omega_P^2).
    double band_edge_upper() const;
    bool in_band_gap(double omega) const;
};

/// eps(omega) = 1 + omega_P^2 / (omega_T^2 - omega^2 - i omega gamma).
/// Throws std::domain_error for the lossless pole (gamma = 0, omega = omega_T).
Complex permittivity(double omega, const PermittivityParams& params);

/// Microsphere of radius R with two atoms on a diameter, both at distance
/// atom_distance from the surface (the rate formulas assume the symmetric
/// placement). Lengths in lambda_T.
struct SphereGeometry {
    double radius = 10.0;
    double atom_distance = 0.02;
    double second_atom_distance = -1.0;  // < 0 means "same as atom_distance"

    double distance_b() const { return second_atom_distance < 0.0 ? atom_distance : second_atom_distance; }
    double atom_radius() const { return radius + atom_distance; }
    SphereGeometry swapped() const;
    void validate() const;
};

/// Free-space wavenumber in the internal units (lambda_T = 1): k = 2 pi omega.
inline double wavenumber(double omega) { return 2.0 * M_PI * omega; }

/// TM (electric-type) exterior reflection coefficient B^N_l of the
/// homogeneous sphere. Normalized so that the scattered exterior Green
/// function carries B^N_l h_l ⊗ h_l; eps -> 1 gives 0, and for a lossless
/// sphere 1 + 2 B lies on the unit circle.
Complex reflection_tm(int l, double omega, const PermittivityParams& params,
                      const SphereGeometry& geometry);

/// All orders 1..l_max at once, in scaled form (order 0 slot is unused and
/// zero; monopole TM does not radiate).
std::vector<detail::ScaledComplex> reflection_tm_array(int l_max, double omega,
                                                       const PermittivityParams& params,
                                                       const SphereGeometry& geometry);

/// Single-resonance decay-rate factor
/// (3/2) l(l+1)(2l+1) Re{ [h_l(k r_A)/(k r_A)]^2 B^N_l(omega) },
/// i.e. the enhancement of the single-atom rate over Gamma0 carried by one
/// multipole. Sharp sphere modes appear as clean positive Lorentzians of this
/// response (Im B alone is dispersive around high-l poles and unsuitable as a
/// peak detector).
double resonance_response(int l, double omega, const PermittivityParams& params,
                          const SphereGeometry& geometry);

enum class ModeKind { SG, WG };

/// One sphere resonance extracted from a resonance_response peak.
struct ModeResonance {
    int l = 0;
    double omega_C = 0.0;
    double delta_omega_C = 0.0;  // FWHM
    double quality = 0.0;        // omega_C / delta_omega_C
    ModeKind kind = ModeKind::SG;
    double peak_response = 0.0;  // rate response at the fitted center
    double fit_residual = 0.0;   // max relative Lorentzian-fit deviation
    bool fit_ok = true;          // false when fit_residual > 10%
};

struct ResonanceScan {
    int l_min = 1;
    int l_max = 160;
    double omega_lo = 1.04;
    double omega_hi = 1.06;
    int points = 4001;           // coarse grid; peaks are refined adaptively
    double prominence = 1e-4;    // relative prominence for a candidate peak
    double min_quality = 50.0;   // humps broader than this are not resonances
    double min_response = 1.0;   // rate-response floor: weaker peaks are not
                                 // modes the atom predominantly couples to
    int threads = 0;             // 0 = hardware concurrency
};

/// Scans the rate response of each l in the range, refines every candidate
/// peak by golden-section search, extracts the FWHM by half-maximum
/// bisection, then least-squares fits an inverse Lorentzian over +-3
/// half-widths. Results are sorted by ascending omega_C (ties by l)
/// independent of the thread count. Fits with residual above 10% are
/// returned with fit_ok = false rather than dropped.
std::vector<ModeResonance> find_resonances(const ResonanceScan& scan,
                                           const PermittivityParams& params,
                                           const SphereGeometry& geometry);

/// Resonance nearest in omega_C to the requested frequency.
std::optional<ModeResonance> nearest_mode(const std::vector<ModeResonance>& modes, double omega);

/// Tab-separated cache: one resonance per line (l, omega_C, delta_omega_C,
/// Q, kind), 12 significant digits, preceded by a fingerprint comment so a
/// rerun with identical inputs can skip the scan.
void write_resonance_cache(const std::string& path, const std::vector<ModeResonance>& modes,
                           const std::string& fingerprint);
std::optional<std::vector<ModeResonance>> read_resonance_cache(const std::string& path,
                                                               const std::string& fingerprint);

}  // namespace sqed::sphere
