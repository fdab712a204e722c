#include "sphereqed/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "sphereqed/parallel.hpp"
#include "sphereqed/textio.hpp"

namespace sqed::sphere {

namespace {

using detail::ScaledComplex;

Complex interior_index(double omega, const PermittivityParams& params) {
    Complex m = std::sqrt(permittivity(omega, params));
    if (m.imag() < 0.0) m = -m;  // decaying waves inside an absorbing sphere
    return m;
}

}  // namespace

void PermittivityParams::validate() const {
    // gamma < 0 (gain) is admitted for conjugation-symmetry checks; the CLI
    // restricts user input to passive media.
    if (omega_T < 0.0 || omega_P < 0.0 || !std::isfinite(gamma))
        throw std::invalid_argument("invalid permittivity parameters");
}

double PermittivityParams::band_edge_upper() const {
    return std::sqrt(omega_T * omega_T + omega_P * omega_P);
}

bool PermittivityParams::in_band_gap(double omega) const {
    return omega > omega_T && omega < band_edge_upper();
}

Complex permittivity(double omega, const PermittivityParams& params) {
    params.validate();
    if (omega <= 0.0) throw std::domain_error("permittivity: omega must be positive");
    const Complex den{params.omega_T * params.omega_T - omega * omega, -omega * params.gamma};
    if (den == Complex{0.0, 0.0})
        throw std::domain_error("permittivity: singular at omega = omega_T with gamma = 0");
    return 1.0 + params.omega_P * params.omega_P / den;
}

SphereGeometry SphereGeometry::swapped() const {
    SphereGeometry g = *this;
    g.atom_distance = distance_b();
    g.second_atom_distance = atom_distance;
    return g;
}

void SphereGeometry::validate() const {
    if (radius <= 0.0) throw std::invalid_argument("sphere radius must be positive");
    if (atom_distance < 0.0 || distance_b() < 0.0)
        throw std::invalid_argument("atom distances must be non-negative");
}

std::vector<ScaledComplex> reflection_tm_array(int l_max, double omega,
                                               const PermittivityParams& params,
                                               const SphereGeometry& geometry) {
    if (l_max < 1) throw std::domain_error("reflection_tm_array: l_max must be >= 1");
    geometry.validate();
    const double x = wavenumber(omega) * geometry.radius;
    const Complex m = interior_index(omega, params);
    const Complex z = m * x;

    const bessel::Ladder lj = bessel::ladder_j(l_max, Complex{x, 0.0});
    const bessel::Ladder lh = bessel::ladder_h1(l_max, Complex{x, 0.0});
    const std::vector<Complex> dlog = bessel::riccati_log_derivative(l_max, z);

    std::vector<ScaledComplex> b(static_cast<size_t>(l_max) + 1);
    const ScaledComplex sx = ScaledComplex::from(Complex{x, 0.0});
    for (int l = 1; l <= l_max; ++l) {
        // psi_l = x j_l, xi_l = x h_l; the common factor x cancels between
        // numerator and denominator except through the l-1 terms, so carry it.
        const ScaledComplex psi = lj.scaled(l) * sx;
        const ScaledComplex psi_m1 = lj.scaled(l - 1) * sx;
        const ScaledComplex xi = lh.scaled(l) * sx;
        const ScaledComplex xi_m1 = lh.scaled(l - 1) * sx;
        const Complex t = dlog[static_cast<size_t>(l)] / m + static_cast<double>(l) / x;
        const ScaledComplex num = psi * t - psi_m1;
        const ScaledComplex den = xi * t - xi_m1;
        ScaledComplex a = num / den;
        a.mant = -a.mant;  // B^N_l = -a_l
        b[static_cast<size_t>(l)] = a;
    }
    return b;
}

Complex reflection_tm(int l, double omega, const PermittivityParams& params,
                      const SphereGeometry& geometry) {
    return reflection_tm_array(l, omega, params, geometry)[static_cast<size_t>(l)].to_complex();
}

double resonance_response(int l, double omega, const PermittivityParams& params,
                          const SphereGeometry& geometry) {
    const auto b = reflection_tm_array(l, omega, params, geometry);
    const double x = wavenumber(omega) * geometry.atom_radius();
    const bessel::Ladder lh = bessel::ladder_h1(l, Complex{x, 0.0});
    const ScaledComplex h_over_x = lh.scaled(l) * Complex{1.0 / x, 0.0};
    const double ll = static_cast<double>(l);
    return 1.5 * ll * (ll + 1.0) * (2.0 * ll + 1.0) *
           (h_over_x * h_over_x * b[static_cast<size_t>(l)]).to_complex().real();
}

namespace {

// Golden-section maximization on [a, b]; f assumed unimodal there.
double golden_max(const std::function<double(double)>& f, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Outward march then bisection for the half-maximum crossing on one side.
double half_max_crossing(const std::function<double(double)>& f, double peak_omega,
                         double half_value, double initial_step, int direction) {
    double step = initial_step;
    double inside = peak_omega;
    double outside = peak_omega + direction * step;
    for (int it = 0; it < 200 && f(outside) >= half_value; ++it) {
        inside = outside;
        step *= 2.0;
        outside = peak_omega + direction * step;
        if (outside <= 0.0) return peak_omega;  // never crosses in range
    }
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        (f(mid) >= half_value ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
}

struct PeakCandidate {
    int l;
    double lo, hi;  // bracketing interval from the coarse grid
};

std::optional<ModeResonance> refine_peak(const PeakCandidate& cand,
                                         const PermittivityParams& params,
                                         const SphereGeometry& geometry,
                                         const ResonanceScan& scan) {
    const auto f = [&](double w) { return resonance_response(cand.l, w, params, geometry); };

    const double w_peak = golden_max(f, cand.lo, cand.hi);
    const double v_peak = f(w_peak);
    if (!(v_peak > scan.min_response)) return std::nullopt;

    const double step0 = std::max((cand.hi - cand.lo) * 1e-6, w_peak * 1e-14);
    const double left = half_max_crossing(f, w_peak, 0.5 * v_peak, step0, -1);
    const double right = half_max_crossing(f, w_peak, 0.5 * v_peak, step0, +1);
    const double fwhm_bisect = right - left;
    if (!(fwhm_bisect > 0.0)) return std::nullopt;

    // Inverse-Lorentzian least squares over +-3 half-widths: 1/f is quadratic
    // in omega for a Lorentzian, so fit z = A u^2 + B u + C in the scaled
    // coordinate u = (omega - w_peak) / hwhm.
    const double hwhm = 0.5 * fwhm_bisect;
    constexpr int n_fit = 61;
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    std::vector<double> us(n_fit), zs(n_fit), fs(n_fit);
    bool window_positive = true;
    for (int i = 0; i < n_fit; ++i) {
        const double u = -3.0 + 6.0 * i / (n_fit - 1);
        const double w = w_peak + u * hwhm;
        const double fv = f(w);
        us[static_cast<size_t>(i)] = u;
        fs[static_cast<size_t>(i)] = fv;
        if (!(fv > 0.0)) window_positive = false;
        const double zz = fv > 0.0 ? 1.0 / fv : 0.0;
        zs[static_cast<size_t>(i)] = zz;
        const double u2 = u * u;
        s0 += 1;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        t0 += zz;
        t1 += zz * u;
        t2 += zz * u2;
    }
    // Solve the 3x3 normal equations for (A, B, C).
    const double m00 = s4, m01 = s3, m02 = s2;
    const double m11 = s2, m12 = s1, m22 = s0;
    const double det = m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) +
                       m02 * (m01 * m12 - m11 * m02);

    ModeResonance mode;
    mode.l = cand.l;
    mode.omega_C = w_peak;
    mode.delta_omega_C = fwhm_bisect;
    mode.peak_response = v_peak;
    mode.fit_ok = false;
    mode.fit_residual = 1.0;

    if (det != 0.0 && window_positive) {
        const double a = (t2 * (m11 * m22 - m12 * m12) - m01 * (t1 * m22 - m12 * t0) +
                          m02 * (t1 * m12 - m11 * t0)) /
                         det;
        const double bq = (m00 * (t1 * m22 - m12 * t0) - t2 * (m01 * m22 - m12 * m02) +
                           m02 * (m01 * t0 - t1 * m02)) /
                          det;
        const double c = (m00 * (m11 * t0 - t1 * m12) - m01 * (m01 * t0 - t1 * m02) +
                          t2 * (m01 * m12 - m11 * m02)) /
                         det;
        if (a > 0.0) {
            const double u_c = -bq / (2.0 * a);
            const double c_min = c - bq * bq / (4.0 * a);
            if (c_min > 0.0 && std::abs(u_c) < 3.0) {
                const double w_c = w_peak + u_c * hwhm;
                const double hwhm_fit = hwhm * std::sqrt(c_min / a);
                double resid = 0.0;
                for (int i = 0; i < n_fit; ++i) {
                    const double zfit = a * us[static_cast<size_t>(i)] * us[static_cast<size_t>(i)] +
                                        bq * us[static_cast<size_t>(i)] + c;
                    const double ffit = zfit > 0.0 ? 1.0 / zfit : 0.0;
                    resid = std::max(resid, std::abs(ffit - fs[static_cast<size_t>(i)]) / v_peak);
                }
                mode.fit_residual = resid;
                if (resid <= 0.10) {
                    mode.fit_ok = true;
                    mode.omega_C = w_c;
                    mode.delta_omega_C = 2.0 * hwhm_fit;
                    mode.peak_response = 1.0 / c_min;
                }
            }
        }
    }
    // Fit failures keep the half-maximum bisection values and are reported.

    mode.quality = mode.omega_C / mode.delta_omega_C;
    if (mode.quality < scan.min_quality) return std::nullopt;
    mode.kind = params.in_band_gap(mode.omega_C) ? ModeKind::SG : ModeKind::WG;
    return mode;
}

}  // namespace

std::vector<ModeResonance> find_resonances(const ResonanceScan& scan,
                                           const PermittivityParams& params,
                                           const SphereGeometry& geometry) {
    if (scan.points < 8) throw std::invalid_argument("resonance scan needs at least 8 grid points");
    if (scan.l_min < 1 || scan.l_max < scan.l_min)
        throw std::invalid_argument("resonance scan l range invalid");
    if (scan.omega_lo <= 0.0 || scan.omega_hi <= scan.omega_lo)
        throw std::invalid_argument("resonance scan window invalid");

    const int n_l = scan.l_max - scan.l_min + 1;
    const int n_w = scan.points;
    const double dw = (scan.omega_hi - scan.omega_lo) / (n_w - 1);

    // Coarse pass: |Im B_l| for every (omega, l), one Bessel ladder per omega.
    std::vector<double> grid(static_cast<size_t>(n_w));
    for (int i = 0; i < n_w; ++i) grid[static_cast<size_t>(i)] = scan.omega_lo + dw * i;

    std::vector<double> table(static_cast<size_t>(n_w) * static_cast<size_t>(n_l));
    parallel::for_index(static_cast<size_t>(n_w), scan.threads, [&](size_t i) {
        const auto b = reflection_tm_array(scan.l_max, grid[i], params, geometry);
        const double x = wavenumber(grid[i]) * geometry.atom_radius();
        const bessel::Ladder lh = bessel::ladder_h1(scan.l_max, Complex{x, 0.0});
        for (int l = scan.l_min; l <= scan.l_max; ++l) {
            const ScaledComplex h_over_x = lh.scaled(l) * Complex{1.0 / x, 0.0};
            const double ll = static_cast<double>(l);
            table[i * static_cast<size_t>(n_l) + static_cast<size_t>(l - scan.l_min)] =
                1.5 * ll * (ll + 1.0) * (2.0 * ll + 1.0) *
                (h_over_x * h_over_x * b[static_cast<size_t>(l)]).to_complex().real();
        }
    });

    // Candidate peaks per l on the coarse grid.
    std::vector<PeakCandidate> candidates;
    for (int l = scan.l_min; l <= scan.l_max; ++l) {
        const auto v = [&](int i) {
            return table[static_cast<size_t>(i) * static_cast<size_t>(n_l) +
                         static_cast<size_t>(l - scan.l_min)];
        };
        for (int i = 1; i + 1 < n_w; ++i) {
            if (!(v(i) > v(i - 1) && v(i) >= v(i + 1))) continue;
            if (!(v(i) > 1e-12)) continue;
            double left_min = v(i);
            for (int k = i - 1; k >= 0 && v(k) <= v(i); --k) left_min = std::min(left_min, v(k));
            double right_min = v(i);
            for (int k = i + 1; k < n_w && v(k) <= v(i); ++k) right_min = std::min(right_min, v(k));
            const double prom = v(i) - std::max(left_min, right_min);
            if (prom < scan.prominence * v(i)) continue;
            candidates.push_back({l, grid[static_cast<size_t>(i - 1)], grid[static_cast<size_t>(i + 1)]});
        }
    }

    std::vector<std::optional<ModeResonance>> refined(candidates.size());
    parallel::for_index(candidates.size(), scan.threads, [&](size_t i) {
        refined[i] = refine_peak(candidates[i], params, geometry, scan);
    });

    std::vector<ModeResonance> modes;
    for (const auto& r : refined) {
        if (!r) continue;
        if (r->omega_C < scan.omega_lo || r->omega_C > scan.omega_hi) continue;
        bool duplicate = false;
        for (auto& kept : modes) {
            if (kept.l != r->l) continue;
            const double sep = std::abs(kept.omega_C - r->omega_C);
            if (sep < std::max(kept.delta_omega_C, r->delta_omega_C)) {
                duplicate = true;
                if (r->peak_response > kept.peak_response) kept = *r;
                break;
            }
        }
        if (!duplicate) modes.push_back(*r);
    }
    std::sort(modes.begin(), modes.end(), [](const ModeResonance& a, const ModeResonance& b) {
        if (a.omega_C != b.omega_C) return a.omega_C < b.omega_C;
        return a.l < b.l;
    });
    return modes;
}

std::optional<ModeResonance> nearest_mode(const std::vector<ModeResonance>& modes, double omega) {
    std::optional<ModeResonance> best;
    for (const auto& m : modes) {
        if (!best || std::abs(m.omega_C - omega) < std::abs(best->omega_C - omega)) best = m;
    }
    return best;
}

void write_resonance_cache(const std::string& path, const std::vector<ModeResonance>& modes,
                           const std::string& fingerprint) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write resonance cache: " + path);
    out << "# sphereqed resonance cache\n";
    out << "# fingerprint: " << fingerprint << "\n";
    out << "# columns: l\tomega_C\tdelta_omega_C\tQ\tkind\n";
    for (const auto& m : modes) {
        out << m.l << '\t' << textio::format_sig(m.omega_C) << '\t'
            << textio::format_sig(m.delta_omega_C) << '\t' << textio::format_sig(m.quality) << '\t'
            << (m.kind == ModeKind::SG ? "SG" : "WG") << '\n';
    }
    if (!out) throw std::runtime_error("failed writing resonance cache: " + path);
}

std::optional<std::vector<ModeResonance>> read_resonance_cache(const std::string& path,
                                                               const std::string& fingerprint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string line;
    bool fingerprint_ok = false;
    std::vector<ModeResonance> modes;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# fingerprint: ";
            if (line.rfind(tag, 0) == 0) fingerprint_ok = (line.substr(tag.size()) == fingerprint);
            continue;
        }
        std::istringstream ss(line);
        ModeResonance m;
        std::string kind;
        if (!(ss >> m.l >> m.omega_C >> m.delta_omega_C >> m.quality >> kind)) return std::nullopt;
        m.kind = (kind == "WG") ? ModeKind::WG : ModeKind::SG;
        m.fit_ok = true;
        modes.push_back(m);
    }
    if (!fingerprint_ok) return std::nullopt;
    return modes;
}

}  // namespace sqed::sphere
