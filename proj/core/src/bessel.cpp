#include "sphereqed/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqed::bessel {

namespace {

using detail::ScaledComplex;

constexpr double kSeriesCutoff = 0.35;

Complex j0_closed(Complex z) { return std::sin(z) / z; }
Complex j1_closed(Complex z) { return std::sin(z) / (z * z) - std::cos(z) / z; }

// Power series around z = 0, used where sin/cos forms lose digits.
Complex j_series(int l, Complex z) {
    double dfact = 1.0;  // (2l+1)!!
    for (int m = 3; m <= 2 * l + 1; m += 2) dfact *= m;
    Complex sum = 1.0;
    Complex term = 1.0;
    const Complex z2 = -0.5 * z * z;
    for (int k = 1; k < 64; ++k) {
        term *= z2 / static_cast<double>(k * (2 * l + 2 * k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    Complex zl = 1.0;
    for (int m = 0; m < l; ++m) zl *= z;
    return zl / dfact * sum;
}

// Downward Miller pass for j: returns scaled values 0..l_max. The start
// order must clear both the requested order and |z|; below |z| the first-kind
// solution is not minimal and the seed would never purify.
std::vector<ScaledComplex> miller_down(int l_max, Complex z) {
    const double az = std::abs(z);
    const int base = std::max(l_max, static_cast<int>(std::ceil(az)));
    const int start = base + 16 +
                      static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(base) + az)));
    std::vector<ScaledComplex> out(static_cast<size_t>(l_max) + 1);

    const Complex inv_z = 1.0 / z;
    Complex fp{0.0, 0.0};      // f_{l+1}
    Complex fc{1e-160, 0.0};   // f_l seed
    long e = 0;                // shared power-of-two exponent
    for (int l = start; l >= 0; --l) {
        if (l <= l_max) {
            ScaledComplex s{fc, e};
            s.normalize();
            out[static_cast<size_t>(l)] = s;
        }
        const Complex fm = static_cast<double>(2 * l + 1) * inv_z * fc - fp;
        fp = fc;
        fc = fm;
        const double mag = std::max(std::max(std::abs(fc.real()), std::abs(fc.imag())),
                                    std::max(std::abs(fp.real()), std::abs(fp.imag())));
        if (mag > 0x1p900) {
            fc *= 0x1p-900;
            fp *= 0x1p-900;
            e += 900;
        }
    }
    // fc now holds the unnormalized order-(-1) value; fp holds order 0.
    // Normalize against whichever closed form is better conditioned.
    ScaledComplex f0{fp, e};
    f0.normalize();
    ScaledComplex f1 = l_max >= 1 ? out[1] : ScaledComplex{};
    const Complex j0 = j0_closed(z);
    const Complex j1 = j1_closed(z);
    ScaledComplex norm;
    if (l_max >= 1 && std::abs(j1) > std::abs(j0)) {
        norm = ScaledComplex::from(j1) / f1;
    } else {
        norm = ScaledComplex::from(j0) / f0;
    }
    for (auto& v : out) v = v * norm;
    return out;
}

}  // namespace

int recommended_l_max(double x) {
    return static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 12.0));
}

Ladder ladder_j(int l_max, Complex z) {
    if (l_max < 0) throw std::domain_error("ladder_j: negative order");
    if (z == Complex{0.0, 0.0}) {
        std::vector<ScaledComplex> vals(static_cast<size_t>(l_max) + 1);
        vals[0] = ScaledComplex::from(1.0);
        return Ladder(std::move(vals), z);
    }
    if (std::abs(z) < kSeriesCutoff) {
        std::vector<ScaledComplex> vals(static_cast<size_t>(l_max) + 1);
        for (int l = 0; l <= l_max; ++l) vals[static_cast<size_t>(l)] = ScaledComplex::from(j_series(l, z));
        return Ladder(std::move(vals), z);
    }
    return Ladder(miller_down(l_max, z), z);
}

Ladder ladder_h1(int l_max, Complex z) {
    if (l_max < 0) throw std::domain_error("ladder_h1: negative order");
    if (z == Complex{0.0, 0.0}) throw std::domain_error("ladder_h1: pole at z = 0");
    std::vector<ScaledComplex> vals(static_cast<size_t>(l_max) + 1);
    const Complex eiz = std::exp(Complex{0.0, 1.0} * z);
    const Complex inv_z = 1.0 / z;
    Complex hm = -Complex{0.0, 1.0} * eiz * inv_z;              // h_0
    Complex hc = -(inv_z + Complex{0.0, 1.0} * inv_z * inv_z) * eiz;  // h_1
    long e = 0;
    vals[0] = ScaledComplex::from(hm);
    if (l_max >= 1) {
        ScaledComplex s{hc, 0};
        s.normalize();
        vals[1] = s;
    }
    for (int l = 1; l < l_max; ++l) {
        const Complex hn = static_cast<double>(2 * l + 1) * inv_z * hc - hm;
        hm = hc;
        hc = hn;
        const double mag = std::max(std::max(std::abs(hc.real()), std::abs(hc.imag())),
                                    std::max(std::abs(hm.real()), std::abs(hm.imag())));
        if (mag > 0x1p900) {
            hc *= 0x1p-900;
            hm *= 0x1p-900;
            e += 900;
        }
        ScaledComplex s{hc, e};
        s.normalize();
        vals[static_cast<size_t>(l) + 1] = s;
    }
    return Ladder(std::move(vals), z);
}

std::vector<Complex> riccati_log_derivative(int l_max, Complex z) {
    if (z == Complex{0.0, 0.0}) throw std::domain_error("riccati_log_derivative: z = 0");
    const double az = std::abs(z);
    const int start = std::max(l_max, static_cast<int>(std::ceil(az))) + 16 +
                      static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(l_max) + az)));
    std::vector<Complex> d(static_cast<size_t>(l_max) + 1);
    Complex dc{0.0, 0.0};
    const Complex inv_z = 1.0 / z;
    for (int l = start; l >= 1; --l) {
        const Complex lz = static_cast<double>(l) * inv_z;
        dc = lz - 1.0 / (dc + lz);
        if (l - 1 <= l_max) d[static_cast<size_t>(l - 1)] = dc;
    }
    // D_0(z) = psi_0'/psi_0 = cos z / sin z; the recurrence above already
    // landed on it, but the closed form is exact and guards seed error.
    d[0] = std::cos(z) / std::sin(z);
    return d;
}

Complex spherical_j(int l, Complex z) {
    if (l < 0) throw std::domain_error("spherical_j: negative order");
    if (z == Complex{0.0, 0.0}) return l == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    if (std::abs(z) < kSeriesCutoff) return j_series(l, z);
    if (l == 0) return j0_closed(z);
    if (l == 1) return j1_closed(z);
    if (static_cast<double>(l) <= 0.9 * std::abs(z)) {
        // Oscillatory regime: upward recurrence is stable here.
        Complex fm = j0_closed(z);
        Complex fc = j1_closed(z);
        const Complex inv_z = 1.0 / z;
        for (int n = 1; n < l; ++n) {
            const Complex fn = static_cast<double>(2 * n + 1) * inv_z * fc - fm;
            fm = fc;
            fc = fn;
        }
        return fc;
    }
    return ladder_j(l, z).get(l);
}

Complex spherical_y(int l, Complex z) {
    if (l < 0) throw std::domain_error("spherical_y: negative order");
    if (z == Complex{0.0, 0.0}) throw std::domain_error("spherical_y: pole at z = 0");
    Complex ym = -std::cos(z) / z;
    if (l == 0) return ym;
    Complex yc = -std::cos(z) / (z * z) - std::sin(z) / z;
    const Complex inv_z = 1.0 / z;
    for (int n = 1; n < l; ++n) {
        const Complex yn = static_cast<double>(2 * n + 1) * inv_z * yc - ym;
        ym = yc;
        yc = yn;
    }
    return yc;
}

Complex spherical_h1(int l, Complex z) {
    if (l < 0) throw std::domain_error("spherical_h1: negative order");
    if (z == Complex{0.0, 0.0}) throw std::domain_error("spherical_h1: pole at z = 0");
    return ladder_h1(l, z).get(l);
}

Complex riccati_derivative(Kind kind, int l, Complex z) {
    if (l < 0) throw std::domain_error("riccati_derivative: negative order");
    if (kind == Kind::H1 && z == Complex{0.0, 0.0})
        throw std::domain_error("riccati_derivative: pole at z = 0");
    // Order -1: j_{-1} = cos z / z, h^(1)_{-1} = e^{iz} / z.
    if (l == 0) {
        if (z == Complex{0.0, 0.0}) return {1.0, 0.0};  // d/dz [z j_0] = cos z
        return kind == Kind::J ? std::cos(z) : std::exp(Complex{0.0, 1.0} * z);
    }
    if (kind == Kind::J) {
        if (z == Complex{0.0, 0.0}) return {0.0, 0.0};
        return z * spherical_j(l - 1, z) - static_cast<double>(l) * spherical_j(l, z);
    }
    const Ladder h = ladder_h1(l, z);
    return (h.scaled(l - 1) * z - h.scaled(l) * Complex{static_cast<double>(l), 0.0}).to_complex();
}

SphericalBesselValue evaluate(Kind kind, int l, Complex z) {
    SphericalBesselValue v;
    v.order = l;
    v.argument = z;
    if (kind == Kind::J) {
        if (z == Complex{0.0, 0.0}) {
            v.value = l == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            v.riccati_derivative = riccati_derivative(kind, l, z);
            return v;
        }
        const Ladder lad = ladder_j(l, z);
        v.value = lad.get(l);
        v.out_of_range = !lad.scaled(l).representable();
        v.riccati_derivative =
            l == 0 ? std::cos(z)
                   : (lad.scaled(l - 1) * z - lad.scaled(l) * Complex{static_cast<double>(l), 0.0})
                         .to_complex();
        return v;
    }
    const Ladder lad = ladder_h1(l, z);
    v.value = lad.get(l);
    v.out_of_range = !lad.scaled(l).representable();
    v.riccati_derivative =
        l == 0 ? std::exp(Complex{0.0, 1.0} * z)
               : (lad.scaled(l - 1) * z - lad.scaled(l) * Complex{static_cast<double>(l), 0.0})
                     .to_complex();
    return v;
}

}  // namespace sqed::bessel
