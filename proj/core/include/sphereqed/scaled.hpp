#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace sqed::detail {

/// Complex number carried as mantissa * 2^exp2, for recurrences whose
/// intermediates leave the double exponent range (high-order Bessel ladders,
/// Mie numerators/denominators beyond the light line).
struct ScaledComplex {
    std::complex<double> mant{0.0, 0.0};
    long exp2{0};

    static ScaledComplex from(std::complex<double> v) {
        ScaledComplex s{v, 0};
        s.normalize();
        return s;
    }

    bool zero() const { return mant.real() == 0.0 && mant.imag() == 0.0; }

    // Pull the mantissa magnitude back near [0.5, 1).
    void normalize() {
        const double a = std::max(std::abs(mant.real()), std::abs(mant.imag()));
        if (a == 0.0) {
            exp2 = 0;
            return;
        }
        int k = 0;
        std::frexp(a, &k);
        mant = {std::ldexp(mant.real(), -k), std::ldexp(mant.imag(), -k)};
        exp2 += k;
    }

    ScaledComplex operator*(const ScaledComplex& o) const {
        ScaledComplex r{mant * o.mant, exp2 + o.exp2};
        r.normalize();
        return r;
    }

    ScaledComplex operator*(std::complex<double> v) const {
        ScaledComplex r{mant * v, exp2};
        r.normalize();
        return r;
    }

    ScaledComplex operator/(const ScaledComplex& o) const {
        ScaledComplex r{mant / o.mant, exp2 - o.exp2};
        r.normalize();
        return r;
    }

    ScaledComplex operator+(const ScaledComplex& o) const {
        if (zero()) return o;
        if (o.zero()) return *this;
        // Align exponents; the far smaller operand is below double noise.
        const long d = exp2 - o.exp2;
        if (d > 2000) return *this;
        if (d < -2000) return o;
        ScaledComplex r;
        if (d >= 0) {
            r.mant = mant + std::complex<double>(std::ldexp(o.mant.real(), static_cast<int>(-d)),
                                                 std::ldexp(o.mant.imag(), static_cast<int>(-d)));
            r.exp2 = exp2;
        } else {
            r.mant = o.mant + std::complex<double>(std::ldexp(mant.real(), static_cast<int>(d)),
                                                   std::ldexp(mant.imag(), static_cast<int>(d)));
            r.exp2 = o.exp2;
        }
        r.normalize();
        return r;
    }

    ScaledComplex operator-(const ScaledComplex& o) const {
        return *this + ScaledComplex{-o.mant, o.exp2};
    }

    /// Saturating conversion: underflow -> 0, overflow -> +/-inf.
    std::complex<double> to_complex() const {
        if (zero()) return {0.0, 0.0};
        if (exp2 > 1100) {
            const double inf = std::numeric_limits<double>::infinity();
            return {mant.real() == 0.0 ? 0.0 : std::copysign(inf, mant.real()),
                    mant.imag() == 0.0 ? 0.0 : std::copysign(inf, mant.imag())};
        }
        if (exp2 < -1140) return {0.0, 0.0};
        const int k = static_cast<int>(exp2);
        return {std::ldexp(mant.real(), k), std::ldexp(mant.imag(), k)};
    }

    bool representable() const {
        return zero() || (exp2 <= 1020 && exp2 >= -1020);
    }

    double abs() const { return std::abs(to_complex()); }

    /// log2 of the magnitude; -inf for zero.
    double log2_abs() const {
        if (zero()) return -std::numeric_limits<double>::infinity();
        return std::log2(std::abs(mant)) + static_cast<double>(exp2);
    }
};

}  // namespace sqed::detail
