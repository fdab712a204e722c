#include "sphereqed/rates.hpp"

#include <cmath>
#include <memory>
#include <mutex>

#include "sphereqed/errors.hpp"

namespace sqed::rates {

namespace {

using detail::ScaledComplex;

struct ReflectionCache {
    std::mutex mutex;
    double omega = -1.0;
    std::vector<ScaledComplex> values;
};

struct SeriesState {
    double sum_plus = 0.0;
    double sum_minus = 0.0;
    // per-term relative increments, most recent last
    double rel[3] = {1.0, 1.0, 1.0};
    double prev_abs_odd = 0.0;
    double prev_abs_even = 0.0;
    int l_stop = 0;
    bool converged = false;
};

double term_value(int l, const ScaledComplex& j, const ScaledComplex& h, const ScaledComplex& b,
                  double x) {
    // Re{h j} = j^2 for real argument; the j ladder is accurate at every
    // order while the real part of the upward h ladder loses meaning far
    // beyond the turning point, so the free-space part uses j alone.
    const double jj = (j * j).to_complex().real();
    const std::complex<double> bh2 = (b * h * h).to_complex();
    const double ll = static_cast<double>(l);
    const double pref = 1.5 * ll * (ll + 1.0) * (2.0 * ll + 1.0) / (x * x);
    return pref * (jj + bh2.real());
}

}  // namespace

ReflectionProvider sphere_reflection(const sphere::PermittivityParams& params,
                                     const sphere::SphereGeometry& geometry, int fixed_l_max) {
    auto cache = std::make_shared<ReflectionCache>();
    return [params, geometry, cache, fixed_l_max](int l_max, double omega) {
        std::lock_guard<std::mutex> lock(cache->mutex);
        if (cache->omega != omega || static_cast<int>(cache->values.size()) <= l_max) {
            // Ladder rounding depends on the computed depth, so a shared cache
            // is always built at one fixed depth to keep results independent
            // of which worker touched it first.
            const int depth = std::max(l_max, fixed_l_max);
            cache->values = sphere::reflection_tm_array(depth, omega, params, geometry);
            cache->omega = omega;
        }
        if (static_cast<int>(cache->values.size()) <= l_max)
            cache->values = sphere::reflection_tm_array(l_max, omega, params, geometry);
        return std::vector<ScaledComplex>(cache->values.begin(),
                                          cache->values.begin() + l_max + 1);
    };
}

ReflectionProvider free_space_reflection() {
    return [](int l_max, double) { return std::vector<ScaledComplex>(static_cast<size_t>(l_max) + 1); };
}

RateSet pair_decay_rates_with(double omega, const sphere::SphereGeometry& geometry,
                              const ReflectionProvider& reflection, const SeriesOptions& opts) {
    geometry.validate();
    if (omega <= 0.0) throw std::domain_error("pair_decay_rates: omega must be positive");
    if (std::abs(geometry.atom_distance - geometry.distance_b()) > 0.0)
        throw std::invalid_argument(
            "pair_decay_rates: equal atom-surface distances required (equal single-atom rates)");

    const double x = sphere::wavenumber(omega) * geometry.atom_radius();
    const int l_floor = bessel::recommended_l_max(x);

    SeriesState st;
    int l_target = opts.l_max.value_or(std::max(l_floor + 8, 64));
    const bool adaptive = !opts.l_max.has_value();

    while (true) {
        const bessel::Ladder lj = bessel::ladder_j(l_target, {x, 0.0});
        const bessel::Ladder lh = bessel::ladder_h1(l_target, {x, 0.0});
        const std::vector<ScaledComplex> b = reflection(l_target, omega);

        st = SeriesState{};
        for (int l = 1; l <= l_target; ++l) {
            const double t =
                term_value(l, lj.scaled(l), lh.scaled(l), b[static_cast<size_t>(l)], x);
            const bool odd = (l % 2 != 0);
            double& sum = odd ? st.sum_plus : st.sum_minus;
            sum += 2.0 * t;
            const double denom = std::max(std::abs(sum), 1e-30);
            st.rel[0] = st.rel[1];
            st.rel[1] = st.rel[2];
            st.rel[2] = std::abs(2.0 * t) / denom;
            st.l_stop = l;

            // Convergence: the physical heuristic floor passed, the last
            // three terms relatively negligible, and a geometric tail bound
            // (same-parity ratio) also below tolerance.
            if (l >= l_floor && st.rel[0] < opts.rel_tol && st.rel[1] < opts.rel_tol &&
                st.rel[2] < opts.rel_tol) {
                const double prev = odd ? st.prev_abs_odd : st.prev_abs_even;
                const double cur = std::abs(t);
                bool tail_ok = true;
                if (prev > 0.0 && cur > 0.0) {
                    const double rho = cur / prev;
                    if (rho < 0.9995) {
                        const double tail = 2.0 * cur * rho / (1.0 - rho);
                        tail_ok = tail < opts.rel_tol * denom;
                    } else {
                        tail_ok = false;
                    }
                }
                if (tail_ok) {
                    st.converged = true;
                    break;
                }
            }
            if (odd)
                st.prev_abs_odd = std::abs(t);
            else
                st.prev_abs_even = std::abs(t);
        }

        if (st.converged || !adaptive || l_target >= opts.l_max_cap) break;
        l_target = std::min(opts.l_max_cap, 2 * l_target);
    }

    RateSet r;
    r.omega = omega;
    r.truncation = st.l_stop;
    r.converged = st.converged;
    r.gamma_single = 0.5 * (st.sum_plus + st.sum_minus);
    r.gamma_cross = 0.5 * (st.sum_plus - st.sum_minus);
    // Derived so that gamma_pm = gamma_single +- gamma_cross holds bit-exactly.
    r.gamma_plus = r.gamma_single + r.gamma_cross;
    r.gamma_minus = r.gamma_single - r.gamma_cross;
    if (r.gamma_plus < -1e-9 || r.gamma_minus < -1e-9)
        throw NumericalError("pair_decay_rates: negative decay rate (Gamma+ = " +
                             std::to_string(r.gamma_plus) + ", Gamma- = " +
                             std::to_string(r.gamma_minus) +
                             "): reflection sign convention violated");
    return r;
}

RateSet pair_decay_rates(double omega, const sphere::SphereGeometry& geometry,
                         const sphere::PermittivityParams& params, const SeriesOptions& opts) {
    return pair_decay_rates_with(omega, geometry, sphere_reflection(params, geometry), opts);
}

ResonantRate single_rate_resonant(double omega, const sphere::SphereGeometry& geometry,
                                  const sphere::PermittivityParams& params, int l) {
    if (l < 1) throw std::domain_error("single_rate_resonant: l must be >= 1");
    const double x = sphere::wavenumber(omega) * geometry.atom_radius();
    const bessel::Ladder lh = bessel::ladder_h1(l, {x, 0.0});
    const auto b = sphere::reflection_tm_array(l, omega, params, geometry);
    const ScaledComplex h_over_x = lh.scaled(l) * std::complex<double>(1.0 / x, 0.0);
    const std::complex<double> core =
        (h_over_x * h_over_x * b[static_cast<size_t>(l)]).to_complex();
    const double ll = static_cast<double>(l);

    ResonantRate out;
    out.value = 1.5 * ll * (ll + 1.0) * (2.0 * ll + 1.0) * core.real();
    const RateSet full = pair_decay_rates(omega, geometry, params);
    out.relative_deviation = full.gamma_single != 0.0
                                 ? std::abs(out.value - full.gamma_single) /
                                       std::abs(full.gamma_single)
                                 : std::abs(out.value);
    out.valid = out.relative_deviation <= 0.10;
    return out;
}

std::pair<double, double> parity_rates(double gamma_single, int l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;  // (-1)^l
    return {gamma_single * (1.0 - sign), gamma_single * (1.0 + sign)};
}

double cross_rate_free_space(double separation, double omega) {
    if (separation <= 0.0) throw std::domain_error("cross_rate_free_space: separation must be > 0");
    const double x = sphere::wavenumber(omega) * separation;
    if (x < 0.01) return 1.0 - x * x / 10.0 + x * x * x * x / 280.0;
    return 3.0 * (std::sin(x) / (x * x * x) - std::cos(x) / (x * x));
}

}  // namespace sqed::rates
