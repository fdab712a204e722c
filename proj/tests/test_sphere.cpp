#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "sphereqed/sphere.hpp"
#include "support/oracles.hpp"

using namespace sqed;
using sphere::PermittivityParams;
using sphere::SphereGeometry;
using Cx = std::complex<double>;

TEST_CASE("permittivity limits and band edge") {
    PermittivityParams p;  // omega_P = 0.5, gamma = 1e-6
    CHECK(std::abs(sphere::permittivity(1e-9, p) - Cx{1.25, 0.0}) < 1e-9);
    CHECK(std::abs(sphere::permittivity(1e6, p) - Cx{1.0, 0.0}) < 1e-9);
    CHECK(p.band_edge_upper() == doctest::Approx(1.1180339887498949).epsilon(1e-12));
    CHECK(p.in_band_gap(1.05));
    CHECK(!p.in_band_gap(0.9));
    PermittivityParams lossless = p;
    lossless.gamma = 0.0;
    CHECK_THROWS_AS((void)sphere::permittivity(1.0, lossless), std::domain_error);
}

TEST_CASE("passivity: Im eps > 0 for absorbing media") {
    for (const double g : {1e-6, 0.05}) {
        PermittivityParams p;
        p.gamma = g;
        for (int i = 1; i <= 60; ++i) {
            const double w = 0.05 * i;
            CHECK(sphere::permittivity(w, p).imag() > 0.0);
        }
    }
}

TEST_CASE("Kramers-Kronig spot check") {
    PermittivityParams p;
    p.gamma = 0.05;  // broad line keeps the quadrature honest
    auto g = [&](double w) { return w > 0.0 ? 2.0 / M_PI * w * sphere::permittivity(w, p).imag() : 0.0; };
    for (const double w0 : {0.5, 1.6, 2.3}) {
        const double re_kk = oracles::principal_value_over_x2(g, w0, 60.0, 600000);
        const double re_direct = sphere::permittivity(w0, p).real() - 1.0;
        CHECK(std::abs(re_kk - re_direct) < 0.01 * std::max(1.0, std::abs(re_direct)));
    }
}

TEST_CASE("no sphere, no scattering") {
    PermittivityParams vacuum;
    vacuum.omega_P = 0.0;
    SphereGeometry geom;
    for (const int l : {1, 10, 60})
        CHECK(std::abs(sphere::reflection_tm(l, 1.05, vacuum, geom)) < 1e-13);
}

TEST_CASE("lossless S-matrix unitarity |1 + 2B| = 1") {
    PermittivityParams p;
    p.gamma = 0.0;
    SphereGeometry geom;
    for (const double w : {0.5, 0.9, 1.3, 1.8}) {
        for (const int l : {1, 5, 20, 60, 90}) {
            const Cx b = sphere::reflection_tm(l, w, p, geom);
            CHECK(std::abs(std::abs(1.0 + 2.0 * b) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("conjugating the permittivity inverts the scattering phase") {
    // eps -> conj(eps) (gamma -> -gamma) with outgoing waves kept fixed obeys
    // S(eps) conj(S(conj eps)) = 1 for S = 1 + 2B; at gamma = 0 this is the
    // usual |S| = 1 unitarity.
    PermittivityParams plus;
    plus.gamma = 1e-4;
    PermittivityParams minus = plus;
    minus.gamma = -1e-4;
    SphereGeometry geom;
    for (const double w : {0.7, 1.05, 1.4}) {
        for (const int l : {2, 9, 40}) {
            const Cx sp = 1.0 + 2.0 * sphere::reflection_tm(l, w, plus, geom);
            const Cx sm = 1.0 + 2.0 * sphere::reflection_tm(l, w, minus, geom);
            CHECK(std::abs(sp * std::conj(sm) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("B is continuous along the scan grid") {
    PermittivityParams p;
    SphereGeometry geom;
    Cx prev = sphere::reflection_tm(30, 1.200, p, geom);
    for (int i = 1; i <= 100; ++i) {
        const double w = 1.200 + 1e-3 * i;
        const Cx cur = sphere::reflection_tm(30, w, p, geom);
        CHECK(std::abs(cur - prev) < 0.5 * (1.0 + std::abs(prev)));
        prev = cur;
    }
}

TEST_CASE("resonance scan finds the surface-guided comb near 1.05") {
    PermittivityParams p;
    SphereGeometry geom;
    sphere::ResonanceScan scan;
    scan.l_min = 110;
    scan.l_max = 130;
    scan.omega_lo = 1.0495;
    scan.omega_hi = 1.0505;
    scan.points = 801;
    const auto modes = sphere::find_resonances(scan, p, geom);
    REQUIRE(!modes.empty());
    // ascending in omega, unique per l
    for (size_t i = 1; i < modes.size(); ++i) CHECK(modes[i].omega_C >= modes[i - 1].omega_C);
    const auto nearest = sphere::nearest_mode(modes, 1.0501);
    REQUIRE(nearest.has_value());
    CHECK(std::abs(nearest->omega_C / 1.0501 - 1.0) < 1e-3);
    CHECK(nearest->kind == sphere::ModeKind::SG);
    CHECK(nearest->quality > 1e5);
    CHECK(nearest->fit_ok);
    CHECK(nearest->fit_residual < 0.10);
}

TEST_CASE("doubling the absorption broadens the line") {
    SphereGeometry geom;
    sphere::ResonanceScan scan;
    scan.l_min = 120;
    scan.l_max = 120;
    scan.omega_lo = 1.0496;
    scan.omega_hi = 1.0502;
    scan.points = 601;
    PermittivityParams p1;
    p1.gamma = 1e-6;
    PermittivityParams p2;
    p2.gamma = 1e-5;
    const auto m1 = sphere::find_resonances(scan, p1, geom);
    const auto m2 = sphere::find_resonances(scan, p2, geom);
    REQUIRE(m1.size() == 1);
    REQUIRE(m2.size() == 1);
    CHECK(m2[0].delta_omega_C > m1[0].delta_omega_C);
}

TEST_CASE("fitted linewidth is stable under grid refinement") {
    PermittivityParams p;
    SphereGeometry geom;
    sphere::ResonanceScan coarse;
    coarse.l_min = 120;
    coarse.l_max = 120;
    coarse.omega_lo = 1.0496;
    coarse.omega_hi = 1.0502;
    coarse.points = 301;
    sphere::ResonanceScan fine = coarse;
    fine.points = 601;
    const auto a = sphere::find_resonances(coarse, p, geom);
    const auto b = sphere::find_resonances(fine, p, geom);
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    CHECK(std::abs(a[0].delta_omega_C - b[0].delta_omega_C) < 0.02 * b[0].delta_omega_C);
}

TEST_CASE("window without sharp modes comes back empty") {
    PermittivityParams p;
    SphereGeometry geom;
    sphere::ResonanceScan scan;
    scan.l_min = 1;
    scan.l_max = 40;
    scan.omega_lo = 0.5;
    scan.omega_hi = 0.6;
    scan.points = 1201;
    CHECK(sphere::find_resonances(scan, p, geom).empty());
}

TEST_CASE("resonance cache round trip") {
    std::vector<sphere::ModeResonance> modes(2);
    modes[0].l = 120;
    modes[0].omega_C = 1.04989845;
    modes[0].delta_omega_C = 9.77e-7;
    modes[0].quality = modes[0].omega_C / modes[0].delta_omega_C;
    modes[0].kind = sphere::ModeKind::SG;
    modes[1].l = 121;
    modes[1].omega_C = 1.05010037;
    modes[1].delta_omega_C = 9.78e-7;
    modes[1].quality = modes[1].omega_C / modes[1].delta_omega_C;
    modes[1].kind = sphere::ModeKind::WG;

    const std::string path = (std::filesystem::temp_directory_path() / "sqed_cache_test.tsv").string();
    sphere::write_resonance_cache(path, modes, "fp-1");
    const auto back = sphere::read_resonance_cache(path, "fp-1");
    REQUIRE(back.has_value());
    REQUIRE(back->size() == 2);
    CHECK((*back)[0].l == 120);
    CHECK((*back)[0].omega_C == doctest::Approx(modes[0].omega_C).epsilon(1e-12));
    CHECK((*back)[1].kind == sphere::ModeKind::WG);
    CHECK(!sphere::read_resonance_cache(path, "other").has_value());
    std::filesystem::remove(path);
}

TEST_CASE("geometry validation") {
    SphereGeometry bad;
    bad.radius = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    SphereGeometry geom;
    geom.atom_distance = 0.05;
    CHECK(geom.swapped().atom_distance == doctest::Approx(geom.distance_b()));
    CHECK(geom.atom_radius() == doctest::Approx(10.05));
}
