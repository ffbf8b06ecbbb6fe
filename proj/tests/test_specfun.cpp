#include "doctest.h"
#include "momentlab/specfun.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace momentlab;
using specfun::cplx;
using specfun::PI;

namespace oracles {
double bessel_quadrature(int nu, double x) {
    // (1/pi) Int_0^pi cos(x sin t - nu t) dt, 4000 GL nodes in 200 panels
    std::vector<double> gx, gw;
    specfun::gauss_legendre(20, gx, gw);
    double acc = 0.0;
    int panels = 200;
    double h = PI / panels;
    for (int p = 0; p < panels; ++p) {
        double a = p * h;
        for (size_t j = 0; j < gx.size(); ++j) {
            double t = a + 0.5 * h * (gx[j] + 1.0);
            acc += 0.5 * h * gw[j] * std::cos(x * std::sin(t) - nu * t);
        }
    }
    return acc / PI;
}
}  // namespace oracles

TEST_CASE("log_gamma classical values") {
    CHECK(std::abs(specfun::gamma(cplx(1.0, 0.0)) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(specfun::gamma(cplx(0.5, 0.0)) - cplx(std::sqrt(PI), 0.0)) < 1e-14);
    CHECK(std::abs(specfun::gamma(cplx(5.0, 0.0)) - cplx(24.0, 0.0)) < 1e-12);
    CHECK_THROWS(specfun::log_gamma(cplx(-2.0, 0.0)));
}

TEST_CASE("log_gamma vs Stirling-with-recurrence oracle") {
    oracles::Rng rng(42);
    for (int i = 0; i < 100; ++i) {
        cplx z(rng.real(-20.0, 50.0), rng.real(-50.0, 50.0));
        if (std::abs(z.imag()) < 0.3) z += cplx(0.0, 0.5);
        cplx mine = specfun::log_gamma(z);
        cplx ref = oracles::log_gamma_stirling(z);
        // compare Gamma values (log branches may differ by 2 pi i k)
        CHECK(std::abs(std::exp(mine) - std::exp(ref)) <=
              1e-12 * std::abs(std::exp(ref)) + 1e-300);
    }
    cplx v = specfun::gamma(cplx(2.0, 3.0));
    cplx ref = std::exp(oracles::log_gamma_stirling(cplx(2.0, 3.0)));
    CHECK(std::abs(v - ref) < 1e-12 * std::abs(ref));
}

TEST_CASE("upper incomplete gamma") {
    // Gamma(1, y) = exp(-y)
    for (double y : {0.3, 1.0, 5.0, 40.0})
        CHECK(std::abs(specfun::upper_gamma(cplx(1.0, 0.0), y) - std::exp(-y)) < 1e-14);
    // Gamma(3, y) = e^{-y}(y^2 + 2y + 2)
    for (double y : {0.2, 2.0, 9.0, 31.0}) {
        double ref = std::exp(-y) * (y * y + 2.0 * y + 2.0);
        CHECK(std::abs(specfun::upper_gamma(cplx(3.0, 0.0), y) - ref) < 1e-13 * (1.0 + ref));
    }
    // recurrence Gamma(a+1,y) = a Gamma(a,y) + y^a e^{-y}
    oracles::Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        cplx a(rng.real(0.2, 6.0), rng.real(-4.0, 4.0));
        double y = rng.real(0.05, 60.0);
        cplx lhs = specfun::upper_gamma(a + 1.0, y);
        cplx rhs = a * specfun::upper_gamma(a, y) + std::exp(-y + a * std::log(y));
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("bessel_J values and integral representation") {
    CHECK(specfun::bessel_J(1, 0.0) == 0.0);
    for (double x : {0.5, 5.0, 50.0})
        CHECK(std::abs(specfun::bessel_J(1, x) - oracles::bessel_quadrature(1, x)) < 1e-9);
    // quadrature oracle resolves the phase only up to moderate x
    for (int nu : {0, 2, 3, 7, 12, 20})
        for (double x : {0.1, 1.0, 8.0, 17.0, 19.0, 30.0, 120.0})
            CHECK(std::abs(specfun::bessel_J(nu, x) - oracles::bessel_quadrature(nu, x)) < 1e-9);
    // frozen high-precision references for the asymptotic/recurrence regime
    struct Ref { int nu; double x; double v; };
    const Ref refs[] = {
        {0, 120.0, 0.071823415829156127576},
        {0, 1000.0, 0.024786686152420174561},
        {1, 1000.0, 0.0047283119070895239176},
        {3, 1000.0, -0.0048274208252039478996},
        {7, 5000.0, 0.0091492157035509845891},
        {12, 1000.0, 0.024384086530438304024},
        {20, 99000.0, 0.00055803649733189552344},
        {20, 100000.0, -0.0017228912249312632353},
        {5, 100000.0, 0.0018465512454522950407},
    };
    for (auto& r : refs) CHECK(std::abs(specfun::bessel_J(r.nu, r.x) - r.v) < 1e-10);
}

TEST_CASE("bessel_J recurrence on a grid") {
    for (int i = 1; i <= 20; ++i) {
        double x = 0.7 * i + 0.31;
        for (int nu : {1, 2, 5, 11}) {
            double lhs = specfun::bessel_J(nu - 1, x) + specfun::bessel_J(nu + 1, x);
            double rhs = (2.0 * nu / x) * specfun::bessel_J(nu, x);
            CHECK(std::abs(lhs - rhs) < 1e-9);
        }
    }
}

TEST_CASE("J_kernel small-x series and large-x size") {
    // kappa = 2: J(x)/(4 pi i^2) -> pi as x -> 0
    cplx v = specfun::J_kernel(2, 1e-9);
    CHECK(std::abs(v / (4.0 * PI * cplx(-1.0, 0.0)) - cplx(PI, 0.0)) < 1e-8);
    // series route agrees with the direct Bessel route at the same x
    for (int kappa : {2, 4, 6}) {
        double x = 0.4999;  // series side of the switch
        cplx series = specfun::J_kernel(kappa, x);
        double sign = (kappa % 4 == 0) ? 1.0 : -1.0;
        cplx direct = sign * 4.0 * PI * specfun::bessel_J(kappa - 1, 2.0 * PI * x) / x;
        CHECK(std::abs(series - direct) < 1e-10 * (1.0 + std::abs(direct)));
    }
    // |J(x)| <= 4 pi x^{-3/2} (1 + o(1)) for large x
    double x = 1000.0;
    CHECK(std::abs(specfun::J_kernel(4, x)) <= 4.0 * PI * std::pow(x, -1.5) * 1.1);
    CHECK_THROWS(specfun::J_kernel(3, 1.0));
}

TEST_CASE("contour quadrature integrates a known Mellin pair") {
    // (1/2 pi i) Int Gamma(s) y^{-s} ds = e^{-y} on Re s = 2
    specfun::ContourSpec spec;
    spec.real_part = 2.0;
    for (double y : {0.5, 1.0, 3.0}) {
        auto r = specfun::integrate_contour(
            [&](cplx s) { return std::exp(specfun::log_gamma(s) - s * std::log(y)); }, spec);
        CHECK(std::abs(r.value - std::exp(-y)) < 1e-11);
        CHECK(r.abs_error_estimate < 1e-7);
        CHECK(std::abs(r.value - std::exp(-y)) <= r.abs_error_estimate + 1e-12);
    }
}

TEST_CASE("V_weight: contour route equals incomplete-gamma route") {
    specfun::ContourSpec spec;
    spec.real_part = 2.0;
    oracles::Rng rng(99);
    for (int i = 0; i < 20; ++i) {
        cplx alpha(rng.real(-0.3, 0.3), rng.real(-0.5, 0.5));
        double x = rng.real(0.01, 4.0);
        int kappa = (i % 2 == 0) ? 4 : 6;
        auto slow = specfun::V_weight(alpha, x, kappa, spec);
        cplx fast = specfun::V_weight_fast(alpha, x, kappa);
        CHECK(std::abs(slow.value - fast) < 1e-10 * (1.0 + std::abs(fast)));
    }
}

TEST_CASE("V_weight residue limit, contour independence, decay") {
    specfun::ContourSpec s1, s2;
    s1.real_part = 1.0;
    s2.real_part = 2.0;
    // alpha=0, kappa=4: V -> Gamma(2) = 1 as x -> 0+ (residue at s = 0)
    CHECK(std::abs(specfun::V_weight_fast(cplx(0.0, 0.0), 1e-6, 4) - cplx(1.0, 0.0)) < 1e-6);
    // contour route at small x: the (2 pi x)^{-sigma} prefactor costs digits,
    // so validate against the exact route at x = 1e-3 instead
    auto v0 = specfun::V_weight(cplx(0.0, 0.0), 1e-3, 4, s2);
    CHECK(std::abs(v0.value - specfun::V_weight_fast(cplx(0.0, 0.0), 1e-3, 4)) < 1e-8);
    // contour independence at x=1, alpha = 0.1i
    auto a = specfun::V_weight(cplx(0.0, 0.1), 1.0, 4, s1);
    auto b = specfun::V_weight(cplx(0.0, 0.1), 1.0, 4, s2);
    CHECK(std::abs(a.value - b.value) < 1e-10);
    // rapid decay
    CHECK(std::abs(specfun::V_weight_fast(cplx(0.0, 0.0), 50.0, 4)) < 1e-12);
    CHECK_THROWS(specfun::V_weight(cplx(0.5, 0.0), 1.0, 4, s1.with_sigma(0.3)));
}

TEST_CASE("V_triple symmetry and d-sum structure") {
    cplx a1(0.02, 0.0), a2(0.01, 0.1), a3(-0.03, -0.05);
    cplx v1 = specfun::V_triple(0.7, 0.4, 1.1, a1, a2, a3, 5, 4);
    cplx v2 = specfun::V_triple(0.7, 1.1, 0.4, a1, a3, a2, 5, 4);
    CHECK(std::abs(v1 - v2) < 1e-13 * (1.0 + std::abs(v1)));

    // (1,1,1), alpha=0, q=5, kappa=4 vs direct composition of 1D weights
    cplx zero{0.0, 0.0};
    cplx direct{0.0, 0.0};
    for (int d = 1; d <= 40; ++d) {
        if (d % 5 == 0) continue;
        direct += (1.0 / d) * specfun::V_weight_fast(zero, d * 1.0, 4) *
                  specfun::V_weight_fast(zero, d * 1.0, 4);
    }
    direct *= specfun::V_weight_fast(zero, 1.0, 4);
    cplx mine = specfun::V_triple(1.0, 1.0, 1.0, zero, zero, zero, 5, 4);
    CHECK(std::abs(mine - direct) < 1e-8);
}
