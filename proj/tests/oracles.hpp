#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: trial-division factorization, brute-force unit counts, a
// Stirling-with-recurrence log-gamma, quadrature for Bessel J, and a tiny
// deterministic generator for property-style tests.

#include <complex>
#include <cstdint>
#include <vector>

namespace oracles {

using i64 = std::int64_t;
using cplx = std::complex<double>;

inline std::vector<std::pair<i64, int>> factor_trial(i64 n) {
    std::vector<std::pair<i64, int>> out;
    for (i64 p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline i64 phi_brute(i64 n) {
    i64 count = 0;
    for (i64 a = 1; a <= n; ++a) {
        i64 x = a, y = n;
        while (y) { i64 t = x % y; x = y; y = t; }
        if (x == 1) ++count;
    }
    return count;
}

// Stirling series after shifting z right by 12; independent of Lanczos.
inline cplx log_gamma_stirling(cplx z) {
    const double B[8] = {1.0 / 12.0,    -1.0 / 360.0,   1.0 / 1260.0,  -1.0 / 1680.0,
                         1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};
    cplx shift{0.0, 0.0};
    int k = 0;
    while (std::abs(z) < 25.0 || z.real() < 25.0) {
        shift += std::log(z);
        z += 1.0;
        if (++k > 200) break;
    }
    cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * 3.14159265358979323846);
    cplx zp = z;
    for (int i = 0; i < 8; ++i) {
        s += B[i] / zp;
        zp *= z * z;
    }
    return s - shift;
}

// (1/pi) Int_0^pi cos(x sin t - nu t) dt by composite Gauss-Legendre.
double bessel_quadrature(int nu, double x);

// xorshift-based deterministic generator for property tests
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    i64 uniform(i64 lo, i64 hi) {  // inclusive
        return lo + static_cast<i64>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double real(double lo, double hi) {
        return lo + (hi - lo) * (next() >> 11) * (1.0 / 9007199254740992.0);
    }
};

}  // namespace oracles
