#include "momentlab/lfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "momentlab/specfun.hpp"

namespace momentlab::lfun {

using specfun::PI;
using specfun::cplx;

namespace {

// B_2 .. B_24
constexpr double bern[12] = {
    1.0 / 6.0,      -1.0 / 30.0,     1.0 / 42.0,      -1.0 / 30.0,
    5.0 / 66.0,     -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0};

// Euler-Maclaurin tail: sum_{n > N} (n+a)^{-s} with the n = N term's endpoint
// corrections, i.e. zeta-like remainder starting at N+a.
cplx em_tail(cplx s, double base) {
    // base = N + a; requires base >> |s| / (2 pi) for the asymptotic terms
    cplx lb = std::log(cplx(base));
    cplx tail = std::exp((1.0 - s) * lb) / (s - 1.0) + 0.5 * std::exp(-s * lb);
    cplx spow = s;  // rising product s(s+1)...(s+2k-2)
    double bpow = base;
    for (int k = 1; k <= 12; ++k) {
        // term: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * base^{-s-2k+1}
        static const double fact_inv[12] = {
            1.0 / 2.0,       1.0 / 24.0,      1.0 / 720.0,      1.0 / 40320.0,
            1.0 / 3628800.0, 1.0 / 479001600.0, 1.0 / 87178291200.0,
            1.0 / 20922789888000.0, 1.0 / 6402373705728000.0,
            1.0 / 2432902008176640000.0, 6.4469502843844734e-23, 1.6117375710961184e-25};
        cplx term = bern[k - 1] * fact_inv[k - 1] * spow * std::exp((-s - (2.0 * k - 1.0)) * lb);
        tail += term;
        spow *= (s + (2.0 * k - 1.0)) * (s + (2.0 * k));
        (void)bpow;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(tail))) break;
    }
    return tail;
}

int em_cutoff(cplx s) {
    return static_cast<int>(std::max(16.0, 1.2 * std::abs(s.imag()) / (2.0 * PI) * 2.0 * PI / 4.0 + 16.0));
    // ~ |t|/3 + 16: keeps the Bernoulli series safely convergent
}

}  // namespace

cplx zeta(cplx s) {
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-14) throw std::domain_error("zeta: pole at s = 1");
    int N = em_cutoff(s);
    cplx sum{0.0, 0.0};
    for (int n = 1; n <= N; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    return sum + em_tail(s, static_cast<double>(N + 1));  // tail covers n >= N+1
}

cplx hurwitz_zeta(cplx s, double a) {
    if (a <= 0.0 || a > 1.0) throw std::invalid_argument("hurwitz_zeta: need 0 < a <= 1");
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-14) throw std::domain_error("hurwitz_zeta: pole at s = 1");
    int N = em_cutoff(s);
    cplx sum{0.0, 0.0};
    for (int n = 0; n < N; ++n) sum += std::exp(-s * std::log(n + a));
    return sum + em_tail(s, N + a);
}

cplx zeta_q(cplx s, i64 q) {
    cplx z = zeta(s);
    for (auto& [p, e] : numth::factorize(q).factors)
        z *= 1.0 - std::exp(-s * std::log(static_cast<double>(p)));
    return z;
}

cplx z_zeta_q_one_plus(cplx z, i64 q) {
    // Stieltjes constants gamma_0 .. gamma_6
    static const double st[7] = {0.5772156649015329,   -0.0728158454836767,
                                 -0.00969036319287232, 0.00205383442030335,
                                 0.00232537006546730,  0.000793323817301062,
                                 -0.000238769345430199};
    cplx zz1;  // z * zeta(1+z)
    if (std::abs(z) < 0.05) {
        // z zeta(1+z) = 1 + sum_{n>=0} (-1)^n gamma_n z^{n+1} / n!
        cplx acc{1.0, 0.0}, zp = z;
        double fact = 1.0;
        for (int n = 0; n <= 6; ++n) {
            double sign = (n % 2 == 0) ? 1.0 : -1.0;
            acc += sign * st[n] / fact * zp;
            zp *= z;
            fact *= n + 1.0;
        }
        zz1 = acc;
    } else {
        zz1 = z * zeta(1.0 + z);
    }
    for (auto& [p, e] : numth::factorize(q).factors)
        zz1 *= 1.0 - std::exp(-(1.0 + z) * std::log(static_cast<double>(p)));
    return zz1;
}

cplx partial_zeta(cplx w, double N) {
    int n0 = static_cast<int>(std::floor(N));
    if (n0 <= 0) return {0.0, 0.0};
    int direct = std::min(n0, em_cutoff(w));
    cplx sum{0.0, 0.0};
    for (int n = 1; n <= direct; ++n) sum += std::exp(-w * std::log(static_cast<double>(n)));
    if (direct == n0) return sum;
    // sum_{direct < n <= n0} = (sum over n >= direct+1) - (sum over n >= n0+1)
    return sum + em_tail(w, static_cast<double>(direct + 1)) -
           em_tail(w, static_cast<double>(n0 + 1));
}

namespace {

// Completed-L theta route for primitive psi:
//   Lambda(s) = (q/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, psi)
//             = sum_n psi(n) n^a (pi n^2/q)^{-(s+a)/2} Gamma((s+a)/2, pi n^2/q)
//               + eps(psi) [same with s -> 1-s, psi -> conj psi].
cplx L_afe_primitive(const chars::DirichletCharacter& psi, cplx s) {
    const i64 q = psi.modulus();
    const int a = psi.parity();
    if (q == 1) return zeta(s);
    const double qd = static_cast<double>(q);
    auto half_sum = [&](const chars::DirichletCharacter& ch, cplx sv) {
        cplx acc{0.0, 0.0};
        cplx c = (sv + static_cast<double>(a)) / 2.0;
        for (i64 n = 1; n <= 4 * q + 100; ++n) {
            cplx chn = ch(n);
            if (chn == cplx(0.0, 0.0)) continue;
            double y = PI * n * n / qd;
            if (y > 0.5 * std::abs(c.imag()) + 45.0) break;
            cplx g = specfun::upper_gamma(c, y);
            cplx term = chn * std::pow(static_cast<double>(n), static_cast<double>(a)) *
                        std::exp(-c * std::log(y)) * g;
            acc += term;
        }
        return acc;
    };
    cplx eps = chars::root_number(psi);
    cplx lambda = half_sum(psi, s) + eps * half_sum(psi.conjugate(), 1.0 - s);
    // divide off (q/pi)^{(s+a)/2} Gamma((s+a)/2)
    cplx c = (s + static_cast<double>(a)) / 2.0;
    return lambda * std::exp(-c * std::log(qd / PI) - specfun::log_gamma(c));
}

cplx L_hurwitz(const chars::DirichletCharacter& psi, cplx s) {
    const i64 q = psi.modulus();
    if (q == 1) return zeta(s);
    cplx acc{0.0, 0.0};
    for (i64 a = 1; a <= q; ++a) {
        cplx v = psi(a);
        if (v == cplx(0.0, 0.0)) continue;
        acc += v * hurwitz_zeta(s, static_cast<double>(a) / static_cast<double>(q));
    }
    return acc * std::exp(-s * std::log(static_cast<double>(q)));
}

}  // namespace

cplx dirichlet_L(const chars::DirichletCharacter& psi, cplx s, LMethod method) {
    if (psi.is_trivial() && std::abs(s - cplx(1.0, 0.0)) < 1e-14)
        throw std::domain_error("dirichlet_L: pole of the trivial character at s = 1");
    auto [cond, core] = chars::primitive_core(psi);
    cplx euler{1.0, 0.0};
    if (cond != psi.modulus()) {
        for (auto& [p, e] : numth::factorize(psi.modulus()).factors)
            if (cond % p != 0)
                euler *= 1.0 - core(p) * std::exp(-s * std::log(static_cast<double>(p)));
    }
    cplx val;
    if (method == LMethod::hurwitz_oracle || std::abs(s.imag()) > 25.0) {
        val = L_hurwitz(core, s);
    } else {
        val = L_afe_primitive(core, s);
    }
    return euler * val;
}

cplx sigma_shift(i64 n, cplx t1, cplx t2) {
    if (n < 1) throw std::invalid_argument("sigma_shift: n >= 1");
    const cplx i{0.0, 1.0};
    cplx acc{0.0, 0.0};
    for (i64 d : numth::divisors(n)) {
        i64 d2 = n / d;
        acc += std::exp(-i * t1 * std::log(static_cast<double>(d)) -
                        i * t2 * std::log(static_cast<double>(d2)));
    }
    return acc;
}

SieveRatio large_sieve_ratio(i64 q, double t1, double t2) {
    if (q < 1 || q % 2 == 0 || !numth::is_squarefree(q))
        throw std::invalid_argument("large_sieve_ratio: q odd squarefree required");
    double lhs = 0.0;
    for (auto& psi : chars::character_group(q)) {
        cplx v = dirichlet_L(psi, cplx(0.5, t1)) * dirichlet_L(psi, cplx(0.5, t2));
        lhs += std::norm(v);
    }
    lhs /= static_cast<double>(numth::euler_phi(q));
    double lq = std::max(std::log(static_cast<double>(q)), 1e-2);
    double lnu = std::log(static_cast<double>(numth::nu(q)) + 1.0);
    if (q == 1) lnu = std::log(1.0 + 1.0);  // unused in practice (q >= 3 in sweeps)
    double dt = std::abs(t1 - t2);
    double factor;
    if (dt <= 1.0 / lq) {
        factor = lq * lq;
    } else {
        factor = std::norm(zeta(cplx(1.0, dt)));
    }
    SieveRatio out;
    out.reference = lq * lq * lnu * lnu * factor;
    out.lhs = lhs;
    out.ratio = (out.reference > 0.0) ? lhs / out.reference : 0.0;
    return out;
}

}  // namespace momentlab::lfun
