#include "momentlab/expsums.hpp"

#include <cmath>
#include <stdexcept>

#include "momentlab/specfun.hpp"

namespace momentlab::expsums {

using numth::gcd;
using numth::inv_mod;
using numth::mod_norm;
using numth::mul_mod;
using specfun::PI;

namespace {

void check_cost_guard(i64 c, i64 limit, const char* what) {
    if (c > limit) throw std::invalid_argument(std::string(what) + ": cost guard exceeded");
}

double round_guarded(double x, double tol, const char* what) {
    double r = std::round(x);
    if (std::abs(x - r) > tol) throw std::logic_error(std::string(what) + ": rounding guard violated");
    return r;
}

// sqrt of a mod odd prime p (Tonelli-Shanks); -1 if non-residue.
i64 sqrt_mod_p(i64 a, i64 p) {
    a = mod_norm(a, p);
    if (a == 0) return 0;
    if (numth::pow_mod(a, (p - 1) / 2, p) != 1) return -1;
    if (p % 4 == 3) return numth::pow_mod(a, (p + 1) / 4, p);
    i64 s = 0, q = p - 1;
    while (q % 2 == 0) { q /= 2; ++s; }
    i64 z = 2;
    while (numth::pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    i64 m = s, cc = numth::pow_mod(z, q, p);
    i64 t = numth::pow_mod(a, q, p), r = numth::pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        i64 t2 = t;
        i64 i = 0;
        while (t2 != 1) { t2 = mul_mod(t2, t2, p); ++i; }
        i64 b = cc;
        for (i64 j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
        m = i;
        cc = mul_mod(b, b, p);
        t = mul_mod(t, cc, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

// Hensel lift: x^2 = a mod p^k from a root mod p (p odd, p not | a).
i64 sqrt_mod_pk(i64 a, i64 p, int k) {
    i64 x = sqrt_mod_p(a, p);
    if (x < 0) return -1;
    i64 pk = p;
    for (int j = 1; j < k; ++j) {
        i64 pk_next = pk * p;
        i64 aj = mod_norm(a, pk_next);
        // x <- x - (x^2 - a) / (2x) mod p^{j+1}
        i64 diff = mod_norm(static_cast<i64>((static_cast<__int128>(x) * x - aj) % pk_next), pk_next);
        i64 corr = mul_mod(diff / pk, inv_mod(mod_norm(2 * x, p), p), p);
        x = mod_norm(x - corr * pk, pk_next);
        pk = pk_next;
    }
    return x;
}

}  // namespace

double kloosterman(i64 m, i64 n, i64 c) {
    if (c < 1) throw std::invalid_argument("kloosterman: c >= 1");
    if (c == 1) return 1.0;
    auto inv = numth::unit_inverses(c);
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    const double w = 2.0 * PI / static_cast<double>(c);
    for (i64 a = 1; a < c; ++a) {
        if (inv[a] == 0) continue;
        i64 idx = mod_norm(a * mod_norm(m, c) + inv[a] * mod_norm(n, c), c);
        double y = std::cos(w * static_cast<double>(idx)) - cre;
        double t = re + y;
        cre = (t - re) - y;
        re = t;
        double yi = std::sin(w * static_cast<double>(idx)) - cim;
        double ti = im + yi;
        cim = (ti - im) - yi;
        im = ti;
    }
    if (std::abs(im) > 1e-8 * std::max(1.0, std::abs(re)))
        throw std::logic_error("kloosterman: non-real value, accumulation bug");
    return re;
}

KloostermanEngine::PrimeTables& KloostermanEngine::tables(i64 p) {
    auto it = per_prime_.find(p);
    if (it != per_prime_.end()) return it->second;
    PrimeTables t;
    t.cos_tab.resize(p);
    t.sin_tab.resize(p);
    const double w = 2.0 * PI / static_cast<double>(p);
    for (i64 j = 0; j < p; ++j) {
        t.cos_tab[j] = std::cos(w * j);
        t.sin_tab[j] = std::sin(w * j);
    }
    t.inv = numth::unit_inverses(p);
    return per_prime_.emplace(p, std::move(t)).first->second;
}

double KloostermanEngine::prime_piece(i64 m, i64 n, i64 p) {
    m = mod_norm(m, p);
    n = mod_norm(n, p);
    if (m == 0 && n == 0) return static_cast<double>(p - 1);
    if (m == 0 || n == 0) return -1.0;  // Ramanujan R_p of a unit
    // S(m, n, p) = S(1, mn, p)
    i64 z = mul_mod(m, n, p);
    auto& t = tables(p);
    auto it = t.s1.find(z);
    if (it != t.s1.end()) return it->second;
    double re = 0.0;
    for (i64 a = 1; a < p; ++a) {
        i64 idx = mod_norm(a + mul_mod(t.inv[a], z, p), p);
        re += t.cos_tab[idx];
    }
    t.s1.emplace(z, re);
    return re;
}

double KloostermanEngine::prime_power_piece(i64 m, i64 n, i64 p, int k) {
    i64 pk = 1;
    for (int j = 0; j < k; ++j) pk *= p;
    m = mod_norm(m, pk);
    n = mod_norm(n, pk);
    // strip common p factors: S(pA, pB, p^k) = p S(A, B, p^{k-1})
    double scale = 1.0;
    while (k >= 2 && m % p == 0 && n % p == 0) {
        m /= p;
        n /= p;
        k -= 1;
        pk /= p;
        scale *= static_cast<double>(p);
        m = mod_norm(m, pk);
        n = mod_norm(n, pk);
    }
    if (k == 1) return scale * prime_piece(m, n, p);
    if (m % p == 0 || n % p == 0) {
        // with p dividing exactly one argument (mod p^k) the sum vanishes
        return 0.0;
    }
    if (p == 2 || pk <= 512) {
        // direct loop; only small pieces land here
        double re = 0.0;
        const double w = 2.0 * PI / static_cast<double>(pk);
        for (i64 a = 1; a < pk; ++a) {
            if (a % p == 0) continue;
            i64 idx = mod_norm(mul_mod(a, m, pk) + mul_mod(inv_mod(a, pk), n, pk), pk);
            re += std::cos(w * static_cast<double>(idx));
        }
        return scale * re;
    }
    // Salie evaluation: critical points at a with a^2 m = n, value e(2x/p^k)
    // with x^2 = mn; quadratic Gauss factor for odd k.
    i64 z = mul_mod(m, n, pk);
    i64 x = sqrt_mod_pk(z, p, k);
    if (x < 0) return 0.0;
    double root = std::pow(static_cast<double>(p), k / 2.0);
    double ang = 4.0 * PI * static_cast<double>(x) / static_cast<double>(pk);
    if (k % 2 == 0) return scale * 2.0 * root * std::cos(ang);
    int chi_x = numth::jacobi_symbol(x, p);
    if (p % 4 == 1) return scale * 2.0 * root * chi_x * std::cos(ang);
    return scale * -2.0 * root * chi_x * std::sin(ang);
}

double KloostermanEngine::S(i64 m, i64 n, i64 c) {
    if (c < 1) throw std::invalid_argument("KloostermanEngine: c >= 1");
    if (c == 1) return 1.0;
    auto fac = numth::factorize(c);
    double out = 1.0;
    for (auto& [p, k] : fac.factors) {
        i64 pk = 1;
        for (int j = 0; j < k; ++j) pk *= p;
        i64 cof = c / pk;
        i64 t = (cof == 1) ? 1 : inv_mod(mod_norm(cof, pk), pk);
        i64 mm = mul_mod(mod_norm(m, pk), t, pk);
        i64 nn = mul_mod(mod_norm(n, pk), t, pk);
        out *= (k == 1) ? prime_piece(mm, nn, p) : prime_power_piece(mm, nn, p, k);
        if (out == 0.0) return 0.0;
    }
    return out;
}

i64 ramanujan(i64 k, i64 m) {
    if (k < 1) throw std::invalid_argument("ramanujan: k >= 1");
    if (k == 1) return 1;
    check_cost_guard(k, 200000, "ramanujan");
    double re = 0.0;
    const double w = 2.0 * PI * static_cast<double>(mod_norm(m, k)) / static_cast<double>(k);
    for (i64 a = 1; a < k; ++a)
        if (gcd(a, k) == 1) re += std::cos(w * static_cast<double>(a));
    return static_cast<i64>(round_guarded(re, 1e-6, "ramanujan"));
}

namespace {

// V[t] = sum_{a mod c} chi(a) e_c(t a); shared by the G evaluators.
std::vector<cplx> gauss_vector(i64 c, const chars::DirichletCharacter& chi) {
    std::vector<cplx> chi_tab(c);
    for (i64 a = 0; a < c; ++a) chi_tab[a] = chi(a);
    std::vector<cplx> W(c);
    for (i64 j = 0; j < c; ++j)
        W[j] = specfun::e_of(static_cast<double>(j) / static_cast<double>(c));
    std::vector<cplx> V(c, cplx(0.0, 0.0));
    for (i64 t = 0; t < c; ++t) {
        cplx acc{0.0, 0.0};
        i64 idx = 0;
        for (i64 a = 0; a < c; ++a) {
            if (chi_tab[a] != cplx(0.0, 0.0)) acc += chi_tab[a] * W[idx];
            idx += t;
            if (idx >= c) idx -= c;
        }
        V[t] = acc;
    }
    return V;
}

}  // namespace

cplx G_bruteforce(i64 m1, i64 m2, i64 m3, i64 c, const chars::DirichletCharacter& chi) {
    if (c < 1 || c % chi.modulus() != 0)
        throw std::invalid_argument("G_bruteforce: need q | c");
    check_cost_guard(c, 1000, "G_bruteforce");
    auto V = gauss_vector(c, chi);
    auto inv = numth::unit_inverses(c);
    std::vector<cplx> chi_tab(c);
    for (i64 a = 0; a < c; ++a) chi_tab[a] = chi(a);
    std::vector<cplx> W(c);
    for (i64 j = 0; j < c; ++j)
        W[j] = specfun::e_of(static_cast<double>(j) / static_cast<double>(c));
    m1 = mod_norm(m1, c);
    m2 = mod_norm(m2, c);
    m3 = mod_norm(m3, c);
    cplx G{0.0, 0.0};
    for (i64 b = 1; b < c || c == 1; ++b) {
        if (c == 1) { b = 0; }
        if (c > 1 && inv[b] == 0) continue;
        i64 bbar = (c == 1) ? 0 : inv[b];
        // sum over a2 of chi(a2) e_c(m2 a2) V[(m3 + bbar a2) mod c]
        cplx inner{0.0, 0.0};
        i64 idx_w = 0, idx_v = m3 % c;
        for (i64 a2 = 0; a2 < c; ++a2) {
            if (chi_tab[a2] != cplx(0.0, 0.0)) inner += chi_tab[a2] * W[idx_w] * V[idx_v];
            idx_w += m2;
            if (idx_w >= c) idx_w -= c;
            idx_v += bbar;
            if (idx_v >= c) idx_v -= c;
        }
        G += V[(m1 + b) % c] * inner;
        if (c == 1) break;
    }
    return G;
}

std::vector<std::vector<std::vector<cplx>>> G_bruteforce_grid(
    int mmax, i64 c, const chars::DirichletCharacter& chi) {
    if (c < 1 || c % chi.modulus() != 0)
        throw std::invalid_argument("G_bruteforce_grid: need q | c");
    check_cost_guard(c, 1000, "G_bruteforce_grid");
    const int M = 2 * mmax + 1;
    auto V = gauss_vector(c, chi);
    auto inv = numth::unit_inverses(c);
    std::vector<cplx> chi_tab(c);
    for (i64 a = 0; a < c; ++a) chi_tab[a] = chi(a);
    std::vector<cplx> W(c);
    for (i64 j = 0; j < c; ++j)
        W[j] = specfun::e_of(static_cast<double>(j) / static_cast<double>(c));
    std::vector out(M, std::vector(M, std::vector<cplx>(M, cplx(0.0, 0.0))));

    std::vector<cplx> X(M * M);  // X[m2][m3] per b
    for (i64 b = (c == 1 ? 0 : 1); b < c || c == 1; ++b) {
        if (c > 1 && inv[b] == 0) continue;
        i64 bbar = (c == 1) ? 0 : inv[b];
        std::fill(X.begin(), X.end(), cplx(0.0, 0.0));
        for (int im3 = 0; im3 < M; ++im3) {
            i64 m3 = mod_norm(im3 - mmax, c);
            // f(a2) = chi(a2) V[(m3 + bbar a2) mod c]; DFT at the m2 frequencies
            i64 idx_v = m3;
            for (i64 a2 = 0; a2 < c; ++a2) {
                if (chi_tab[a2] != cplx(0.0, 0.0)) {
                    cplx f = chi_tab[a2] * V[idx_v];
                    for (int im2 = 0; im2 < M; ++im2) {
                        i64 m2 = mod_norm(im2 - mmax, c);
                        X[im2 * M + im3] += f * W[mod_norm(m2 * a2, c)];
                    }
                }
                idx_v += bbar;
                if (idx_v >= c) idx_v -= c;
            }
        }
        for (int im1 = 0; im1 < M; ++im1) {
            cplx head = V[mod_norm((im1 - mmax) + b, c)];
            for (int im2 = 0; im2 < M; ++im2)
                for (int im3 = 0; im3 < M; ++im3)
                    out[im1][im2][im3] += head * X[im2 * M + im3];
        }
        if (c == 1) break;
    }
    return out;
}

GFactorizationInput::GFactorizationInput(i64 m1_, i64 m2_, i64 m3_, i64 r_, i64 q_)
    : m1(m1_), m2(m2_), m3(m3_), r(r_), q(q_) {
    if (q < 1 || q % 2 == 0 || !numth::is_squarefree(q))
        throw std::invalid_argument("GFactorizationInput: q odd squarefree");
    if (r < 1) throw std::invalid_argument("GFactorizationInput: r >= 1");
    h = gcd(r, q);
    k = gcd(m1 * m2 * m3, q);
    coprime_ok = (gcd(m1, r) == 1) && (gcd(gcd(m2 * m3, q), r) == 1);
    if (coprime_ok) {
        l = q / (h * k);
    } else {
        l = 1;
    }
}

cplx G_factored(const GFactorizationInput& in) {
    if (!in.coprime_ok) return {0.0, 0.0};
    const i64 c = in.r * in.q;
    const i64 m123 = in.m1 * in.m2 * in.m3;
    // inverse of r h k mod l
    i64 rhk = mod_norm(mul_mod(mod_norm(in.r, in.l), mul_mod(mod_norm(in.h, in.l),
                                                             mod_norm(in.k, in.l), in.l), in.l), in.l);
    i64 w = (in.l == 1) ? 0 : mul_mod(inv_mod(rhk, in.l), mod_norm(m123, in.l), in.l);
    cplx phase = specfun::e_of(static_cast<double>(mod_norm(m123, c)) / static_cast<double>(c));
    double chi_kl = static_cast<double>(numth::jacobi_symbol(-1, in.k * in.l));
    double front = static_cast<double>(in.r) * static_cast<double>(in.r) *
                   static_cast<double>(in.q) * static_cast<double>(in.h) /
                   static_cast<double>(numth::euler_phi(in.k));
    double rks = static_cast<double>(numth::ramanujan_exact(in.k, in.m1)) *
                 static_cast<double>(numth::ramanujan_exact(in.k, in.m2)) *
                 static_cast<double>(numth::ramanujan_exact(in.k, in.m3));
    return phase * chi_kl * front * rks * H_sum(w, in.l);
}

cplx H_sum(i64 w, i64 q) {
    if (q < 1 || q % 2 == 0 || !numth::is_squarefree(q))
        throw std::invalid_argument("H_sum: q odd squarefree");
    check_cost_guard(q, 1000, "H_sum");
    if (q == 1) return {1.0, 0.0};
    auto chi = chars::quadratic_character(q);
    std::vector<cplx> A(q);
    for (i64 u = 0; u < q; ++u) A[u] = chi(u) * chi(u + 1);
    std::vector<cplx> W(q);
    for (i64 j = 0; j < q; ++j)
        W[j] = specfun::e_of(static_cast<double>(j) / static_cast<double>(q));
    w = mod_norm(w, q);
    cplx acc{0.0, 0.0};
    for (i64 u = 0; u < q; ++u) {
        if (A[u] == cplx(0.0, 0.0)) continue;
        i64 uw = mul_mod(u, w, q);
        cplx inner{0.0, 0.0};
        i64 idx = 0;
        for (i64 v = 0; v < q; ++v) {
            if (A[v] != cplx(0.0, 0.0)) inner += A[v] * W[idx];
            idx += uw;
            if (idx >= q) idx -= q;
        }
        acc += A[u] * inner;
    }
    return acc * specfun::e_of(-static_cast<double>(w) / static_cast<double>(q));
}

cplx H_via_characters(i64 w, i64 q) {
    if (q < 1 || q % 2 == 0 || !numth::is_squarefree(q))
        throw std::invalid_argument("H_via_characters: q odd squarefree");
    cplx acc{0.0, 0.0};
    for (i64 q1 : numth::divisors(q)) {
        i64 q2 = q / q1;
        double head = static_cast<double>(numth::moebius(q1)) *
                      static_cast<double>(numth::jacobi_symbol(-1, q1)) /
                      static_cast<double>(numth::euler_phi(q2));
        i64 q1bar_w = (q2 == 1) ? 0 : mul_mod(inv_mod(mod_norm(q1, q2), q2), mod_norm(w, q2), q2);
        cplx inner{0.0, 0.0};
        for (auto& psi : chars::character_group(q2)) {
            cplx g = g_chi_psi(q2, psi);
            // tau(conj psi) psi(w') as the unseparated twisted sum
            // sum_t conj(psi)(t) e_{q2}(t w'); the separated product form is
            // only valid for (w', q2) = 1 or primitive psi.
            cplx twisted{0.0, 0.0};
            if (q2 == 1) {
                twisted = {1.0, 0.0};
            } else {
                auto conj_psi = psi.conjugate();
                for (i64 t = 1; t < q2; ++t) {
                    cplx v = conj_psi(t);
                    if (v == cplx(0.0, 0.0)) continue;
                    twisted += v * specfun::e_of(static_cast<double>(mul_mod(t, q1bar_w, q2)) /
                                                 static_cast<double>(q2));
                }
            }
            inner += g * twisted;
        }
        acc += head * inner;
    }
    return acc;
}

cplx g_chi_psi(i64 q, const chars::DirichletCharacter& psi) {
    if (q != psi.modulus()) throw std::invalid_argument("g_chi_psi: psi must have modulus q");
    check_cost_guard(q, 1000, "g_chi_psi");
    if (q == 1) return {1.0, 0.0};
    auto chi = chars::quadratic_character(q);
    std::vector<cplx> A(q);
    for (i64 u = 0; u < q; ++u) A[u] = chi(u) * chi(u + 1);
    std::vector<cplx> Psi(q);
    for (i64 t = 0; t < q; ++t) Psi[t] = psi(t);
    cplx acc{0.0, 0.0};
    for (i64 u = 0; u < q; ++u) {
        if (A[u] == cplx(0.0, 0.0)) continue;
        cplx inner{0.0, 0.0};
        for (i64 v = 0; v < q; ++v) {
            if (A[v] == cplx(0.0, 0.0)) continue;
            inner += A[v] * Psi[mod_norm(u * v - 1, q)];
        }
        acc += A[u] * inner;
    }
    return acc;
}

cplx K_euler(cplx s, cplx u1, cplx u2, cplx u3, i64 h, i64 k, i64 q,
             const chars::DirichletCharacter& psi) {
    if (!numth::is_squarefree(k)) throw std::invalid_argument("K_euler: k squarefree");
    const cplx z1 = s + u2 + u3, z2 = s + u1 + u3, z3 = s + u1 + u2;
    auto divs = numth::divisors(k);
    auto factor_prod = [&](i64 ki, cplx z) {
        cplx prod{1.0, 0.0};
        for (auto& [p, e] : numth::factorize(ki).factors) {
            cplx den = 1.0 - psi(p) * std::exp(-z * std::log(static_cast<double>(p)));
            if (std::abs(den) < 1e-12)
                throw std::domain_error("K_euler: Euler factor pole proximity");
            prod /= den;
        }
        return prod;
    };
    cplx acc{0.0, 0.0};
    for (i64 k1 : divs)
        for (i64 k2 : divs)
            for (i64 k3 : divs) {
                __int128 prod = static_cast<__int128>(k1) * k2 * k3;
                if (prod % k != 0) continue;
                // (k1 k2 k3, q h / k) = 1 holds automatically: k_i | k and k is
                // coprime to both q/k and h for squarefree q.
                cplx val = psi(mod_norm(static_cast<i64>(prod % psi.modulus()), psi.modulus()));
                if (val == cplx(0.0, 0.0) && psi.modulus() > 1) continue;
                double head = static_cast<double>(numth::moebius(k1) * numth::moebius(k2) *
                                                  numth::moebius(k3)) *
                              static_cast<double>(numth::euler_phi(k1)) *
                              static_cast<double>(numth::euler_phi(k2)) *
                              static_cast<double>(numth::euler_phi(k3));
                if (head == 0.0) continue;
                cplx denom = std::exp(z1 * std::log(static_cast<double>(k1)) +
                                      z2 * std::log(static_cast<double>(k2)) +
                                      z3 * std::log(static_cast<double>(k3)));
                acc += val * head / denom * factor_prod(k1, z1) * factor_prod(k2, z2) *
                       factor_prod(k3, z3);
            }
    return acc;
}

cplx P_euler(cplx s, cplx u1, cplx u2, cplx u3, i64 q, i64 h, i64 l2,
             const chars::DirichletCharacter& psi) {
    auto [l2star, psi_star] = chars::primitive_core(psi);
    cplx prod{1.0, 0.0};
    auto pw = [&](i64 p, cplx z) { return std::exp(-z * std::log(static_cast<double>(p))); };
    for (auto& [p, e] : numth::factorize(l2).factors)
        if (l2star % p != 0)
            prod *= 1.0 - std::conj(psi_star(p)) * pw(p, 1.0 - s);
    for (auto& [p, e] : numth::factorize(q / h).factors)
        if (l2 % p != 0)
            prod *= 1.0 - std::conj(psi(p)) * pw(p, 1.0 - s);
    for (auto& [p, e] : numth::factorize(q).factors)
        if (l2 % p != 0)
            prod *= (1.0 - psi(p) * pw(p, s + u2 + u3)) * (1.0 - psi(p) * pw(p, s + u1 + u3)) *
                    (1.0 - psi(p) * pw(p, s + u1 + u2));
    return prod;
}

}  // namespace momentlab::expsums
