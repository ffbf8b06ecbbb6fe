#pragma once

// Finite exponential and character sums: Kloosterman and Ramanujan sums, the
// triple sum G and its Conrey-Iwaniec factorization, the hybrid sums H(w;q)
// and g(chi,psi), and the dual-side Euler products K and P.

#include <complex>
#include <map>
#include <unordered_map>
#include <vector>

#include "momentlab/characters.hpp"

namespace momentlab::expsums {

using numth::i64;
using cplx = std::complex<double>;

// S(m,n,c) = sum_{(a,c)=1} e((am + a^{-1} n)/c), by direct summation, O(c).
// The sum is conjugate-symmetric, so the value is real; an imaginary residue
// above 1e-8 signals a bug.
double kloosterman(i64 m, i64 n, i64 c);

// Fast evaluator: CRT factorization into prime-power pieces, closed forms at
// p^k (k >= 2), and cached O(p) sums at primes. One engine per thread.
class KloostermanEngine {
public:
    double S(i64 m, i64 n, i64 c);

private:
    struct PrimeTables {
        std::vector<double> cos_tab, sin_tab;  // e(j/p)
        std::vector<i64> inv;                  // unit inverses mod p
        std::unordered_map<i64, double> s1;    // z -> S(1, z, p)
    };
    PrimeTables& tables(i64 p);
    double prime_piece(i64 m, i64 n, i64 p);           // k = 1
    double prime_power_piece(i64 m, i64 n, i64 p, int k);
    std::map<i64, PrimeTables> per_prime_;
};

// R_k(m) = S(0, m, k), computed by direct summation and rounded; the rounding
// guard (distance to integer < 1e-6) enforces exactness.
i64 ramanujan(i64 k, i64 m);

// G(m1,m2,m3,c) = sum_{a1,a2,a3 mod c} chi(a1 a2 a3) S(a1, a2 a3, c)
//                 e_c(m1 a1 + m2 a2 + m3 a3), exact triple sum; q | c, c <= 1e3.
cplx G_bruteforce(i64 m1, i64 m2, i64 m3, i64 c, const chars::DirichletCharacter& chi);

// All values G(m1,m2,m3,c) for |mi| <= mmax, via staged partial DFTs.
// Result indexed [m1+mmax][m2+mmax][m3+mmax].
std::vector<std::vector<std::vector<cplx>>> G_bruteforce_grid(
    int mmax, i64 c, const chars::DirichletCharacter& chi);

struct GFactorizationInput {
    i64 m1 = 0, m2 = 0, m3 = 0;
    i64 r = 1;   // c = r q
    i64 q = 1;   // odd squarefree
    // derived
    i64 h = 1, k = 1, l = 1;
    bool coprime_ok = true;  // (m1, r) = 1 and (m2 m3, q, r) = 1

    GFactorizationInput(i64 m1_, i64 m2_, i64 m3_, i64 r_, i64 q_);
};

// Conrey-Iwaniec evaluation:
//   G = e_c(m1 m2 m3) chi_{kl}(-1) (r^2 q h / phi(k)) R_k(m1) R_k(m2) R_k(m3)
//       H(inv(r h k) m1 m2 m3 ; l),
// and 0 when the coprimality conditions fail.
cplx G_factored(const GFactorizationInput& in);

// H(w;q) = sum_{u,v mod q} chi(uv(u+1)(v+1)) e_q((uv-1)w), direct O(q^2).
cplx H_sum(i64 w, i64 q);

// Multiplicative-character expansion of H(w;q):
//   sum_{q1 q2 = q} (mu(q1) chi_{q1}(-1)/phi(q2)) sum_{psi mod q2}
//     tau(conj psi) g(chi, psi) psi(inv(q1) w).
cplx H_via_characters(i64 w, i64 q);

// g(chi,psi) = sum_{u,v mod q} chi(uv(u+1)(v+1)) psi(uv-1), O(q^2).
cplx g_chi_psi(i64 q, const chars::DirichletCharacter& psi);

// K(s, u1, u2, u3; h, k, q, psi): finite sum over k_i | k with k | k1 k2 k3 of
//   psi(k1k2k3) mu(k1)mu(k2)mu(k3) phi(k1)phi(k2)phi(k3)
//   / (k1^{s+u2+u3} k2^{s+u1+u3} k3^{s+u1+u2})
//   * prod_{p|k1} (1 - psi(p) p^{-(s+u2+u3)})^{-1} * (cyclic for k2, k3).
cplx K_euler(cplx s, cplx u1, cplx u2, cplx u3, i64 h, i64 k, i64 q,
             const chars::DirichletCharacter& psi);

// P(s, u_i; q, h, l2, psi): the miscellaneous Euler factors
//   prod_{p | l2, p not | l2*} (1 - conj(psi*)(p) p^{-(1-s)})
//   prod_{p | q/h, p not | l2} (1 - conj(psi)(p) p^{-(1-s)})
//   prod_{p | q, p not | l2} (1 - psi(p)p^{-(s+u2+u3)}) (1 - psi(p)p^{-(s+u1+u3)})
//                            (1 - psi(p)p^{-(s+u1+u2)}).
cplx P_euler(cplx s, cplx u1, cplx u2, cplx u3, i64 q, i64 h, i64 l2,
             const chars::DirichletCharacter& psi);

}  // namespace momentlab::expsums
