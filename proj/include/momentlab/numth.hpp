#pragma once

// Exact integer and multiplicative-function arithmetic: factorization,
// Moebius/phi/nu, Jacobi symbols, modular inverses, divisor machinery.
// Everything here is deterministic and pure; moduli are desk-scale
// (64-bit, trial division), no big-integer layer.

#include <array>
#include <cstdint>
#include <vector>
#include <utility>

namespace momentlab::numth {

using i64 = std::int64_t;
using u64 = std::uint64_t;

struct Factorization {
    i64 n = 1;
    std::vector<std::pair<i64, int>> factors;  // (prime, exponent), primes ascending
};

Factorization factorize(i64 n);

int moebius(i64 n);
i64 euler_phi(i64 n);
int nu(i64 n);  // number of distinct prime factors
bool is_squarefree(i64 n);

// Jacobi symbol (a|n), n odd positive. Rejects even n.
int jacobi_symbol(i64 a, i64 n);

// All ordered triples (h,k,l) with h*k*l = q, q squarefree (3^nu(q) of them).
std::vector<std::array<i64, 3>> divisor_pairs(i64 q);

std::vector<i64> divisors(i64 n);

// gcd for possibly-negative arguments, result >= 0
i64 gcd(i64 a, i64 b);

// x mod m normalized into [0, m)
i64 mod_norm(i64 x, i64 m);

i64 mul_mod(i64 a, i64 b, i64 m);
i64 pow_mod(i64 a, i64 e, i64 m);

// Inverse of a mod m via extended gcd; a must be coprime to m.
i64 inv_mod(i64 a, i64 m);

// Batch inverses of all units mod m (Montgomery trick: one ext-gcd total).
// Returns vector inv of size m with inv[a] = a^{-1} mod m for (a,m)=1, 0 otherwise.
std::vector<i64> unit_inverses(i64 m);

// Primes up to limit inclusive.
std::vector<i64> primes_up_to(i64 limit);

// Smallest primitive root mod p (p odd prime).
i64 primitive_root(i64 p);

i64 ramanujan_exact(i64 q, i64 m);  // R_q(m) = sum_{d | (q,m)} d mu(q/d)

}  // namespace momentlab::numth
