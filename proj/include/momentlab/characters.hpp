#pragma once

// Dirichlet characters of odd squarefree modulus, represented by exponent
// vectors over fixed primitive roots per prime factor. Evaluation is O(nu(q))
// table lookups; enumeration order is canonical (lexicographic in exponents).

#include <complex>
#include <memory>
#include <vector>

#include "momentlab/numth.hpp"

namespace momentlab::chars {

using numth::i64;
using cplx = std::complex<double>;

// Shared per-modulus tables: prime factors, primitive roots, discrete logs.
struct GroupTables {
    i64 q = 1;
    std::vector<i64> primes;            // prime factors of q, ascending
    std::vector<i64> roots;             // smallest primitive root per prime
    std::vector<std::vector<int>> dlog; // dlog[i][n mod p] = ind_{g_i}(n), -1 at 0
    static std::shared_ptr<const GroupTables> get(i64 q);  // memoized, thread-safe
};

class DirichletCharacter {
public:
    // trivial character mod q
    explicit DirichletCharacter(i64 q);
    DirichletCharacter(i64 q, std::vector<i64> component_exponents);

    i64 modulus() const { return q_; }
    const std::vector<i64>& exponents() const { return exps_; }
    int parity() const { return parity_; }          // a in {0,1}, psi(-1) = (-1)^a
    bool is_even() const { return parity_ == 0; }
    bool is_trivial() const;
    bool is_primitive() const;                      // every component exponent nonzero
    bool is_real() const;

    cplx operator()(i64 n) const;
    DirichletCharacter conjugate() const;

    // order of psi in the character group
    i64 order() const;

private:
    i64 q_;
    std::vector<i64> exps_;  // exponent on g_i, reduced mod p_i - 1
    int parity_;
    std::shared_ptr<const GroupTables> tab_;
};

// All phi(q) characters mod q (q odd squarefree), trivial first, deterministic order.
std::vector<DirichletCharacter> character_group(i64 q);

// The real primitive character mod q; pointwise the Jacobi symbol (n|q).
DirichletCharacter quadratic_character(i64 q);

// Conductor and inducing primitive character.
std::pair<i64, DirichletCharacter> primitive_core(const DirichletCharacter& psi);

// tau(psi) = sum_{a mod q} psi(a) e(a/q), by direct summation.
cplx gauss_sum(const DirichletCharacter& psi);

// epsilon(psi) = tau(psi) / (i^a sqrt(l)) for primitive psi of conductor l.
cplx root_number(const DirichletCharacter& psi);

// X_l(1/2+u) = (l/pi)^{-u} Gamma((1/2-u+a)/2) / Gamma((1/2+u+a)/2).
// Throws if 1/2+u sits within 1e-8 of a pole of the quotient.
cplx gamma_factor_X(i64 conductor, cplx u, int parity);

}  // namespace momentlab::chars
