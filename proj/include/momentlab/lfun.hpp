#pragma once

// Riemann zeta (Euler-Maclaurin), Hurwitz zeta, Dirichlet L-functions on the
// critical strip (completed-AFE and Hurwitz-decomposition routes), the local
// factor zeta_q, shifted divisor sums, and the large-sieve ratio harness.

#include <complex>

#include "momentlab/characters.hpp"

namespace momentlab::lfun {

using numth::i64;
using cplx = std::complex<double>;

// zeta(s), Euler-Maclaurin; accurate to ~1e-12 for |Im s| <= 1e3, Re s >= -1.
cplx zeta(cplx s);

// Hurwitz zeta(s, a), 0 < a <= 1.
cplx hurwitz_zeta(cplx s, double a);

// zeta_q(s) = zeta(s) prod_{p|q} (1 - p^{-s})
cplx zeta_q(cplx s, i64 q);

// z * zeta_q(1+z), the pole at z = 0 removed analytically (Stieltjes series
// near 0). This is the building block that keeps main-term formulas finite.
cplx z_zeta_q_one_plus(cplx z, i64 q);

// Partial sum sum_{n<=N} n^{-w}, evaluated as zeta(w) minus an Euler-Maclaurin
// tail; exact finite sum for small N.
cplx partial_zeta(cplx w, double N);

enum class LMethod { smoothed_afe, hurwitz_oracle };

// L(s, psi). Imprimitive characters are reduced to their primitive core times
// the finite Euler product over p | q/q*. The smoothed-AFE route uses the
// theta-kernel incomplete-gamma representation (dispatching to the Hurwitz
// route for |Im s| > 25 where the completed form loses precision in doubles);
// the Hurwitz route is the independent oracle of record.
cplx dirichlet_L(const chars::DirichletCharacter& psi, cplx s,
                 LMethod method = LMethod::smoothed_afe);

// sigma_{t1,t2}(n) = sum_{n = n1 n2} n1^{-i t1} n2^{-i t2}
cplx sigma_shift(i64 n, cplx t1, cplx t2);

struct SieveRatio {
    double lhs = 0.0;
    double reference = 0.0;
    double ratio = 0.0;
};

// lhs = (1/phi(q)) sum_{psi mod q} |L(1/2+it1,psi) L(1/2+it2,psi)|^2 over all
// characters mod q; reference = (log q)^2 (log(nu(q)+1))^2 times the
// |t1-t2|-dependent factor.
SieveRatio large_sieve_ratio(i64 q, double t1, double t2);

}  // namespace momentlab::lfun
