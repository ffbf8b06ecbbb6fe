#pragma once

// Newform eigenvalue ingestion, harmonic weights via the Petersson relation,
// completed central values from the approximate functional equation, and the
// dual-path Petersson consistency checks.

#include <optional>
#include <string>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/expsums.hpp"
#include "momentlab/specfun.hpp"

namespace momentlab::forms {

using numth::i64;
using cplx = std::complex<double>;

struct ShiftTriple {
    cplx a1{0.0, 0.0}, a2{0.0, 0.0}, a3{0.0, 0.0};
};

struct Newform {
    i64 level = 0;
    int weight = 0;
    std::string label;
    std::vector<double> a;       // arithmetic-normalization a_f(n), n = 1..N
    std::vector<double> lambda;  // lambda_f(n) = a_f(n) / n^{(k-1)/2}

    i64 ncoeff() const { return static_cast<i64>(a.size()); }
};

// Parse and validate a JSON Lines file: one record per form,
// {"level": int, "weight": int, "label": str, "an": [...]}, an[0] = 1.
// Enforces the Deligne bound and the Hecke relations; rejects violations with
// the offending index.
std::vector<Newform> ingest_newforms(const std::string& path);

struct HarmonicFamily {
    i64 level = 0;
    int weight = 0;
    std::vector<Newform> forms;
    std::vector<double> omega;   // harmonic weights, positive
    double lsq_residual = 0.0;   // max |eigen side - Petersson side| over the fit grid
    i64 trunc = 0;               // Kloosterman c-sum cutoff used
    double tail_estimate = 0.0;  // crude bound on the dropped c > trunc tail
};

// Petersson right side sum_{c = 0 mod q, c <= trunc} S(m,n,c)/c^2 J(2 sqrt(mn)/c)
// tables for m, n <= mmax, shared across the fit and the consistency checks.
struct PeterssonTable {
    i64 q = 0;
    int kappa = 0;
    i64 mmax = 0;
    i64 trunc = 0;
    std::vector<double> rhs;  // [(m-1)*mmax + (n-1)]: delta_{mn} + kloosterman part
    double tail_estimate = 0.0;

    double operator()(i64 m, i64 n) const { return rhs[(m - 1) * mmax + (n - 1)]; }
};

PeterssonTable petersson_rhs_table(i64 q, int kappa, i64 mmax, i64 trunc);

// sqrt(mn) sum_{c = 0 mod q, c <= trunc} S(m,n,c)/c^2 J(2 sqrt(mn)/c), one value
// per requested pair (without the diagonal delta term).
std::vector<double> petersson_c_sums(i64 q, int kappa, i64 trunc,
                                     const std::vector<std::pair<i64, i64>>& pairs);

// Solve the overdetermined system sum_f w_f lambda_f(m) lambda_f(n) = RHS(m,n)
// over (m,n) in [1,12]^2 with (mn, q) = 1, by least squares. Errors on
// ill-conditioning or residual > 1e-4.
HarmonicFamily harmonic_weights(std::vector<Newform> forms, i64 trunc);

// Lambda(1/2 + alpha, f x chi) = Lambda_0(alpha) + Lambda_0(-alpha),
// Lambda_0(alpha) = sum_n lambda(n) chi(n) n^{-1/2} V_{1/2+alpha}(n/q).
// Requires the sign condition i^kappa = chi(-1).
cplx completed_central_value(const Newform& f, const chars::DirichletCharacter& chi,
                             cplx alpha);

// L(1/2+alpha, f x chi): the completed value divided by the archimedean factor.
cplx central_L_value(const Newform& f, const chars::DirichletCharacter& chi, cplx alpha);

// (q/2pi)^{s-1/2} Gamma(s + (kappa-1)/2)
cplx L_infinity(cplx s, i64 q, int kappa);

cplx spectral_cubic_moment(const HarmonicFamily& family,
                           const chars::DirichletCharacter& chi, const ShiftTriple& alpha);

struct TriplePair {
    cplx eigen_side;    // sum_f w_f lambda(n1) lambda(n2) lambda(n3)
    cplx petersson_side;  // Hecke reduction + diagonal/Kloosterman assembly
};

TriplePair petersson_triple(const HarmonicFamily& family, i64 n1, i64 n2, i64 n3);

bool sign_condition_holds(i64 q, int kappa);

}  // namespace momentlab::forms
