#pragma once

// Main-term calculus for the harmonic cubic moment: the diagonal in direct,
// contour, and asymptotic forms, the M/N correction terms, the coordinate
// plane sums with their closed-form counterparts, and the residual/scaling
// experiments.

#include <map>
#include <string>
#include <vector>

#include "momentlab/forms.hpp"
#include "momentlab/wcheck.hpp"

namespace momentlab::moment {

using numth::i64;
using cplx = std::complex<double>;
using forms::ShiftTriple;

// (u1+u2)(u2+u3)(u3+u1) MT(F, u), holomorphic for Re u_i > -kappa/2; the
// zeta_q poles are cancelled analytically.
cplx L_func(cplx u1, cplx u2, cplx u3, i64 q, int kappa);

// MT(F, u) = zeta_q(1+u1+u2) zeta_q(1+u2+u3) zeta_q(1+u3+u1)
//            prod_i L_inf(1/2+u_i); finite only off the polar divisors.
cplx MT_term(const ShiftTriple& u, i64 q, int kappa);

// sum over sigma in {+-1}^3 of MT(sigma alpha); degenerate alpha (zero or
// colliding entries) handled by the delta-ladder Richardson extrapolation
// along alpha(delta) = (1,2,3) delta / log q.
cplx mt_sigma_sum(const ShiftTriple& alpha, i64 q, int kappa);

// D_alpha by direct summation (V-decay truncation, tail < 1e-10).
cplx diagonal_direct(const ShiftTriple& alpha, i64 q, int kappa);

// D_alpha as the triple contour integral over (1/3),(5/12),(1/2).
cplx diagonal_contour(const ShiftTriple& alpha, i64 q, int kappa,
                      double height = 24.0, int nodes_per_unit = 6);

// M(a,b,c) = (1/2 pi i) Int_{(1/3)} L(u,-u,c)/((u-a)(-u-b)(c-u)(c+u)) du.
cplx M_term(cplx a, cplx b, cplx c, i64 q, int kappa, double sigma = 1.0 / 3.0);

// N(a,b,c) = M(a,b,c) + L(b,-b,c)/((-b-a)(c+b)(c-b)) + L(c,-c,c)/((c-a)(-c-b)(2c)).
cplx N_term(cplx a, cplx b, cplx c, i64 q, int kappa);

// MT(alpha) + N(a2,a3,a1) + N(a1,a3,a2) + N(a1,a2,a3) + L(0,0,0)/(2(-a1)(-a2)(-a3));
// requires distinct nonzero small shifts.
cplx diagonal_asymptotic(const ShiftTriple& alpha, i64 q, int kappa);

enum class PlanePattern { axes_000, m1_axis, m2_axis, m3_axis, plane_m2m3, plane_m1m2 };

struct PlaneSum {
    cplx lhs;            // direct (m, r)-summation of G * W-check
    cplx rhs;            // the closed form predicted by the contour-shift lemmas
    double trunc_budget; // estimated truncation contribution in lhs
};

struct PlaneOptions {
    i64 m_cut = 300;     // |m| truncation of each m-sum
    i64 r_cut = 24;      // r truncation (patterns with an r-sum)
    double sigma_s = 0.0;  // 0: pick automatically from kappa
    double height_s = 24.0;
    double height_u = 20.0;
    int nodes_per_unit = 6;
};

// The sums over (m1,m2,m3) on one coordinate axis/plane of
//   sum_r (r^2 q^2)^{-1} G(m; rq) W-check(m; rq),
// with the m- and r-sums folded analytically (truncated partial zeta sums)
// into the W-check contour integrals; q prime.
PlaneSum coordinate_plane_sum(PlanePattern pattern, const ShiftTriple& alpha, i64 q,
                              int kappa, const PlaneOptions& opt = {});

// Literal small-cut evaluation of the same truncated sum, term by term via
// W_check_mellin; used to verify the folded evaluator exactly.
cplx coordinate_plane_sum_literal(PlanePattern pattern, const ShiftTriple& alpha, i64 q,
                                  int kappa, i64 m_cut, i64 r_cut,
                                  const wcheck::MellinOptions& mo);

struct NiceFormulaCheck {
    cplx lhs_partial;
    cplx rhs;
    double gap;
};

// sum_{m <= N} R_q(m) m^{-s}  vs  zeta(s) q^{1-s} prod_{p|q}(1 - p^{-(1-s)}).
NiceFormulaCheck ramanujan_dirichlet_identity(i64 q, cplx s, i64 N);

// Off-diagonal S_alpha(c) by the direct triple n-sum.
cplx S_alpha_direct(i64 c, const ShiftTriple& alpha, i64 q, int kappa);

// S_alpha(c) from the Poisson-dual side: sum over |m_i| <= m_cut of
// G(m1,m2,m3,c) W_check_direct(...), real alpha assumed for the conjugate
// symmetry shortcut.
cplx S_alpha_poisson(i64 c, const ShiftTriple& alpha, i64 q, int kappa, i64 m_cut,
                     int threads = 1);

// Delta(F, alpha) assembled triple-by-triple through the Hecke reduction and
// the Petersson right side (diagonal + Kloosterman); no eigendata needed.
cplx delta_via_petersson(const ShiftTriple& alpha, i64 q, int kappa, i64 trunc_c);

struct MomentReport {
    i64 q = 0;
    int kappa = 0;
    ShiftTriple alpha;
    cplx spectral{0.0, 0.0};
    cplx mt_sum{0.0, 0.0};
    cplx residual{0.0, 0.0};
    double envelope = 0.0;        // (log q)^power envelope for kappa
    double envelope_ratio = 0.0;  // |residual| / envelope
    double petersson_residual = 0.0;
};

std::vector<MomentReport> residual_experiment(const std::vector<forms::Newform>& all_forms,
                                              const std::vector<i64>& q_list, int kappa,
                                              const ShiftTriple& alpha, i64 trunc_factor = 10000);

struct ScalingRow {
    i64 q = 0;
    double max_L = 0.0;
    double min_L = 0.0;
    double ratio = 0.0;  // max_L / (q^{1/3} (log q)^{7/3})
};

std::vector<ScalingRow> subconvexity_scaling(const std::vector<forms::Newform>& all_forms,
                                             const std::vector<i64>& q_list, int kappa);

// Least-squares slope of log|y| against log x (the trend-fit used by the
// envelope and decay criteria).
double fitted_exponent(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace momentlab::moment
