#pragma once

// The Poisson-dual archimedean factor W-check(m1,m2,m3,c):
//   direct 3D oscillatory quadrature of J(2 sqrt(c x1 x2 x3)) V(cx/q) e(-m.x)
// and the coordinate-plane Mellin inversion formulas it must agree with.
// The two evaluation routes are independent; their agreement is the module's
// core cross-validation.

#include <complex>

#include "momentlab/specfun.hpp"
#include "momentlab/numth.hpp"

namespace momentlab::wcheck {

using numth::i64;
using cplx = std::complex<double>;
using specfun::ContourSpec;
using specfun::ValueWithError;

// Which m-coordinates are nonzero.
enum class MPattern { all_zero, m1_only, m2_only, m3_only, m2_m3, m1_m2, m1_m3 };

MPattern classify_pattern(i64 m1, i64 m2, i64 m3);

struct DirectOptions {
    double box = 4.0;          // support cut in units of q/c per axis
    double target_tol = 1e-6;  // refinement stall threshold
    int gl_order = 6;
    int gl_order_coarse = 4;   // for the error estimate
    bool refine_once = true;   // one panel-doubling retry if stalled
};

// Direct quadrature; kappa >= 4 (the kappa = 2 integrand is not absolutely
// integrable and is only reachable through the Mellin formulas).
ValueWithError W_check_direct(i64 m1, i64 m2, i64 m3, i64 c,
                              cplx a1, cplx a2, cplx a3, i64 q, int kappa,
                              const DirectOptions& opt = {});

struct MellinOptions {
    double sigma_s = 0.75;   // s-line, must stay in (1/4, kappa/2)
    double sigma_u = 0.25;   // u-lines, right of each alpha
    double height_s = 26.0;
    double height_u = 22.0;
    int nodes_per_unit = 8;
};

// Coordinate-plane Mellin form of W-check(m1,m2,m3,rq). The pattern selector
// must match the zero-pattern of (m1,m2,m3); r > 1 is only meaningful for the
// m1_only / m1_m2 / m1_m3 shapes (elsewhere the paired character sum vanishes
// for r > 1 and the paper states the r = 1 formula).
ValueWithError W_check_mellin(MPattern which, i64 m1, i64 m2, i64 m3, i64 r, i64 q,
                              cplx a1, cplx a2, cplx a3, int kappa,
                              const MellinOptions& opt = {});

// J(2 sqrt(y)) reconstructed from its Mellin representation
//   i^kappa (1/2 pi i) Int (2 pi)^{2s} Gamma(kappa/2-s)/Gamma(kappa/2+s) y^{s-1} ds.
cplx J_kernel_mellin(double y, int kappa, const ContourSpec& spec);

}  // namespace momentlab::wcheck
