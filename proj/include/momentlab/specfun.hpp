#pragma once

// Complex gamma, J-Bessel, upper incomplete gamma, vertical-line (Mellin)
// quadrature, and the smoothing weight V that drives every approximate
// functional equation in this project.

#include <complex>
#include <functional>
#include <cstdint>

namespace momentlab::specfun {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;

// e(x) = exp(2 pi i x)
inline cplx e_of(double x) {
    return {std::cos(2.0 * PI * x), std::sin(2.0 * PI * x)};
}

// Principal branch log Gamma, Lanczos g=7 with reflection.
cplx log_gamma(cplx z);
cplx gamma(cplx z);

// Upper incomplete gamma Gamma(a, y) for complex a, real y > 0.
// Series for small y, continued fraction for large y.
cplx upper_gamma(cplx a, double y);

// J_nu(x), integer nu in [0, 20], x >= 0; abs error <= 1e-10 on x <= 1e5.
double bessel_J(int nu, double x);

// J(x) = 4 pi i^kappa x^{-1} J_{kappa-1}(2 pi x), kappa even >= 2.
// The removable x -> 0 singularity is handled by series; x >= 0.
cplx J_kernel(int kappa, double x);

// Vertical-line integration prescription. The line is Re(s) = real_part,
// truncated at |Im s| <= height_cut, Gauss-Legendre panels of unit height
// with nodes_per_unit nodes each (or a uniform trapezoid rule).
struct ContourSpec {
    double real_part = 2.0;
    double height_cut = 40.0;
    int nodes_per_unit = 8;
    double panel_height = 1.0;  // GL panel height; shrink to resolve narrow peaks
    enum class Scheme { gauss_legendre, trapezoid } scheme = Scheme::gauss_legendre;

    ContourSpec with_sigma(double s) const { ContourSpec c = *this; c.real_part = s; return c; }
    ContourSpec refined() const { ContourSpec c = *this; c.nodes_per_unit *= 2; return c; }
};

struct ValueWithError {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
};

// (1/2 pi i) Integral over the vertical line of f(s) ds. The error estimate
// combines a node-refinement delta with a tail bound fitted from the decay of
// |f| near the truncation height.
ValueWithError integrate_contour(const std::function<cplx(cplx)>& f, const ContourSpec& spec);

// Nodes and weights for the line integral above: value = sum_j w_j f(sigma + i t_j),
// with the 1/(2 pi i) * (i dt) factor folded into w_j. Shared by batch evaluators.
void contour_nodes(const ContourSpec& spec, std::vector<double>& t, std::vector<double>& w);

// V_{1/2+alpha}(x) = (1/2 pi i) Int Gamma(s + kappa/2)/(s - alpha) (2 pi x)^{-s} ds.
// Contour route (sigma > max(0, Re alpha)) and the exact incomplete-gamma form
//   V = (2 pi x)^{-alpha} Gamma(alpha + kappa/2, 2 pi x),
// kept as two independent evaluation paths.
ValueWithError V_weight(cplx alpha, double x, int kappa, const ContourSpec& spec);
cplx V_weight_fast(cplx alpha, double x, int kappa);

// V(x1,x2,x3) = V_{1/2+a1}(x1) sum_{(d,q)=1} (1/d) V_{1/2+a2}(d x2) V_{1/2+a3}(d x3),
// d-sum truncated once the tail drops below 1e-12 (fast V path).
cplx V_triple(double x1, double x2, double x3,
              cplx a1, cplx a2, cplx a3, std::int64_t q, int kappa);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace momentlab::specfun
