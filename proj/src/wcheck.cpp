#include "momentlab/wcheck.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "momentlab/lfun.hpp"

namespace momentlab::wcheck {

using specfun::PI;

namespace {

cplx i_pow_kappa(int kappa) {
    return (kappa % 4 == 0) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);  // kappa even
}

// log(2 pi i sgn) on the principal branch
cplx log_2pii(int sgn) { return {std::log(2.0 * PI), (sgn >= 0 ? 0.5 : -0.5) * PI}; }

struct Axis {
    std::vector<double> x, w;   // nodes and weights
    std::vector<cplx> phase;    // e(-m x) folded with w
    std::vector<double> sqrtx;
};

// Panels sized against the local cycle rate |m| + sqrt(c Xj Xk / x), plus a
// geometric floor that grades into the (integrable) x -> 0 edge.
Axis build_axis(double X, i64 m, double c, double XoXo, int gl_order) {
    Axis ax;
    std::vector<double> gx, gw;
    specfun::gauss_legendre(gl_order, gx, gw);
    const double wfloor = X * std::pow(2.0, -14);
    double left = 0.0;
    bool first = true;
    while (left < X) {
        double rate = std::abs(static_cast<double>(m)) +
                      std::sqrt(c * XoXo / std::max(left, wfloor));
        double width = std::min({0.8 / rate, 0.25, X - left});
        if (!first) width = std::min(width, std::max(left, wfloor));  // grade toward 0
        width = std::max(width, std::min(wfloor, X - left));
        double right = std::min(X, left + width);
        for (size_t j = 0; j < gx.size(); ++j) {
            double xx = 0.5 * (left + right) + 0.5 * (right - left) * gx[j];
            double ww = 0.5 * (right - left) * gw[j];
            ax.x.push_back(xx);
            ax.w.push_back(ww);
        }
        left = right;
        first = false;
    }
    ax.phase.resize(ax.x.size());
    ax.sqrtx.resize(ax.x.size());
    for (size_t j = 0; j < ax.x.size(); ++j) {
        ax.phase[j] = ax.w[j] * specfun::e_of(-static_cast<double>(m) * ax.x[j]);
        ax.sqrtx[j] = std::sqrt(ax.x[j]);
    }
    return ax;
}

// S23[j][k] = sum_{(d,q)=1} (1/d) V_{a2}(d c x2/q) V_{a3}(d c x3/q)
std::vector<cplx> pair_table(const Axis& a2, const Axis& a3, cplx al2, cplx al3,
                             double c_over_q, i64 q, int kappa) {
    const size_t n2 = a2.x.size(), n3 = a3.x.size();
    std::vector<cplx> S(n2 * n3, cplx(0.0, 0.0));
    std::vector<cplx> v2(n2), v3(n3);
    for (i64 d = 1; d <= 200000; ++d) {
        if (q > 1 && std::gcd(d, q) != 1) continue;
        double m2 = 0.0, m3 = 0.0;
        for (size_t j = 0; j < n2; ++j) {
            v2[j] = specfun::V_weight_fast(al2, d * c_over_q * a2.x[j], kappa);
            m2 = std::max(m2, std::abs(v2[j]));
        }
        for (size_t k = 0; k < n3; ++k) {
            v3[k] = specfun::V_weight_fast(al3, d * c_over_q * a3.x[k], kappa);
            m3 = std::max(m3, std::abs(v3[k]));
        }
        if (m2 * m3 / d < 1e-16) break;
        double inv_d = 1.0 / static_cast<double>(d);
        for (size_t j = 0; j < n2; ++j) {
            if (v2[j] == cplx(0.0, 0.0)) continue;
            cplx vj = inv_d * v2[j];
            cplx* row = S.data() + j * n3;
            for (size_t k = 0; k < n3; ++k) row[k] += vj * v3[k];
        }
    }
    return S;
}

// Real scale of J_kernel: J(x) = 4 pi i^kappa * jfun(x), jfun = J_{kappa-1}(2 pi x)/x;
// tabulated on a uniform grid with 4-point (cubic) interpolation.
struct JTable {
    double h = 2e-3;
    std::vector<double> v;
    int kappa = 0;

    void build(int kap, double ymax) {
        kappa = kap;
        size_t n = static_cast<size_t>(ymax / h) + 8;
        v.resize(n);
        for (size_t i = 0; i < n; ++i) {
            double y = i * h;
            cplx jk = specfun::J_kernel(kappa, y);
            double sign = (kappa % 4 == 0) ? 1.0 : -1.0;
            v[i] = jk.real() * sign / (4.0 * PI);
        }
    }
    double operator()(double y) const {
        double u = y / h;
        size_t i = static_cast<size_t>(u);
        if (i + 2 >= v.size()) return 0.0;  // beyond the table; callers size ymax
        if (i == 0) i = 1;
        double t = u - i;
        // 4-point Lagrange on {i-1, i, i+1, i+2}
        double a = v[i - 1], b = v[i], cc = v[i + 1], d = v[i + 2];
        return b + t * ((cc - a) / 2.0 +
                        t * ((a - 2.5 * b + 2.0 * cc - 0.5 * d) +
                             t * (-0.5 * a + 1.5 * b - 1.5 * cc + 0.5 * d)));
    }
};

cplx direct_pass(i64 m1, i64 m2, i64 m3, i64 c, cplx a1, cplx a2, cplx a3,
                 i64 q, int kappa, double box, int gl_order) {
    const double X = box * static_cast<double>(q) / static_cast<double>(c);
    const double cd = static_cast<double>(c);
    Axis ax1 = build_axis(X, m1, cd, X * X, gl_order);
    Axis ax2 = build_axis(X, m2, cd, X * X, gl_order);
    Axis ax3 = build_axis(X, m3, cd, X * X, gl_order);
    const double c_over_q = cd / static_cast<double>(q);

    std::vector<cplx> head(ax1.x.size());
    for (size_t i = 0; i < ax1.x.size(); ++i)
        head[i] = ax1.phase[i] * specfun::V_weight_fast(a1, c_over_q * ax1.x[i], kappa);
    auto S23 = pair_table(ax2, ax3, a2, a3, c_over_q, q, kappa);

    const size_t n2 = ax2.x.size(), n3 = ax3.x.size();
    const double two_sqrt_c = 2.0 * std::sqrt(cd);
    JTable jt;
    jt.build(kappa, two_sqrt_c * std::pow(X, 1.5) * 1.0001 + 4.0 * jt.h);
    // fold the axis-3 phase into the pair table
    for (size_t j = 0; j < n2; ++j) {
        cplx* row = S23.data() + j * n3;
        for (size_t k = 0; k < n3; ++k) row[k] *= ax3.phase[k];
    }
    cplx total{0.0, 0.0};
    for (size_t i = 0; i < ax1.x.size(); ++i) {
        if (head[i] == cplx(0.0, 0.0)) continue;
        double s1 = ax1.sqrtx[i] * two_sqrt_c;
        cplx acc_i{0.0, 0.0};
        for (size_t j = 0; j < n2; ++j) {
            double s12 = s1 * ax2.sqrtx[j];
            const cplx* row = S23.data() + j * n3;
            double re = 0.0, im = 0.0;
            for (size_t k = 0; k < n3; ++k) {
                double jv = jt(s12 * ax3.sqrtx[k]);
                re += row[k].real() * jv;
                im += row[k].imag() * jv;
            }
            acc_i += ax2.phase[j] * cplx(re, im);
        }
        total += head[i] * acc_i;
    }
    cplx ik = i_pow_kappa(kappa);
    return total * (4.0 * PI * ik);
}

}  // namespace

MPattern classify_pattern(i64 m1, i64 m2, i64 m3) {
    int code = (m1 != 0 ? 4 : 0) + (m2 != 0 ? 2 : 0) + (m3 != 0 ? 1 : 0);
    switch (code) {
        case 0: return MPattern::all_zero;
        case 4: return MPattern::m1_only;
        case 2: return MPattern::m2_only;
        case 1: return MPattern::m3_only;
        case 3: return MPattern::m2_m3;
        case 6: return MPattern::m1_m2;
        case 5: return MPattern::m1_m3;
        default: throw std::invalid_argument("classify_pattern: all three m nonzero");
    }
}

ValueWithError W_check_direct(i64 m1, i64 m2, i64 m3, i64 c,
                              cplx a1, cplx a2, cplx a3, i64 q, int kappa,
                              const DirectOptions& opt) {
    if (kappa < 4 || kappa % 2 != 0)
        throw std::invalid_argument("W_check_direct: direct quadrature needs even kappa >= 4");
    if (std::abs(m1) > 20 || std::abs(m2) > 20 || std::abs(m3) > 20 || c > 200 || c < 1)
        throw std::invalid_argument("W_check_direct: |m_i| <= 20 and c <= 200");
    if (c % q != 0) throw std::invalid_argument("W_check_direct: q | c required");

    cplx fine = direct_pass(m1, m2, m3, c, a1, a2, a3, q, kappa, opt.box, opt.gl_order);
    cplx coarse = direct_pass(m1, m2, m3, c, a1, a2, a3, q, kappa, opt.box, opt.gl_order_coarse);
    // support-box tail: V decays like (2 pi x)^{kappa/2-1} e^{-2 pi x} past the cut
    double xb = 2.0 * PI * opt.box;
    double vtail = std::exp(-xb) * std::pow(xb, kappa / 2.0);
    double q_over_c = static_cast<double>(q) / static_cast<double>(c);
    double tail = 45.0 * vtail * q_over_c * q_over_c * q_over_c * opt.box * opt.box;
    double err = std::abs(fine - coarse) + tail;
    if (err > opt.target_tol && opt.refine_once) {
        DirectOptions o2 = opt;
        o2.gl_order += 2;
        o2.gl_order_coarse += 2;
        o2.box += 0.5;
        o2.refine_once = false;
        auto r2 = W_check_direct(m1, m2, m3, c, a1, a2, a3, q, kappa, o2);
        if (r2.abs_error_estimate > opt.target_tol)
            throw std::runtime_error("W_check_direct: refinement stalled above target tolerance");
        return r2;
    }
    return {fine, err};
}

namespace {

struct Line {
    std::vector<cplx> s;
    std::vector<double> w;
};

Line make_line(double sigma, double T, int npu) {
    ContourSpec spec;
    spec.real_part = sigma;
    spec.height_cut = T;
    spec.nodes_per_unit = npu;
    std::vector<double> t, w;
    specfun::contour_nodes(spec, t, w);
    Line L;
    L.s.reserve(t.size());
    for (size_t i = 0; i < t.size(); ++i) L.s.emplace_back(sigma, t[i]);
    L.w = std::move(w);
    return L;
}

// Gamma(s-u) / (2 pi i sgn m)^{s-u} on the (s_i, u_j) grid
std::vector<cplx> coupling(const Line& S, const Line& U, int sgn) {
    std::vector<cplx> C(S.s.size() * U.s.size());
    cplx lg = log_2pii(sgn);
    for (size_t i = 0; i < S.s.size(); ++i)
        for (size_t j = 0; j < U.s.size(); ++j) {
            cplx d = S.s[i] - U.s[j];
            C[i * U.s.size() + j] = std::exp(specfun::log_gamma(d) - d * lg);
        }
    return C;
}

cplx lg_sum(cplx z) { return specfun::log_gamma(z); }

}  // namespace

ValueWithError W_check_mellin(MPattern which, i64 m1, i64 m2, i64 m3, i64 r, i64 q,
                              cplx a1, cplx a2, cplx a3, int kappa,
                              const MellinOptions& opt) {
    if (r < 1 || q < 1) throw std::invalid_argument("W_check_mellin: r, q >= 1");
    if (classify_pattern(m1, m2, m3) != which)
        throw std::invalid_argument("W_check_mellin: pattern selector does not match m-zeros");
    if (opt.sigma_s <= 0.25 || opt.sigma_s >= kappa / 2.0)
        throw std::invalid_argument("W_check_mellin: s-line outside validity strip");
    for (cplx a : {a1, a2, a3})
        if (a.real() >= opt.sigma_u)
            throw std::invalid_argument("W_check_mellin: u-line must pass right of alpha");
    const double k2 = kappa / 2.0;
    const cplx ik = i_pow_kappa(kappa);
    const double qd = static_cast<double>(q), rd = static_cast<double>(r);
    auto run = [&](const MellinOptions& o) -> cplx {
        Line S = make_line(o.sigma_s, o.height_s, o.nodes_per_unit);
        switch (which) {
            case MPattern::all_zero: {
                cplx acc{0.0, 0.0};
                for (size_t i = 0; i < S.s.size(); ++i) {
                    cplx s = S.s[i];
                    cplx term = std::exp(lg_sum(k2 - s) + 2.0 * lg_sum(k2 + s) +
                                         s * std::log(qd / (2.0 * PI))) *
                                lfun::zeta_q(1.0 + 2.0 * s, q) /
                                ((s - a1) * (s - a2) * (s - a3));
                    acc += S.w[i] * term;
                }
                return ik / qd * acc;
            }
            case MPattern::m1_only:
            case MPattern::m2_only:
            case MPattern::m3_only: {
                // one oscillatory axis (index p), two plain V axes
                i64 m = (which == MPattern::m1_only) ? m1 : (which == MPattern::m2_only ? m2 : m3);
                cplx ap = (which == MPattern::m1_only) ? a1 : (which == MPattern::m2_only ? a2 : a3);
                cplx ao1, ao2;  // the alphas of the two zero axes
                if (which == MPattern::m1_only) { ao1 = a2; ao2 = a3; }
                if (which == MPattern::m2_only) { ao1 = a1; ao2 = a3; }
                if (which == MPattern::m3_only) { ao1 = a1; ao2 = a2; }
                // r > 1 only arises for the m1 shape; the mellin scale of the
                // oscillatory axis is r for m1 (outside the d-sum), 1 otherwise
                double scale = (which == MPattern::m1_only) ? rd : 1.0;
                double md = std::abs(static_cast<double>(m));
                Line U = make_line(o.sigma_u, o.height_u, o.nodes_per_unit);
                auto C = coupling(S, U, m > 0 ? 1 : -1);
                std::vector<cplx> B(U.s.size());
                for (size_t j = 0; j < U.s.size(); ++j)
                    B[j] = U.w[j] *
                           std::exp(lg_sum(k2 + U.s[j]) + U.s[j] * std::log(md / (2.0 * PI * scale))) /
                           (U.s[j] - ap);
                cplx acc{0.0, 0.0};
                for (size_t i = 0; i < S.s.size(); ++i) {
                    cplx s = S.s[i];
                    const cplx* row = C.data() + i * U.s.size();
                    cplx outer = std::exp(lg_sum(k2 - s) + lg_sum(k2 + s) +
                                          s * std::log(qd / (scale * md))) /
                                 ((s - ao1) * (s - ao2));
                    cplx inner{0.0, 0.0};
                    if (which == MPattern::m1_only) {
                        // both zero axes sit inside the d-sum: zeta_q(1+2s)
                        for (size_t j = 0; j < U.s.size(); ++j) inner += B[j] * row[j];
                        outer *= lfun::zeta_q(1.0 + 2.0 * s, q);
                    } else {
                        // one zero axis inside the d-sum pairs with s, the
                        // oscillatory axis contributes u: zeta_q(1+s+u)
                        for (size_t j = 0; j < U.s.size(); ++j)
                            inner += B[j] * row[j] * lfun::zeta_q(1.0 + s + U.s[j], q);
                    }
                    acc += S.w[i] * outer * inner;
                }
                return ik / (scale * qd) * acc;
            }
            case MPattern::m2_m3: {
                if (r != 1)
                    throw std::invalid_argument("W_check_mellin: m2_m3 shape is stated at r = 1");
                double md2 = std::abs(static_cast<double>(m2));
                double md3 = std::abs(static_cast<double>(m3));
                Line U = make_line(o.sigma_u, o.height_u, o.nodes_per_unit);
                auto C2 = coupling(S, U, m2 > 0 ? 1 : -1);
                auto C3 = coupling(S, U, m3 > 0 ? 1 : -1);
                const size_t nu = U.s.size();
                std::vector<cplx> B2(nu), B3(nu);
                for (size_t j = 0; j < nu; ++j) {
                    B2[j] = U.w[j] * std::exp(lg_sum(k2 + U.s[j]) +
                                              U.s[j] * std::log(md2 / (2.0 * PI))) /
                            (U.s[j] - a2);
                    B3[j] = U.w[j] * std::exp(lg_sum(k2 + U.s[j]) +
                                              U.s[j] * std::log(md3 / (2.0 * PI))) /
                            (U.s[j] - a3);
                }
                std::vector<cplx> A(S.s.size());
                for (size_t i = 0; i < S.s.size(); ++i) {
                    cplx s = S.s[i];
                    A[i] = S.w[i] *
                           std::exp(lg_sum(k2 - s) + s * std::log(2.0 * PI * qd / (md2 * md3))) /
                           (s - a1);
                }
                // M[j][k] = sum_i A[i] C2[i][j] C3[i][k]
                std::vector<cplx> M(nu * nu, cplx(0.0, 0.0));
                for (size_t i = 0; i < S.s.size(); ++i) {
                    const cplx* r2 = C2.data() + i * nu;
                    const cplx* r3 = C3.data() + i * nu;
                    cplx Ai = A[i];
                    for (size_t j = 0; j < nu; ++j) {
                        cplx t = Ai * r2[j];
                        cplx* Mrow = M.data() + j * nu;
                        for (size_t k = 0; k < nu; ++k) Mrow[k] += t * r3[k];
                    }
                }
                cplx acc{0.0, 0.0};
                for (size_t j = 0; j < nu; ++j)
                    for (size_t k = 0; k < nu; ++k)
                        acc += M[j * nu + k] * B2[j] * B3[k] *
                               lfun::zeta_q(1.0 + U.s[j] + U.s[k], q);
                return ik / qd * acc;
            }
            case MPattern::m1_m2:
            case MPattern::m1_m3: {
                // m1 on the d-free axis; the second nonzero m is inside the d-sum
                i64 mb = (which == MPattern::m1_m2) ? m2 : m3;
                cplx ab = (which == MPattern::m1_m2) ? a2 : a3;
                cplx afree = (which == MPattern::m1_m2) ? a3 : a2;  // the zero axis
                double md1 = std::abs(static_cast<double>(m1));
                double mdb = std::abs(static_cast<double>(mb));
                Line U = make_line(o.sigma_u, o.height_u, o.nodes_per_unit);
                auto C1 = coupling(S, U, m1 > 0 ? 1 : -1);
                auto Cb = coupling(S, U, mb > 0 ? 1 : -1);
                const size_t nu = U.s.size();
                std::vector<cplx> B1(nu), Bb(nu);
                for (size_t j = 0; j < nu; ++j) {
                    B1[j] = U.w[j] * std::exp(lg_sum(k2 + U.s[j]) +
                                              U.s[j] * std::log(md1 / (2.0 * PI * rd))) /
                            (U.s[j] - a1);
                    Bb[j] = U.w[j] * std::exp(lg_sum(k2 + U.s[j]) +
                                              U.s[j] * std::log(mdb / (2.0 * PI * rd))) /
                            (U.s[j] - ab);
                }
                cplx acc{0.0, 0.0};
                for (size_t i = 0; i < S.s.size(); ++i) {
                    cplx s = S.s[i];
                    cplx head = S.w[i] *
                                std::exp(lg_sum(k2 - s) +
                                         s * std::log(2.0 * PI * qd / (md1 * mdb))) /
                                (s - afree);
                    const cplx* r1 = C1.data() + i * nu;
                    const cplx* rb = Cb.data() + i * nu;
                    cplx sum1{0.0, 0.0}, sumb{0.0, 0.0};
                    for (size_t j = 0; j < nu; ++j) {
                        sum1 += B1[j] * r1[j];
                        // the d-sum couples s with the u of the in-d-sum axis
                        sumb += Bb[j] * rb[j] * lfun::zeta_q(1.0 + s + U.s[j], q);
                    }
                    acc += head * sum1 * sumb;
                }
                return ik / (rd * qd) * acc;
            }
        }
        return {0.0, 0.0};
    };
    cplx fine = run(opt);
    MellinOptions coarse_opt = opt;
    coarse_opt.nodes_per_unit = std::max(4, opt.nodes_per_unit - 2);
    cplx coarse = run(coarse_opt);
    double tail = std::exp(-0.5 * PI * std::min(opt.height_s, opt.height_u));
    return {fine, std::abs(fine - coarse) + tail};
}

cplx J_kernel_mellin(double y, int kappa, const ContourSpec& spec) {
    if (y <= 0.0) throw std::invalid_argument("J_kernel_mellin: y > 0");
    const double k2 = kappa / 2.0;
    if (spec.real_part <= 0.25 || spec.real_part >= k2)
        throw std::invalid_argument("J_kernel_mellin: contour outside (1/4, kappa/2)");
    auto f = [&](cplx s) {
        return std::exp(2.0 * s * std::log(2.0 * PI) + specfun::log_gamma(k2 - s) -
                        specfun::log_gamma(k2 + s) + (s - 1.0) * std::log(y));
    };
    auto r = specfun::integrate_contour(f, spec);
    return i_pow_kappa(kappa) * r.value;
}

}  // namespace momentlab::wcheck
