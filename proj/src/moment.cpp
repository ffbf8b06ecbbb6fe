#include "momentlab/moment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "momentlab/expsums.hpp"
#include "momentlab/lfun.hpp"

namespace momentlab::moment {

using numth::gcd;
using specfun::PI;

namespace {

cplx i_pow_kappa(int kappa) { return (kappa % 4 == 0) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0); }

cplx Linf(cplx s, i64 q, int kappa) { return forms::L_infinity(s, q, kappa); }

struct Line {
    std::vector<cplx> s;
    std::vector<double> w;
};

Line make_line(double sigma, double T, int npu, double panel_height = 1.0) {
    specfun::ContourSpec spec;
    spec.real_part = sigma;
    spec.height_cut = T;
    spec.nodes_per_unit = npu;
    spec.panel_height = panel_height;
    std::vector<double> t, w;
    specfun::contour_nodes(spec, t, w);
    Line L;
    for (size_t i = 0; i < t.size(); ++i) L.s.emplace_back(sigma, t[i]);
    L.w = w;
    return L;
}

}  // namespace

cplx L_func(cplx u1, cplx u2, cplx u3, i64 q, int kappa) {
    return lfun::z_zeta_q_one_plus(u1 + u2, q) * lfun::z_zeta_q_one_plus(u2 + u3, q) *
           lfun::z_zeta_q_one_plus(u3 + u1, q) * Linf(0.5 + u1, q, kappa) *
           Linf(0.5 + u2, q, kappa) * Linf(0.5 + u3, q, kappa);
}

cplx MT_term(const ShiftTriple& u, i64 q, int kappa) {
    return L_func(u.a1, u.a2, u.a3, q, kappa) /
           ((u.a1 + u.a2) * (u.a2 + u.a3) * (u.a3 + u.a1));
}

cplx mt_sigma_sum(const ShiftTriple& alpha, i64 q, int kappa) {
    auto sum_at = [&](const ShiftTriple& a) {
        cplx acc{0.0, 0.0};
        for (int s1 : {1, -1})
            for (int s2 : {1, -1})
                for (int s3 : {1, -1}) {
                    ShiftTriple sa{static_cast<double>(s1) * a.a1,
                                   static_cast<double>(s2) * a.a2,
                                   static_cast<double>(s3) * a.a3};
                    acc += MT_term(sa, q, kappa);
                }
        return acc;
    };
    double sep = std::min({std::abs(alpha.a1), std::abs(alpha.a2), std::abs(alpha.a3),
                           std::abs(alpha.a1 - alpha.a2), std::abs(alpha.a2 - alpha.a3),
                           std::abs(alpha.a1 - alpha.a3)});
    if (sep > 1e-3) return sum_at(alpha);
    double norm = std::max({std::abs(alpha.a1), std::abs(alpha.a2), std::abs(alpha.a3)});
    if (norm > 1e-6)
        throw std::invalid_argument(
            "mt_sigma_sum: degenerate nonzero shifts; only the alpha = 0 limit is extrapolated");
    // Richardson ladder along alpha(delta) = (1,2,3) delta / log q; the
    // sigma-symmetrized sum is even in delta, so errors go like delta^2, delta^4.
    double lq = std::log(static_cast<double>(q));
    auto F = [&](double delta) {
        ShiftTriple a{cplx(delta / lq, 0.0), cplx(2.0 * delta / lq, 0.0),
                      cplx(3.0 * delta / lq, 0.0)};
        return sum_at(a);
    };
    cplx f1 = F(0.2), f2 = F(0.1), f3 = F(0.05);
    cplx r1 = (4.0 * f2 - f1) / 3.0;
    cplx r2 = (4.0 * f3 - f2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

cplx diagonal_direct(const ShiftTriple& alpha, i64 q, int kappa) {
    cplx acc{0.0, 0.0};
    const i64 cut = 9 * q + 40;
    for (i64 n1 = 1; n1 <= cut; ++n1) {
        if (gcd(n1, q) != 1) continue;
        cplx inner{0.0, 0.0};
        bool any = false;
        for (i64 n2 = 1; n2 * n2 <= n1; ++n2) {
            if (n1 % n2 != 0) continue;
            i64 n3 = n1 / n2;
            cplx v = specfun::V_triple(static_cast<double>(n1) / q, static_cast<double>(n2) / q,
                                       static_cast<double>(n3) / q, alpha.a1, alpha.a2, alpha.a3,
                                       q, kappa);
            inner += v;
            if (n2 != n3)
                inner += specfun::V_triple(static_cast<double>(n1) / q,
                                           static_cast<double>(n3) / q,
                                           static_cast<double>(n2) / q, alpha.a1, alpha.a2,
                                           alpha.a3, q, kappa);
            any = true;
        }
        if (any) acc += inner / static_cast<double>(n1);
    }
    return acc;
}

cplx diagonal_contour(const ShiftTriple& alpha, i64 q, int kappa, double height,
                      int nodes_per_unit) {
    Line L1 = make_line(1.0 / 3.0, height, nodes_per_unit, 0.3);
    Line L2 = make_line(5.0 / 12.0, height, nodes_per_unit, 0.3);
    Line L3 = make_line(0.5, height, nodes_per_unit, 0.3);
    const size_t n1 = L1.s.size(), n2 = L2.s.size(), n3 = L3.s.size();
    std::vector<cplx> A1(n1), A2(n2), A3(n3);
    for (size_t i = 0; i < n1; ++i)
        A1[i] = L1.w[i] * Linf(0.5 + L1.s[i], q, kappa) / (L1.s[i] - alpha.a1);
    for (size_t j = 0; j < n2; ++j)
        A2[j] = L2.w[j] * Linf(0.5 + L2.s[j], q, kappa) / (L2.s[j] - alpha.a2);
    for (size_t k = 0; k < n3; ++k)
        A3[k] = L3.w[k] * Linf(0.5 + L3.s[k], q, kappa) / (L3.s[k] - alpha.a3);
    std::vector<cplx> Z12(n1 * n2), Z23(n2 * n3), Z31(n3 * n1);
    for (size_t i = 0; i < n1; ++i)
        for (size_t j = 0; j < n2; ++j) Z12[i * n2 + j] = lfun::zeta_q(1.0 + L1.s[i] + L2.s[j], q);
    for (size_t j = 0; j < n2; ++j)
        for (size_t k = 0; k < n3; ++k) Z23[j * n3 + k] = lfun::zeta_q(1.0 + L2.s[j] + L3.s[k], q);
    for (size_t k = 0; k < n3; ++k)
        for (size_t i = 0; i < n1; ++i) Z31[k * n1 + i] = lfun::zeta_q(1.0 + L3.s[k] + L1.s[i], q);
    cplx acc{0.0, 0.0};
    for (size_t i = 0; i < n1; ++i)
        for (size_t j = 0; j < n2; ++j) {
            cplx head = A1[i] * A2[j] * Z12[i * n2 + j];
            cplx inner{0.0, 0.0};
            for (size_t k = 0; k < n3; ++k)
                inner += A3[k] * Z23[j * n3 + k] * Z31[k * n1 + i];
            acc += head * inner;
        }
    return acc;
}

cplx M_term(cplx a, cplx b, cplx c, i64 q, int kappa, double sigma) {
    specfun::ContourSpec spec;
    spec.real_part = sigma;
    spec.height_cut = 18.0;
    spec.nodes_per_unit = 10;
    spec.panel_height = 0.15;  // the polar quotient peaks on a ~sigma scale
    auto f = [&](cplx u) {
        cplx L = lfun::z_zeta_q_one_plus(cplx(0.0, 0.0), q) *
                 lfun::z_zeta_q_one_plus(c - u, q) * lfun::z_zeta_q_one_plus(c + u, q) *
                 Linf(0.5 + u, q, kappa) * Linf(0.5 - u, q, kappa) * Linf(0.5 + c, q, kappa);
        return L / ((u - a) * (-u - b) * (c - u) * (c + u));
    };
    return specfun::integrate_contour(f, spec).value;
}

cplx N_term(cplx a, cplx b, cplx c, i64 q, int kappa) {
    cplx m = M_term(a, b, c, q, kappa);
    cplx t1 = L_func(b, -b, c, q, kappa) / ((-b - a) * (c + b) * (c - b));
    cplx t2 = L_func(c, -c, c, q, kappa) / ((c - a) * (-c - b) * (2.0 * c));
    return m + t1 + t2;
}

cplx diagonal_asymptotic(const ShiftTriple& al, i64 q, int kappa) {
    cplx a1 = al.a1, a2 = al.a2, a3 = al.a3;
    double sep = std::min({std::abs(a1), std::abs(a2), std::abs(a3), std::abs(a1 - a2),
                           std::abs(a2 - a3), std::abs(a1 - a3)});
    if (sep < 1e-6)
        throw std::invalid_argument("diagonal_asymptotic: shifts must be distinct and nonzero");
    cplx mt = MT_term(al, q, kappa);
    cplx n1 = N_term(a2, a3, a1, q, kappa);
    cplx n2 = N_term(a1, a3, a2, q, kappa);
    cplx n3 = N_term(a1, a2, a3, q, kappa);
    cplx l0 = 0.5 * L_func(0.0, 0.0, 0.0, q, kappa) / ((-a1) * (-a2) * (-a3));
    return mt + n1 + n2 + n3 + l0;
}

// ---------------------------------------------------------------------------
// coordinate-plane sums

namespace {

// partial R_q-Dirichlet sum: sum_{m <= X} R_q(m) m^{-w}, q prime
cplx PR(cplx w, double X, i64 q) {
    if (X < 1.0) return {0.0, 0.0};
    return -lfun::partial_zeta(w, X) +
           std::exp((1.0 - w) * std::log(static_cast<double>(q))) *
               lfun::partial_zeta(w, X / static_cast<double>(q));
}

// sum_{n <= X, (n,q)=1} n^{-w}
cplx Zq(cplx w, double X, i64 q) {
    if (X < 1.0) return {0.0, 0.0};
    return lfun::partial_zeta(w, X) -
           std::exp(-w * std::log(static_cast<double>(q))) *
               lfun::partial_zeta(w, X / static_cast<double>(q));
}

// the sign-paired oscillatory factor of the m-sums:
//   Gamma(w) [(2 pi i)^{-w} + (-2 pi i)^{-w}] = Gamma(w) 2 cos(pi w/2) (2 pi)^{-w}
cplx sign_paired_gamma(cplx w) {
    return std::exp(specfun::log_gamma(w) - w * std::log(2.0 * PI)) * 2.0 *
           std::cos(0.5 * PI * w);
}

}  // namespace

PlaneSum coordinate_plane_sum(PlanePattern pattern, const ShiftTriple& alpha, i64 q,
                              int kappa, const PlaneOptions& opt) {
    if (!numth::is_squarefree(q) || q % 2 == 0 || numth::nu(q) != 1)
        throw std::invalid_argument("coordinate_plane_sum: q prime required");
    const double k2 = kappa / 2.0;
    const double qd = static_cast<double>(q);
    const double phi = static_cast<double>(q - 1);
    const cplx front_sign = i_pow_kappa(kappa) *
                            static_cast<double>(numth::jacobi_symbol(-1, q));
    double sigma_s = (opt.sigma_s > 0.0) ? opt.sigma_s : std::min(0.87 * k2, k2 - 0.4);
    const double sigma_u = 0.25;
    PlaneSum out;
    out.trunc_budget = 0.0;

    if (pattern == PlanePattern::axes_000) {
        wcheck::MellinOptions mo;
        mo.sigma_s = 0.75;
        mo.height_s = opt.height_s;
        mo.nodes_per_unit = opt.nodes_per_unit + 2;
        auto w000 = wcheck::W_check_mellin(wcheck::MPattern::all_zero, 0, 0, 0, 1, q,
                                           alpha.a1, alpha.a2, alpha.a3, kappa, mo);
        out.lhs = static_cast<double>(numth::jacobi_symbol(-1, q)) * phi * phi / qd * w000.value;
        cplx a1 = alpha.a1, a2 = alpha.a2, a3 = alpha.a3;
        cplx rhs = L_func(a1, a1, -a1, q, kappa) / ((a1 - a2) * (a1 - a3) * (2.0 * a1)) +
                   L_func(a2, a2, -a2, q, kappa) / ((a2 - a1) * (a2 - a3) * (2.0 * a2)) +
                   L_func(a3, a3, -a3, q, kappa) / ((a3 - a1) * (a3 - a2) * (2.0 * a3)) +
                   0.5 * L_func(0.0, 0.0, 0.0, q, kappa) / ((-a1) * (-a2) * (-a3));
        out.rhs = rhs;
        out.trunc_budget = w000.abs_error_estimate;
        return out;
    }

    Line S = make_line(sigma_s, opt.height_s, opt.nodes_per_unit);
    Line U = make_line(sigma_u, opt.height_u, opt.nodes_per_unit);
    const size_t ns = S.s.size(), nu = U.s.size();

    if (pattern == PlanePattern::m1_axis || pattern == PlanePattern::m2_axis ||
        pattern == PlanePattern::m3_axis) {
        cplx aosc, ao1, ao2;  // oscillatory-axis alpha; the two others
        if (pattern == PlanePattern::m1_axis) { aosc = alpha.a1; ao1 = alpha.a2; ao2 = alpha.a3; }
        if (pattern == PlanePattern::m2_axis) { aosc = alpha.a2; ao1 = alpha.a1; ao2 = alpha.a3; }
        if (pattern == PlanePattern::m3_axis) { aosc = alpha.a3; ao1 = alpha.a1; ao2 = alpha.a2; }
        std::vector<cplx> A(ns), B(nu);
        for (size_t i = 0; i < ns; ++i) {
            cplx s = S.s[i];
            A[i] = S.w[i] *
                   std::exp(specfun::log_gamma(k2 - s) + specfun::log_gamma(k2 + s) +
                            s * std::log(qd)) /
                   ((s - ao1) * (s - ao2));
            if (pattern == PlanePattern::m1_axis) A[i] *= lfun::zeta_q(1.0 + 2.0 * s, q);
        }
        for (size_t j = 0; j < nu; ++j) {
            cplx u = U.s[j];
            B[j] = U.w[j] * std::exp(specfun::log_gamma(k2 + u) - u * std::log(2.0 * PI)) /
                   (u - aosc);
        }
        cplx acc{0.0, 0.0};
        if (pattern != PlanePattern::m1_axis) {
            // single m-sum, r = 1 only
            for (size_t i = 0; i < ns; ++i) {
                cplx s = S.s[i];
                cplx inner{0.0, 0.0};
                for (size_t j = 0; j < nu; ++j) {
                    cplx w = s - U.s[j];
                    inner += B[j] * sign_paired_gamma(w) *
                             PR(w, static_cast<double>(opt.m_cut), q) *
                             lfun::zeta_q(1.0 + s + U.s[j], q);
                }
                acc += A[i] * inner;
            }
        } else {
            // m1-sum coupled to the r-sum through (m1, r) = 1
            for (i64 e = 1; e <= opt.r_cut; ++e) {
                if (gcd(e, q) != 1) continue;
                int mu = numth::moebius(e);
                if (mu == 0) continue;
                double med = static_cast<double>(opt.m_cut) / e;
                double red = static_cast<double>(opt.r_cut) / e;
                if (med < 1.0) break;
                for (size_t i = 0; i < ns; ++i) {
                    cplx s = S.s[i];
                    cplx epow = static_cast<double>(mu) *
                                std::exp(-(1.0 + 2.0 * s) * std::log(static_cast<double>(e)));
                    cplx inner{0.0, 0.0};
                    for (size_t j = 0; j < nu; ++j) {
                        cplx w = s - U.s[j];
                        inner += B[j] * sign_paired_gamma(w) * PR(w, med, q) *
                                 Zq(1.0 + s + U.s[j], red, q);
                    }
                    acc += A[i] * epow * inner;
                }
            }
        }
        out.lhs = front_sign * phi / (qd * qd) * acc;
        if (pattern == PlanePattern::m1_axis)
            out.rhs = -M_term(alpha.a2, -alpha.a3, alpha.a1, q, kappa);
        else if (pattern == PlanePattern::m2_axis)
            out.rhs = -M_term(alpha.a1, -alpha.a3, alpha.a2, q, kappa);
        else
            out.rhs = -M_term(alpha.a1, -alpha.a2, alpha.a3, q, kappa);
        double wre = sigma_s - sigma_u;
        out.trunc_budget =
            4.0 * qd * std::pow(static_cast<double>(opt.m_cut), 1.0 - wre) / (wre - 1.0 + 1e-9) +
            std::pow(static_cast<double>(opt.r_cut), -2.0 * sigma_s);
        return out;
    }

    // plane patterns: two oscillatory axes
    cplx afree, ax1, ax2;  // the zero axis alpha; the two oscillatory ones
    bool with_r = (pattern == PlanePattern::plane_m1m2);
    if (pattern == PlanePattern::plane_m2m3) { afree = alpha.a1; ax1 = alpha.a2; ax2 = alpha.a3; }
    else { afree = alpha.a3; ax1 = alpha.a1; ax2 = alpha.a2; }
    std::vector<cplx> A(ns), B1(nu), B2(nu);
    for (size_t i = 0; i < ns; ++i) {
        cplx s = S.s[i];
        A[i] = S.w[i] * std::exp(specfun::log_gamma(k2 - s) + s * std::log(2.0 * PI * qd)) /
               (s - afree);
    }
    for (size_t j = 0; j < nu; ++j) {
        cplx u = U.s[j];
        cplx base = std::exp(specfun::log_gamma(k2 + u) - u * std::log(2.0 * PI));
        B1[j] = U.w[j] * base / (u - ax1);
        B2[j] = U.w[j] * base / (u - ax2);
    }
    // coupling tables in w = s - u
    std::vector<cplx> C1(ns * nu), C2(ns * nu), ZSU(ns * nu);
    for (size_t i = 0; i < ns; ++i)
        for (size_t j = 0; j < nu; ++j) {
            cplx w = S.s[i] - U.s[j];
            cplx g = sign_paired_gamma(w);
            C1[i * nu + j] = g;  // per-e truncation applied below for the r-coupled case
            C2[i * nu + j] = g * PR(w, static_cast<double>(opt.m_cut), q);
            if (with_r) ZSU[i * nu + j] = lfun::zeta_q(1.0 + S.s[i] + U.s[j], q);
        }
    cplx acc{0.0, 0.0};
    if (!with_r) {
        // zeta_q(1 + u2 + u3) couples the two u-lines
        std::vector<cplx> Zuu(nu * nu);
        for (size_t j = 0; j < nu; ++j)
            for (size_t k = 0; k < nu; ++k)
                Zuu[j * nu + k] = lfun::zeta_q(1.0 + U.s[j] + U.s[k], q);
        for (size_t i = 0; i < ns; ++i) {
            const cplx* c1 = C1.data() + i * nu;
            const cplx* c2 = C2.data() + i * nu;
            cplx w1j;
            cplx inner{0.0, 0.0};
            for (size_t j = 0; j < nu; ++j) {
                w1j = B1[j] * c1[j] * PR(S.s[i] - U.s[j], static_cast<double>(opt.m_cut), q);
                cplx inner2{0.0, 0.0};
                for (size_t k = 0; k < nu; ++k) inner2 += B2[k] * c2[k] * Zuu[j * nu + k];
                inner += w1j * inner2;
            }
            acc += A[i] * inner;
        }
    } else {
        for (i64 e = 1; e <= opt.r_cut; ++e) {
            if (gcd(e, q) != 1) continue;
            int mu = numth::moebius(e);
            if (mu == 0) continue;
            double med = static_cast<double>(opt.m_cut) / e;
            double red = static_cast<double>(opt.r_cut) / e;
            if (med < 1.0) break;
            std::vector<cplx> Zuu(nu * nu);
            for (size_t j = 0; j < nu; ++j)
                for (size_t k = 0; k < nu; ++k)
                    Zuu[j * nu + k] = Zq(1.0 + U.s[j] + U.s[k], red, q);
            for (size_t i = 0; i < ns; ++i) {
                cplx s = S.s[i];
                const cplx* c1 = C1.data() + i * nu;
                const cplx* c2 = C2.data() + i * nu;
                cplx inner{0.0, 0.0};
                for (size_t j = 0; j < nu; ++j) {
                    // m1 couples to e: truncation M/e; e-power uses u2 inside
                    cplx w1 = B1[j] * c1[j] * PR(s - U.s[j], med, q);
                    cplx inner2{0.0, 0.0};
                    for (size_t k = 0; k < nu; ++k) {
                        cplx epow = std::exp(-(1.0 + s + U.s[k]) *
                                             std::log(static_cast<double>(e)));
                        inner2 += B2[k] * c2[k] * ZSU[i * nu + k] * Zuu[j * nu + k] * epow;
                    }
                    inner += w1 * inner2;
                }
                acc += static_cast<double>(mu) * A[i] * inner;
            }
        }
    }
    out.lhs = front_sign / (qd * qd) * acc * qd;  // chi(-1)/q prefactor of G over q^2, times q from G
    out.rhs = {0.0, 0.0};
    double wre = sigma_s - sigma_u;
    out.trunc_budget = 8.0 * qd * std::pow(static_cast<double>(opt.m_cut), 1.0 - wre);
    return out;
}

cplx coordinate_plane_sum_literal(PlanePattern pattern, const ShiftTriple& alpha, i64 q,
                                  int kappa, i64 m_cut, i64 r_cut,
                                  const wcheck::MellinOptions& mo) {
    cplx acc{0.0, 0.0};
    auto wmell = [&](wcheck::MPattern p, i64 m1, i64 m2, i64 m3, i64 r) {
        return wcheck::W_check_mellin(p, m1, m2, m3, r, q, alpha.a1, alpha.a2, alpha.a3, kappa,
                                      mo).value;
    };
    const double qd = static_cast<double>(q);
    double chim1 = static_cast<double>(numth::jacobi_symbol(-1, q));
    switch (pattern) {
        case PlanePattern::m2_axis:
            for (i64 m = -m_cut; m <= m_cut; ++m) {
                if (m == 0) continue;
                acc += static_cast<double>(numth::ramanujan_exact(q, m)) *
                       wmell(wcheck::MPattern::m2_only, 0, m, 0, 1);
            }
            return chim1 * (qd - 1.0) / qd * acc;
        case PlanePattern::m1_axis:
            for (i64 r = 1; r <= r_cut; ++r) {
                if (gcd(r, q) != 1) continue;
                for (i64 m = -m_cut; m <= m_cut; ++m) {
                    if (m == 0 || gcd(m, r) != 1) continue;
                    acc += static_cast<double>(numth::ramanujan_exact(q, m)) *
                           wmell(wcheck::MPattern::m1_only, m, 0, 0, r);
                }
            }
            return chim1 * (qd - 1.0) / qd * acc;
        case PlanePattern::plane_m2m3:
            for (i64 m2 = -m_cut; m2 <= m_cut; ++m2)
                for (i64 m3 = -m_cut; m3 <= m_cut; ++m3) {
                    if (m2 == 0 || m3 == 0) continue;
                    acc += static_cast<double>(numth::ramanujan_exact(q, m2)) *
                           static_cast<double>(numth::ramanujan_exact(q, m3)) *
                           wmell(wcheck::MPattern::m2_m3, 0, m2, m3, 1);
                }
            return chim1 / qd * acc;
        case PlanePattern::plane_m1m2:
            for (i64 r = 1; r <= r_cut; ++r) {
                if (gcd(r, q) != 1) continue;
                for (i64 m1 = -m_cut; m1 <= m_cut; ++m1) {
                    if (m1 == 0 || gcd(m1, r) != 1) continue;
                    for (i64 m2 = -m_cut; m2 <= m_cut; ++m2) {
                        if (m2 == 0) continue;
                        acc += static_cast<double>(numth::ramanujan_exact(q, m1)) *
                               static_cast<double>(numth::ramanujan_exact(q, m2)) *
                               wmell(wcheck::MPattern::m1_m2, m1, m2, 0, r);
                    }
                }
            }
            return chim1 / qd * acc;
        default:
            throw std::invalid_argument("coordinate_plane_sum_literal: unsupported pattern");
    }
}

NiceFormulaCheck ramanujan_dirichlet_identity(i64 q, cplx s, i64 N) {
    if (s.real() <= 1.0) throw std::invalid_argument("ramanujan_dirichlet_identity: Re s > 1");
    NiceFormulaCheck out;
    cplx acc{0.0, 0.0};
    for (i64 m = 1; m <= N; ++m)
        acc += static_cast<double>(numth::ramanujan_exact(q, m)) *
               std::exp(-s * std::log(static_cast<double>(m)));
    out.lhs_partial = acc;
    cplx rhs = lfun::zeta(s) * std::exp((1.0 - s) * std::log(static_cast<double>(q)));
    for (auto& [p, e] : numth::factorize(q).factors)
        rhs *= 1.0 - std::exp(-(1.0 - s) * std::log(static_cast<double>(p)));
    out.rhs = rhs;
    out.gap = std::abs(acc - rhs);
    return out;
}

cplx S_alpha_direct(i64 c, const ShiftTriple& alpha, i64 q, int kappa) {
    if (c % q != 0) throw std::invalid_argument("S_alpha_direct: q | c");
    auto chi = chars::quadratic_character(q);
    expsums::KloostermanEngine eng;
    const i64 cut = 8 * q + 30;
    std::vector<double> chitab(cut + 1);
    for (i64 n = 0; n <= cut; ++n) chitab[n] = chi(n).real();
    // V tables
    std::vector<cplx> V1(cut + 1);
    for (i64 n = 1; n <= cut; ++n)
        V1[n] = specfun::V_weight_fast(alpha.a1, static_cast<double>(n) / q, kappa);
    std::vector<std::vector<cplx>> P23(cut + 1, std::vector<cplx>(cut + 1));
    for (i64 a = 1; a <= cut; ++a)
        for (i64 b = 1; b <= cut; ++b) {
            cplx dsum{0.0, 0.0};
            for (i64 d = 1; d <= 300; ++d) {
                if (gcd(d, q) != 1) continue;
                cplx t = specfun::V_weight_fast(alpha.a2, static_cast<double>(d * a) / q, kappa) *
                         specfun::V_weight_fast(alpha.a3, static_cast<double>(d * b) / q, kappa) /
                         static_cast<double>(d);
                dsum += t;
                if (std::abs(t) < 1e-15 && d > 2) break;
            }
            P23[a][b] = dsum;
        }
    cplx acc{0.0, 0.0};
    for (i64 n1 = 1; n1 <= cut; ++n1) {
        if (chitab[n1] == 0.0 || V1[n1] == cplx(0.0, 0.0)) continue;
        for (i64 n2 = 1; n2 <= cut; ++n2) {
            if (chitab[n2] == 0.0) continue;
            for (i64 n3 = 1; n3 <= cut; ++n3) {
                if (chitab[n3] == 0.0) continue;
                cplx v = V1[n1] * P23[n2][n3];
                if (v == cplx(0.0, 0.0)) continue;
                double x = static_cast<double>(n1) * n2 * n3;
                double s = eng.S(n1, n2 * n3, c);
                if (s == 0.0) continue;
                acc += chitab[n1] * chitab[n2] * chitab[n3] * s *
                       specfun::J_kernel(kappa, 2.0 * std::sqrt(x) / c) * v;
            }
        }
    }
    return acc;
}

cplx S_alpha_poisson(i64 c, const ShiftTriple& alpha, i64 q, int kappa, i64 m_cut,
                     int threads) {
    if (std::abs(alpha.a1.imag()) + std::abs(alpha.a2.imag()) + std::abs(alpha.a3.imag()) > 0.0)
        throw std::invalid_argument("S_alpha_poisson: real shifts required (conjugate shortcut)");
    const i64 r = c / q;
    // enumerate half of the m-box (lexicographically positive), pair with -m
    std::vector<std::array<i64, 3>> box;
    for (i64 m1 = -m_cut; m1 <= m_cut; ++m1)
        for (i64 m2 = -m_cut; m2 <= m_cut; ++m2)
            for (i64 m3 = -m_cut; m3 <= m_cut; ++m3) {
                if (m1 == 0 && m2 == 0 && m3 == 0) continue;
                if (std::tuple(m1, m2, m3) < std::tuple(-m1, -m2, -m3)) continue;
                box.push_back({m1, m2, m3});
            }
    std::vector<cplx> vals(box.size());
    auto work = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            auto [m1, m2, m3] = box[i];
            expsums::GFactorizationInput in(m1, m2, m3, r, q);
            cplx g = expsums::G_factored(in);
            if (std::abs(g) < 1e-14) {
                vals[i] = {0.0, 0.0};
                continue;
            }
            wcheck::DirectOptions dop;
            dop.gl_order = 5;
            dop.gl_order_coarse = 4;
            dop.target_tol = 1e-5;
            dop.refine_once = false;
            auto w = wcheck::W_check_direct(m1, m2, m3, c, alpha.a1, alpha.a2, alpha.a3, q,
                                            kappa, dop);
            vals[i] = g * w.value;
        }
    };
    if (threads <= 1) {
        work(0, box.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (box.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            size_t lo = t * chunk, hi = std::min(box.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    // m = 0 term
    expsums::GFactorizationInput in0(0, 0, 0, r, q);
    cplx g0 = expsums::G_factored(in0);
    cplx acc{0.0, 0.0};
    if (std::abs(g0) > 1e-14) {
        wcheck::DirectOptions dop;
        dop.gl_order = 5;
        dop.refine_once = false;
        acc += g0 * wcheck::W_check_direct(0, 0, 0, c, alpha.a1, alpha.a2, alpha.a3, q, kappa,
                                           dop).value;
    }
    for (auto& v : vals) acc += 2.0 * v.real();  // m and -m are conjugate
    return acc;
}

cplx delta_via_petersson(const ShiftTriple& alpha, i64 q, int kappa, i64 trunc_c) {
    auto chi = chars::quadratic_character(q);
    const i64 cut = 8 * q + 30;
    std::vector<double> chitab(cut * cut + 1, 0.0);
    for (i64 n = 0; n <= cut; ++n) chitab[n] = chi(n).real();
    std::vector<cplx> V1(cut + 1), V2(cut + 1), V3(cut + 1);
    for (i64 n = 1; n <= cut; ++n) {
        V1[n] = specfun::V_weight_fast(alpha.a1, static_cast<double>(n) / q, kappa);
        V2[n] = specfun::V_weight_fast(alpha.a2, static_cast<double>(n) / q, kappa);
        V3[n] = specfun::V_weight_fast(alpha.a3, static_cast<double>(n) / q, kappa);
    }
    // gather the (n1, M) pairs needed by the Hecke-reduced Petersson right side
    std::vector<std::pair<i64, i64>> pairs;
    {
        std::vector<std::vector<bool>> seen(cut + 1);
        for (auto& s : seen) s.assign(cut * cut + 1, false);
        for (i64 n1 = 1; n1 <= cut; ++n1) {
            if (chitab[n1] == 0.0) continue;
            for (i64 n2 = 1; n2 <= cut; ++n2)
                for (i64 n3 = n2; n3 <= cut; ++n3) {
                    if (chitab[n2] == 0.0 || chitab[n3] == 0.0) continue;
                    for (i64 d = 1; d <= n2; ++d) {
                        if (n2 % d != 0 || n3 % d != 0 || gcd(d, q) != 1) continue;
                        i64 M = n2 * n3 / (d * d);
                        if (!seen[n1][M]) {
                            seen[n1][M] = true;
                            pairs.emplace_back(n1, M);
                        }
                    }
                }
        }
    }
    auto ks = forms::petersson_c_sums(q, kappa, trunc_c, pairs);
    std::map<std::pair<i64, i64>, double> ksum;
    for (size_t i = 0; i < pairs.size(); ++i) ksum[pairs[i]] = ks[i];

    cplx acc{0.0, 0.0};
    for (i64 n1 = 1; n1 <= cut; ++n1) {
        if (chitab[n1] == 0.0) continue;
        cplx w1 = chitab[n1] / std::sqrt(static_cast<double>(n1)) * V1[n1];
        for (i64 n2 = 1; n2 <= cut; ++n2) {
            if (chitab[n2] == 0.0) continue;
            cplx w2 = chitab[n2] / std::sqrt(static_cast<double>(n2)) * V2[n2];
            for (i64 n3 = 1; n3 <= cut; ++n3) {
                if (chitab[n3] == 0.0) continue;
                cplx w3 = chitab[n3] / std::sqrt(static_cast<double>(n3)) * V3[n3];
                double pet = 0.0;
                for (i64 d = 1; d <= std::min(n2, n3); ++d) {
                    if (n2 % d != 0 || n3 % d != 0 || gcd(d, q) != 1) continue;
                    i64 M = n2 * n3 / (d * d);
                    pet += (n1 == M ? 1.0 : 0.0) + ksum[{std::min(n1, M), std::max(n1, M)}];
                }
                acc += w1 * w2 * w3 * pet;
            }
        }
    }
    return acc;
}

std::vector<MomentReport> residual_experiment(const std::vector<forms::Newform>& all_forms,
                                              const std::vector<i64>& q_list, int kappa,
                                              const ShiftTriple& alpha, i64 trunc_factor) {
    std::vector<MomentReport> out;
    for (i64 q : q_list) {
        std::vector<forms::Newform> fams;
        for (auto& f : all_forms)
            if (f.level == q && f.weight == kappa) fams.push_back(f);
        if (fams.empty())
            throw std::runtime_error("residual_experiment: no forms for level " +
                                     std::to_string(q));
        if (!forms::sign_condition_holds(q, kappa))
            throw std::runtime_error("residual_experiment: sign condition fails at q = " +
                                     std::to_string(q));
        auto fam = forms::harmonic_weights(fams, trunc_factor * q);
        auto chi = chars::quadratic_character(q);
        MomentReport r;
        r.q = q;
        r.kappa = kappa;
        r.alpha = alpha;
        r.spectral = forms::spectral_cubic_moment(fam, chi, alpha);
        r.mt_sum = mt_sigma_sum(alpha, q, kappa);
        r.residual = r.spectral - r.mt_sum;
        int logpow = (kappa == 2) ? 5 : 4;
        r.envelope = std::pow(std::log(static_cast<double>(q)), logpow);
        r.envelope_ratio = std::abs(r.residual) / r.envelope;
        r.petersson_residual = fam.lsq_residual;
        out.push_back(r);
    }
    return out;
}

std::vector<ScalingRow> subconvexity_scaling(const std::vector<forms::Newform>& all_forms,
                                             const std::vector<i64>& q_list, int kappa) {
    std::vector<ScalingRow> out;
    for (i64 q : q_list) {
        std::vector<const forms::Newform*> fams;
        for (auto& f : all_forms)
            if (f.level == q && f.weight == kappa) fams.push_back(&f);
        if (fams.empty()) continue;
        auto chi = chars::quadratic_character(q);
        ScalingRow row;
        row.q = q;
        row.max_L = -1e300;
        row.min_L = 1e300;
        for (auto* f : fams) {
            double L = forms::central_L_value(*f, chi, cplx(0.0, 0.0)).real();
            row.max_L = std::max(row.max_L, L);
            row.min_L = std::min(row.min_L, L);
        }
        double lq = std::log(static_cast<double>(q));
        row.ratio = row.max_L / (std::pow(static_cast<double>(q), 1.0 / 3.0) *
                                 std::pow(lq, 7.0 / 3.0));
        out.push_back(row);
    }
    return out;
}

double fitted_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fitted_exponent: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (y[i] <= 0.0) continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fitted_exponent: insufficient positive data");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace momentlab::moment
