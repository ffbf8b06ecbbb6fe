#include "momentlab/specfun.hpp"

#include <cmath>
#include <vector>
#include <stdexcept>
#include <numeric>

namespace momentlab::specfun {

namespace {

// Lanczos approximation, g = 7, 9 coefficients.
constexpr double lanczos_g = 7.0;
constexpr double lanczos_p[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

cplx log_gamma_core(cplx z) {
    // Re(z) >= 0.5 assumed
    z -= 1.0;
    cplx x = lanczos_p[0];
    for (int i = 1; i < 9; ++i) x += lanczos_p[i] / (z + static_cast<double>(i));
    cplx t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx log_gamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw std::domain_error("log_gamma: pole at nonpositive integer");
    if (z.real() < 0.5) {
        // reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        cplx log_sin = std::log(std::sin(PI * z));
        // keep the branch continuous off the real axis by unwinding sin's growth
        // (principal values suffice for the |Im z| <= ~300 range used here)
        return std::log(cplx(PI)) - log_sin - log_gamma_core(1.0 - z);
    }
    return log_gamma_core(z);
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx upper_gamma(cplx a, double y) {
    if (y <= 0.0) throw std::domain_error("upper_gamma: requires y > 0");
    if (y > 700.0) return {0.0, 0.0};  // below double underflow after e^{-y}
    if (y >= std::abs(a) + 6.0 || y >= 30.0) {
        // continued fraction (modified Lentz):
        // Gamma(a,y) = e^{-y} y^a / (y+1-a - 1(1-a)/(y+3-a - 2(2-a)/(...)))
        const double tiny = 1e-300;
        cplx b = y + 1.0 - a;
        cplx c = 1.0 / tiny, d = 1.0 / b, h = d;
        for (int i = 1; i <= 300; ++i) {
            cplx an = -static_cast<double>(i) * (static_cast<double>(i) - a);
            b += 2.0;
            d = an * d + b;
            if (std::abs(d) < tiny) d = tiny;
            c = b + an / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            cplx del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < 1e-16) break;
        }
        return std::exp(-y + a * std::log(y)) * h;
    }
    // series for the lower incomplete gamma:
    // gamma(a,y) = y^a e^{-y} sum_{n>=0} y^n / (a (a+1) ... (a+n))
    cplx sum = 1.0 / a, term = sum;
    for (int n = 1; n <= 500; ++n) {
        term *= y / (a + static_cast<double>(n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    cplx lower = std::exp(-y + a * std::log(y)) * sum;
    return gamma(a) - lower;
}

// ---------------------------------------------------------------------------
// Bessel J

namespace {

double bessel_series(int nu, double x) {
    // long double accumulation controls cancellation up to x ~ 20
    long double h = x / 2.0L;
    long double term = 1.0L;
    for (int i = 1; i <= nu; ++i) term *= h / i;
    long double sum = term;
    long double h2 = h * h;
    for (int k = 1; k <= 200; ++k) {
        term *= -h2 / (static_cast<long double>(k) * (nu + k));
        sum += term;
        if (std::abs(static_cast<double>(term)) < 1e-20 * (1.0 + std::abs(static_cast<double>(sum))) && k > 4)
            break;
    }
    return static_cast<double>(sum);
}

// Hankel asymptotic expansion for nu in {0,1}, x > 18.
double bessel_asymptotic01(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double eightx = 8.0 * x;
    // P: even k, Q: odd k
    double prev = 1e300;
    for (int k = 1; k <= 20; ++k) {
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * eightx);
        double mag = std::abs(term);
        if (mag > prev) break;  // past the optimal truncation point
        prev = mag;
        if (k % 2 == 1) {
            q += (k % 4 == 1) ? term : -term;
        } else {
            p += (k % 4 == 2) ? -term : term;
        }
    }
    double w = x - nu * PI / 2.0 - PI / 4.0;
    return std::sqrt(2.0 / (PI * x)) * (p * std::cos(w) - q * std::sin(w));
}

double bessel_miller(int nu, double x) {
    // downward recurrence with Neumann-series normalization
    if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
    int m = nu + 20 + static_cast<int>(x);
    if (m % 2 == 1) ++m;
    long double jp = 0.0L, j = 1e-30L, norm = 0.0L, target = 0.0L;
    for (int k = m; k >= 1; --k) {
        long double jm = (2.0L * k / x) * j - jp;
        jp = j;
        j = jm;
        if (std::abs(static_cast<double>(j)) > 1e250) {
            j *= 1e-250L;
            jp *= 1e-250L;
            norm *= 1e-250L;
            target *= 1e-250L;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * j;  // J_{k-1}, even index
        if (k - 1 == nu) target = j;
    }
    norm += j;  // J_0 counted once
    if (nu == 0) target = j;
    return static_cast<double>(target / norm);
}

}  // namespace

double bessel_J(int nu, double x) {
    if (nu < 0 || nu > 20) throw std::invalid_argument("bessel_J: order must be in [0,20]");
    if (x < 0.0) throw std::invalid_argument("bessel_J: x must be >= 0");
    if (x <= 18.0) {
        if (x <= 2.0 || nu >= 12) return bessel_series(nu, x);
        return bessel_miller(nu, x);
    }
    if (nu <= 1) return bessel_asymptotic01(nu, x);
    if (nu <= 0.75 * x) {
        double jm = bessel_asymptotic01(0, x), j = bessel_asymptotic01(1, x);
        for (int k = 1; k < nu; ++k) {
            double jp = (2.0 * k / x) * j - jm;
            jm = j;
            j = jp;
        }
        return j;
    }
    return bessel_miller(nu, x);
}

cplx J_kernel(int kappa, double x) {
    if (kappa < 2 || kappa % 2 != 0) throw std::invalid_argument("J_kernel: kappa must be even >= 2");
    if (x < 0.0) throw std::invalid_argument("J_kernel: x must be >= 0");
    cplx ik = (kappa % 4 == 0) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    if (x < 0.5) {
        // J_{kappa-1}(2 pi x)/x expanded in powers of x; the x^{kappa-2} leading
        // term makes the x -> 0 limit explicit.
        long double term = 1.0L;
        for (int i = 1; i <= kappa - 1; ++i) term *= PI / i;  // pi^{kappa-1}/(kappa-1)!
        long double xldd = x;
        long double xpow = 1.0L;
        for (int i = 0; i < kappa - 2; ++i) xpow *= xldd;
        long double sum = 0.0L, t = term * xpow;
        long double px2 = PI * PI * xldd * xldd;
        for (int k = 0; k <= 60; ++k) {
            sum += t;
            t *= -px2 / (static_cast<long double>(k + 1) * (kappa + k));
            if (std::abs(static_cast<double>(t)) < 1e-20) break;
        }
        return 4.0 * PI * ik * static_cast<double>(sum);
    }
    return 4.0 * PI * ik * bessel_J(kappa - 1, 2.0 * PI * x) / x;
}

// ---------------------------------------------------------------------------
// Contour machinery

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p0 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

void contour_nodes(const ContourSpec& spec, std::vector<double>& t, std::vector<double>& w) {
    if (spec.height_cut <= 0.0 || spec.nodes_per_unit < 4)
        throw std::invalid_argument("ContourSpec: height_cut > 0 and nodes_per_unit >= 4 required");
    t.clear();
    w.clear();
    const double T = spec.height_cut;
    if (spec.scheme == ContourSpec::Scheme::trapezoid) {
        int n = static_cast<int>(std::ceil(2.0 * T * spec.nodes_per_unit));
        double h = 2.0 * T / n;
        for (int i = 0; i <= n; ++i) {
            t.push_back(-T + i * h);
            w.push_back((i == 0 || i == n) ? h / 2.0 : h);
        }
    } else {
        int panels = static_cast<int>(std::ceil(2.0 * T / spec.panel_height));
        double h = 2.0 * T / panels;
        std::vector<double> gx, gw;
        gauss_legendre(spec.nodes_per_unit, gx, gw);
        for (int p = 0; p < panels; ++p) {
            double a = -T + p * h, b = a + h;
            for (size_t j = 0; j < gx.size(); ++j) {
                t.push_back(0.5 * (a + b) + 0.5 * h * gx[j]);
                w.push_back(0.5 * h * gw[j]);
            }
        }
    }
    // fold in 1/(2 pi i) * i dt = dt / (2 pi)
    for (auto& ww : w) ww /= 2.0 * PI;
}

ValueWithError integrate_contour(const std::function<cplx(cplx)>& f, const ContourSpec& spec) {
    std::vector<double> t, w;
    contour_nodes(spec, t, w);
    cplx acc{0.0, 0.0}, comp{0.0, 0.0};
    for (size_t i = 0; i < t.size(); ++i) {
        cplx y = w[i] * f(cplx(spec.real_part, t[i])) - comp;
        cplx s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    // coarse value with half the nodes for the refinement delta
    ContourSpec half = spec;
    half.nodes_per_unit = std::max(4, spec.nodes_per_unit / 2);
    cplx acc2{0.0, 0.0};
    if (half.nodes_per_unit < spec.nodes_per_unit) {
        std::vector<double> t2, w2;
        contour_nodes(half, t2, w2);
        for (size_t i = 0; i < t2.size(); ++i) acc2 += w2[i] * f(cplx(spec.real_part, t2[i]));
    } else {
        acc2 = acc;
    }
    // tail estimate: fit exponential decay between |f| at T-2 and T
    double f_hi = 0.5 * (std::abs(f(cplx(spec.real_part, spec.height_cut))) +
                         std::abs(f(cplx(spec.real_part, -spec.height_cut))));
    double f_lo = 0.5 * (std::abs(f(cplx(spec.real_part, spec.height_cut - 2.0))) +
                         std::abs(f(cplx(spec.real_part, -(spec.height_cut - 2.0)))));
    double tail;
    if (f_hi <= 0.0) {
        tail = 0.0;
    } else if (f_lo > f_hi) {
        double rate = std::log(f_lo / f_hi) / 2.0;
        tail = f_hi / rate / (2.0 * PI);
    } else {
        tail = 10.0 * f_hi * spec.height_cut;  // no visible decay: flag a large tail
    }
    ValueWithError out;
    out.value = acc;
    out.abs_error_estimate = std::abs(acc - acc2) + tail;
    return out;
}

// ---------------------------------------------------------------------------
// V weights

ValueWithError V_weight(cplx alpha, double x, int kappa, const ContourSpec& spec) {
    if (x <= 0.0) throw std::invalid_argument("V_weight: x must be > 0");
    if (spec.real_part <= std::max(0.0, alpha.real()))
        throw std::invalid_argument("V_weight: contour must pass right of 0 and alpha");
    const double l2pix = std::log(2.0 * PI * x);
    // (2 pi x)^{-s} oscillates at |log(2 pi x)| radians per unit height; bump
    // the node density so small x stays resolved.
    ContourSpec dense = spec;
    dense.nodes_per_unit =
        std::max(spec.nodes_per_unit, 6 + static_cast<int>(std::ceil(1.5 * std::abs(l2pix))));
    auto f = [&](cplx s) {
        return std::exp(log_gamma(s + kappa / 2.0) - s * l2pix) / (s - alpha);
    };
    return integrate_contour(f, dense);
}

cplx V_weight_fast(cplx alpha, double x, int kappa) {
    if (x <= 0.0) throw std::invalid_argument("V_weight_fast: x must be > 0");
    double y = 2.0 * PI * x;
    if (y > 690.0) return {0.0, 0.0};
    return std::exp(-alpha * std::log(y)) * upper_gamma(alpha + kappa / 2.0, y);
}

cplx V_triple(double x1, double x2, double x3,
              cplx a1, cplx a2, cplx a3, std::int64_t q, int kappa) {
    cplx head = V_weight_fast(a1, x1, kappa);
    if (head == cplx(0.0, 0.0)) return head;
    cplx dsum{0.0, 0.0};
    int quiet = 0;
    for (std::int64_t d = 1; d <= 100000; ++d) {
        if (q > 1 && std::gcd(d, q) != 1) continue;
        cplx term = (1.0 / static_cast<double>(d)) *
                    V_weight_fast(a2, d * x2, kappa) * V_weight_fast(a3, d * x3, kappa);
        dsum += term;
        if (std::abs(term) < 1e-13 * (1.0 + std::abs(dsum))) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }
    return head * dsum;
}

}  // namespace momentlab::specfun
