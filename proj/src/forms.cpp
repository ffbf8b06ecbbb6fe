#include "momentlab/forms.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <eigen3/Eigen/Dense>
#include "json.hpp"

#include "momentlab/lfun.hpp"

namespace momentlab::forms {

using numth::gcd;
using specfun::PI;

std::vector<Newform> ingest_newforms(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest_newforms: cannot open " + path);
    std::vector<Newform> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("ingest_newforms: malformed JSON at line " +
                                     std::to_string(lineno) + ": " + e.what());
        }
        Newform f;
        f.level = j.at("level").get<i64>();
        f.weight = j.at("weight").get<int>();
        f.label = j.at("label").get<std::string>();
        for (auto& v : j.at("an")) f.a.push_back(v.get<double>());
        if (f.level < 1 || f.weight < 2 || f.weight % 2 != 0)
            throw std::runtime_error("ingest_newforms: bad level/weight in " + f.label);
        if (f.a.empty() || f.a[0] != 1.0)
            throw std::runtime_error("ingest_newforms: a(1) != 1 in " + f.label);
        const i64 N = f.ncoeff();
        f.lambda.resize(N);
        for (i64 n = 1; n <= N; ++n)
            f.lambda[n - 1] = f.a[n - 1] / std::pow(static_cast<double>(n), (f.weight - 1) / 2.0);
        // Deligne bound away from the level
        for (i64 n = 1; n <= N; ++n) {
            if (gcd(n, f.level) != 1) continue;
            double dn = static_cast<double>(numth::divisors(n).size());
            if (std::abs(f.lambda[n - 1]) > dn + 1e-9)
                throw std::runtime_error("ingest_newforms: Deligne bound fails in " + f.label +
                                         " at n = " + std::to_string(n));
        }
        // Hecke relations: lambda(m)lambda(n) = sum_{d | (m,n), (d,q)=1} lambda(mn/d^2)
        for (i64 m = 2; m * m <= N; ++m)
            for (i64 n = m; m * n <= N; ++n) {
                double lhs = f.lambda[m - 1] * f.lambda[n - 1];
                double rhs = 0.0;
                for (i64 d = 1; d <= m; ++d)
                    if (m % d == 0 && n % d == 0 && gcd(d, f.level) == 1)
                        rhs += f.lambda[m * n / (d * d) - 1];
                if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(lhs)) + 1e-9)
                    throw std::runtime_error("ingest_newforms: Hecke relation fails in " + f.label +
                                             " at (m,n) = (" + std::to_string(m) + "," +
                                             std::to_string(n) + ")");
            }
        out.push_back(std::move(f));
    }
    return out;
}

namespace {

// sum over c = 0 mod q, c <= trunc of S(m,n,c)/c^2 * J(2 sqrt(mn)/c) for a
// list of (m,n) pairs, using the fast Kloosterman engine.
struct PairSums {
    std::vector<double> kloosterman_part;
    double tail_estimate = 0.0;
};

PairSums kloosterman_c_sums(i64 q, int kappa, i64 trunc,
                            const std::vector<std::pair<i64, i64>>& pairs) {
    expsums::KloostermanEngine eng;
    PairSums out;
    out.kloosterman_part.assign(pairs.size(), 0.0);
    for (i64 c = q; c <= trunc; c += q) {
        double c2 = static_cast<double>(c) * static_cast<double>(c);
        for (size_t i = 0; i < pairs.size(); ++i) {
            auto [m, n] = pairs[i];
            double s = eng.S(m, n, c);
            if (s == 0.0) continue;
            double x = 2.0 * std::sqrt(static_cast<double>(m) * n) / static_cast<double>(c);
            out.kloosterman_part[i] += std::sqrt(static_cast<double>(m) * n) * s / c2 *
                                       specfun::J_kernel(kappa, x).real();
        }
    }
    // tail: |S| <= d(c) sqrt(gcd) sqrt(c), |J| bounded near 0; integral comparison
    double worst = 0.0;
    for (auto& [m, n] : pairs) {
        double g = static_cast<double>(gcd(m, n));
        double jb = std::abs(specfun::J_kernel(kappa, 2.0 * std::sqrt(static_cast<double>(m) * n) /
                                                          static_cast<double>(trunc)));
        double amp = std::sqrt(static_cast<double>(m) * n * g) * jb;
        worst = std::max(worst, amp);
    }
    double T = static_cast<double>(trunc);
    out.tail_estimate = worst * 8.0 * std::log(T) / (std::sqrt(T) * static_cast<double>(q));
    return out;
}

}  // namespace

std::vector<double> petersson_c_sums(i64 q, int kappa, i64 trunc,
                                     const std::vector<std::pair<i64, i64>>& pairs) {
    return kloosterman_c_sums(q, kappa, trunc, pairs).kloosterman_part;
}

PeterssonTable petersson_rhs_table(i64 q, int kappa, i64 mmax, i64 trunc) {
    PeterssonTable t;
    t.q = q;
    t.kappa = kappa;
    t.mmax = mmax;
    t.trunc = trunc;
    std::vector<std::pair<i64, i64>> pairs;
    for (i64 m = 1; m <= mmax; ++m)
        for (i64 n = m; n <= mmax; ++n) pairs.emplace_back(m, n);
    auto sums = kloosterman_c_sums(q, kappa, trunc, pairs);
    t.tail_estimate = sums.tail_estimate;
    t.rhs.assign(mmax * mmax, 0.0);
    for (size_t i = 0; i < pairs.size(); ++i) {
        auto [m, n] = pairs[i];
        double v = (m == n ? 1.0 : 0.0) + sums.kloosterman_part[i];
        t.rhs[(m - 1) * mmax + (n - 1)] = v;
        t.rhs[(n - 1) * mmax + (m - 1)] = v;
    }
    return t;
}

HarmonicFamily harmonic_weights(std::vector<Newform> forms, i64 trunc) {
    if (forms.empty()) throw std::invalid_argument("harmonic_weights: empty family");
    const i64 q = forms[0].level;
    const int kappa = forms[0].weight;
    for (auto& f : forms)
        if (f.level != q || f.weight != kappa)
            throw std::invalid_argument("harmonic_weights: mixed levels/weights");
    if (forms.size() > 25) throw std::invalid_argument("harmonic_weights: dimension > 25");
    const i64 mmax = 12;
    auto table = petersson_rhs_table(q, kappa, mmax, trunc);

    std::vector<std::pair<i64, i64>> grid;
    for (i64 m = 1; m <= mmax; ++m)
        for (i64 n = 1; n <= mmax; ++n)
            if (gcd(m * n, q) == 1) grid.emplace_back(m, n);
    const size_t rows = grid.size(), cols = forms.size();
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (size_t r = 0; r < rows; ++r) {
        auto [m, n] = grid[r];
        for (size_t f = 0; f < cols; ++f)
            A(r, f) = forms[f].lambda[m - 1] * forms[f].lambda[n - 1];
        b(r) = table(m, n);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) / svd.singularValues()(cols - 1);
    if (cond > 1e8) throw std::runtime_error("harmonic_weights: ill-conditioned fit");
    Eigen::VectorXd w = svd.solve(b);
    double resid = (A * w - b).cwiseAbs().maxCoeff();
    if (resid > 1e-4)
        throw std::runtime_error("harmonic_weights: Petersson residual " + std::to_string(resid) +
                                 " exceeds 1e-4");
    HarmonicFamily fam;
    fam.level = q;
    fam.weight = kappa;
    fam.forms = std::move(forms);
    fam.omega.assign(w.data(), w.data() + cols);
    for (double x : fam.omega)
        if (x <= 0.0) throw std::runtime_error("harmonic_weights: nonpositive weight");
    fam.lsq_residual = resid;
    fam.trunc = trunc;
    fam.tail_estimate = table.tail_estimate;
    return fam;
}

bool sign_condition_holds(i64 q, int kappa) {
    int ik = (kappa % 4 == 0) ? 1 : -1;
    return ik == numth::jacobi_symbol(-1, q);
}

cplx L_infinity(cplx s, i64 q, int kappa) {
    return std::exp((s - 0.5) * std::log(static_cast<double>(q) / (2.0 * PI)) +
                    specfun::log_gamma(s + (kappa - 1) / 2.0));
}

cplx completed_central_value(const Newform& f, const chars::DirichletCharacter& chi,
                             cplx alpha) {
    const i64 q = f.level;
    if (chi.modulus() != q)
        throw std::invalid_argument("completed_central_value: chi must have modulus q");
    if (!sign_condition_holds(q, f.weight))
        throw std::invalid_argument("completed_central_value: sign condition i^kappa = chi(-1) fails");
    if (std::abs(alpha.real()) >= 0.5)
        throw std::invalid_argument("completed_central_value: |Re alpha| < 1/2 required");
    auto half = [&](cplx al) {
        cplx acc{0.0, 0.0};
        for (i64 n = 1; n <= f.ncoeff(); ++n) {
            cplx chin = chi(n);
            if (chin == cplx(0.0, 0.0)) continue;
            cplx v = specfun::V_weight_fast(al, static_cast<double>(n) / static_cast<double>(q),
                                            f.weight);
            if (n > 4 * q && std::abs(v) < 1e-13) return acc;
            acc += f.lambda[n - 1] * chin / std::sqrt(static_cast<double>(n)) * v;
        }
        // reached the end of the coefficient list: check the next weight
        cplx vnext = specfun::V_weight_fast(
            al, static_cast<double>(f.ncoeff() + 1) / static_cast<double>(q), f.weight);
        if (std::abs(vnext) > 1e-12)
            throw std::runtime_error("completed_central_value: coefficient list too short for " +
                                     f.label);
        return acc;
    };
    return half(alpha) + half(-alpha);
}

cplx central_L_value(const Newform& f, const chars::DirichletCharacter& chi, cplx alpha) {
    return completed_central_value(f, chi, alpha) /
           L_infinity(0.5 + alpha, f.level, f.weight);
}

cplx spectral_cubic_moment(const HarmonicFamily& family,
                           const chars::DirichletCharacter& chi, const ShiftTriple& alpha) {
    cplx acc{0.0, 0.0};
    for (size_t i = 0; i < family.forms.size(); ++i) {
        const auto& f = family.forms[i];
        acc += family.omega[i] * completed_central_value(f, chi, alpha.a1) *
               completed_central_value(f, chi, alpha.a2) *
               completed_central_value(f, chi, alpha.a3);
    }
    return acc;
}

TriplePair petersson_triple(const HarmonicFamily& family, i64 n1, i64 n2, i64 n3) {
    const i64 q = family.level;
    if (gcd(n1 * n2 * n3, q) != 1)
        throw std::invalid_argument("petersson_triple: (n1 n2 n3, q) = 1 required");
    TriplePair out;
    cplx eig{0.0, 0.0};
    for (size_t i = 0; i < family.forms.size(); ++i) {
        const auto& l = family.forms[i].lambda;
        eig += family.omega[i] * l[n1 - 1] * l[n2 - 1] * l[n3 - 1];
    }
    out.eigen_side = eig;
    // Hecke reduction: lambda(n2) lambda(n3) = sum_{d | (n2,n3), (d,q)=1} lambda(n2 n3 / d^2)
    std::vector<std::pair<i64, i64>> pairs;
    std::vector<i64> ms;
    for (i64 d = 1; d <= std::min(n2, n3); ++d)
        if (n2 % d == 0 && n3 % d == 0 && gcd(d, q) == 1) {
            ms.push_back(n2 * n3 / (d * d));
            pairs.emplace_back(n1, n2 * n3 / (d * d));
        }
    auto sums = kloosterman_c_sums(q, family.weight, family.trunc, pairs);
    double acc = 0.0;
    for (size_t i = 0; i < ms.size(); ++i)
        acc += (n1 == ms[i] ? 1.0 : 0.0) + sums.kloosterman_part[i];
    out.petersson_side = cplx(acc, 0.0);
    return out;
}

}  // namespace momentlab::forms
