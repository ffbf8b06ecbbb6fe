#include "momentlab/characters.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "momentlab/specfun.hpp"

namespace momentlab::chars {

using numth::mod_norm;

namespace {

void require_odd_squarefree(i64 q) {
    if (q < 1 || q % 2 == 0 || !numth::is_squarefree(q))
        throw std::invalid_argument("modulus must be odd squarefree and >= 1");
}

}  // namespace

std::shared_ptr<const GroupTables> GroupTables::get(i64 q) {
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<const GroupTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;

    require_odd_squarefree(q);
    auto t = std::make_shared<GroupTables>();
    t->q = q;
    for (auto& [p, e] : numth::factorize(q).factors) t->primes.push_back(p);
    for (i64 p : t->primes) {
        i64 g = numth::primitive_root(p);
        t->roots.push_back(g);
        std::vector<int> dl(p, -1);
        i64 x = 1;
        for (i64 k = 0; k < p - 1; ++k) {
            dl[x] = static_cast<int>(k);
            x = numth::mul_mod(x, g, p);
        }
        t->dlog.push_back(std::move(dl));
    }
    cache[q] = t;
    return t;
}

DirichletCharacter::DirichletCharacter(i64 q) : DirichletCharacter(q, std::vector<i64>(numth::nu(q), 0)) {}

DirichletCharacter::DirichletCharacter(i64 q, std::vector<i64> component_exponents)
    : q_(q), exps_(std::move(component_exponents)), tab_(GroupTables::get(q)) {
    if (exps_.size() != tab_->primes.size())
        throw std::invalid_argument("DirichletCharacter: one exponent per prime factor required");
    i64 parity_sum = 0;
    for (size_t i = 0; i < exps_.size(); ++i) {
        i64 ord = tab_->primes[i] - 1;
        exps_[i] = mod_norm(exps_[i], ord);
        parity_sum += exps_[i];  // ind(-1) = (p-1)/2, so psi_p(-1) = (-1)^{k_p}
    }
    parity_ = static_cast<int>(parity_sum % 2);
}

bool DirichletCharacter::is_trivial() const {
    for (i64 e : exps_)
        if (e != 0) return false;
    return true;
}

bool DirichletCharacter::is_primitive() const {
    for (i64 e : exps_)
        if (e == 0) return false;
    return true;
}

bool DirichletCharacter::is_real() const {
    for (size_t i = 0; i < exps_.size(); ++i) {
        i64 ord = tab_->primes[i] - 1;
        if (mod_norm(2 * exps_[i], ord) != 0) return false;
    }
    return true;
}

cplx DirichletCharacter::operator()(i64 n) const {
    if (q_ == 1) return {1.0, 0.0};
    n = mod_norm(n, q_);
    // angle = sum_i k_i * ind_i(n) / (p_i - 1), as a fraction of a full turn
    double angle = 0.0;
    for (size_t i = 0; i < tab_->primes.size(); ++i) {
        i64 p = tab_->primes[i];
        int ind = tab_->dlog[i][n % p];
        if (ind < 0) return {0.0, 0.0};
        angle += static_cast<double>(mod_norm(exps_[i] * ind, p - 1)) / static_cast<double>(p - 1);
    }
    return specfun::e_of(angle);
}

DirichletCharacter DirichletCharacter::conjugate() const {
    std::vector<i64> e(exps_.size());
    for (size_t i = 0; i < exps_.size(); ++i) e[i] = mod_norm(-exps_[i], tab_->primes[i] - 1);
    return {q_, std::move(e)};
}

i64 DirichletCharacter::order() const {
    i64 ord = 1;
    for (size_t i = 0; i < exps_.size(); ++i) {
        i64 m = tab_->primes[i] - 1;
        i64 g = numth::gcd(exps_[i], m);
        i64 comp_ord = (exps_[i] == 0) ? 1 : m / g;
        ord = ord / numth::gcd(ord, comp_ord) * comp_ord;
    }
    return ord;
}

std::vector<DirichletCharacter> character_group(i64 q) {
    require_odd_squarefree(q);
    auto tab = GroupTables::get(q);
    std::vector<DirichletCharacter> out;
    std::vector<i64> e(tab->primes.size(), 0);
    while (true) {
        out.emplace_back(q, e);
        size_t i = 0;
        for (; i < e.size(); ++i) {
            if (++e[i] < tab->primes[i] - 1) break;
            e[i] = 0;
        }
        if (i == e.size()) break;
        if (e.empty()) break;
    }
    return out;
}

DirichletCharacter quadratic_character(i64 q) {
    require_odd_squarefree(q);
    auto tab = GroupTables::get(q);
    std::vector<i64> e(tab->primes.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = (tab->primes[i] - 1) / 2;
    return {q, std::move(e)};
}

std::pair<i64, DirichletCharacter> primitive_core(const DirichletCharacter& psi) {
    auto tab = GroupTables::get(psi.modulus());
    i64 cond = 1;
    std::vector<i64> e;
    for (size_t i = 0; i < tab->primes.size(); ++i)
        if (psi.exponents()[i] != 0) {
            cond *= tab->primes[i];
            e.push_back(psi.exponents()[i]);
        }
    return {cond, DirichletCharacter(cond, std::move(e))};
}

cplx gauss_sum(const DirichletCharacter& psi) {
    i64 q = psi.modulus();
    if (q == 1) return {1.0, 0.0};
    cplx acc{0.0, 0.0}, comp{0.0, 0.0};
    for (i64 a = 1; a < q; ++a) {
        cplx v = psi(a);
        if (v == cplx(0.0, 0.0)) continue;
        cplx y = v * specfun::e_of(static_cast<double>(a) / static_cast<double>(q)) - comp;
        cplx s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    return acc;
}

cplx root_number(const DirichletCharacter& psi) {
    if (!psi.is_primitive())
        throw std::invalid_argument("root_number: character must be primitive");
    i64 l = psi.modulus();
    cplx ia = (psi.parity() == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    return gauss_sum(psi) / (ia * std::sqrt(static_cast<double>(l)));
}

cplx gamma_factor_X(i64 conductor, cplx u, int parity) {
    if (parity != 0 && parity != 1) throw std::invalid_argument("gamma_factor_X: parity in {0,1}");
    cplx znum = (0.5 - u + static_cast<double>(parity)) / 2.0;
    cplx zden = (0.5 + u + static_cast<double>(parity)) / 2.0;
    for (cplx z : {znum, zden}) {
        if (std::abs(z.imag()) < 1e-8) {
            double r = z.real();
            if (r < 0.5 && std::abs(r - std::round(r)) < 1e-8 && std::round(r) <= 0.0)
                throw std::domain_error("gamma_factor_X: within 1e-8 of a gamma pole");
        }
    }
    double lp = std::log(static_cast<double>(conductor) / specfun::PI);
    return std::exp(-u * lp + specfun::log_gamma(znum) - specfun::log_gamma(zden));
}

}  // namespace momentlab::chars
