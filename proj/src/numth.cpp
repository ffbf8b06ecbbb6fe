#include "momentlab/numth.hpp"

#include <array>
#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace momentlab::numth {

Factorization factorize(i64 n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    Factorization f;
    f.n = n;
    i64 m = n;
    auto strip = [&](i64 p) {
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        if (e > 0) f.factors.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    // 6k +- 1 wheel
    for (i64 p = 5; p <= m / p; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (m > 1) f.factors.emplace_back(m, 1);
    return f;
}

int moebius(i64 n) {
    auto f = factorize(n);
    for (auto& [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

i64 euler_phi(i64 n) {
    auto f = factorize(n);
    i64 phi = 1;
    for (auto& [p, e] : f.factors) {
        phi *= p - 1;
        for (int i = 1; i < e; ++i) phi *= p;
    }
    return phi;
}

int nu(i64 n) { return static_cast<int>(factorize(n).factors.size()); }

bool is_squarefree(i64 n) {
    auto f = factorize(n);
    for (auto& [p, e] : f.factors)
        if (e > 1) return false;
    return true;
}

int jacobi_symbol(i64 a, i64 n) {
    if (n <= 0 || n % 2 == 0) throw std::invalid_argument("jacobi_symbol: n must be odd positive");
    a = mod_norm(a, n);
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return (n == 1) ? result : 0;
}

std::vector<std::array<i64, 3>> divisor_pairs(i64 q) {
    if (q < 1 || !is_squarefree(q))
        throw std::invalid_argument("divisor_pairs: q must be positive squarefree");
    auto f = factorize(q);
    std::vector<std::array<i64, 3>> out;
    out.push_back({1, 1, 1});
    for (auto& [p, e] : f.factors) {
        std::vector<std::array<i64, 3>> next;
        next.reserve(out.size() * 3);
        for (auto& t : out)
            for (int slot = 0; slot < 3; ++slot) {
                auto u = t;
                u[slot] *= p;
                next.push_back(u);
            }
        out = std::move(next);
    }
    return out;
}

std::vector<i64> divisors(i64 n) {
    auto f = factorize(n);
    std::vector<i64> out{1};
    for (auto& [p, e] : f.factors) {
        size_t sz = out.size();
        i64 pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

i64 gcd(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

i64 mod_norm(i64 x, i64 m) {
    i64 r = x % m;
    return r < 0 ? r + m : r;
}

i64 mul_mod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<__int128>(a) * b % m);
}

i64 pow_mod(i64 a, i64 e, i64 m) {
    a = mod_norm(a, m);
    i64 r = 1 % m;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 inv_mod(i64 a, i64 m) {
    a = mod_norm(a, m);
    i64 old_r = a, r = m, old_s = 1, s = 0;
    while (r != 0) {
        i64 qt = old_r / r;
        old_r -= qt * r;
        std::swap(old_r, r);
        old_s -= qt * s;
        std::swap(old_s, s);
    }
    if (old_r != 1) throw std::invalid_argument("inv_mod: arguments not coprime");
    return mod_norm(old_s, m);
}

std::vector<i64> unit_inverses(i64 m) {
    std::vector<i64> units;
    units.reserve(m);
    for (i64 a = 1; a < m; ++a)
        if (std::gcd(a, m) == 1) units.push_back(a);
    if (m == 1) units.push_back(0);  // degenerate; callers treat mod 1 specially
    std::vector<i64> prefix(units.size());
    i64 acc = 1;
    for (size_t i = 0; i < units.size(); ++i) {
        prefix[i] = acc;
        acc = mul_mod(acc, units[i], m);
    }
    i64 inv_acc = (m == 1) ? 0 : inv_mod(acc, m);
    std::vector<i64> inv(m, 0);
    for (size_t i = units.size(); i-- > 0;) {
        inv[units[i]] = mul_mod(inv_acc, prefix[i], m);
        inv_acc = mul_mod(inv_acc, units[i], m);
    }
    return inv;
}

std::vector<i64> primes_up_to(i64 limit) {
    std::vector<i64> ps;
    if (limit < 2) return ps;
    std::vector<bool> sieve(limit + 1, true);
    for (i64 p = 2; p <= limit; ++p) {
        if (!sieve[p]) continue;
        ps.push_back(p);
        for (i64 k = p * p; k <= limit; k += p) sieve[k] = false;
    }
    return ps;
}

i64 primitive_root(i64 p) {
    if (p == 2) return 1;
    auto f = factorize(p - 1);
    for (i64 g = 2; g < p; ++g) {
        bool ok = true;
        for (auto& [pf, e] : f.factors)
            if (pow_mod(g, (p - 1) / pf, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found (p not prime?)");
}

i64 ramanujan_exact(i64 q, i64 m) {
    i64 g = gcd(q, m);
    i64 s = 0;
    for (i64 d : divisors(g)) s += d * moebius(q / d);
    return s;
}

}  // namespace momentlab::numth
