#include "doctest.h"
#include "momentlab/numth.hpp"
#include "oracles.hpp"

#include <array>

using namespace momentlab;
using numth::i64;

TEST_CASE("factorize basics") {
    CHECK(numth::factorize(1).factors.empty());
    auto f15 = numth::factorize(15);
    REQUIRE(f15.factors.size() == 2);
    CHECK(f15.factors[0] == std::pair<i64, int>{3, 1});
    CHECK(f15.factors[1] == std::pair<i64, int>{5, 1});
    auto f2310 = numth::factorize(2310);
    std::vector<std::pair<i64, int>> expect{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {11, 1}};
    CHECK(f2310.factors == expect);
    CHECK_THROWS(numth::factorize(0));
}

TEST_CASE("factorize against trial-division oracle") {
    oracles::Rng rng(12345);
    for (int i = 0; i < 200; ++i) {
        i64 n = rng.uniform(1, 1000000);
        auto f = numth::factorize(n);
        auto expect = oracles::factor_trial(n);
        CHECK(std::vector(f.factors.begin(), f.factors.end()) == expect);
        i64 prod = 1;
        for (auto& [p, e] : f.factors)
            for (int j = 0; j < e; ++j) prod *= p;
        CHECK(prod == n);
    }
}

TEST_CASE("moebius and phi") {
    CHECK(numth::moebius(1) == 1);
    CHECK(numth::moebius(6) == 1);
    CHECK(numth::moebius(12) == 0);
    CHECK(numth::euler_phi(1) == 1);
    CHECK(numth::euler_phi(5) == 4);
    CHECK(numth::euler_phi(15) == 8);
    CHECK(numth::euler_phi(15) == oracles::phi_brute(15));
    CHECK(numth::nu(1) == 0);
    CHECK(numth::nu(15) == 2);
    CHECK(numth::nu(105) == 3);
}

TEST_CASE("divisor-sum identities for mu and phi up to 1e4") {
    for (i64 n = 1; n <= 10000; ++n) {
        i64 smu = 0, sphi = 0;
        for (i64 d : numth::divisors(n)) {
            smu += numth::moebius(d);
            sphi += numth::euler_phi(d);
        }
        REQUIRE(smu == (n == 1 ? 1 : 0));
        REQUIRE(sphi == n);
    }
}

TEST_CASE("jacobi symbol") {
    CHECK(numth::jacobi_symbol(1, 15) == 1);
    CHECK(numth::jacobi_symbol(2, 5) == -1);  // squares mod 5 are {1,4}
    CHECK(numth::jacobi_symbol(3, 35) == 1);  // (3|5)(3|7) = (-1)(-1)
    CHECK_THROWS(numth::jacobi_symbol(3, 4));

    // multiplicativity on random triples
    oracles::Rng rng(777);
    for (int i = 0; i < 500; ++i) {
        i64 n = 2 * rng.uniform(1, 200) + 1;
        i64 a = rng.uniform(-500, 500), b = rng.uniform(-500, 500);
        CHECK(numth::jacobi_symbol(a, n) * numth::jacobi_symbol(b, n) ==
              numth::jacobi_symbol(a * b, n));
    }
}

TEST_CASE("jacobi periodicity and total multiplicativity for squarefree odd n") {
    for (i64 n : {15, 21, 35, 105}) {
        for (i64 a = 1; a <= 3 * n; ++a) {
            REQUIRE(numth::jacobi_symbol(a, n) == numth::jacobi_symbol(a + n, n));
            REQUIRE(numth::jacobi_symbol(a, n) * numth::jacobi_symbol(a + 1, n) ==
                    numth::jacobi_symbol(a * (a + 1), n));
        }
    }
}

TEST_CASE("divisor_pairs") {
    auto t5 = numth::divisor_pairs(5);
    CHECK(t5.size() == 3);
    auto t15 = numth::divisor_pairs(15);
    CHECK(t15.size() == 9);
    auto t1 = numth::divisor_pairs(1);
    REQUIRE(t1.size() == 1);
    CHECK(t1[0] == std::array<i64, 3>{1, 1, 1});
    for (auto& t : t15) CHECK(t[0] * t[1] * t[2] == 15);
    // duplicate-free
    std::sort(t15.begin(), t15.end());
    CHECK(std::adjacent_find(t15.begin(), t15.end()) == t15.end());
    CHECK_THROWS(numth::divisor_pairs(12));
}

TEST_CASE("modular helpers") {
    CHECK(numth::inv_mod(3, 7) == 5);
    CHECK(numth::pow_mod(2, 10, 1000) == 24);
    auto inv = numth::unit_inverses(15);
    for (i64 a = 1; a < 15; ++a)
        if (numth::gcd(a, 15) == 1) CHECK(numth::mul_mod(a, inv[a], 15) == 1);
    CHECK(numth::primitive_root(7) == 3);
    CHECK(numth::ramanujan_exact(5, 5) == 4);
    CHECK(numth::ramanujan_exact(5, 1) == -1);
    CHECK(numth::ramanujan_exact(15, 3) == -2);
}
