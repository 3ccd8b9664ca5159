#include <algorithm>
#include <random>

#include "doctest.h"
#include "hplus/errors.hpp"
#include "hplus/modarith.hpp"

using namespace hplus;

TEST_CASE("primitive roots") {
    CHECK(find_primitive_root(7) == 3);
    CHECK(find_primitive_root(67) == 2);
    CHECK(all_primitive_roots(5) == std::vector<u64>{2, 3});
    CHECK(all_primitive_roots(67).size() == 20);
    for (u64 n : {3ULL, 11ULL, 67ULL, 271ULL, 211ULL}) {
        auto roots = all_primitive_roots(n);
        for (u64 g : roots)
            for (u64 s : prime_divisors(n - 1)) CHECK(powmod(g, (n - 1) / s, n) != 1);
    }
    CHECK_THROWS_AS(find_primitive_root(9), InvalidArgument);
}

TEST_CASE("primality") {
    CHECK(is_prime(7521823));
    CHECK_FALSE(is_prime(7521823ULL * 3));
    CHECK(is_prime(18446744073709551557ULL));
    CHECK_FALSE(is_prime(3215031751ULL));
    u64 count = 0;
    for (u64 n = 0; n < 10000; ++n) count += is_prime(n);
    CHECK(count == 1229);
}

TEST_CASE("split prime search") {
    auto w = search_split_primes(3, 5, 3, 1);
    REQUIRE(w.size() == 1);
    CHECK(w[0].r == 31);

    PrimeSearch opts;
    opts.start = 7000000;
    auto ws = search_split_primes(7, 67, 27, 200, opts);
    std::vector<u64> rs;
    for (auto& x : ws) rs.push_back(x.r);
    CHECK(std::is_sorted(rs.begin(), rs.end()));
    for (u64 r : {7521823ULL, 8889427ULL, 9573229ULL, 10257031ULL, 20514061ULL, 22565467ULL})
        CHECK(std::find(rs.begin(), rs.end(), r) != rs.end());
    for (auto& x : ws) {
        CHECK(((x.r - 1) / 27) % 2 == 0);
        CHECK(powmod(x.zeta_p, 7, x.r) == 1);
        CHECK(x.zeta_p != 1);
        CHECK(powmod(x.zeta_M, 9, x.r) != 1);
        CHECK(powmod(x.zeta_M, 27, x.r) == 1);
    }
    auto again = search_split_primes(7, 67, 27, 200, opts);
    CHECK(again.back().r == ws.back().r);

    PrimeSearch tight;
    tight.r_cap = 1000;
    CHECK_THROWS_AS(search_split_primes(7, 67, 27, 3, tight), SearchExhausted);
}

TEST_CASE("discrete logs in mu_M") {
    auto w = make_witness(7, 67, 27, 7521823);
    DlogContext ctx(w.r, w.zeta_M, 3, 3);
    for (u64 s = 0; s < 27; ++s) CHECK(ctx.log(powmod(w.zeta_M, s, w.r)) == s);
    CHECK(ctx.log(1) == 0);
    CHECK_THROWS_AS(ctx.log(2), NotInSubgroup);

    std::mt19937_64 rng(7);
    auto ws = search_split_primes(11, 13, 7 * 7 * 7, 3);
    for (auto& x : ws) {
        DlogContext c(x.r, x.zeta_M, 7, 3);
        for (int t = 0; t < 50; ++t) {
            u64 s = rng() % 343;
            CHECK(c.log(powmod(x.zeta_M, s, x.r)) == s);
        }
    }
}

TEST_CASE("chain modulus helpers") {
    auto cm = ChainModulus::make(3, 3);
    CHECK(cm.M == 27);
    CHECK(cm.val(0) == 3);
    CHECK(cm.val(18) == 2);
    CHECK(cm.unit_part(18) == 2);
    CHECK(cm.inv_unit(2) * 2 % 27 == 1);
    CHECK(cm.lpow(2) == 9);
    CHECK(cm.lpow(3) == 0);
}
