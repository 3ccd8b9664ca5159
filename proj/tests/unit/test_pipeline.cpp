#include "doctest.h"
#include "hplus/errors.hpp"
#include "hplus/pipeline.hpp"

using namespace hplus;

namespace {

FpPoly fp_product(const std::vector<FpPoly>& fs, u64 l) {
    FpPoly r{1};
    for (const auto& f : fs) {
        FpPoly t(r.size() + f.size() - 1, 0);
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j) t[i + j] = (t[i + j] + r[i] * f[j]) % l;
        r = t;
    }
    return r;
}

RunConfig config(u64 p, u64 q) {
    RunConfig c;
    c.p = p;
    c.q = q;
    return c;
}

}  // namespace

TEST_CASE("factoring x^m - 1 over F_l") {
    for (auto [m, l] : {std::pair<u64, u64>{2, 3}, {22, 3}, {6, 7}, {4, 37}, {18, 37}, {210, 11}, {66, 5}}) {
        const auto fs = factor_x_pow_minus_one(m, l);
        FpPoly expect(m + 1, 0);
        expect[0] = l - 1;
        expect[m] = 1;
        CHECK(fp_product(fs, l) == expect);
        for (const auto& f : fs) CHECK(f.back() == 1);
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = i + 1; j < fs.size(); ++j) CHECK(fs[i] != fs[j]);
    }
    // x^22 - 1 over F_3: x-1, x+1 and two quintics for each of Phi_11, Phi_22
    const auto f22 = factor_x_pow_minus_one(22, 3);
    REQUIRE(f22.size() == 6);
    CHECK(f22[0].size() == 2);
    CHECK(f22[5].size() == 6);
    CHECK(fp_poly_text(FpPoly{3, 1}, 'x') == "x+3");
    CHECK(fp_poly_text(FpPoly{1, 0, 2}, 'y') == "2y^2+1");
    CHECK_THROWS_AS(factor_x_pow_minus_one(6, 3), InvalidArgument);
}

TEST_CASE("degree grid") {
    const auto g469 = degree_grid(7, 67, 3);
    REQUIRE(g469.size() == 2);
    CHECK(g469[0].d1 == 2);
    CHECK(g469[0].d2 == 2);
    CHECK(g469[1].d1 == 2);
    CHECK(g469[1].d2 == 22);
    CHECK(g469[1].shape(7, 67, 3, 1).D2 == 66);

    const auto g1355 = degree_grid(5, 271, 37);
    bool found = false;
    for (const auto& c : g1355) {
        const auto s = c.shape(5, 271, 37, 1);
        if (s.D1 == 4 && s.D2 == 18) found = true;
    }
    CHECK(found);
    for (std::size_t i = 1; i < g1355.size(); ++i)
        CHECK(g1355[i - 1].d1 * g1355[i - 1].d2 <= g1355[i].d1 * g1355[i].d2);
}

TEST_CASE("config text") {
    const RunConfig c = RunConfig::from_text("# run\np = 7\nq=67\nl-bound = 100\nl = 3, 17\nformat = json\n");
    CHECK(c.p == 7);
    CHECK(c.q == 67);
    CHECK(c.l_bound == 100);
    CHECK(c.only_l == std::vector<u64>{3, 17});
    CHECK(c.format == "json");
    CHECK_NOTHROW(c.validate());
    CHECK_THROWS_AS(RunConfig::from_text("p 7"), ParseError);
    CHECK_THROWS_AS(RunConfig::from_text("colour = red"), ParseError);
    CHECK_THROWS_AS(RunConfig::from_text("p = seven"), ParseError);
    CHECK_THROWS_AS(config(67, 7).validate(), InvalidArgument);
    CHECK_THROWS_AS(config(9, 67).validate(), InvalidArgument);
    RunConfig bad = config(7, 67);
    bad.format = "xml";
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("conductor 469") {
    const RunConfig cfg = config(7, 67);
    const GcdReport gcd = gcd_over_pairs(7, 67);
    CHECK(pair_for_prime(gcd, 3) == gcd.best_pair);
    CHECK(pair_for_prime(gcd, 17) == std::pair<u64, u64>{5, 7});

    FrobeniusStore store;
    const LReport r3 = run_prime(3, cfg, gcd, store);
    CHECK(r3.status == LStatus::h_plus_l_part_proved);
    CHECK(r3.h_plus_exponent == 2);
    REQUIRE(r3.cells.size() >= 1);
    CHECK(r3.cells[0].D1 == 6);
    CHECK(r3.cells[0].D2 == 6);
    CHECK(r3.cells[0].history == std::vector<u64>{1, 2, 2});
    CHECK(r3.cells[0].stable_M == 9);
    CHECK(r3.certificate.has_value());

    const LReport r17 = run_prime(17, cfg, gcd, store);
    CHECK(r17.flagged_step1);
    CHECK(r17.rescreened);
    CHECK_FALSE(r17.survived_rescreen);
    CHECK(r17.status == LStatus::not_dividing);
}
