#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hplus/errors.hpp"
#include "hplus/frobenius.hpp"

using namespace hplus;

namespace {

struct Reference {
    u64 r, M;
    std::string poly;
};

std::vector<Reference> load_reference() {
    std::ifstream in(std::string(HPLUS_TEST_DATA) + "/frobenius_469.txt");
    std::vector<Reference> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        Reference p;
        is >> p.r >> p.M;
        std::getline(is, p.poly);
        out.push_back(p);
    }
    return out;
}

// zeta^(e/2) in mu_n (n odd) as the unique square root inside mu_n
u64 half_power(u64 zeta, long e, u64 n, u64 r) {
    const u64 target = powmod(zeta, static_cast<u64>(((e % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n)), r);
    for (u64 t = 0; t < n; ++t) {
        u64 c = powmod(zeta, t, r);
        if (mulmod(c, c, r) == target) return c;
    }
    return 0;
}

}  // namespace

TEST_CASE("eta against a direct evaluation in F_31") {
    auto w = make_witness(3, 5, 3, 31);
    auto eta = EtaSetup::make(3, 5, 2, 2);
    const u64 r = 31;
    auto inv = [&](u64 v) { return invmod(v, r); };
    // discrete logs by exhaustive table
    std::map<u64, u64> table;
    for (u64 s = 0; s < 3; ++s) table[powmod(w.zeta_M, s, r)] = s;
    auto full = frobenius_full(w, eta);
    for (u64 i = 1; i <= 2; ++i) {
        for (u64 j = 1; j <= 2; ++j) {
            const u64 a = powmod(eta.gamma, i, 3), b = powmod(eta.delta, j, 5);
            const u64 zpa = powmod(w.zeta_p, a, r), zqb = powmod(w.zeta_q, b, r);
            u64 v = mulmod(inv(zpa), inv(zqb), r);
            const u64 c = (1 + r - mulmod(zpa, zqb, r)) % r;
            v = mulmod(v, mulmod(c, c, r), r);
            v = mulmod(v, half_power(w.zeta_p, -static_cast<long>(eta.g * a) + static_cast<long>(a), 3, r), r);
            v = mulmod(v, mulmod((1 + r - powmod(w.zeta_p, eta.g * a, r)) % r, inv((1 + r - zpa) % r), r), r);
            v = mulmod(v, half_power(w.zeta_q, -static_cast<long>(eta.h * b) + static_cast<long>(b), 5, r), r);
            v = mulmod(v, mulmod((1 + r - powmod(w.zeta_q, eta.h * b, r)) % r, inv((1 + r - zqb) % r), r), r);
            CHECK(eta_image(i, j, eta, w) == v);
            CHECK(full.poly.coeff(i % 2, j % 4) == table.at(powmod(v, (r - 1) / 3, r)));
        }
    }
}

TEST_CASE("augmentation and norm") {
    auto eta = EtaSetup::make(7, 67, 3, 7);
    PrimeSearch opts;
    opts.start = 7000000;
    for (const auto& w : search_split_primes(7, 67, 27, 4, opts)) {
        auto full = frobenius_full(w, eta);
        CHECK(full.poly.augmentation() == 0);
        CHECK(full.poly.nonzero_count() <= 6 * 33);
        u64 prod = 1;
        for (u64 i = 1; i <= 6; ++i)
            for (u64 j = 1; j <= 33; ++j) prod = mulmod(prod, eta_image(i, j, eta, w), w.r);
        CHECK(powmod(prod, (w.r - 1) / 27, w.r) == 1);
        auto shape = RingShape::make(7, 67, 3, 3, 2, 2);
        auto res = frobenius_restricted(full, shape);
        CHECK(res.poly == full.poly.reduced_to(shape));
        CHECK(res.poly.augmentation() == 0);
        // coarser modulus from the same witness
        auto w3 = make_witness(7, 67, 3, w.r);
        auto full3 = frobenius_full(w3, eta);
        CHECK(full3.poly == full.poly.reduced_to(full3.shape));
    }
}

TEST_CASE("reference Frobenius maps for conductor 469") {
    auto eta = EtaSetup::make(7, 67, 3, 7);
    int matched = 0;
    for (const auto& pr : load_reference()) {
        const unsigned k = pr.M == 3 ? 1 : pr.M == 9 ? 2 : 3;
        auto shape = RingShape::make(7, 67, 3, k, 2, 2);
        auto w = make_witness(7, 67, pr.M, pr.r);
        auto ours = frobenius_restricted(frobenius_full(w, eta), shape).poly;
        auto expected = GroupRingElement::parse(shape, pr.poly);
        auto cnj = GroebnerBasis::compute(shape, {make_cnj(shape)});
        auto m = match_up_to_unit_and_shift(ours, expected, cnj);
        CHECK_MESSAGE(m.has_value(), "r = " << pr.r << " M = " << pr.M);
        matched += m.has_value();
        if (m) {
            CHECK(m->unit == 1);
            CHECK(m->sx == 0);
            CHECK(m->sy == 0);
        }
    }
    CHECK(matched == 18);
}

TEST_CASE("zeta normalization changes coefficients by a unit") {
    auto eta = EtaSetup::make(7, 67, 3, 7);
    auto w = make_witness(7, 67, 9, 7521823);
    auto a = frobenius_full(w, eta);
    auto w2 = w;
    w2.zeta_M = powmod(w.zeta_M, 2, w.r);
    auto b = frobenius_full(w2, eta);
    // log base zeta^2 is (1/2) log base zeta
    CHECK(b.poly == a.poly.scaled(invmod(2, 9)));
    auto shape = RingShape::make(7, 67, 3, 2, 2, 2);
    auto ia = GroebnerBasis::compute(shape, {make_cnj(shape), a.poly.reduced_to(shape)});
    auto ib = GroebnerBasis::compute(shape, {make_cnj(shape), b.poly.reduced_to(shape)});
    CHECK(ideal_equal(ia, ib));
}

TEST_CASE("cache round trip") {
    const std::string path = "frobenius_cache_test.txt";
    std::remove(path.c_str());
    auto eta = EtaSetup::make(7, 67, 3, 7);
    auto w = make_witness(7, 67, 27, 8889427);
    std::string first;
    {
        FrobeniusCache cache(path);
        first = FrobeniusCache::serialize(cache.get(w, eta), eta);
        CHECK(cache.misses() == 1);
        cache.save();
    }
    const auto before = dlog_evaluations();
    FrobeniusCache again(path);
    const auto& rec = again.get(w, eta);
    CHECK(again.hits() == 1);
    CHECK(dlog_evaluations() == before);
    CHECK(FrobeniusCache::serialize(rec, eta) == first);
    std::remove(path.c_str());
}
