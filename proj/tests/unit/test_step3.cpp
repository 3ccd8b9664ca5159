#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hplus/errors.hpp"
#include "hplus/step3.hpp"

using namespace hplus;

namespace {

// Reference polynomials, coefficients from the leading one down.
IntPoly reference_poly(const std::string& name) {
    std::ifstream in(std::string(HPLUS_TEST_DATA) + "/step3_polynomials.txt");
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key != name) continue;
        IntPoly f;
        std::string c;
        while (is >> c) f.emplace_back(c);
        std::reverse(f.begin(), f.end());
        return f;
    }
    FAIL("missing fixture " << name);
    return {};
}

const char* kH1477 =
    "(x^2+x+1)(y^2+y+1)(y^12-y^11+y^9-y^8+y^6-y^4+y^3-y+1)(4 + 2x - 4x^2 + 5x^3 + 2y^7 - 6xy^7 + 5x^2y^7 - x^3y^7 "
    "- 4y^14 + 5xy^14 - 3x^2y^14 + 2x^3y^14 + 5y^21 - xy^21 + 2x^2y^21 + x^3y^21)";
const char* kH1355 =
    "(x^2+1)(y+1)(y^2-y+1)(y^6-y^3+1)(4 + 33x + 21y + 16xy + 27y^2 + 10xy^2 + 3y^3 + 34xy^3 + 25y^4 + 12xy^4 "
    "+ 11y^5 + 26xy^5 + 30y^6 + 7xy^6 + 28y^7 + 9xy^7 + 36y^8 + xy^8)";

GroebnerBasis ideal_469(u64 M) {
    const unsigned k = M == 3 ? 1 : M == 9 ? 2 : 3;
    const auto shape = RingShape::make(7, 67, 3, k, 2, 2);
    const auto eta = EtaSetup::make(7, 67, 3, 7);
    GroebnerBasis J = GroebnerBasis::compute(shape, {make_cnj(shape)});
    for (u64 r : {7521823ULL, 8889427ULL, 9573229ULL, 10257031ULL, 20514061ULL, 22565467ULL})
        J = J.extended(frobenius_restricted(frobenius_full(make_witness(7, 67, M, r), eta), shape).poly);
    return J;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(int_poly_text(cyclotomic_polynomial(1)) == "x - 1");
    CHECK(int_poly_text(cyclotomic_polynomial(3)) == "x^2 + x + 1");
    CHECK(int_poly_text(cyclotomic_polynomial(4)) == "x^2 + 1");
    CHECK(int_poly_text(cyclotomic_polynomial(6)) == "x^2 - x + 1");
    CHECK(int_poly_text(cyclotomic_polynomial(18)) == "x^6 - x^3 + 1");
    CHECK(cyclotomic_polynomial(21).size() == 13);
    CHECK(int_poly_text(cyclotomic_polynomial(12)) == "x^4 - x^2 + 1");
}

TEST_CASE("cyclotomic split of the conductor 469 annihilator") {
    const auto shape = RingShape::make(7, 67, 3, 2, 2, 2);
    const auto gen = GroupRingElement::parse(shape, "3(x^3-1)(y^3-1)");
    const auto nn = split_cyclotomic(gen, Lift::nonnegative);
    CHECK(nn.factors.empty());
    const auto split = split_cyclotomic(gen);
    CHECK(split.lift == Lift::symmetric);
    REQUIRE(split.factors.size() == 2);
    CHECK(split.factors[0].var == 'x');
    CHECK(split.factors[0].k == 3);
    CHECK(split.factors[1].var == 'y');
    CHECK(split.factors[1].k == 3);
    CHECK(split.residual == parse_int_poly("3(x-1)(y-1)"));

    const NormPlan plan = plan_norm(gen, NormRule::index);
    CHECK(plan.step_x == 2);
    CHECK(plan.step_y == 2);
    CHECK(plan.conjugate_count() == 4);
    CHECK(plan.norm_text() == "(x^6-1)(y^66-1)/((x^2-1)(y^2-1))");

    // Phi_3 alone is no subgroup sum in a cyclic group of order 6
    const NormPlan exact = plan_norm(gen);
    CHECK(exact.step_x == 6);
    CHECK(exact.step_y == 6);
    CHECK(exact.prefactors.empty());
}

TEST_CASE("norm plans follow the subgroup sum relation") {
    const auto s1477 = RingShape::make(7, 211, 7, 1, 6, 6);
    const NormPlan p1477 = plan_norm(GroupRingElement::parse(s1477, kH1477), NormRule::index);
    CHECK(p1477.prefactor_text() == "Phi_3(x)Phi_3(y)Phi_21(y)");
    CHECK(p1477.norm_text() == "(x^6-1)(y^210-1)/((x^2-1)(y^6-1))");
    CHECK(p1477.conjugate_count() == 12);

    const auto s1355 = RingShape::make(5, 271, 37, 1, 4, 18);
    const NormPlan p1355 = plan_norm(GroupRingElement::parse(s1355, kH1355), NormRule::index);
    CHECK(p1355.prefactor_text() == "Phi_4(x)Phi_2(y)Phi_6(y)Phi_18(y)");
    CHECK(p1355.norm_text() == "(x^4-1)(y^270-1)/((x^2-1)(y^2-1))");
    CHECK(p1355.rule_x == "subgroup");
    CHECK(p1355.rule_y == "subgroup");
    CHECK(p1355.residual == parse_int_poly("4 + 33x + 21y + 16xy + 27y^2 + 10xy^2 + 3y^3 + 34xy^3 + 25y^4 + 12xy^4 + "
                                           "11y^5 + 26xy^5 + 30y^6 + 7xy^6 + 28y^7 + 9xy^7 + 36y^8 + xy^8"));

    // exact rule: the subgroup sums (x^4-1)/(x^2-1) and (y^18-1)/(y^9-1) become norms with steps 2 and 9
    const NormPlan e1355 = plan_norm(GroupRingElement::parse(s1355, kH1355));
    CHECK(e1355.step_x == 2);
    CHECK(e1355.step_y == 9);
    CHECK(e1355.prefactor_text() == "Phi_4(x)Phi_2(y)Phi_6(y)Phi_18(y)");
    CHECK(e1355.residual == p1355.residual);
    const auto all = norm_candidates(GroupRingElement::parse(s1355, kH1355));
    CHECK(all.back().step_x == 4);
    CHECK(all.back().step_y == 18);

    // no cyclotomic divisor: plain cell norm
    const auto s = RingShape::make(7, 67, 3, 2, 2, 2);
    const auto plans = norm_candidates(GroupRingElement::parse(s, "3 + x + y"), NormRule::index);
    REQUIRE(plans.size() == 1);
    CHECK(plans[0].prefactors.empty());
    CHECK(plans[0].step_x == 6);
    CHECK(plans[0].step_y == 6);

    CHECK(norm_candidates(GroupRingElement::parse(s, "3 + x + y")).size() == 1);
    CHECK_THROWS_AS(norm_candidates(GroupRingElement(s)), ZeroPolynomial);
    CHECK_THROWS_AS(norm_candidates(GroupRingElement::parse(RingShape::bare(3, 1, 6, 6), "1+x")), ShapeMismatch);
}

TEST_CASE("embeddings of eta") {
    const auto eta = EtaSetup::make(7, 67, 3, 7);
    const EtaEmbedding emb(eta, 256);
    // norm of a unit
    BigFloat total(256);
    int sign = 1;
    for (u64 i = 0; i < 6; ++i)
        for (u64 j = 0; j < 66; ++j) {
            total += emb.at(i, j).log;
            sign *= emb.at(i, j).sign;
        }
    CHECK(total.abs().log10_abs() < -60);
    // eta is fixed by complex conjugation (3, 33)
    for (u64 i = 0; i < 6; ++i)
        for (u64 j = 0; j < 66; ++j) {
            CHECK(emb.at(i, j).sign == emb.at(i + 3, j + 33).sign);
            CHECK((emb.at(i, j).log - emb.at(i + 3, j + 33).log).abs().log10_abs() < -60);
        }

    NormPlan trivial;
    trivial.p = 7;
    trivial.q = 67;
    trivial.step_x = 2;
    trivial.step_y = 2;
    const BigFloat one = embed_unit(emb, trivial, 1, 1);
    CHECK(one.to_double() == 1.0);

    // product over the conjugates of the normed unit is +-1
    const auto shape = RingShape::make(7, 67, 3, 2, 2, 2);
    const NormPlan plan = plan_norm(GroupRingElement::parse(shape, "3(x^3-1)(y^3-1)"), NormRule::index);
    BigFloat s(256);
    for (const auto& v : emb.conjugates(plan)) s += v.log;
    CHECK(s.abs().log10_abs() < -60);
}

TEST_CASE("conductor 469 polynomials are exact") {
    const auto eta = EtaSetup::make(7, 67, 3, 7);
    const auto shape = RingShape::make(7, 67, 3, 2, 2, 2);
    const NormPlan plan = plan_norm(GroupRingElement::parse(shape, "3(x^3-1)(y^3-1)"), NormRule::index);
    const Step3Attempt a = attempt_plan(plan, eta, 9);
    CHECK(a.integral);
    CHECK(a.divides);
    CHECK(a.P == reference_poly("469"));
    CHECK(a.Q == reference_poly("469-Q"));
    CHECK(a.palindromic);
    CHECK(a.unit_constant);
    CHECK(a.digits >= 500);

    // stable under doubling the precision
    Step3Options wide;
    wide.min_digits = 1000;
    CHECK(attempt_plan(plan, eta, 9, wide).P == a.P);

    // independent of the order of the conjugates
    const EtaEmbedding emb(eta, BigFloat::bits_for_digits(a.digits));
    auto conj = emb.conjugates(plan);
    const long bits = emb.bits();
    const auto forward = expand_rounded(conj, 9, bits);
    std::reverse(conj.begin(), conj.end());
    std::rotate(conj.begin(), conj.begin() + 1, conj.end());
    CHECK(expand_rounded(conj, 9, bits).coeffs == forward.coeffs);

    // M = 1 gives an integral characteristic polynomial
    CHECK(expand_rounded(conj, 1, bits).coeffs == a.Q);

    // a fifth root of the unit is not in the field
    const Step3Attempt fifth = attempt_plan(plan, eta, 5);
    CHECK_FALSE(fifth.integral);
    CHECK_FALSE(fifth.divides);
}

TEST_CASE("exact divisibility") {
    const IntPoly x_minus_1{-1, 1};
    for (u64 M : {1, 3, 9, 37}) CHECK(verify_power(x_minus_1, x_minus_1, M));
    CHECK(verify_power(reference_poly("469"), reference_poly("469-Q"), 9));
    CHECK_FALSE(verify_power(reference_poly("469"), reference_poly("469-Q"), 3));
    CHECK_FALSE(verify_power(IntPoly{1, -5, 1}, IntPoly{1, -7, 1}, 3));
    CHECK(substitute_power(IntPoly{2, 0, 1}, 3) == IntPoly{2, 0, 0, 0, 0, 0, 1});
    CHECK_THROWS_AS(divides_exactly(IntPoly{1, 2}, IntPoly{1}), InvalidArgument);
}

TEST_CASE("step 3 on the stabilized 469 ideal") {
    const auto eta = EtaSetup::make(7, 67, 3, 7);
    const GroebnerBasis J = ideal_469(9);

    const Step3Report rep = run_step3(J, eta);
    REQUIRE(rep.proved);
    for (const Step3Attempt* a : rep.successes()) {
        CHECK(a->plan.rule_x == "exact");
        CHECK(a->integral);
        CHECK(a->palindromic);
    }

    // twisted annihilator with index norms gives the reference quartic
    const Step3Report ref = run_step3(J, eta, Step3Options::reference());
    REQUIRE(ref.success() != nullptr);
    const Step3Attempt* s = ref.success();
    CHECK(s->P == reference_poly("469"));
    CHECK(s->plan.norm_text() == "(x^6-1)(y^66-1)/((x^2-1)(y^2-1))");

    // the twisted generator itself is no ninth power under the cell norm
    const auto shape = RingShape::make(7, 67, 3, 2, 2, 2);
    const Step3Attempt literal = attempt_plan(plan_norm(GroupRingElement::parse(shape, "3(x^3-1)(y^3-1)")), eta, 9);
    CHECK_FALSE(literal.divides);

    const std::string cert = certificate_json(*s, eta);
    CHECK(check_certificate(cert));
    std::string bad = cert;
    bad.replace(bad.find("35667454"), 8, "35667455");
    CHECK_FALSE(check_certificate(bad));
}

TEST_CASE("conductor 1477 and 1355 polynomials") {
    const auto s1477 = RingShape::make(7, 211, 7, 1, 6, 6);
    const auto a1477 = attempt_plan(plan_norm(GroupRingElement::parse(s1477, kH1477), NormRule::index), EtaSetup::make(7, 211, 3, 2), 7);
    CHECK(a1477.divides);
    CHECK(a1477.P == reference_poly("1477"));

    const auto s1355 = RingShape::make(5, 271, 37, 1, 4, 18);
    const auto a1355 = attempt_plan(plan_norm(GroupRingElement::parse(s1355, kH1355), NormRule::index), EtaSetup::make(5, 271, 2, 6), 37);
    CHECK(a1355.divides);
    CHECK(a1355.P == reference_poly("1355"));
    CHECK(a1355.P[2].get_str().size() == 113);
}
