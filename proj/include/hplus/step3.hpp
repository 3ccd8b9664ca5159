#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "hplus/bigfloat.hpp"
#include "hplus/frobenius.hpp"
#include "hplus/groebner.hpp"
#include "hplus/grpring.hpp"

namespace hplus {

// Univariate integer polynomial, coefficient of X^e at index e.
using IntPoly = std::vector<mpz_class>;

IntPoly cyclotomic_polynomial(u64 k);
std::string int_poly_text(const IntPoly& f, const std::string& var = "x");

struct CyclotomicFactor {
    char var = 'x';
    u64 k = 0;
};

// Splits Phi_k(x), Phi_k(y) off an integer lift, k > 1 dividing the cell exponent, once per k.
struct CyclotomicSplit {
    Lift lift = Lift::nonnegative;
    std::vector<CyclotomicFactor> factors;
    IntPoly2 residual;
};
CyclotomicSplit split_cyclotomic(const GroupRingElement& gen, Lift lift);
// Nonnegative lift when it has cyclotomic factors, else symmetric when it does, else nonnegative.
CyclotomicSplit split_cyclotomic(const GroupRingElement& gen);

// Unit eta^(N h') with N = (x^(p-1)-1)(y^(q-1)-1)/((x^step_x-1)(y^step_y-1)).
// Its conjugates are indexed by 0 <= i < step_x, 0 <= j < step_y.
struct NormPlan {
    u64 p = 0, q = 0;
    u64 cell_x = 1, cell_y = 1;
    u64 step_x = 1, step_y = 1;
    std::vector<CyclotomicFactor> prefactors;
    IntPoly2 residual;
    Lift lift = Lift::nonnegative;
    std::string rule_x, rule_y;  // "exact", or "subgroup", "cyclotomic", "cell" for the index rule

    u64 conjugate_count() const { return step_x * step_y; }
    std::string norm_text() const;
    std::string prefactor_text() const;
};

// exact: the plan's unit is eta^(N h) itself; (x^D - 1)/(x^delta - 1) is absorbed as a norm with step delta.
// index: a factor prod Phi_k equal to the sum over the index-delta subgroup of a cyclic group of order n
// is replaced by a norm with step D/delta (or D/n); the unit is in general a different element.
enum class NormRule { exact, index };

// Candidate plans for one annihilator generator, in the order they should be tried.
// Throws FactorizationIncomplete when every index candidate kills the unit.
std::vector<NormPlan> norm_candidates(const GroupRingElement& gen, NormRule rule = NormRule::exact);
NormPlan plan_norm(const GroupRingElement& gen, NormRule rule = NormRule::exact);

struct SignedLog {
    int sign = 1;
    BigFloat log;  // log |value|
};

// log |eta_(i,j)| and sign for every i < p - 1, j < q - 1 at a fixed precision.
class EtaEmbedding {
public:
    EtaEmbedding(const EtaSetup& eta, long bits, unsigned threads = 0);

    const EtaSetup& setup() const { return eta_; }
    long bits() const { return bits_; }
    const SignedLog& at(u64 i, u64 j) const { return v_[(i % (eta_.p - 1)) * (eta_.q - 1) + j % (eta_.q - 1)]; }

    // a(eta^(N h')) for the conjugate a = (i, j), in log form.
    SignedLog conjugate(const NormPlan& plan, u64 i, u64 j) const;
    std::vector<SignedLog> conjugates(const NormPlan& plan) const;

private:
    EtaSetup eta_;
    long bits_;
    std::vector<SignedLog> v_;
};

// Real value of a conjugate, or its real M-th root when root_of > 1.
BigFloat embed_unit(const EtaEmbedding& emb, const NormPlan& plan, u64 i, u64 j, u64 root_of = 1);

struct RoundedPolynomial {
    IntPoly coeffs;
    double max_error_log10 = 0;  // log10 of the largest distance to the nearest integer
    double height_log10 = 0;     // log10 of the largest coefficient
};

// prod (X - v) over the given signed logs with v replaced by its real M-th root, rounded.
RoundedPolynomial expand_rounded(const std::vector<SignedLog>& roots, u64 M, long bits);

IntPoly substitute_power(const IntPoly& f, u64 M);
// Exact division by a monic polynomial; returns false on a nonzero remainder.
bool divides_exactly(const IntPoly& divisor, const IntPoly& dividend);
// P(X) | Q(X^M)
bool verify_power(const IntPoly& P, const IntPoly& Q, u64 M);
// Throws DivisionFailed when P(X) does not divide Q(X^M).
void require_power(const IntPoly& P, const IntPoly& Q, u64 M);

struct Step3Options {
    long min_digits = 500;
    long max_digits = 20000;
    unsigned threads = 0;  // 0: hardware concurrency
    NormRule rule = NormRule::exact;
    bool twist = false;   // annihilate (J : I_d) with x -> x^(l^a1), y -> y^(l^a2)
    bool inverse = true;  // generators act on eta through x -> x^-1, y -> y^-1

    // Twisted annihilator, direct action and index norms: the construction behind the reference polynomials.
    static Step3Options reference() {
        Step3Options o;
        o.rule = NormRule::index;
        o.twist = true;
        o.inverse = false;
        return o;
    }
};

struct Step3Attempt {
    NormPlan plan;
    u64 M = 0;
    long digits = 0;
    IntPoly P, Q;
    double p_error_log10 = 0, q_error_log10 = 0;
    double threshold_log10 = 0;
    bool integral = false;
    bool divides = false;
    bool palindromic = false;
    bool unit_constant = false;
    std::string verdict;
};

struct Step3Report {
    u64 M = 0;
    std::string jbar, annihilator;
    std::vector<Step3Attempt> attempts;
    bool proved = false;  // every annihilator generator certified
    const Step3Attempt* success() const;
    std::vector<const Step3Attempt*> successes() const;
};

// Builds P and Q for one plan with the adaptive precision loop and checks P(X) | Q(X^M).
Step3Attempt attempt_plan(const NormPlan& plan, const EtaSetup& eta, u64 M, const Step3Options& opt = {});

// Annihilator of (J : I_d); each generator must certify under one of its candidate plans.
Step3Report run_step3(const GroebnerBasis& J, const EtaSetup& eta, const Step3Options& opt = {});

// Plain-text certificate: plan, coefficients, precision, rounding error and verdict.
std::string certificate_json(const Step3Attempt& a, const EtaSetup& eta);
// Re-checks a certificate with integer arithmetic only.
bool check_certificate(const std::string& json);

}  // namespace hplus
