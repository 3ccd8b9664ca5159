#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hplus/modarith.hpp"

namespace hplus {

// Rational number split into small-prime powers and a leftover cofactor.
struct Factored {
    int sign = 1;
    std::map<u64, long> primes;  // prime -> signed exponent, primes below the bound
    mpq_class cofactor = 1;      // positive, free of primes below the bound

    static Factored of(const mpq_class& v, u64 bound = 10000);
    long valuation(u64 l) const;
    // odd primes below the bound only, e.g. "3^4*19" or "1"
    std::string odd_small_text() const;
    mpz_class odd_small_part() const;
};

// prod over even characters chi != 1 of conductor p of 2(chi(other)^-1 - 1) + (chi(g^-1) - 1)(other - 1)
mpz_class character_product(u64 p, u64 other, u64 g);
// Same product from complex floating point arithmetic, rounded.
mpz_class character_product_numeric(u64 p, u64 other, u64 g, long bits = 200);

struct IndexFactor {
    u64 p = 0, q = 0, g = 0, h = 0;
    long two_exponent = 0;  // the explicit power of two in the assembled value
    u64 group_order = 0;
    mpz_class product_p, product_q;
    mpq_class value;

    long valuation(u64 l) const;
    Factored factored(u64 bound = 10000) const { return Factored::of(value, bound); }
};

IndexFactor index_factor(u64 p, u64 q, u64 g, u64 h);

struct GcdReport {
    u64 p = 0, q = 0, bound = 10000;
    mpq_class gcd;
    Factored gcd_factored;
    // (g, h) in increasing lexicographic order
    std::vector<std::pair<std::pair<u64, u64>, Factored>> per_pair;
    std::pair<u64, u64> best_pair;  // fewest distinct odd primes below the bound, smallest (g, h) on ties
    std::string gcd_odd_small() const { return gcd_factored.odd_small_text(); }
};

GcdReport gcd_over_pairs(u64 p, u64 q, u64 bound = 10000);

struct RegulatorCheck {
    double determinant_log10 = 0;
    double residual = 0;           // |det - character product| / |det|
    double closed_form_residual = 0;  // same against the conductor-split closed form
    double row_sum = 0;            // |sum_alpha log|eta_alpha||
};

RegulatorCheck regulator_identity_check(u64 p, u64 q, u64 g, u64 h, long bits = 128);

}  // namespace hplus
