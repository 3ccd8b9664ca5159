#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hplus/modarith.hpp"

namespace hplus {

// Exponent shape of (Z/M)[x,y]/(x^D1 - 1, y^D2 - 1).
// For a degree cell, D1 = d1 * l^a1 with l^a1 the exact l-power of p - 1 (same for q).
struct RingShape {
    u64 p = 0, q = 0;
    ChainModulus mod;
    u64 D1 = 1, D2 = 1;
    unsigned a1 = 0, a2 = 0;
    u64 d1 = 1, d2 = 1;

    static RingShape make(u64 p, u64 q, u64 l, unsigned k, u64 d1, u64 d2);
    static RingShape full(u64 p, u64 q, u64 l, unsigned k);
    // Shape without an underlying conductor, used for property tests.
    static RingShape bare(u64 l, unsigned k, u64 D1, u64 D2);

    std::size_t size() const { return static_cast<std::size_t>(D1 * D2); }
    u64 M() const { return mod.M; }
    u64 l() const { return mod.l; }
    unsigned k() const { return mod.k; }
    RingShape with_exponent(unsigned k) const;
    bool operator==(const RingShape& o) const {
        return mod == o.mod && D1 == o.D1 && D2 == o.D2 && p == o.p && q == o.q;
    }
    bool operator!=(const RingShape& o) const { return !(*this == o); }
    std::string describe() const;
};

struct Term {
    u64 i = 0, j = 0, c = 0;
    bool operator==(const Term& o) const { return i == o.i && j == o.j && c == o.c; }
};

// Polynomial in x, y with integer coefficients and unbounded exponents.
using IntPoly2 = std::map<std::pair<u64, u64>, mpz_class>;

enum class Lift { nonnegative, symmetric };

// Dense element of the group ring; slot i * D2 + j holds the coefficient of x^i y^j.
// Slot order coincides with lex order (x > y), so the leading term sits in the top slot.
class GroupRingElement {
public:
    GroupRingElement() = default;
    explicit GroupRingElement(const RingShape& shape);

    static GroupRingElement monomial(const RingShape& shape, u64 i, u64 j, u64 c = 1);
    static GroupRingElement from_terms(const RingShape& shape, const std::vector<Term>& terms);
    static GroupRingElement from_int_poly(const RingShape& shape, const IntPoly2& poly);
    static GroupRingElement parse(const RingShape& shape, const std::string& text);

    const RingShape& shape() const { return shape_; }
    std::size_t size() const { return c_.size(); }
    u64 operator[](std::size_t idx) const { return c_[idx]; }
    u64 coeff(u64 i, u64 j) const { return c_[idx(i, j)]; }
    void set(u64 i, u64 j, u64 c) { c_[idx(i, j)] = static_cast<std::uint32_t>(c % shape_.M()); }
    void add_to(std::size_t slot, u64 c);
    std::size_t idx(u64 i, u64 j) const { return static_cast<std::size_t>((i % shape_.D1) * shape_.D2 + j % shape_.D2); }

    bool is_zero() const;
    // -1 for the zero element.
    long lead_slot() const;
    // Throws ZeroPolynomial for 0.
    Term leading_term() const;
    std::vector<Term> terms() const;  // nonzero terms, descending lex
    std::size_t nonzero_count() const;
    u64 augmentation() const;

    GroupRingElement operator+(const GroupRingElement& o) const;
    GroupRingElement operator-(const GroupRingElement& o) const;
    GroupRingElement operator-() const;
    GroupRingElement operator*(const GroupRingElement& o) const;
    GroupRingElement scaled(u64 c) const;
    GroupRingElement& operator+=(const GroupRingElement& o);
    GroupRingElement& operator-=(const GroupRingElement& o);
    // this -= c * x^a y^b * g
    void sub_shifted(const GroupRingElement& g, u64 c, u64 a, u64 b);
    GroupRingElement shifted(u64 a, u64 b) const;
    // Ring endomorphism x -> x^ex, y -> y^ey.
    GroupRingElement substituted(u64 ex, u64 ey) const;
    // Image in a ring whose exponents and modulus divide the present ones.
    GroupRingElement reduced_to(const RingShape& target) const;

    bool operator==(const GroupRingElement& o) const { return shape_ == o.shape_ && c_ == o.c_; }
    bool operator!=(const GroupRingElement& o) const { return !(*this == o); }

    IntPoly2 lift(Lift mode) const;
    std::string to_text() const;
    // "D1 D2 M" header line followed by "i j c" lines.
    std::string to_triples() const;
    static GroupRingElement from_triples(const RingShape& shape, const std::string& text);

private:
    RingShape shape_;
    std::vector<std::uint32_t> c_;
    void check_same(const GroupRingElement& o) const;
};

GroupRingElement make_cnj(const RingShape& shape);
std::vector<GroupRingElement> augmentation_generators(const RingShape& shape);

// Parses sums of products like "(y^2+2y)x^3 - 3(x-1)(y-1) + 2xy^4".
IntPoly2 parse_int_poly(const std::string& text);
std::string int_poly_to_text(const IntPoly2& poly);

}  // namespace hplus
