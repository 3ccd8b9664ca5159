#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "hplus/grpring.hpp"

namespace hplus {

// Submodule of (Z/M)^n kept in Howell form: at most one row per pivot column,
// pivots normalized to powers of l, closed under multiplication by annihilators of pivots.
class HowellForm {
public:
    HowellForm(const ChainModulus& mod, std::size_t ncols);

    void insert(std::vector<u64> row);
    std::vector<u64> reduce(std::vector<u64> v) const;
    bool contains(const std::vector<u64>& v) const;
    // log_l of |(Z/M)^n / S|
    u64 quotient_exponent() const;
    // Rows whose pivot lies at or beyond `col`; they span S intersected with the trailing coordinates.
    std::vector<std::vector<u64>> rows_from(std::size_t col) const;
    std::size_t ncols() const { return n_; }
    std::size_t row_count() const;

private:
    ChainModulus mod_;
    std::size_t n_;
    std::vector<std::vector<u64>> rows_;
    std::vector<unsigned> pval_;
    void axpy(std::vector<u64>& v, const std::vector<u64>& row, u64 c, std::size_t from) const;
};

// Strong Groebner basis over Z/l^k in lex order x > y, kept reduced:
// minimal, leading coefficients l^v, tails fully reduced.
class GroebnerBasis {
public:
    GroebnerBasis() = default;
    explicit GroebnerBasis(const RingShape& shape);  // zero ideal

    static GroebnerBasis compute(const RingShape& shape, const std::vector<GroupRingElement>& gens);
    GroebnerBasis extended(const GroupRingElement& f) const;
    GroebnerBasis extended(const std::vector<GroupRingElement>& fs) const;

    GroupRingElement reduce(const GroupRingElement& f) const;
    bool contains(const GroupRingElement& f) const;
    bool contains(const GroebnerBasis& other) const;

    const RingShape& shape() const { return shape_; }
    const std::vector<GroupRingElement>& elements() const { return g_; }
    bool is_zero_ideal() const { return g_.empty(); }
    bool is_whole_ring() const;
    // log_l |R/J|, read off the leading terms.
    u64 quotient_exponent() const;
    std::string dump() const;

private:
    RingShape shape_;
    std::vector<GroupRingElement> g_;
    std::vector<long> lead_;
    std::vector<unsigned> lval_;
    std::vector<char> dead_;

    void push(GroupRingElement f);
    void complete(std::size_t first_new);
    void interreduce();
    long find_reducer(u64 i, u64 j, unsigned v, std::size_t skip) const;
    GroupRingElement reduce_skipping(GroupRingElement f, std::size_t skip) const;
};

bool ideal_equal(const GroebnerBasis& a, const GroebnerBasis& b);

struct QuotientOrder {
    u64 l = 0;
    u64 exponent = 0;
    mpz_class value() const;
};

// |I/J| for J contained in I; the linear-algebra oracle runs when cross_check is set.
QuotientOrder quotient_order(const GroebnerBasis& I, const GroebnerBasis& J, bool cross_check = true);
// Oracle only: log_l |R/(gens)| from the Howell form of the spanning set.
u64 oracle_quotient_exponent(const RingShape& shape, const std::vector<GroupRingElement>& gens);
HowellForm ideal_span(const RingShape& shape, const std::vector<GroupRingElement>& gens);

// (T : J) = { f : f J in T }, as the kernel of f -> (f j_1, ..., f j_s) mod T.
GroebnerBasis ideal_quotient(const GroebnerBasis& T, const GroebnerBasis& J);
GroebnerBasis annihilator(const GroebnerBasis& J);
GroebnerBasis substituted(const GroebnerBasis& J, u64 ex, u64 ey);
GroebnerBasis reduced_ideal(const GroebnerBasis& J, const RingShape& target);

}  // namespace hplus
