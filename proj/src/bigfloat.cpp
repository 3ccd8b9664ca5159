#include "hplus/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hplus {

BigFloat::BigFloat(long bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long bits, double v) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(long bits, const mpz_class& v) {
    mpfr_init2(v_, bits);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& o) {
    mpfr_init2(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.precision());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::pi(long bits) {
    BigFloat r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

long BigFloat::bits_for_digits(long digits) { return static_cast<long>(std::ceil(digits * 3.3219280948873623)) + 16; }

#define HPLUS_BINOP(op, fn)                                           \
    BigFloat BigFloat::operator op(const BigFloat& o) const {         \
        BigFloat r(std::max(precision(), o.precision()));             \
        fn(r.v_, v_, o.v_, MPFR_RNDN);                                \
        return r;                                                     \
    }
HPLUS_BINOP(+, mpfr_add)
HPLUS_BINOP(-, mpfr_sub)
HPLUS_BINOP(*, mpfr_mul)
HPLUS_BINOP(/, mpfr_div)
#undef HPLUS_BINOP

BigFloat BigFloat::operator-() const {
    BigFloat r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

BigFloat& BigFloat::operator+=(const BigFloat& o) { return *this = *this + o; }
BigFloat& BigFloat::operator-=(const BigFloat& o) { return *this = *this - o; }
BigFloat& BigFloat::operator*=(const BigFloat& o) { return *this = *this * o; }

BigFloat BigFloat::mul_si(long c) const {
    BigFloat r(precision());
    mpfr_mul_si(r.v_, v_, c, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::div_si(long c) const {
    BigFloat r(precision());
    mpfr_div_si(r.v_, v_, c, MPFR_RNDN);
    return r;
}

#define HPLUS_UNARY(name, fn)                 \
    BigFloat BigFloat::name() const {         \
        BigFloat r(precision());              \
        fn(r.v_, v_, MPFR_RNDN);              \
        return r;                             \
    }
HPLUS_UNARY(abs, mpfr_abs)
HPLUS_UNARY(log, mpfr_log)
HPLUS_UNARY(exp, mpfr_exp)
HPLUS_UNARY(sin, mpfr_sin)
HPLUS_UNARY(cos, mpfr_cos)
#undef HPLUS_UNARY

double BigFloat::log10_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    long e = 0;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log10(std::fabs(m)) + static_cast<double>(e) * 0.30102999566398120;
}

mpz_class BigFloat::round() const {
    mpz_class z;
    BigFloat t(precision());
    mpfr_round(t.v_, v_);
    mpfr_get_z(z.get_mpz_t(), t.v_, MPFR_RNDN);
    return z;
}

std::string BigFloat::to_string(int digits) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return buf.data();
}

BigComplex BigComplex::unit_root(long bits, long num, long den) {
    BigFloat ang = BigFloat::pi(bits).mul_si(2 * num).div_si(den);
    return {ang.cos(), ang.sin()};
}

BigComplex BigComplex::operator*(const BigComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
}

BigComplex BigComplex::operator+(const BigComplex& o) const { return {re + o.re, im + o.im}; }

BigComplex BigComplex::operator-(const BigComplex& o) const { return {re - o.re, im - o.im}; }

}  // namespace hplus
