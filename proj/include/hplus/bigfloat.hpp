#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace hplus {

// Owning MPFR value. Binary operations run at the larger operand precision.
class BigFloat {
public:
    explicit BigFloat(long bits = 128);
    BigFloat(long bits, double v);
    BigFloat(long bits, const mpz_class& v);
    BigFloat(const BigFloat& o);
    BigFloat(BigFloat&& o) noexcept;
    BigFloat& operator=(const BigFloat& o);
    BigFloat& operator=(BigFloat&& o) noexcept;
    ~BigFloat();

    static BigFloat pi(long bits);
    static long bits_for_digits(long digits);

    long precision() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    BigFloat operator+(const BigFloat& o) const;
    BigFloat operator-(const BigFloat& o) const;
    BigFloat operator*(const BigFloat& o) const;
    BigFloat operator/(const BigFloat& o) const;
    BigFloat operator-() const;
    BigFloat& operator+=(const BigFloat& o);
    BigFloat& operator-=(const BigFloat& o);
    BigFloat& operator*=(const BigFloat& o);
    BigFloat mul_si(long c) const;
    BigFloat div_si(long c) const;

    BigFloat abs() const;
    BigFloat log() const;
    BigFloat exp() const;
    BigFloat sin() const;
    BigFloat cos() const;
    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // log10 |x|, -inf for zero
    double log10_abs() const;
    mpz_class round() const;
    std::string to_string(int digits = 30) const;

    bool operator<(const BigFloat& o) const { return mpfr_less_p(v_, o.v_) != 0; }

private:
    mpfr_t v_;
};

struct BigComplex {
    BigFloat re, im;
    explicit BigComplex(long bits) : re(bits), im(bits) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    static BigComplex unit_root(long bits, long num, long den);  // exp(2 pi i num/den)
    BigComplex operator*(const BigComplex& o) const;
    BigComplex operator+(const BigComplex& o) const;
    BigComplex operator-(const BigComplex& o) const;
    BigComplex scaled(const BigFloat& s) const { return {re * s, im * s}; }
};

}  // namespace hplus
