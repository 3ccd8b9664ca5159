#include "hplus/charfactor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hplus/bigfloat.hpp"
#include "hplus/errors.hpp"

namespace hplus {

Factored Factored::of(const mpq_class& v, u64 bound) {
    if (v == 0) throw InvalidArgument("cannot factor zero");
    Factored f;
    f.sign = v < 0 ? -1 : 1;
    mpz_class num = abs(v.get_num()), den = v.get_den();
    for (u64 s = 2; s < bound; ++s) {
        if (!is_prime(s)) continue;
        long e = 0;
        while (mpz_divisible_ui_p(num.get_mpz_t(), s)) {
            mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), s);
            ++e;
        }
        while (mpz_divisible_ui_p(den.get_mpz_t(), s)) {
            mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), s);
            --e;
        }
        if (e) f.primes[s] = e;
    }
    f.cofactor = mpq_class(num, den);
    f.cofactor.canonicalize();
    return f;
}

long Factored::valuation(u64 l) const {
    auto it = primes.find(l);
    return it == primes.end() ? 0 : it->second;
}

std::string Factored::odd_small_text() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, e] : primes) {
        if (s == 2 || e <= 0) continue;
        if (!first) os << "*";
        os << s;
        if (e > 1) os << "^" << e;
        first = false;
    }
    return first ? "1" : os.str();
}

mpz_class Factored::odd_small_part() const {
    mpz_class r = 1;
    for (const auto& [s, e] : primes) {
        if (s == 2 || e <= 0) continue;
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(s), static_cast<unsigned long>(e));
        r *= t;
    }
    return r;
}

namespace {

struct CharacterExponents {
    u64 n = 0;       // number of even characters, (p - 1) / 2
    u64 e_other = 0;  // -ind(other) mod n
    u64 e_g = 0;      // -ind(g) mod n
};

CharacterExponents exponents(u64 p, u64 other, u64 g) {
    CharacterExponents ce;
    ce.n = (p - 1) / 2;
    const u64 gamma = find_primitive_root(p);
    if (ce.n == 0) return ce;
    ce.e_other = (ce.n - index_of(other % p, gamma, p) % ce.n) % ce.n;
    ce.e_g = (ce.n - index_of(g % p, gamma, p) % ce.n) % ce.n;
    return ce;
}

}  // namespace

mpz_class character_product(u64 p, u64 other, u64 g) {
    if (multiplicative_order(g % p, p) != p - 1) throw InvalidArgument("g is not a primitive root");
    const auto ce = exponents(p, other, g);
    const u64 n = ce.n;
    if (n <= 1) return 1;
    // |A(zeta)| <= 2q + 2, so the product is below (2q + 2)^(n - 1)
    const double bound_bits = static_cast<double>(n - 1) * std::log2(2.0 * static_cast<double>(other) + 2.0) + 4;
    mpz_class modulus = 1, residue = 0;
    u64 t = ((u64(1) << 62) - 1) / n;
    double have_bits = 0;
    while (have_bits < bound_bits) {
        const u64 pi = 1 + n * t--;
        if (!is_prime(pi)) continue;
        // root of unity of exact order n
        u64 omega = 0;
        const auto fs = prime_divisors(n);
        for (u64 a = 2;; ++a) {
            omega = powmod(a, (pi - 1) / n, pi);
            bool exact = true;
            for (u64 s : fs)
                if (powmod(omega, n / s, pi) == 1) exact = false;
            if (exact) break;
        }
        const u64 c2 = 2 % pi, cq = (other - 1) % pi;
        u64 prod = 1, z = 1;
        for (u64 k = 1; k < n; ++k) {
            z = mulmod(z, omega, pi);
            const u64 t1 = (powmod(z, ce.e_other, pi) + pi - 1) % pi;
            const u64 t2 = (powmod(z, ce.e_g, pi) + pi - 1) % pi;
            const u64 a = (mulmod(c2, t1, pi) + mulmod(t2, cq, pi)) % pi;
            prod = mulmod(prod, a, pi);
        }
        // CRT step
        mpz_class mp(static_cast<unsigned long>(pi));
        mpz_class diff = mpz_class(static_cast<unsigned long>(prod)) - residue;
        mpz_class inv;
        mpz_class mmod = modulus % mp;
        mpz_invert(inv.get_mpz_t(), mmod.get_mpz_t(), mp.get_mpz_t());
        mpz_class k = diff * inv;
        mpz_fdiv_r(k.get_mpz_t(), k.get_mpz_t(), mp.get_mpz_t());
        residue += modulus * k;
        modulus *= mp;
        have_bits += std::log2(static_cast<double>(pi));
    }
    // symmetric representative
    if (2 * residue > modulus) residue -= modulus;
    return residue;
}

mpz_class character_product_numeric(u64 p, u64 other, u64 g, long bits) {
    const auto ce = exponents(p, other, g);
    const u64 n = ce.n;
    BigComplex prod(BigFloat(bits, 1.0), BigFloat(bits, 0.0));
    const BigFloat two(bits, 2.0), qm1(bits, static_cast<double>(other - 1)), one(bits, 1.0);
    for (u64 k = 1; k < n; ++k) {
        auto z1 = BigComplex::unit_root(bits, static_cast<long>(k * ce.e_other % n), static_cast<long>(n));
        auto z2 = BigComplex::unit_root(bits, static_cast<long>(k * ce.e_g % n), static_cast<long>(n));
        z1.re -= one;
        z2.re -= one;
        prod = prod * (z1.scaled(two) + z2.scaled(qm1));
    }
    return prod.re.round();
}

long IndexFactor::valuation(u64 l) const {
    long v = 0;
    mpz_class num = abs(value.get_num()), den = value.get_den();
    while (mpz_divisible_ui_p(num.get_mpz_t(), l)) {
        mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), l);
        ++v;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), l)) {
        mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), l);
        --v;
    }
    return v;
}

namespace {

mpq_class assemble(u64 p, u64 q, const mpz_class& prod_p, const mpz_class& prod_q, long* two_exp) {
    // index = prod_p * prod_q / (2 |G|)
    const u64 G = (p - 1) * (q - 1) / 2;
    *two_exp = -1;
    mpz_class den = 2 * static_cast<unsigned long>(G);
    mpq_class v(prod_p * prod_q, den);
    v.canonicalize();
    return v;
}

}  // namespace

IndexFactor index_factor(u64 p, u64 q, u64 g, u64 h) {
    IndexFactor f;
    f.p = p;
    f.q = q;
    f.g = g;
    f.h = h;
    f.group_order = (p - 1) * (q - 1) / 2;
    f.product_p = character_product(p, q, g);
    f.product_q = character_product(q, p, h);
    if (f.product_p == 0 || f.product_q == 0) throw InvalidArgument("vanishing character product");
    f.value = assemble(p, q, f.product_p, f.product_q, &f.two_exponent);
    return f;
}

GcdReport gcd_over_pairs(u64 p, u64 q, u64 bound) {
    GcdReport rep;
    rep.p = p;
    rep.q = q;
    rep.bound = bound;
    const auto gs = all_primitive_roots(p), hs = all_primitive_roots(q);
    std::vector<mpz_class> pp, pq;
    mpz_class gp = 0, gq = 0;
    for (u64 g : gs) {
        pp.push_back(character_product(p, q, g));
        mpz_gcd(gp.get_mpz_t(), gp.get_mpz_t(), pp.back().get_mpz_t());
    }
    for (u64 h : hs) {
        pq.push_back(character_product(q, p, h));
        mpz_gcd(gq.get_mpz_t(), gq.get_mpz_t(), pq.back().get_mpz_t());
    }
    long te = 0;
    // gcd over all products a_i b_j is gcd(a_i) * gcd(b_j)
    rep.gcd = assemble(p, q, gp, gq, &te);
    rep.gcd_factored = Factored::of(rep.gcd, bound);
    std::size_t best_count = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < gs.size(); ++i) {
        for (std::size_t j = 0; j < hs.size(); ++j) {
            auto fac = Factored::of(assemble(p, q, pp[i], pq[j], &te), bound);
            std::size_t odd = 0;
            for (const auto& [s, e] : fac.primes) odd += s != 2 && e > 0;
            if (odd < best_count) {
                best_count = odd;
                rep.best_pair = {gs[i], hs[j]};
            }
            rep.per_pair.push_back({{gs[i], hs[j]}, std::move(fac)});
        }
    }
    return rep;
}

namespace {

// log |1 - exp(2 pi i num / den)| = log(2 sin(pi num / den)) for 0 < num < den
BigFloat log_chord(long bits, u64 num, u64 den) {
    num %= den;
    BigFloat s = BigFloat::pi(bits).mul_si(static_cast<long>(num)).div_si(static_cast<long>(den)).sin();
    return s.mul_si(2).abs().log();
}

BigFloat determinant(std::vector<std::vector<BigFloat>> a) {
    const std::size_t n = a.size();
    const long bits = n ? a[0][0].precision() : 64;
    BigFloat det(bits, 1.0);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (a[piv][c].abs() < a[r][c].abs()) piv = r;
        if (a[piv][c].is_zero()) return BigFloat(bits, 0.0);
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            BigFloat m = a[r][c] / a[c][c];
            for (std::size_t t = c; t < n; ++t) a[r][t] -= m * a[c][t];
        }
    }
    return det;
}

}  // namespace

RegulatorCheck regulator_identity_check(u64 p, u64 q, u64 g, u64 h, long bits) {
    const u64 n = p * q;
    // representatives of (Z/pq)^* / {+-1}
    std::vector<u64> reps;
    for (u64 b = 1; b < n; ++b)
        if (gcd_u64(b, n) == 1 && b < n - b) reps.push_back(b);
    const std::size_t G = reps.size();
    auto rep_index = [&](u64 b) {
        b %= n;
        if (b > n - b) b = n - b;
        return static_cast<std::size_t>(std::lower_bound(reps.begin(), reps.end(), b) - reps.begin());
    };
    auto f = [&](u64 b) {
        return log_chord(bits, b * (p + q) % n, n).mul_si(2) + log_chord(bits, g * b % p, p) -
               log_chord(bits, b % p, p) + log_chord(bits, h * b % q, q) - log_chord(bits, b % q, q);
    };
    std::vector<BigFloat> fv;
    for (u64 b : reps) fv.push_back(f(b));

    RegulatorCheck out;
    BigFloat rs(bits, 0.0);
    for (const auto& v : fv) rs += v;
    out.row_sum = std::fabs(rs.to_double());

    // reps[0] == 1
    std::vector<std::vector<BigFloat>> m(G - 1, std::vector<BigFloat>(G - 1, BigFloat(bits)));
    for (std::size_t i = 1; i < G; ++i)
        for (std::size_t j = 1; j < G; ++j) m[i - 1][j - 1] = fv[rep_index(reps[i] * reps[j])];
    BigFloat det = determinant(std::move(m)).abs();
    if (det.is_zero()) throw PrecisionInsufficient("regulator determinant vanished numerically");
    out.determinant_log10 = det.log10_abs();

    const u64 gp = find_primitive_root(p), gq = find_primitive_root(q);
    std::vector<u64> ip(p), iq(q);
    for (u64 a = 1; a < p; ++a) ip[a] = index_of(a, gp, p);
    for (u64 a = 1; a < q; ++a) iq[a] = index_of(a, gq, q);
    const long den = static_cast<long>((p - 1) * (q - 1));
    auto chi = [&](u64 a, u64 b, u64 x) {
        const long num = static_cast<long>((a * ip[x % p] * (q - 1) + b * iq[x % q] * (p - 1)) % static_cast<u64>(den));
        return BigComplex::unit_root(bits, num, den);
    };
    auto chi_inv = [&](u64 a, u64 b, u64 x) {
        auto c = chi(a, b, x);
        return BigComplex(c.re, -c.im);
    };
    const BigComplex one(BigFloat(bits, 1.0), BigFloat(bits, 0.0));
    BigComplex direct = one, closed = one;
    for (u64 a = 0; a < p - 1; ++a) {
        for (u64 b = 0; b < q - 1; ++b) {
            if ((a + b) % 2 || (a == 0 && b == 0)) continue;
            BigComplex s(bits);
            for (std::size_t i = 0; i < G; ++i) s = s + chi(a, b, reps[i]).scaled(fv[i]);
            direct = direct * s;

            BigComplex c(bits);
            if (a != 0 && b != 0) {
                BigComplex sum(bits);
                for (u64 x = 1; x < n; ++x)
                    if (gcd_u64(x, n) == 1) sum = sum + chi(a, b, x).scaled(log_chord(bits, x, n));
                c = chi_inv(a, b, (p + q) % n) * sum;
            } else {
                // conductor p when b == 0, conductor q when a == 0
                const bool cp = b == 0;
                const u64 f0 = cp ? p : q, other = cp ? q : p, root = cp ? g : h;
                auto at_mod = [&](u64 x) {
                    // character value of the residue x modulo the conductor, lifted by CRT
                    u64 y = x;
                    while (y % other == 0 || y % f0 != x % f0) ++y;
                    return cp ? chi(a, 0, y) : chi(0, b, y);
                };
                BigComplex sum(bits);
                for (u64 x = 1; x < f0; ++x) sum = sum + at_mod(x).scaled(log_chord(bits, x, f0));
                auto co = at_mod(other % f0);
                auto cg = at_mod(root % f0);
                BigComplex br = (BigComplex(co.re, -co.im) - one).scaled(BigFloat(bits, 2.0)) +
                                (BigComplex(cg.re, -cg.im) - one).scaled(BigFloat(bits, static_cast<double>(other - 1)));
                c = br.scaled(BigFloat(bits, 0.5)) * sum;
            }
            closed = closed * c;
        }
    }
    auto modulus = [&](const BigComplex& z) {
        BigFloat r = z.re * z.re + z.im * z.im;
        mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDN);
        return r.div_si(static_cast<long>(G));
    };
    BigFloat rhs = modulus(direct), rhs2 = modulus(closed);
    out.residual = ((rhs - det).abs() / det).to_double();
    out.closed_form_residual = ((rhs2 - det).abs() / det).to_double();
    return out;
}

}  // namespace hplus
