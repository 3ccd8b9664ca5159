#include "hplus/modarith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hplus/errors.hpp"

namespace hplus {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

u64 invmod(u64 a, u64 m) {
    if (m == 1) return 0;
    __int128 t = 0, nt = 1;
    __int128 r = m, nr = a % m;
    while (nr != 0) {
        __int128 qt = r / nr;
        __int128 tmp = t - qt * nt;
        t = nt;
        nt = tmp;
        tmp = r - qt * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw InvalidArgument(std::to_string(a) + " is not invertible mod " + std::to_string(m));
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    static const u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 s : small) {
        if (n % s == 0) return n == s;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d != n / d) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

u64 multiplicative_order(u64 a, u64 n) {
    if (gcd_u64(a % n, n) != 1) throw InvalidArgument("order of a non-unit");
    // the group order of (Z/n)^* via totient
    u64 phi = n;
    for (u64 s : prime_divisors(n)) phi = phi / s * (s - 1);
    u64 ord = phi;
    for (u64 s : prime_divisors(phi)) {
        while (ord % s == 0 && powmod(a, ord / s, n) == 1) ord /= s;
    }
    return ord;
}

unsigned valuation(u64 n, u64 l) {
    if (n == 0) return 0;
    unsigned v = 0;
    while (n % l == 0) {
        n /= l;
        ++v;
    }
    return v;
}

u64 find_primitive_root(u64 n) {
    if (!is_prime(n)) throw InvalidArgument(std::to_string(n) + " is not prime");
    if (n == 2) return 1;
    auto fs = prime_divisors(n - 1);
    for (u64 g = 2; g < n; ++g) {
        bool ok = true;
        for (u64 s : fs) {
            if (powmod(g, (n - 1) / s, n) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw InvalidArgument("no primitive root");
}

std::vector<u64> all_primitive_roots(u64 n) {
    u64 g = find_primitive_root(n);
    std::vector<u64> out;
    u64 v = 1;
    for (u64 e = 0; e < n - 1; ++e) {
        if (gcd_u64(e, n - 1) == 1) out.push_back(v);
        v = mulmod(v, g, n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

u64 index_of(u64 a, u64 g, u64 n) {
    a %= n;
    u64 v = 1;
    for (u64 e = 0; e < n - 1; ++e) {
        if (v == a) return e;
        v = mulmod(v, g, n);
    }
    throw InvalidArgument("index_of: not a power of the base");
}

ChainModulus ChainModulus::make(u64 l, unsigned k) {
    if (!is_prime(l)) throw InvalidArgument("modulus base must be prime");
    if (k == 0) throw InvalidArgument("exponent must be positive");
    ChainModulus cm;
    cm.l = l;
    cm.k = k;
    u128 M = 1;
    for (unsigned i = 0; i < k; ++i) {
        M *= l;
        if (M >= (u128(1) << 32)) throw InvalidArgument("l^k must stay below 2^32");
    }
    cm.M = static_cast<u64>(M);
    return cm;
}

unsigned ChainModulus::val(u64 c) const {
    c %= M;
    if (c == 0) return k;
    unsigned v = 0;
    while (c % l == 0) {
        c /= l;
        ++v;
    }
    return v;
}

u64 ChainModulus::unit_part(u64 c) const {
    c %= M;
    if (c == 0) return 0;
    while (c % l == 0) c /= l;
    return c;
}

u64 ChainModulus::inv_unit(u64 u) const { return invmod(u % M, M); }

u64 ChainModulus::lpow(unsigned e) const {
    if (e >= k) return 0;
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) r *= l;
    return r;
}

u64 canonical_zeta(u64 r, u64 n) {
    if ((r - 1) % n != 0) throw InvalidArgument("n does not divide r - 1");
    return powmod(find_primitive_root(r), (r - 1) / n, r);
}

SplitPrimeWitness make_witness(u64 p, u64 q, u64 M, u64 r) {
    u64 L = lcm_u64(p * q, 2 * M);
    if (!is_prime(r) || r % L != 1) {
        throw InvalidArgument("r = " + std::to_string(r) + " is not a prime = 1 mod " + std::to_string(L));
    }
    SplitPrimeWitness w;
    w.p = p;
    w.q = q;
    w.M = M;
    w.r = r;
    w.zeta_p = canonical_zeta(r, p);
    w.zeta_q = canonical_zeta(r, q);
    w.zeta_M = canonical_zeta(r, M);
    return w;
}

namespace {

std::vector<u64> small_primes_upto(u64 n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

}  // namespace

std::vector<SplitPrimeWitness> search_split_primes(u64 p, u64 q, u64 M, std::size_t count,
                                                   const PrimeSearch& opts) {
    const u64 L = lcm_u64(p * q, 2 * M);
    std::vector<SplitPrimeWitness> out;
    if (count == 0) return out;
    u64 t = opts.start <= 1 ? 0 : (opts.start - 1 + L - 1) / L;
    const u64 sqrt_cap = static_cast<u64>(std::sqrt(static_cast<long double>(opts.r_cap))) + 2;
    const auto base = small_primes_upto(std::min<u64>(sqrt_cap, 1u << 22));
    std::vector<char> composite;
    while (out.size() < count) {
        const u64 r_lo = 1 + L * t;
        if (r_lo > opts.r_cap) break;
        u64 len = opts.segment;
        if (L * (t + len) + 1 > opts.r_cap) len = (opts.r_cap - 1) / L - t + 1;
        const u64 r_hi = 1 + L * (t + len - 1);
        composite.assign(len, 0);
        for (u64 s : base) {
            if (s * s > r_hi) break;
            if (L % s == 0) continue;
            // 1 + L t = 0 mod s
            u64 t0 = (s - invmod(L % s, s)) % s;
            u64 first = t0 >= t % s ? t0 - t % s : t0 + s - t % s;
            for (u64 i = first; i < len; i += s) {
                if (1 + L * (t + i) != s) composite[i] = 1;
            }
        }
        for (u64 i = 0; i < len && out.size() < count; ++i) {
            if (composite[i]) continue;
            u64 r = 1 + L * (t + i);
            if (r < opts.start || !is_prime(r)) continue;
            out.push_back(make_witness(p, q, M, r));
        }
        t += len;
    }
    if (out.size() < count) {
        throw SearchExhausted("found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                              " primes below " + std::to_string(opts.r_cap));
    }
    return out;
}

DlogContext::DlogContext(u64 r, u64 zeta_M, u64 l, unsigned k) : r_(r), zeta_(zeta_M), l_(l), k_(k) {
    M_ = 1;
    for (unsigned i = 0; i < k; ++i) M_ *= l;
    gamma_ = powmod(zeta_M, M_ / l, r);
    if (gamma_ == 1 || powmod(zeta_M, M_, r) != 1) throw InvalidArgument("zeta_M does not have order M");
    m_ = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(l))));
    u64 v = 1;
    for (u64 j = 0; j < m_; ++j) {
        baby_.emplace(v, j);
        v = mulmod(v, gamma_, r);
    }
    giant_inv_ = invmod(powmod(gamma_, m_, r), r);
}

u64 DlogContext::digit(u64 h) const {
    u64 y = h;
    for (u64 i = 0; i <= m_; ++i) {
        auto it = baby_.find(y);
        if (it != baby_.end()) {
            u64 d = i * m_ + it->second;
            if (d < l_) return d;
        }
        y = mulmod(y, giant_inv_, r_);
    }
    throw NotInSubgroup("value is not an l-th root of unity");
}

u64 DlogContext::log(u64 v) const {
    v %= r_;
    if (v == 0 || powmod(v, M_, r_) != 1) throw NotInSubgroup("value is not in mu_M");
    const u64 zinv = invmod(zeta_, r_);
    u64 x = 0;
    u64 lp = 1;
    for (unsigned i = 0; i < k_; ++i) {
        // strip the digits found so far and project onto the order-l subgroup
        u64 w = mulmod(v, powmod(zinv, x, r_), r_);
        u64 h = powmod(w, M_ / (lp * l_), r_);
        x += digit(h) * lp;
        lp *= l_;
    }
    return x % M_;
}

u64 dlog_mu_M(u64 v, u64 zeta_M, u64 l, unsigned k, u64 r) { return DlogContext(r, zeta_M, l, k).log(v); }

}  // namespace hplus
