#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace hplus {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 b, u64 e, u64 m);
// Inverse of a modulo m; throws InvalidArgument when gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);
u64 gcd_u64(u64 a, u64 b);
u64 lcm_u64(u64 a, u64 b);

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);
// Distinct prime divisors in increasing order (trial division).
std::vector<u64> prime_divisors(u64 n);
std::vector<u64> divisors(u64 n);
// Multiplicative order of a modulo n (gcd(a, n) = 1).
u64 multiplicative_order(u64 a, u64 n);
unsigned valuation(u64 n, u64 l);

u64 find_primitive_root(u64 n);
std::vector<u64> all_primitive_roots(u64 n);
// Discrete log of a to base g modulo the prime n, by table walk.
u64 index_of(u64 a, u64 g, u64 n);

// Z/l^k with helpers for valuations and unit parts.
struct ChainModulus {
    u64 l = 0;
    unsigned k = 0;
    u64 M = 0;

    static ChainModulus make(u64 l, unsigned k);
    unsigned val(u64 c) const;          // k for c == 0
    u64 unit_part(u64 c) const;          // c / l^val(c)
    u64 inv_unit(u64 u) const;           // inverse of a unit
    u64 lpow(unsigned e) const;          // l^e mod M
    bool operator==(const ChainModulus& o) const { return l == o.l && k == o.k; }
};

// Prime r = 1 mod lcm(pq, 2M) together with the canonical roots of unity.
struct SplitPrimeWitness {
    u64 p = 0, q = 0, M = 0;
    u64 r = 0;
    u64 zeta_p = 0, zeta_q = 0, zeta_M = 0;
};

// zeta_n = g^((r-1)/n) for the least primitive root g mod r.
u64 canonical_zeta(u64 r, u64 n);
SplitPrimeWitness make_witness(u64 p, u64 q, u64 M, u64 r);

struct PrimeSearch {
    u64 start = 0;
    u64 r_cap = 1000000000000ULL;
    u64 segment = 1 << 16;
};

// First `count` primes r >= start with r = 1 mod lcm(pq, 2M), increasing.
std::vector<SplitPrimeWitness> search_split_primes(u64 p, u64 q, u64 M, std::size_t count,
                                                   const PrimeSearch& opts = {});

// Logs to base zeta_M in mu_M of F_r, digit by digit with baby-step giant-step.
class DlogContext {
public:
    DlogContext(u64 r, u64 zeta_M, u64 l, unsigned k);
    u64 log(u64 v) const;
    u64 modulus() const { return M_; }

private:
    u64 r_, zeta_, l_, M_;
    unsigned k_;
    u64 gamma_;       // element of order l
    u64 giant_inv_;   // gamma^-m
    u64 m_;
    std::unordered_map<u64, u64> baby_;
    u64 digit(u64 h) const;
};

u64 dlog_mu_M(u64 v, u64 zeta_M, u64 l, unsigned k, u64 r);

}  // namespace hplus
