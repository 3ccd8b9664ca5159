#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <tuple>

#include "hplus/groebner.hpp"
#include "hplus/grpring.hpp"
#include "hplus/modarith.hpp"

namespace hplus {

// Data fixing the unit eta and its conjugates: the pair (g, h) and the generators gamma, delta
// of the Galois action (smallest primitive roots mod p and q).
struct EtaSetup {
    u64 p = 0, q = 0, g = 0, h = 0;
    u64 gamma = 0, delta = 0;
    static EtaSetup make(u64 p, u64 q, u64 g, u64 h);
};

// eta_(i,j) mod r for the witness's roots of unity.
u64 eta_image(u64 i, u64 j, const EtaSetup& eta, const SplitPrimeWitness& w);

struct FrobeniusRecord {
    SplitPrimeWitness witness;
    u64 g = 0, h = 0;
    RingShape shape;
    GroupRingElement poly;
};

// Coefficient of x^i y^j is log_zeta_M(eta_(i,j)^((r-1)/M)), i in 1..p-1, j in 1..(q-1)/2,
// exponents stored modulo (p-1, q-1).
FrobeniusRecord frobenius_full(const SplitPrimeWitness& w, const EtaSetup& eta);
// Exponent-class collapse of a full record onto a degree-cell shape.
FrobeniusRecord frobenius_restricted(const FrobeniusRecord& full, const RingShape& shape);

struct UnitShift {
    u64 unit = 0;
    u64 sx = 0, sy = 0;
};

// Finds u in (Z/M)^* and a monomial x^sx y^sy with u x^sx y^sy a = b modulo the ideal.
// Frobenius polynomials at different primes above r differ by such a factor.
std::optional<UnitShift> match_up_to_unit_and_shift(const GroupRingElement& a, const GroupRingElement& b,
                                                    const GroebnerBasis& modulo);

// Number of discrete logarithms evaluated so far in this process.
std::size_t dlog_evaluations();

u64 witness_hash(const SplitPrimeWitness& w, const EtaSetup& eta);

// Full records keyed by (p, q, g, h, r, M), persisted one per line.
class FrobeniusCache {
public:
    FrobeniusCache() = default;
    explicit FrobeniusCache(std::string path);

    const FrobeniusRecord& get(const SplitPrimeWitness& w, const EtaSetup& eta);
    void save() const;
    std::size_t size() const { return records_.size(); }
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

    static std::string serialize(const FrobeniusRecord& rec, const EtaSetup& eta);

private:
    using Key = std::tuple<u64, u64, u64, u64, u64, u64>;
    std::string path_;
    std::map<Key, std::pair<u64, FrobeniusRecord>> records_;
    std::map<Key, std::string> lines_;
    std::size_t hits_ = 0, misses_ = 0;
};

}  // namespace hplus
