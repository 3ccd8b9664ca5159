#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hplus/charfactor.hpp"
#include "hplus/frobenius.hpp"
#include "hplus/groebner.hpp"
#include "hplus/step3.hpp"

namespace hplus {

// Univariate polynomial over F_l, coefficient of x^e at index e.
using FpPoly = std::vector<u64>;

// Monic irreducible factors of x^m - 1 over F_l (l prime, l not dividing m), sorted by degree then coefficients.
std::vector<FpPoly> factor_x_pow_minus_one(u64 m, u64 l);
std::string fp_poly_text(const FpPoly& f, char var);

struct RunConfig {
    u64 p = 0, q = 0;
    u64 l_bound = 10000;
    std::vector<u64> only_l;  // empty: every odd prime below l_bound
    unsigned m_cap = 8;  // also bounded by l^k < 2^32
    unsigned prime_budget = 8;
    unsigned stabilization_window = 3;
    u64 r_start = 0;
    u64 r_cap = 1000000000000ULL;
    long precision_cap = 20000;
    long min_digits = 500;
    unsigned threads = 0;
    std::string cache_path, out_path;
    std::string format = "table";

    void validate() const;
    // "key = value" lines; '#' starts a comment.
    static RunConfig from_text(const std::string& text, RunConfig base);
    static RunConfig from_text(const std::string& text);
};

struct DegreeCell {
    u64 d1 = 1, d2 = 1;
    std::vector<std::pair<u64, u64>> degrees;  // factor degrees (f1, f2) collapsing onto this cell
    RingShape shape(u64 p, u64 q, u64 l, unsigned k) const { return RingShape::make(p, q, l, k, d1, d2); }
};

// One cell per distinct (d1, d2), ordered by D1 * D2, then (D1, D2).
std::vector<DegreeCell> degree_grid(u64 p, u64 q, u64 l);

// Shares Frobenius records between cells, exponents and worker threads.
class FrobeniusStore {
public:
    explicit FrobeniusStore(std::string path = {}) : cache_(std::move(path)) {}
    GroupRingElement restricted(const SplitPrimeWitness& w, const EtaSetup& eta, const RingShape& shape);
    std::vector<SplitPrimeWitness> witnesses(u64 p, u64 q, u64 M, std::size_t count, const PrimeSearch& opts);
    void save() const;
    std::size_t misses() const { return cache_.misses(); }

private:
    std::mutex mu_;
    FrobeniusCache cache_;
    std::map<std::tuple<u64, u64, u64, u64, u64, std::size_t>, std::vector<SplitPrimeWitness>> witnesses_;
};

struct Step1Result {
    GroebnerBasis J;
    u64 exponent = 0;  // log_l |I_d / J|
    std::size_t primes_used = 0;
    bool trivial() const { return exponent == 0; }
};

Step1Result step1(const RingShape& shape, const EtaSetup& eta, const RunConfig& cfg, FrobeniusStore& store);

struct PhiPair {
    FpPoly phi_x, phi_y;
    u64 exponent = 0;  // log_l of the local quotient order
    std::string text() const;
};

// Irreducible pairs whose own cell is this one and whose local quotient (I + K)/(J + K) is nontrivial.
std::vector<PhiPair> contributing_phi_pairs(const GroebnerBasis& J, const DegreeCell& cell);

struct CellReport {
    DegreeCell cell;
    u64 D1 = 0, D2 = 0;
    u64 step1_exponent = 0;
    std::vector<u64> history;  // log_l |I_d / J^M| for M = l, l^2, ...
    u64 stable_M = 0;
    std::vector<PhiPair> pairs;
    u64 owned_exponent = 0;  // sum over pairs
    std::string ideal;       // J at the stable M
};

enum class LStatus { not_dividing, divides_index_only, h_plus_l_part_proved, inconclusive };
std::string to_string(LStatus s);

struct LReport {
    u64 l = 0;
    LStatus status = LStatus::not_dividing;
    std::pair<u64, u64> pair{0, 0};
    bool flagged_step1 = false;
    bool rescreened = false;
    bool survived_rescreen = false;
    std::vector<CellReport> cells;
    u64 B_exponent = 0, P_exponent = 0, gcd_exponent = 0;
    long h_plus_exponent = -1;  // set only when proved or short-circuited
    std::optional<std::string> certificate;  // JSON array, one entry per annihilator generator
    std::string note;
};

struct Report {
    u64 p = 0, q = 0;
    std::string gcd_text, gcd_odd;
    std::pair<u64, u64> best_pair{0, 0};
    std::vector<LReport> l_reports;
    std::size_t dlogs = 0;

    bool all_resolved() const;
    std::string h_plus_text() const;  // e.g. "3^2" or "5*19", "1" when nothing divides
    std::string l_column() const;
    std::string degree_column() const;
    std::string to_json() const;
    std::string to_csv() const;
    std::string to_table() const;
};

// Pair used for l: the best pair when its l-valuation equals the gcd's, otherwise the nearest pair that does
// (same h first, then same g, then any).
std::pair<u64, u64> pair_for_prime(const GcdReport& gcd, u64 l);

// Step 3 on stabilized ideals; sets status, h+ exponent, certificate and note from rep's B and P exponents.
// Any failure leaves the status inconclusive.
void certify(LReport& rep, const std::vector<GroebnerBasis>& ideals, const EtaSetup& eta, const RunConfig& cfg);

LReport run_prime(u64 l, const RunConfig& cfg, const GcdReport& gcd, FrobeniusStore& store);
Report run(const RunConfig& cfg);

}  // namespace hplus
