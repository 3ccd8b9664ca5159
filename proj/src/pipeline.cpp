#include "hplus/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "hplus/errors.hpp"

namespace hplus {

namespace {

// ---- polynomials over F_l ----

void fp_trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, u64 l) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % l;
    }
    fp_trim(r);
    return r;
}

// a mod b, quotient into q when given
FpPoly fp_divmod(FpPoly a, const FpPoly& b, u64 l, FpPoly* q = nullptr) {
    fp_trim(a);
    const std::size_t db = b.size() - 1;
    const u64 inv = invmod(b.back(), l);
    if (q) q->assign(a.size() >= b.size() ? a.size() - db : 0, 0);
    while (a.size() >= b.size()) {
        const u64 c = a.back() * inv % l;
        const std::size_t shift = a.size() - 1 - db;
        if (q) (*q)[shift] = c;
        for (std::size_t t = 0; t <= db; ++t) a[shift + t] = (a[shift + t] + (l - c) * b[t]) % l;
        fp_trim(a);
    }
    if (q) fp_trim(*q);
    return a;
}

FpPoly fp_monic(FpPoly f, u64 l) {
    fp_trim(f);
    if (f.empty()) return f;
    const u64 inv = invmod(f.back(), l);
    for (auto& c : f) c = c * inv % l;
    return f;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, u64 l) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_divmod(a, b, l);
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(a, l);
}

FpPoly fp_powmod(FpPoly base, u64 e, const FpPoly& m, u64 l) {
    FpPoly r{1};
    base = fp_divmod(base, m, l);
    while (e) {
        if (e & 1) r = fp_divmod(fp_mul(r, base, l), m, l);
        base = fp_divmod(fp_mul(base, base, l), m, l);
        e >>= 1;
    }
    return r;
}

// Equal-degree splitting of a product of distinct irreducibles of degree f.
void fp_split(const FpPoly& F, std::size_t f, u64 l, std::mt19937_64& rng, std::vector<FpPoly>& out) {
    const std::size_t n = F.size() - 1;
    if (n == f) {
        out.push_back(F);
        return;
    }
    std::uniform_int_distribution<u64> coef(0, l - 1);
    for (;;) {
        FpPoly a(n);
        for (auto& c : a) c = coef(rng);
        fp_trim(a);
        if (a.size() < 2) continue;
        // a^((l^f - 1)/2) = (prod_{i<f} a^(l^i))^((l-1)/2)
        FpPoly t = fp_divmod(a, F, l), acc = t;
        for (std::size_t i = 1; i < f; ++i) {
            t = fp_powmod(t, l, F, l);
            acc = fp_divmod(fp_mul(acc, t, l), F, l);
        }
        FpPoly b = fp_powmod(acc, (l - 1) / 2, F, l);
        if (b.empty()) b.push_back(0);
        b[0] = (b[0] + l - 1) % l;
        fp_trim(b);
        const FpPoly g = fp_gcd(F, b, l);
        const std::size_t dg = g.size() - 1;
        if (dg == 0 || dg == n) continue;
        FpPoly h;
        fp_divmod(F, g, l, &h);
        fp_split(g, f, l, rng, out);
        fp_split(fp_monic(h, l), f, l, rng, out);
        return;
    }
}

u64 order_mod(u64 l, u64 e) { return e == 1 ? 1 : multiplicative_order(l % e, e); }

// gcd(n, l^f - 1)
u64 cell_order(u64 n, u64 l, u64 f) {
    const u64 t = (powmod(l % n, f, n) + n - 1) % n;
    return gcd_u64(n, t);
}

u64 prime_to_l(u64 n, u64 l) {
    while (n % l == 0) n /= l;
    return n;
}

long exponent_of(const Factored& f, u64 l) {
    long e = f.valuation(l);
    mpz_class num = f.cofactor.get_num(), den = f.cofactor.get_den();
    const mpz_class L = static_cast<unsigned long>(l);
    while (num != 0 && num % L == 0) {
        num /= L;
        ++e;
    }
    while (den % L == 0) {
        den /= L;
        --e;
    }
    return e;
}

const Factored& pair_factored(const GcdReport& gcd, std::pair<u64, u64> pr) {
    for (const auto& [key, fac] : gcd.per_pair)
        if (key == pr) return fac;
    throw InvalidArgument("pair is not a pair of primitive roots");
}

GroupRingElement lifted_factor(const RingShape& shape, const FpPoly& phi, bool in_x, u64 stride) {
    GroupRingElement f(shape);
    for (std::size_t e = 0; e < phi.size(); ++e) {
        if (phi[e] == 0) continue;
        const u64 ex = e * stride;
        f += in_x ? GroupRingElement::monomial(shape, ex, 0, phi[e]) : GroupRingElement::monomial(shape, 0, ex, phi[e]);
    }
    return f;
}

u64 lpow(u64 l, unsigned a) {
    u64 r = 1;
    for (unsigned i = 0; i < a; ++i) r *= l;
    return r;
}

std::string power_text(u64 l, long e) {
    if (e <= 0) return "1";
    return e == 1 ? std::to_string(l) : std::to_string(l) + "^" + std::to_string(e);
}

}  // namespace

std::vector<FpPoly> factor_x_pow_minus_one(u64 m, u64 l) {
    if (m == 0 || l < 3 || !is_prime(l) || m % l == 0) throw InvalidArgument("need an odd prime l not dividing m");
    std::vector<FpPoly> out;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ (m * 1000003ULL + l));
    for (u64 e : divisors(m)) {
        const IntPoly phi = cyclotomic_polynomial(e);
        FpPoly f(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) {
            mpz_class c = phi[i] % static_cast<unsigned long>(l);
            if (c < 0) c += static_cast<unsigned long>(l);
            f[i] = c.get_ui();
        }
        fp_split(f, order_mod(l, e), l, rng, out);
    }
    std::sort(out.begin(), out.end(), [](const FpPoly& a, const FpPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return out;
}

std::string fp_poly_text(const FpPoly& f, char var) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t e = f.size(); e-- > 0;) {
        if (f[e] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (f[e] != 1 || e == 0) os << f[e];
        if (e >= 1) os << var;
        if (e > 1) os << "^" << e;
    }
    return first ? "0" : os.str();
}

void RunConfig::validate() const {
    if (p < 3 || q < 3 || !is_prime(p) || !is_prime(q)) throw InvalidArgument("p and q must be odd primes");
    if (p >= q) throw InvalidArgument("need p < q");
    if (l_bound < 3 || m_cap == 0 || prime_budget == 0 || stabilization_window == 0 || r_cap == 0 ||
        precision_cap <= 0 || min_digits <= 0) {
        throw InvalidArgument("caps must be positive");
    }
    for (u64 l : only_l)
        if (l < 3 || !is_prime(l)) throw InvalidArgument("l must be an odd prime");
    if (format != "json" && format != "csv" && format != "table") throw InvalidArgument("unknown format " + format);
}

RunConfig RunConfig::from_text(const std::string& text, RunConfig cfg) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto num = [&](const std::string& v) {
        try {
            std::size_t pos = 0;
            const unsigned long long x = std::stoull(v, &pos);
            if (pos != v.size()) throw ParseError("");
            return static_cast<u64>(x);
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": expected a number, got '" + v + "'");
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        const auto eq = line.find('=');
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": missing '='");
        std::string key = strip(line.substr(0, eq)), val = strip(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '-', '_');
        if (key == "p") cfg.p = num(val);
        else if (key == "q") cfg.q = num(val);
        else if (key == "l_bound") cfg.l_bound = num(val);
        else if (key == "l") {
            cfg.only_l.clear();
            std::istringstream ls(val);
            std::string tok;
            while (std::getline(ls, tok, ',')) cfg.only_l.push_back(num(strip(tok)));
        }
        else if (key == "m_cap") cfg.m_cap = static_cast<unsigned>(num(val));
        else if (key == "prime_budget") cfg.prime_budget = static_cast<unsigned>(num(val));
        else if (key == "stabilization_window") cfg.stabilization_window = static_cast<unsigned>(num(val));
        else if (key == "r_start") cfg.r_start = num(val);
        else if (key == "r_cap") cfg.r_cap = num(val);
        else if (key == "precision_cap") cfg.precision_cap = static_cast<long>(num(val));
        else if (key == "min_digits") cfg.min_digits = static_cast<long>(num(val));
        else if (key == "threads") cfg.threads = static_cast<unsigned>(num(val));
        else if (key == "cache") cfg.cache_path = val;
        else if (key == "out") cfg.out_path = val;
        else if (key == "format") cfg.format = val;
        else throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

RunConfig RunConfig::from_text(const std::string& text) { return from_text(text, RunConfig()); }

std::vector<DegreeCell> degree_grid(u64 p, u64 q, u64 l) {
    if (l < 3 || !is_prime(l)) throw InvalidArgument("l must be an odd prime");
    const u64 m1 = prime_to_l(p - 1, l), m2 = prime_to_l(q - 1, l);
    std::set<u64> f1s, f2s;
    for (u64 e : divisors(m1)) f1s.insert(order_mod(l, e));
    for (u64 e : divisors(m2)) f2s.insert(order_mod(l, e));
    std::map<std::pair<u64, u64>, DegreeCell> cells;
    for (u64 f1 : f1s) {
        for (u64 f2 : f2s) {
            const u64 d1 = cell_order(m1, l, f1), d2 = cell_order(m2, l, f2);
            DegreeCell& c = cells[{d1, d2}];
            c.d1 = d1;
            c.d2 = d2;
            c.degrees.push_back({f1, f2});
        }
    }
    std::vector<DegreeCell> out;
    for (auto& [k, c] : cells) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), [](const DegreeCell& a, const DegreeCell& b) {
        if (a.d1 * a.d2 != b.d1 * b.d2) return a.d1 * a.d2 < b.d1 * b.d2;
        return std::make_pair(a.d1, a.d2) < std::make_pair(b.d1, b.d2);
    });
    return out;
}

GroupRingElement FrobeniusStore::restricted(const SplitPrimeWitness& w, const EtaSetup& eta, const RingShape& shape) {
    std::lock_guard<std::mutex> lk(mu_);
    return frobenius_restricted(cache_.get(w, eta), shape).poly;
}

std::vector<SplitPrimeWitness> FrobeniusStore::witnesses(u64 p, u64 q, u64 M, std::size_t count,
                                                        const PrimeSearch& opts) {
    const auto key = std::make_tuple(p, q, M, opts.start, opts.r_cap, count);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = witnesses_.find(key);
        if (it != witnesses_.end()) return it->second;
    }
    auto ws = search_split_primes(p, q, M, count, opts);
    std::lock_guard<std::mutex> lk(mu_);
    witnesses_[key] = ws;
    return ws;
}

void FrobeniusStore::save() const { cache_.save(); }

Step1Result step1(const RingShape& shape, const EtaSetup& eta, const RunConfig& cfg, FrobeniusStore& store) {
    const GroebnerBasis Id = GroebnerBasis::compute(shape, augmentation_generators(shape));
    const u64 e_id = Id.quotient_exponent();
    Step1Result res;
    res.J = GroebnerBasis::compute(shape, {make_cnj(shape)});
    PrimeSearch opts;
    opts.start = cfg.r_start;
    opts.r_cap = cfg.r_cap;
    const auto ws = store.witnesses(shape.p, shape.q, shape.M(), cfg.prime_budget, opts);
    unsigned unchanged = 0;
    for (const auto& w : ws) {
        ++res.primes_used;
        const GroupRingElement f = store.restricted(w, eta, shape);
        if (res.J.contains(f)) {
            ++unchanged;
        } else {
            res.J = res.J.extended(f);
            unchanged = 0;
        }
        res.exponent = res.J.quotient_exponent() - e_id;
        if (res.exponent == 0 || unchanged >= cfg.stabilization_window) return res;
    }
    throw BudgetExhausted("ideal still growing after " + std::to_string(ws.size()) + " primes at " + shape.describe());
}

std::string PhiPair::text() const { return "(" + fp_poly_text(phi_x, 'x') + "," + fp_poly_text(phi_y, 'y') + ")"; }

std::vector<PhiPair> contributing_phi_pairs(const GroebnerBasis& J, const DegreeCell& cell) {
    const RingShape& s = J.shape();
    const u64 l = s.l();
    const GroebnerBasis Id = GroebnerBasis::compute(s, augmentation_generators(s));
    std::vector<PhiPair> out;
    if (J.quotient_exponent() == Id.quotient_exponent()) return out;
    const u64 m1 = prime_to_l(s.p - 1, l), m2 = prime_to_l(s.q - 1, l);
    auto own = [&](const std::vector<FpPoly>& fs, u64 m, u64 d) {
        std::vector<FpPoly> r;
        for (const auto& f : fs)
            if (cell_order(m, l, f.size() - 1) == d) r.push_back(f);
        return r;
    };
    const auto xs = own(factor_x_pow_minus_one(cell.d1, l), m1, cell.d1);
    const auto ys = own(factor_x_pow_minus_one(cell.d2, l), m2, cell.d2);
    const u64 sx = lpow(l, s.a1), sy = lpow(l, s.a2);
    for (const auto& fx : xs) {
        GroupRingElement kx = lifted_factor(s, fx, true, sx), px = kx;
        for (unsigned t = 1; t < s.k(); ++t) px = px * kx;
        for (const auto& fy : ys) {
            GroupRingElement ky = lifted_factor(s, fy, false, sy), py = ky;
            for (unsigned t = 1; t < s.k(); ++t) py = py * ky;
            const u64 eI = Id.extended(std::vector<GroupRingElement>{px, py}).quotient_exponent();
            const u64 eJ = J.extended(std::vector<GroupRingElement>{px, py}).quotient_exponent();
            if (eJ > eI) out.push_back({fx, fy, eJ - eI});
        }
    }
    return out;
}

std::string to_string(LStatus s) {
    switch (s) {
        case LStatus::not_dividing: return "not_dividing";
        case LStatus::divides_index_only: return "divides_index_only";
        case LStatus::h_plus_l_part_proved: return "h_plus_l_part_proved";
        case LStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

std::pair<u64, u64> pair_for_prime(const GcdReport& gcd, u64 l) {
    const long target = exponent_of(gcd.gcd_factored, l);
    const auto best = gcd.best_pair;
    auto ok = [&](std::pair<u64, u64> pr) { return exponent_of(pair_factored(gcd, pr), l) == target; };
    if (ok(best)) return best;
    for (u64 g : all_primitive_roots(gcd.p))
        if (ok({g, best.second})) return {g, best.second};
    for (u64 h : all_primitive_roots(gcd.q))
        if (ok({best.first, h})) return {best.first, h};
    for (const auto& [pr, fac] : gcd.per_pair)
        if (exponent_of(fac, l) == target) return pr;
    return best;
}

namespace {

bool fits_modulus(u64 l, unsigned k) {
    unsigned __int128 M = 1;
    for (unsigned i = 0; i < k; ++i) M *= l;
    return M < (static_cast<unsigned __int128>(1) << 32);
}

struct CellState {
    DegreeCell cell;
    CellReport rep;
    std::vector<GroebnerBasis> J;  // index k - 1
    bool stable = false;
};

}  // namespace

void certify(LReport& rep, const std::vector<GroebnerBasis>& ideals, const EtaSetup& eta, const RunConfig& cfg) {
    Step3Options opt;
    opt.min_digits = cfg.min_digits;
    opt.max_digits = cfg.precision_cap;
    opt.threads = cfg.threads;
    std::string certs;
    try {
        for (const auto& J : ideals) {
            const Step3Report s3 = run_step3(J, eta, opt);
            if (!s3.proved) {
                rep.status = LStatus::inconclusive;
                rep.h_plus_exponent = -1;
                std::string why = s3.attempts.empty() ? "no annihilator generator" : s3.attempts.back().verdict;
                rep.note = "step 3 inconclusive at M = " + std::to_string(s3.M) + ": " + why;
                return;
            }
            for (const Step3Attempt* a : s3.successes()) {
                if (!certs.empty()) certs += ",";
                certs += certificate_json(*a, eta);
            }
        }
    } catch (const Error& e) {
        rep.status = LStatus::inconclusive;
        rep.h_plus_exponent = -1;
        rep.note = e.what();
        return;
    }
    rep.status = LStatus::h_plus_l_part_proved;
    rep.h_plus_exponent = static_cast<long>(rep.B_exponent - rep.P_exponent);
    rep.certificate = "[" + certs + "]";
}

LReport run_prime(u64 l, const RunConfig& cfg, const GcdReport& gcd, FrobeniusStore& store) {
    const u64 p = cfg.p, q = cfg.q;
    LReport rep;
    rep.l = l;
    rep.gcd_exponent = static_cast<u64>(std::max(0L, exponent_of(gcd.gcd_factored, l)));
    const auto best = gcd.best_pair;
    rep.pair = best;
    try {
        const auto grid = degree_grid(p, q, l);
        auto screen = [&](std::pair<u64, u64> pr, std::vector<CellState>& states) {
            const EtaSetup eta = EtaSetup::make(p, q, pr.first, pr.second);
            bool any = false;
            states.clear();
            for (const auto& cell : grid) {
                const Step1Result s1 = step1(cell.shape(p, q, l, 1), eta, cfg, store);
                if (s1.trivial()) continue;
                any = true;
                CellState st;
                st.cell = cell;
                st.rep.cell = cell;
                st.rep.D1 = s1.J.shape().D1;
                st.rep.D2 = s1.J.shape().D2;
                st.rep.step1_exponent = s1.exponent;
                st.rep.history.push_back(s1.exponent);
                st.J.push_back(s1.J);
                states.push_back(std::move(st));
            }
            return any;
        };
        std::vector<CellState> states;
        rep.flagged_step1 = screen(best, states);
        if (!rep.flagged_step1) {
            if (rep.gcd_exponent > 0) {
                rep.status = LStatus::inconclusive;
                rep.note = "l divides the index but step 1 found a trivial quotient";
            }
            return rep;
        }
        const auto lp = pair_for_prime(gcd, l);
        rep.pair = lp;
        if (lp != best) {
            rep.rescreened = true;
            rep.survived_rescreen = screen(lp, states);
            if (!rep.survived_rescreen) {
                rep.note = "eliminated by the pair (" + std::to_string(lp.first) + "," + std::to_string(lp.second) + ")";
                return rep;
            }
        } else {
            rep.survived_rescreen = true;
        }
        rep.P_exponent = static_cast<u64>(std::max(0L, exponent_of(pair_factored(gcd, lp), l)));
        const EtaSetup eta = EtaSetup::make(p, q, lp.first, lp.second);

        auto owned_total = [&]() {
            u64 t = 0;
            for (auto& st : states) {
                st.rep.pairs = contributing_phi_pairs(st.J.back(), st.cell);
                st.rep.owned_exponent = 0;
                for (const auto& pp : st.rep.pairs) st.rep.owned_exponent += pp.exponent;
                t += st.rep.owned_exponent;
            }
            return t;
        };
        auto finish = [&]() {
            for (auto& st : states) {
                st.rep.stable_M = st.J.back().shape().M();
                st.rep.ideal = st.J.back().dump();
                rep.cells.push_back(st.rep);
            }
        };

        // Step 2: raise M until two consecutive orders agree in every cell
        u64 total = owned_total();
        for (unsigned k = 1; k <= cfg.m_cap; ++k) {
            bool all_stable = true;
            for (auto& st : states) {
                if (st.stable) continue;
                if (k + 1 > cfg.m_cap || !fits_modulus(l, k + 1)) {
                    rep.B_exponent = total;
                    finish();
                    throw MCapReached("orders still rising at M = " + power_text(l, k));
                }
                const Step1Result s = step1(st.cell.shape(p, q, l, k + 1), eta, cfg, store);
                st.rep.history.push_back(s.exponent);
                if (s.exponent == st.rep.history[st.rep.history.size() - 2]) {
                    st.stable = true;
                } else {
                    st.J.push_back(s.J);
                    all_stable = false;
                }
            }
            total = owned_total();
            if (all_stable) break;
        }
        rep.B_exponent = total;
        finish();

        if (rep.B_exponent == rep.gcd_exponent) {
            rep.status = rep.gcd_exponent > 0 ? LStatus::divides_index_only : LStatus::not_dividing;
            rep.h_plus_exponent = 0;
            return rep;
        }
        if (rep.B_exponent < rep.P_exponent) {
            rep.status = LStatus::inconclusive;
            rep.note = "quotient order below the index valuation";
            return rep;
        }
        std::vector<GroebnerBasis> ideals;
        for (const auto& st : states)
            if (st.rep.owned_exponent > 0) ideals.push_back(st.J.back());
        certify(rep, ideals, eta, cfg);
    } catch (const Error& e) {
        rep.status = LStatus::inconclusive;
        if (rep.note.empty()) rep.note = e.what();
    }
    return rep;
}

bool Report::all_resolved() const {
    for (const auto& r : l_reports)
        if (r.status == LStatus::inconclusive) return false;
    return true;
}

std::string Report::h_plus_text() const {
    std::string s;
    for (const auto& r : l_reports) {
        if (r.status != LStatus::h_plus_l_part_proved || r.h_plus_exponent <= 0) continue;
        if (!s.empty()) s += "*";
        s += power_text(r.l, r.h_plus_exponent);
    }
    return s.empty() ? "1" : s;
}

std::string Report::l_column() const {
    std::string s;
    for (const auto& r : l_reports) {
        if (!r.flagged_step1 || !r.survived_rescreen || r.gcd_exponent > 0) continue;
        if (!s.empty()) s += ",";
        s += std::to_string(r.l);
    }
    return s.empty() ? "-" : s;
}

std::string Report::degree_column() const {
    std::string s;
    for (const auto& r : l_reports) {
        if (r.status != LStatus::h_plus_l_part_proved || r.h_plus_exponent <= 0) continue;
        for (const auto& c : r.cells) {
            if (c.owned_exponent == 0) continue;
            if (!s.empty()) s += " ";
            s += "(" + std::to_string(c.D1) + "," + std::to_string(c.D2) + ")";
            break;
        }
    }
    return s.empty() ? "-" : s;
}

std::string Report::to_json() const {
    nlohmann::json j;
    j["p"] = p;
    j["q"] = q;
    j["gcd"] = gcd_text;
    j["gcd_odd_small"] = gcd_odd;
    j["best_pair"] = {best_pair.first, best_pair.second};
    nlohmann::json ls = nlohmann::json::array();
    for (const auto& r : l_reports) {
        nlohmann::json x;
        x["l"] = r.l;
        x["status"] = to_string(r.status);
        x["pair"] = {r.pair.first, r.pair.second};
        x["flagged_step1"] = r.flagged_step1;
        x["rescreened"] = r.rescreened;
        x["survived_rescreen"] = r.survived_rescreen;
        x["B_order_l"] = power_text(r.l, static_cast<long>(r.B_exponent));
        x["P_valuation"] = r.P_exponent;
        x["gcd_valuation"] = r.gcd_exponent;
        x["h_plus_l_part"] = r.h_plus_exponent < 0 ? nlohmann::json(nullptr) : nlohmann::json(power_text(r.l, r.h_plus_exponent));
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& c : r.cells) {
            nlohmann::json cj;
            cj["d"] = {c.cell.d1, c.cell.d2};
            cj["degree"] = {c.D1, c.D2};
            nlohmann::json fs = nlohmann::json::array();
            for (const auto& [f1, f2] : c.cell.degrees) fs.push_back({f1, f2});
            cj["factor_degrees"] = fs;
            cj["order_history"] = c.history;
            cj["stable_M"] = c.stable_M;
            nlohmann::json ps = nlohmann::json::array();
            for (const auto& pp : c.pairs) ps.push_back({{"phi_x", fp_poly_text(pp.phi_x, 'x')}, {"phi_y", fp_poly_text(pp.phi_y, 'y')}, {"order", power_text(r.l, static_cast<long>(pp.exponent))}});
            cj["phi_pairs"] = ps;
            cj["ideal"] = c.ideal;
            cells.push_back(cj);
        }
        x["cells"] = cells;
        if (r.certificate) x["step3_certificate"] = nlohmann::json::parse(*r.certificate);
        if (!r.note.empty()) x["note"] = r.note;
        ls.push_back(x);
    }
    j["l_reports"] = ls;
    j["table_row"] = {{"f", std::to_string(p) + "*" + std::to_string(q)},
                      {"GCD", gcd_odd},
                      {"l", l_column()},
                      {"Degree", degree_column()},
                      {"h_plus", h_plus_text()}};
    return j.dump(2) + "\n";
}

std::string Report::to_csv() const {
    std::ostringstream os;
    os << "f,GCD,l,Degree,h_plus\n";
    os << p << "*" << q << "," << gcd_odd << ",\"" << l_column() << "\",\"" << degree_column() << "\"," << h_plus_text()
       << "\n";
    return os.str();
}

std::string Report::to_table() const {
    std::ostringstream os;
    os << "conductor " << p * q << " = " << p << "*" << q << "\n";
    os << "index gcd " << gcd_text << "  (odd part below bound " << gcd_odd << ")  best pair (" << best_pair.first
       << "," << best_pair.second << ")\n";
    for (const auto& r : l_reports) {
        os << "l = " << r.l << ": " << to_string(r.status) << "  pair (" << r.pair.first << "," << r.pair.second
           << ")  |B|_l = " << power_text(r.l, static_cast<long>(r.B_exponent))
           << "  |P|_l = " << power_text(r.l, static_cast<long>(r.P_exponent))
           << "  |GCD|_l = " << power_text(r.l, static_cast<long>(r.gcd_exponent));
        if (r.h_plus_exponent >= 0) os << "  h+ part " << power_text(r.l, r.h_plus_exponent);
        os << "\n";
        for (const auto& c : r.cells) {
            os << "    cell (" << c.D1 << "," << c.D2 << ") orders";
            for (u64 e : c.history) os << " " << power_text(r.l, static_cast<long>(e));
            os << "  stable M = " << c.stable_M;
            for (const auto& pp : c.pairs) os << "  " << pp.text() << ":" << power_text(r.l, static_cast<long>(pp.exponent));
            os << "\n";
        }
        if (!r.note.empty()) os << "    " << r.note << "\n";
    }
    os << std::left << std::setw(12) << "f" << std::setw(16) << "GCD" << std::setw(10) << "l" << std::setw(16)
       << "Degree" << "h+\n";
    os << std::setw(12) << (std::to_string(p) + "*" + std::to_string(q)) << std::setw(16) << gcd_odd << std::setw(10)
       << l_column() << std::setw(16) << degree_column() << h_plus_text() << "\n";
    return os.str();
}

Report run(const RunConfig& cfg) {
    cfg.validate();
    Report out;
    out.p = cfg.p;
    out.q = cfg.q;
    const std::size_t dlogs0 = dlog_evaluations();
    const GcdReport gcd = gcd_over_pairs(cfg.p, cfg.q, std::max<u64>(cfg.l_bound, 10000));
    out.gcd_text = gcd.gcd.get_str();
    out.gcd_odd = gcd.gcd_odd_small();
    out.best_pair = gcd.best_pair;
    std::vector<u64> ls = cfg.only_l;
    if (ls.empty())
        for (u64 l = 3; l < cfg.l_bound; l += 2)
            if (is_prime(l)) ls.push_back(l);
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());

    FrobeniusStore store(cfg.cache_path);
    std::vector<LReport> reps(ls.size());
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, ls.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < ls.size();) reps[i] = run_prime(ls[i], cfg, gcd, store);
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& r : reps)
        if (r.flagged_step1 || r.gcd_exponent > 0 || r.status != LStatus::not_dividing) out.l_reports.push_back(std::move(r));
    store.save();
    out.dlogs = dlog_evaluations() - dlogs0;
    return out;
}

}  // namespace hplus
