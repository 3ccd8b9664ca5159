#include "hplus/step3.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "hplus/errors.hpp"

namespace hplus {

namespace {

template <class F>
void parallel_for(std::size_t n, unsigned threads, F f) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next = n;
            }
            mpfr_free_cache();
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

void trim(IntPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

// Quotient of f by a monic divisor, or false with a nonzero remainder.
bool divide_monic(const IntPoly& f, const IntPoly& d, IntPoly& quot) {
    IntPoly r = f;
    trim(r);
    const std::size_t dd = d.size() - 1;
    if (r.size() < d.size()) {
        quot.clear();
        return r.empty();
    }
    quot.assign(r.size() - dd, 0);
    for (std::size_t e = r.size(); e-- > dd;) {
        const mpz_class c = r[e];
        if (c == 0) continue;
        quot[e - dd] = c;
        for (std::size_t t = 0; t <= dd; ++t) r[e - dd + t] -= c * d[t];
    }
    trim(r);
    trim(quot);
    return r.empty();
}

using Dense2 = std::vector<std::vector<mpz_class>>;  // [i][j]

Dense2 to_dense(const IntPoly2& f, u64 nx, u64 ny) {
    Dense2 a(nx, std::vector<mpz_class>(ny));
    for (const auto& [e, c] : f) a[e.first][e.second] = c;
    return a;
}

IntPoly2 from_dense(const Dense2& a) {
    IntPoly2 f;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != 0) f[{i, j}] = a[i][j];
    return f;
}

// Divides along one variable; every column must divide exactly.
bool divide_along(Dense2& a, const IntPoly& d, bool along_x) {
    const std::size_t nx = a.size(), ny = nx ? a[0].size() : 0;
    Dense2 out(nx, std::vector<mpz_class>(ny));
    const std::size_t outer = along_x ? ny : nx, inner = along_x ? nx : ny;
    for (std::size_t o = 0; o < outer; ++o) {
        IntPoly col(inner);
        for (std::size_t t = 0; t < inner; ++t) col[t] = along_x ? a[t][o] : a[o][t];
        IntPoly quot;
        if (!divide_monic(col, d, quot)) return false;
        for (std::size_t t = 0; t < quot.size(); ++t) (along_x ? out[t][o] : out[o][t]) = quot[t];
    }
    a = std::move(out);
    return true;
}

std::string factor_text(const CyclotomicFactor& f) { return "Phi_" + std::to_string(f.k) + "(" + f.var + ")"; }

struct AxisCandidate {
    u64 step;
    std::string rule;
};

std::vector<AxisCandidate> axis_candidates(const std::set<u64>& K, u64 D) {
    std::vector<AxisCandidate> out;
    auto add = [&](u64 step, const std::string& rule) {
        for (const auto& c : out)
            if (c.step == step) return;
        out.push_back({step, rule});
    };
    if (!K.empty()) {
        u64 n = 1;
        for (u64 k : K) n = lcm_u64(n, k);
        // Sum over the subgroup of index delta in a cyclic group of order n is the product of
        // Phi_k over k | n with k not dividing delta.
        for (u64 delta : divisors(n)) {
            if (delta == n || delta == 1) continue;
            std::set<u64> S;
            for (u64 k : divisors(n))
                if (delta % k != 0) S.insert(k);
            if (S == K && D % delta == 0) add(D / delta, "subgroup");
        }
        if (D % n == 0) add(D / n, "cyclotomic");
    }
    add(D, "cell");
    return out;
}

bool kills_unit(const IntPoly2& h, u64 sx, u64 sy) {
    std::map<std::pair<u64, u64>, mpz_class> fold;
    for (const auto& [e, c] : h) fold[{e.first % sx, e.second % sy}] += c;
    for (const auto& [e, c] : fold)
        if (c != 0) return false;
    return true;
}

std::string lift_name(Lift l) { return l == Lift::symmetric ? "symmetric" : "nonnegative"; }

}  // namespace

IntPoly cyclotomic_polynomial(u64 k) {
    if (k == 0) throw InvalidArgument("cyclotomic index must be positive");
    static std::mutex mu;
    static std::map<u64, IntPoly> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
    }
    IntPoly f(k + 1, 0);
    f[0] = -1;
    f[k] = 1;
    for (u64 d : divisors(k)) {
        if (d == k) continue;
        IntPoly quot;
        divide_monic(f, cyclotomic_polynomial(d), quot);
        f = quot;
    }
    std::lock_guard<std::mutex> lk(mu);
    memo[k] = f;
    return f;
}

std::string int_poly_text(const IntPoly& f, const std::string& var) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t e = f.size(); e-- > 0;) {
        mpz_class c = f[e];
        if (c == 0) continue;
        const bool neg = c < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        if (c != 1 || e == 0) os << c.get_str();
        if (e >= 1) os << var;
        if (e > 1) os << "^" << e;
    }
    return first ? "0" : os.str();
}

CyclotomicSplit split_cyclotomic(const GroupRingElement& gen, Lift lift) {
    const RingShape& s = gen.shape();
    CyclotomicSplit out;
    out.lift = lift;
    Dense2 a = to_dense(gen.lift(lift), s.D1, s.D2);
    for (int axis = 0; axis < 2; ++axis) {
        const u64 D = axis == 0 ? s.D1 : s.D2;
        for (u64 k : divisors(D)) {
            if (k == 1) continue;
            Dense2 trial = a;
            if (divide_along(trial, cyclotomic_polynomial(k), axis == 0)) {
                a = std::move(trial);
                out.factors.push_back({axis == 0 ? 'x' : 'y', k});
            }
        }
    }
    out.residual = from_dense(a);
    return out;
}

CyclotomicSplit split_cyclotomic(const GroupRingElement& gen) {
    CyclotomicSplit nn = split_cyclotomic(gen, Lift::nonnegative);
    if (!nn.factors.empty()) return nn;
    CyclotomicSplit sym = split_cyclotomic(gen, Lift::symmetric);
    if (!sym.factors.empty()) return sym;
    return nn;
}

std::string NormPlan::norm_text() const {
    std::ostringstream os;
    os << "(x^" << p - 1 << "-1)(y^" << q - 1 << "-1)/((x^" << step_x << "-1)(y^" << step_y << "-1))";
    return os.str();
}

std::string NormPlan::prefactor_text() const {
    std::string s;
    for (const auto& f : prefactors) s += factor_text(f);
    return s.empty() ? "1" : s;
}

namespace {

// Divisors delta of D whose subgroup sum (x^D - 1)/(x^delta - 1) divides out of the generator.
std::vector<u64> exact_steps(const std::set<u64>& K, u64 D) {
    std::vector<u64> out;
    for (u64 delta : divisors(D)) {
        bool ok = true;
        for (u64 k : divisors(D))
            if (delta % k != 0 && !K.count(k)) ok = false;
        if (ok) out.push_back(delta);
    }
    return out;
}

NormPlan base_plan(const RingShape& s, const CyclotomicSplit& split) {
    NormPlan plan;
    plan.p = s.p;
    plan.q = s.q;
    plan.cell_x = s.D1;
    plan.cell_y = s.D2;
    plan.lift = split.lift;
    return plan;
}

std::vector<NormPlan> exact_candidates(const GroupRingElement& gen) {
    const RingShape& s = gen.shape();
    const CyclotomicSplit split = split_cyclotomic(gen);
    std::set<u64> Kx, Ky;
    for (const auto& f : split.factors) (f.var == 'x' ? Kx : Ky).insert(f.k);
    const auto sx = exact_steps(Kx, s.D1), sy = exact_steps(Ky, s.D2);
    std::vector<std::pair<u64, u64>> steps;
    for (u64 a : sx)
        for (u64 b : sy) steps.push_back({a, b});
    std::stable_sort(steps.begin(), steps.end(),
                     [](const auto& u, const auto& v) { return u.first * u.second < v.first * v.second; });
    const Dense2 lifted = to_dense(gen.lift(split.lift), s.D1, s.D2);
    std::vector<NormPlan> out;
    for (const auto& [dx, dy] : steps) {
        // keep the smallest plan and the plain cell norm
        if (!out.empty() && !(dx == s.D1 && dy == s.D2)) continue;
        NormPlan plan = base_plan(s, split);
        plan.step_x = dx;
        plan.step_y = dy;
        Dense2 a = lifted;
        for (int axis = 0; axis < 2; ++axis) {
            const u64 D = axis == 0 ? s.D1 : s.D2, delta = axis == 0 ? dx : dy;
            for (u64 k : divisors(D)) {
                if (delta % k == 0) continue;
                if (!divide_along(a, cyclotomic_polynomial(k), axis == 0))
                    throw FactorizationIncomplete("cyclotomic factor lost while planning the norm");
                plan.prefactors.push_back({axis == 0 ? 'x' : 'y', k});
            }
        }
        plan.residual = from_dense(a);
        plan.rule_x = plan.rule_y = "exact";
        out.push_back(std::move(plan));
    }
    return out;
}

std::vector<NormPlan> index_candidates(const GroupRingElement& gen) {
    const RingShape& s = gen.shape();
    const CyclotomicSplit split = split_cyclotomic(gen);
    std::set<u64> Kx, Ky;
    for (const auto& f : split.factors) (f.var == 'x' ? Kx : Ky).insert(f.k);
    std::vector<NormPlan> out;
    for (const auto& cx : axis_candidates(Kx, s.D1)) {
        for (const auto& cy : axis_candidates(Ky, s.D2)) {
            if (kills_unit(split.residual, cx.step, cy.step)) continue;
            NormPlan plan = base_plan(s, split);
            plan.step_x = cx.step;
            plan.step_y = cy.step;
            plan.prefactors = split.factors;
            plan.residual = split.residual;
            plan.rule_x = cx.rule;
            plan.rule_y = cy.rule;
            out.push_back(std::move(plan));
        }
    }
    if (out.empty()) {
        throw FactorizationIncomplete("residual " + int_poly_to_text(split.residual) + " after removing " +
                                      std::to_string(split.factors.size()) +
                                      " cyclotomic factors vanishes under every norm");
    }
    return out;
}

}  // namespace

std::vector<NormPlan> norm_candidates(const GroupRingElement& gen, NormRule rule) {
    const RingShape& s = gen.shape();
    if (s.p == 0 || s.q == 0) throw ShapeMismatch("norm plans need a shape attached to a conductor");
    if (gen.is_zero()) throw ZeroPolynomial("annihilator generator is zero");
    return rule == NormRule::exact ? exact_candidates(gen) : index_candidates(gen);
}

NormPlan plan_norm(const GroupRingElement& gen, NormRule rule) { return norm_candidates(gen, rule).front(); }

EtaEmbedding::EtaEmbedding(const EtaSetup& eta, long bits, unsigned threads) : eta_(eta), bits_(bits) {
    const u64 p = eta.p, q = eta.q;
    const long long U = static_cast<long long>(4 * p * q), pq = static_cast<long long>(p * q);
    // Angles are in units of 1/U of a turn; 1 - e(t/U) = 2 sin(pi t/U) e((t/2 - U/4)/U) for 0 < t < U.
    std::vector<long long> need;
    std::unordered_map<long long, std::size_t> slot;
    auto want = [&](long long t) {
        if (slot.emplace(t, need.size()).second) need.push_back(t);
    };
    struct Row {
        long long t0, tga, ta, thb, tb, phase;
    };
    std::vector<Row> rows((p - 1) * (q - 1));
    auto mod = [U](long long v) { return ((v % U) + U) % U; };
    for (u64 i = 0; i < p - 1; ++i) {
        const long long a = static_cast<long long>(powmod(eta.gamma, i, p));
        const long long ga = static_cast<long long>(eta.g) * a % static_cast<long long>(p);
        for (u64 j = 0; j < q - 1; ++j) {
            const long long b = static_cast<long long>(powmod(eta.delta, j, q));
            const long long hb = static_cast<long long>(eta.h) * b % static_cast<long long>(q);
            Row r;
            r.t0 = mod(4 * static_cast<long long>(q) * a + 4 * static_cast<long long>(p) * b);
            r.tga = 4 * static_cast<long long>(q) * ga;
            r.ta = 4 * static_cast<long long>(q) * a;
            r.thb = 4 * static_cast<long long>(p) * hb;
            r.tb = 4 * static_cast<long long>(p) * b;
            const long long ep = (a - ga + static_cast<long long>(p)) % static_cast<long long>(p) *
                                 static_cast<long long>((p + 1) / 2) % static_cast<long long>(p);
            const long long eq = (b - hb + static_cast<long long>(q)) % static_cast<long long>(q) *
                                 static_cast<long long>((q + 1) / 2) % static_cast<long long>(q);
            long long ph = -r.ta - r.tb + 2 * (r.t0 / 2 - pq);
            ph += 4 * static_cast<long long>(q) * ep + (r.tga / 2 - r.ta / 2);
            ph += 4 * static_cast<long long>(p) * eq + (r.thb / 2 - r.tb / 2);
            r.phase = mod(ph);
            if (r.phase != 0 && r.phase != U / 2) throw Error("eta is not real at this conjugate");
            want(r.t0);
            want(r.tga);
            want(r.ta);
            want(r.thb);
            want(r.tb);
            rows[i * (q - 1) + j] = r;
        }
    }
    std::vector<BigFloat> logs(need.size(), BigFloat(bits));
    const BigFloat pi = BigFloat::pi(bits);
    parallel_for(need.size(), threads, [&](std::size_t n) {
        BigFloat s = pi.mul_si(need[n]).div_si(U).sin().mul_si(2);
        logs[n] = s.log();
    });
    v_.resize(rows.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        const Row& r = rows[n];
        BigFloat v = logs[slot.at(r.t0)].mul_si(2);
        v += logs[slot.at(r.tga)];
        v -= logs[slot.at(r.ta)];
        v += logs[slot.at(r.thb)];
        v -= logs[slot.at(r.tb)];
        v_[n].log = std::move(v);
        v_[n].sign = r.phase == 0 ? 1 : -1;
    }
}

namespace {

// Sums of log |eta| over each coset of the subgroup generated by (step_x, 0) and (0, step_y).
std::vector<SignedLog> coset_sums(const EtaEmbedding& emb, const NormPlan& plan) {
    const EtaSetup& e = emb.setup();
    const u64 fx = e.p - 1, fy = e.q - 1;
    if (fx % plan.step_x != 0 || fy % plan.step_y != 0) throw ShapeMismatch("norm steps must divide p-1 and q-1");
    std::vector<SignedLog> S(plan.step_x * plan.step_y);
    for (auto& s : S) s.log = BigFloat(emb.bits());
    for (u64 i = 0; i < fx; ++i) {
        for (u64 j = 0; j < fy; ++j) {
            SignedLog& s = S[(i % plan.step_x) * plan.step_y + j % plan.step_y];
            const SignedLog& v = emb.at(i, j);
            s.log += v.log;
            s.sign *= v.sign;
        }
    }
    return S;
}

SignedLog apply_residual(const std::vector<SignedLog>& S, const NormPlan& plan, u64 i, u64 j, long bits) {
    SignedLog out;
    out.log = BigFloat(bits);
    for (const auto& [ex, c] : plan.residual) {
        const SignedLog& s = S[((i + ex.first) % plan.step_x) * plan.step_y + (j + ex.second) % plan.step_y];
        if (!c.fits_slong_p()) throw InvalidArgument("residual coefficient too large");
        const long cc = c.get_si();
        out.log += s.log.mul_si(cc);
        if (s.sign < 0 && (cc % 2 != 0)) out.sign = -out.sign;
    }
    return out;
}

}  // namespace

SignedLog EtaEmbedding::conjugate(const NormPlan& plan, u64 i, u64 j) const {
    return apply_residual(coset_sums(*this, plan), plan, i, j, bits_);
}

std::vector<SignedLog> EtaEmbedding::conjugates(const NormPlan& plan) const {
    const auto S = coset_sums(*this, plan);
    std::vector<SignedLog> out;
    out.reserve(plan.conjugate_count());
    for (u64 i = 0; i < plan.step_x; ++i)
        for (u64 j = 0; j < plan.step_y; ++j) out.push_back(apply_residual(S, plan, i, j, bits_));
    return out;
}

namespace {

BigFloat signed_root(const SignedLog& v, u64 M) {
    if (v.sign < 0 && M % 2 == 0) throw InvalidArgument("no real even root of a negative conjugate");
    BigFloat r = (M == 1 ? v.log : v.log.div_si(static_cast<long>(M))).exp();
    return v.sign < 0 ? -r : r;
}

}  // namespace

BigFloat embed_unit(const EtaEmbedding& emb, const NormPlan& plan, u64 i, u64 j, u64 root_of) {
    return signed_root(emb.conjugate(plan, i, j), root_of == 0 ? 1 : root_of);
}

RoundedPolynomial expand_rounded(const std::vector<SignedLog>& roots, u64 M, long bits) {
    std::vector<BigFloat> c(1, BigFloat(bits, 1.0));
    for (const auto& v : roots) {
        const BigFloat r = signed_root(v, M);
        std::vector<BigFloat> n(c.size() + 1, BigFloat(bits));
        for (std::size_t e = 0; e < c.size(); ++e) {
            n[e + 1] += c[e];
            n[e] -= r * c[e];
        }
        c = std::move(n);
    }
    RoundedPolynomial out;
    out.max_error_log10 = -std::numeric_limits<double>::infinity();
    out.height_log10 = 0;
    for (const auto& x : c) {
        mpz_class z = x.round();
        const BigFloat d = (x - BigFloat(bits, z)).abs();
        out.max_error_log10 = std::max(out.max_error_log10, d.log10_abs());
        out.height_log10 = std::max(out.height_log10, x.log10_abs());
        out.coeffs.push_back(std::move(z));
    }
    return out;
}

IntPoly substitute_power(const IntPoly& f, u64 M) {
    if (f.empty()) return {};
    IntPoly out((f.size() - 1) * M + 1, 0);
    for (std::size_t e = 0; e < f.size(); ++e) out[e * M] = f[e];
    return out;
}

bool divides_exactly(const IntPoly& divisor, const IntPoly& dividend) {
    IntPoly d = divisor;
    trim(d);
    if (d.empty() || d.back() != 1) throw InvalidArgument("divisor must be monic");
    IntPoly quot;
    return divide_monic(dividend, d, quot);
}

bool verify_power(const IntPoly& P, const IntPoly& Q, u64 M) {
    try {
        return divides_exactly(P, substitute_power(Q, M));
    } catch (const InvalidArgument&) {
        return false;
    }
}

void require_power(const IntPoly& P, const IntPoly& Q, u64 M) {
    if (!verify_power(P, Q, M)) throw DivisionFailed("P(X) does not divide Q(X^" + std::to_string(M) + ")");
}

namespace {

class EmbeddingPool {
public:
    EmbeddingPool(const EtaSetup& eta, unsigned threads) : eta_(eta), threads_(threads) {}
    const EtaEmbedding& get(long bits) {
        auto it = pool_.find(bits);
        if (it == pool_.end()) it = pool_.emplace(bits, std::make_unique<EtaEmbedding>(eta_, bits, threads_)).first;
        return *it->second;
    }

private:
    EtaSetup eta_;
    unsigned threads_;
    std::map<long, std::unique_ptr<EtaEmbedding>> pool_;
};

constexpr long kProbeBits = 256;
constexpr double kFarFromInteger = -20.0;

bool is_palindromic(const IntPoly& f) {
    for (std::size_t e = 0; e < f.size(); ++e)
        if (f[e] != f[f.size() - 1 - e]) return false;
    return true;
}

Step3Attempt attempt_with_pool(const NormPlan& plan, u64 M, const Step3Options& opt, EmbeddingPool& pool) {
    Step3Attempt a;
    a.plan = plan;
    a.M = M;
    const auto probe = pool.get(kProbeBits).conjugates(plan);
    double height = 1.0 + static_cast<double>(probe.size()) * 0.30103;
    for (const auto& v : probe) height += std::max(0.0, v.log.to_double() / std::log(10.0));
    long digits = opt.min_digits + static_cast<long>(std::ceil(height));
    for (;;) {
        a.digits = digits;
        a.threshold_log10 = -static_cast<double>(digits - height) / 4.0;
        const long bits = BigFloat::bits_for_digits(digits);
        const auto conj = pool.get(bits).conjugates(plan);
        const RoundedPolynomial P = expand_rounded(conj, M, bits);
        const RoundedPolynomial Q = expand_rounded(conj, 1, bits);
        a.P = P.coeffs;
        a.Q = Q.coeffs;
        a.p_error_log10 = P.max_error_log10;
        a.q_error_log10 = Q.max_error_log10;
        if (Q.max_error_log10 > kFarFromInteger) {
            a.verdict = "conjugate set not Galois stable";
            return a;
        }
        if (P.max_error_log10 > kFarFromInteger) {
            a.verdict = "P not integral";
            return a;
        }
        if (std::max(P.max_error_log10, Q.max_error_log10) < a.threshold_log10) break;
        if (digits * 2 > opt.max_digits) {
            a.verdict = "rounding ambiguous at " + std::to_string(digits) + " digits";
            return a;
        }
        digits *= 2;
    }
    a.integral = true;
    a.palindromic = is_palindromic(a.P);
    a.unit_constant = abs(a.P.front()) == 1;
    a.divides = verify_power(a.P, a.Q, M);
    a.verdict = a.divides ? "P(X) divides Q(X^M)" : "division failed";
    return a;
}

}  // namespace

Step3Attempt attempt_plan(const NormPlan& plan, const EtaSetup& eta, u64 M, const Step3Options& opt) {
    EmbeddingPool pool(eta, opt.threads);
    return attempt_with_pool(plan, M, opt, pool);
}

const Step3Attempt* Step3Report::success() const {
    for (const auto& a : attempts)
        if (a.divides) return &a;
    return nullptr;
}

std::vector<const Step3Attempt*> Step3Report::successes() const {
    std::vector<const Step3Attempt*> out;
    for (const auto& a : attempts)
        if (a.divides) out.push_back(&a);
    return out;
}

Step3Report run_step3(const GroebnerBasis& J, const EtaSetup& eta, const Step3Options& opt) {
    const RingShape& s = J.shape();
    if (s.p != eta.p || s.q != eta.q) throw InvalidArgument("ideal and unit belong to different conductors");
    Step3Report rep;
    rep.M = s.M();
    const GroebnerBasis Id = GroebnerBasis::compute(s, augmentation_generators(s));
    const GroebnerBasis Jbar = ideal_quotient(J, Id);
    rep.jbar = Jbar.dump();
    u64 ex = 1, ey = 1;
    if (opt.twist) {
        for (unsigned t = 0; t < s.a1; ++t) ex *= s.l();
        for (unsigned t = 0; t < s.a2; ++t) ey *= s.l();
    }
    const GroebnerBasis ann = annihilator(opt.twist ? substituted(Jbar, ex, ey) : Jbar);
    rep.annihilator = ann.dump();
    EmbeddingPool pool(eta, opt.threads);
    rep.proved = !ann.elements().empty();
    for (const auto& gen : ann.elements()) {
        const GroupRingElement act = opt.inverse ? gen.substituted(s.D1 - 1, s.D2 - 1) : gen;
        std::vector<NormPlan> plans;
        try {
            plans = norm_candidates(act, opt.rule);
        } catch (const FactorizationIncomplete& e) {
            Step3Attempt a;
            a.M = rep.M;
            a.verdict = e.what();
            rep.attempts.push_back(std::move(a));
            rep.proved = false;
            return rep;
        }
        bool done = false;
        for (const auto& plan : plans) {
            rep.attempts.push_back(attempt_with_pool(plan, rep.M, opt, pool));
            if (rep.attempts.back().divides) {
                done = true;
                break;
            }
        }
        if (!done) {
            rep.proved = false;
            return rep;
        }
    }
    return rep;
}

namespace {

nlohmann::json coeff_json(const IntPoly& f) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t e = f.size(); e-- > 0;) a.push_back(f[e].get_str());
    return a;
}

IntPoly coeff_from_json(const nlohmann::json& a) {
    IntPoly f;
    for (auto it = a.rbegin(); it != a.rend(); ++it) f.emplace_back(it->get<std::string>());
    return f;
}

}  // namespace

std::string certificate_json(const Step3Attempt& a, const EtaSetup& eta) {
    nlohmann::json j;
    j["p"] = eta.p;
    j["q"] = eta.q;
    j["g"] = eta.g;
    j["h"] = eta.h;
    j["gamma"] = eta.gamma;
    j["delta"] = eta.delta;
    j["M"] = a.M;
    nlohmann::json plan;
    plan["cell"] = {a.plan.cell_x, a.plan.cell_y};
    plan["norm"] = a.plan.norm_text();
    plan["norm_steps"] = {a.plan.step_x, a.plan.step_y};
    plan["prefactors"] = a.plan.prefactor_text();
    plan["residual"] = int_poly_to_text(a.plan.residual);
    plan["lift"] = lift_name(a.plan.lift);
    plan["rules"] = {a.plan.rule_x, a.plan.rule_y};
    j["plan"] = plan;
    j["precision_digits"] = a.digits;
    j["max_rounding_error_log10"] = std::max(a.p_error_log10, a.q_error_log10);
    j["P"] = coeff_json(a.P);
    j["Q"] = coeff_json(a.Q);
    j["divides"] = a.divides;
    j["verdict"] = a.verdict;
    return j.dump(2);
}

bool check_certificate(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const u64 M = j.at("M").get<u64>();
    const IntPoly P = coeff_from_json(j.at("P")), Q = coeff_from_json(j.at("Q"));
    if (P.empty() || Q.empty() || Q.back() != 1) return false;
    return verify_power(P, Q, M);
}

}  // namespace hplus
