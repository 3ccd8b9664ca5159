#include "hplus/groebner.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <tuple>

#include "hplus/errors.hpp"

namespace hplus {

// ---------------------------------------------------------------- Howell form

HowellForm::HowellForm(const ChainModulus& mod, std::size_t ncols)
    : mod_(mod), n_(ncols), rows_(ncols), pval_(ncols, mod.k) {}

void HowellForm::axpy(std::vector<u64>& v, const std::vector<u64>& row, u64 c, std::size_t from) const {
    // v -= c * row
    const u64 M = mod_.M;
    const u64 neg = (M - c % M) % M;
    if (!neg) return;
    for (std::size_t t = from; t < n_; ++t) {
        if (row[t]) v[t] = (v[t] + neg * row[t]) % M;
    }
}

void HowellForm::insert(std::vector<u64> first) {
    const u64 M = mod_.M;
    std::vector<std::vector<u64>> work;
    work.push_back(std::move(first));
    while (!work.empty()) {
        std::vector<u64> v = std::move(work.back());
        work.pop_back();
        for (auto& x : v) x %= M;
        std::size_t c = 0;
        while (true) {
            while (c < n_ && v[c] == 0) ++c;
            if (c == n_) break;
            const unsigned vv = mod_.val(v[c]);
            if (rows_[c].empty()) {
                const u64 s = mod_.inv_unit(mod_.unit_part(v[c]));
                for (std::size_t t = c; t < n_; ++t) v[t] = v[t] * s % M;
                if (vv > 0) {
                    std::vector<u64> ann(n_, 0);
                    const u64 f = mod_.lpow(mod_.k - vv);
                    for (std::size_t t = c + 1; t < n_; ++t) ann[t] = v[t] * f % M;
                    work.push_back(std::move(ann));
                }
                rows_[c] = std::move(v);
                pval_[c] = vv;
                break;
            }
            const unsigned w = pval_[c];
            if (vv >= w) {
                const u64 qc = mod_.unit_part(v[c]) * mod_.lpow(vv - w) % M;
                axpy(v, rows_[c], qc, c);
                continue;
            }
            // the new vector has the smaller pivot valuation: it takes the slot
            const u64 s = mod_.inv_unit(mod_.unit_part(v[c]));
            for (std::size_t t = c; t < n_; ++t) v[t] = v[t] * s % M;
            std::vector<u64> ann(n_, 0);
            const u64 f = mod_.lpow(mod_.k - vv);
            for (std::size_t t = c + 1; t < n_; ++t) ann[t] = v[t] * f % M;
            work.push_back(std::move(ann));
            std::swap(v, rows_[c]);
            pval_[c] = vv;
            axpy(v, rows_[c], mod_.lpow(w - vv), c);
        }
    }
}

std::vector<u64> HowellForm::reduce(std::vector<u64> v) const {
    const u64 M = mod_.M;
    for (auto& x : v) x %= M;
    for (std::size_t c = 0; c < n_; ++c) {
        if (v[c] == 0 || rows_[c].empty()) continue;
        const unsigned vv = mod_.val(v[c]);
        if (vv < pval_[c]) continue;
        axpy(v, rows_[c], mod_.unit_part(v[c]) * mod_.lpow(vv - pval_[c]) % M, c);
    }
    return v;
}

bool HowellForm::contains(const std::vector<u64>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](u64 x) { return x == 0; });
}

u64 HowellForm::quotient_exponent() const {
    u64 e = 0;
    for (std::size_t c = 0; c < n_; ++c) e += pval_[c];
    return e;
}

std::vector<std::vector<u64>> HowellForm::rows_from(std::size_t col) const {
    std::vector<std::vector<u64>> out;
    for (std::size_t c = col; c < n_; ++c)
        if (!rows_[c].empty()) out.push_back(rows_[c]);
    return out;
}

std::size_t HowellForm::row_count() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += !r.empty();
    return n;
}

// ---------------------------------------------------------------- Groebner bases

GroebnerBasis::GroebnerBasis(const RingShape& shape) : shape_(shape) {}

long GroebnerBasis::find_reducer(u64 i, u64 j, unsigned v, std::size_t skip) const {
    long best = -1;
    unsigned bestv = shape_.k() + 1;
    for (std::size_t t = 0; t < g_.size(); ++t) {
        if (t == skip || dead_[t]) continue;
        const u64 a = static_cast<u64>(lead_[t]) / shape_.D2, b = static_cast<u64>(lead_[t]) % shape_.D2;
        if (a <= i && b <= j && lval_[t] <= v && lval_[t] < bestv) {
            best = static_cast<long>(t);
            bestv = lval_[t];
        }
    }
    return best;
}

GroupRingElement GroebnerBasis::reduce_skipping(GroupRingElement f, std::size_t skip) const {
    if (f.shape() != shape_) throw ShapeMismatch("element and ideal live in different rings");
    const auto& mod = shape_.mod;
    const u64 M = mod.M, D2 = shape_.D2;
    for (long s = static_cast<long>(f.size()) - 1; s >= 0; --s) {
        const u64 c = f[s];
        if (!c) continue;
        const u64 i = static_cast<u64>(s) / D2, j = static_cast<u64>(s) % D2;
        const unsigned v = mod.val(c);
        const long r = find_reducer(i, j, v, skip);
        if (r < 0) continue;
        const auto& g = g_[r];
        const u64 lc = g[lead_[r]];
        const u64 qc = mulmod(mulmod(mod.unit_part(c), mod.inv_unit(mod.unit_part(lc)), M), mod.lpow(v - lval_[r]), M);
        f.sub_shifted(g, qc, i - static_cast<u64>(lead_[r]) / D2, j - static_cast<u64>(lead_[r]) % D2);
    }
    return f;
}

GroupRingElement GroebnerBasis::reduce(const GroupRingElement& f) const {
    return reduce_skipping(f, static_cast<std::size_t>(-1));
}

bool GroebnerBasis::contains(const GroupRingElement& f) const { return reduce(f).is_zero(); }

bool GroebnerBasis::contains(const GroebnerBasis& other) const {
    for (const auto& g : other.g_)
        if (!contains(g)) return false;
    return true;
}

bool GroebnerBasis::is_whole_ring() const {
    for (std::size_t t = 0; t < g_.size(); ++t)
        if (lead_[t] == 0 && lval_[t] == 0) return true;
    return false;
}

void GroebnerBasis::push(GroupRingElement f) {
    const long s = f.lead_slot();
    lead_.push_back(s);
    lval_.push_back(shape_.mod.val(f[s]));
    dead_.push_back(0);
    g_.push_back(std::move(f));
}

namespace {

enum class TaskKind { pair, annihilate, wrap_x, wrap_y };

struct Task {
    long key;
    TaskKind kind;
    std::size_t a, b;
    bool operator>(const Task& o) const { return std::tie(key, a, b) > std::tie(o.key, o.a, o.b); }
};

}  // namespace

void GroebnerBasis::complete(std::size_t first_new) {
    const auto& mod = shape_.mod;
    const u64 M = mod.M, D1 = shape_.D1, D2 = shape_.D2;
    std::priority_queue<Task, std::vector<Task>, std::greater<>> tasks;

    auto schedule = [&](std::size_t n) {
        const u64 a = static_cast<u64>(lead_[n]) / D2, b = static_cast<u64>(lead_[n]) % D2;
        if (lval_[n] > 0) tasks.push({lead_[n], TaskKind::annihilate, n, n});
        if (a > 0) tasks.push({lead_[n], TaskKind::wrap_x, n, n});
        if (b > 0) tasks.push({lead_[n], TaskKind::wrap_y, n, n});
        for (std::size_t m = 0; m < n; ++m) {
            const u64 am = static_cast<u64>(lead_[m]) / D2, bm = static_cast<u64>(lead_[m]) % D2;
            const long key = static_cast<long>(std::max(a, am) * D2 + std::max(b, bm));
            tasks.push({key, TaskKind::pair, m, n});
        }
    };
    for (std::size_t n = first_new; n < g_.size(); ++n) schedule(n);
    // pairs among the old elements are already resolved; only the new ones were scheduled
    while (!tasks.empty()) {
        Task t = tasks.top();
        tasks.pop();
        if (dead_[t.a] || dead_[t.b]) continue;
        GroupRingElement h(shape_);
        const auto& f = g_[t.a];
        const u64 af = static_cast<u64>(lead_[t.a]) / D2, bf = static_cast<u64>(lead_[t.a]) % D2;
        switch (t.kind) {
            case TaskKind::annihilate:
                h = f.scaled(mod.lpow(mod.k - lval_[t.a]));
                break;
            case TaskKind::wrap_x:
                h = f.shifted(D1 - af, 0);
                break;
            case TaskKind::wrap_y:
                h = f.shifted(0, D2 - bf);
                break;
            case TaskKind::pair: {
                std::size_t i1 = t.a, i2 = t.b;
                if (lval_[i1] > lval_[i2]) std::swap(i1, i2);
                const auto& g1 = g_[i1];
                const auto& g2 = g_[i2];
                const u64 a1 = static_cast<u64>(lead_[i1]) / D2, b1 = static_cast<u64>(lead_[i1]) % D2;
                const u64 a2 = static_cast<u64>(lead_[i2]) / D2, b2 = static_cast<u64>(lead_[i2]) % D2;
                const u64 A = std::max(a1, a2), B = std::max(b1, b2);
                const u64 u1 = mod.inv_unit(mod.unit_part(g1[lead_[i1]]));
                const u64 u2 = mod.inv_unit(mod.unit_part(g2[lead_[i2]]));
                const u64 c1 = mulmod(mod.lpow(lval_[i2] - lval_[i1]), u1, M);
                h = GroupRingElement(shape_);
                h.sub_shifted(g1, M - c1, A - a1, B - b1);
                h.sub_shifted(g2, u2, A - a2, B - b2);
                break;
            }
        }
        h = reduce(h);
        if (h.is_zero()) continue;
        std::vector<GroupRingElement> pending{std::move(h)};
        while (!pending.empty()) {
            GroupRingElement e = reduce(pending.back());
            pending.pop_back();
            if (e.is_zero()) continue;
            push(std::move(e));
            const std::size_t n = g_.size() - 1;
            const u64 an = static_cast<u64>(lead_[n]) / D2, bn = static_cast<u64>(lead_[n]) % D2;
            // elements whose leading term the new one covers are replaced by their remainders
            for (std::size_t m = 0; m < n; ++m) {
                if (dead_[m]) continue;
                const u64 am = static_cast<u64>(lead_[m]) / D2, bm = static_cast<u64>(lead_[m]) % D2;
                if (an <= am && bn <= bm && lval_[n] <= lval_[m]) {
                    dead_[m] = 1;
                    pending.push_back(g_[m]);
                }
            }
            schedule(n);
        }
    }
    std::vector<GroupRingElement> keep;
    for (std::size_t m = 0; m < g_.size(); ++m)
        if (!dead_[m]) keep.push_back(std::move(g_[m]));
    g_.clear();
    lead_.clear();
    lval_.clear();
    dead_.clear();
    for (auto& f : keep) push(std::move(f));
}

void GroebnerBasis::interreduce() {
    const auto& mod = shape_.mod;
    const u64 D2 = shape_.D2;
    // minimal: remove elements whose leading term another one divides strongly
    std::vector<char> drop(g_.size(), 0);
    for (std::size_t m = 0; m < g_.size(); ++m) {
        for (std::size_t n = 0; n < g_.size(); ++n) {
            if (n == m || drop[n]) continue;
            const u64 am = static_cast<u64>(lead_[m]) / D2, bm = static_cast<u64>(lead_[m]) % D2;
            const u64 an = static_cast<u64>(lead_[n]) / D2, bn = static_cast<u64>(lead_[n]) % D2;
            if (an <= am && bn <= bm && lval_[n] <= lval_[m]) {
                drop[m] = 1;
                break;
            }
        }
    }
    std::vector<GroupRingElement> keep;
    for (std::size_t m = 0; m < g_.size(); ++m)
        if (!drop[m]) keep.push_back(std::move(g_[m]));
    std::sort(keep.begin(), keep.end(), [](const auto& a, const auto& b) { return a.lead_slot() < b.lead_slot(); });
    g_.clear();
    lead_.clear();
    lval_.clear();
    dead_.clear();
    for (auto& f : keep) push(f.scaled(mod.inv_unit(mod.unit_part(f[f.lead_slot()]))));
    // tails
    for (std::size_t m = 0; m < g_.size(); ++m) {
        GroupRingElement tail = g_[m];
        const u64 lc = tail[lead_[m]];
        tail.add_to(static_cast<std::size_t>(lead_[m]), mod.M - lc);
        tail = reduce_skipping(std::move(tail), m);
        tail.add_to(static_cast<std::size_t>(lead_[m]), lc);
        g_[m] = std::move(tail);
    }
}

GroebnerBasis GroebnerBasis::compute(const RingShape& shape, const std::vector<GroupRingElement>& gens) {
    GroebnerBasis gb(shape);
    return gb.extended(gens);
}

GroebnerBasis GroebnerBasis::extended(const GroupRingElement& f) const {
    return extended(std::vector<GroupRingElement>{f});
}

GroebnerBasis GroebnerBasis::extended(const std::vector<GroupRingElement>& fs) const {
    GroebnerBasis gb = *this;
    const std::size_t first = gb.g_.size();
    for (const auto& f : fs) {
        auto h = gb.reduce(f);
        if (!h.is_zero()) gb.push(std::move(h));
    }
    if (gb.g_.size() == first) return gb;
    gb.complete(first);
    gb.interreduce();
    return gb;
}

u64 GroebnerBasis::quotient_exponent() const {
    const u64 D1 = shape_.D1, D2 = shape_.D2;
    std::vector<unsigned> w(shape_.size(), shape_.k());
    for (std::size_t t = 0; t < g_.size(); ++t) {
        const u64 a = static_cast<u64>(lead_[t]) / D2, b = static_cast<u64>(lead_[t]) % D2;
        for (u64 i = a; i < D1; ++i)
            for (u64 j = b; j < D2; ++j) w[i * D2 + j] = std::min(w[i * D2 + j], lval_[t]);
    }
    u64 e = 0;
    for (auto x : w) e += x;
    return e;
}

std::string GroebnerBasis::dump() const {
    std::ostringstream os;
    os << "ideal in " << shape_.describe() << " with " << g_.size() << " generators\n";
    for (const auto& g : g_) os << "  " << g.to_text() << "\n";
    return os.str();
}

bool ideal_equal(const GroebnerBasis& a, const GroebnerBasis& b) {
    if (a.shape() != b.shape()) return false;
    return a.contains(b) && b.contains(a);
}

mpz_class QuotientOrder::value() const {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(l), static_cast<unsigned long>(exponent));
    return r;
}

HowellForm ideal_span(const RingShape& shape, const std::vector<GroupRingElement>& gens) {
    HowellForm hf(shape.mod, shape.size());
    for (const auto& g : gens) {
        for (u64 a = 0; a < shape.D1; ++a) {
            for (u64 b = 0; b < shape.D2; ++b) {
                auto s = g.shifted(a, b);
                std::vector<u64> row(shape.size());
                for (std::size_t t = 0; t < row.size(); ++t) row[t] = s[t];
                hf.insert(std::move(row));
            }
        }
    }
    return hf;
}

u64 oracle_quotient_exponent(const RingShape& shape, const std::vector<GroupRingElement>& gens) {
    return ideal_span(shape, gens).quotient_exponent();
}

QuotientOrder quotient_order(const GroebnerBasis& I, const GroebnerBasis& J, bool cross_check) {
    if (I.shape() != J.shape()) throw ShapeMismatch("ideals live in different rings");
    if (!I.contains(J)) throw NotSubideal("the second ideal is not contained in the first");
    const u64 eJ = J.quotient_exponent(), eI = I.quotient_exponent();
    if (cross_check) {
        const u64 oJ = oracle_quotient_exponent(J.shape(), J.elements());
        const u64 oI = oracle_quotient_exponent(I.shape(), I.elements());
        if (oJ != eJ || oI != eI) {
            throw OracleMismatch("leading-term count " + std::to_string(eI) + "/" + std::to_string(eJ) +
                                 " vs linear algebra " + std::to_string(oI) + "/" + std::to_string(oJ));
        }
    }
    return {I.shape().l(), eJ - eI};
}

GroebnerBasis ideal_quotient(const GroebnerBasis& T, const GroebnerBasis& J) {
    if (T.shape() != J.shape()) throw ShapeMismatch("ideals live in different rings");
    const RingShape& shape = T.shape();
    const std::size_t N = shape.size();
    const auto& js = J.elements();
    const std::size_t s = js.size();
    if (s == 0) return GroebnerBasis::compute(shape, {GroupRingElement::monomial(shape, 0, 0)});
    const std::size_t width = (s + 1) * N;
    HowellForm hf(shape.mod, width);
    // T spans each image block
    if (!T.is_zero_ideal()) {
        HowellForm tspan = ideal_span(shape, T.elements());
        for (const auto& tr : tspan.rows_from(0)) {
            for (std::size_t b = 0; b < s; ++b) {
                std::vector<u64> row(width, 0);
                std::copy(tr.begin(), tr.end(), row.begin() + static_cast<long>(b * N));
                hf.insert(std::move(row));
            }
        }
    }
    for (u64 a = 0; a < shape.D1; ++a) {
        for (u64 c = 0; c < shape.D2; ++c) {
            std::vector<u64> row(width, 0);
            for (std::size_t b = 0; b < s; ++b) {
                auto img = js[b].shifted(a, c);
                if (!T.is_zero_ideal()) img = T.reduce(img);
                for (std::size_t t = 0; t < N; ++t) row[b * N + t] = img[t];
            }
            row[s * N + a * shape.D2 + c] = 1;
            hf.insert(std::move(row));
        }
    }
    std::vector<GroupRingElement> gens;
    for (const auto& r : hf.rows_from(s * N)) {
        GroupRingElement f(shape);
        for (std::size_t t = 0; t < N; ++t)
            if (r[s * N + t]) f.add_to(t, r[s * N + t]);
        gens.push_back(std::move(f));
    }
    auto out = GroebnerBasis::compute(shape, gens);
    // consistency: out * J lies in T, T lies in out
    for (const auto& f : out.elements())
        for (const auto& g : js)
            if (!T.contains(f * g)) throw OracleMismatch("ideal quotient fails the containment check");
    if (!out.contains(T)) throw OracleMismatch("ideal quotient does not contain the dividend");
    return out;
}

GroebnerBasis annihilator(const GroebnerBasis& J) { return ideal_quotient(GroebnerBasis(J.shape()), J); }

GroebnerBasis substituted(const GroebnerBasis& J, u64 ex, u64 ey) {
    std::vector<GroupRingElement> gens;
    for (const auto& g : J.elements()) gens.push_back(g.substituted(ex, ey));
    return GroebnerBasis::compute(J.shape(), gens);
}

GroebnerBasis reduced_ideal(const GroebnerBasis& J, const RingShape& target) {
    std::vector<GroupRingElement> gens;
    for (const auto& g : J.elements()) gens.push_back(g.reduced_to(target));
    return GroebnerBasis::compute(target, gens);
}

}  // namespace hplus
