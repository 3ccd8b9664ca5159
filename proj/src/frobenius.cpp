#include "hplus/frobenius.hpp"

#include <fstream>
#include <sstream>

#include "hplus/errors.hpp"

namespace hplus {

namespace {
std::atomic<std::size_t> g_dlogs{0};
}

std::size_t dlog_evaluations() { return g_dlogs.load(); }

EtaSetup EtaSetup::make(u64 p, u64 q, u64 g, u64 h) {
    EtaSetup e;
    e.p = p;
    e.q = q;
    e.g = g % p;
    e.h = h % q;
    if (multiplicative_order(e.g, p) != p - 1 || multiplicative_order(e.h, q) != q - 1) {
        throw InvalidArgument("(g, h) must be primitive roots mod (p, q)");
    }
    e.gamma = find_primitive_root(p);
    e.delta = find_primitive_root(q);
    return e;
}

namespace {

struct EtaTables {
    std::vector<u64> zp, zq;  // zeta^e for e mod p, q
    EtaTables(const EtaSetup& eta, const SplitPrimeWitness& w) : zp(eta.p), zq(eta.q) {
        zp[0] = zq[0] = 1;
        for (u64 e = 1; e < eta.p; ++e) zp[e] = mulmod(zp[e - 1], w.zeta_p, w.r);
        for (u64 e = 1; e < eta.q; ++e) zq[e] = mulmod(zq[e - 1], w.zeta_q, w.r);
    }
};

u64 eta_with_tables(u64 i, u64 j, const EtaSetup& eta, const SplitPrimeWitness& w, const EtaTables& t) {
    const u64 p = eta.p, q = eta.q, r = w.r;
    const u64 a = powmod(eta.gamma, i, p), b = powmod(eta.delta, j, q);
    const u64 i2p = (p + 1) / 2, i2q = (q + 1) / 2;
    auto Zp = [&](u64 e) { return t.zp[e % p]; };
    auto Zq = [&](u64 e) { return t.zq[e % q]; };
    auto one_minus = [&](u64 v) {
        u64 d = (1 + r - v) % r;
        if (d == 0) throw DegenerateUnit("a factor 1 - zeta vanishes mod " + std::to_string(r));
        return d;
    };
    // zeta_p^-a zeta_q^-b (1 - zeta_p^a zeta_q^b)^2
    u64 num = mulmod(Zp(p - a), Zq(q - b), r);
    const u64 c = one_minus(mulmod(Zp(a), Zq(b), r));
    num = mulmod(num, mulmod(c, c, r), r);
    // zeta_p^((a - g a)/2) (1 - zeta_p^(g a)) / (1 - zeta_p^a)
    const u64 ga = eta.g * a % p;
    num = mulmod(num, Zp((a + p - ga) % p * i2p), r);
    num = mulmod(num, one_minus(Zp(ga)), r);
    u64 den = one_minus(Zp(a));
    const u64 hb = eta.h * b % q;
    num = mulmod(num, Zq((b + q - hb) % q * i2q), r);
    num = mulmod(num, one_minus(Zq(hb)), r);
    den = mulmod(den, one_minus(Zq(b)), r);
    return mulmod(num, invmod(den, r), r);
}

}  // namespace

u64 eta_image(u64 i, u64 j, const EtaSetup& eta, const SplitPrimeWitness& w) {
    if (w.p != eta.p || w.q != eta.q) throw InvalidArgument("witness is for a different conductor");
    return eta_with_tables(i, j, eta, w, EtaTables(eta, w));
}

FrobeniusRecord frobenius_full(const SplitPrimeWitness& w, const EtaSetup& eta) {
    if (w.p != eta.p || w.q != eta.q) throw InvalidArgument("witness is for a different conductor");
    const auto l_list = prime_divisors(w.M);
    if (l_list.size() != 1) throw InvalidArgument("M must be a prime power");
    const u64 l = l_list[0];
    const unsigned k = valuation(w.M, l);
    FrobeniusRecord rec;
    rec.witness = w;
    rec.g = eta.g;
    rec.h = eta.h;
    rec.shape = RingShape::full(eta.p, eta.q, l, k);
    rec.poly = GroupRingElement(rec.shape);
    EtaTables tables(eta, w);
    DlogContext dl(w.r, w.zeta_M, l, k);
    const u64 e = (w.r - 1) / w.M;
    for (u64 i = 1; i <= eta.p - 1; ++i) {
        for (u64 j = 1; j <= (eta.q - 1) / 2; ++j) {
            const u64 v = powmod(eta_with_tables(i, j, eta, w, tables), e, w.r);
            rec.poly.add_to(rec.poly.idx(i, j), dl.log(v));
            ++g_dlogs;
        }
    }
    return rec;
}

FrobeniusRecord frobenius_restricted(const FrobeniusRecord& full, const RingShape& shape) {
    if (shape.p != full.shape.p || shape.q != full.shape.q || shape.M() != full.shape.M()) {
        throw ShapeMismatch("restriction target does not match the record");
    }
    FrobeniusRecord rec = full;
    rec.shape = shape;
    rec.poly = full.poly.reduced_to(shape);
    return rec;
}

std::optional<UnitShift> match_up_to_unit_and_shift(const GroupRingElement& a, const GroupRingElement& b,
                                                    const GroebnerBasis& modulo) {
    const RingShape& s = a.shape();
    const auto target = modulo.reduce(b);
    for (u64 u = 1; u < s.M(); ++u) {
        if (gcd_u64(u, s.M()) != 1) continue;
        const auto au = a.scaled(u);
        for (u64 sx = 0; sx < s.D1; ++sx)
            for (u64 sy = 0; sy < s.D2; ++sy)
                if (modulo.reduce(au.shifted(sx, sy)) == target) return UnitShift{u, sx, sy};
    }
    return std::nullopt;
}

u64 witness_hash(const SplitPrimeWitness& w, const EtaSetup& eta) {
    // FNV-1a over the normalization data
    u64 hsh = 1469598103934665603ULL;
    for (u64 v : {w.r, w.M, w.zeta_p, w.zeta_q, w.zeta_M, eta.gamma, eta.delta, eta.g, eta.h}) {
        for (int b = 0; b < 8; ++b) {
            hsh ^= (v >> (8 * b)) & 0xff;
            hsh *= 1099511628211ULL;
        }
    }
    return hsh;
}

std::string FrobeniusCache::serialize(const FrobeniusRecord& rec, const EtaSetup& eta) {
    std::ostringstream os;
    const auto& w = rec.witness;
    os << w.p << " " << w.q << " " << rec.g << " " << rec.h << " " << w.r << " " << w.M << " " << rec.shape.D1 << " "
       << rec.shape.D2 << " " << std::hex << witness_hash(w, eta) << std::dec;
    // ascending (i, j)
    auto terms = rec.poly.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) os << " " << it->i << "," << it->j << "," << it->c;
    return os.str();
}

FrobeniusCache::FrobeniusCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        u64 p, q, g, h, r, M, D1, D2, hsh;
        if (!(is >> p >> q >> g >> h >> r >> M >> D1 >> D2 >> std::hex >> hsh >> std::dec)) {
            throw ParseError("malformed cache line in " + path_);
        }
        const auto l_list = prime_divisors(M);
        FrobeniusRecord rec;
        rec.witness = make_witness(p, q, M, r);
        rec.g = g;
        rec.h = h;
        rec.shape = RingShape::full(p, q, l_list.at(0), valuation(M, l_list[0]));
        if (rec.shape.D1 != D1 || rec.shape.D2 != D2) throw ParseError("cache record has the wrong shape");
        rec.poly = GroupRingElement(rec.shape);
        std::string tok;
        while (is >> tok) {
            u64 i, j, c;
            char c1, c2;
            std::istringstream ts(tok);
            if (!(ts >> i >> c1 >> j >> c2 >> c) || c1 != ',' || c2 != ',') throw ParseError("bad term " + tok);
            rec.poly.add_to(rec.poly.idx(i, j), c);
        }
        Key key{p, q, g, h, r, M};
        records_[key] = {hsh, std::move(rec)};
        lines_[key] = line;
    }
}

const FrobeniusRecord& FrobeniusCache::get(const SplitPrimeWitness& w, const EtaSetup& eta) {
    Key key{w.p, w.q, eta.g, eta.h, w.r, w.M};
    const u64 hsh = witness_hash(w, eta);
    auto it = records_.find(key);
    if (it != records_.end() && it->second.first == hsh) {
        ++hits_;
        return it->second.second;
    }
    ++misses_;
    auto rec = frobenius_full(w, eta);
    lines_[key] = serialize(rec, eta);
    auto& slot = records_[key];
    slot = {hsh, std::move(rec)};
    return slot.second;
}

void FrobeniusCache::save() const {
    if (path_.empty()) return;
    std::ofstream out(path_);
    if (!out) throw InvalidArgument("cannot write cache file " + path_);
    for (const auto& [key, line] : lines_) out << line << "\n";
}

}  // namespace hplus
