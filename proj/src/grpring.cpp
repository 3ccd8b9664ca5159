#include "hplus/grpring.hpp"

#include <cctype>
#include <sstream>

#include "hplus/errors.hpp"

namespace hplus {

RingShape RingShape::make(u64 p, u64 q, u64 l, unsigned k, u64 d1, u64 d2) {
    RingShape s;
    s.p = p;
    s.q = q;
    s.mod = ChainModulus::make(l, k);
    s.a1 = valuation(p - 1, l);
    s.a2 = valuation(q - 1, l);
    u64 m1 = p - 1, m2 = q - 1;
    for (unsigned i = 0; i < s.a1; ++i) m1 /= l;
    for (unsigned i = 0; i < s.a2; ++i) m2 /= l;
    if (d1 == 0 || d2 == 0 || m1 % d1 != 0 || m2 % d2 != 0) {
        throw ShapeMismatch("d1, d2 must divide the prime-to-l parts of p-1, q-1");
    }
    s.d1 = d1;
    s.d2 = d2;
    s.D1 = d1;
    s.D2 = d2;
    for (unsigned i = 0; i < s.a1; ++i) s.D1 *= l;
    for (unsigned i = 0; i < s.a2; ++i) s.D2 *= l;
    return s;
}

RingShape RingShape::full(u64 p, u64 q, u64 l, unsigned k) {
    u64 m1 = p - 1, m2 = q - 1;
    while (m1 % l == 0) m1 /= l;
    while (m2 % l == 0) m2 /= l;
    return make(p, q, l, k, m1, m2);
}

RingShape RingShape::bare(u64 l, unsigned k, u64 D1, u64 D2) {
    if (D1 == 0 || D2 == 0) throw ShapeMismatch("exponent orders must be positive");
    RingShape s;
    s.mod = ChainModulus::make(l, k);
    s.D1 = s.d1 = D1;
    s.D2 = s.d2 = D2;
    return s;
}

RingShape RingShape::with_exponent(unsigned k) const {
    RingShape s = *this;
    s.mod = ChainModulus::make(mod.l, k);
    return s;
}

std::string RingShape::describe() const {
    std::ostringstream os;
    os << "(Z/" << mod.M << ")[x,y]/(x^" << D1 << "-1, y^" << D2 << "-1)";
    return os.str();
}

GroupRingElement::GroupRingElement(const RingShape& shape) : shape_(shape), c_(shape.size(), 0) {}

GroupRingElement GroupRingElement::monomial(const RingShape& shape, u64 i, u64 j, u64 c) {
    GroupRingElement e(shape);
    e.set(i, j, c);
    return e;
}

GroupRingElement GroupRingElement::from_terms(const RingShape& shape, const std::vector<Term>& terms) {
    GroupRingElement e(shape);
    for (const auto& t : terms) e.add_to(e.idx(t.i, t.j), t.c % shape.M());
    return e;
}

GroupRingElement GroupRingElement::from_int_poly(const RingShape& shape, const IntPoly2& poly) {
    GroupRingElement e(shape);
    const mpz_class M(static_cast<unsigned long>(shape.M()));
    for (const auto& [ex, c] : poly) {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), M.get_mpz_t());
        e.add_to(e.idx(ex.first, ex.second), r.get_ui());
    }
    return e;
}

GroupRingElement GroupRingElement::parse(const RingShape& shape, const std::string& text) {
    return from_int_poly(shape, parse_int_poly(text));
}

void GroupRingElement::add_to(std::size_t slot, u64 c) {
    c_[slot] = static_cast<std::uint32_t>((c_[slot] + c % shape_.M()) % shape_.M());
}

bool GroupRingElement::is_zero() const {
    for (auto v : c_)
        if (v) return false;
    return true;
}

long GroupRingElement::lead_slot() const {
    for (long s = static_cast<long>(c_.size()) - 1; s >= 0; --s)
        if (c_[s]) return s;
    return -1;
}

Term GroupRingElement::leading_term() const {
    long s = lead_slot();
    if (s < 0) throw ZeroPolynomial("leading term of zero");
    return Term{static_cast<u64>(s) / shape_.D2, static_cast<u64>(s) % shape_.D2, c_[s]};
}

std::vector<Term> GroupRingElement::terms() const {
    std::vector<Term> out;
    for (long s = static_cast<long>(c_.size()) - 1; s >= 0; --s) {
        if (c_[s]) out.push_back({static_cast<u64>(s) / shape_.D2, static_cast<u64>(s) % shape_.D2, c_[s]});
    }
    return out;
}

std::size_t GroupRingElement::nonzero_count() const {
    std::size_t n = 0;
    for (auto v : c_) n += v != 0;
    return n;
}

u64 GroupRingElement::augmentation() const {
    u64 s = 0;
    for (auto v : c_) s = (s + v) % shape_.M();
    return s;
}

void GroupRingElement::check_same(const GroupRingElement& o) const {
    if (shape_ != o.shape_) throw ShapeMismatch(shape_.describe() + " vs " + o.shape_.describe());
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& o) {
    check_same(o);
    const u64 M = shape_.M();
    for (std::size_t s = 0; s < c_.size(); ++s) c_[s] = static_cast<std::uint32_t>((u64(c_[s]) + o.c_[s]) % M);
    return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& o) {
    check_same(o);
    const u64 M = shape_.M();
    for (std::size_t s = 0; s < c_.size(); ++s) c_[s] = static_cast<std::uint32_t>((u64(c_[s]) + M - o.c_[s]) % M);
    return *this;
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
    GroupRingElement r = *this;
    r += o;
    return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
    GroupRingElement r = *this;
    r -= o;
    return r;
}

GroupRingElement GroupRingElement::operator-() const {
    GroupRingElement r(shape_);
    r -= *this;
    return r;
}

GroupRingElement GroupRingElement::scaled(u64 c) const {
    GroupRingElement r = *this;
    const u64 M = shape_.M();
    c %= M;
    for (auto& v : r.c_) v = static_cast<std::uint32_t>(u64(v) * c % M);
    return r;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
    check_same(o);
    const u64 M = shape_.M(), D1 = shape_.D1, D2 = shape_.D2;
    std::vector<u64> acc(c_.size(), 0);
    std::vector<std::size_t> nz;
    for (std::size_t s = 0; s < o.c_.size(); ++s)
        if (o.c_[s]) nz.push_back(s);
    for (std::size_t s = 0; s < c_.size(); ++s) {
        if (!c_[s]) continue;
        const u64 i = s / D2, j = s % D2;
        for (auto t : nz) {
            const u64 ii = (i + t / D2) % D1, jj = (j + t % D2) % D2;
            auto& a = acc[ii * D2 + jj];
            a = (a + u64(c_[s]) * o.c_[t]) % M;
        }
    }
    GroupRingElement r(shape_);
    for (std::size_t s = 0; s < acc.size(); ++s) r.c_[s] = static_cast<std::uint32_t>(acc[s]);
    return r;
}

void GroupRingElement::sub_shifted(const GroupRingElement& g, u64 c, u64 a, u64 b) {
    const u64 M = shape_.M(), D1 = shape_.D1, D2 = shape_.D2;
    c %= M;
    if (c == 0) return;
    const u64 neg = M - c;
    for (u64 i = 0; i < D1; ++i) {
        const u64 ii = (i + a) % D1;
        const std::uint32_t* src = &g.c_[i * D2];
        std::uint32_t* dst = &c_[ii * D2];
        for (u64 j = 0; j < D2; ++j) {
            if (!src[j]) continue;
            u64 jj = j + b;
            if (jj >= D2) jj -= D2;
            dst[jj] = static_cast<std::uint32_t>((dst[jj] + neg * src[j]) % M);
        }
    }
}

GroupRingElement GroupRingElement::shifted(u64 a, u64 b) const {
    GroupRingElement r(shape_);
    const u64 D1 = shape_.D1, D2 = shape_.D2;
    for (std::size_t s = 0; s < c_.size(); ++s) {
        if (c_[s]) r.c_[((s / D2 + a) % D1) * D2 + (s % D2 + b) % D2] = c_[s];
    }
    return r;
}

GroupRingElement GroupRingElement::substituted(u64 ex, u64 ey) const {
    GroupRingElement r(shape_);
    const u64 D1 = shape_.D1, D2 = shape_.D2;
    for (std::size_t s = 0; s < c_.size(); ++s) {
        if (c_[s]) r.add_to(r.idx(mulmod(s / D2, ex, D1), mulmod(s % D2, ey, D2)), c_[s]);
    }
    return r;
}

GroupRingElement GroupRingElement::reduced_to(const RingShape& target) const {
    if (shape_.D1 % target.D1 || shape_.D2 % target.D2 || shape_.M() % target.M()) {
        throw ShapeMismatch("target ring is not a quotient of " + shape_.describe());
    }
    GroupRingElement r(target);
    for (std::size_t s = 0; s < c_.size(); ++s) {
        if (c_[s]) r.add_to(r.idx(s / shape_.D2, s % shape_.D2), c_[s]);
    }
    return r;
}

IntPoly2 GroupRingElement::lift(Lift mode) const {
    IntPoly2 out;
    const u64 M = shape_.M();
    for (std::size_t s = 0; s < c_.size(); ++s) {
        if (!c_[s]) continue;
        mpz_class v(static_cast<unsigned long>(c_[s]));
        if (mode == Lift::symmetric && 2 * u64(c_[s]) > M) v -= static_cast<unsigned long>(M);
        out[{s / shape_.D2, s % shape_.D2}] = v;
    }
    return out;
}

namespace {

std::string monomial_text(const char* var, u64 e) {
    if (e == 0) return "";
    if (e == 1) return var;
    return std::string(var) + "^" + std::to_string(e);
}

std::string term_text(const mpz_class& c, u64 i, u64 j, bool first) {
    std::string mono = monomial_text("x", i) + monomial_text("y", j);
    mpz_class a = abs(c);
    std::string out;
    if (!first) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    if (mono.empty()) out += a.get_str();
    else if (a == 1) out += mono;
    else out += a.get_str() + mono;
    return out;
}

}  // namespace

std::string GroupRingElement::to_text() const {
    IntPoly2 p = lift(Lift::nonnegative);
    // group by x-exponent, descending, each group a polynomial in y
    std::map<u64, std::vector<std::pair<u64, mpz_class>>, std::greater<>> groups;
    for (const auto& [e, c] : p) groups[e.first].push_back({e.second, c});
    if (groups.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [i, ys] : groups) {
        std::sort(ys.begin(), ys.end(), [](auto& a, auto& b) { return a.first > b.first; });
        if (!first) out += " + ";
        if (ys.size() == 1) {
            out += term_text(ys[0].second, i, ys[0].first, true);
        } else {
            out += "(";
            bool inner = true;
            for (auto& [j, c] : ys) {
                if (!inner) out += "+";
                out += term_text(c, 0, j, true);
                inner = false;
            }
            out += ")" + monomial_text("x", i);
        }
        first = false;
    }
    return out;
}

std::string GroupRingElement::to_triples() const {
    std::ostringstream os;
    os << shape_.D1 << " " << shape_.D2 << " " << shape_.M() << "\n";
    for (const auto& t : terms()) os << t.i << " " << t.j << " " << t.c << "\n";
    return os.str();
}

GroupRingElement GroupRingElement::from_triples(const RingShape& shape, const std::string& text) {
    std::istringstream is(text);
    u64 D1, D2, M;
    if (!(is >> D1 >> D2 >> M)) throw ParseError("missing triples header");
    if (D1 != shape.D1 || D2 != shape.D2 || M != shape.M()) throw ShapeMismatch("triples header disagrees with shape");
    GroupRingElement e(shape);
    u64 i, j, c;
    while (is >> i >> j >> c) e.add_to(e.idx(i, j), c);
    return e;
}

GroupRingElement make_cnj(const RingShape& shape) {
    if (shape.p == 0 || shape.q == 0) throw ShapeMismatch("conjugation generator needs the conductor");
    GroupRingElement e = GroupRingElement::monomial(shape, ((shape.p - 1) / 2) % shape.D1, ((shape.q - 1) / 2) % shape.D2);
    e.add_to(0, shape.M() - 1);
    return e;
}

std::vector<GroupRingElement> augmentation_generators(const RingShape& shape) {
    auto x = GroupRingElement::monomial(shape, 1, 0);
    auto y = GroupRingElement::monomial(shape, 0, 1);
    auto one = GroupRingElement::monomial(shape, 0, 0);
    return {x - one, y - one};
}

namespace {

IntPoly2 poly_mul(const IntPoly2& a, const IntPoly2& b) {
    IntPoly2 r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) r[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

void poly_add(IntPoly2& a, const IntPoly2& b, int sign) {
    for (const auto& [e, c] : b) {
        if (sign > 0) a[e] += c;
        else a[e] -= c;
        if (a[e] == 0) a.erase(e);
    }
}

class PolyParser {
public:
    explicit PolyParser(const std::string& s) {
        // drop whitespace and multiplication dots
        for (std::size_t i = 0; i < s.size(); ++i) {
            unsigned char ch = s[i];
            if (std::isspace(ch) || ch == '*' || ch == '{' || ch == '}') continue;
            if (ch == 0xC2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xB7) {
                ++i;
                continue;
            }
            if (ch == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x88 &&
                static_cast<unsigned char>(s[i + 2]) == 0x92) {
                text_ += '-';
                i += 2;
                continue;
            }
            text_ += static_cast<char>(ch);
        }
    }

    IntPoly2 run() {
        IntPoly2 r = expr();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return r;
    }

private:
    std::string text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(why + " at offset " + std::to_string(pos_) + " in \"" + text_ + "\"");
    }
    bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    IntPoly2 expr() {
        IntPoly2 acc;
        int sign = 1;
        if (peek('+')) ++pos_;
        else if (peek('-')) {
            sign = -1;
            ++pos_;
        }
        poly_add(acc, term(), sign);
        while (peek('+') || peek('-')) {
            sign = text_[pos_++] == '+' ? 1 : -1;
            poly_add(acc, term(), sign);
        }
        return acc;
    }

    IntPoly2 term() {
        IntPoly2 acc = factor();
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || peek('x') || peek('y') ||
                                       peek('('))) {
            acc = poly_mul(acc, factor());
        }
        return acc;
    }

    u64 integer_exponent() {
        std::size_t st = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (st == pos_) fail("expected exponent");
        return std::stoull(text_.substr(st, pos_ - st));
    }

    IntPoly2 factor() {
        IntPoly2 base;
        if (peek('(')) {
            ++pos_;
            base = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
        } else if (peek('x') || peek('y')) {
            bool isx = text_[pos_++] == 'x';
            u64 e = 1;
            if (peek('^')) {
                ++pos_;
                e = integer_exponent();
            }
            base[{isx ? e : 0, isx ? 0 : e}] = 1;
            return base;
        } else if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t st = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            mpz_class v(text_.substr(st, pos_ - st));
            if (v != 0) base[{0, 0}] = v;
        } else {
            fail("expected a factor");
        }
        if (peek('^')) {
            ++pos_;
            u64 e = integer_exponent();
            IntPoly2 r;
            r[{0, 0}] = 1;
            for (u64 i = 0; i < e; ++i) r = poly_mul(r, base);
            return r;
        }
        return base;
    }
};

}  // namespace

IntPoly2 parse_int_poly(const std::string& text) { return PolyParser(text).run(); }

std::string int_poly_to_text(const IntPoly2& poly) {
    if (poly.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        out += term_text(it->second, it->first.first, it->first.second, first);
        first = false;
    }
    return out;
}

}  // namespace hplus
