#include "qlat/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qlat {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t reduce_signed(int64_t v, uint64_t m) {
    int64_t r = v % static_cast<int64_t>(m);
    if (r < 0) r += static_cast<int64_t>(m);
    return static_cast<uint64_t>(r);
}

int vp_u64(uint64_t c, uint64_t p, int cap) {
    if (c == 0) return cap;
    int v = 0;
    while (c % p == 0) {
        c /= p;
        ++v;
    }
    return std::min(v, cap);
}

// Polynomials over F_p as coefficient vectors, low degree first.
using SmallPoly = std::vector<int>;

bool divides_mod_p(const SmallPoly& d, SmallPoly a, int p) {
    int dd = static_cast<int>(d.size()) - 1;
    int lead_inv = 1;
    for (int t = 1; t < p; ++t)
        if ((d[dd] * t) % p == 1) lead_inv = t;
    for (int i = static_cast<int>(a.size()) - 1; i >= dd; --i) {
        int c = (a[i] * lead_inv) % p;
        if (c == 0) continue;
        for (int j = 0; j <= dd; ++j) a[i - dd + j] = ((a[i - dd + j] - c * d[j]) % p + p) % p;
    }
    for (int i = 0; i < dd; ++i)
        if (a[i] != 0) return false;
    return true;
}

bool irreducible_mod_p(const SmallPoly& a, int p) {
    int deg = static_cast<int>(a.size()) - 1;
    for (int d = 1; 2 * d <= deg; ++d) {
        int count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (int idx = 0; idx < count; ++idx) {
            SmallPoly g(d + 1, 0);
            g[d] = 1;
            int t = idx;
            for (int i = 0; i < d; ++i) {
                g[i] = t % p;
                t /= p;
            }
            if (divides_mod_p(g, a, p)) return false;
        }
    }
    return true;
}

std::vector<int64_t> smallest_irreducible(int p, int f) {
    if (f == 1) return {0};
    int count = 1;
    for (int i = 0; i < f; ++i) count *= p;
    // Order: compare c_{f-1} first, then c_{f-2}, ... (the polynomial read high to low).
    for (int idx = 0; idx < count; ++idx) {
        SmallPoly a(f + 1, 0);
        a[f] = 1;
        int t = idx;
        for (int i = 0; i < f; ++i) {
            a[i] = t % p;
            t /= p;
        }
        if (irreducible_mod_p(a, p)) return std::vector<int64_t>(a.begin(), a.end() - 1);
    }
    throw Error("no irreducible polynomial found");
}

void build_field(RingSpec& r) {
    ResidueField& F = r.field;
    F.p = r.p;
    F.f = r.f;
    F.q = r.q;
    const int q = r.q;
    F.add_table.assign(static_cast<size_t>(q) * q, 0);
    F.mul_table.assign(static_cast<size_t>(q) * q, 0);
    F.neg_table.assign(q, 0);
    F.inv_table.assign(q, 0);
    std::vector<RingElt> elts;
    elts.reserve(q);
    for (int a = 0; a < q; ++a) elts.push_back(r.from_residue(a));
    for (int a = 0; a < q; ++a) {
        F.neg_table[a] = (-elts[a]).residue();
        for (int b = 0; b < q; ++b) {
            F.add_table[a * q + b] = (elts[a] + elts[b]).residue();
            F.mul_table[a * q + b] = (elts[a] * elts[b]).residue();
        }
    }
    for (int a = 1; a < q; ++a)
        for (int b = 1; b < q; ++b)
            if (F.mul_table[a * q + b] == 1) F.inv_table[a] = b;
}

void build_square_table(RingSpec& r) {
    if (r.p != 2 || r.k < 3) return;
    uint64_t n = 1;
    for (int i = 0; i < r.f; ++i) n *= 8;
    r.square_mod8.assign(n, 0);
    for (uint64_t c = 0; c < n; ++c) {
        RingElt a = r.from_code(c, 3);
        if (!a.is_unit()) continue;
        r.square_mod8[(a * a).code(3)] = 1;
    }
}

std::shared_ptr<RingSpec> base_spec(int p, int f, int k, const std::vector<int64_t>& modulus) {
    if (!is_prime(p)) throw Error("ring: p = " + std::to_string(p) + " is not prime");
    if (f < 1 || f > kMaxDegree) throw Error("ring: degree f must lie in 1.." + std::to_string(kMaxDegree));
    if (k < 1) throw Error("ring: precision k must be at least 1");
    auto r = std::make_shared<RingSpec>();
    r->p = p;
    r->f = f;
    r->k = k;
    r->ord2 = (p == 2) ? 1 : 0;
    r->ppow.push_back(1);
    for (int i = 0; i < k; ++i) {
        unsigned __int128 next = static_cast<unsigned __int128>(r->ppow.back()) * static_cast<uint64_t>(p);
        if (next >= (static_cast<unsigned __int128>(1) << 62))
            throw Error("ring: p^k must stay below 2^62");
        r->ppow.push_back(static_cast<uint64_t>(next));
    }
    r->pk = r->ppow[k];
    r->q = 1;
    for (int i = 0; i < f; ++i) r->q *= p;
    if (r->q > 4096) throw Error("ring: residue field too large for table arithmetic");
    if (static_cast<int>(modulus.size()) != f) throw Error("ring: modulus needs f lower coefficients");
    SmallPoly check(f + 1, 0);
    check[f] = 1;
    for (int i = 0; i < f; ++i) {
        r->modulus[i] = reduce_signed(modulus[i], r->pk);
        check[i] = static_cast<int>(r->modulus[i] % p);
    }
    if (!irreducible_mod_p(check, p)) throw Error("ring: modulus is not irreducible mod p");
    return r;
}

}  // namespace

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------- RingElt

void RingElt::check_same(const RingElt& b) const {
    if (ring_ != b.ring_) throw Error("ring mismatch: elements belong to different rings");
}

bool RingElt::is_zero() const {
    for (int i = 0; i < ring_->f; ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool RingElt::is_unit() const {
    for (int i = 0; i < ring_->f; ++i)
        if (c_[i] % ring_->p != 0) return true;
    return false;
}

int RingElt::valuation() const {
    int v = ring_->k;
    for (int i = 0; i < ring_->f; ++i) v = std::min(v, vp_u64(c_[i], ring_->p, ring_->k));
    return v;
}

RingElt RingElt::operator-() const {
    RingElt r(ring_);
    for (int i = 0; i < ring_->f; ++i) r.c_[i] = c_[i] == 0 ? 0 : ring_->pk - c_[i];
    return r;
}

RingElt& RingElt::operator+=(const RingElt& b) {
    check_same(b);
    const uint64_t m = ring_->pk;
    for (int i = 0; i < ring_->f; ++i) {
        uint64_t s = c_[i] + b.c_[i];
        c_[i] = s >= m ? s - m : s;
    }
    return *this;
}

RingElt& RingElt::operator-=(const RingElt& b) {
    check_same(b);
    const uint64_t m = ring_->pk;
    for (int i = 0; i < ring_->f; ++i) c_[i] = c_[i] >= b.c_[i] ? c_[i] - b.c_[i] : c_[i] + m - b.c_[i];
    return *this;
}

RingElt& RingElt::operator*=(const RingElt& b) {
    check_same(b);
    const int f = ring_->f;
    const uint64_t m = ring_->pk;
    if (f == 1) {
        c_[0] = mulmod(c_[0], b.c_[0], m);
        return *this;
    }
    std::array<uint64_t, 2 * kMaxDegree> prod{};
    for (int i = 0; i < f; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < f; ++j) {
            uint64_t t = prod[i + j] + mulmod(c_[i], b.c_[j], m);
            prod[i + j] = t >= m ? t - m : t;
        }
    }
    for (int d = 2 * f - 2; d >= f; --d) {
        uint64_t t = prod[d];
        if (t == 0) continue;
        prod[d] = 0;
        for (int i = 0; i < f; ++i) {
            uint64_t s = mulmod(t, ring_->modulus[i], m);
            uint64_t& dst = prod[d - f + i];
            dst = dst >= s ? dst - s : dst + m - s;
        }
    }
    for (int i = 0; i < f; ++i) c_[i] = prod[i];
    return *this;
}

bool operator==(const RingElt& a, const RingElt& b) {
    if (a.ring_ != b.ring_) return false;
    for (int i = 0; i < a.ring_->f; ++i)
        if (a.c_[i] != b.c_[i]) return false;
    return true;
}

RingElt RingElt::inverse() const {
    if (!is_unit()) throw Error("division by a non-unit");
    const RingSpec& r = *ring_;
    RingElt x = r.from_residue(r.field.inv(residue()));
    RingElt two = r.from_int(2);
    RingElt one = r.one();
    for (int it = 0; it < 64; ++it) {
        RingElt e = *this * x;
        if (e == one) return x;
        x = x * (two - e);
    }
    throw Error("internal: inverse iteration did not converge");
}

RingElt RingElt::shift_down(int v) const {
    if (v == 0) return *this;
    if (valuation() < v) throw Error("shift_down: element not divisible by p^" + std::to_string(v));
    RingElt r(ring_);
    for (int i = 0; i < ring_->f; ++i) r.c_[i] = c_[i] / ring_->ppow[v];
    return r;
}

RingElt RingElt::shift_up(int v) const {
    if (v >= ring_->k) return RingElt(ring_);
    return *this * ring_->p_power(v);
}

RingElt RingElt::exact_div(const RingElt& b) const {
    check_same(b);
    int vb = b.valuation();
    if (vb >= ring_->k) throw Error("exact_div: division by zero");
    if (ord_or_inf(*this) < vb) throw Error("exact_div: quotient not integral");
    return shift_down(vb) * b.shift_down(vb).inverse();
}

RingElt RingElt::pow(uint64_t e) const {
    RingElt result = ring_->one();
    RingElt base = *this;
    while (e) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

RingElt RingElt::reduce(int j) const {
    if (j >= ring_->k) return *this;
    RingElt r(ring_);
    for (int i = 0; i < ring_->f; ++i) r.c_[i] = c_[i] % ring_->ppow[j];
    return r;
}

uint64_t RingElt::code(int j) const {
    const uint64_t m = ring_->ppow[std::min(j, ring_->k)];
    uint64_t code = 0;
    for (int i = ring_->f - 1; i >= 0; --i) code = code * m + c_[i] % m;
    return code;
}

int RingElt::residue() const {
    int code = 0;
    for (int i = ring_->f - 1; i >= 0; --i) code = code * ring_->p + static_cast<int>(c_[i] % ring_->p);
    return code;
}

bool RingElt::less_lex(const RingElt& b) const {
    for (int i = 0; i < ring_->f; ++i)
        if (c_[i] != b.c_[i]) return c_[i] < b.c_[i];
    return false;
}

std::string RingElt::to_string() const {
    std::string s;
    for (int i = 0; i < ring_->f; ++i) {
        if (i) s += ',';
        s += std::to_string(c_[i]);
    }
    return s;
}

RingElt& RingElt::set_coeff(int i, uint64_t v) {
    c_[i] = v % ring_->pk;
    return *this;
}

// ---------------------------------------------------------------- RingSpec

RingElt RingSpec::from_int(int64_t v) const {
    RingElt r(this);
    r.set_coeff(0, reduce_signed(v, pk));
    return r;
}

RingElt RingSpec::from_coeffs(const std::vector<int64_t>& cs) const {
    if (static_cast<int>(cs.size()) > f) throw Error("element has more than f coefficients");
    RingElt r(this);
    for (size_t i = 0; i < cs.size(); ++i) r.set_coeff(static_cast<int>(i), reduce_signed(cs[i], pk));
    return r;
}

RingElt RingSpec::generator() const {
    if (f == 1) return from_int(-static_cast<int64_t>(modulus[0]));
    RingElt r(this);
    r.set_coeff(1, 1);
    return r;
}

RingElt RingSpec::from_code(uint64_t code, int j) const {
    const uint64_t m = ppow[std::min(j, k)];
    RingElt r(this);
    for (int i = 0; i < f; ++i) {
        r.set_coeff(i, code % m);
        code /= m;
    }
    return r;
}

RingElt RingSpec::from_residue(int code) const {
    RingElt r(this);
    for (int i = 0; i < f; ++i) {
        r.set_coeff(i, static_cast<uint64_t>(code % p));
        code /= p;
    }
    return r;
}

RingElt RingSpec::p_power(int e) const {
    if (e >= k) return zero();
    RingElt r(this);
    r.set_coeff(0, ppow[e]);
    return r;
}

std::string RingSpec::to_string() const {
    std::string s = std::to_string(p) + "," + std::to_string(f) + "," + std::to_string(k);
    if (custom_modulus)
        for (int i = 0; i < f; ++i) s += "," + std::to_string(modulus[i]);
    return s;
}

// ---------------------------------------------------------------- constructors

Ring make_ring(int p, int f, int k) {
    if (f < 1 || f > kMaxDegree) throw Error("ring: degree f must lie in 1.." + std::to_string(kMaxDegree));
    if (!is_prime(p)) throw Error("ring: p = " + std::to_string(p) + " is not prime");
    return make_ring(p, f, k, smallest_irreducible(p, f));
}

Ring make_ring(int p, int f, int k, const std::vector<int64_t>& modulus) {
    if (p == 2 && k < 5)
        throw PrecisionError("ring: p = 2 needs k >= 5 to certify that delta is a nonsquare");
    auto r = base_spec(p, f, k, modulus);
    if (f > 1) {
        auto def = smallest_irreducible(p, f);
        for (int i = 0; i < f; ++i)
            if (reduce_signed(def[i], r->pk) != r->modulus[i]) r->custom_modulus = true;
    }
    build_field(*r);
    build_square_table(*r);
    auto [rho, delta] = find_rho(*r);
    r->rho = rho;
    r->delta = delta;
    r->unit_reps = unit_square_class_reps(*r);
    return r;
}

Ring truncated_ring(const RingSpec& parent, int m) {
    std::vector<int64_t> mod(parent.f);
    for (int i = 0; i < parent.f; ++i) mod[i] = static_cast<int64_t>(parent.modulus[i]);
    auto r = base_spec(parent.p, parent.f, m, mod);
    r->custom_modulus = parent.custom_modulus;
    build_field(*r);
    build_square_table(*r);
    r->rho = RingElt(r.get());
    r->delta = RingElt(r.get());
    for (int i = 0; i < parent.f; ++i) {
        r->rho.set_coeff(i, parent.rho.coeff(i) % r->pk);
        r->delta.set_coeff(i, parent.delta.coeff(i) % r->pk);
    }
    return r;
}

Ring parse_ring(const std::string& text) {
    std::vector<int64_t> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            parts.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error("ring: cannot parse '" + text + "'");
        }
    }
    if (parts.size() < 3) throw Error("ring: expected p,f,k[,modulus coefficients]");
    int p = static_cast<int>(parts[0]), f = static_cast<int>(parts[1]), k = static_cast<int>(parts[2]);
    if (parts.size() == 3) return make_ring(p, f, k);
    if (static_cast<int>(parts.size()) != 3 + f) throw Error("ring: modulus needs exactly f coefficients");
    return make_ring(p, f, k, std::vector<int64_t>(parts.begin() + 3, parts.end()));
}

namespace {

struct ElementParser {
    const RingSpec& r;
    const std::string& s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail() { throw Error("cannot parse ring element '" + s + "'"); }

    int64_t integer() {
        skip();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start])))) fail();
        return std::stoll(s.substr(start, pos - start));
    }

    RingElt atom() {
        skip();
        if (pos >= s.size()) fail();
        if (s[pos] == '-') {
            ++pos;
            return -atom();
        }
        if (s[pos] == '[') {
            ++pos;
            std::vector<int64_t> cs;
            for (;;) {
                cs.push_back(integer());
                skip();
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (pos < s.size() && s[pos] == ']') {
                    ++pos;
                    break;
                }
                fail();
            }
            return r.from_coeffs(cs);
        }
        for (const char* word : {"rho", "delta", "x"}) {
            size_t len = std::char_traits<char>::length(word);
            if (s.compare(pos, len, word) == 0) {
                pos += len;
                if (word[0] == 'r') return r.rho;
                if (word[0] == 'd') return r.delta;
                return r.generator();
            }
        }
        if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            const std::string digits = s.substr(start, pos - start);
            RingElt v = r.zero();
            RingElt ten = r.from_int(10);
            for (char ch : digits) v = v * ten + r.from_int(ch - '0');
            return v;
        }
        fail();
    }

    RingElt product() {
        RingElt v = atom();
        skip();
        while (pos < s.size() && s[pos] == '*') {
            ++pos;
            v *= atom();
            skip();
        }
        return v;
    }
};

}  // namespace

RingElt parse_element(const RingSpec& r, const std::string& text) {
    if (text.find(',') != std::string::npos && text.find('[') == std::string::npos)
        return parse_element(r, "[" + text + "]");
    ElementParser ps{r, text};
    RingElt v = ps.product();
    ps.skip();
    if (ps.pos != text.size()) ps.fail();
    return v;
}

// ---------------------------------------------------------------- squares

bool is_square(const RingElt& x) {
    const RingSpec& r = *x.ring();
    if (!x.is_unit()) throw Error("is_square: input must be a unit");
    if (r.p == 2) {
        if (r.k < 5) throw PrecisionError("is_square: p = 2 needs k >= 5");
        return r.square_mod8[x.code(3)] != 0;
    }
    int base = x.residue();
    int acc = 1;
    for (int e = (r.q - 1) / 2; e > 0; --e) acc = r.field.mul(acc, base);
    return acc == 1;
}

namespace {

// Root of the unit u modulo p^k (any branch).
RingElt unit_root(const RingElt& u) {
    const RingSpec& r = *u.ring();
    RingElt s;
    if (r.p == 2) {
        uint64_t n = r.square_mod8.size();
        uint64_t target = u.code(3);
        bool found = false;
        for (uint64_t c = 0; c < n && !found; ++c) {
            RingElt a = r.from_code(c, 3);
            if (a.is_unit() && (a * a).code(3) == target) {
                s = a;
                found = true;
            }
        }
        if (!found) throw Error("sqrt: nonsquare input");
        for (int it = 0; it < 4 * r.k + 8; ++it) {
            RingElt d = s * s - u;
            if (d.is_zero()) return s;
            s = s - d.shift_down(1) * s.inverse();
        }
    } else {
        int target = u.residue();
        int root = -1;
        for (int a = 1; a < r.q && root < 0; ++a)
            if (r.field.mul(a, a) == target) root = a;
        if (root < 0) throw Error("sqrt: nonsquare input");
        s = r.from_residue(root);
        RingElt half = r.from_int(2).inverse();
        for (int it = 0; it < 4 * r.k + 8; ++it) {
            if (s * s == u) return s;
            s = (s + u / s) * half;
        }
    }
    throw Error("internal: sqrt iteration did not converge");
}

RingElt canonical_unit_root(const RingElt& u) {
    const RingSpec& r = *u.ring();
    RingElt s = unit_root(u);
    std::vector<RingElt> cands{s, -s};
    if (r.p == 2) {
        std::vector<RingElt> more;
        for (int t = 1; t < (1 << r.f); ++t) {
            RingElt shift(&r);
            for (int i = 0; i < r.f; ++i)
                if (t >> i & 1) shift.set_coeff(i, r.ppow[r.k - 1]);
            for (const auto& c : cands) more.push_back(c + shift);
        }
        cands.insert(cands.end(), more.begin(), more.end());
    }
    RingElt best = cands.front();
    for (const auto& c : cands)
        if (c.less_lex(best)) best = c;
    return best;
}

}  // namespace

RingElt sqrt(const RingElt& x) {
    const RingSpec& r = *x.ring();
    if (x.is_zero()) return x;
    int v = x.valuation();
    if (v % 2 != 0) throw Error("sqrt: odd valuation, not a square");
    if (v == 0) {
        if (!is_square(x)) throw Error("sqrt: nonsquare input");
        return canonical_unit_root(x);
    }
    int m = r.k - v;
    if (r.p == 2 && m < 3) throw PrecisionError("sqrt: too few digits left in the unit part");
    Ring small = truncated_ring(r, m);
    RingElt u(small.get());
    RingElt shifted = x.shift_down(v);
    for (int i = 0; i < r.f; ++i) u.set_coeff(i, shifted.coeff(i));
    if (r.p == 2) {
        if (!small->square_mod8[u.code(3)]) throw Error("sqrt: nonsquare input");
    } else if (u.residue() != 0) {
        int acc = 1;
        for (int e = (small->q - 1) / 2; e > 0; --e) acc = small->field.mul(acc, u.residue());
        if (acc != 1) throw Error("sqrt: nonsquare input");
    }
    RingElt s = canonical_unit_root(u);
    RingElt y(&r);
    for (int i = 0; i < r.f; ++i) y.set_coeff(i, s.coeff(i));
    return y.shift_up(v / 2);
}

std::pair<RingElt, RingElt> find_rho(const RingSpec& r) {
    RingElt one = r.one();
    RingElt four = r.from_int(4);
    if (r.p == 2 && r.f == 1) return {one, one - four};
    if (r.p != 2) {
        for (int code = 1; code < r.q; ++code) {
            RingElt d = r.from_residue(code);
            if (!is_square(d)) return {(one - d) / four, d};
        }
    } else {
        uint64_t n = r.square_mod8.size();
        for (uint64_t c = 0; c < n; ++c) {
            RingElt rho = r.from_code(c, 3);
            if (!rho.is_unit()) continue;
            RingElt d = one - four * rho;
            if (!is_square(d)) return {rho, d};
        }
    }
    throw Error("internal: no admissible rho found");
}

std::vector<RingElt> unit_square_class_reps(const RingSpec& r) {
    if (!r.unit_reps.empty()) return r.unit_reps;
    if (r.p != 2) return {r.one(), r.delta};
    std::vector<RingElt> reps;
    uint64_t n = r.square_mod8.size();
    for (uint64_t c = 0; c < n; ++c) {
        RingElt u = r.from_code(c, 3);
        if (!u.is_unit()) continue;
        bool fresh = true;
        for (const auto& rep : reps)
            if (is_square(u / rep)) {
                fresh = false;
                break;
            }
        if (fresh) reps.push_back(u);
    }
    return reps;
}

RingElt square_class_rep(const RingElt& u) {
    for (const auto& rep : u.ring()->unit_reps)
        if (is_square(u / rep)) return rep;
    throw Error("internal: unit without square class");
}

}  // namespace qlat
