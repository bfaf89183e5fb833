#include "qlat/value_dp.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace qlat {

namespace {

std::vector<int> digits_of(int code, int q, int n) {
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) {
        d[i] = code % q;
        code /= q;
    }
    return d;
}

int code_of(const std::vector<int>& d, int q) {
    int c = 0;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) c = c * q + d[i];
    return c;
}

inline SubspaceSet bit(int i) { return static_cast<SubspaceSet>(1) << i; }

template <typename F>
void for_bits(SubspaceSet s, F&& f) {
    uint64_t lo = static_cast<uint64_t>(s), hi = static_cast<uint64_t>(s >> 64);
    while (lo) {
        f(std::countr_zero(lo));
        lo &= lo - 1;
    }
    while (hi) {
        f(64 + std::countr_zero(hi));
        hi &= hi - 1;
    }
}

uint64_t ipow(uint64_t b, int e) {
    uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

SubspaceTable::SubspaceTable(const ResidueField& field, int n) : field_(&field), n_(n) {
    uint64_t nv = ipow(field.q, n);
    if (nv > 64) throw BudgetError("value search: residue space F_q^n too large for subspace bookkeeping");
    nvec_ = static_cast<int>(nv);
    masks_.push_back(1);
    index_[1] = 0;
    for (size_t i = 0; i < masks_.size(); ++i)
        for (int v = 0; v < nvec_; ++v) {
            uint64_t m = span_mask(masks_[i], v);
            if (!index_.count(m)) {
                index_[m] = static_cast<int>(masks_.size());
                masks_.push_back(m);
                if (masks_.size() > 128) throw BudgetError("value search: too many subspaces of F_q^n");
            }
        }
    const int s = count();
    extend_.assign(static_cast<size_t>(s) * nvec_, 0);
    for (int i = 0; i < s; ++i)
        for (int v = 0; v < nvec_; ++v) extend_[static_cast<size_t>(i) * nvec_ + v] = index_.at(span_mask(masks_[i], v));
    join_.assign(static_cast<size_t>(s) * s, 0);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            int cur = a;
            for (int v = 0; v < nvec_; ++v)
                if (masks_[b] >> v & 1) cur = extend(cur, v);
            join_[static_cast<size_t>(a) * s + b] = cur;
        }
    uint64_t all = nvec_ == 64 ? ~0ull : ((1ull << nvec_) - 1);
    full_ = index_.at(all);
}

uint64_t SubspaceTable::span_mask(uint64_t mask, int vec) const {
    const ResidueField& F = *field_;
    uint64_t out = mask;
    auto vd = digits_of(vec, F.q, n_);
    for (int a = 0; a < nvec_; ++a) {
        if (!(mask >> a & 1)) continue;
        auto ad = digits_of(a, F.q, n_);
        for (int lam = 1; lam < F.q; ++lam) {
            std::vector<int> s(n_);
            for (int i = 0; i < n_; ++i) s[i] = F.add(ad[i], F.mul(lam, vd[i]));
            out |= 1ull << code_of(s, F.q);
        }
    }
    return out;
}

int SubspaceTable::dimension(int sub) const {
    int size = std::popcount(masks_[sub]);
    int d = 0;
    while (size > 1) {
        size /= field_->q;
        ++d;
    }
    return d;
}

ValueDP::ValueDP(const Lattice& host, const JordanSplitting& js, int n, int level, uint64_t budget)
    : host_(&host), js_(&js), n_(n), level_(level), budget_(budget), subs_(host.ring().field, n) {
    if (level < 1) throw Error("value search: level must be positive");
    if (level > host.ring().k) throw PrecisionError("value search: level exceeds working precision");
}

bool ValueDP::charge(uint64_t amount, const char* what) {
    work_ += amount;
    if (work_ > budget_ || amount > budget_) {
        reason_ = std::string("budget exceeded while ") + what;
        return false;
    }
    return true;
}

uint64_t ValueDP::key_add(uint64_t a, uint64_t b) const {
    if (host_->ring().p == 2) return ((a & lmask_) + (b & lmask_)) ^ ((a ^ b) & hmask_);
    uint64_t out = 0;
    const uint64_t mask = (width_ == 64) ? ~0ull : ((1ull << width_) - 1);
    for (int i = 0; i < fields_; ++i) {
        uint64_t x = (a >> (i * width_)) & mask, y = (b >> (i * width_)) & mask;
        uint64_t s = x + y;
        if (s >= field_mod_) s -= field_mod_;
        out |= s << (i * width_);
    }
    return out;
}

uint64_t ValueDP::key_sub(uint64_t a, uint64_t b) const {
    if (host_->ring().p == 2) {
        uint64_t used = hmask_ | lmask_;
        uint64_t neg = key_add(~b & used, ones_);
        return key_add(a, neg);
    }
    uint64_t out = 0;
    const uint64_t mask = (1ull << width_) - 1;
    for (int i = 0; i < fields_; ++i) {
        uint64_t x = (a >> (i * width_)) & mask, y = (b >> (i * width_)) & mask;
        uint64_t s = x >= y ? x - y : x + field_mod_ - y;
        out |= s << (i * width_);
    }
    return out;
}

uint64_t ValueDP::encode(const RingMatrix& s) const {
    const int f = host_->ring().f;
    uint64_t key = 0;
    int field = 0;
    for (int a = 0; a < n_; ++a)
        for (int b = a; b < n_; ++b)
            for (int i = 0; i < f; ++i, ++field) key |= (s(a, b).coeff(i) % field_mod_) << (field * width_);
    return key;
}

SubspaceSet ValueDP::combine(SubspaceSet a, SubspaceSet b) {
    auto it = combine_cache_.find({a, b});
    if (it != combine_cache_.end()) return it->second;
    SubspaceSet out = 0;
    for_bits(a, [&](int x) { for_bits(b, [&](int y) { out |= bit(subs_.join(x, y)); }); });
    combine_cache_.emplace(std::make_pair(a, b), out);
    return out;
}

bool ValueDP::build_contribution(int piece_index, bool need_reps, Contribution& out) {
    const RingSpec& big = host_->ring();
    const RingSpec& r = *small_;
    const JordanPiece& piece = js_->pieces[piece_index];
    const int rk = piece.rank();
    const int d = std::max(1, std::min(level_, level_ - piece.scale));
    out.digits = d;
    out.piece = piece_index;
    const uint64_t per_entry = ipow(big.ppow[d], big.f);
    const int entries = rk * n_;
    uint64_t total = 1;
    for (int i = 0; i < entries; ++i) {
        if (total > budget_ / per_entry + 1) return charge(budget_ + 1, "enumerating a Jordan piece");
        total *= per_entry;
    }
    if (!charge(total, "enumerating a Jordan piece")) return false;

    std::vector<RingElt> vals(per_entry);
    std::vector<int> res(per_entry);
    for (uint64_t c = 0; c < per_entry; ++c) {
        vals[c] = r.from_code(c, d);
        res[c] = vals[c].residue();
    }
    RingMatrix p = zeros(r, rk, rk);
    for (int u = 0; u < rk; ++u)
        for (int v = 0; v < rk; ++v)
            for (int i = 0; i < big.f; ++i) p(u, v).set_coeff(i, piece.gram(u, v).coeff(i));

    const bool zero_piece = piece.scale >= level_;
    std::vector<uint64_t> digit(entries, 0);
    std::vector<RingElt> t(entries, r.zero());
    std::vector<RingElt> pt(entries, r.zero());
    for (int i = 0; i < entries; ++i) t[i] = vals[0];
    const int q = big.q;
    for (uint64_t idx = 0; idx < total; ++idx) {
        if (idx > 0) {
            int pos = 0;
            while (++digit[pos] == per_entry) {
                digit[pos] = 0;
                t[pos] = vals[0];
                ++pos;
            }
            t[pos] = vals[digit[pos]];
        }
        uint64_t key = 0;
        if (!zero_piece) {
            for (int u = 0; u < rk; ++u)
                for (int b = 0; b < n_; ++b) {
                    RingElt s = r.zero();
                    for (int v = 0; v < rk; ++v) s += p(u, v) * t[v * n_ + b];
                    pt[u * n_ + b] = s;
                }
            int field = 0;
            for (int a = 0; a < n_; ++a)
                for (int b = a; b < n_; ++b) {
                    RingElt s = r.zero();
                    for (int u = 0; u < rk; ++u) s += t[u * n_ + a] * pt[u * n_ + b];
                    for (int i = 0; i < big.f; ++i, ++field) key |= s.coeff(i) << (field * width_);
                }
        }
        int sub = subs_.zero();
        for (int u = 0; u < rk; ++u) {
            int vec = 0;
            for (int a = n_ - 1; a >= 0; --a) vec = vec * q + res[digit[u * n_ + a]];
            sub = subs_.extend(sub, vec);
        }
        SubspaceSet& s = out.sets[key];
        if (!(s & bit(sub))) {
            s |= bit(sub);
            if (need_reps) out.reps[key].push_back({static_cast<uint8_t>(sub), idx});
        }
    }
    return true;
}

RingMatrix ValueDP::decode_block(const Contribution& c, uint64_t index) const {
    const RingSpec& big = host_->ring();
    const JordanPiece& piece = js_->pieces[c.piece];
    const uint64_t per_entry = ipow(big.ppow[c.digits], big.f);
    RingMatrix t = zeros(big, piece.rank(), n_);
    for (int u = 0; u < piece.rank(); ++u)
        for (int a = 0; a < n_; ++a) {
            t(u, a) = big.from_code(index % per_entry, c.digits);
            index /= per_entry;
        }
    return t;
}

bool ValueDP::prepare(bool need_reps) {
    if (prepared_ && (have_reps_ || !need_reps)) return true;
    const RingSpec& r = host_->ring();
    small_ = truncated_ring(r, level_);
    field_mod_ = r.ppow[level_];
    width_ = r.p == 2 ? level_ : std::bit_width(field_mod_ - 1);
    fields_ = n_ * (n_ + 1) / 2 * r.f;
    if (fields_ * width_ > 64) {
        reason_ = "Gram residues mod p^" + std::to_string(level_) + " do not fit a 64-bit key";
        return false;
    }
    hmask_ = lmask_ = ones_ = 0;
    for (int i = 0; i < fields_; ++i) {
        ones_ |= 1ull << (i * width_);
        hmask_ |= 1ull << (i * width_ + width_ - 1);
        for (int b = 0; b < width_ - 1; ++b) lmask_ |= 1ull << (i * width_ + b);
    }
    const int np = static_cast<int>(js_->pieces.size());
    std::vector<int> order(np);
    std::iota(order.begin(), order.end(), 0);
    auto size_of = [&](int i) {
        const JordanPiece& pc = js_->pieces[i];
        int d = std::max(1, level_ - pc.scale);
        return static_cast<double>(pc.rank() * n_) * d;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return size_of(a) < size_of(b); });
    contrib_.assign(np, Contribution{});
    for (int i = 0; i < np; ++i)
        if (!build_contribution(order[i], need_reps, contrib_[i])) return false;

    stages_.clear();
    stages_.push_back({{0, bit(subs_.zero())}});
    for (int i = 0; i + 1 < np; ++i) {
        const auto& cur = stages_.back();
        if (!charge(static_cast<uint64_t>(cur.size()) * contrib_[i].sets.size(), "combining Jordan pieces"))
            return false;
        std::unordered_map<uint64_t, SubspaceSet> next;
        next.reserve(cur.size() * 2);
        for (const auto& [ka, ma] : cur)
            for (const auto& [kc, mc] : contrib_[i].sets) next[key_add(ka, kc)] |= combine(ma, mc);
        if (!charge(next.size(), "storing partial Gram states")) return false;
        stages_.push_back(std::move(next));
    }
    prepared_ = true;
    have_reps_ = need_reps;
    return true;
}

ValueDP::Status ValueDP::decide(const RingMatrix& target) {
    if (!prepare(false)) return Status::Budget;
    const uint64_t goal = encode(target);
    const auto& stage = stages_.back();
    const auto& last = contrib_.back();
    if (!charge(last.sets.size(), "matching the last piece")) return Status::Budget;
    for (const auto& [kc, mc] : last.sets) {
        auto it = stage.find(key_sub(goal, kc));
        if (it == stage.end()) continue;
        if (combine(it->second, mc) & bit(subs_.full())) return Status::Feasible;
    }
    return Status::Infeasible;
}

std::optional<RingMatrix> ValueDP::witness(const RingMatrix& target) {
    if (!prepare(true)) return std::nullopt;
    const RingSpec& r = host_->ring();
    const int np = static_cast<int>(contrib_.size());
    std::vector<RingMatrix> blocks(js_->pieces.size());
    uint64_t want_key = encode(target);
    int want_sub = subs_.full();
    // Walk back from the last piece: stage t is the state before contribution t.
    for (int t = np - 1; t >= 0; --t) {
        const auto& stage = stages_[t];
        bool found = false;
        for (const auto& [kc, list] : contrib_[t].reps) {
            auto it = stage.find(key_sub(want_key, kc));
            if (it == stage.end()) continue;
            for (const auto& [csub, idx] : list) {
                int asub = -1;
                for_bits(it->second, [&](int a) {
                    if (asub < 0 && subs_.join(a, csub) == want_sub) asub = a;
                });
                if (asub < 0) continue;
                blocks[contrib_[t].piece] = decode_block(contrib_[t], idx);
                want_key = key_sub(want_key, kc);
                want_sub = asub;
                found = true;
                break;
            }
            if (found) break;
        }
        if (!found) return std::nullopt;
    }
    RingMatrix tj = zeros(r, host_->rank(), n_);
    for (size_t i = 0; i < js_->pieces.size(); ++i) {
        const JordanPiece& pc = js_->pieces[i];
        for (int u = 0; u < pc.rank(); ++u)
            for (int a = 0; a < n_; ++a) tj(pc.first + u, a) = blocks[i](u, a);
    }
    RingMatrix t = js_->basis_change * tj;
    RingMatrix g = congruent(host_->gram(), t);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (ord_or_inf(g(a, b) - target(a, b)) < level_) throw Error("internal: value search witness is wrong");
    if (rank_mod_p(t) != n_) throw Error("internal: value search witness is not primitive");
    return t;
}

std::optional<std::vector<uint64_t>> ValueDP::values(bool primitive) {
    if (n_ != 1) throw Error("value search: value sets need n = 1");
    if (!prepare(false)) return std::nullopt;
    const RingSpec& r = host_->ring();
    const auto& stage = stages_.back();
    const auto& last = contrib_.back();
    if (!charge(static_cast<uint64_t>(stage.size()) * last.sets.size(), "collecting values")) return std::nullopt;
    std::unordered_map<uint64_t, SubspaceSet> fin;
    for (const auto& [ka, ma] : stage)
        for (const auto& [kc, mc] : last.sets) fin[key_add(ka, kc)] |= combine(ma, mc);
    std::vector<uint64_t> out;
    const uint64_t mask = (1ull << width_) - 1;
    for (const auto& [key, m] : fin) {
        if (primitive && !(m & bit(subs_.full()))) continue;
        uint64_t code = 0;
        for (int i = r.f - 1; i >= 0; --i) code = code * field_mod_ + ((key >> (i * width_)) & mask);
        out.push_back(code);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ValueClassSet primitive_values(const Lattice& l, int m, uint64_t budget) {
    JordanSplitting js = jordan_split(l);
    ValueDP dp(l, js, 1, m, budget);
    auto v = dp.values(true);
    if (!v) throw BudgetError("primitive_values: " + dp.budget_reason());
    return ValueClassSet{m, threshold_exponent(l), *v};
}

ValueClassSet value_set(const Lattice& l, int m, uint64_t budget) {
    JordanSplitting js = jordan_split(l);
    ValueDP dp(l, js, 1, m, budget);
    auto v = dp.values(false);
    if (!v) throw BudgetError("value_set: " + dp.budget_reason());
    return ValueClassSet{m, threshold_exponent(l), *v};
}

}  // namespace qlat
