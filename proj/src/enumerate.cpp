#include "qlat/enumerate.hpp"

#include <algorithm>
#include <map>

#include "qlat/spaces.hpp"

namespace qlat {

Lattice BlockType::lattice(const Ring& r) const {
    RingElt s = r->p_power(scale);
    switch (kind) {
        case Hyperbolic: return hyperbolic(r, s);
        case Anisotropic: return anisotropic(r, s);
        default: return diagonal(r, std::vector<RingElt>{s * unit});
    }
}

std::string BlockType::name() const {
    const RingSpec& r = *unit.ring();
    std::string s = std::to_string(r.ppow[scale]);
    if (kind == Hyperbolic) return scale == 0 ? "H" : "H:" + s;
    if (kind == Anisotropic) return scale == 0 ? "A" : "A:" + s;
    RingElt v = r.p_power(scale) * unit;
    // Small signed integers read better than residues mod p^k.
    if (r.f == 1) {
        int64_t c = static_cast<int64_t>(v.coeff(0));
        if (static_cast<uint64_t>(c) > r.pk / 2) c -= static_cast<int64_t>(r.pk);
        return "diag:" + std::to_string(c);
    }
    return "diag:[" + v.to_string() + "]";
}

std::vector<BlockType> block_types(const Ring& r, int min_scale, int max_scale, bool even_only) {
    std::vector<BlockType> out;
    for (int s = min_scale; s <= max_scale; ++s) {
        if (!even_only || s >= r->ord2)
            for (const auto& u : r->unit_reps) out.push_back(BlockType{BlockType::Unary, s, u});
        if (r->p == 2) {
            out.push_back(BlockType{BlockType::Hyperbolic, s, r->one()});
            out.push_back(BlockType{BlockType::Anisotropic, s, r->one()});
        }
    }
    return out;
}

std::vector<CandidateLattice> block_candidates(const Ring& r, int n, int min_scale, int max_scale, bool even_only,
                                               uint64_t limit, std::optional<int> ord_det) {
    std::vector<BlockType> types = block_types(r, min_scale, max_scale, even_only);
    std::vector<CandidateLattice> out;
    std::vector<int> chosen;
    auto rec = [&](auto&& self, size_t start, int rank_left, int det_left) -> void {
        if (rank_left == 0) {
            if (ord_det && det_left != 0) return;
            std::vector<Lattice> parts;
            std::vector<BlockType> blocks;
            std::string name;
            for (int idx : chosen) {
                parts.push_back(types[idx].lattice(r));
                blocks.push_back(types[idx]);
                name += (name.empty() ? "" : "+") + types[idx].name();
            }
            if (out.size() >= limit) throw BudgetError("block_candidates: more than " + std::to_string(limit));
            out.push_back(CandidateLattice{orthogonal_sum(parts), blocks, name});
            return;
        }
        for (size_t i = start; i < types.size(); ++i) {
            const BlockType& t = types[i];
            if (t.rank() > rank_left) continue;
            int cost = t.scale * t.rank();
            if (ord_det && cost > det_left) continue;
            chosen.push_back(static_cast<int>(i));
            self(self, i, rank_left - t.rank(), det_left - cost);
            chosen.pop_back();
        }
    };
    rec(rec, 0, n, ord_det.value_or(0));
    return out;
}

namespace {

struct ClassKey {
    int ord_det;
    std::string det_class;
    JordanInvariants jordan;
    std::string two_sig;
    int witt;
    bool operator==(const ClassKey& o) const {
        return ord_det == o.ord_det && det_class == o.det_class && jordan == o.jordan && two_sig == o.two_sig &&
               witt == o.witt;
    }
};

ClassKey key_of(const Lattice& l, const DecideOptions& opts) {
    ClassKey k;
    k.ord_det = l.ord_det();
    k.det_class = scale_norm_disc(l).det_class.to_string();
    JordanSplitting js = jordan_split(l);
    for (const auto& b : js.blocks) {
        k.jordan.scales.push_back(b.scale);
        k.jordan.ranks.push_back(b.rank());
        k.jordan.even.push_back(b.even);
    }
    if (js.blocks.size() == 1 && js.blocks[0].two_signature) k.two_sig = js.blocks[0].two_signature->to_string();
    DecideOptions o = opts;
    o.use_complement_split = false;
    k.witt = witt_index(l, o).witt_index;
    return k;
}

}  // namespace

ClassList enumerate_classes(const Ring& r, int n, int a, const EnumerateOptions& opts) {
    ClassList list;
    list.ring = r;
    list.rank = n;
    list.max_scale = a;
    list.even_only = opts.even_only;
    auto cands = block_candidates(r, n, 0, a, opts.even_only, opts.max_candidates);
    list.candidates = static_cast<int>(cands.size());
    std::stable_sort(cands.begin(), cands.end(), [](const CandidateLattice& x, const CandidateLattice& y) {
        return gram_to_string(x.lattice.gram()) < gram_to_string(y.lattice.gram());
    });
    std::vector<ClassKey> keys;
    for (const auto& c : cands) {
        ClassKey key = key_of(c.lattice, opts.decide);
        bool merged = false;
        for (size_t i = 0; i < list.lattices.size() && !merged; ++i) {
            if (!(keys[i] == key)) continue;
            DecisionCertificate cert = isometric(c.lattice, list.lattices[i], opts.decide);
            if (cert.verdict == Verdict::Yes) {
                merged = true;
                list.members[i].push_back(c);
                list.member_maps[i].push_back(*cert.witness);
            }
            if (cert.verdict == Verdict::Unknown) ++list.unresolved_pairs;
        }
        if (merged) continue;
        list.lattices.push_back(c.lattice);
        list.names.push_back(c.name);
        list.members.push_back({c});
        list.member_maps.push_back({identity(*r, c.lattice.rank())});
        keys.push_back(key);
    }
    list.provenance = "block multisets of <p^s e>" + std::string(r->p == 2 ? ", 2^s H, 2^s A" : "") +
                      " with 0 <= s <= " + std::to_string(a) + (opts.even_only ? ", even lattices only" : "") +
                      ", deduplicated by certified isometry";
    return list;
}

}  // namespace qlat
