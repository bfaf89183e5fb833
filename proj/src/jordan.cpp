#include "qlat/jordan.hpp"

#include <algorithm>

namespace qlat {

std::vector<int> JordanSplitting::scales() const {
    std::vector<int> s;
    for (const auto& b : blocks) s.push_back(b.scale);
    return s;
}

std::vector<int> JordanSplitting::ranks() const {
    std::vector<int> s;
    for (const auto& b : blocks) s.push_back(b.rank());
    return s;
}

std::vector<int> JordanSplitting::tail_columns(int s) const {
    std::vector<int> cols;
    for (const auto& b : blocks)
        if (b.scale >= s)
            for (int i = 0; i < b.rank(); ++i) cols.push_back(b.first + i);
    return cols;
}

std::optional<Lattice> JordanSplitting::tail(const Lattice& l, int s) const {
    std::vector<RingMatrix> parts;
    for (const auto& b : blocks)
        if (b.scale >= s) parts.push_back(b.gram);
    if (parts.empty()) return std::nullopt;
    return Lattice::unchecked(l.ring_ptr(), block_diagonal(parts));
}

JordanSplitting jordan_split(const Lattice& l) {
    const RingSpec& r = l.ring();
    const int n = l.rank();
    if (l.degenerate()) throw PrecisionError("jordan_split: determinant vanishes at working precision");
    const RingMatrix& g = l.gram();
    RingMatrix u = identity(r, n);
    std::vector<int> remaining(n);
    for (int i = 0; i < n; ++i) remaining[i] = i;
    std::vector<std::pair<int, std::vector<int>>> steps;  // scale, columns of u

    while (!remaining.empty()) {
        RingMatrix w = congruent(g, u);
        int s = kInfiniteOrder;
        for (int i : remaining)
            for (int j : remaining) s = std::min(s, ord_or_inf(w(i, j)));
        if (s >= r.k) throw PrecisionError("jordan_split: remaining block vanishes at working precision");
        int diag = -1;
        for (int i : remaining)
            if (ord_or_inf(w(i, i)) == s) {
                diag = i;
                break;
            }
        int oi = -1, oj = -1;
        if (diag < 0) {
            for (size_t a = 0; a < remaining.size() && oi < 0; ++a)
                for (size_t b = a + 1; b < remaining.size(); ++b)
                    if (ord_or_inf(w(remaining[a], remaining[b])) == s) {
                        oi = remaining[a];
                        oj = remaining[b];
                        break;
                    }
            if (r.p != 2) {
                // 2 is a unit: e_i + e_j has norm of order s.
                for (int row = 0; row < n; ++row) u(row, oi) += u(row, oj);
                w = congruent(g, u);
                diag = oi;
            }
        }
        auto col = [&](int c) { return u.col(c); };
        if (diag >= 0) {
            const RingElt a = w(diag, diag);
            for (int j : remaining) {
                if (j == diag || w(j, diag).is_zero()) continue;
                RingElt c = w(j, diag).exact_div(a);
                RingVector ui = col(diag);
                for (int row = 0; row < n; ++row) u(row, j) -= c * ui[row];
            }
            steps.push_back({s, {diag}});
            remaining.erase(std::find(remaining.begin(), remaining.end(), diag));
        } else {
            // Work with the block divided by p^s so that its determinant is a unit; dividing by
            // a determinant of order 2s would leave residues of order k - s.
            const RingElt a = w(oi, oi).shift_down(s), b = w(oi, oj).shift_down(s), c = w(oj, oj).shift_down(s);
            const RingElt det = a * c - b * b;
            if (!det.is_unit()) throw Error("internal: binary pivot is not modular");
            RingVector ui = col(oi), uj = col(oj);
            for (int l2 : remaining) {
                if (l2 == oi || l2 == oj) continue;
                RingElt wi = w(oi, l2), wj = w(oj, l2);
                RingElt x = ((c * wi - b * wj) * det.inverse()).shift_down(s);
                RingElt y = ((a * wj - b * wi) * det.inverse()).shift_down(s);
                for (int row = 0; row < n; ++row) u(row, l2) -= x * ui[row] + y * uj[row];
            }
            steps.push_back({s, {oi, oj}});
            remaining.erase(std::find(remaining.begin(), remaining.end(), oi));
            remaining.erase(std::find(remaining.begin(), remaining.end(), oj));
        }
    }

    std::vector<int> order;
    for (const auto& st : steps) order.insert(order.end(), st.second.begin(), st.second.end());
    JordanSplitting js;
    js.basis_change = u.select_cols(order);
    RingMatrix w = congruent(g, js.basis_change);
    int off = 0;
    int max_scale = 0;
    for (const auto& st : steps) {
        const int rk = static_cast<int>(st.second.size());
        JordanPiece piece{st.first, off, w.block(off, off, rk, rk)};
        js.pieces.push_back(piece);
        if (js.blocks.empty() || js.blocks.back().scale != st.first) {
            js.blocks.push_back(JordanBlock{st.first, off, piece.gram, false, std::nullopt});
        } else {
            JordanBlock& b = js.blocks.back();
            b.gram = w.block(b.first, b.first, b.rank() + rk, b.rank() + rk);
        }
        off += rk;
        max_scale = std::max(max_scale, st.first);
    }
    if (r.k < max_scale + 2 * r.ord2 + 1)
        throw PrecisionError("jordan_split: precision " + std::to_string(r.k) + " cannot resolve a block of scale " +
                             std::to_string(max_scale));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool same_block = false;
            for (const auto& b : js.blocks)
                if (i >= b.first && i < b.first + b.rank() && j >= b.first && j < b.first + b.rank()) same_block = true;
            if (!same_block && !w(i, j).is_zero()) throw Error("internal: Jordan blocks are not orthogonal");
        }
    for (auto& b : js.blocks) {
        int diag = kInfiniteOrder;
        for (int i = 0; i < b.rank(); ++i) diag = std::min(diag, ord_or_inf(b.gram(i, i)));
        b.even = diag > b.scale;
        if (r.p == 2 && r.f == 1 && !b.even) {
            RingMatrix unit = zeros(r, b.rank(), b.rank());
            for (int i = 0; i < b.rank(); ++i)
                for (int j = 0; j < b.rank(); ++j) unit(i, j) = b.gram(i, j).shift_down(b.scale);
            b.two_signature = two_signature(unit);
        }
    }
    return js;
}

std::vector<RingElt> diagonalize_odd_unimodular(const RingMatrix& g, RingMatrix* basis) {
    const RingSpec& r = *g(0, 0).ring();
    const int n = g.rows();
    if (r.p != 2) throw Error("diagonalize_odd_unimodular: requires p = 2");
    if (!determinant(g).is_unit()) throw Error("diagonalize_odd_unimodular: block is not unimodular");
    RingMatrix u = identity(r, n);
    std::vector<int> pool(n), done;
    for (int i = 0; i < n; ++i) pool[i] = i;
    bool odd = false;
    for (int i = 0; i < n; ++i) odd = odd || g(i, i).is_unit();
    if (!odd) throw Error("diagonalize_odd_unimodular: block is even");

    auto project_from = [&](int piv) {
        RingMatrix w = congruent(g, u);
        RingVector up = u.col(piv);
        for (int j : pool) {
            if (j == piv || w(j, piv).is_zero()) continue;
            RingElt c = w(j, piv) / w(piv, piv);
            for (int row = 0; row < n; ++row) u(row, j) -= c * up[row];
        }
        pool.erase(std::find(pool.begin(), pool.end(), piv));
        done.push_back(piv);
    };

    while (!pool.empty()) {
        RingMatrix w = congruent(g, u);
        int piv = -1;
        for (int i : pool)
            if (w(i, i).is_unit()) {
                piv = i;
                break;
            }
        if (piv >= 0) {
            project_from(piv);
            continue;
        }
        // The pool spans an even unimodular lattice: fold the last split vector
        // back in and pivot on its sum with the first pool vector.
        int d = done.back();
        done.pop_back();
        int first = pool.front();
        pool.push_back(d);
        for (int row = 0; row < n; ++row) u(row, first) += u(row, d);
        project_from(first);
    }
    std::vector<RingElt> out;
    RingMatrix v = u.select_cols(done);
    RingMatrix wd = congruent(g, v);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (i != j && !wd(i, j).is_zero()) throw Error("internal: diagonalization failed");
        out.push_back(wd(i, i));
    }
    if (basis) *basis = v;
    return out;
}

RingElt two_signature(const RingMatrix& g) {
    const RingSpec& r = *g(0, 0).ring();
    RingElt s = r.zero();
    for (const auto& e : diagonalize_odd_unimodular(g)) s += e;
    return s.reduce(3);
}

JordanInvariants jordan_invariants(const Lattice& l) {
    JordanSplitting js = jordan_split(l);
    JordanInvariants inv;
    for (const auto& b : js.blocks) {
        inv.scales.push_back(b.scale);
        inv.ranks.push_back(b.rank());
        inv.even.push_back(b.even);
    }
    return inv;
}

}  // namespace qlat

namespace qlat {

namespace {

bool residue_is_square(const ResidueField& f, int a) {
    int x = 1;
    for (int i = 0; i < (f.q - 1) / 2; ++i) x = f.mul(x, a);
    return x == 1;
}

// Valuation and unit part, with enough digits left for the symbol.
std::pair<int, RingElt> split_unit_part(const RingElt& a) {
    const RingSpec& r = *a.ring();
    if (a.is_zero()) throw PrecisionError("hilbert_symbol: zero argument");
    int v = a.valuation();
    if (r.k - v < (r.p == 2 ? 3 : 1)) throw PrecisionError("hilbert_symbol: unit part below precision");
    return {v, a.shift_down(v)};
}

}  // namespace

int hilbert_symbol(const RingElt& a, const RingElt& b) {
    const RingSpec& r = *a.ring();
    auto [al, u] = split_unit_part(a);
    auto [be, w] = split_unit_part(b);
    if (r.p != 2) {
        int s = (static_cast<int64_t>(al) * be * ((r.q - 1) / 2)) % 2 ? -1 : 1;
        if (be % 2 && !residue_is_square(r.field, u.residue())) s = -s;
        if (al % 2 && !residue_is_square(r.field, w.residue())) s = -s;
        return s;
    }
    if (r.f != 1) throw Error("hilbert_symbol: only Z_2 is supported at p = 2");
    uint64_t x = u.coeff(0) & 7, y = w.coeff(0) & 7;
    auto eps = [](uint64_t t) { return static_cast<int>(((t - 1) / 2) & 1); };
    auto omega = [](uint64_t t) { return static_cast<int>(((t * t - 1) / 8) & 1); };
    int e = eps(x) * eps(y) + (al & 1) * omega(y) + (be & 1) * omega(x);
    return e % 2 ? -1 : 1;
}

std::optional<int> hasse_invariant(const Lattice& l) {
    const RingSpec& r = l.ring();
    if (r.p == 2 && r.f != 1) return std::nullopt;
    if (l.degenerate()) return std::nullopt;
    try {
        std::vector<RingElt> diag;
        for (const auto& piece : jordan_split(l).pieces) {
            const RingMatrix& g = piece.gram;
            if (piece.rank() == 1) {
                diag.push_back(g(0, 0));
                continue;
            }
            // A binary space representing t is <t, t det>.
            RingElt cands[3] = {g(0, 0), g(1, 1), g(0, 0) + g(0, 1) + g(1, 0) + g(1, 1)};
            RingElt t = cands[0];
            for (const auto& c : cands)
                if (!c.is_zero() && (t.is_zero() || c.valuation() < t.valuation())) t = c;
            diag.push_back(t);
            diag.push_back(t * determinant(g));
        }
        int h = 1;
        for (size_t i = 0; i < diag.size(); ++i)
            for (size_t j = i + 1; j < diag.size(); ++j) h *= hilbert_symbol(diag[i], diag[j]);
        return h;
    } catch (const PrecisionError&) {
        return std::nullopt;
    }
}

}  // namespace qlat
