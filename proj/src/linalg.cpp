#include "qlat/linalg.hpp"

#include <numeric>

namespace qlat {

RingMatrix block_diagonal(const std::vector<RingMatrix>& blocks) {
    int n = 0;
    const RingSpec* r = nullptr;
    for (const auto& b : blocks) {
        n += b.rows();
        if (b.rows() > 0) r = b(0, 0).ring();
    }
    RingMatrix out = zeros(*r, n, n);
    int off = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    return out;
}

RingMatrix hstack(const RingMatrix& a, const RingMatrix& b) {
    RingMatrix out(a.rows(), a.cols() + b.cols(), RingElt{});
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

int min_valuation(const RingMatrix& a) {
    int v = kInfiniteOrder;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) v = std::min(v, ord_or_inf(a(i, j)));
    return v;
}

namespace {

Elimination eliminate_with(RingMatrix w, RingVector* rhs) {
    Elimination e;
    const int n = w.rows();
    const int m = w.cols();
    e.col_perm.resize(m);
    std::iota(e.col_perm.begin(), e.col_perm.end(), 0);
    for (int t = 0; t < std::min(n, m); ++t) {
        int best = kInfiniteOrder, bi = -1, bj = -1;
        for (int i = t; i < n && best > 0; ++i)
            for (int j = t; j < m; ++j) {
                int v = ord_or_inf(w(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (bi < 0) break;
        if (bi != t) {
            w.swap_rows(bi, t);
            if (rhs) std::swap((*rhs)[bi], (*rhs)[t]);
            e.sign = -e.sign;
        }
        if (bj != t) {
            w.swap_cols(bj, t);
            std::swap(e.col_perm[bj], e.col_perm[t]);
            e.sign = -e.sign;
        }
        const RingElt piv = w(t, t);
        for (int i = t + 1; i < n; ++i) {
            if (w(i, t).is_zero()) continue;
            RingElt mult = w(i, t).exact_div(piv);
            for (int j = t; j < m; ++j) w(i, j) -= mult * w(t, j);
            if (rhs) (*rhs)[i] -= mult * (*rhs)[t];
        }
        e.pivot_vals.push_back(best);
        ++e.rank;
    }
    e.reduced = std::move(w);
    return e;
}

}  // namespace

Elimination eliminate(const RingMatrix& a) { return eliminate_with(a, nullptr); }

RingElt determinant(const RingMatrix& a) {
    if (a.rows() != a.cols()) throw Error("determinant: matrix not square");
    const RingSpec& r = *a(0, 0).ring();
    Elimination e = eliminate(a);
    if (e.rank < a.rows()) return r.zero();
    RingElt d = e.sign > 0 ? r.one() : -r.one();
    for (int i = 0; i < a.rows(); ++i) d *= e.reduced(i, i);
    return d;
}

int rank_mod_p(const RingMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    const ResidueField& F = a(0, 0).ring()->field;
    const int n = a.rows(), m = a.cols();
    std::vector<int> w(static_cast<size_t>(n) * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) w[i * m + j] = a(i, j).residue();
    int rank = 0;
    for (int c = 0; c < m && rank < n; ++c) {
        int piv = -1;
        for (int i = rank; i < n; ++i)
            if (w[i * m + c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < m; ++j) std::swap(w[piv * m + j], w[rank * m + j]);
        int inv = F.inv(w[rank * m + c]);
        for (int i = rank + 1; i < n; ++i) {
            int f = F.mul(w[i * m + c], inv);
            if (f == 0) continue;
            for (int j = c; j < m; ++j) w[i * m + j] = F.sub(w[i * m + j], F.mul(f, w[rank * m + j]));
        }
        ++rank;
    }
    return rank;
}

std::optional<MinorChoice> best_minor(const RingMatrix& a) {
    Elimination e = eliminate(a);
    if (e.rank < a.rows()) return std::nullopt;
    MinorChoice mc;
    mc.cols.assign(e.col_perm.begin(), e.col_perm.begin() + a.rows());
    mc.valuation = std::accumulate(e.pivot_vals.begin(), e.pivot_vals.end(), 0);
    if (mc.valuation >= a(0, 0).ring()->k) return std::nullopt;
    return mc;
}

std::optional<RingVector> solve(const RingMatrix& a, const RingVector& b) {
    const RingSpec& r = *a(0, 0).ring();
    RingVector rhs = b;
    Elimination e = eliminate_with(a, &rhs);
    const int n = a.rows(), m = a.cols();
    for (int i = e.rank; i < n; ++i)
        if (!rhs[i].is_zero()) return std::nullopt;
    RingVector y(m, r.zero());
    for (int t = e.rank - 1; t >= 0; --t) {
        RingElt num = rhs[t];
        for (int j = t + 1; j < e.rank; ++j) num -= e.reduced(t, j) * y[j];
        if (ord_or_inf(num) < e.pivot_vals[t]) return std::nullopt;
        y[t] = num.exact_div(e.reduced(t, t));
    }
    RingVector x(m, r.zero());
    for (int j = 0; j < m; ++j) x[e.col_perm[j]] = y[j];
    return x;
}

RingMatrix inverse(const RingMatrix& u) {
    const RingSpec& r = *u(0, 0).ring();
    const int n = u.rows();
    if (!determinant(u).is_unit()) throw Error("inverse: determinant is not a unit");
    RingMatrix inv = zeros(r, n, n);
    for (int j = 0; j < n; ++j) {
        RingVector e(n, r.zero());
        e[j] = r.one();
        auto x = solve(u, e);
        if (!x) throw Error("internal: unimodular system without solution");
        inv.set_col(j, *x);
    }
    return inv;
}

RingMatrix complete_to_basis(const RingMatrix& t) {
    const RingSpec& r = *t(0, 0).ring();
    const int m = t.rows(), n = t.cols();
    if (rank_mod_p(t) != n) throw Error("complete_to_basis: columns are not primitive");
    RingMatrix cur = t;
    for (int i = 0; i < m && cur.cols() < m; ++i) {
        RingMatrix e = zeros(r, m, 1);
        e(i, 0) = r.one();
        RingMatrix trial = hstack(cur, e);
        if (rank_mod_p(trial) == trial.cols()) cur = trial;
    }
    return cur;
}

}  // namespace qlat
