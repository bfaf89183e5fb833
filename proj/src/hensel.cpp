#include "qlat/hensel.hpp"

#include <algorithm>

namespace qlat {

RingElt Poly::eval(const RingSpec& r, const RingVector& x) const {
    RingElt s = r.zero();
    for (const auto& t : terms) {
        RingElt v = t.coeff;
        for (size_t i = 0; i < t.exps.size(); ++i)
            for (int e = 0; e < t.exps[i]; ++e) v *= x[i];
        s += v;
    }
    return s;
}

Poly Poly::derivative(int var) const {
    Poly d;
    for (const auto& t : terms) {
        int e = t.exps[var];
        if (e == 0) continue;
        Term nt = t;
        nt.coeff = t.coeff * t.coeff.ring()->from_int(e);
        nt.exps[var] = e - 1;
        if (!nt.coeff.is_zero()) d.terms.push_back(nt);
    }
    return d;
}

int Poly::degree() const {
    int d = 0;
    for (const auto& t : terms) {
        int s = 0;
        for (int e : t.exps) s += e;
        d = std::max(d, s);
    }
    return d;
}

RingVector PolySystem::eval(const RingVector& x) const {
    RingVector out;
    out.reserve(equations.size());
    for (const auto& p : equations) out.push_back(p.eval(*ring, x));
    return out;
}

RingMatrix PolySystem::jacobian(const RingVector& x, const std::vector<int>& vars) const {
    RingMatrix j = zeros(*ring, static_cast<int>(equations.size()), static_cast<int>(vars.size()));
    for (size_t i = 0; i < equations.size(); ++i)
        for (size_t c = 0; c < vars.size(); ++c)
            j(static_cast<int>(i), static_cast<int>(c)) = equations[i].derivative(vars[c]).eval(*ring, x);
    return j;
}

PolySystem PolySystem::gram_column(const RingMatrix& h, const std::vector<RingVector>& linear_rows,
                                   const RingVector& targets) {
    const RingSpec& r = *h(0, 0).ring();
    const int m = h.rows();
    PolySystem sys;
    sys.ring = &r;
    sys.nvars = m;
    auto constant = [&](const RingElt& c) {
        Term t{-c, std::vector<int>(m, 0)};
        return t;
    };
    for (size_t i = 0; i < linear_rows.size(); ++i) {
        Poly p;
        for (int v = 0; v < m; ++v) {
            if (linear_rows[i][v].is_zero()) continue;
            Term t{linear_rows[i][v], std::vector<int>(m, 0)};
            t.exps[v] = 1;
            p.terms.push_back(t);
        }
        p.terms.push_back(constant(targets[i]));
        sys.equations.push_back(p);
    }
    Poly q;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            RingElt c = a == b ? h(a, a) : h(a, b) + h(b, a);
            if (c.is_zero()) continue;
            Term t{c, std::vector<int>(m, 0)};
            t.exps[a] += 1;
            t.exps[b] += 1;
            q.terms.push_back(t);
        }
    q.terms.push_back(constant(targets.back()));
    sys.equations.push_back(q);
    return sys;
}

namespace {

int residual_order(const RingVector& f) {
    int v = kInfiniteOrder;
    for (const auto& x : f) v = std::min(v, ord_or_inf(x));
    return v;
}

LiftResult lift(const PolySystem& sys, const RingVector& a, const std::vector<int>& vars) {
    const RingSpec& r = *sys.ring;
    if (vars.size() != sys.equations.size())
        throw Error("hensel: number of moving variables must equal number of equations");
    RingVector x = a;
    RingVector f = sys.eval(x);
    RingMatrix j = sys.jacobian(x, vars);
    RingElt det = determinant(j);
    int ordj = ord_or_inf(det);
    LiftResult res;
    res.jacobian_order = ordj;
    int ordf = residual_order(f);
    if (ordf >= kInfiniteOrder) {
        res.root = x;
        res.distance_bound = r.k;
        return res;
    }
    if (ordj >= kInfiniteOrder || 2 * ordj >= r.k)
        throw PrecisionError("hensel: Jacobian order " + std::to_string(ordj) + " too large for precision " +
                             std::to_string(r.k));
    if (!(ordf > 2 * ordj))
        throw HenselPremiseError("hensel premise fails: ord f(a) = " + std::to_string(ordf) +
                                 " is not > 2 ord J(a) = " + std::to_string(2 * ordj));
    for (int it = 0; it < 2 * r.k + 4; ++it) {
        auto step = solve(j, f);
        if (!step) throw Error("internal: Newton step has no solution");
        for (size_t c = 0; c < vars.size(); ++c) x[vars[c]] -= (*step)[c];
        f = sys.eval(x);
        if (residual_order(f) >= kInfiniteOrder) {
            res.root = x;
            int dist = r.k;
            for (size_t i = 0; i < x.size(); ++i) dist = std::min(dist, (x[i] - a[i]).valuation());
            res.distance_bound = dist;
            if (dist <= ordj) throw Error("internal: Newton root left the certified ball");
            return res;
        }
        j = sys.jacobian(x, vars);
    }
    throw Error("internal: Newton iteration did not converge");
}

}  // namespace

LiftResult newton_root(const PolySystem& sys, const RingVector& a) {
    if (sys.nvars != static_cast<int>(sys.equations.size()))
        throw Error("newton_root: system must be square");
    std::vector<int> vars(sys.nvars);
    for (int i = 0; i < sys.nvars; ++i) vars[i] = i;
    return lift(sys, a, vars);
}

LiftResult underdetermined_root(const PolySystem& sys, const RingVector& a, const std::vector<int>& vars) {
    if (static_cast<int>(sys.equations.size()) > sys.nvars)
        throw Error("underdetermined_root: more equations than variables");
    return lift(sys, a, vars);
}

RingMatrix adjust_column(const RingMatrix& h, const RingMatrix& a, const RingVector& gamma) {
    const RingSpec& r = *h(0, 0).ring();
    const int n = a.cols();
    if (static_cast<int>(gamma.size()) != n) throw Error("adjust_column: gamma must have one entry per column");
    int ord_det = ord_or_inf(determinant(h));
    if (ord_det >= kInfiniteOrder) throw Error("adjust_column: degenerate H");
    if (rank_mod_p(a) != n) throw Error("adjust_column: A is not primitive");
    const int bound = 2 * ord_det + 2 * r.ord2;
    RingMatrix g = congruent(h, a);
    std::vector<RingVector> rows;
    for (int i = 0; i < n; ++i) {
        int v = ord_or_inf(g(i, n - 1) - gamma[i]);
        if (v <= bound)
            throw HenselPremiseError("adjust_column: entry " + std::to_string(i) + " differs from its target at order " +
                                     std::to_string(v) + ", need > " + std::to_string(bound));
        if (i < n - 1) rows.push_back(mat_vec(h, a.col(i)));
    }
    if (2 * ord_det + 2 * r.ord2 + 1 > r.k) throw PrecisionError("adjust_column: precision below 4(det H)^2 p");
    PolySystem sys = PolySystem::gram_column(h, rows, gamma);
    RingVector start = a.col(n - 1);
    RingMatrix jac = sys.jacobian(start, [&] {
        std::vector<int> all(h.rows());
        for (int i = 0; i < h.rows(); ++i) all[i] = i;
        return all;
    }());
    auto minor = best_minor(jac);
    if (!minor) throw Error("internal: Gram column Jacobian has deficient rank");
    LiftResult lr = underdetermined_root(sys, start, minor->cols);
    RingMatrix out = a;
    out.set_col(n - 1, lr.root);
    if (rank_mod_p(out) != n) throw Error("internal: adjusted matrix lost primitivity");
    return out;
}

RingMatrix retarget_gram(const RingMatrix& h, const RingMatrix& a, const RingMatrix& target) {
    const RingSpec& r = *h(0, 0).ring();
    const int n = a.cols();
    int ord_det = ord_or_inf(determinant(h));
    if (ord_det >= kInfiniteOrder) throw Error("retarget_gram: degenerate H");
    const int bound = 2 * ord_det + 2 * r.ord2;
    RingMatrix g = congruent(h, a);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (ord_or_inf(g(i, j) - target(i, j)) <= bound)
                throw HenselPremiseError("retarget_gram: entry (" + std::to_string(i) + "," + std::to_string(j) +
                                         ") outside 4(det H)^2 p");
    RingMatrix cur = a;
    for (int j = n - 1; j >= 0; --j) {
        std::vector<int> order;
        for (int c = 0; c < n; ++c)
            if (c != j) order.push_back(c);
        order.push_back(j);
        RingMatrix perm = cur.select_cols(order);
        RingVector gamma;
        for (int c : order) gamma.push_back(target(c, j));
        RingMatrix adj = adjust_column(h, perm, gamma);
        cur.set_col(j, adj.col(n - 1));
    }
    if (congruent(h, cur) != target) throw Error("internal: retarget_gram missed its target");
    return cur;
}

}  // namespace qlat
