#include "qlat/decide.hpp"

#include <algorithm>

#include "qlat/enumerate.hpp"
#include "qlat/hensel.hpp"
#include "qlat/spaces.hpp"
#include "qlat/value_dp.hpp"

namespace qlat {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        default: return "unknown";
    }
}

bool verify_primitive_representation(const Lattice& host, const Lattice& target, const RingMatrix& t) {
    if (t.rows() != host.rank() || t.cols() != target.rank()) return false;
    if (rank_mod_p(t) != target.rank()) return false;
    return congruent(host.gram(), t) == target.gram();
}

namespace {

// Solutions of A x = b over F_q, as particular solution plus null-space basis.
struct AffineSpace {
    bool consistent = true;
    std::vector<int> particular;
    std::vector<std::vector<int>> basis;
};

AffineSpace solve_affine(const ResidueField& F, std::vector<std::vector<int>> a, std::vector<int> b, int m) {
    AffineSpace out;
    const int rows = static_cast<int>(a.size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < m && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[r]);
        std::swap(b[piv], b[r]);
        int inv = F.inv(a[r][c]);
        for (int j = 0; j < m; ++j) a[r][j] = F.mul(a[r][j], inv);
        b[r] = F.mul(b[r], inv);
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            int f = a[i][c];
            for (int j = 0; j < m; ++j) a[i][j] = F.sub(a[i][j], F.mul(f, a[r][j]));
            b[i] = F.sub(b[i], F.mul(f, b[r]));
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (b[i] != 0) {
            out.consistent = false;
            return out;
        }
    out.particular.assign(m, 0);
    for (int i = 0; i < r; ++i) out.particular[pivot_col[i]] = b[i];
    for (int c = 0; c < m; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), c) != pivot_col.end()) continue;
        std::vector<int> v(m, 0);
        v[c] = 1;
        for (int i = 0; i < r; ++i) v[pivot_col[i]] = F.neg(a[i][c]);
        out.basis.push_back(v);
    }
    return out;
}

class ColumnSearch {
public:
    ColumnSearch(const Lattice& host, const RingMatrix& target, uint64_t budget)
        : r_(host.ring()), g_(host.gram()), s_(target), m_(host.rank()), n_(target.rows()), budget_(budget) {
        e_ = threshold_exponent(host);
    }

    ColumnSearchResult run() {
        ColumnSearchResult res;
        if (finish(0)) res.witness = assemble();
        res.nodes = nodes_;
        res.budget_hit = aborted_;
        return res;
    }

private:
    RingMatrix assemble() const {
        RingMatrix t = zeros(r_, m_, n_);
        for (int c = 0; c < n_; ++c) t.set_col(c, cols_[c]);
        return t;
    }

    bool finish(int c) {
        if (c == n_) return true;
        return extend(c, RingVector(m_, r_.zero()), 0);
    }

    bool accept(int c, const RingVector& v) {
        cols_.push_back(v);
        gcols_.push_back(mat_vec(g_, v));
        if (finish(c + 1)) return true;
        cols_.pop_back();
        gcols_.pop_back();
        return false;
    }

    enum class Lift { NotYet, Done, Dead };

    // Single-column Hensel test: when the residual is deep enough relative to
    // the best Jacobian minor, the column lifts to an exact solution.
    Lift try_lift(int c, const RingVector& v) {
        RingVector targets;
        int ord_res = kInfiniteOrder;
        for (int i = 0; i < c; ++i) {
            ord_res = std::min(ord_res, ord_or_inf(dot(gcols_[i], v) - s_(i, c)));
            targets.push_back(s_(i, c));
        }
        RingVector gv = mat_vec(g_, v);
        ord_res = std::min(ord_res, ord_or_inf(dot(gv, v) - s_(c, c)));
        targets.push_back(s_(c, c));
        if (ord_res >= kInfiniteOrder) return accept(c, v) ? Lift::Done : Lift::Dead;
        RingMatrix jac = zeros(r_, c + 1, m_);
        RingElt two = r_.from_int(2);
        for (int i = 0; i < c; ++i)
            for (int a = 0; a < m_; ++a) jac(i, a) = gcols_[i][a];
        for (int a = 0; a < m_; ++a) jac(c, a) = two * gv[a];
        auto minor = best_minor(jac);
        if (!minor || ord_res <= 2 * minor->valuation || 2 * minor->valuation >= r_.k) return Lift::NotYet;
        PolySystem sys = PolySystem::gram_column(g_, gcols_, targets);
        LiftResult lr;
        try {
            lr = underdetermined_root(sys, v, minor->cols);
        } catch (const PrecisionError&) {
            return Lift::NotYet;
        }
        return accept(c, lr.root) ? Lift::Done : Lift::Dead;
    }

    RingElt dot(const RingVector& a, const RingVector& b) const {
        RingElt s = r_.zero();
        for (int i = 0; i < m_; ++i) s += a[i] * b[i];
        return s;
    }

    // v is fixed modulo p^j and satisfies the level-j congruences.
    bool extend(int c, const RingVector& v, int j) {
        if (aborted_) return false;
        if (j >= 1) {
            Lift l = try_lift(c, v);
            if (l == Lift::Done) return true;
            if (l == Lift::Dead || aborted_) return false;
        }
        if (j >= e_ || j + 1 > r_.k) return false;
        const ResidueField& F = r_.field;
        std::vector<std::vector<int>> rows;
        std::vector<int> rhs;
        for (int i = 0; i < c; ++i) {
            std::vector<int> row(m_);
            for (int a = 0; a < m_; ++a) row[a] = gcols_[i][a].residue();
            rows.push_back(row);
            RingElt d = s_(i, c) - dot(gcols_[i], v);
            rhs.push_back(d.shift_down(j).residue());
        }
        AffineSpace sol = solve_affine(F, rows, rhs, m_);
        if (!sol.consistent) return false;
        const int qlev = std::min(2 * (j + 1), j + 1 + r_.ord2);
        const RingElt pj = r_.p_power(j);
        const int dim = static_cast<int>(sol.basis.size());
        std::vector<int> coef(dim, 0);
        while (true) {
            if (++nodes_ > budget_) {
                aborted_ = true;
                return false;
            }
            std::vector<int> x = sol.particular;
            for (int b = 0; b < dim; ++b)
                if (coef[b])
                    for (int a = 0; a < m_; ++a) x[a] = F.add(x[a], F.mul(coef[b], sol.basis[b][a]));
            RingVector w = v;
            for (int a = 0; a < m_; ++a)
                if (x[a]) w[a] += pj * r_.from_residue(x[a]);
            bool ok = true;
            if (j == 0) {
                bool nonzero = std::any_of(x.begin(), x.end(), [](int t) { return t != 0; });
                if (!nonzero) ok = false;
                if (ok && c > 0) {
                    RingMatrix t = zeros(r_, m_, c + 1);
                    for (int i = 0; i < c; ++i) t.set_col(i, cols_[i]);
                    t.set_col(c, w);
                    ok = rank_mod_p(t) == c + 1;
                }
            }
            if (ok) {
                RingElt q = bilinear(g_, w, w) - s_(c, c);
                ok = ord_or_inf(q) >= qlev;
            }
            if (ok && extend(c, w, j + 1)) return true;
            if (aborted_) return false;
            int b = 0;
            while (b < dim && ++coef[b] == F.q) coef[b++] = 0;
            if (b == dim) break;
        }
        return false;
    }

    const RingSpec& r_;
    const RingMatrix& g_;
    const RingMatrix& s_;
    int m_, n_;
    uint64_t budget_;
    int e_ = 0;
    uint64_t nodes_ = 0;
    bool aborted_ = false;
    std::vector<RingVector> cols_;
    std::vector<RingVector> gcols_;
};

void value_search(const Lattice& host, const Lattice& target, const DecideOptions& opts, DecisionCertificate& cert) {
    JordanSplitting js = jordan_split(host);
    const int e = cert.threshold;
    uint64_t used = 0;
    for (int j = 1; j <= e; ++j) {
        if (used >= opts.dp_budget) {
            cert.detail = "residue search budget exhausted before level " + std::to_string(j);
            return;
        }
        try {
            ValueDP dp(host, js, target.rank(), j, opts.dp_budget - used);
            ValueDP::Status st = dp.decide(target.gram());
            used += dp.work();
            cert.states_explored = used;
            if (st == ValueDP::Status::Budget) {
                cert.detail = "residue search at level " + std::to_string(j) + ": " + dp.budget_reason();
                return;
            }
            if (st == ValueDP::Status::Infeasible) {
                cert.verdict = Verdict::No;
                cert.level = j;
                cert.exhausted = true;
                cert.method = "residue-exhaustion";
                cert.detail = "no primitive T mod p^" + std::to_string(j) + " has T^t G T = target mod p^" +
                              std::to_string(j);
                return;
            }
            if (j == e) {
                auto t = dp.witness(target.gram());
                used += dp.work();
                cert.states_explored = used;
                if (!t) {
                    cert.detail = "residue search feasible at the threshold but witness rebuild hit the budget";
                    return;
                }
                RingMatrix exact = retarget_gram(host.gram(), *t, target.gram());
                cert.verdict = Verdict::Yes;
                cert.witness = exact;
                cert.level = e;
                cert.method = "residue-search+retarget";
                return;
            }
        } catch (const BudgetError& err) {
            cert.detail = err.what();
            return;
        }
    }
}

std::optional<DecisionCertificate> complement_split(const Lattice& host, const Lattice& target,
                                                    const DecideOptions& opts) {
    if (target.degenerate()) return std::nullopt;
    const RingSpec& r = host.ring();
    const int s0 = min_valuation(host.gram());
    JordanSplitting tj;
    try {
        tj = jordan_split(target);
    } catch (const Error&) {
        return std::nullopt;
    }
    const JordanBlock* b0 = nullptr;
    std::vector<RingMatrix> rest;
    for (const auto& b : tj.blocks) {
        if (b.scale == s0)
            b0 = &b;
        else
            rest.push_back(b.gram);
    }
    if (!b0 || rest.empty()) return std::nullopt;
    Lattice l0(host.ring_ptr(), b0->gram);
    Lattice lrest = Lattice::unchecked(host.ring_ptr(), block_diagonal(rest));
    const int mc = host.rank() - l0.rank();
    const int ordc = host.ord_det() - l0.ord_det();
    DecisionCertificate cert;
    cert.threshold = threshold_exponent(host);
    cert.method = "complement-split";
    if (ordc < 0 || mc < lrest.rank()) {
        cert.verdict = Verdict::No;
        cert.exhausted = true;
        cert.detail = "the scale-" + std::to_string(s0) + " part of the target cannot split off the host";
        return cert;
    }
    std::vector<CandidateLattice> cands;
    try {
        cands = block_candidates(host.ring_ptr(), mc, s0, s0 + std::max(ordc, 0), false, 20000, ordc);
    } catch (const BudgetError&) {
        return std::nullopt;
    }
    DecideOptions sub = opts;
    sub.use_complement_split = false;
    bool all_no = true;
    int kept = 0;
    for (const auto& cand : cands) {
        Lattice joined = orthogonal_sum(l0, cand.lattice);
        if (r.k < threshold_exponent(cand.lattice) + cand.lattice.ord_det()) return std::nullopt;
        if (invariant_mismatch(joined, host)) continue;
        ++kept;
        DecisionCertificate c = primitively_represents(cand.lattice, lrest, sub);
        cert.nodes_explored += c.nodes_explored;
        cert.states_explored += c.states_explored;
        cert.subcases.push_back(cand.name + ": " + to_string(c.verdict) +
                                (c.verdict == Verdict::No ? " (level " + std::to_string(c.level) + ")" : ""));
        if (c.verdict == Verdict::No) continue;
        all_no = false;
        if (c.verdict != Verdict::Yes) continue;
        DecisionCertificate iso = primitively_represents(host, joined, sub);
        if (iso.verdict != Verdict::Yes) continue;
        // Target basis -> (l0, rest) Jordan basis -> joined lattice -> host.
        const int n0 = l0.rank(), n = target.rank();
        RingMatrix e = zeros(r, host.rank(), n);
        for (int i = 0; i < n0; ++i) e(i, i) = r.one();
        for (int i = 0; i < mc; ++i)
            for (int j = 0; j < lrest.rank(); ++j) e(n0 + i, n0 + j) = (*c.witness)(i, j);
        // Columns of the target's Jordan basis are ordered: blocks before, the s0 block, blocks after.
        std::vector<int> order;
        for (int i = 0; i < b0->rank(); ++i) order.push_back(b0->first + i);
        for (const auto& b : tj.blocks)
            if (b.scale != s0)
                for (int i = 0; i < b.rank(); ++i) order.push_back(b.first + i);
        RingMatrix v = tj.basis_change.select_cols(order);
        RingMatrix t = *iso.witness * e * inverse(v);
        if (!verify_primitive_representation(host, target, t)) throw Error("internal: complement witness failed");
        cert.verdict = Verdict::Yes;
        cert.witness = t;
        cert.detail = "complement " + cand.name;
        return cert;
    }
    if (!all_no) return std::nullopt;
    cert.verdict = Verdict::No;
    cert.exhausted = true;
    cert.detail = "scale-" + std::to_string(s0) + " part splits the host; none of the " + std::to_string(kept) +
                  " admissible complements represents the remainder";
    return cert;
}

}  // namespace

ColumnSearchResult column_search(const Lattice& host, const RingMatrix& target, uint64_t node_budget) {
    return ColumnSearch(host, target, node_budget).run();
}

namespace {

RingMatrix shift_down_all(const RingMatrix& g, int s) {
    RingMatrix out = g;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) out(i, j) = g(i, j).shift_down(s);
    return out;
}

}  // namespace

DecisionCertificate primitively_represents(const Lattice& host, const Lattice& target, const DecideOptions& opts) {
    if (host.ring_ptr() != target.ring_ptr()) throw Error("decide: host and target live over different rings");
    if (host.degenerate()) throw Error("decide: degenerate host");
    const RingSpec& r = host.ring();
    int s = min_valuation(host.gram());
    if (s > 0) {
        if (min_valuation(target.gram()) < s) {
            DecisionCertificate cert;
            cert.threshold = threshold_exponent(host);
            cert.verdict = Verdict::No;
            cert.exhausted = true;
            cert.method = "scale";
            cert.detail = "target has an entry outside the scale of the host";
            return cert;
        }
        // Both Grams divided by p^s; the same T works before and after.
        DecideOptions o = opts;
        o.precision_loss += s;
        Lattice h(host.ring_ptr(), shift_down_all(host.gram(), s));
        Lattice t = Lattice::unchecked(host.ring_ptr(), shift_down_all(target.gram(), s));
        DecisionCertificate cert = primitively_represents(h, t, o);
        if (cert.witness && !verify_primitive_representation(host, target, *cert.witness))
            throw Error("internal: witness lost while undoing the scale");
        cert.detail = (cert.detail.empty() ? "" : cert.detail + "; ") + "after dividing by p^" + std::to_string(s);
        return cert;
    }
    DecisionCertificate cert;
    cert.threshold = threshold_exponent(host);
    const int k_eff = r.k - opts.precision_loss;
    if (k_eff < cert.threshold + host.ord_det())
        throw PrecisionError("decide: need k >= " + std::to_string(cert.threshold + host.ord_det() + opts.precision_loss) +
                             ", have " + std::to_string(r.k));
    if (target.rank() > host.rank()) {
        cert.verdict = Verdict::No;
        cert.exhausted = true;
        cert.method = "rank";
        cert.detail = "target rank exceeds host rank";
        return cert;
    }
    if (opts.use_column_search) {
        ColumnSearchResult cs = column_search(host, target.gram(), opts.node_budget);
        cert.nodes_explored = cs.nodes;
        if (cs.witness) {
            if (!verify_primitive_representation(host, target, *cs.witness))
                throw Error("internal: column search witness failed verification");
            cert.verdict = Verdict::Yes;
            cert.witness = cs.witness;
            cert.method = "column-search";
            return cert;
        }
        if (!cs.budget_hit) cert.detail = "column search exhausted without a witness";
    }
    if (opts.use_value_search) {
        value_search(host, target, opts, cert);
        if (cert.verdict == Verdict::Yes && !verify_primitive_representation(host, target, *cert.witness))
            throw Error("internal: residue search witness failed verification");
        if (cert.verdict != Verdict::Unknown) return cert;
    }
    if (opts.use_complement_split) {
        auto c = complement_split(host, target, opts);
        if (c && c->verdict != Verdict::Unknown) {
            c->nodes_explored += cert.nodes_explored;
            c->states_explored += cert.states_explored;
            return *c;
        }
    }
    return cert;
}

std::optional<std::string> invariant_mismatch(const Lattice& a, const Lattice& b) {
    if (a.rank() != b.rank()) return "rank";
    if (a.ord_det() != b.ord_det()) return "ord det";
    if (a.degenerate() || b.degenerate()) return std::nullopt;
    ScaleNormDisc da = scale_norm_disc(a), db = scale_norm_disc(b);
    if (da.det_class != db.det_class) return "determinant square class";
    if (da.scale != db.scale || da.norm != db.norm) return "scale or norm";
    JordanSplitting ja = jordan_split(a), jb = jordan_split(b);
    if (ja.scales() != jb.scales() || ja.ranks() != jb.ranks()) return "Jordan scales/ranks";
    for (size_t i = 0; i < ja.blocks.size(); ++i)
        if (ja.blocks[i].even != jb.blocks[i].even) return "Jordan block parity";
    if (ja.blocks.size() == 1 && ja.blocks[0].two_signature &&
        *ja.blocks[0].two_signature != *jb.blocks[0].two_signature)
        return "2-signature";
    auto ha = hasse_invariant(a), hb = hasse_invariant(b);
    if (ha && hb && *ha != *hb) return "Hasse invariant";
    try {
        DecideOptions o;
        o.use_complement_split = false;
        if (witt_index(a, o).witt_index != witt_index(b, o).witt_index) return "Witt index";
    } catch (const Error&) {
    }
    return std::nullopt;
}

RingMatrix orthogonal_complement(const Lattice& l, const RingMatrix& t) {
    const RingSpec& r = l.ring();
    RingMatrix gs = congruent(l.gram(), t);
    if (!determinant(gs).is_unit()) throw Error("orthogonal_complement: the sublattice is not unimodular");
    RingMatrix gsi = inverse(gs);
    RingMatrix full = complete_to_basis(t);
    const int m = l.rank(), k = t.cols();
    RingMatrix out = zeros(r, m, m - k);
    RingMatrix tg = transpose(t) * l.gram();
    for (int c = k; c < m; ++c) {
        RingVector u = full.col(c);
        RingVector coef = mat_vec(gsi, mat_vec(tg, u));
        RingVector proj = mat_vec(t, coef);
        for (int i = 0; i < m; ++i) out(i, c - k) = u[i] - proj[i];
    }
    return out;
}

namespace {

// Splits a unimodular Jordan piece P off a, places P in b, and matches the two
// orthogonal complements. Only ever answers yes.
std::optional<RingMatrix> peel_isometry(const Lattice& a, const Lattice& b, const DecideOptions& opts) {
    if (a.rank() < 3) return std::nullopt;
    JordanSplitting js = jordan_split(a);
    const RingSpec& r = a.ring();
    for (const auto& piece : js.pieces) {
        if (piece.scale != 0) continue;
        std::vector<int> cols;
        for (int i = 0; i < piece.rank(); ++i) cols.push_back(piece.first + i);
        RingMatrix va = js.basis_change.select_cols(cols);
        Lattice p(a.ring_ptr(), congruent(a.gram(), va));
        DecisionCertificate place = primitively_represents(b, p, opts);
        if (place.verdict != Verdict::Yes) continue;
        RingMatrix ca = orthogonal_complement(a, va), cb = orthogonal_complement(b, *place.witness);
        Lattice ra(a.ring_ptr(), congruent(a.gram(), ca)), rb(a.ring_ptr(), congruent(b.gram(), cb));
        DecisionCertificate rest = isometric(ra, rb, opts);
        if (rest.verdict != Verdict::Yes) continue;
        const int n = a.rank(), k = piece.rank();
        RingMatrix src = zeros(r, n, n), dst = zeros(r, n, n);
        RingMatrix cw = cb * *rest.witness;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) {
                src(i, j) = va(i, j);
                dst(i, j) = (*place.witness)(i, j);
            }
            for (int j = 0; j < n - k; ++j) {
                src(i, k + j) = ca(i, j);
                dst(i, k + j) = cw(i, j);
            }
        }
        if (!determinant(src).is_unit()) continue;
        RingMatrix u = dst * inverse(src);
        if (verify_primitive_representation(b, a, u)) return u;
    }
    return std::nullopt;
}

}  // namespace

DecisionCertificate isometric(const Lattice& a, const Lattice& b, const DecideOptions& opts) {
    if (a.ring_ptr() != b.ring_ptr()) throw Error("isometric: lattices live over different rings");
    if (auto why = invariant_mismatch(a, b)) {
        DecisionCertificate cert;
        cert.threshold = threshold_exponent(b);
        cert.verdict = Verdict::No;
        cert.exhausted = true;
        cert.method = "invariants";
        cert.detail = *why + " differs";
        return cert;
    }
    DecisionCertificate cert = primitively_represents(b, a, opts);
    if (cert.verdict == Verdict::Unknown) {
        if (auto u = peel_isometry(a, b, opts)) {
            cert.verdict = Verdict::Yes;
            cert.witness = *u;
            cert.method = "unimodular-peeling";
            cert.detail = "unimodular Jordan pieces split off one at a time";
        }
    }
    if (cert.verdict == Verdict::Yes && !determinant(*cert.witness).is_unit())
        throw Error("internal: isometry witness is not invertible");
    return cert;
}

}  // namespace qlat
