#include "qlat/spaces.hpp"

namespace qlat {

bool same_square_class(const RingElt& a, const RingElt& b) {
    const RingSpec& r = *a.ring();
    if (a.is_zero() || b.is_zero()) throw PrecisionError("square class of an element that vanishes at precision");
    int va = a.valuation(), vb = b.valuation();
    if ((va - vb) % 2 != 0) return false;
    if (r.k - std::max(va, vb) < 2 * r.ord2 + 1) throw PrecisionError("square class: too few digits");
    return is_square(a.shift_down(va) / b.shift_down(vb));
}

SpaceInvariants witt_index(const Lattice& l, const DecideOptions& opts) {
    const RingSpec& r = l.ring();
    SpaceInvariants inv;
    inv.dim = l.rank();
    ScaleNormDisc snd = scale_norm_disc(l);
    inv.disc_parity = snd.ord_det % 2;
    inv.disc_class = snd.det_class;

    RingMatrix basis = identity(r, l.rank());  // columns: current lattice in the coordinates of l
    RingMatrix g = l.gram();
    int shift = 0;  // current Gram = p^-shift * basis^t G basis
    Lattice zero = Lattice::unchecked(l.ring_ptr(), zeros(r, 1, 1));
    while (g.rows() >= 2) {
        Lattice cur(l.ring_ptr(), g);
        DecisionCertificate cert = primitively_represents(cur, zero, opts);
        if (cert.verdict == Verdict::No) break;
        if (cert.verdict == Verdict::Unknown)
            throw BudgetError("witt_index: isotropy search inconclusive (" + cert.detail + ")");
        RingVector x = cert.witness->col(0);
        RingMatrix full = complete_to_basis(cert.witness.value());
        const int m = g.rows();
        int ybest = 1, best = kInfiniteOrder;
        for (int c = 1; c < m; ++c) {
            int v = ord_or_inf(cur.B(x, full.col(c)));
            if (v < best) {
                best = v;
                ybest = c;
            }
        }
        RingVector y = full.col(ybest);
        const RingElt beta = cur.B(x, y), gamma = cur.Q(y);
        const bool unit = beta.is_unit();
        const RingElt binv2 = unit ? (beta * beta).inverse() : r.one();
        RingMatrix w = zeros(r, m, m - 2);
        int col = 0;
        for (int c = 1; c < m; ++c) {
            if (c == ybest) continue;
            RingVector u = full.col(c);
            RingElt bux = cur.B(u, x), buy = cur.B(u, y);
            RingElt c1 = beta * buy - gamma * bux, c2 = beta * bux;
            for (int i = 0; i < m; ++i) {
                RingElt e = unit ? u[i] - binv2 * (c1 * x[i] + c2 * y[i])
                                 : beta * beta * u[i] - c1 * x[i] - c2 * y[i];
                w(i, col) = e;
            }
            ++col;
        }
        RingVector xl = mat_vec(basis, x);
        if (!bilinear(l.gram(), xl, xl).is_zero()) throw Error("internal: isotropic vector failed verification");
        inv.isotropic_vectors.push_back(xl);
        ++inv.witt_index;
        if (m == 2) {
            g = RingMatrix();
            break;
        }
        RingMatrix gc = congruent(g, w);
        const int s = min_valuation(gc);
        if (s >= r.k) throw PrecisionError("witt_index: complement vanishes at working precision");
        for (int i = 0; i < gc.rows(); ++i)
            for (int j = 0; j < gc.cols(); ++j) gc(i, j) = gc(i, j).shift_down(s);
        basis = basis * w;
        shift += s;
        g = gc;
    }
    inv.anisotropic_kernel_dim = g.rows();
    inv.kernel_gram = g;
    inv.kernel_shift = shift;
    inv.hyperbolic = inv.anisotropic_kernel_dim == 0;
    if (inv.dim != 2 * inv.witt_index + inv.anisotropic_kernel_dim) throw Error("internal: Witt decomposition ranks");
    return inv;
}

NecessaryCheck check_necessary_pnu(const Lattice& l, int n, const DecideOptions& opts) {
    NecessaryCheck out;
    out.space = witt_index(l, opts);
    const SpaceInvariants& s = out.space;
    const int m = l.rank();
    const RingSpec& r = l.ring();
    if (s.witt_index < n) {
        out.reason = "Witt index " + std::to_string(s.witt_index) + " < " + std::to_string(n);
        return out;
    }
    RingElt sign = (n % 2 == 0) ? r.one() : -r.one();
    if (m == 2 * n && !s.hyperbolic) {
        out.reason = "rank 2n but the space is not hyperbolic";
        return out;
    }
    if (m == 2 * n + 1) {
        // FM = H^n + <a> forces a = (-1)^n dM up to squares.
        RingElt kernel = s.kernel_gram(0, 0) * r.p_power(s.kernel_shift);
        if (!same_square_class(kernel, sign * l.det())) {
            out.reason = "rank 2n+1 but the kernel is not <(-1)^n dM>";
            return out;
        }
    }
    if (m == 2 * n + 2) {
        RingElt target = (n % 2 == 0) ? -r.one() : r.one();  // (-1)^(n+1)
        if (same_square_class(l.det(), target) && !s.hyperbolic) {
            out.reason = "rank 2n+2 with dM = (-1)^(n+1) but the space is not hyperbolic";
            return out;
        }
    }
    out.pass = true;
    out.reason = "Witt index " + std::to_string(s.witt_index) + " >= " + std::to_string(n);
    return out;
}

}  // namespace qlat
