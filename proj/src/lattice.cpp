#include "qlat/lattice.hpp"

#include <algorithm>

namespace qlat {

namespace {

void check_symmetric(const RingMatrix& g) {
    if (g.rows() != g.cols()) throw Error("lattice: Gram matrix must be square");
    for (int i = 0; i < g.rows(); ++i)
        for (int j = i + 1; j < g.cols(); ++j)
            if (g(i, j) != g(j, i)) throw Error("lattice: Gram matrix must be symmetric");
}

}  // namespace

Lattice Lattice::unchecked(Ring ring, RingMatrix gram) {
    check_symmetric(gram);
    Lattice l;
    l.ring_ = std::move(ring);
    l.gram_ = std::move(gram);
    if (l.gram_.rows() == 0) throw Error("lattice: rank must be positive");
    l.det_ = determinant(l.gram_);
    l.ord_det_ = l.det_.valuation();
    return l;
}

Lattice::Lattice(Ring ring, RingMatrix gram) {
    *this = unchecked(std::move(ring), std::move(gram));
    if (degenerate()) throw Error("lattice: degenerate at working precision");
}

bool Lattice::is_even() const {
    for (int i = 0; i < rank(); ++i)
        if (ord_or_inf(gram_(i, i)) < ring_->ord2) return false;
    return true;
}

Lattice diagonal(const Ring& r, const std::vector<RingElt>& entries) {
    RingMatrix g = zeros(*r, static_cast<int>(entries.size()), static_cast<int>(entries.size()));
    for (size_t i = 0; i < entries.size(); ++i) g(static_cast<int>(i), static_cast<int>(i)) = entries[i];
    return Lattice(r, g);
}

Lattice diagonal(const Ring& r, const std::vector<int64_t>& entries) {
    std::vector<RingElt> e;
    for (auto v : entries) e.push_back(r->from_int(v));
    return diagonal(r, e);
}

Lattice hyperbolic(const Ring& r, const RingElt& a) {
    RingMatrix g = zeros(*r, 2, 2);
    g(0, 1) = a;
    g(1, 0) = a;
    return Lattice(r, g);
}

Lattice hyperbolic(const Ring& r, int64_t a) { return hyperbolic(r, r->from_int(a)); }

Lattice anisotropic(const Ring& r, const RingElt& a) {
    RingMatrix g = zeros(*r, 2, 2);
    RingElt two = r->from_int(2);
    g(0, 0) = two * a;
    g(0, 1) = a;
    g(1, 0) = a;
    g(1, 1) = two * r->rho * a;
    return Lattice(r, g);
}

Lattice anisotropic(const Ring& r, int64_t a) { return anisotropic(r, r->from_int(a)); }

Lattice orthogonal_sum(const Lattice& a, const Lattice& b) {
    if (a.ring_ptr() != b.ring_ptr()) throw Error("lattice: orthogonal sum across different rings");
    return Lattice::unchecked(a.ring_ptr(), block_diagonal({a.gram(), b.gram()}));
}

Lattice orthogonal_sum(const std::vector<Lattice>& parts) {
    if (parts.empty()) throw Error("lattice: empty orthogonal sum");
    std::vector<RingMatrix> g;
    for (const auto& p : parts) {
        if (p.ring_ptr() != parts.front().ring_ptr()) throw Error("lattice: orthogonal sum across different rings");
        g.push_back(p.gram());
    }
    return Lattice::unchecked(parts.front().ring_ptr(), block_diagonal(g));
}

Lattice scaled(const RingElt& a, const Lattice& l) {
    return Lattice::unchecked(l.ring_ptr(), qlat::scaled(a, l.gram()));
}

Lattice power(const Lattice& l, int times) {
    std::vector<Lattice> parts(times, l);
    return orthogonal_sum(parts);
}

Lattice sublattice(const Lattice& l, const RingMatrix& t) {
    return Lattice::unchecked(l.ring_ptr(), congruent(l.gram(), t));
}

ScaleNormDisc scale_norm_disc(const Lattice& l) {
    const RingSpec& r = l.ring();
    ScaleNormDisc s;
    s.scale = min_valuation(l.gram());
    int diag = kInfiniteOrder;
    for (int i = 0; i < l.rank(); ++i) diag = std::min(diag, ord_or_inf(l.gram()(i, i)));
    s.norm = std::min(diag, s.scale + r.ord2);
    s.ord_det = l.ord_det();
    if (l.degenerate()) throw PrecisionError("scale_norm_disc: determinant vanishes at working precision");
    if (r.k - s.ord_det < 2 * r.ord2 + 1)
        throw PrecisionError("scale_norm_disc: too few digits to classify the determinant");
    s.det_class = square_class_rep(l.det().shift_down(s.ord_det));
    return s;
}

bool is_primitive_sublattice(const Lattice& l, const RingMatrix& t) {
    if (t.rows() != l.rank()) throw Error("is_primitive_sublattice: shape mismatch");
    if (t.cols() > t.rows()) return false;
    return rank_mod_p(t) == t.cols();
}

int threshold_exponent(const Lattice& l) { return 2 * l.ord_det() + 2 * l.ring().ord2 + 1; }

bool ValueClassSet::contains(const RingElt& c) const {
    return std::binary_search(codes.begin(), codes.end(), c.code(m));
}

std::vector<RingElt> ValueClassSet::elements(const RingSpec& r) const {
    std::vector<RingElt> out;
    for (auto c : codes) out.push_back(r.from_code(c, m));
    return out;
}

}  // namespace qlat
