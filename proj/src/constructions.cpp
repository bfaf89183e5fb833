#include "qlat/constructions.hpp"

#include <algorithm>
#include <functional>

namespace qlat {

namespace {

RingVector zero_vec(const RingSpec& r, int m) { return RingVector(m, r.zero()); }

RingVector unit_vec(const RingSpec& r, int m, int i) {
    RingVector v = zero_vec(r, m);
    v[i] = r.one();
    return v;
}

RingVector axpy(const RingVector& y, const RingElt& a, const RingVector& x) {
    RingVector out = y;
    for (size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
    return out;
}

RingVector scale_vec(const RingElt& a, const RingVector& x) {
    RingVector out = x;
    for (auto& e : out) e = a * e;
    return out;
}

RingMatrix from_cols(const RingSpec& r, int m, const std::vector<RingVector>& cols) {
    RingMatrix t = zeros(r, m, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) t.set_col(static_cast<int>(j), cols[j]);
    return t;
}

bool in_2R(const RingElt& c) { return c.is_zero() || c.valuation() >= c.ring()->ord2; }

RingElt half(const RingElt& c) {
    const RingSpec& r = *c.ring();
    return c.exact_div(r.from_int(2));
}

// (s, t) with s^2 - t^2 = alpha for a unit alpha (p = 2): with eta^2 = alpha mod 2
// and alpha' = (alpha - eta^2)/2, the vector eta f1 + eta^-1 alpha' f2 of the
// basis f1 = u1, f2 = u1 - u2 (Gram [[1,1],[1,0]]) has norm alpha.
std::pair<RingElt, RingElt> split_unit(const RingSpec& r, const RingElt& alpha) {
    for (int code = 0; code < r.q; ++code) {
        RingElt eta = r.from_residue(code);
        if (!(eta * eta - alpha).reduce(1).is_zero()) continue;
        RingElt ap = half(alpha - eta * eta);
        RingElt c = eta.inverse() * ap;
        return {eta + c, -c};
    }
    throw Error("internal: unit without a square root mod 2");
}

Lattice blocks_lattice(const Ring& r, const std::vector<BlockType>& blocks) {
    std::vector<Lattice> parts;
    for (const auto& b : blocks) parts.push_back(b.lattice(r));
    return orthogonal_sum(parts);
}

RingElt unary_value(const RingSpec& r, const BlockType& b) { return r.p_power(b.scale) * b.unit; }

// A primitive vector of l with Q = c, by the decision procedure.
std::optional<RingVector> find_vector(const Lattice& l, const RingElt& c, const DecideOptions& opts) {
    RingMatrix g = zeros(l.ring(), 1, 1);
    g(0, 0) = c;
    Lattice t = Lattice::unchecked(l.ring_ptr(), g);
    DecisionCertificate cert = primitively_represents(l, t, opts);
    if (cert.verdict != Verdict::Yes) return std::nullopt;
    return cert.witness->col(0);
}

// Root of k^2 - k + c = 0 (p = 2); the derivative 2k - 1 is a unit.
std::optional<RingElt> artin_schreier_root(const RingSpec& r, const RingElt& c) {
    for (int code = 0; code < r.q; ++code) {
        RingElt k = r.from_residue(code);
        if (!(k * k - k + c).reduce(1).is_zero()) continue;
        for (int it = 0; it <= r.k + 1; ++it) {
            RingElt f = k * k - k + c;
            if (f.is_zero()) break;
            k = k - f / (k + k - r.one());
        }
        if ((k * k - k + c).is_zero()) return k;
    }
    return std::nullopt;
}

// Places target blocks into H^h + J following the lemma recipes. Host
// coordinates: plane i is (2i, 2i+1), J follows.
class Placer {
public:
    Placer(const Lattice& host, int planes, std::optional<Lattice> tail, const DecideOptions& opts)
        : host_(host), r_(host.ring()), m_(host.rank()), planes_(planes), tail_(std::move(tail)), opts_(opts) {
        if (tail_) {
            jr_ = tail_->rank();
            jbasis_ = identity(r_, jr_);
            jgram_ = tail_->gram();
        }
    }

    int free_planes() const { return planes_ - next_; }
    bool has_tail() const { return tail_.has_value() && !tail_used_; }

    // Splits <eps> off J so that its first basis vector can serve as a carrier.
    bool prepare_carrier() {
        if (carrier_) return true;
        if (!tail_ || tail_used_) return false;
        for (const auto& eps : r_.unit_reps) {
            auto z = find_vector(*tail_, eps, opts_);
            if (!z) continue;
            RingMatrix zm = from_cols(r_, jr_, {*z});
            RingMatrix full = complete_to_basis(zm);
            std::vector<RingVector> cols{*z};
            RingElt einv = eps.inverse();
            for (int c = 1; c < jr_; ++c) {
                RingVector u = full.col(c);
                cols.push_back(axpy(u, -(tail_->B(u, *z) * einv), *z));
            }
            jbasis_ = from_cols(r_, jr_, cols);
            jgram_ = congruent(tail_->gram(), jbasis_);
            carrier_ = eps;
            jcur_ = tail_cols(jbasis_);
            return true;
        }
        return false;
    }

    RingVector x(int plane) const { return unit_vec(r_, m_, 2 * plane); }
    RingVector y(int plane) const { return unit_vec(r_, m_, 2 * plane + 1); }

    // Recipes. Each returns the images of the block basis.
    std::vector<RingVector> even_unary(const RingElt& alpha) {
        int p = next_++;
        return {axpy(x(p), half(alpha), y(p))};
    }
    std::vector<RingVector> unit_unary(const RingElt& alpha) {
        int p = next_++;
        const RingElt& eps = *carrier_;
        RingVector zc = jcur_.col(0);
        RingMatrix u = hyperbolic_unit_isometry(host_.ring_ptr(), eps);
        auto lift = [&](int c) {
            RingVector v = scale_vec(u(0, c), x(p));
            v = axpy(v, u(1, c), y(p));
            return axpy(v, u(2, c), zc);
        };
        RingVector u1 = lift(0), u2 = lift(1), u3 = lift(2);
        auto [s, t] = split_unit(r_, alpha);
        jcur_.set_col(0, u3);
        return {axpy(scale_vec(s, u1), t, u2)};
    }
    std::vector<RingVector> plane_itself() {
        int p = next_++;
        return {x(p), y(p)};
    }
    std::vector<RingVector> two_planes(int a, BlockType::Kind kind) {
        int p = next_++, q = next_++;
        RingElt pa = r_.p_power(a);
        if (kind == BlockType::Hyperbolic) {
            RingVector z = axpy(x(q), pa, y(q));  // Q(z) = 2^(a+1)
            return {x(p), axpy(axpy(scale_vec(-r_.one(), x(p)), pa, y(p)), r_.one(), z)};
        }
        RingVector z = axpy(x(q), pa * r_.rho, y(q));  // Q(z) = 2^(a+1) rho
        return {axpy(x(p), pa, y(p)), axpy(x(p), r_.one(), z)};
    }
    // One plane plus a vector of J; consumes J.
    std::optional<std::vector<RingVector>> plane_and_tail(int a, BlockType::Kind kind) {
        if (!has_tail() || free_planes() < 1) return std::nullopt;
        Lattice j(host_.ring_ptr(), jgram_);
        RingElt pa = r_.p_power(a);
        const int p = next_;
        if (kind == BlockType::Hyperbolic) {
            if (auto z = find_vector(j, r_.zero(), opts_)) {
                RingVector zh = mat_vec(jcur_, *z);
                ++next_;
                tail_used_ = true;
                return std::vector<RingVector>{x(p), axpy(scale_vec(pa, y(p)), r_.one(), zh)};
            }
        }
        for (const auto& eps : r_.unit_reps) {
            RingElt c = r_.p_power(a + 1) * eps;
            if (c.is_zero()) continue;
            std::optional<RingElt> kappa;
            if (kind == BlockType::Anisotropic) {
                kappa = artin_schreier_root(r_, r_.rho - eps);
                if (!kappa) continue;
            }
            auto z = find_vector(j, c, opts_);
            if (!z) continue;
            RingVector zh = mat_vec(jcur_, *z);
            ++next_;
            tail_used_ = true;
            if (kind == BlockType::Hyperbolic) {
                RingVector v2 = axpy(axpy(scale_vec(-r_.one(), x(p)), pa * eps, y(p)), r_.one(), zh);
                return std::vector<RingVector>{scale_vec(eps.inverse(), x(p)), v2};
            }
            RingVector v1 = axpy(x(p), pa, y(p));
            RingVector v2 = axpy(axpy(scale_vec(*kappa, x(p)), pa * (r_.one() - *kappa), y(p)), r_.one(), zh);
            return std::vector<RingVector>{v1, v2};
        }
        return std::nullopt;
    }
    // Any lattice straight into J; consumes J.
    std::optional<std::vector<RingVector>> into_tail(const Lattice& k) {
        if (!has_tail()) return std::nullopt;
        Lattice j(host_.ring_ptr(), jgram_);
        DecisionCertificate cert = primitively_represents(j, k, opts_);
        if (cert.verdict != Verdict::Yes) return std::nullopt;
        tail_used_ = true;
        RingMatrix t = jcur_ * *cert.witness;
        std::vector<RingVector> out;
        for (int c = 0; c < t.cols(); ++c) out.push_back(t.col(c));
        return out;
    }
    // The given witness of K in the original basis of J.
    std::vector<RingVector> known_in_tail(const RingMatrix& w) {
        tail_used_ = true;
        RingMatrix t = jcur_ * (inverse(jbasis_) * w);
        std::vector<RingVector> out;
        for (int c = 0; c < t.cols(); ++c) out.push_back(t.col(c));
        return out;
    }
    // Capping recipe (embed_cap) on the next planes and J; consumes J.
    std::optional<std::vector<RingVector>> cap(const std::vector<BlockType>& blocks) {
        if (!has_tail()) return std::nullopt;
        int n = 0;
        for (const auto& b : blocks) n += b.rank();
        if (free_planes() < n - 1) return std::nullopt;
        Lattice j(host_.ring_ptr(), jgram_);
        Lattice ell = blocks_lattice(host_.ring_ptr(), blocks);
        if (!ell.is_even()) return std::nullopt;
        int top = 0;
        for (const auto& b : blocks) top = std::max(top, b.scale);
        for (int v = 0; v <= top + 2 * r_.ord2 + 4 && v < r_.k; ++v) {
            for (const auto& eps : r_.unit_reps) {
                RingElt beta = r_.p_power(v) * eps;
                auto z = find_vector(j, beta, opts_);
                if (!z) continue;
                auto w = find_vector(ell, beta, opts_);
                if (!w) continue;
                EmbeddingWitness cw = embed_cap(blocks, j, *w, *z);
                // Host of cw: H^(n-1) + J in the current J basis.
                const int planes = n - 1;
                RingMatrix emb = zeros(r_, m_, cw.host.rank());
                for (int i = 0; i < 2 * planes; ++i) emb(2 * next_ + i, i) = r_.one();
                for (int c = 0; c < jr_; ++c)
                    for (int i = 0; i < m_; ++i) emb(i, 2 * planes + c) = jcur_(i, c);
                RingMatrix t = emb * cw.matrix;
                next_ += planes;
                tail_used_ = true;
                std::vector<RingVector> out;
                for (int c = 0; c < t.cols(); ++c) out.push_back(t.col(c));
                return out;
            }
        }
        return std::nullopt;
    }

    bool carrier() const { return carrier_.has_value(); }

private:
    RingMatrix tail_cols(const RingMatrix& jb) const {
        RingMatrix out = zeros(r_, m_, jr_);
        for (int i = 0; i < jr_; ++i)
            for (int c = 0; c < jr_; ++c) out(2 * planes_ + i, c) = jb(i, c);
        return out;
    }

    const Lattice& host_;
    const RingSpec& r_;
    int m_;
    int planes_;
    int next_ = 0;
    std::optional<Lattice> tail_;
    int jr_ = 0;
    RingMatrix jbasis_;  // columns: current J basis in the original J coordinates
    RingMatrix jgram_;
    RingMatrix jcur_;    // the same basis moved into host coordinates (changes with the carrier)
    std::optional<RingElt> carrier_;
    bool tail_used_ = false;
    const DecideOptions& opts_;

public:
    void init_tail_cols() { jcur_ = tail_cols(jbasis_); }
};

}  // namespace

void check_witness(const EmbeddingWitness& w) {
    if (w.matrix.rows() != w.host.rank() || w.matrix.cols() != w.target.rank())
        throw Error("embedding witness (" + w.provenance + "): matrix has the wrong shape");
    if (!verify_primitive_representation(w.host, w.target, w.matrix))
        throw Error("embedding witness (" + w.provenance + ") failed exact verification");
}

EmbeddingWitness embed_even_in_H(const Ring& r, const RingElt& c) {
    if (!in_2R(c)) throw Error("embed_even_in_H: " + c.to_string() + " is not in 2R");
    RingMatrix t = zeros(*r, 2, 1);
    t(0, 0) = r->one();
    t(1, 0) = half(c);
    EmbeddingWitness w{hyperbolic(r), Lattice::unchecked(r, congruent(hyperbolic(r).gram(), t)), t, "3.1a"};
    check_witness(w);
    return w;
}

RingMatrix hyperbolic_unit_isometry(const Ring& r, const RingElt& eps) {
    if (!eps.is_unit()) throw Error("hyperbolic_unit_isometry: eps must be a unit");
    // c with eps c^2 = 1 mod p; squaring is onto the residue field when p = 2.
    RingElt c = r->one();
    for (int code = 1; code < static_cast<int>(r->q); ++code) {
        RingElt t = r->from_residue(code);
        if ((eps * t * t - r->one()).valuation() >= 1) {
            c = t;
            break;
        }
    }
    RingElt ec2 = eps * c * c;
    RingElt beta = half(r->one() - ec2);
    RingElt gamma = -ec2 - beta;
    RingMatrix u = zeros(*r, 3, 3);
    u(0, 0) = r->one(), u(1, 0) = beta, u(2, 0) = c;
    u(0, 1) = r->one(), u(1, 1) = gamma, u(2, 1) = c;
    u(1, 2) = -eps * c, u(2, 2) = r->one();
    return u;
}

EmbeddingWitness embed_binary_unit(const Ring& r, const RingElt& alpha, const RingElt& eps) {
    Lattice host = orthogonal_sum(hyperbolic(r), diagonal(r, std::vector<RingElt>{eps}));
    RingMatrix g = zeros(*r, 2, 2);
    g(0, 0) = alpha;
    g(1, 1) = eps;
    Lattice target = Lattice::unchecked(r, g);
    RingMatrix t = zeros(*r, 3, 2);
    if (in_2R(alpha)) {
        t(0, 0) = r->one();
        t(1, 0) = half(alpha);
        t(2, 1) = r->one();
    } else {
        RingMatrix u = hyperbolic_unit_isometry(r, eps);
        auto [s, tt] = split_unit(*r, alpha);
        for (int i = 0; i < 3; ++i) {
            t(i, 0) = s * u(i, 0) + tt * u(i, 1);
            t(i, 1) = u(i, 2);
        }
    }
    EmbeddingWitness w{host, target, t, "5.2a"};
    check_witness(w);
    return w;
}

CanonicalBlocks canonical_blocks(const Lattice& l, const DecideOptions& opts) {
    const RingSpec& r = l.ring();
    JordanSplitting js = jordan_split(l);
    CanonicalBlocks out;
    out.basis = zeros(r, l.rank(), l.rank());
    for (const auto& piece : js.pieces) {
        RingMatrix v = js.basis_change.block(0, piece.first, l.rank(), piece.rank());
        if (piece.rank() == 1) {
            const RingElt& c = piece.gram(0, 0);
            int s = c.valuation();
            out.blocks.push_back(BlockType{BlockType::Unary, s, c.shift_down(s)});
            out.basis.set_col(piece.first, v.col(0));
            continue;
        }
        Lattice pl(l.ring_ptr(), piece.gram);
        bool done = false;
        for (auto kind : {BlockType::Hyperbolic, BlockType::Anisotropic}) {
            BlockType bt{kind, piece.scale, r.one()};
            DecisionCertificate cert = isometric(bt.lattice(l.ring_ptr()), pl, opts);
            if (cert.verdict != Verdict::Yes) continue;
            RingMatrix vv = v * *cert.witness;
            out.basis.set_col(piece.first, vv.col(0));
            out.basis.set_col(piece.first + 1, vv.col(1));
            out.blocks.push_back(bt);
            done = true;
            break;
        }
        if (!done) throw Error("canonical_blocks: binary piece is neither 2^s H nor 2^s A");
    }
    Lattice canon = blocks_lattice(l.ring_ptr(), out.blocks);
    if (!(congruent(l.gram(), out.basis) == canon.gram())) throw Error("internal: canonical block basis");
    return out;
}

HostShape split_hyperbolic_prefix(const Lattice& host) {
    const RingMatrix& g = host.gram();
    const RingSpec& r = host.ring();
    const int m = host.rank();
    HostShape s;
    int i = 0;
    while (i + 1 < m) {
        bool ok = g(i, i).is_zero() && g(i + 1, i + 1).is_zero() && g(i, i + 1) == r.one();
        for (int j = i + 2; j < m && ok; ++j) ok = g(i, j).is_zero() && g(i + 1, j).is_zero();
        if (!ok) break;
        ++s.planes;
        i += 2;
    }
    if (i < m) s.tail = Lattice(host.ring_ptr(), g.block(i, i, m - i, m - i));
    return s;
}

EmbeddingWitness embed_stack(const Lattice& j, const EmbeddingWitness& k_in_j, const Lattice& ell, StackMode mode,
                             const DecideOptions& opts) {
    const Ring& R = j.ring_ptr();
    const RingSpec& r = *R;
    if (!(k_in_j.host == j)) throw Error("embed_stack: the witness does not live in J");
    check_witness(k_in_j);
    const int n = ell.rank();
    Lattice host = orthogonal_sum(power(hyperbolic(R), n), j);
    Lattice target = orthogonal_sum(ell, k_in_j.target);
    Placer pl(host, n, j, opts);
    pl.init_tail_cols();
    std::vector<RingVector> cols;
    if (mode == StackMode::Even) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && !ell.gram()(a, b).is_zero()) throw Error("embed_stack: even mode needs a diagonal lattice");
        for (int a = 0; a < n; ++a) {
            if (!in_2R(ell.gram()(a, a))) throw Error("embed_stack: even mode needs entries in 2R");
            for (auto& v : pl.even_unary(ell.gram()(a, a))) cols.push_back(v);
        }
    } else {
        if (!pl.prepare_carrier()) throw Error("embed_stack: J represents no unit primitively");
        CanonicalBlocks cb = canonical_blocks(ell, opts);
        for (const auto& b : cb.blocks) {
            std::vector<RingVector> got;
            if (b.kind == BlockType::Unary) {
                RingElt a = unary_value(r, b);
                got = in_2R(a) ? pl.even_unary(a) : pl.unit_unary(a);
            } else if (b.kind == BlockType::Hyperbolic && b.scale == 0) {
                got = pl.plane_itself();
            } else {
                got = pl.two_planes(b.scale, b.kind);
            }
            for (auto& v : got) cols.push_back(v);
        }
        // Back from the canonical basis of ell to its own basis.
        RingMatrix tc = from_cols(r, host.rank(), cols);
        RingMatrix te = tc * inverse(cb.basis);
        cols.clear();
        for (int c = 0; c < te.cols(); ++c) cols.push_back(te.col(c));
    }
    for (auto& v : pl.known_in_tail(k_in_j.matrix)) cols.push_back(v);
    EmbeddingWitness w{host, target, from_cols(r, host.rank(), cols), mode == StackMode::Even ? "3.1b" : "5.2b"};
    check_witness(w);
    return w;
}

EmbeddingWitness embed_scaled_even_binary(const Lattice& j, const RingVector& z, int a, BlockType::Kind kind) {
    const Ring& R = j.ring_ptr();
    const RingSpec& r = *R;
    if (kind == BlockType::Unary) throw Error("embed_scaled_even_binary: kind must be H or A");
    if (!is_primitive_sublattice(j, from_cols(r, j.rank(), {z}))) throw Error("embed_scaled_even_binary: z is not primitive");
    Lattice host = orthogonal_sum(hyperbolic(R), j);
    const int m = host.rank();
    RingElt pa = r.p_power(a);
    RingElt qz = j.Q(z);
    RingVector x = unit_vec(r, m, 0), y = unit_vec(r, m, 1), zh = zero_vec(r, m);
    for (int i = 0; i < j.rank(); ++i) zh[2 + i] = z[i];
    std::vector<RingVector> cols;
    std::string prov;
    BlockType bt{kind, a, r.one()};
    if (kind == BlockType::Hyperbolic && qz.is_zero()) {
        cols = {x, axpy(scale_vec(pa, y), r.one(), zh)};
        prov = "4.1a";
    } else {
        RingElt unit_part = qz.is_zero() ? r.zero() : qz.shift_down(std::min(qz.valuation(), r.k));
        if (qz.is_zero() || qz.valuation() != a + r.ord2 || !unit_part.is_unit())
            throw Error("embed_scaled_even_binary: Q(z) must be 2^(a+1) times a unit");
        RingElt eps = qz.exact_div(r.p_power(a + r.ord2));
        prov = "4.1b";
        if (kind == BlockType::Hyperbolic) {
            cols = {scale_vec(eps.inverse(), x), axpy(axpy(scale_vec(-r.one(), x), pa * eps, y), r.one(), zh)};
        } else {
            auto kappa = artin_schreier_root(r, r.rho - eps);
            if (!kappa) throw Error("embed_scaled_even_binary: the norm of z does not reach A over this ring");
            cols = {axpy(x, pa, y), axpy(axpy(scale_vec(*kappa, x), pa * (r.one() - *kappa), y), r.one(), zh)};
        }
    }
    EmbeddingWitness w{host, bt.lattice(R), from_cols(r, m, cols), prov};
    check_witness(w);
    return w;
}

EmbeddingWitness embed_cap(const std::vector<BlockType>& ell_blocks, const Lattice& j, const RingVector& w,
                           const RingVector& z) {
    const Ring& R = j.ring_ptr();
    const RingSpec& r = *R;
    Lattice ell = blocks_lattice(R, ell_blocks);
    if (!ell.is_even()) throw Error("embed_cap: ell is not even");
    const int n = ell.rank();
    if (static_cast<int>(w.size()) != n || static_cast<int>(z.size()) != j.rank())
        throw Error("embed_cap: witness vectors have the wrong length");
    const RingElt beta = ell.Q(w);
    if (beta != j.Q(z)) throw Error("embed_cap: Q(w) differs from Q(z)");
    if (!is_primitive_sublattice(j, from_cols(r, j.rank(), {z}))) throw Error("embed_cap: z is not primitive");

    // Block offsets in ell, and the block whose component of w is primitive goes last.
    std::vector<int> offset;
    int acc = 0;
    for (const auto& b : ell_blocks) {
        offset.push_back(acc);
        acc += b.rank();
    }
    int last = -1;
    for (int i = static_cast<int>(ell_blocks.size()) - 1; i >= 0 && last < 0; --i)
        for (int c = 0; c < ell_blocks[i].rank(); ++c)
            if (w[offset[i] + c].is_unit()) last = i;
    if (last < 0) throw Error("embed_cap: w is not primitive");
    std::vector<int> order;
    for (int i = 0; i < static_cast<int>(ell_blocks.size()); ++i)
        if (i != last) order.push_back(i);
    order.push_back(last);

    const int planes = n - 1;
    Lattice host = orthogonal_sum(power(hyperbolic(R), planes), j);
    const int m = host.rank();
    auto E = [&](int idx) { return unit_vec(r, m, idx - 1); };  // 1-based e_idx
    std::vector<RingVector> xs(n), ys(n);
    std::vector<RingElt> betas(n, r.zero());
    std::vector<RingVector> image(n);  // by position in the original ell basis
    int s = 0;
    RingVector ysum = zero_vec(r, m);
    for (size_t oi = 0; oi + 1 < order.size(); ++oi) {
        const BlockType& b = ell_blocks[order[oi]];
        const int off = offset[order[oi]];
        RingElt alpha = r.p_power(b.scale);
        if (b.kind == BlockType::Unary) {
            s += 1;
            RingElt a = half(unary_value(r, b));
            RingVector xv = axpy(E(2 * s - 1), a, E(2 * s));
            RingVector yv = axpy(E(2 * s - 1), -a, E(2 * s));
            image[off] = xv;
            ysum = axpy(ysum, w[off], yv);
            continue;
        }
        s += 2;
        RingVector x1, x2, y1, y2;
        if (b.kind == BlockType::Hyperbolic) {
            x1 = E(2 * s - 3);
            y1 = axpy(E(2 * s - 3), -alpha, E(2 * s));
            x2 = axpy(scale_vec(alpha, E(2 * s - 2)), r.one(), E(2 * s - 1));
            y2 = E(2 * s - 1);
        } else {
            x1 = axpy(E(2 * s - 3), alpha, E(2 * s - 2));
            y1 = axpy(axpy(E(2 * s - 3), -alpha, E(2 * s - 2)), alpha, E(2 * s));
            x2 = axpy(axpy(E(2 * s - 3), r.one(), E(2 * s - 1)), r.rho * alpha, E(2 * s));
            y2 = axpy(scale_vec(-r.one(), E(2 * s - 1)), r.rho * alpha, E(2 * s));
        }
        image[off] = x1;
        image[off + 1] = x2;
        ysum = axpy(axpy(ysum, w[off], y1), w[off + 1], y2);
    }
    RingVector zh = zero_vec(r, m);
    for (int i = 0; i < j.rank(); ++i) zh[2 * planes + i] = z[i];
    const BlockType& b = ell_blocks[last];
    const int off = offset[last];
    std::string prov = "6.8";
    if (b.kind == BlockType::Unary) {
        RingVector v = axpy(ysum, r.one(), zh);
        image[off] = scale_vec(w[off].inverse(), v);
    } else {
        RingElt alpha = r.p_power(b.scale);
        const int t = n - 1;  // x_(n-1) uses e_(2n-3), e_(2n-2)
        if (b.kind == BlockType::Hyperbolic) {
            RingVector xv = E(2 * t - 1);
            RingVector v = axpy(axpy(ysum, alpha, E(2 * t)), r.one(), zh);
            RingElt qv = bilinear(host.gram(), v, v);
            v = axpy(v, -qv.exact_div(alpha * r.from_int(2)), xv);
            image[off] = xv;
            image[off + 1] = v;
        } else {
            RingVector wr = {w[off], w[off + 1]};
            RingElt eps = b.lattice(R).Q(wr).exact_div(alpha * r.from_int(2));
            RingVector xv = axpy(scale_vec(r.rho * eps.inverse(), E(2 * t - 1)), alpha, E(2 * t));
            RingVector v = axpy(axpy(ysum, r.one(), E(2 * t - 1)), r.one(), zh);
            // The pair (xv, v) spans a copy of alpha A in a non-standard basis.
            RingMatrix pair = from_cols(r, m, {xv, v});
            Lattice pl(R, congruent(host.gram(), pair));
            DecisionCertificate cert = isometric(b.lattice(R), pl);
            if (cert.verdict != Verdict::Yes) throw Error("embed_cap: could not normalise the terminal block");
            RingMatrix fixed = pair * *cert.witness;
            image[off] = fixed.col(0);
            image[off + 1] = fixed.col(1);
        }
    }
    EmbeddingWitness out{host, ell, from_cols(r, m, image), prov};
    check_witness(out);
    return out;
}

std::optional<EmbeddingWitness> embed_by_lemmas(const Lattice& host, const std::vector<BlockType>& target_blocks,
                                                const DecideOptions& opts) {
    const Ring& R = host.ring_ptr();
    const RingSpec& r = *R;
    HostShape shape = split_hyperbolic_prefix(host);
    Lattice target = blocks_lattice(R, target_blocks);
    const int nb = static_cast<int>(target_blocks.size());

    auto plane_cost = [&](const BlockType& b, bool carrier) -> int {
        if (b.kind == BlockType::Unary) {
            if (in_2R(unary_value(r, b))) return 1;
            return carrier ? 1 : -1;
        }
        if (b.kind == BlockType::Hyperbolic && b.scale == 0) return 1;
        return 2;
    };

    // Final steps for the tail: 0 none, 1 one block into J, 2 one plane plus J, 3 the cap recipe.
    struct Plan {
        int final_kind;
        std::vector<int> final_blocks;
    };
    std::vector<Plan> plans{{0, {}}};
    if (shape.tail) {
        for (int i = 0; i < nb; ++i) plans.push_back({1, {i}});
        for (int i = 0; i < nb; ++i)
            if (target_blocks[i].kind != BlockType::Unary) plans.push_back({2, {i}});
        for (int mask = 1; mask < (1 << nb); ++mask) {
            std::vector<int> sel;
            for (int i = 0; i < nb; ++i)
                if (mask >> i & 1) sel.push_back(i);
            plans.push_back({3, sel});
        }
    }

    bool carrier_known = false, carrier_ok = false;
    for (const auto& plan : plans) {
        std::vector<bool> fin(nb, false);
        for (int i : plan.final_blocks) fin[i] = true;
        bool need_carrier = false;
        int cost = 0;
        bool feasible = true;
        for (int i = 0; i < nb && feasible; ++i) {
            if (fin[i]) continue;
            int c = plane_cost(target_blocks[i], false);
            if (c < 0) {
                need_carrier = true;
                c = 1;
            }
            cost += c;
        }
        if (plan.final_kind == 2) cost += 1;
        if (plan.final_kind == 3) {
            int rk = 0;
            for (int i : plan.final_blocks) rk += target_blocks[i].rank();
            cost += rk - 1;
        }
        if (cost > shape.planes) continue;
        if (need_carrier) {
            if (!shape.tail) continue;
            if (!carrier_known) {
                Placer probe(host, shape.planes, shape.tail, opts);
                carrier_ok = probe.prepare_carrier();
                carrier_known = true;
            }
            if (!carrier_ok) continue;
        }
        Placer pl(host, shape.planes, shape.tail, opts);
        pl.init_tail_cols();
        if (need_carrier) pl.prepare_carrier();
        std::vector<RingVector> image(target.rank());
        std::vector<int> offset;
        int acc = 0;
        for (const auto& b : target_blocks) {
            offset.push_back(acc);
            acc += b.rank();
        }
        std::string prov;
        auto note = [&](const std::string& tag) {
            if (prov.find(tag) == std::string::npos) prov += (prov.empty() ? "" : "+") + tag;
        };
        for (int i = 0; i < nb; ++i) {
            if (fin[i]) continue;
            const BlockType& b = target_blocks[i];
            std::vector<RingVector> got;
            if (b.kind == BlockType::Unary) {
                RingElt a = unary_value(r, b);
                if (in_2R(a)) {
                    got = pl.even_unary(a);
                    note("3.1b");
                } else {
                    got = pl.unit_unary(a);
                    note("5.2b");
                }
            } else if (b.kind == BlockType::Hyperbolic && b.scale == 0) {
                got = pl.plane_itself();
                note("3.1b");
            } else {
                got = pl.two_planes(b.scale, b.kind);
                note("4.1b");
            }
            for (int c = 0; c < b.rank(); ++c) image[offset[i] + c] = got[c];
        }
        bool ok = true;
        if (plan.final_kind == 1) {
            const BlockType& b = target_blocks[plan.final_blocks[0]];
            auto got = pl.into_tail(b.lattice(R));
            if (!got) ok = false;
            else {
                for (int c = 0; c < b.rank(); ++c) image[offset[plan.final_blocks[0]] + c] = (*got)[c];
                note("5.2b");
            }
        } else if (plan.final_kind == 2) {
            const BlockType& b = target_blocks[plan.final_blocks[0]];
            auto got = pl.plane_and_tail(b.scale, b.kind);
            if (!got) ok = false;
            else {
                for (int c = 0; c < 2; ++c) image[offset[plan.final_blocks[0]] + c] = (*got)[c];
                note("4.1");
            }
        } else if (plan.final_kind == 3) {
            std::vector<BlockType> sub;
            for (int i : plan.final_blocks) sub.push_back(target_blocks[i]);
            auto got = pl.cap(sub);
            if (!got) ok = false;
            else {
                int k = 0;
                for (int i : plan.final_blocks)
                    for (int c = 0; c < target_blocks[i].rank(); ++c) image[offset[i] + c] = (*got)[k++];
                note("6.8");
            }
        }
        if (!ok) continue;
        EmbeddingWitness w{host, target, from_cols(r, host.rank(), image), prov};
        check_witness(w);
        return w;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// ord of the norm of a Jordan block (ord 2 = 1 over Z_2).
int block_norm(const JordanBlock& b) { return b.even ? b.scale + 1 : b.scale; }

int norm_from(const JordanSplitting& js, int s) {
    int v = kInfiniteOrder;
    for (const auto& b : js.blocks)
        if (b.scale >= s) v = std::min(v, block_norm(b));
    return v;
}

int64_t mod_int(const RingElt& c, int64_t m) {
    int64_t v = static_cast<int64_t>(c.coeff(0) % static_cast<uint64_t>(m));
    return v;
}

EmbeddingWitness binary_in(const Lattice& l, const RingVector& a, const RingVector& b, const std::string& prov) {
    const RingSpec& r = l.ring();
    RingMatrix t = from_cols(r, l.rank(), {a, b});
    EmbeddingWitness w{l, Lattice(l.ring_ptr(), congruent(l.gram(), t)), t, prov};
    check_witness(w);
    if (!w.target.is_even() || !w.target.det().is_unit()) throw Error("internal: sublattice is not even unimodular");
    return w;
}

}  // namespace

EusResult even_unimodular_sublattice(const Lattice& l, const RingVector& x, const DecideOptions& opts) {
    const Ring& R = l.ring_ptr();
    const RingSpec& r = *R;
    if (r.p != 2 || r.f != 1) throw Error("even_unimodular_sublattice: needs Z_2");
    const int m = l.rank();
    JordanSplitting js = jordan_split(l);
    if (js.blocks.empty() || js.blocks[0].scale != 0) throw Error("even_unimodular_sublattice: the scale of L is not R");
    const JordanBlock& b0 = js.blocks[0];
    const int n0 = b0.rank();
    const RingElt qx = l.Q(x);
    if (!in_2R(qx)) throw Error("even_unimodular_sublattice: Q(x) is odd");

    // New basis: L0 refined (diagonal or H/A pairs), the rest as in the splitting.
    RingMatrix basis = js.basis_change;
    RingMatrix v0 = basis.block(0, b0.first, m, n0);
    std::vector<RingElt> eps;
    std::vector<BlockType::Kind> pair_kind;
    if (!b0.even) {
        bool diag = true;
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n0; ++j)
                if (i != j && !b0.gram(i, j).is_zero()) diag = false;
        RingMatrix d = identity(r, n0);
        if (diag)
            for (int i = 0; i < n0; ++i) eps.push_back(b0.gram(i, i));
        else
            eps = diagonalize_odd_unimodular(b0.gram, &d);
        RingMatrix nv = v0 * d;
        for (int c = 0; c < n0; ++c) basis.set_col(b0.first + c, nv.col(c));
    } else {
        Lattice l0(R, b0.gram);
        CanonicalBlocks cb = canonical_blocks(l0, opts);
        RingMatrix nv = v0 * cb.basis;
        for (int c = 0; c < n0; ++c) basis.set_col(b0.first + c, nv.col(c));
        for (const auto& b : cb.blocks) pair_kind.push_back(b.kind);
    }
    RingVector xi = mat_vec(inverse(basis), x);
    auto e = [&](int i) { return basis.col(b0.first + i); };
    int a = -1;
    for (int i = 0; i < n0 && a < 0; ++i)
        if (xi[b0.first + i].is_unit()) a = i;
    if (a < 0) throw Error("even_unimodular_sublattice: the L0 component of x is not primitive");

    EusResult res;
    const int n1 = norm_from(js, 1);
    const bool q2mod4 = mod_int(qx, 4) == 2;
    // A vector of L_{>=1} with Q = 2 mod 4, when the norm of L_{>=1} is 2R.
    auto y_from_tail = [&]() {
        for (const auto& b : js.blocks) {
            if (b.scale != 1 || b.even) continue;
            for (int i = 0; i < b.rank(); ++i)
                if (b.gram(i, i).valuation() == 1) return basis.col(b.first + i);
        }
        throw Error("internal: no vector of norm 2 mod 4 in L_1");
    };

    if (!b0.even) {
        int64_t gamma = 0;
        for (const auto& ei : eps) gamma += mod_int(ei, 8);
        gamma %= 8;
        const int64_t q8 = mod_int(qx, 8);
        const int64_t diff = ((q8 - gamma) % 8 + 8) % 8;
        const JordanBlock* l1 = nullptr;
        for (const auto& b : js.blocks)
            if (b.scale == 1) l1 = &b;
        const int n2 = norm_from(js, 2);
        std::vector<std::string> failed;
        auto test = [&](const std::string& name, bool ok) {
            if (!res.hypothesis.empty()) return;
            if (ok) res.hypothesis = name;
            else failed.push_back(name);
        };
        test("(i)", n1 >= 3 && diff != 0);
        test("(ii)", n1 >= 2 && diff % 4 != 0);
        {
            bool ok = l1 && l1->rank() == 1 && n2 >= 3;
            if (ok) {
                int64_t two_eps = mod_int(l1->gram(0, 0), 8);
                ok = diff != 0 && diff != two_eps;
            }
            test("(iii)", ok);
        }
        {
            bool ok = l1 && l1->rank() == 2 && !l1->even && n2 >= 3;
            int64_t d16 = 0, two_eps = 0;
            if (ok) {
                RingMatrix shifted = l1->gram;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) shifted(i, j) = shifted(i, j).shift_down(1);
                auto de = diagonalize_odd_unimodular(shifted);
                two_eps = mod_int(de[0] * r.from_int(2), 8);
                d16 = mod_int(de[0] * de[1] * r.from_int(4), 16);
            }
            test("(iv)", ok && d16 == 4 && diff != 0 && diff != two_eps && diff != 4);
            test("(v)", ok && d16 == 12 && diff != 0 && diff != 2 && diff != 6);
        }
        test("(vi)", diff % 2 != 0);
        if (res.hypothesis.empty()) {
            std::string msg = "even_unimodular_sublattice: every hypothesis fails:";
            for (const auto& f : failed) msg += " " + f;
            throw Error(msg);
        }
        std::vector<int> odd, even;
        for (int i = 0; i < n0; ++i) (xi[b0.first + i].is_unit() ? odd : even).push_back(i);
        if (even.empty()) throw Error("internal: no even coordinate although a hypothesis holds");
        const int ia = odd[0], ib = even[0];
        RingVector v = axpy(e(ia), r.one(), e(ib));
        res.m = binary_in(l, x, v, "6.4" + res.hypothesis);
        if (!q2mod4) return res;
        int64_t d0 = 1;
        for (const auto& ei : eps) d0 = d0 * mod_int(ei, 4) % 4;
        res.second_expected = n0 >= 5 || n1 == 1 || (n0 == 4 && d0 == 3);
        if (!res.second_expected) {
            res.note = "unique class";
            return res;
        }
        auto m4 = [&](int i) { return mod_int(eps[i], 4); };
        RingVector v2;
        if (n1 == 1) {
            v2 = axpy(v, r.one(), y_from_tail());
        } else {
            int alt = -1;
            for (int i : odd)
                if (i != ia && m4(i) != m4(ia) && alt < 0) alt = i;
            if (alt >= 0) {
                v2 = axpy(e(alt), r.one(), e(ib));
            } else {
                for (int jj : even)
                    if (jj != ib && m4(jj) != m4(ib) && alt < 0) alt = jj;
                if (alt >= 0) {
                    v2 = axpy(e(ia), r.one(), e(alt));
                } else if (odd.size() >= 3) {
                    v2 = axpy(axpy(axpy(e(ia), r.one(), e(odd[1])), r.one(), e(odd[2])), r.one(), e(ib));
                } else if (even.size() >= 3) {
                    v2 = axpy(axpy(axpy(e(ia), r.one(), e(even[1])), r.one(), e(even[2])), r.one(), e(ib));
                } else {
                    throw Error("internal: no second sublattice although the criterion holds");
                }
            }
        }
        res.m2 = binary_in(l, x, v2, "6.4(b)");
        return res;
    }

    // Even unimodular L0 = J_1 + ... as H/A pairs.
    res.hypothesis = "(c)";
    auto partner = [](int i) { return i ^ 1; };
    RingVector v = e(partner(a));
    res.m = binary_in(l, x, v, "6.4(c)");
    if (!q2mod4) return res;
    res.second_expected = n0 >= 4 || n1 == 1;
    if (!res.second_expected) {
        res.note = "unique class";
        return res;
    }
    RingVector v2;
    if (n1 == 1) {
        v2 = axpy(v, r.one(), y_from_tail());
    } else {
        const int p1 = a / 2;
        const int p2 = p1 == 0 ? 1 : 0;
        const int c = 2 * p2, d = 2 * p2 + 1;
        const bool oc = xi[b0.first + c].is_unit(), od = xi[b0.first + d].is_unit();
        if (!oc && !od) {
            v2 = axpy(axpy(v, r.one(), e(c)), r.one(), e(d));
        } else if (pair_kind[p1] != pair_kind[p2]) {
            v2 = e(partner(oc ? c : d));
        } else {
            // Rewrite J_1 + J_2 as a pair of the other kind and take the partner there.
            const int lo = 2 * std::min(p1, p2);
            RingMatrix sub = zeros(r, m, 4);
            for (int i = 0; i < 4; ++i) sub.set_col(i, e(lo + i));
            BlockType::Kind other = pair_kind[p1] == BlockType::Hyperbolic ? BlockType::Anisotropic : BlockType::Hyperbolic;
            BlockType ob{other, 0, r.one()};
            Lattice want = orthogonal_sum(ob.lattice(R), ob.lattice(R));
            DecisionCertificate cert = isometric(want, Lattice(R, congruent(l.gram(), sub)), opts);
            if (cert.verdict != Verdict::Yes) throw Error("even_unimodular_sublattice: H+H and A+A isometry not found");
            RingMatrix nb = sub * *cert.witness;
            RingMatrix full = basis;
            for (int i = 0; i < 4; ++i) full.set_col(b0.first + lo + i, nb.col(i));
            RingVector xi2 = mat_vec(inverse(full), x);
            int odd_at = -1;
            for (int i = 0; i < 4 && odd_at < 0; ++i)
                if (xi2[b0.first + lo + i].is_unit()) odd_at = i;
            if (odd_at < 0) throw Error("internal: x lost its odd coordinate");
            v2 = nb.col(partner(odd_at));
        }
    }
    res.m2 = binary_in(l, x, v2, "6.4(c)");
    return res;
}

}  // namespace qlat
