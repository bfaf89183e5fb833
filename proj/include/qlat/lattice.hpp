#pragma once

#include <string>
#include <vector>

#include "qlat/linalg.hpp"

namespace qlat {

class Lattice {
public:
    Lattice() = default;
    // Checks symmetry and nondegeneracy at working precision.
    Lattice(Ring ring, RingMatrix gram);
    // Symmetric but possibly degenerate Gram matrix (targets such as <0>).
    static Lattice unchecked(Ring ring, RingMatrix gram);

    const Ring& ring_ptr() const { return ring_; }
    const RingSpec& ring() const { return *ring_; }
    int rank() const { return gram_.rows(); }
    const RingMatrix& gram() const { return gram_; }
    const RingElt& det() const { return det_; }
    // ord det; equals k for a determinant that vanishes at working precision.
    int ord_det() const { return ord_det_; }
    bool degenerate() const { return ord_det_ >= ring_->k; }

    RingElt Q(const RingVector& v) const { return bilinear(gram_, v, v); }
    RingElt B(const RingVector& u, const RingVector& v) const { return bilinear(gram_, u, v); }
    bool is_even() const;

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.ring_ == b.ring_ && a.gram_ == b.gram_;
    }

private:
    Ring ring_;
    RingMatrix gram_;
    RingElt det_;
    int ord_det_ = 0;
};

Lattice diagonal(const Ring& r, const std::vector<RingElt>& entries);
Lattice diagonal(const Ring& r, const std::vector<int64_t>& entries);
Lattice hyperbolic(const Ring& r, const RingElt& a);
Lattice hyperbolic(const Ring& r, int64_t a = 1);
// a A = [[2a, a], [a, 2 rho a]]
Lattice anisotropic(const Ring& r, const RingElt& a);
Lattice anisotropic(const Ring& r, int64_t a = 1);
Lattice orthogonal_sum(const Lattice& a, const Lattice& b);
Lattice orthogonal_sum(const std::vector<Lattice>& parts);
Lattice scaled(const RingElt& a, const Lattice& l);
Lattice power(const Lattice& l, int times);
// Gram of the columns of T inside L.
Lattice sublattice(const Lattice& l, const RingMatrix& t);

struct ScaleNormDisc {
    int scale = 0;
    int norm = 0;
    int ord_det = 0;
    RingElt det_class;  // representative of det / p^ord in unit_square_class_reps
};
ScaleNormDisc scale_norm_disc(const Lattice& l);

bool is_primitive_sublattice(const Lattice& l, const RingMatrix& t);

struct ValueClassSet {
    int m = 0;
    int threshold = 0;  // exponent needed before membership decides exact representability
    std::vector<uint64_t> codes;  // sorted codes (RingElt::code(m)) of attained residues

    bool contains(const RingElt& c) const;
    std::vector<RingElt> elements(const RingSpec& r) const;
};

// Exact sets {Q(v) mod p^m : v primitive} and {Q(v) mod p^m : any v}.
ValueClassSet primitive_values(const Lattice& l, int m, uint64_t budget = 1ull << 26);
ValueClassSet value_set(const Lattice& l, int m, uint64_t budget = 1ull << 26);

int threshold_exponent(const Lattice& l);

// Text forms: shorthand such as "H+diag:3", "A:2+diag:1,-1", "(H)^2+diag:1,-1",
// "sum:(H)+(A)", "gram:[[2,1],[1,2]]", or a lattice JSON document.
Lattice parse_lattice(const Ring& r, const std::string& text);
std::string lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const std::string& text);
std::string gram_to_string(const RingMatrix& g);

}  // namespace qlat
