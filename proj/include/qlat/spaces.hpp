#pragma once

#include <string>
#include <vector>

#include "qlat/decide.hpp"

namespace qlat {

struct SpaceInvariants {
    int dim = 0;
    int disc_parity = 0;  // ord det mod 2
    RingElt disc_class;   // unit part of det, as a representative of R^x / squares
    int witt_index = 0;
    bool hyperbolic = false;
    int anisotropic_kernel_dim = 0;
    std::vector<RingVector> isotropic_vectors;  // one per split hyperbolic plane, in the basis of L
    RingMatrix kernel_gram;                     // Gram of the anisotropic part that remained
    int kernel_shift = 0;                       // that Gram was divided by p^kernel_shift
};

SpaceInvariants witt_index(const Lattice& l, const DecideOptions& opts = {});

struct NecessaryCheck {
    bool pass = false;
    std::string reason;
    SpaceInvariants space;
};

NecessaryCheck check_necessary_pnu(const Lattice& l, int n, const DecideOptions& opts = {});

// True when the nonzero elements a, b of F lie in the same square class.
bool same_square_class(const RingElt& a, const RingElt& b);

}  // namespace qlat
