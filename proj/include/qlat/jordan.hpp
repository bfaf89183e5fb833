#pragma once

#include <optional>
#include <vector>

#include "qlat/lattice.hpp"

namespace qlat {

// A rank-1 or improper binary orthogonal summand produced by one pivot step.
struct JordanPiece {
    int scale = 0;
    int first = 0;  // column offset inside JordanSplitting::basis_change
    RingMatrix gram;
    int rank() const { return gram.rows(); }
};

struct JordanBlock {
    int scale = 0;
    int first = 0;
    RingMatrix gram;
    bool even = false;                   // norm strictly inside the scale (always false for p odd)
    std::optional<RingElt> two_signature;  // odd blocks over Z_2 only, mod 8
    int rank() const { return gram.rows(); }
};

struct JordanSplitting {
    std::vector<JordanBlock> blocks;
    std::vector<JordanPiece> pieces;
    RingMatrix basis_change;  // U with U^t G U = block diagonal of the blocks

    std::vector<int> scales() const;
    std::vector<int> ranks() const;
    // Orthogonal sum of the blocks with scale exponent >= s, in the basis of U.
    std::optional<Lattice> tail(const Lattice& l, int s) const;
    // Columns of U belonging to blocks with scale exponent >= s.
    std::vector<int> tail_columns(int s) const;
};

JordanSplitting jordan_split(const Lattice& l);

// Diagonalizes an odd unimodular Gram matrix (p = 2): returns the diagonal
// entries and, when requested, the basis change V with V^t G V diagonal.
std::vector<RingElt> diagonalize_odd_unimodular(const RingMatrix& g, RingMatrix* basis = nullptr);
RingElt two_signature(const RingMatrix& odd_unimodular);

struct JordanInvariants {
    std::vector<int> scales;
    std::vector<int> ranks;
    std::vector<bool> even;
    friend bool operator==(const JordanInvariants&, const JordanInvariants&) = default;
};
JordanInvariants jordan_invariants(const Lattice& l);

// Hasse invariant prod_{i<j} (a_i, a_j) of the underlying quadratic space, as +1
// or -1. Available for p odd and for Z_2; nullopt otherwise or when the ring
// precision cannot resolve the unit parts.
std::optional<int> hasse_invariant(const Lattice& l);
int hilbert_symbol(const RingElt& a, const RingElt& b);

}  // namespace qlat
