#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlat/enumerate.hpp"

namespace qlat {

struct EmbeddingWitness {
    Lattice host;
    Lattice target;
    RingMatrix matrix;  // columns: images of the target basis, in host coordinates
    std::string provenance;
};

// Throws unless the matrix is primitive in the host and carries the host Gram
// onto the target Gram exactly.
void check_witness(const EmbeddingWitness& w);

// x + (c/2) y inside H.
EmbeddingWitness embed_even_in_H(const Ring& r, const RingElt& c);

// Basis u1, u2, u3 of H + <eps> (coordinates x, y, z) with Gram diag(1, -1, eps).
RingMatrix hyperbolic_unit_isometry(const Ring& r, const RingElt& eps);

// <alpha, eps> inside H + <eps>, for any alpha.
EmbeddingWitness embed_binary_unit(const Ring& r, const RingElt& alpha, const RingElt& eps);

enum class StackMode { Even, Unit };

// ell + K inside H^n + J, given K -> J. Even mode needs ell diagonal with entries
// in 2R; unit mode needs J to represent a unit primitively and accepts any ell.
EmbeddingWitness embed_stack(const Lattice& j, const EmbeddingWitness& k_in_j, const Lattice& ell, StackMode mode,
                             const DecideOptions& opts = {});

// 2^a H or 2^a A inside H + J from a primitive z in J. For H, Q(z) may be 0 or
// 2^(a+1) eps; for A, Q(z) = 2^(a+1) eps with eps a unit.
EmbeddingWitness embed_scaled_even_binary(const Lattice& j, const RingVector& z, int a, BlockType::Kind kind);

// A lattice given by canonical blocks: basis^t G basis is the block sum.
struct CanonicalBlocks {
    std::vector<BlockType> blocks;
    RingMatrix basis;
};
CanonicalBlocks canonical_blocks(const Lattice& l, const DecideOptions& opts = {});

// ell (even, blocks as given) inside H^(n-1) + J, with w in ell and z in J
// primitive and Q(w) = Q(z).
EmbeddingWitness embed_cap(const std::vector<BlockType>& ell_blocks, const Lattice& j, const RingVector& w,
                           const RingVector& z);

struct EusResult {
    EmbeddingWitness m;                    // in L, first column is x
    std::optional<EmbeddingWitness> m2;   // second lattice, not isometric to m
    std::string hypothesis;               // which hypothesis fired
    bool second_expected = false;         // the lemma's criterion for m2
    std::string note;
};

// Binary even unimodular sublattices of a Z_2-lattice L containing x.
EusResult even_unimodular_sublattice(const Lattice& l, const RingVector& x, const DecideOptions& opts = {});

// H^h + J recognised from the leading 2x2 blocks of the Gram.
struct HostShape {
    int planes = 0;
    std::optional<Lattice> tail;
};
HostShape split_hyperbolic_prefix(const Lattice& host);

// Tries the lemma recipes (plane by plane, unit carrier, tail) for a target
// given by canonical blocks; nullopt when no plan applies.
std::optional<EmbeddingWitness> embed_by_lemmas(const Lattice& host, const std::vector<BlockType>& target_blocks,
                                                const DecideOptions& opts = {});

}  // namespace qlat
