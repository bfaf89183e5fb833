#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlat/decide.hpp"

namespace qlat {

// One block type of the generation basis: <p^s e>, 2^s H or 2^s A.
struct BlockType {
    enum Kind { Unary, Hyperbolic, Anisotropic } kind = Unary;
    int scale = 0;
    RingElt unit;  // Unary only
    int rank() const { return kind == Unary ? 1 : 2; }
    Lattice lattice(const Ring& r) const;
    std::string name() const;
};

std::vector<BlockType> block_types(const Ring& r, int min_scale, int max_scale, bool even_only);

struct CandidateLattice {
    Lattice lattice;
    std::vector<BlockType> blocks;
    std::string name;
};

// All multisets of block types with total rank n; optionally restricted to
// a fixed ord det. Throws BudgetError past `limit` candidates.
std::vector<CandidateLattice> block_candidates(const Ring& r, int n, int min_scale, int max_scale, bool even_only,
                                               uint64_t limit, std::optional<int> ord_det = std::nullopt);

struct EnumerateOptions {
    bool even_only = false;
    uint64_t max_candidates = 200000;
    DecideOptions decide;
};

struct ClassList {
    Ring ring;
    int rank = 0;
    int max_scale = 0;
    bool even_only = false;
    std::vector<Lattice> lattices;
    std::vector<std::string> names;
    // Every candidate of the class with a matrix U, U^t G_class U = G_candidate.
    std::vector<std::vector<CandidateLattice>> members;
    std::vector<std::vector<RingMatrix>> member_maps;
    std::string provenance;
    int candidates = 0;
    int unresolved_pairs = 0;  // isometry tests that ended "unknown"; such candidates were kept apart
};

ClassList enumerate_classes(const Ring& r, int n, int a, const EnumerateOptions& opts = {});

}  // namespace qlat
