#pragma once

#include <optional>
#include <vector>

#include "qlat/matrix.hpp"

namespace qlat {

// Gaussian elimination over R/p^k with full pivoting on minimal valuation.
// Row operations are exact unimodular moves, so the pivot valuations are the
// elementary divisor exponents of the matrix and the product of the pivots
// is a maximal minor of minimal valuation.
struct Elimination {
    RingMatrix reduced;          // upper triangular after row ops and column permutation
    std::vector<int> col_perm;   // reduced column j is original column col_perm[j]
    std::vector<int> pivot_vals; // valuation of each nonzero pivot
    int rank = 0;                // number of nonzero pivots at precision
    int sign = 1;                // parity of the row and column swaps
};

Elimination eliminate(const RingMatrix& a);

RingElt determinant(const RingMatrix& a);

// Rank of A mod p over the residue field.
int rank_mod_p(const RingMatrix& a);

// Columns of a full-rank n x m matrix (n <= m) whose n x n minor has the
// smallest valuation, together with that valuation. Returns nullopt when the
// matrix has rank < n at working precision.
struct MinorChoice {
    std::vector<int> cols;
    int valuation = 0;
};
std::optional<MinorChoice> best_minor(const RingMatrix& a);

// Some x with A x = b exactly at working precision, or nullopt when no
// solution exists.
std::optional<RingVector> solve(const RingMatrix& a, const RingVector& b);

// Inverse of a matrix with unit determinant.
RingMatrix inverse(const RingMatrix& u);

// Extends a primitive m x n matrix to an invertible m x m matrix whose first
// n columns are those of T.
RingMatrix complete_to_basis(const RingMatrix& t);

}  // namespace qlat
