#pragma once

#include <vector>

#include "qlat/linalg.hpp"

namespace qlat {

class HenselPremiseError : public Error {
public:
    using Error::Error;
};

struct Term {
    RingElt coeff;
    std::vector<int> exps;
};

struct Poly {
    std::vector<Term> terms;

    RingElt eval(const RingSpec& r, const RingVector& x) const;
    Poly derivative(int var) const;
    int degree() const;
};

struct PolySystem {
    const RingSpec* ring = nullptr;
    int nvars = 0;
    std::vector<Poly> equations;

    RingVector eval(const RingVector& x) const;
    // Jacobian restricted to the listed variables (rows = equations).
    RingMatrix jacobian(const RingVector& x, const std::vector<int>& vars) const;
    // Quadratic form x^t H x - c plus linear forms l_i . x - c_i, the shape used
    // by the Gram-column procedures.
    static PolySystem gram_column(const RingMatrix& h, const std::vector<RingVector>& linear_rows,
                                  const RingVector& targets);
};

struct LiftResult {
    RingVector root;
    int jacobian_order = 0;  // ord J(a)
    int distance_bound = 0;  // min valuation of root - a; exceeds jacobian_order
};

// Square system: ord f(a) > 2 ord J(a) guarantees a unique nearby root.
LiftResult newton_root(const PolySystem& sys, const RingVector& a);

// n equations, m >= n variables; only the listed n variables move.
LiftResult underdetermined_root(const PolySystem& sys, const RingVector& a, const std::vector<int>& vars);

// Replaces the last column of the primitive matrix A so that its inner
// products with all columns (itself included) become gamma, provided the
// current values are within 4 (det H)^2 p of gamma.
RingMatrix adjust_column(const RingMatrix& h, const RingMatrix& a, const RingVector& gamma);

// Column-by-column application of adjust_column until A^t H A = target.
RingMatrix retarget_gram(const RingMatrix& h, const RingMatrix& a, const RingMatrix& target);

}  // namespace qlat
