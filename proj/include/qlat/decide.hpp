#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlat/jordan.hpp"

namespace qlat {

enum class Verdict { Yes, No, Unknown };
std::string to_string(Verdict v);

struct DecideOptions {
    uint64_t node_budget = 200000;        // digit-wise column search
    uint64_t dp_budget = 400000000;       // residue-state search, counted in elementary steps
    bool use_column_search = true;
    bool use_value_search = true;
    bool use_complement_split = true;
    int precision_loss = 0;  // digits already consumed by dividing out a common scale
};

struct DecisionCertificate {
    Verdict verdict = Verdict::Unknown;
    std::optional<RingMatrix> witness;  // exact, in the host basis
    int threshold = 0;
    int level = 0;  // for "no": the residue level at which every primitive T was excluded
    uint64_t nodes_explored = 0;
    uint64_t states_explored = 0;
    bool exhausted = false;
    std::string method;
    std::string detail;
    std::vector<std::string> subcases;
};

// Exact check: T primitive in the host and T^t G T equal to the target Gram.
bool verify_primitive_representation(const Lattice& host, const Lattice& target, const RingMatrix& t);

DecisionCertificate primitively_represents(const Lattice& host, const Lattice& target, const DecideOptions& opts = {});

// Basis of the orthogonal complement of a unimodular primitive sublattice.
RingMatrix orthogonal_complement(const Lattice& l, const RingMatrix& t);

// Witness U with U^t G_b U = G_a.
DecisionCertificate isometric(const Lattice& a, const Lattice& b, const DecideOptions& opts = {});

// Necessary conditions for isometry; returns the name of the first invariant that differs.
std::optional<std::string> invariant_mismatch(const Lattice& a, const Lattice& b);

// Digit-wise column search alone (no refutation); exposed for tests.
struct ColumnSearchResult {
    std::optional<RingMatrix> witness;
    uint64_t nodes = 0;
    bool budget_hit = false;
};
ColumnSearchResult column_search(const Lattice& host, const RingMatrix& target, uint64_t node_budget);

}  // namespace qlat
