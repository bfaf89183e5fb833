#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlat/constructions.hpp"
#include "qlat/spaces.hpp"

namespace qlat {

enum class Strategy { Auto, Constructive, Search };
enum class Summary { Verified, Refuted, Inconclusive, FailsNecessary };
std::string to_string(Summary s);
std::string to_string(Strategy s);

struct ClassOutcome {
    std::string name;
    Lattice lattice;
    Verdict verdict = Verdict::Unknown;
    std::string route;  // "constructive:<lemma tags>" or "search:<method>"
    std::optional<RingMatrix> witness;
    int level = 0;
    std::string detail;
};

struct PnUOptions {
    Strategy strategy = Strategy::Auto;
    bool even_only = false;
    uint64_t max_candidates = 200000;
    DecideOptions decide;
};

struct PnUReport {
    Lattice host;
    int n = 0;
    int a = 0;
    bool even_only = false;
    Strategy strategy = Strategy::Auto;
    std::vector<ClassOutcome> classes;
    Summary summary = Summary::Inconclusive;
    std::string statement;
    std::string note;
    int constructive = 0;
    int searched = 0;
    int candidates = 0;
};

PnUReport check_pnu(const Lattice& host, int n, int a, const PnUOptions& opts = {});

struct ComplementRefutation {
    Summary summary = Summary::Inconclusive;
    RingMatrix split;  // split_target inside L
    Lattice complement;
    DecisionCertificate complement_iso;  // complement ~ expected_complement
    std::optional<RingElt> value;        // 2^a eps missed by the complement
    DecisionCertificate value_cert;
    std::optional<Lattice> witness_lattice;  // split_target + <value>
    std::vector<std::string> scanned;
    std::string detail;
};

ComplementRefutation refute_pnu_via_complement(const Lattice& l, const Lattice& split_target,
                                               const Lattice& expected_complement, int window = 6,
                                               const DecideOptions& opts = {});

}  // namespace qlat
