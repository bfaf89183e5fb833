#pragma once

#include <string>
#include <vector>

#include "qlat/universality.hpp"

namespace qlat {

struct ReplicateConfig {
    std::vector<std::string> statements;  // empty: all of known_statements()
    int t_max = 0;
    int max_scale = 1;
    bool extended = false;  // table rows E-G and t > 0
    int precision = 32;     // p-adic digits for the Z_2 computations
    DecideOptions decide;
    uint64_t max_candidates = 200000;
};

std::vector<std::string> known_statements();
// Accepts the aliases thm62 -> thm36 and thm66 -> thm48.
std::string canonical_statement(const std::string& id);

// One machine check; the statement is reproduced when every observed
// outcome equals the expected one.
struct CheckLine {
    std::string name;
    Summary expected = Summary::Verified;
    Summary observed = Summary::Inconclusive;
    std::string detail;
    bool ok() const { return expected == observed; }
};

struct StatementReport {
    std::string id;
    std::string title;
    Summary summary = Summary::Inconclusive;  // verified: reproduced, refuted: contradicted
    std::vector<CheckLine> checks;
    std::vector<PnUReport> pnu;
    double seconds = 0;
};

struct TableRow {
    std::string row;
    int t = 0;
    std::string ell, host, complement;
    int u = 0;
    std::string ell_prime;
    bool extended = false;
    Summary cancellation = Summary::Inconclusive;  // complement of ell_0 in L is isometric to M
    DecisionCertificate cert;                       // ell' into M
};

struct ReplicateReport {
    std::vector<StatementReport> statements;
    std::vector<TableRow> table;
    Summary overall = Summary::Inconclusive;
};

ReplicateReport replicate_paper(const ReplicateConfig& config);

}  // namespace qlat
