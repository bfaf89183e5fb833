#include "qlat/replicate.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>

namespace qlat {

namespace {

std::string pow2(int e) { return std::to_string(1ll << e); }

Summary yes_no(Verdict v) {
    if (v == Verdict::Yes) return Summary::Verified;
    if (v == Verdict::No) return Summary::Refuted;
    return Summary::Inconclusive;
}

// Precision for decisions with host h over Z_2: threshold + ord det, plus slack
// for the rescaling inside decide.
int digits_for(const Ring& r, const std::string& host) {
    Lattice h = parse_lattice(r, host);
    return threshold_exponent(h) + h.ord_det() + 2;
}

Ring z2_ring(int at_least, const ReplicateConfig& c) { return make_ring(2, 1, std::max(at_least, c.precision)); }

std::string set_to_string(const std::vector<uint64_t>& codes) {
    std::string s;
    for (size_t i = 0; i < codes.size(); ++i) s += (i ? "," : "") + std::to_string(codes[i]);
    return s;
}

PnUOptions pnu_options(const ReplicateConfig& c, Strategy s, bool even) {
    PnUOptions o;
    o.strategy = s;
    o.even_only = even;
    o.max_candidates = c.max_candidates;
    o.decide = c.decide;
    return o;
}

CheckLine pnu_line(const std::string& name, const PnUReport& rep, Summary expected) {
    CheckLine l;
    l.name = name;
    l.expected = expected;
    l.observed = rep.summary;
    l.detail = std::to_string(rep.classes.size()) + " classes, " + std::to_string(rep.constructive) +
               " constructive, " + std::to_string(rep.searched) + " searched";
    if (!rep.note.empty()) l.detail += "; " + rep.note;
    return l;
}

// ---------------------------------------------------------------- statements

void lem51(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "primitive values of <1,-1>";
    {
        Ring r = z2_ring(8, c);
        ValueClassSet got = primitive_values(parse_lattice(r, "diag:1,-1"), 5);
        std::vector<uint64_t> want;
        for (uint64_t v = 0; v < 32; ++v)
            if (v % 2 == 1 || v % 8 == 0) want.push_back(v);
        rep.checks.push_back({"Z_2, mod 32: units and 8Z_2", Summary::Verified,
                              got.codes == want ? Summary::Verified : Summary::Refuted,
                              "values " + set_to_string(got.codes)});
    }
    {
        Ring r = make_ring(2, 2, 12);
        ValueClassSet got = primitive_values(parse_lattice(r, "diag:1,-1"), 5);
        std::vector<uint64_t> want;
        for (uint64_t code = 0; code < 1024; ++code) {
            uint64_t c0 = code % 32, c1 = code / 32;
            bool unit = (c0 % 2) || (c1 % 2);
            bool in4 = c0 % 4 == 0 && c1 % 4 == 0;
            if (unit || in4) want.push_back(code);
        }
        rep.checks.push_back({"W(F_4), mod 2^5: units and 4R", Summary::Verified,
                              got.codes == want ? Summary::Verified : Summary::Refuted,
                              std::to_string(got.codes.size()) + " residues attained, " + std::to_string(want.size()) +
                                  " expected"});
    }
}

void lem31(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "H^n over nondyadic rings, constructive route only";
    for (int p : {3, 5}) {
        Ring r = make_ring(p, 1, 12);
        for (int n : {1, 2}) {
            Lattice host = parse_lattice(r, "(H)^" + std::to_string(n));
            PnUReport pr = check_pnu(host, n, c.max_scale, pnu_options(c, Strategy::Constructive, false));
            CheckLine l = pnu_line("Z_" + std::to_string(p) + ", H^" + std::to_string(n) + ", n = " +
                                       std::to_string(n) + ", a = " + std::to_string(c.max_scale),
                                   pr, Summary::Verified);
            rep.checks.push_back(l);
            rep.pnu.push_back(std::move(pr));
        }
    }
}

void lem41(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "H^2 represents every even binary lattice";
    for (int f : {1, 2}) {
        Ring r = make_ring(2, f, f == 1 ? c.precision : 16);
        PnUReport pr = check_pnu(parse_lattice(r, "(H)^2"), 2, c.max_scale, pnu_options(c, Strategy::Auto, true));
        rep.checks.push_back(pnu_line(std::string(f == 1 ? "Z_2" : "W(F_4)") + ", even classes, a = " +
                                          std::to_string(c.max_scale),
                                      pr, Summary::Verified));
        rep.pnu.push_back(std::move(pr));
    }
}

void lem52(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "H + <eps> ~ <1,-1,eps>, and H^n + J";
    for (int f : {1, 2}) {
        Ring r = make_ring(2, f, f == 1 ? c.precision : 16);
        for (const auto& eps : r->unit_reps) {
            Lattice a = orthogonal_sum(parse_lattice(r, "H"), diagonal(r, std::vector<RingElt>{eps}));
            Lattice b = diagonal(r, std::vector<RingElt>{r->one(), -r->one(), eps});
            DecisionCertificate cert = isometric(a, b, c.decide);
            rep.checks.push_back({std::string(f == 1 ? "Z_2" : "W(F_4)") + ": H + <" + eps.to_string() + ">",
                                  Summary::Verified, yes_no(cert.verdict), cert.method});
        }
    }
    Ring r = z2_ring(0, c);
    PnUReport pr = check_pnu(parse_lattice(r, "(H)^2+diag:1"), 2, 1, pnu_options(c, Strategy::Auto, false));
    rep.checks.push_back(pnu_line("Z_2, H^2 + <1>, n = 2, a = 1", pr, Summary::Verified));
    rep.pnu.push_back(std::move(pr));
}

void thm54(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "H^(n-1) + <1,-1> over W(F_4)";
    Ring r = make_ring(2, 2, 16);
    PnUReport pr = check_pnu(parse_lattice(r, "(H)^2+diag:1,-1"), 3, 1, pnu_options(c, Strategy::Auto, false));
    rep.checks.push_back(pnu_line("W(F_4), n = 3, a = 1", pr, Summary::Verified));
    rep.pnu.push_back(std::move(pr));
}

void thm36(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "no rank-6 Z_2-lattice is primitively 3-universal";
    struct Case {
        const char* tag;
        const char* host;
        const char* split;
        const char* complement;
    };
    const Case cases[] = {
        {"A", "(H)^2+diag:1,-1", "A", "diag:1,1,1,5"},   {"B", "(H)^2+diag:-1,4", "A", "diag:5,1,1,4"},
        {"C", "H+diag:1,-1,2,-2", "diag:1,3", "diag:1,3,2,-2"}, {"D", "H+diag:1,-1,-2,8", "diag:1,3", "diag:1,3,-2,8"},
        {"E", "H+diag:-1,2,-2,4", "A", "diag:5,2,2,4"},  {"F", "H+diag:-1,-2,4,8", "diag:1,3", "diag:3,-2,4,8"},
    };
    for (const auto& k : cases) {
        Ring r = z2_ring(digits_for(make_ring(2, 1, 40), k.host), c);
        ComplementRefutation cr = refute_pnu_via_complement(parse_lattice(r, k.host), parse_lattice(r, k.split),
                                                            parse_lattice(r, k.complement), 6, c.decide);
        std::string detail = cr.detail;
        if (cr.witness_lattice) detail += "; witness " + std::string(k.split) + " + <" + cr.value->to_string() + ">";
        rep.checks.push_back({std::string("(") + k.tag + ") " + k.host + ", complement of " + k.split + " ~ " +
                                  k.complement,
                              Summary::Refuted, cr.summary, detail});
    }
}

void lem63(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "A + <1,-1> misses 4 mod 8";
    Ring r = z2_ring(0, c);
    Lattice n = parse_lattice(r, "A+diag:1,-1");
    bool all_no = true;
    std::string levels;
    for (const auto& u : r->unit_reps) {
        DecisionCertificate cert =
            primitively_represents(n, diagonal(r, std::vector<RingElt>{r->from_int(4) * u}), c.decide);
        if (cert.verdict != Verdict::No) all_no = false;
        levels += (levels.empty() ? "" : ", ") + (r->from_int(4) * u).to_string() + ": " + to_string(cert.verdict) +
                  " at level " + std::to_string(cert.level);
    }
    rep.checks.push_back(
        {"(a) decide on 4u for every unit class", Summary::Refuted, all_no ? Summary::Refuted : Summary::Inconclusive,
         levels});
    ValueClassSet vals = primitive_values(n, 4);
    bool hit = std::any_of(vals.codes.begin(), vals.codes.end(), [](uint64_t v) { return v % 8 == 4; });
    rep.checks.push_back({"(a) primitive values mod 16 avoid 4 mod 8", Summary::Refuted,
                          hit ? Summary::Verified : Summary::Refuted, "values " + set_to_string(vals.codes)});
    Lattice m = parse_lattice(r, "A+diag:4,-4");
    ValueClassSet vm = primitive_values(m, 5);
    bool hit16 = std::find(vm.codes.begin(), vm.codes.end(), 16) != vm.codes.end();
    rep.checks.push_back({"(b) s = 1, M = A + <4,-4>: 16 mod 32 is not a primitive value", Summary::Refuted,
                          hit16 ? Summary::Verified : Summary::Refuted, "values " + set_to_string(vm.codes)});
}

struct CancellationRow {
    const char* tag;
    bool ell0_is_a;  // ell_0 = A, otherwise <1,3>
    int ell_shift;   // ell = ell_0 + 2^(2t+ell_shift) A
    int h_planes;    // L = H^h + <...>
    std::vector<int64_t> l_diag;  // last entry is multiplied by 2^(2t)
    std::vector<int64_t> m_diag;  // M = H + <...>, last entry times 2^(2t)
    int u;
};

const std::vector<CancellationRow>& cancellation_rows() {
    static const std::vector<CancellationRow> rows = {
        {"A", true, 1, 3, {-1, 1}, {1, 1, 5, 1}, 0},       {"B", false, 2, 2, {1, -1, -2, 2}, {1, 1, 10, 2}, 1},
        {"C", true, 3, 2, {-1, -1, 4, 4}, {1, 1, 20, 4}, 2}, {"D", true, 3, 2, {-1, 2, -2, 4}, {5, 2, 2, 4}, 2},
        {"E", false, 4, 2, {-1, -2, 4, 8}, {1, 10, 4, 8}, 3}, {"F", true, 5, 2, {-1, -2, 8, 16}, {5, 2, 8, 16}, 4},
        {"G", true, 5, 2, {-1, 2, -8, 16}, {1, 6, -8, 16}, 4},
    };
    return rows;
}

std::string diag_text(const std::vector<int64_t>& d, int t) {
    std::string s = "diag:";
    for (size_t i = 0; i < d.size(); ++i) {
        int64_t v = d[i];
        if (i + 1 == d.size()) v <<= 2 * t;
        s += (i ? "," : "") + std::to_string(v);
    }
    return s;
}

void thm48(const ReplicateConfig& c, StatementReport& rep, std::vector<TableRow>& table) {
    rep.title = "no rank-8 Z_2-lattice is primitively 4-universal";
    for (int t = 0; t <= c.t_max; ++t) {
        for (const auto& row : cancellation_rows()) {
            bool extended = t > 0 || row.tag[0] >= 'E';
            if (extended && !c.extended) continue;
            TableRow out;
            out.row = row.tag;
            out.t = t;
            out.u = row.u;
            out.extended = extended;
            std::string ell0 = row.ell0_is_a ? "A" : "diag:1,3";
            out.ell = ell0 + "+A:" + pow2(2 * t + row.ell_shift);
            out.host = "(H)^" + std::to_string(row.h_planes) + "+" + diag_text(row.l_diag, t);
            out.complement = "H+" + diag_text(row.m_diag, t);
            out.ell_prime = "A:" + pow2(2 * t + row.u + 1);
            Ring probe = make_ring(2, 1, 61);
            int need = std::max(digits_for(probe, out.complement), digits_for(probe, out.host));
            Ring r = z2_ring(need, c);
            Lattice l = parse_lattice(r, out.host), m = parse_lattice(r, out.complement);
            out.cert = primitively_represents(m, parse_lattice(r, out.ell_prime), c.decide);
            try {
                DecisionCertificate split = primitively_represents(l, parse_lattice(r, ell0), c.decide);
                if (split.verdict == Verdict::Yes) {
                    RingMatrix cb = orthogonal_complement(l, *split.witness);
                    Lattice comp(r, congruent(l.gram(), cb));
                    out.cancellation = yes_no(isometric(comp, m, c.decide).verdict);
                }
            } catch (const Error&) {
                out.cancellation = Summary::Inconclusive;
            }
            std::string name = std::string("(") + row.tag + ") t = " + std::to_string(t);
            rep.checks.push_back({name + ": " + out.ell_prime + " into " + out.complement, Summary::Refuted,
                                  yes_no(out.cert.verdict),
                                  out.cert.method + ", level " + std::to_string(out.cert.level) + " of threshold " +
                                      std::to_string(out.cert.threshold) + (extended ? " (extended)" : "")});
            rep.checks.push_back({name + ": complement of " + ell0 + " in " + out.host + " ~ M", Summary::Verified,
                                  out.cancellation, ""});
            table.push_back(std::move(out));
        }
    }
}

void lem69(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "H^3 + <1,-1> and the rank-4 exception A + 2A";
    Ring r = z2_ring(0, c);
    PnUReport pr = check_pnu(parse_lattice(r, "(H)^3+diag:1,-1"), 4, 1, pnu_options(c, Strategy::Auto, true));
    Lattice exc = parse_lattice(r, "A+A:2");
    int failures = 0, exc_no = 0, exc_classes = 0, searched_yes = 0;
    for (const auto& k : pr.classes) {
        bool is_exc = !invariant_mismatch(k.lattice, exc) && isometric(k.lattice, exc, c.decide).verdict == Verdict::Yes;
        if (is_exc) {
            ++exc_classes;
            if (k.verdict == Verdict::No) ++exc_no;
        } else {
            if (k.verdict != Verdict::Yes) ++failures;
            if (k.verdict == Verdict::Yes && k.route.rfind("constructive", 0) != 0) ++searched_yes;
        }
    }
    rep.checks.push_back({"even rank-4 classes at a = 1 other than A + 2A, constructively", Summary::Verified,
                          failures == 0 && searched_yes == 0 ? Summary::Verified
                          : failures > 0                     ? Summary::Refuted
                                                             : Summary::Inconclusive,
                          std::to_string(pr.classes.size()) + " classes, " + std::to_string(failures) +
                              " not represented, " + std::to_string(searched_yes) + " needed search"});
    rep.checks.push_back({"A + 2A is refuted with an exhaustion certificate", Summary::Refuted,
                          exc_classes == 1 && exc_no == 1 ? Summary::Refuted : Summary::Inconclusive, ""});
    rep.pnu.push_back(std::move(pr));
    if (c.extended) {
        PnUReport all = check_pnu(parse_lattice(r, "(H)^3+diag:1,-1"), 4, 1, pnu_options(c, Strategy::Auto, false));
        int bad = 0;
        for (const auto& k : all.classes)
            if (k.verdict != Verdict::Yes &&
                !(invariant_mismatch(k.lattice, exc) == std::nullopt &&
                  isometric(k.lattice, exc, c.decide).verdict == Verdict::Yes))
                ++bad;
        rep.checks.push_back({"extended: all rank-4 classes at a = 1 except A + 2A", Summary::Verified,
                              bad == 0 ? Summary::Verified : Summary::Refuted,
                              std::to_string(all.classes.size()) + " classes"});
        rep.pnu.push_back(std::move(all));
    }
}

void final_thm(const ReplicateConfig& c, StatementReport& rep) {
    rep.title = "rank-5 step: A + 2A + <2^a eps> inside H^4 + <1,-1>";
    Ring r = z2_ring(0, c);
    Lattice host = parse_lattice(r, "(H)^4+diag:1,-1");
    for (int e : {1, 3, 5, 7}) {
        const std::string es = std::to_string(e);
        std::pair<std::string, std::string> pairs[] = {
            {"A+A:2+diag:" + std::to_string(4 * e), "A+H:2+diag:" + std::to_string(20 * e)},
            {"A+A:2+diag:" + std::to_string(2 * e), "H+A:2+diag:" + std::to_string(10 * e)},
        };
        for (const auto& [a, b] : pairs) {
            DecisionCertificate cert = isometric(parse_lattice(r, a), parse_lattice(r, b), c.decide);
            rep.checks.push_back({a + " ~ " + b, Summary::Verified, yes_no(cert.verdict), cert.method});
            Lattice lb = parse_lattice(r, b);
            CanonicalBlocks cb = canonical_blocks(lb, c.decide);
            auto w = embed_by_lemmas(host, cb.blocks, c.decide);
            rep.checks.push_back({b + " into H^4 + <1,-1> by the lemmas", Summary::Verified,
                                  w ? Summary::Verified : Summary::Inconclusive, w ? w->provenance : "no plan"});
        }
    }
}

using Runner = std::function<void(const ReplicateConfig&, StatementReport&, std::vector<TableRow>&)>;

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> m = {
        {"lem51", [](auto& c, auto& r, auto&) { lem51(c, r); }},
        {"lem31", [](auto& c, auto& r, auto&) { lem31(c, r); }},
        {"lem41", [](auto& c, auto& r, auto&) { lem41(c, r); }},
        {"lem52", [](auto& c, auto& r, auto&) { lem52(c, r); }},
        {"thm54", [](auto& c, auto& r, auto&) { thm54(c, r); }},
        {"thm36", [](auto& c, auto& r, auto&) { thm36(c, r); }},
        {"lem63", [](auto& c, auto& r, auto&) { lem63(c, r); }},
        {"thm48", [](auto& c, auto& r, auto& t) { thm48(c, r, t); }},
        {"lem69", [](auto& c, auto& r, auto&) { lem69(c, r); }},
        {"final", [](auto& c, auto& r, auto&) { final_thm(c, r); }},
    };
    return m;
}

}  // namespace

std::vector<std::string> known_statements() {
    return {"lem51", "lem31", "lem41", "lem52", "thm54", "thm36", "lem63", "thm48", "lem69", "final"};
}

std::string canonical_statement(const std::string& id) {
    if (id == "thm62") return "thm36";
    if (id == "thm66") return "thm48";
    auto known = known_statements();
    if (std::find(known.begin(), known.end(), id) == known.end()) throw Error("unknown statement '" + id + "'");
    return id;
}

ReplicateReport replicate_paper(const ReplicateConfig& config) {
    ReplicateReport out;
    std::vector<std::string> ids;
    for (const auto& s : config.statements.empty() ? known_statements() : config.statements) {
        std::string id = canonical_statement(s);
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    bool all = true, contradicted = false;
    for (const auto& id : ids) {
        StatementReport rep;
        rep.id = id;
        auto t0 = std::chrono::steady_clock::now();
        try {
            runners().at(id)(config, rep, out.table);
        } catch (const BudgetError& e) {
            rep.checks.push_back({"budget", Summary::Verified, Summary::Inconclusive, e.what()});
        } catch (const PrecisionError& e) {
            rep.checks.push_back({"precision", Summary::Verified, Summary::Inconclusive, e.what()});
        }
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = !rep.checks.empty(), bad = false;
        for (const auto& l : rep.checks) {
            if (!l.ok()) ok = false;
            if (l.observed != Summary::Inconclusive && !l.ok()) bad = true;
        }
        rep.summary = ok ? Summary::Verified : bad ? Summary::Refuted : Summary::Inconclusive;
        if (!ok) all = false;
        if (bad) contradicted = true;
        out.statements.push_back(std::move(rep));
    }
    out.overall = all ? Summary::Verified : contradicted ? Summary::Refuted : Summary::Inconclusive;
    return out;
}

}  // namespace qlat
