#include "qlat/universality.hpp"

namespace qlat {

std::string to_string(Summary s) {
    switch (s) {
        case Summary::Verified: return "verified";
        case Summary::Refuted: return "refuted";
        case Summary::FailsNecessary: return "fails-necessary";
        default: return "inconclusive";
    }
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Constructive: return "constructive";
        case Strategy::Search: return "search";
        default: return "auto";
    }
}

PnUReport check_pnu(const Lattice& host, int n, int a, const PnUOptions& opts) {
    PnUReport rep;
    rep.host = host;
    rep.n = n;
    rep.a = a;
    rep.even_only = opts.even_only;
    rep.strategy = opts.strategy;
    if (!opts.even_only) {
        NecessaryCheck nc = check_necessary_pnu(host, n, opts.decide);
        if (!nc.pass) {
            rep.summary = Summary::FailsNecessary;
            rep.note = nc.reason;
            return rep;
        }
        rep.note = nc.reason;
    }
    EnumerateOptions eo;
    eo.even_only = opts.even_only;
    eo.max_candidates = opts.max_candidates;
    eo.decide = opts.decide;
    ClassList list = enumerate_classes(host.ring_ptr(), n, a, eo);
    rep.candidates = list.candidates;
    bool any_no = false, all_yes = true;
    for (size_t i = 0; i < list.lattices.size(); ++i) {
        ClassOutcome out;
        out.name = list.names[i];
        out.lattice = list.lattices[i];
        if (opts.strategy != Strategy::Search) {
            for (size_t k = 0; k < list.members[i].size() && out.verdict != Verdict::Yes; ++k) {
                auto w = embed_by_lemmas(host, list.members[i][k].blocks, opts.decide);
                if (!w) continue;
                RingMatrix t = w->matrix * inverse(list.member_maps[i][k]);
                if (!verify_primitive_representation(host, out.lattice, t))
                    throw Error("internal: constructive witness does not transfer to the class representative");
                out.verdict = Verdict::Yes;
                out.witness = t;
                out.route = "constructive:" + w->provenance;
                if (k > 0) out.detail = "via the isometric decomposition " + list.members[i][k].name;
                ++rep.constructive;
            }
        }
        if (out.verdict != Verdict::Yes && opts.strategy != Strategy::Constructive) {
            DecisionCertificate cert = primitively_represents(host, out.lattice, opts.decide);
            out.verdict = cert.verdict;
            out.witness = cert.witness;
            out.level = cert.level;
            out.route = "search:" + cert.method;
            out.detail = cert.detail;
            ++rep.searched;
        }
        if (out.verdict == Verdict::No) any_no = true;
        if (out.verdict != Verdict::Yes) all_yes = false;
        rep.classes.push_back(std::move(out));
    }
    if (list.unresolved_pairs > 0)
        rep.note += (rep.note.empty() ? "" : "; ") + std::to_string(list.unresolved_pairs) +
                    " isometry tests between candidates ended unknown";
    rep.summary = any_no ? Summary::Refuted : all_yes ? Summary::Verified : Summary::Inconclusive;
    return rep;
}

ComplementRefutation refute_pnu_via_complement(const Lattice& l, const Lattice& split_target,
                                               const Lattice& expected_complement, int window,
                                               const DecideOptions& opts) {
    const RingSpec& r = l.ring();
    ComplementRefutation out;
    DecisionCertificate sc = primitively_represents(l, split_target, opts);
    if (sc.verdict != Verdict::Yes) {
        out.detail = "split target not found in L (" + to_string(sc.verdict) + ")";
        return out;
    }
    out.split = *sc.witness;
    RingMatrix cb = orthogonal_complement(l, out.split);
    out.complement = Lattice(l.ring_ptr(), congruent(l.gram(), cb));
    out.complement_iso = isometric(out.complement, expected_complement, opts);
    if (out.complement_iso.verdict != Verdict::Yes) {
        out.detail = "complement is not isometric to the expected lattice (" + to_string(out.complement_iso.verdict) +
                     ": " + out.complement_iso.detail + ")";
        if (out.complement_iso.verdict == Verdict::No) out.summary = Summary::Inconclusive;
        return out;
    }
    for (int a = 0; a <= window; ++a) {
        for (const auto& eps : r.unit_reps) {
            RingElt c = r.p_power(a) * eps;
            Lattice target = diagonal(l.ring_ptr(), std::vector<RingElt>{c});
            DecisionCertificate vc = primitively_represents(out.complement, target, opts);
            out.scanned.push_back(c.to_string() + ": " + to_string(vc.verdict));
            if (vc.verdict != Verdict::No) continue;
            out.value = c;
            out.value_cert = vc;
            out.witness_lattice = orthogonal_sum(split_target, target);
            out.summary = Summary::Refuted;
            out.detail = "the complement misses " + c.to_string() + " (exhausted at level " + std::to_string(vc.level) + ")";
            return out;
        }
    }
    out.detail = "every value 2^a eps with a <= " + std::to_string(window) + " is represented by the complement";
    return out;
}

}  // namespace qlat
