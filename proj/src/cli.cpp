#include "qlat/cli.hpp"

#include <CLI11.hpp>
#include <functional>
#include <ostream>
#include <sstream>

namespace qlat {

json ring_to_json(const RingSpec& r) {
    json j;
    j["ring"] = r.to_string();
    j["p"] = r.p;
    j["f"] = r.f;
    j["k"] = r.k;
    j["q"] = r.q;
    j["ord2"] = r.ord2;
    j["rho"] = r.rho.to_string();
    j["delta"] = r.delta.to_string();
    json m = json::array();
    for (int i = 0; i < r.f; ++i) m.push_back(std::to_string(r.modulus[i]));
    j["modulus"] = m;
    json reps = json::array();
    for (const auto& u : r.unit_reps) reps.push_back(u.to_string());
    j["unit_square_classes"] = reps;
    return j;
}

json matrix_to_json(const RingMatrix& m) { return json::parse(gram_to_string(m)); }

RingMatrix matrix_from_json(const Ring& r, const json& j) {
    if (!j.is_array() || j.empty()) throw Error("matrix JSON: expected a nonempty array of rows");
    const int rows = static_cast<int>(j.size()), cols = static_cast<int>(j[0].size());
    RingMatrix m = zeros(*r, rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) throw Error("matrix JSON: ragged rows");
        for (int c = 0; c < cols; ++c) {
            const json& e = j[i][c];
            m(i, c) = e.is_string() ? parse_element(*r, e.get<std::string>()) : r->from_int(e.get<int64_t>());
        }
    }
    return m;
}

json lattice_json(const Lattice& l) { return json::parse(lattice_to_json(l)); }

json certificate_to_json(const DecisionCertificate& c) {
    json j;
    j["verdict"] = to_string(c.verdict);
    j["method"] = c.method;
    j["detail"] = c.detail;
    j["threshold"] = c.threshold;
    j["level"] = c.level;
    j["exhausted"] = c.exhausted;
    j["nodes_explored"] = c.nodes_explored;
    j["states_explored"] = c.states_explored;
    j["subcases"] = c.subcases;
    j["witness"] = c.witness ? matrix_to_json(*c.witness) : json(nullptr);
    return j;
}

DecisionCertificate certificate_from_json(const Ring& r, const json& j) {
    DecisionCertificate c;
    const std::string v = j.at("verdict").get<std::string>();
    c.verdict = v == "yes" ? Verdict::Yes : v == "no" ? Verdict::No : Verdict::Unknown;
    c.method = j.at("method").get<std::string>();
    c.detail = j.at("detail").get<std::string>();
    c.threshold = j.at("threshold").get<int>();
    c.level = j.at("level").get<int>();
    c.exhausted = j.at("exhausted").get<bool>();
    c.nodes_explored = j.at("nodes_explored").get<uint64_t>();
    c.states_explored = j.at("states_explored").get<uint64_t>();
    c.subcases = j.at("subcases").get<std::vector<std::string>>();
    if (!j.at("witness").is_null()) c.witness = matrix_from_json(r, j.at("witness"));
    return c;
}

json witness_to_json(const EmbeddingWitness& w) {
    json j;
    j["host"] = lattice_json(w.host);
    j["target"] = lattice_json(w.target);
    j["matrix"] = matrix_to_json(w.matrix);
    j["provenance"] = w.provenance;
    return j;
}

json pnu_to_json(const PnUReport& rep) {
    json j;
    j["host"] = lattice_json(rep.host);
    j["n"] = rep.n;
    j["max_scale"] = rep.a;
    j["even_only"] = rep.even_only;
    j["strategy"] = to_string(rep.strategy);
    j["summary"] = to_string(rep.summary);
    j["note"] = rep.note;
    j["candidates"] = rep.candidates;
    j["constructive"] = rep.constructive;
    j["searched"] = rep.searched;
    json classes = json::array();
    for (const auto& c : rep.classes) {
        json k;
        k["name"] = c.name;
        k["gram"] = matrix_to_json(c.lattice.gram());
        k["verdict"] = to_string(c.verdict);
        k["route"] = c.route;
        k["level"] = c.level;
        k["detail"] = c.detail;
        k["witness"] = c.witness ? matrix_to_json(*c.witness) : json(nullptr);
        classes.push_back(k);
    }
    j["classes"] = classes;
    return j;
}

json replicate_to_json(const ReplicateReport& rep) {
    json j;
    j["overall"] = to_string(rep.overall);
    json st = json::array();
    for (const auto& s : rep.statements) {
        json e;
        e["id"] = s.id;
        e["title"] = s.title;
        e["summary"] = to_string(s.summary);
        e["seconds"] = s.seconds;
        json checks = json::array();
        for (const auto& c : s.checks)
            checks.push_back({{"name", c.name},
                              {"expected", to_string(c.expected)},
                              {"observed", to_string(c.observed)},
                              {"ok", c.ok()},
                              {"detail", c.detail}});
        e["checks"] = checks;
        json pnu = json::array();
        for (const auto& p : s.pnu) pnu.push_back(pnu_to_json(p));
        e["pnu"] = pnu;
        st.push_back(e);
    }
    j["statements"] = st;
    json table = json::array();
    for (const auto& r : rep.table)
        table.push_back({{"row", r.row},
                         {"t", r.t},
                         {"ell", r.ell},
                         {"L", r.host},
                         {"M", r.complement},
                         {"u", r.u},
                         {"ell_prime", r.ell_prime},
                         {"extended", r.extended},
                         {"cancellation", to_string(r.cancellation)},
                         {"certificate", certificate_to_json(r.cert)}});
    j["thm48_table"] = table;
    return j;
}

std::string padic_string(const RingElt& x) {
    if (x.is_zero()) return "0";
    const RingSpec& r = *x.ring();
    int v = x.valuation();
    RingElt u = x.shift_down(v).reduce(r.k - v);
    std::string us;
    if (r.f == 1) {
        int64_t c = static_cast<int64_t>(u.coeff(0));
        uint64_t mod = r.ppow[r.k - v];
        if (static_cast<uint64_t>(c) > mod / 2) c -= static_cast<int64_t>(mod);
        us = std::to_string(c);
    } else {
        us = "[" + u.to_string() + "]";
    }
    if (v == 0) return us;
    return us + "*" + std::to_string(r.p) + "^" + std::to_string(v);
}

std::string replicate_table(const ReplicateReport& rep) {
    std::ostringstream s;
    for (const auto& st : rep.statements) {
        s << st.id << "  " << to_string(st.summary) << "  (" << st.title << ", " << st.seconds << " s)\n";
        for (const auto& c : st.checks)
            s << "    [" << (c.ok() ? "ok" : "--") << "] " << c.name << ": " << to_string(c.observed)
              << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    }
    if (!rep.table.empty()) {
        s << "\nrow  t  ell                  L                          M                      u  ell'     verdict  "
             "cancellation\n";
        for (const auto& r : rep.table) {
            auto pad = [](std::string x, size_t w) { return x.size() >= w ? x + " " : x + std::string(w - x.size(), ' '); };
            s << pad(r.row, 5) << pad(std::to_string(r.t), 3) << pad(r.ell, 21) << pad(r.host, 27)
              << pad(r.complement, 23) << pad(std::to_string(r.u), 3) << pad(r.ell_prime, 9)
              << pad(to_string(r.cert.verdict), 9) << to_string(r.cancellation) << (r.extended ? "  (extended)" : "")
              << "\n";
        }
    }
    s << "overall: " << to_string(rep.overall) << "\n";
    return s.str();
}

int exit_code(Verdict v) { return v == Verdict::Yes ? 0 : v == Verdict::No ? 1 : 2; }

int exit_code(Summary s) { return s == Summary::Verified ? 0 : s == Summary::Inconclusive ? 2 : 1; }

namespace {

std::vector<RingElt> parse_vector(const Ring& r, const std::string& text) {
    std::string t = text;
    if (!t.empty() && t.front() == '[') t = t.substr(1, t.size() - 2);
    std::vector<RingElt> v;
    std::stringstream ss(t);
    std::string item;
    // For f > 1, coordinates are separated by ';' and coefficients by ','.
    char sep = r->f > 1 ? ';' : ',';
    while (std::getline(ss, item, sep)) v.push_back(parse_element(*r, item));
    return v;
}

struct Global {
    std::string ring = "2,1,32";
    uint64_t budget = 0;
    uint64_t max_classes = 200000;
    bool deterministic = false;
    std::string format = "json";
};

DecideOptions decide_options(const Global& g) {
    DecideOptions o;
    if (g.budget) o.node_budget = g.budget;
    return o;
}

void emit(std::ostream& out, const Global& g, json j, const std::string& table) {
    if (g.deterministic) j["deterministic"] = true;
    if (g.format == "table")
        out << table;
    else
        out << j.dump(2) << "\n";
}

std::string cert_table(const DecisionCertificate& c) {
    std::ostringstream s;
    s << "verdict: " << to_string(c.verdict) << "\nmethod: " << c.method << "\nthreshold: " << c.threshold
      << "\nlevel: " << c.level << "\n";
    if (!c.detail.empty()) s << "detail: " << c.detail << "\n";
    if (c.witness) s << "witness: " << gram_to_string(*c.witness) << "\n";
    return s.str();
}

template <typename T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + f(v[i]);
    return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quadratic lattices over p-adic integer rings"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--ring", g.ring, "p,f,k[,modulus coefficients]");
    app.add_option("--budget", g.budget, "node budget for the digit-wise search")->check(CLI::PositiveNumber);
    app.add_option("--max-classes", g.max_classes, "candidate limit for enumeration")->check(CLI::PositiveNumber);
    app.add_flag("--deterministic", g.deterministic, "record that the run is deterministic (it always is)");
    app.add_option("--format", g.format, "json or table")->check(CLI::IsMember({"json", "table"}));

    int code = 0;
    std::string gram, a_text, b_text, host_text, target_text;

    auto* ring_info = app.add_subcommand("ring-info", "ring parameters and unit square classes");

    auto* jordan = app.add_subcommand("jordan", "Jordan splitting");
    jordan->add_option("--gram", gram, "lattice")->required();

    auto* inv = app.add_subcommand("invariants", "quadratic space invariants");
    inv->add_option("--gram", gram, "lattice")->required();

    auto* iso = app.add_subcommand("isometric", "decide whether two lattices are isometric");
    iso->add_option("--a", a_text)->required();
    iso->add_option("--b", b_text)->required();

    auto* prim = app.add_subcommand("prim-rep", "decide primitive representation");
    prim->add_option("--host", host_text)->required();
    prim->add_option("--target", target_text)->required();

    int m = 3;
    bool all_values = false;
    auto* pv = app.add_subcommand("primitive-values", "Q(v) mod p^m over primitive v");
    pv->add_option("--gram", gram)->required();
    pv->add_option("--m", m)->check(CLI::Range(1, 20));
    pv->add_flag("--all", all_values, "all vectors rather than primitive ones");

    std::string lemma, value_text, alpha_text, eps_text, x_text;
    auto* embed = app.add_subcommand("embed", "explicit embeddings from the lemmas");
    embed->add_option("--lemma", lemma)->required()->check(CLI::IsMember({"3.1a", "4.1", "5.2", "6.4", "6.8"}));
    embed->add_option("--value", value_text, "3.1a: even value c");
    embed->add_option("--alpha", alpha_text, "5.2: alpha");
    embed->add_option("--eps", eps_text, "5.2: unit eps");
    embed->add_option("--gram", gram, "6.4: lattice L");
    embed->add_option("--x", x_text, "6.4: primitive vector with Q(x) in 2R");
    embed->add_option("--host", host_text, "4.1, 5.2, 6.8: host H^h + J");
    embed->add_option("--target", target_text, "4.1, 5.2, 6.8: target lattice");

    int rank = 1, max_scale = 0;
    bool even = false;
    auto* en = app.add_subcommand("enumerate", "isometry classes with bounded Jordan scales");
    en->add_option("--rank", rank)->required()->check(CLI::Range(1, 8));
    en->add_option("--max-scale", max_scale)->check(CLI::Range(0, 8));
    en->add_flag("--even", even);

    std::string strategy = "auto";
    auto* cp = app.add_subcommand("check-pnu", "bounded primitive n-universality check");
    cp->add_option("--host", host_text)->required();
    cp->add_option("--rank", rank)->required()->check(CLI::Range(1, 8));
    cp->add_option("--max-scale", max_scale)->check(CLI::Range(0, 8));
    cp->add_flag("--even", even);
    cp->add_option("--strategy", strategy)->check(CLI::IsMember({"auto", "constructive", "search"}));

    std::vector<std::string> statements;
    int t_max = 0;
    bool extended = false;
    int rep_scale = 1;
    auto* rp = app.add_subcommand("replicate", "re-verify the statements on universality");
    rp->add_option("--statements", statements)->delimiter(',');
    rp->add_option("--t-max", t_max)->check(CLI::Range(0, 6));
    rp->add_option("--max-scale", rep_scale)->check(CLI::Range(0, 4));
    rp->add_flag("--extended", extended, "also run the table rows E-G and t > 0");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "qlat: " << e.what() << "\n";
        return 2;
    }

    try {
        Ring r = parse_ring(g.ring);
        DecideOptions dopt = decide_options(g);
        auto lat = [&](const std::string& s) { return parse_lattice(r, s); };

        if (*ring_info) {
            json j = ring_to_json(*r);
            std::ostringstream t;
            t << "ring: " << r->to_string() << "\nq: " << r->q << "\nrho: " << r->rho.to_string()
              << "\ndelta: " << r->delta.to_string() << "\nunit square classes: "
              << join<RingElt>(r->unit_reps, [](const RingElt& u) { return padic_string(u); }) << "\n";
            emit(out, g, j, t.str());
        } else if (*jordan) {
            Lattice l = lat(gram);
            JordanSplitting js = jordan_split(l);
            json j;
            j["lattice"] = lattice_json(l);
            j["scales"] = js.scales();
            j["ranks"] = js.ranks();
            json blocks = json::array();
            std::vector<std::string> parity;
            for (const auto& b : js.blocks) {
                json e;
                e["scale"] = b.scale;
                e["rank"] = b.rank();
                e["even"] = b.even;
                e["gram"] = matrix_to_json(b.gram);
                e["two_signature"] = b.two_signature ? json(b.two_signature->to_string()) : json(nullptr);
                blocks.push_back(e);
                parity.push_back(b.even ? "even" : "odd");
            }
            j["blocks"] = blocks;
            j["basis_change"] = matrix_to_json(js.basis_change);
            std::ostringstream t;
            t << "scales: " << join<int>(js.scales(), [](const int& x) { return std::to_string(x); }) << "\n";
            t << "ranks: " << join<int>(js.ranks(), [](const int& x) { return std::to_string(x); }) << "\n";
            t << "parity: " << join<std::string>(parity, [](const std::string& x) { return x; }) << "\n";
            for (const auto& b : js.blocks)
                if (b.two_signature) t << "2-signature (scale " << b.scale << "): " << b.two_signature->to_string() << "\n";
            t << "basis: " << gram_to_string(js.basis_change) << "\n";
            emit(out, g, j, t.str());
        } else if (*inv) {
            Lattice l = lat(gram);
            SpaceInvariants s = witt_index(l, dopt);
            ScaleNormDisc snd = scale_norm_disc(l);
            json j;
            j["dim"] = s.dim;
            j["ord_det"] = l.ord_det();
            j["disc_class"] = s.disc_class.to_string();
            j["witt_index"] = s.witt_index;
            j["hyperbolic"] = s.hyperbolic;
            j["anisotropic_kernel_dim"] = s.anisotropic_kernel_dim;
            j["scale"] = snd.scale;
            j["norm"] = snd.norm;
            auto h = hasse_invariant(l);
            j["hasse"] = h ? json(*h) : json(nullptr);
            std::ostringstream t;
            t << "dim: " << s.dim << "\ndisc: " << padic_string(r->p_power(l.ord_det()) * s.disc_class)
              << "\nwitt index: " << s.witt_index << "\nhyperbolic: " << (s.hyperbolic ? "yes" : "no") << "\n";
            emit(out, g, j, t.str());
        } else if (*iso) {
            DecisionCertificate c = isometric(lat(a_text), lat(b_text), dopt);
            emit(out, g, certificate_to_json(c), cert_table(c));
            code = exit_code(c.verdict);
        } else if (*prim) {
            DecisionCertificate c = primitively_represents(lat(host_text), lat(target_text), dopt);
            emit(out, g, certificate_to_json(c), cert_table(c));
            code = exit_code(c.verdict);
        } else if (*pv) {
            Lattice l = lat(gram);
            ValueClassSet v = all_values ? value_set(l, m) : primitive_values(l, m);
            json j;
            j["m"] = v.m;
            j["threshold"] = v.threshold;
            json vals = json::array();
            std::string t;
            for (const auto& e : v.elements(*r)) {
                vals.push_back(e.to_string());
                t += (t.empty() ? "" : ",") + padic_string(e);
            }
            j["values"] = vals;
            emit(out, g, j, "values mod p^" + std::to_string(m) + ": " + t + "\n");
        } else if (*embed) {
            auto need = [&](const std::string& v, const char* name) {
                if (v.empty()) throw Error(std::string("embed --lemma ") + lemma + " needs --" + name);
            };
            json j;
            if (lemma == "3.1a") {
                need(value_text, "value");
                j = witness_to_json(embed_even_in_H(r, parse_element(*r, value_text)));
            } else if (lemma == "5.2" && !alpha_text.empty()) {
                need(eps_text, "eps");
                j = witness_to_json(embed_binary_unit(r, parse_element(*r, alpha_text), parse_element(*r, eps_text)));
            } else if (lemma == "6.4") {
                need(gram, "gram");
                need(x_text, "x");
                EusResult e = even_unimodular_sublattice(lat(gram), parse_vector(r, x_text), dopt);
                j["m"] = witness_to_json(e.m);
                j["m2"] = e.m2 ? witness_to_json(*e.m2) : json(nullptr);
                j["hypothesis"] = e.hypothesis;
                j["second_expected"] = e.second_expected;
                j["note"] = e.note;
            } else {
                need(host_text, "host");
                need(target_text, "target");
                CanonicalBlocks cb = canonical_blocks(lat(target_text), dopt);
                auto w = embed_by_lemmas(lat(host_text), cb.blocks, dopt);
                if (!w) {
                    err << "qlat: no lemma recipe applies to this host and target\n";
                    return 2;
                }
                // Back to the basis the target was given in.
                w->matrix = w->matrix * inverse(cb.basis);
                w->target = lat(target_text);
                check_witness(*w);
                j = witness_to_json(*w);
            }
            std::string t = j.contains("matrix") ? "matrix: " + j["matrix"].dump() + "\nprovenance: " +
                                                       j["provenance"].get<std::string>() + "\n"
                                                 : j.dump(2) + "\n";
            emit(out, g, j, t);
        } else if (*en) {
            EnumerateOptions eo;
            eo.even_only = even;
            eo.max_candidates = g.max_classes;
            eo.decide = dopt;
            ClassList list = enumerate_classes(r, rank, max_scale, eo);
            json j;
            j["ring"] = r->to_string();
            j["rank"] = rank;
            j["max_scale"] = max_scale;
            j["even_only"] = even;
            j["provenance"] = list.provenance;
            j["candidates"] = list.candidates;
            j["unresolved_pairs"] = list.unresolved_pairs;
            json ls = json::array();
            std::string t;
            for (size_t i = 0; i < list.lattices.size(); ++i) {
                ls.push_back({{"name", list.names[i]}, {"gram", matrix_to_json(list.lattices[i].gram())}});
                t += list.names[i] + "\n";
            }
            j["classes"] = ls;
            j["count"] = list.lattices.size();
            emit(out, g, j, t + std::to_string(list.lattices.size()) + " classes\n");
        } else if (*cp) {
            PnUOptions po;
            po.even_only = even;
            po.max_candidates = g.max_classes;
            po.decide = dopt;
            po.strategy = strategy == "constructive" ? Strategy::Constructive
                          : strategy == "search"     ? Strategy::Search
                                                     : Strategy::Auto;
            PnUReport rep = check_pnu(lat(host_text), rank, max_scale, po);
            std::ostringstream t;
            for (const auto& c : rep.classes) t << c.name << ": " << to_string(c.verdict) << " (" << c.route << ")\n";
            t << "summary: " << to_string(rep.summary) << (rep.note.empty() ? "" : " (" + rep.note + ")") << "\n";
            emit(out, g, pnu_to_json(rep), t.str());
            code = exit_code(rep.summary);
        } else if (*rp) {
            ReplicateConfig rc;
            rc.statements = statements;
            rc.t_max = t_max;
            rc.max_scale = rep_scale;
            rc.extended = extended || t_max > 0;
            rc.decide = dopt;
            rc.max_candidates = g.max_classes;
            ReplicateReport rep = replicate_paper(rc);
            emit(out, g, replicate_to_json(rep), replicate_table(rep));
            code = exit_code(rep.overall);
        }
    } catch (const std::exception& e) {
        err << "qlat: " << e.what() << "\n";
        return 2;
    }
    return code;
}

}  // namespace qlat
