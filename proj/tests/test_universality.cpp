#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlat/universality.hpp"

using namespace qlat;

namespace {

PnUOptions with(Strategy s, bool even = false) {
    PnUOptions o;
    o.strategy = s;
    o.even_only = even;
    return o;
}

void check_witnesses(const PnUReport& rep) {
    for (const auto& c : rep.classes) {
        if (c.verdict != Verdict::Yes) continue;
        REQUIRE(c.witness);
        CHECK(verify_primitive_representation(rep.host, c.lattice, *c.witness));
    }
}

}  // namespace

TEST_CASE("H^2 over Z_3 is primitively 2-universal up to scale 3") {
    Ring r = make_ring(3, 1, 12);
    PnUReport rep = check_pnu(power(hyperbolic(r), 2), 2, 1);
    CHECK(rep.summary == Summary::Verified);
    CHECK(rep.classes.size() == 8);
    check_witnesses(rep);
}

TEST_CASE("H^2 + <1> over Z_2 is primitively 2-universal up to scale 2") {
    Ring r = make_ring(2, 1, 24);
    PnUReport rep = check_pnu(parse_lattice(r, "(H)^2+diag:1"), 2, 1);
    CHECK(rep.summary == Summary::Verified);
    check_witnesses(rep);
}

TEST_CASE("H^3 misses odd ternary lattices") {
    Ring r = make_ring(2, 1, 20);
    PnUReport rep = check_pnu(power(hyperbolic(r), 3), 3, 0);
    CHECK(rep.summary == Summary::Refuted);
    bool odd_refuted = false;
    for (const auto& c : rep.classes)
        if (c.verdict == Verdict::No && !c.lattice.is_even()) odd_refuted = true;
    CHECK(odd_refuted);
    // Restricted to even targets, H^3 has no such obstruction.
    PnUReport even = check_pnu(power(hyperbolic(r), 3), 3, 0, with(Strategy::Auto, true));
    CHECK(even.summary == Summary::Verified);
    check_witnesses(even);
}

TEST_CASE("monotonicity in the scale bound") {
    Ring r = make_ring(2, 1, 24);
    Lattice host = parse_lattice(r, "(H)^2+diag:1");
    PnUReport a0 = check_pnu(host, 2, 0), a1 = check_pnu(host, 2, 1);
    CHECK(a0.classes.size() <= a1.classes.size());
    if (a1.summary == Summary::Verified) CHECK(a0.summary == Summary::Verified);

    Lattice weak = parse_lattice(r, "H+diag:1,-1");
    PnUReport w0 = check_pnu(weak, 2, 0), w1 = check_pnu(weak, 2, 1);
    if (w0.summary == Summary::Refuted) CHECK(w1.summary == Summary::Refuted);
    CHECK(w1.summary != Summary::Verified);
}

TEST_CASE("constructive and search strategies agree") {
    Ring r = make_ring(2, 1, 24);
    for (const char* host : {"(H)^2+diag:1", "(H)^2"}) {
        Lattice l = parse_lattice(r, host);
        PnUReport a = check_pnu(l, 2, 0, with(Strategy::Constructive));
        PnUReport b = check_pnu(l, 2, 0, with(Strategy::Search));
        CAPTURE(host);
        if (a.summary != Summary::Inconclusive && b.summary != Summary::Inconclusive) CHECK(a.summary == b.summary);
        CHECK(b.summary != Summary::Inconclusive);
        check_witnesses(a);
        check_witnesses(b);
    }
    Ring z3 = make_ring(3, 1, 12);
    PnUReport c = check_pnu(power(hyperbolic(z3), 2), 2, 1, with(Strategy::Constructive));
    PnUReport s = check_pnu(power(hyperbolic(z3), 2), 2, 1, with(Strategy::Search));
    CHECK(c.summary == Summary::Verified);
    CHECK(s.summary == Summary::Verified);
    CHECK(c.constructive == 8);
}

TEST_CASE("hosts failing the necessary conditions are never verified") {
    Ring r = make_ring(2, 1, 20);
    for (const char* host : {"diag:1,1,1,1", "H+A", "A+diag:1,-1"}) {
        Lattice l = parse_lattice(r, host);
        int n = l.rank() / 2;
        NecessaryCheck nc = check_necessary_pnu(l, n);
        PnUReport rep = check_pnu(l, n, 0);
        CAPTURE(host);
        if (!nc.pass) CHECK(rep.summary != Summary::Verified);
    }
    PnUReport four = check_pnu(parse_lattice(r, "diag:1,1,1,1"), 1, 0);
    CHECK((four.summary == Summary::FailsNecessary || four.summary == Summary::Refuted));
}

TEST_CASE("refutation through the complement of a split lattice") {
    Ring r = make_ring(2, 1, 32);
    ComplementRefutation a = refute_pnu_via_complement(parse_lattice(r, "(H)^2+diag:1,-1"), anisotropic(r),
                                                       parse_lattice(r, "diag:1,1,1,5"));
    CHECK(a.summary == Summary::Refuted);
    REQUIRE(a.value);
    REQUIRE(a.witness_lattice);
    CHECK(a.value_cert.verdict == Verdict::No);
    CHECK(a.complement_iso.verdict == Verdict::Yes);
    // The witness itself must be missed by the host.
    auto direct = primitively_represents(parse_lattice(r, "(H)^2+diag:1,-1"), *a.witness_lattice);
    CHECK(direct.verdict == Verdict::No);

    ComplementRefutation c = refute_pnu_via_complement(parse_lattice(r, "H+diag:1,-1,2,-2"),
                                                       parse_lattice(r, "diag:1,3"), parse_lattice(r, "diag:1,3,2,-2"));
    CHECK(c.summary == Summary::Refuted);

    // In H^2 the complement of A is again A. It misses every odd value, and H^2 being
    // even cannot carry A + <odd> either, so the refutation is genuine.
    ComplementRefutation h = refute_pnu_via_complement(power(hyperbolic(r), 2), anisotropic(r), anisotropic(r), 3);
    CHECK(h.complement_iso.verdict == Verdict::Yes);
    REQUIRE(h.summary == Summary::Refuted);
    REQUIRE(h.value);
    CHECK_FALSE(h.value->is_zero());
    CHECK(primitively_represents(power(hyperbolic(r), 2), *h.witness_lattice).verdict == Verdict::No);
}
