#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qlat/ring.hpp"

using namespace qlat;

namespace {

RingElt random_elt(const Ring& r, std::mt19937_64& g) {
    RingElt x = r->zero();
    for (int i = 0; i < r->f; ++i) x.set_coeff(i, g() % r->pk);
    return x;
}

}  // namespace

TEST_CASE("Z_p arithmetic agrees with machine integers mod p^k") {
    std::mt19937_64 g(11);
    for (auto [p, k] : {std::pair{2, 20}, {3, 12}, {5, 9}, {7, 8}}) {
        Ring r = make_ring(p, 1, k);
        const int64_t m = static_cast<int64_t>(r->pk);
        for (int it = 0; it < 300; ++it) {
            int64_t a = static_cast<int64_t>(g() % m), b = static_cast<int64_t>(g() % m);
            RingElt x = r->from_int(a), y = r->from_int(b);
            CHECK((x + y).coeff(0) == static_cast<uint64_t>((a + b) % m));
            CHECK((x - y).coeff(0) == static_cast<uint64_t>(((a - b) % m + m) % m));
            CHECK((x * y).coeff(0) == static_cast<uint64_t>((__int128)a * b % m));
            int v = 0;
            for (int64_t t = a; t != 0 && t % p == 0; t /= p) ++v;
            CHECK(x.valuation() == (a == 0 ? k : v));
            if (a % p != 0) CHECK((x * x.inverse()) == r->one());
        }
    }
}

TEST_CASE("W(F_4) satisfies the ring axioms on random elements") {
    Ring r = make_ring(2, 2, 16);
    std::mt19937_64 g(5);
    for (int it = 0; it < 400; ++it) {
        RingElt a = random_elt(r, g), b = random_elt(r, g), c = random_elt(r, g);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (a.is_unit()) CHECK(a * a.inverse() == r->one());
    }
    // x^2 + x + 1 = 0 for the generator.
    RingElt x = r->generator();
    CHECK((x * x + x + r->one()).is_zero());
}

TEST_CASE("exact division and shifts") {
    Ring r = make_ring(2, 1, 12);
    RingElt a = r->from_int(40), b = r->from_int(12);
    CHECK(a.exact_div(b) * b == a);
    CHECK(r->from_int(48).shift_down(4) == r->from_int(3));
    CHECK(r->from_int(3).shift_up(4) == r->from_int(48));
    CHECK_THROWS(r->from_int(3).exact_div(r->from_int(4)));
}

TEST_CASE("unit square classes") {
    // Z_2: four classes mod 8; odd p: two; W(F_4): eight.
    CHECK(make_ring(2, 1, 10)->unit_reps.size() == 4);
    CHECK(make_ring(3, 1, 6)->unit_reps.size() == 2);
    CHECK(make_ring(5, 1, 6)->unit_reps.size() == 2);
    CHECK(make_ring(2, 2, 12)->unit_reps.size() == 8);

    Ring r = make_ring(2, 1, 16);
    for (int64_t u : {1, 9, 17, 33, 49}) CHECK(is_square(r->from_int(u)));
    for (int64_t u : {3, 5, 7, 11, 13, -1}) CHECK_FALSE(is_square(r->from_int(u)));
    CHECK_THROWS(is_square(r->from_int(8)));
    RingElt s = sqrt(r->from_int(17));
    CHECK(s * s == r->from_int(17));

    // Every unit lies in the class of exactly one representative.
    std::mt19937_64 g(3);
    for (int it = 0; it < 200; ++it) {
        RingElt u = r->from_int(2 * static_cast<int64_t>(g() % 5000) + 1);
        RingElt rep = square_class_rep(u);
        CHECK(is_square(u * rep.inverse()));
    }
}

TEST_CASE("delta is a nonsquare unit congruent to 1 mod 4 for p = 2") {
    for (int f : {1, 2, 3}) {
        Ring r = make_ring(2, f, 14);
        CHECK(r->delta.is_unit());
        CHECK_FALSE(is_square(r->delta));
        CHECK((r->delta - r->one()).valuation() >= 2);
        CHECK(r->delta == r->one() - r->from_int(4) * r->rho);
    }
}

TEST_CASE("ring specs round-trip through text") {
    for (const char* s : {"2,1,32", "3,1,12", "2,2,16", "5,3,6"}) CHECK(parse_ring(s)->to_string() == s);
    CHECK_THROWS(parse_ring("4,1,10"));
    CHECK_THROWS(parse_ring("2,1,3"));
    CHECK_THROWS(make_ring(2, 1, 70));
}

TEST_CASE("elements parse from text") {
    Ring r = make_ring(2, 2, 10);
    RingElt x = parse_element(*r, "[3,1]");
    CHECK(x.coeff(0) == 3);
    CHECK(x.coeff(1) == 1);
    CHECK(parse_element(*r, "-1") == -r->one());
    Ring z = make_ring(3, 1, 6);
    CHECK(parse_element(*z, "-2") == z->from_int(-2));
}
