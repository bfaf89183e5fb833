#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlat/spaces.hpp"

using namespace qlat;

namespace {

// Primitive isotropic vector mod 2^m for a diagonal form with odd entries.
bool isotropic_mod(const std::vector<int64_t>& d, int m) {
    const int n = static_cast<int>(d.size());
    const int64_t mod = int64_t{1} << m;
    int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= mod;
    for (int64_t idx = 0; idx < total; ++idx) {
        int64_t t = idx, q = 0;
        bool unit = false;
        for (int i = 0; i < n; ++i) {
            int64_t v = t % mod;
            t /= mod;
            unit |= v % 2 != 0;
            q = (q + d[i] * v * v) % mod;
        }
        if (unit && q == 0) return true;
    }
    return false;
}

void check_isotropic_vectors(const Lattice& l, const SpaceInvariants& s) {
    CHECK(static_cast<int>(s.isotropic_vectors.size()) == s.witt_index);
    for (const auto& v : s.isotropic_vectors) CHECK(l.Q(v).is_zero());
}

}  // namespace

TEST_CASE("Witt index of hyperbolic spaces") {
    for (const char* ring : {"2,1,20", "3,1,12", "2,2,14"}) {
        Ring r = parse_ring(ring);
        for (int n = 1; n <= 3; ++n) {
            Lattice l = power(hyperbolic(r), n);
            SpaceInvariants s = witt_index(l);
            CHECK(s.witt_index == n);
            CHECK(s.hyperbolic);
            CHECK(s.anisotropic_kernel_dim == 0);
            check_isotropic_vectors(l, s);
        }
        SpaceInvariants s = witt_index(diagonal(r, {1, -1}));
        CHECK(s.witt_index == 1);
    }
}

TEST_CASE("sums of four odd squares over Q_2") {
    Ring r = make_ring(2, 1, 20);
    // Exhaustive isotropy scan mod 2^5 as the oracle.
    for (auto d : {std::vector<int64_t>{1, 1, 1, 1}, {1, 1, 1, 5}, {1, 1, 1, 3}, {1, 3, 5, 7}, {1, 1, 3, 3}}) {
        Lattice l = diagonal(r, d);
        SpaceInvariants s = witt_index(l);
        CAPTURE(d[3]);
        CHECK((s.witt_index > 0) == isotropic_mod(d, 5));
        check_isotropic_vectors(l, s);
    }
    CHECK(witt_index(diagonal(r, {1, 1, 1, 1})).witt_index == 0);
    CHECK(witt_index(diagonal(r, {1, 1, 1, 5})).witt_index == 1);
}

TEST_CASE("necessary conditions for primitive n-universality") {
    Ring r = make_ring(2, 1, 20);
    CHECK(check_necessary_pnu(parse_lattice(r, "(H)^2"), 2).pass);
    NecessaryCheck four = check_necessary_pnu(diagonal(r, {1, 1, 1, 1}), 1);
    CHECK_FALSE(four.pass);
    CHECK(four.reason.find("Witt index 0") != std::string::npos);
    CHECK(check_necessary_pnu(parse_lattice(r, "(H)^2+diag:1,-1"), 3).pass);
    CHECK_FALSE(check_necessary_pnu(parse_lattice(r, "H+A"), 2).pass);
    // rank 2n + 1 needs the kernel <(-1)^n d>: H + <3> passes, nothing else to test it against
    CHECK(check_necessary_pnu(parse_lattice(r, "H+diag:3"), 1).pass);
}

TEST_CASE("square classes in the residue-free sense") {
    Ring r = make_ring(2, 1, 16);
    CHECK(same_square_class(r->from_int(1), r->from_int(17)));
    CHECK(same_square_class(r->from_int(2), r->from_int(18)));
    CHECK_FALSE(same_square_class(r->from_int(2), r->from_int(1)));
    CHECK_FALSE(same_square_class(r->from_int(3), r->from_int(7)));
    CHECK(same_square_class(r->from_int(12), r->from_int(3)));
    Ring z3 = make_ring(3, 1, 10);
    CHECK(same_square_class(z3->from_int(2), z3->from_int(5)));
    CHECK_FALSE(same_square_class(z3->from_int(3), z3->from_int(6)));
}
