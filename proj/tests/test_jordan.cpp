#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qlat/jordan.hpp"
#include "qlat/spaces.hpp"

using namespace qlat;

namespace {

// (a, b)_p = 1 iff a x^2 + b y^2 = z^2 has a primitive solution; mod p^m is
// enough here because ord a, ord b <= 1.
int brute_hilbert(int64_t a, int64_t b, int p, int m) {
    int64_t mod = 1;
    for (int i = 0; i < m; ++i) mod *= p;
    for (int64_t x = 0; x < mod; ++x)
        for (int64_t y = 0; y < mod; ++y) {
            int64_t lhs = ((a * x % mod * x + b * y % mod * y) % mod + mod) % mod;
            for (int64_t z = 0; z < mod; ++z) {
                if (x % p == 0 && y % p == 0 && z % p == 0) continue;
                if (z * z % mod == lhs) return 1;
            }
        }
    return -1;
}

RingMatrix random_unimodular(const Ring& r, int n, std::mt19937_64& g) {
    for (;;) {
        RingMatrix u = zeros(*r, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) u(i, j) = r->from_int(static_cast<int64_t>(g() % 9) - 4);
        if (determinant(u).is_unit()) return u;
    }
}

RingMatrix block_diagonal(const JordanSplitting& js, const Ring& r, int n) {
    RingMatrix d = zeros(*r, n, n);
    for (const auto& b : js.blocks)
        for (int i = 0; i < b.rank(); ++i)
            for (int j = 0; j < b.rank(); ++j) d(b.first + i, b.first + j) = b.gram(i, j);
    return d;
}

}  // namespace

TEST_CASE("Jordan scales of diag(1,1,1,3,4,16) over Z_2") {
    Ring r = make_ring(2, 1, 8);
    Lattice l = parse_lattice(r, "diag:1,1,1,3,4,16");
    JordanSplitting js = jordan_split(l);
    CHECK(js.scales() == std::vector<int>{0, 2, 4});
    CHECK(js.ranks() == std::vector<int>{4, 1, 1});
    CHECK(congruent(l.gram(), js.basis_change) == block_diagonal(js, r, 6));
    REQUIRE(js.blocks[0].two_signature);
    // 1 + 1 + 1 + 3 = 6 mod 8
    CHECK(js.blocks[0].two_signature->coeff(0) == 6);
}

TEST_CASE("even and odd blocks") {
    Ring r = make_ring(2, 1, 16);
    JordanInvariants inv = jordan_invariants(parse_lattice(r, "H+A:2+diag:4"));
    CHECK(inv.scales == std::vector<int>{0, 1, 2});
    CHECK(inv.ranks == std::vector<int>{2, 2, 1});
    CHECK(inv.even == std::vector<bool>{true, true, false});
    Ring z3 = make_ring(3, 1, 10);
    JordanInvariants odd = jordan_invariants(parse_lattice(z3, "H+diag:3,9"));
    CHECK(odd.scales == std::vector<int>{0, 1, 2});
    CHECK(odd.even == std::vector<bool>{false, false, false});
}

TEST_CASE("invariants survive random unimodular change of basis") {
    std::mt19937_64 g(2024);
    for (const char* ring : {"2,1,24", "3,1,14", "2,2,16"}) {
        Ring r = parse_ring(ring);
        for (const char* text : {"H+diag:1,2,4", "A:2+diag:3,1", "diag:1,3,5,8", "H:4+diag:1"}) {
            Lattice l = parse_lattice(r, text);
            JordanInvariants base = jordan_invariants(l);
            auto hasse = hasse_invariant(l);
            for (int it = 0; it < 10; ++it) {
                Lattice m(r, congruent(l.gram(), random_unimodular(r, l.rank(), g)));
                JordanSplitting js = jordan_split(m);
                CHECK(jordan_invariants(m) == base);
                CHECK(congruent(m.gram(), js.basis_change) == block_diagonal(js, r, m.rank()));
                CHECK(hasse_invariant(m) == hasse);
            }
        }
    }
}

TEST_CASE("Hilbert symbols against an isotropy search") {
    for (auto [p, m] : {std::pair{2, 6}, {3, 3}, {5, 2}}) {
        Ring r = make_ring(p, 1, 16);
        std::vector<int64_t> vals;
        for (int64_t u = 1; u < 2 * p * p && vals.size() < 8; ++u)
            if (u % (p * p) != 0 && (u % p != 0 || (u / p) % p != 0)) vals.push_back(u);
        for (int64_t a : vals)
            for (int64_t b : vals) {
                CAPTURE(p);
                CAPTURE(a);
                CAPTURE(b);
                CHECK(hilbert_symbol(r->from_int(a), r->from_int(b)) == brute_hilbert(a, b, p, m));
            }
    }
}

TEST_CASE("known Hilbert symbols and Hasse invariants") {
    Ring z2 = make_ring(2, 1, 16), z3 = make_ring(3, 1, 12);
    CHECK(hilbert_symbol(z2->from_int(2), z2->from_int(3)) == -1);
    CHECK(hilbert_symbol(z2->from_int(-1), z2->from_int(-1)) == -1);
    CHECK(hilbert_symbol(z3->from_int(3), z3->from_int(2)) == -1);
    CHECK(hilbert_symbol(z3->from_int(3), z3->from_int(-3)) == 1);
    // A ~ <2, 6> rationally, and (2, 6)_2 = -1.
    CHECK(hasse_invariant(anisotropic(z2)) == -1);
    CHECK(hasse_invariant(hyperbolic(z2)) == 1);
    CHECK_FALSE(hasse_invariant(anisotropic(make_ring(2, 2, 12))));
}

TEST_CASE("Witt indices of small spaces") {
    Ring r = make_ring(2, 1, 20);
    CHECK(witt_index(parse_lattice(r, "diag:1,1,1,1")).witt_index == 0);
    CHECK(witt_index(parse_lattice(r, "diag:1,1,1,5")).witt_index == 1);
    CHECK(witt_index(parse_lattice(r, "(H)^2")).hyperbolic);
    CHECK(witt_index(parse_lattice(r, "A")).anisotropic_kernel_dim == 2);
    Ring z3 = make_ring(3, 1, 12);
    SpaceInvariants s = witt_index(parse_lattice(z3, "diag:1,1,1"));
    CHECK(s.witt_index == 1);
    CHECK(s.anisotropic_kernel_dim == 1);
    for (const auto& v : s.isotropic_vectors) CHECK(parse_lattice(z3, "diag:1,1,1").Q(v).is_zero());
}
