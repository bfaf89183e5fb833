#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qlat/jordan.hpp"

namespace qlat {

// Subspaces of F_q^n (q^n <= 64) with a join table; vectors are base-q codes.
class SubspaceTable {
public:
    SubspaceTable(const ResidueField& field, int n);

    int count() const { return static_cast<int>(masks_.size()); }
    int zero() const { return 0; }
    int full() const { return full_; }
    int join(int a, int b) const { return join_[static_cast<size_t>(a) * count() + b]; }
    int extend(int sub, int vec) const { return extend_[static_cast<size_t>(sub) * nvec_ + vec]; }
    int dimension(int sub) const;
    int nvec() const { return nvec_; }

private:
    uint64_t span_mask(uint64_t mask, int vec) const;

    const ResidueField* field_;
    int n_;
    int nvec_;
    std::vector<uint64_t> masks_;
    std::unordered_map<uint64_t, int> index_;
    std::vector<int> extend_;
    std::vector<int> join_;
    int full_ = 0;
};

using SubspaceSet = unsigned __int128;

// Dynamic programme over the orthogonal Jordan pieces of a host lattice:
// the reachable pairs (T^t G T mod p^j, row space of T mod p) for m x n
// matrices T. Exact at level j; no approximation and no sampling.
class ValueDP {
public:
    enum class Status { Feasible, Infeasible, Budget };

    ValueDP(const Lattice& host, const JordanSplitting& js, int n, int level, uint64_t budget);

    Status decide(const RingMatrix& target);
    // Primitive T (in the host basis) with T^t G T == target mod p^level.
    std::optional<RingMatrix> witness(const RingMatrix& target);
    // n = 1: sorted codes of Q(v) mod p^level over primitive (or all) v.
    std::optional<std::vector<uint64_t>> values(bool primitive);

    uint64_t work() const { return work_; }
    const std::string& budget_reason() const { return reason_; }

private:
    struct Contribution {
        std::unordered_map<uint64_t, SubspaceSet> sets;
        // key -> (row space id, enumeration index) for the first matrix seen per pair
        std::unordered_map<uint64_t, std::vector<std::pair<uint8_t, uint64_t>>> reps;
        int digits = 1;
        int piece = 0;
    };

    bool prepare(bool need_reps);
    bool build_contribution(int piece, bool need_reps, Contribution& out);
    RingMatrix decode_block(const Contribution& c, uint64_t index) const;
    SubspaceSet combine(SubspaceSet a, SubspaceSet b);
    uint64_t key_add(uint64_t a, uint64_t b) const;
    uint64_t key_sub(uint64_t a, uint64_t b) const;
    uint64_t encode(const RingMatrix& s) const;
    bool charge(uint64_t amount, const char* what);

    const Lattice* host_;
    const JordanSplitting* js_;
    int n_;
    int level_;
    uint64_t budget_;
    uint64_t work_ = 0;
    std::string reason_;
    Ring small_;
    SubspaceTable subs_;
    int fields_ = 0;
    int width_ = 0;
    uint64_t field_mod_ = 0;
    uint64_t hmask_ = 0, lmask_ = 0, ones_ = 0;
    bool prepared_ = false;
    bool have_reps_ = false;
    std::vector<Contribution> contrib_;  // in processing order; last one is met in the middle
    std::vector<std::unordered_map<uint64_t, SubspaceSet>> stages_;
    struct PairHash {
        size_t operator()(const std::pair<SubspaceSet, SubspaceSet>& k) const {
            uint64_t h = static_cast<uint64_t>(k.first) * 0x9E3779B97F4A7C15ull;
            h ^= static_cast<uint64_t>(k.first >> 64) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
            h ^= static_cast<uint64_t>(k.second) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
            h ^= static_cast<uint64_t>(k.second >> 64) + (h << 6) + (h >> 2);
            return h;
        }
    };
    std::unordered_map<std::pair<SubspaceSet, SubspaceSet>, SubspaceSet, PairHash> combine_cache_;
};

}  // namespace qlat
