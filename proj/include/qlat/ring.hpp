#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlat {

inline constexpr int kMaxDegree = 4;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised whenever an answer would need more p-adic digits than the ring carries.
class PrecisionError : public Error {
public:
    using Error::Error;
};

class BudgetError : public Error {
public:
    using Error::Error;
};

struct RingSpec;
using Ring = std::shared_ptr<const RingSpec>;

class RingElt {
public:
    RingElt() = default;
    explicit RingElt(const RingSpec* ring) : ring_(ring) {}

    const RingSpec* ring() const { return ring_; }
    uint64_t coeff(int i) const { return c_[i]; }
    const std::array<uint64_t, kMaxDegree>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_unit() const;
    // Largest e with x in p^e R, capped at the ring precision k.
    int valuation() const;

    RingElt operator-() const;
    RingElt& operator+=(const RingElt& b);
    RingElt& operator-=(const RingElt& b);
    RingElt& operator*=(const RingElt& b);
    friend RingElt operator+(RingElt a, const RingElt& b) { return a += b; }
    friend RingElt operator-(RingElt a, const RingElt& b) { return a -= b; }
    friend RingElt operator*(RingElt a, const RingElt& b) { return a *= b; }
    friend bool operator==(const RingElt& a, const RingElt& b);
    friend bool operator!=(const RingElt& a, const RingElt& b) { return !(a == b); }

    RingElt inverse() const;
    // a / b for a unit b.
    RingElt operator/(const RingElt& b) const { return *this * b.inverse(); }
    // x / p^v when valuation(x) >= v; the quotient is only meaningful modulo
    // p^(k-v), and the representative returned has its top v digits zero.
    RingElt shift_down(int v) const;
    RingElt shift_up(int v) const;
    // a / b for any b with valuation(a) >= valuation(b); representative as in
    // shift_down, so that (a.exact_div(b)) * b == a.
    RingElt exact_div(const RingElt& b) const;
    RingElt pow(uint64_t e) const;

    // Coefficients reduced modulo p^j, in the same ring.
    RingElt reduce(int j) const;
    // Integer code of x mod p^j: sum_i (c_i mod p^j) * (p^j)^i.
    uint64_t code(int j) const;
    // Residue field element as an integer code sum_i (c_i mod p) p^i.
    int residue() const;

    bool less_lex(const RingElt& b) const;
    std::string to_string() const;

    RingElt& set_coeff(int i, uint64_t v);

private:
    void check_same(const RingElt& b) const;

    const RingSpec* ring_ = nullptr;
    std::array<uint64_t, kMaxDegree> c_{};
};

// Arithmetic in the residue field F_q by lookup tables on integer codes.
struct ResidueField {
    int p = 0;
    int f = 0;
    int q = 0;
    std::vector<int> add_table;
    std::vector<int> mul_table;
    std::vector<int> neg_table;
    std::vector<int> inv_table;

    int add(int a, int b) const { return add_table[a * q + b]; }
    int sub(int a, int b) const { return add_table[a * q + neg_table[b]]; }
    int mul(int a, int b) const { return mul_table[a * q + b]; }
    int neg(int a) const { return neg_table[a]; }
    int inv(int a) const { return inv_table[a]; }
};

struct RingSpec {
    int p = 0;
    int f = 0;
    int k = 0;
    int q = 0;
    int ord2 = 0;
    uint64_t pk = 0;
    std::vector<uint64_t> ppow;
    // x^f + modulus[f-1] x^(f-1) + ... + modulus[0]
    std::array<uint64_t, kMaxDegree> modulus{};
    RingElt rho;
    RingElt delta;
    ResidueField field;
    // p = 2: flag per code(3) residue class telling whether it is a unit square mod 8R.
    std::vector<char> square_mod8;
    std::vector<RingElt> unit_reps;
    bool custom_modulus = false;

    RingElt zero() const { return RingElt(this); }
    RingElt one() const { return from_int(1); }
    RingElt from_int(int64_t v) const;
    RingElt from_coeffs(const std::vector<int64_t>& cs) const;
    RingElt generator() const;
    RingElt from_code(uint64_t code, int j) const;
    RingElt from_residue(int code) const;
    RingElt p_power(int e) const;

    std::string to_string() const;
};

Ring make_ring(int p, int f, int k);
Ring make_ring(int p, int f, int k, const std::vector<int64_t>& modulus);
// The same residue ring carried at precision m (used for truncated enumeration);
// rho and delta are reduced from the parent.
Ring truncated_ring(const RingSpec& r, int m);
Ring parse_ring(const std::string& text);

RingElt parse_element(const RingSpec& r, const std::string& text);

bool is_prime(int64_t n);
bool is_square(const RingElt& x);
RingElt sqrt(const RingElt& x);
std::pair<RingElt, RingElt> find_rho(const RingSpec& r);
std::vector<RingElt> unit_square_class_reps(const RingSpec& r);
// Representative from unit_square_class_reps in the class of the unit u.
RingElt square_class_rep(const RingElt& u);

// Valuation with "at least k" mapped to a large sentinel for comparisons.
inline constexpr int kInfiniteOrder = 1 << 20;
inline int ord_or_inf(const RingElt& x) { return x.is_zero() ? kInfiniteOrder : x.valuation(); }

}  // namespace qlat
