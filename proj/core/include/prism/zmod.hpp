#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace prism {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

struct MalformedInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ContainmentError : std::logic_error {
    using std::logic_error::logic_error;
};

bool is_prime(u64 n);

// Modulus p^M. All residues live in [0, q).
struct Modulus {
    u64 p = 2;
    int M = 1;
    u64 q = 2;

    Modulus() = default;
    Modulus(u64 p_, int M_);

    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= q ? s - q : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + q - b; }
    u64 neg(u64 a) const { return a ? q - a : 0; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % q); }
    u64 pow(u64 a, u64 e) const;
    u64 reduce(i64 v) const;
    // p-adic valuation, M for zero
    int val(u64 a) const;
    u64 ppow(int k) const;  // p^k mod q, 0 once k >= M
    // inverse of a unit; throws on non-units
    u64 inv(u64 a) const;
    bool operator==(const Modulus& o) const { return p == o.p && M == o.M; }
    bool operator!=(const Modulus& o) const { return !(*this == o); }
};

struct ZMod {
    Modulus mod;
    u64 residue = 0;

    ZMod() = default;
    ZMod(const Modulus& m, i64 v) : mod(m), residue(m.reduce(v)) {}

    ZMod operator+(const ZMod& o) const;
    ZMod operator-(const ZMod& o) const;
    ZMod operator*(const ZMod& o) const;
    ZMod operator-() const { return from_raw(mod, mod.neg(residue)); }
    bool operator==(const ZMod& o) const { return mod == o.mod && residue == o.residue; }
    bool is_unit() const { return residue % mod.p != 0; }
    ZMod inverse() const { return from_raw(mod, mod.inv(residue)); }
    int valuation() const { return mod.val(residue); }

    static ZMod from_raw(const Modulus& m, u64 r) {
        ZMod z;
        z.mod = m;
        z.residue = r;
        return z;
    }
};

using Vec = std::vector<u64>;

class ZModMatrix {
public:
    ZModMatrix() = default;
    ZModMatrix(const Modulus& m, std::size_t rows, std::size_t cols)
        : mod_(m), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static ZModMatrix identity(const Modulus& m, std::size_t n);
    static ZModMatrix from_rows(const Modulus& m, std::size_t cols, const std::vector<Vec>& rows);

    const Modulus& modulus() const { return mod_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    u64& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    u64 at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    u64* row(std::size_t r) { return a_.data() + r * cols_; }
    const u64* row(std::size_t r) const { return a_.data() + r * cols_; }
    Vec row_vec(std::size_t r) const { return Vec(row(r), row(r) + cols_); }
    void append_row(const Vec& v);
    const std::vector<u64>& data() const { return a_; }

    ZModMatrix operator*(const ZModMatrix& o) const;
    bool operator==(const ZModMatrix& o) const {
        return mod_ == o.mod_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    Modulus mod_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<u64> a_;
};

Vec vec_times(const Modulus& m, const Vec& v, const ZModMatrix& a);

// Canonical Howell form of the row span; zero rows dropped.
ZModMatrix howell_form(const ZModMatrix& m);

class Lattice {
public:
    Lattice() = default;
    Lattice(const Modulus& m, std::size_t rank);  // zero lattice
    static Lattice span(const ZModMatrix& gens);
    static Lattice span(const Modulus& m, std::size_t rank, const std::vector<Vec>& gens);
    static Lattice full(const Modulus& m, std::size_t rank);

    const Modulus& modulus() const { return mod_; }
    std::size_t ambient_rank() const { return rank_; }
    const ZModMatrix& generators() const { return h_; }
    std::size_t size() const { return h_.rows(); }

    // log_p of the cardinality
    long length() const;
    bool contains(const Vec& v) const;
    // reduces v in place against the generators, returns true if it became zero
    bool reduce(Vec& v) const;
    Lattice scaled(u64 c) const;
    bool operator==(const Lattice& o) const { return rank_ == o.rank_ && h_ == o.h_; }

private:
    Modulus mod_;
    std::size_t rank_ = 0;
    ZModMatrix h_;
    std::vector<std::size_t> pivot_;
};

Lattice kernel(const ZModMatrix& m);
Lattice lattice_meet(const Lattice& a, const Lattice& b);
Lattice lattice_join(const Lattice& a, const Lattice& b);
bool contains(const Lattice& L, const Vec& v);
bool is_sublattice(const Lattice& small, const Lattice& big);
// exponents e_k of big/small = sum Z/p^{e_k}, sorted descending
std::vector<int> quotient_exponents(const Lattice& big, const Lattice& small);
// same data as p-powers
std::vector<u64> quotient_invariants(const Lattice& big, const Lattice& small);

// Preimage: given rows f_t (images of the generator rows g_t) and a target lattice T,
// returns the span of { sum c_t g_t : sum c_t f_t in T }.
Lattice preimage(const std::vector<Vec>& g, std::size_t g_rank, const std::vector<Vec>& f,
                 const Lattice& T);

// Reusable form of solve_combination: the reduction of the rows is done once.
class CombinationSolver {
public:
    CombinationSolver(const std::vector<Vec>& rows, std::size_t rank, const Modulus& m);
    bool solve(const Vec& v, Vec& coeffs) const;

private:
    Modulus mod_;
    std::size_t rank_, k_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> pivot_;
};

// Solves sum c_t rows_t = v; returns false if v is outside the span.
bool solve_combination(const std::vector<Vec>& rows, std::size_t rank, const Modulus& m,
                       const Vec& v, Vec& coeffs);

}  // namespace prism
