#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "silt/error.hpp"

namespace silt {

// Arithmetic in the prime field F_p. p must be prime and satisfy p < 2^15 so
// that products fit comfortably in 64-bit intermediates everywhere.
class Fp {
public:
    explicit Fp(uint32_t p);

    uint32_t p() const { return p_; }
    uint32_t reduce(int64_t x) const {
        int64_t r = x % static_cast<int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<uint32_t>(r);
    }
    uint32_t add(uint32_t a, uint32_t b) const { uint32_t s = a + b; return s >= p_ ? s - p_ : s; }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    uint32_t mul(uint32_t a, uint32_t b) const {
        return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p_);
    }
    uint32_t inv(uint32_t a) const;
    uint32_t pow(uint32_t a, uint64_t e) const;

    static bool is_prime(uint32_t n);

private:
    uint32_t p_;
};

// Dense matrix over F_p, row-major. Dimensions may be zero; all operations
// are exact and deterministic.
class FpMat {
public:
    FpMat() : rows_(0), cols_(0) {}
    FpMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

    static FpMat identity(int n);
    static FpMat zero(int rows, int cols) { return FpMat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    uint32_t& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    uint32_t at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    bool operator==(const FpMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool is_zero() const;

    FpMat transpose() const;

    friend FpMat operator+(const FpMat& x, const FpMat& y);
    friend FpMat operator-(const FpMat& x, const FpMat& y);

private:
    int rows_, cols_;
    std::vector<uint32_t> a_;
};

FpMat fp_mul(const Fp& F, const FpMat& x, const FpMat& y);
FpMat fp_scale(const Fp& F, uint32_t c, const FpMat& x);
FpMat fp_add(const Fp& F, const FpMat& x, const FpMat& y);
FpMat fp_sub(const Fp& F, const FpMat& x, const FpMat& y);
FpMat fp_neg(const Fp& F, const FpMat& x);

// Horizontal / vertical concatenation.
FpMat hstack(const FpMat& x, const FpMat& y);
FpMat vstack(const FpMat& x, const FpMat& y);

// Reduced row echelon form; returns the transformed matrix and the list of
// pivot columns. Deterministic: first nonzero entry scanning rows top-down.
struct Rref {
    FpMat mat;
    std::vector<int> pivot_cols;
    int rank() const { return static_cast<int>(pivot_cols.size()); }
};
Rref fp_rref(const Fp& F, FpMat m);

int fp_rank(const Fp& F, const FpMat& m);

// Basis of the right null space { v : m v = 0 }, as columns of the returned
// matrix. Deterministic: one basis vector per free column, in column order.
FpMat fp_nullspace(const Fp& F, const FpMat& m);

// One particular solution x of m x = b (b a column vector or matrix of
// right-hand sides), if any; free variables are set to zero.
std::optional<FpMat> fp_solve(const Fp& F, const FpMat& m, const FpMat& b);

// Inverse of a square matrix, if invertible.
std::optional<FpMat> fp_inverse(const Fp& F, const FpMat& m);

// Column-space basis of m, as the columns of m indexed by the pivot columns.
FpMat fp_column_basis(const Fp& F, const FpMat& m);

// Extends the columns of `part` (assumed independent) to a basis of F_p^n by
// greedily appending standard unit vectors. Returns the appended unit-vector
// indices; `part` is modified in place to the full basis.
std::vector<int> fp_extend_to_basis(const Fp& F, FpMat& part, int n);

// Canonical representative of a column vector modulo a subspace, given the
// RREF of the subspace basis transposed (rows span the subspace with
// leading-1 pivots). Two vectors are congruent iff their reductions match.
FpMat fp_reduce_mod_columns(const Fp& F, const Rref& span_rref_t, const FpMat& v);

} // namespace silt
