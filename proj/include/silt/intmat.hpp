#pragma once

#include <cstdint>
#include <vector>

#include "silt/error.hpp"

namespace silt {

// Dense integer matrix with exact Smith normal form, used for K-theory
// computations. Entries are 64-bit; every arithmetic step is overflow-checked
// (the desk-scale inputs here stay tiny, so a hit means a bug).
class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

    static IntMat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int64_t& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    int64_t at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

private:
    int rows_, cols_;
    std::vector<int64_t> a_;
};

int64_t checked_mul(int64_t a, int64_t b);
int64_t checked_add(int64_t a, int64_t b);

IntMat int_mul(const IntMat& x, const IntMat& y);

// Smith normal form: U * A * V = D with U, V unimodular and D diagonal with
// d_1 | d_2 | ... | d_r, all d_i > 0, remaining diagonal entries zero.
struct Snf {
    IntMat d;
    IntMat u; // rows() x rows(), unimodular
    IntMat v; // cols() x cols(), unimodular
    std::vector<int64_t> diagonal; // the nonzero invariant factors, in order
    int rank() const { return static_cast<int>(diagonal.size()); }
};
Snf int_snf(IntMat a);

} // namespace silt
