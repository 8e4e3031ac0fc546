#include "silt/intmat.hpp"

#include <cstdlib>

namespace silt {

int64_t checked_mul(int64_t a, int64_t b) {
    __int128 p = static_cast<__int128>(a) * b;
    internal_check(p <= INT64_MAX && p >= INT64_MIN, "integer overflow in K0 arithmetic");
    return static_cast<int64_t>(p);
}

int64_t checked_add(int64_t a, int64_t b) {
    __int128 s = static_cast<__int128>(a) + b;
    internal_check(s <= INT64_MAX && s >= INT64_MIN, "integer overflow in K0 arithmetic");
    return static_cast<int64_t>(s);
}

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat int_mul(const IntMat& x, const IntMat& y) {
    internal_check(x.cols() == y.rows(), "integer matrix product shape mismatch");
    IntMat z(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            if (x.at(i, k) == 0) continue;
            for (int j = 0; j < y.cols(); ++j)
                z.at(i, j) = checked_add(z.at(i, j), checked_mul(x.at(i, k), y.at(k, j)));
        }
    return z;
}

namespace {

void row_swap(IntMat& m, int r1, int r2) {
    for (int j = 0; j < m.cols(); ++j) std::swap(m.at(r1, j), m.at(r2, j));
}
void col_swap(IntMat& m, int c1, int c2) {
    for (int i = 0; i < m.rows(); ++i) std::swap(m.at(i, c1), m.at(i, c2));
}
// row r1 -= q * row r2
void row_axpy(IntMat& m, int r1, int r2, int64_t q) {
    for (int j = 0; j < m.cols(); ++j)
        m.at(r1, j) = checked_add(m.at(r1, j), checked_mul(-q, m.at(r2, j)));
}
void col_axpy(IntMat& m, int c1, int c2, int64_t q) {
    for (int i = 0; i < m.rows(); ++i)
        m.at(i, c1) = checked_add(m.at(i, c1), checked_mul(-q, m.at(i, c2)));
}
void row_negate(IntMat& m, int r) {
    for (int j = 0; j < m.cols(); ++j) m.at(r, j) = -m.at(r, j);
}

} // namespace

Snf int_snf(IntMat a) {
    const int nr = a.rows(), nc = a.cols();
    IntMat u = IntMat::identity(nr);
    IntMat v = IntMat::identity(nc);
    int t = 0;
    const int lim = std::min(nr, nc);
    while (t < lim) {
        // Find the nonzero entry of smallest absolute value in the trailing block.
        int pr = -1, pc = -1;
        int64_t best = 0;
        for (int i = t; i < nr; ++i)
            for (int j = t; j < nc; ++j) {
                int64_t x = a.at(i, j) < 0 ? -a.at(i, j) : a.at(i, j);
                if (x != 0 && (pr < 0 || x < best)) { best = x; pr = i; pc = j; }
            }
        if (pr < 0) break; // trailing block is zero
        if (pr != t) { row_swap(a, t, pr); row_swap(u, t, pr); }
        if (pc != t) { col_swap(a, t, pc); col_swap(v, t, pc); }
        bool clean = true;
        for (int i = t + 1; i < nr; ++i) {
            if (a.at(i, t) == 0) continue;
            int64_t q = a.at(i, t) / a.at(t, t);
            row_axpy(a, i, t, q);
            row_axpy(u, i, t, q);
            if (a.at(i, t) != 0) clean = false;
        }
        for (int j = t + 1; j < nc; ++j) {
            if (a.at(t, j) == 0) continue;
            int64_t q = a.at(t, j) / a.at(t, t);
            col_axpy(a, j, t, q);
            col_axpy(v, j, t, q);
            if (a.at(t, j) != 0) clean = false;
        }
        if (!clean) continue; // smaller remainders appeared; repeat with new minimum
        // Enforce divisibility of the rest of the block by the pivot.
        bool divides_all = true;
        for (int i = t + 1; i < nr && divides_all; ++i)
            for (int j = t + 1; j < nc; ++j)
                if (a.at(i, j) % a.at(t, t) != 0) {
                    // Fold row i into row t to surface a remainder at (t, j).
                    row_axpy(a, t, i, -1);
                    row_axpy(u, t, i, -1);
                    divides_all = false;
                    break;
                }
        if (!divides_all) continue;
        if (a.at(t, t) < 0) { row_negate(a, t); row_negate(u, t); }
        ++t;
    }
    Snf out;
    out.diagonal.reserve(t);
    for (int i = 0; i < t; ++i) out.diagonal.push_back(a.at(i, i));
    out.d = std::move(a);
    out.u = std::move(u);
    out.v = std::move(v);
    return out;
}

} // namespace silt
