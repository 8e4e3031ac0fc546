#include "silt/fp.hpp"

namespace silt {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InfiniteDimensional: return "InfiniteDimensional";
        case ErrorCode::BadRelation: return "BadRelation";
        case ErrorCode::UnknownVertex: return "UnknownVertex";
        case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
        case ErrorCode::ResolutionCapExceeded: return "ResolutionCapExceeded";
        case ErrorCode::DegreeNotOne: return "DegreeNotOne";
        case ErrorCode::CapTooSmall: return "CapTooSmall";
        case ErrorCode::InfiniteProjDim: return "InfiniteProjDim";
        case ErrorCode::WindowExhausted: return "WindowExhausted";
        case ErrorCode::NoProjectives: return "NoProjectives";
        case ErrorCode::MembershipViolation: return "MembershipViolation";
        case ErrorCode::NoFiniteBound: return "NoFiniteBound";
        case ErrorCode::NotGood: return "NotGood";
        case ErrorCode::NotSubcat: return "NotSubcat";
        case ErrorCode::NoReferenceSilting: return "NoReferenceSilting";
        case ErrorCode::ZeroExtension: return "ZeroExtension";
        case ErrorCode::HypothesisFailed: return "HypothesisFailed";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::ApproximationFailure: return "ApproximationFailure";
        case ErrorCode::NonTermination: return "NonTermination";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::InternalError: return "InternalError";
    }
    return "UnknownError";
}

Fp::Fp(uint32_t p) : p_(p) {
    if (p < 2 || p >= (1u << 15) || !is_prime(p))
        fail(ErrorCode::ValidationError, "field characteristic must be a prime < 32768, got " + std::to_string(p));
}

bool Fp::is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

uint32_t Fp::pow(uint32_t a, uint64_t e) const {
    uint32_t r = 1 % p_;
    uint32_t base = a % p_;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

uint32_t Fp::inv(uint32_t a) const {
    internal_check(a % p_ != 0, "division by zero in F_p");
    return pow(a, p_ - 2);
}

FpMat FpMat::identity(int n) {
    FpMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool FpMat::is_zero() const {
    for (uint32_t x : a_)
        if (x != 0) return false;
    return true;
}

FpMat FpMat::transpose() const {
    FpMat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

FpMat fp_mul(const Fp& F, const FpMat& x, const FpMat& y) {
    internal_check(x.cols() == y.rows(), "matrix product shape mismatch");
    FpMat z(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            uint32_t v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols(); ++j)
                z.at(i, j) = F.add(z.at(i, j), F.mul(v, y.at(k, j)));
        }
    return z;
}

FpMat fp_scale(const Fp& F, uint32_t c, const FpMat& x) {
    FpMat z(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) z.at(i, j) = F.mul(c, x.at(i, j));
    return z;
}

FpMat fp_add(const Fp& F, const FpMat& x, const FpMat& y) {
    internal_check(x.rows() == y.rows() && x.cols() == y.cols(), "matrix sum shape mismatch");
    FpMat z(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) z.at(i, j) = F.add(x.at(i, j), y.at(i, j));
    return z;
}

FpMat fp_sub(const Fp& F, const FpMat& x, const FpMat& y) {
    internal_check(x.rows() == y.rows() && x.cols() == y.cols(), "matrix difference shape mismatch");
    FpMat z(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) z.at(i, j) = F.sub(x.at(i, j), y.at(i, j));
    return z;
}

FpMat fp_neg(const Fp& F, const FpMat& x) {
    FpMat z(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) z.at(i, j) = F.neg(x.at(i, j));
    return z;
}

FpMat hstack(const FpMat& x, const FpMat& y) {
    internal_check(x.rows() == y.rows(), "hstack row mismatch");
    FpMat z(x.rows(), x.cols() + y.cols());
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) z.at(i, j) = x.at(i, j);
        for (int j = 0; j < y.cols(); ++j) z.at(i, x.cols() + j) = y.at(i, j);
    }
    return z;
}

FpMat vstack(const FpMat& x, const FpMat& y) {
    internal_check(x.cols() == y.cols(), "vstack column mismatch");
    FpMat z(x.rows() + y.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) z.at(i, j) = x.at(i, j);
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) z.at(x.rows() + i, j) = y.at(i, j);
    return z;
}

Rref fp_rref(const Fp& F, FpMat m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int pr = -1;
        for (int i = r; i < m.rows(); ++i)
            if (m.at(i, c) != 0) { pr = i; break; }
        if (pr < 0) continue;
        if (pr != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(pr, j), m.at(r, j));
        uint32_t piv_inv = F.inv(m.at(r, c));
        for (int j = 0; j < m.cols(); ++j) m.at(r, j) = F.mul(piv_inv, m.at(r, j));
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            uint32_t f = m.at(i, c);
            for (int j = 0; j < m.cols(); ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return Rref{std::move(m), std::move(pivots)};
}

int fp_rank(const Fp& F, const FpMat& m) { return fp_rref(F, m).rank(); }

FpMat fp_nullspace(const Fp& F, const FpMat& m) {
    Rref rr = fp_rref(F, m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    FpMat basis(m.cols(), static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int fc = free_cols[k];
        basis.at(fc, static_cast<int>(k)) = 1;
        for (size_t r = 0; r < rr.pivot_cols.size(); ++r)
            basis.at(rr.pivot_cols[r], static_cast<int>(k)) =
                F.neg(rr.mat.at(static_cast<int>(r), fc));
    }
    return basis;
}

std::optional<FpMat> fp_solve(const Fp& F, const FpMat& m, const FpMat& b) {
    internal_check(m.rows() == b.rows(), "solve shape mismatch");
    Rref rr = fp_rref(F, hstack(m, b));
    // Inconsistent iff some pivot lands in the augmented block.
    for (int c : rr.pivot_cols)
        if (c >= m.cols()) return std::nullopt;
    FpMat x(m.cols(), b.cols());
    for (size_t r = 0; r < rr.pivot_cols.size(); ++r)
        for (int j = 0; j < b.cols(); ++j)
            x.at(rr.pivot_cols[r], j) = rr.mat.at(static_cast<int>(r), m.cols() + j);
    return x;
}

std::optional<FpMat> fp_inverse(const Fp& F, const FpMat& m) {
    internal_check(m.rows() == m.cols(), "inverse of non-square matrix");
    Rref rr = fp_rref(F, hstack(m, FpMat::identity(m.rows())));
    if (rr.rank() < m.rows()) return std::nullopt;
    for (size_t r = 0; r < rr.pivot_cols.size(); ++r)
        if (rr.pivot_cols[r] != static_cast<int>(r)) return std::nullopt;
    FpMat inv(m.rows(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.rows(); ++j) inv.at(i, j) = rr.mat.at(i, m.cols() + j);
    return inv;
}

FpMat fp_column_basis(const Fp& F, const FpMat& m) {
    Rref rr = fp_rref(F, m);
    FpMat basis(m.rows(), rr.rank());
    for (int k = 0; k < rr.rank(); ++k)
        for (int i = 0; i < m.rows(); ++i) basis.at(i, k) = m.at(i, rr.pivot_cols[k]);
    return basis;
}

std::vector<int> fp_extend_to_basis(const Fp& F, FpMat& part, int n) {
    internal_check(part.rows() == n, "extend_to_basis shape mismatch");
    std::vector<int> added;
    int have = fp_rank(F, part);
    internal_check(have == part.cols(), "extend_to_basis expects independent columns");
    for (int e = 0; e < n && have < n; ++e) {
        FpMat unit(n, 1);
        unit.at(e, 0) = 1;
        FpMat cand = hstack(part, unit);
        if (fp_rank(F, cand) > have) {
            part = cand;
            added.push_back(e);
            ++have;
        }
    }
    internal_check(have == n, "extend_to_basis failed to complete basis");
    return added;
}

FpMat fp_reduce_mod_columns(const Fp& F, const Rref& span_rref_t, const FpMat& v) {
    internal_check(v.cols() == 1, "reduce_mod_columns expects a column vector");
    FpMat r = v;
    for (int row = 0; row < span_rref_t.rank(); ++row) {
        int pc = span_rref_t.pivot_cols[row];
        uint32_t c = r.at(pc, 0);
        if (c == 0) continue;
        for (int j = 0; j < r.rows(); ++j)
            r.at(j, 0) = F.sub(r.at(j, 0), F.mul(c, span_rref_t.mat.at(row, j)));
    }
    return r;
}

} // namespace silt
