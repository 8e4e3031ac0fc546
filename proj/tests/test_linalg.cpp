#include "doctest.h"

#include <random>

#include "silt/fp.hpp"
#include "silt/intmat.hpp"

using namespace silt;

namespace {

FpMat random_mat(const Fp& F, int r, int c, std::mt19937_64& rng) {
    FpMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = static_cast<uint32_t>(rng() % F.p());
    return m;
}

// Independent rank oracle: count of nonzero rows after naive fraction-free
// elimination done with explicit field arithmetic, no shared code path with
// fp_rref's pivot bookkeeping.
int rank_oracle(const Fp& F, FpMat m) {
    int rank = 0;
    for (int c = 0; c < m.cols(); ++c) {
        int pivot = -1;
        for (int r = rank; r < m.rows(); ++r)
            if (m.at(r, c) != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        for (int j = 0; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(rank, j));
        for (int r = 0; r < m.rows(); ++r) {
            if (r == rank || m.at(r, c) == 0) continue;
            uint32_t factor = F.mul(m.at(r, c), F.inv(m.at(rank, c)));
            for (int j = 0; j < m.cols(); ++j)
                m.at(r, j) = F.sub(m.at(r, j), F.mul(factor, m.at(rank, j)));
        }
        ++rank;
    }
    return rank;
}

} // namespace

TEST_CASE("Fp arithmetic basics") {
    Fp F(7);
    CHECK(F.add(5, 4) == 2);
    CHECK(F.sub(2, 5) == 4);
    CHECK(F.mul(3, 5) == 1);
    CHECK(F.inv(3) == 5);
    CHECK(F.neg(0) == 0);
    CHECK(F.pow(3, 6) == 1); // Fermat
    CHECK(F.reduce(-1) == 6);
    CHECK_THROWS_AS(Fp(6), Error);
    CHECK_THROWS_AS(Fp(1), Error);
}

TEST_CASE("rref/rank/nullspace/solve/inverse agree with oracles") {
    std::mt19937_64 rng(12345);
    for (uint32_t p : {2u, 3u, 5u, 1009u}) {
        Fp F(p);
        for (int trial = 0; trial < 50; ++trial) {
            int r = 1 + static_cast<int>(rng() % 6);
            int c = 1 + static_cast<int>(rng() % 6);
            FpMat m = random_mat(F, r, c, rng);

            int rk = fp_rank(F, m);
            CHECK(rk == rank_oracle(F, m));

            // Nullspace: dimensions and membership.
            FpMat ns = fp_nullspace(F, m);
            CHECK(ns.cols() == c - rk);
            CHECK(fp_mul(F, m, ns).is_zero());
            CHECK(fp_rank(F, ns) == ns.cols());

            // Solve with a consistent right-hand side.
            FpMat x0 = random_mat(F, c, 1, rng);
            FpMat b = fp_mul(F, m, x0);
            auto x = fp_solve(F, m, b);
            REQUIRE(x.has_value());
            CHECK(fp_mul(F, m, *x) == b);

            // Square matrices: inverse round-trip whenever full rank.
            if (r == c) {
                auto inv = fp_inverse(F, m);
                CHECK(inv.has_value() == (rk == r));
                if (inv) CHECK(fp_mul(F, m, *inv) == FpMat::identity(r));
            }
        }
    }
}

TEST_CASE("inconsistent systems are rejected") {
    Fp F(5);
    FpMat m(2, 1);
    m.at(0, 0) = 1;
    m.at(1, 0) = 1;
    FpMat b(2, 1);
    b.at(0, 0) = 1;
    b.at(1, 0) = 2;
    CHECK(!fp_solve(F, m, b).has_value());
}

TEST_CASE("column basis and basis extension") {
    Fp F(3);
    FpMat m(3, 4);
    // Columns: c0 = e0, c1 = 2*e0, c2 = e1, c3 = e0+e1.
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(1, 2) = 1;
    m.at(0, 3) = 1;
    m.at(1, 3) = 1;
    FpMat basis = fp_column_basis(F, m);
    CHECK(basis.cols() == 2);
    std::vector<int> added = fp_extend_to_basis(F, basis, 3);
    CHECK(added == std::vector<int>{2});
    CHECK(fp_rank(F, basis) == 3);
}

TEST_CASE("Smith normal form: frozen example and random invariants") {
    // Hand-computed: [[2,4],[6,10]] -> row2 -= 3*row1 gives [[2,4],[0,-2]],
    // col2 -= 2*col1 gives diag(2,-2), sign-fix gives invariant factors (2,2).
    IntMat a(2, 2);
    a.at(0, 0) = 2;
    a.at(0, 1) = 4;
    a.at(1, 0) = 6;
    a.at(1, 1) = 10;
    Snf s = int_snf(a);
    REQUIRE(s.diagonal.size() == 2);
    CHECK(s.diagonal[0] == 2);
    CHECK(s.diagonal[1] == 2);

    // Random matrices: U*A*V = D, divisibility chain, rank consistency.
    std::mt19937_64 rng(999);
    for (int trial = 0; trial < 40; ++trial) {
        int r = 1 + static_cast<int>(rng() % 5);
        int c = 1 + static_cast<int>(rng() % 5);
        IntMat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = static_cast<int64_t>(rng() % 19) - 9;
        Snf snf = int_snf(m);
        IntMat check = int_mul(int_mul(snf.u, m), snf.v);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                int64_t want = (i == j && i < snf.rank()) ? snf.diagonal[i] : 0;
                CHECK(check.at(i, j) == want);
            }
        for (size_t k = 0; k + 1 < snf.diagonal.size(); ++k) {
            CHECK(snf.diagonal[k] > 0);
            CHECK(snf.diagonal[k + 1] % snf.diagonal[k] == 0);
        }
    }
}
