#include "doctest.h"

#include <random>

#include "silt/decompose.hpp"

using namespace silt;

namespace {

AlgebraPtr a2(uint32_t p = 2) { return build_algebra(Quiver::linear_an(2), p, {}); }
AlgebraPtr a4(uint32_t p = 2) { return build_algebra(Quiver::linear_an(4), p, {}); }
AlgebraPtr a3rad2(uint32_t p = 2) {
    return build_algebra_named(Quiver::linear_an(3), p, {{"a1", "a2"}});
}

} // namespace

TEST_CASE("decompose splits known direct sums and keeps indecomposables whole") {
    auto alg = a2();
    Representation p1 = projective_module(alg, 0);
    Representation s1 = simple_module(alg, 0);
    Representation sum = Representation::direct_sum(p1, Representation::direct_sum(s1, p1));
    auto parts = decompose_module(share(sum));
    REQUIRE(parts.size() == 3);
    // Sorted by (dim, dim vector): S(1) first, then the two copies of P(1).
    CHECK(parts[0]->dims == std::vector<int>{1, 0});
    CHECK(parts[1]->dims == std::vector<int>{1, 1});
    CHECK(parts[2]->dims == std::vector<int>{1, 1});
    CHECK(modules_isomorphic(*parts[1], p1));

    CHECK(is_indecomposable(share(p1)));
    CHECK(!is_indecomposable(share(sum)));
    CHECK(decompose_module(share(Representation::zero(alg))).empty());
}

TEST_CASE("a nonsplit extension middle does not decompose") {
    auto alg = a2(5);
    RepPtr s1 = share(simple_module(alg, 0));
    RepPtr s2 = share(simple_module(alg, 1));
    auto ext = ext_space(resolve_module(s1), 1, s2);
    REQUIRE(ext.dim == 1);
    for (uint32_t c = 1; c < 5; ++c) {
        auto parts = decompose_module(share(*realize_ext_class(ext, {c}).b));
        CHECK(parts.size() == 1);
    }
    auto split_parts = decompose_module(share(*realize_ext_class(ext, {0}).b));
    CHECK(split_parts.size() == 2);
}

TEST_CASE("decompose recovers random interval sums over A4") {
    std::mt19937_64 rng(2024);
    for (uint32_t p : {2u, 3u}) {
        auto alg = a4(p);
        for (int trial = 0; trial < 12; ++trial) {
            int n = 1 + static_cast<int>(rng() % 4);
            std::vector<std::vector<int>> expected;
            Representation sum = Representation::zero(alg);
            for (int i = 0; i < n; ++i) {
                int a = static_cast<int>(rng() % 4);
                int b = a + static_cast<int>(rng() % (4 - a));
                Representation part = interval_module(alg, a, b);
                expected.push_back(part.dims);
                sum = Representation::direct_sum(sum, part);
            }
            std::sort(expected.begin(), expected.end(), [](const auto& x, const auto& y) {
                int dx = 0, dy = 0;
                for (int v : x) dx += v;
                for (int v : y) dy += v;
                if (dx != dy) return dx < dy;
                return x < y;
            });
            auto parts = decompose_module(share(sum));
            REQUIRE(parts.size() == expected.size());
            for (size_t i = 0; i < parts.size(); ++i) CHECK(parts[i]->dims == expected[i]);
        }
    }
}

TEST_CASE("indecomposable enumeration hits the frozen counts") {
    // Reference counts: A2 has P(1), S(1), S(2); A4 has the ten intervals;
    // the rad-square Nakayama has P(1), P(2), S(1), S(2), S(3).
    auto e2 = enumerate_indecomposables(a2(), 4);
    CHECK(e2.classes.size() == 3);
    CHECK(e2.saturated);

    auto alg4 = a4();
    auto e4 = enumerate_indecomposables(alg4, 8);
    CHECK(e4.classes.size() == 10);
    // Every interval module appears.
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            Representation want = interval_module(alg4, a, b);
            bool found = false;
            for (const auto& cls : e4.classes) found |= modules_isomorphic(*cls, want);
            CHECK(found);
        }

    auto erad = enumerate_indecomposables(a3rad2(), 6);
    CHECK(erad.classes.size() == 5);
}

TEST_CASE("enumeration output is sorted by (total dim, dim vector)") {
    auto e = enumerate_indecomposables(a4(3), 8);
    for (size_t i = 0; i + 1 < e.classes.size(); ++i) {
        int da = e.classes[i]->total_dim(), db = e.classes[i + 1]->total_dim();
        CHECK((da < db || (da == db && e.classes[i]->dims <= e.classes[i + 1]->dims)));
    }
}

TEST_CASE("a dimension cap below reachable classes raises CapTooSmall") {
    // Over A2, extensions of S(1) by S(2) produce the 2-dimensional P(1).
    CHECK_THROWS_WITH_AS(enumerate_indecomposables(a2(), 1).saturated,
                         doctest::Contains("CapTooSmall"), Error);
}
