#include "doctest.h"

#include <random>

#include "silt/complex.hpp"

using namespace silt;

namespace {

AlgebraPtr a2(uint32_t p = 2) { return build_algebra(Quiver::linear_an(2), p, {}); }
AlgebraPtr a4(uint32_t p = 2) { return build_algebra(Quiver::linear_an(4), p, {}); }
AlgebraPtr a3rad2(uint32_t p = 2) {
    return build_algebra_named(Quiver::linear_an(3), p, {{"a1", "a2"}});
}

ComplexPtr resolve_complex(const AlgebraPtr& alg, const Representation& m) {
    (void)alg;
    return complex_from_resolution(*resolve_module(share(m)));
}

int path_between(const AlgebraPtr& alg, int src, int tgt, int len) {
    for (int p : alg->paths_between(src, tgt))
        if (alg->paths[p].length() == len) return p;
    return -1;
}

} // namespace

TEST_CASE("path calculus: products, units, and local inverses") {
    // Loop algebra k[l]/l^3: paths e, l, ll.
    Quiver q;
    q.vertices = {"1"};
    q.arrows = {{"l", 0, 0}};
    auto alg = build_algebra(q, 5, {{0, 0, 0}});
    REQUIRE(alg->dim() == 3);
    int e = alg->trivial_path[0];
    int l = path_between(alg, 0, 0, 1);
    int ll = path_between(alg, 0, 0, 2);

    PathVec u = path_add(alg, path_vec_unit(alg, e), path_vec_unit(alg, l)); // 1 + l
    PathVec inv = path_local_inverse(alg, 0, u);
    // (1 + l)^{-1} = 1 - l + l^2.
    CHECK(inv[e] == 1);
    CHECK(inv[l] == 4);
    CHECK(inv[ll] == 1);
    PathVec prod = path_mul(alg, u, inv);
    CHECK(prod == path_vec_unit(alg, e));

    // l * l = ll, l * ll dies by the relation.
    PathVec sq = path_mul(alg, path_vec_unit(alg, l), path_vec_unit(alg, l));
    CHECK(sq == path_vec_unit(alg, ll));
    CHECK(path_vec_is_zero(path_mul(alg, path_vec_unit(alg, l), path_vec_unit(alg, ll))));
}

TEST_CASE("LambdaMat materialization round-trips and is functorial") {
    auto alg = a4(5);
    std::mt19937_64 rng(0xC0DE01);
    ProjSum A = ProjSum::build(alg, {0, 2});
    ProjSum B = ProjSum::build(alg, {1, 3, 0});
    ProjSum C = ProjSum::build(alg, {2, 3});

    auto random_lambda = [&](const ProjSum& src, const ProjSum& tgt) {
        LambdaMat m(alg, tgt.copies, src.copies);
        for (int j = 0; j < m.rows(); ++j)
            for (int i = 0; i < m.cols(); ++i)
                for (int p : alg->paths_between(tgt.copies[j], src.copies[i]))
                    m.at(j, i)[p] = static_cast<uint32_t>(rng() % 5);
        m.validate();
        return m;
    };

    for (int trial = 0; trial < 10; ++trial) {
        LambdaMat f = random_lambda(A, B);
        LambdaMat g = random_lambda(B, C);
        // Round-trip through the realized morphism.
        ModuleMorphism mf = lambda_to_morphism(f, A, B);
        LambdaMat back = lambda_from_morphism(A, B, mf);
        CHECK(lm_sub(back, f).is_zero());
        // Materialization is functorial.
        ModuleMorphism mg = lambda_to_morphism(g, B, C);
        ModuleMorphism mgf = morphism_compose(mg, mf);
        LambdaMat gf = lambda_from_morphism(A, C, mgf);
        CHECK(lm_sub(gf, lm_compose(g, f)).is_zero());
    }

    LambdaMat id = LambdaMat::identity(alg, B.copies);
    CHECK(id.is_invertible());
    CHECK(lambda_to_morphism(id, B, B).is_iso());
}

TEST_CASE("resolutions as complexes: A2 simple and the rad-square simple") {
    auto alg = a2();
    auto x = resolve_complex(alg, simple_module(alg, 0));
    REQUIRE(x->lo == -1);
    REQUIRE(x->hi() == 0);
    CHECK(x->slots_at(-1) == std::vector<int>{1}); // P(2)
    CHECK(x->slots_at(0) == std::vector<int>{0});  // P(1)
    // The differential is the length-1 path from vertex 1 to vertex 2.
    int a1 = path_between(alg, 0, 1, 1);
    REQUIRE(a1 >= 0);
    CHECK(x->diff_at(-1).at(0, 0)[a1] == 1);
    CHECK(complex_is_minimal(*x));

    auto rad = a3rad2();
    auto y = resolve_complex(rad, simple_module(rad, 0));
    REQUIRE(y->lo == -2);
    CHECK(y->slots_at(-2) == std::vector<int>{2});
    CHECK(y->slots_at(-1) == std::vector<int>{1});
    CHECK(y->slots_at(0) == std::vector<int>{0});
    CHECK(complex_is_minimal(*y));

    // Projectives resolve to stalks in degree 0.
    auto z = resolve_complex(alg, projective_module(alg, 0));
    CHECK(z->lo == 0);
    CHECK(z->slots_at(0) == std::vector<int>{0});
}

TEST_CASE("shift bookkeeping and homotopy hom dimensions over A2") {
    auto alg = a2();
    auto s1 = resolve_complex(alg, simple_module(alg, 0));
    auto s2 = resolve_complex(alg, simple_module(alg, 1));

    auto sh = shift_complex(s1, 1);
    CHECK(sh->lo == -2);
    CHECK(sh->hi() == -1);
    CHECK(complex_same_shape(*shift_complex(sh, -1), *s1));

    // Hom in the homotopy category matches Hom/Ext of the modules.
    CHECK(hom_k_dim(s1, s1) == 1);
    CHECK(hom_k_dim(s2, s2) == 1);
    CHECK(hom_k_dim(s1, s2) == 0);
    CHECK(hom_k_dim(s2, s1) == 0);
    CHECK(hom_k_dim(s1, shift_complex(s2, 1)) == 1); // Ext^1(S1, S2) = k
    CHECK(hom_k_dim(s2, shift_complex(s1, 1)) == 0);
    CHECK(hom_k_dim(s1, shift_complex(s2, -1)) == 0);
    // Shift invariance.
    CHECK(hom_k_dim(shift_complex(s1, 2), shift_complex(s2, 3)) == 1);
}

TEST_CASE("homotopy hom agrees with module Hom and Ext over hereditary A4") {
    auto alg = a4(3);
    std::vector<ComplexPtr> resolved;
    std::vector<RepPtr> mods;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            auto m = share(interval_module(alg, a, b));
            mods.push_back(m);
            resolved.push_back(complex_from_resolution(*resolve_module(m)));
        }
    for (size_t i = 0; i < mods.size(); ++i)
        for (size_t j = 0; j < mods.size(); ++j) {
            auto res = resolve_module(mods[i]);
            CHECK(hom_k_dim(resolved[i], resolved[j]) == hom_dim(*mods[i], *mods[j]));
            CHECK(hom_k_dim(resolved[i], shift_complex(resolved[j], 1)) ==
                  ext_dim(res, 1, mods[j]));
            CHECK(hom_k_dim(resolved[i], shift_complex(resolved[j], 2)) == 0);
            CHECK(hom_k_dim(resolved[i], shift_complex(resolved[j], -1)) == 0);
        }
}

TEST_CASE("mapping cones: triangle maps, contractibility, split cones") {
    auto alg = a2(3);
    auto s1 = resolve_complex(alg, simple_module(alg, 0));
    auto s2 = resolve_complex(alg, simple_module(alg, 1));

    // Cone of the identity is contractible.
    auto cid = mapping_cone(chain_identity(s1));
    CHECK(chain_compose(cid.onto_shift, cid.into_cone).is_zero());
    auto min = minimize_complex(cid.cone);
    CHECK(min.min->is_zero_object());

    // Cone of the zero map is the direct sum Y + shift(X, 1).
    auto c0 = mapping_cone(chain_zero(s1, s2));
    auto sum = complex_direct_sum(alg, {s2, shift_complex(s1, 1)});
    CHECK(complexes_isomorphic(c0.cone, sum.sum));

    // Cone of a nonzero class in Hom(S1, S2[1]): the extension middle is
    // P(1), so the cone is the shifted projective stalk.
    auto H = hom_complexes(s1, shift_complex(s2, 1));
    REQUIRE(H.k_dim == 1);
    ChainMap f = H.from_class({1});
    auto cf = mapping_cone(f);
    auto p1 = shift_complex(resolve_complex(alg, projective_module(alg, 0)), 1);
    CHECK(complexes_isomorphic(cf.cone, p1));
}

TEST_CASE("minimization is a homotopy equivalence with exact transport") {
    auto alg = a3rad2(3);
    auto s1 = resolve_complex(alg, simple_module(alg, 0));
    auto s2 = resolve_complex(alg, simple_module(alg, 1));
    auto s3 = resolve_complex(alg, simple_module(alg, 2));

    // Build a non-minimal complex: cone of a chain self-map of a sum.
    auto sum = complex_direct_sum(alg, {s1, s2, shift_complex(s3, -1)});
    auto H = hom_complexes(sum.sum, sum.sum);
    REQUIRE(static_cast<int>(H.chain_basis.size()) >= 1);
    for (size_t i = 0; i < H.chain_basis.size(); ++i) {
        auto cone = mapping_cone(H.chain_basis[i]).cone;
        auto min = minimize_complex(cone);
        CHECK(complex_is_minimal(*min.min));
        // Homotopy type is preserved: probe Hom dimensions against stalks.
        for (const auto& probe : {s1, s2, s3}) {
            CHECK(hom_k_dim(cone, probe) == hom_k_dim(min.min, probe));
            CHECK(hom_k_dim(probe, cone) == hom_k_dim(probe, min.min));
        }
    }
}

TEST_CASE("complex decomposition recovers shifted summands with certificates") {
    auto alg = a2(3);
    auto s1 = resolve_complex(alg, simple_module(alg, 0));
    auto s2 = resolve_complex(alg, simple_module(alg, 1));
    auto p1 = resolve_complex(alg, projective_module(alg, 0));

    auto sum = complex_direct_sum(alg, {s1, shift_complex(s1, 2), s2, p1});
    auto parts = decompose_complex(sum.sum);
    REQUIRE(parts.size() == 4);
    int found = 0;
    for (const auto& part : parts) {
        if (complexes_isomorphic(part, s1)) ++found;
        if (complexes_isomorphic(part, shift_complex(s1, 2))) ++found;
        if (complexes_isomorphic(part, s2)) ++found;
        if (complexes_isomorphic(part, p1)) ++found;
    }
    CHECK(found == 4);

    // Resolved intervals over A4 are indecomposable as complexes.
    auto h = a4(2);
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            auto x = resolve_complex(h, interval_module(h, a, b));
            CHECK(decompose_complex(x).size() == 1);
        }

    // A cone mixing two degrees decomposes into the expected pieces.
    auto c0 = mapping_cone(chain_zero(s1, s2)).cone;
    auto parts2 = decompose_complex(c0);
    REQUIRE(parts2.size() == 2);
    bool ok = (complexes_isomorphic(parts2[0], s2) &&
               complexes_isomorphic(parts2[1], shift_complex(s1, 1))) ||
              (complexes_isomorphic(parts2[1], s2) &&
               complexes_isomorphic(parts2[0], shift_complex(s1, 1)));
    CHECK(ok);
}

TEST_CASE("two-term complexes over the rad-square algebra behave correctly") {
    // Over A3 with rad^2 = 0 there is a genuine two-term indecomposable
    // complex P(1) -> P(1) shifted around; build one via a cone and check
    // minimization does not destroy it.
    auto alg = a3rad2(2);
    auto s2 = resolve_complex(alg, simple_module(alg, 1));
    auto s3 = resolve_complex(alg, simple_module(alg, 2));

    // Hom(S3, S2[1]) = Ext^1(S3, S2)... S3 = P(3) is projective, so 0.
    CHECK(hom_k_dim(s3, shift_complex(s2, 1)) == 0);
    // Ext^1(S1, S2) = k, Ext^2(S1, S3) = k: check through the homotopy side.
    auto s1 = resolve_complex(alg, simple_module(alg, 0));
    CHECK(hom_k_dim(s1, shift_complex(s2, 1)) == 1);
    CHECK(hom_k_dim(s1, shift_complex(s3, 2)) == 1);
    CHECK(hom_k_dim(s1, shift_complex(s3, 1)) == 0);

    // The cone over the Ext^2 class connects top and socle: it is a genuine
    // indecomposable two-term object of the bounded homotopy category.
    auto H = hom_complexes(s1, shift_complex(s3, 2));
    REQUIRE(H.k_dim == 1);
    auto cone = mapping_cone(H.from_class({1})).cone;
    auto min = minimize_complex(cone).min;
    CHECK(decompose_complex(min).size() == 1);
}
