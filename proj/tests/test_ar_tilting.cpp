#include "doctest.h"

#include "silt/context.hpp"
#include "silt/error.hpp"
#include "silt/silting.hpp"

#include <algorithm>

using namespace silt;

namespace {

AlgebraPtr an(int n, uint32_t p = 2) { return build_algebra(Quiver::linear_an(n), p, {}); }
AlgebraPtr a3rad2(uint32_t p = 2) {
    return build_algebra_named(Quiver::linear_an(3), p, {{"a1", "a2"}});
}

int h(const ExtContext& ctx, const std::string& name) {
    int id = ctx.handle_by_name(name);
    REQUIRE(id >= 0);
    return id;
}

} // namespace

TEST_CASE("tilting counts over linear path algebras follow the Catalan numbers") {
    // Independent enumeration strategies must agree set for set.
    TiltingEnumeration t2 = tilting_modules(an(2));
    CHECK(t2.agree);
    CHECK(t2.brute_force.size() == 2);

    TiltingEnumeration t3 = tilting_modules(an(3));
    CHECK(t3.agree);
    CHECK(t3.brute_force.size() == 5);

    TiltingEnumeration t4 = tilting_modules(an(4));
    CHECK(t4.agree);
    CHECK(t4.brute_force.size() == 14);

    // The projectives are always among them, and every entry has full rank.
    const ExtContext& ctx = *t4.ctx;
    CHECK(std::binary_search(t4.brute_force.begin(), t4.brute_force.end(),
                             ctx.projective_handles()));
    for (const Subcat& t : t4.brute_force) CHECK(t.size() == 4);
}

TEST_CASE("tilting enumeration over a radical-square-zero Nakayama algebra") {
    TiltingEnumeration t = tilting_modules(a3rad2());
    CHECK(t.agree);
    const ExtContext& ctx = *t.ctx;
    CHECK(ctx.size() == 5); // global dimension 2: every module has finite pd
    CHECK(std::binary_search(t.brute_force.begin(), t.brute_force.end(),
                             ctx.projective_handles()));
    for (const Subcat& m : t.brute_force) {
        CHECK(m.size() == 3);
        CHECK(is_silting(ctx, m).ok());
    }
}

TEST_CASE("resolving correspondence over the A2 and A3 path algebras") {
    for (int n : {2, 3}) {
        auto ctx = make_pinfty_context(an(n));
        ResolvingCorrespondenceReport rep = resolving_correspondence(*ctx);
        CHECK(rep.ok());
        CHECK(rep.siltings.size() == rep.resolving.size());
        CHECK(rep.siltings.size() == (n == 2 ? 2 : 5));
    }
}

TEST_CASE("resolving correspondence over the radical-square-zero algebra") {
    auto ctx = make_pinfty_context(a3rad2());
    ResolvingCorrespondenceReport rep = resolving_correspondence(*ctx);
    CHECK(rep.ok());
    CHECK(rep.siltings.size() == rep.resolving.size());

    // Spot checks of the two maps on the extremes.
    Subcat projs = ctx->projective_handles();
    Subcat all(static_cast<size_t>(ctx->size()));
    for (int i = 0; i < ctx->size(); ++i) all[i] = i;
    CHECK(resolving_of_silting(*ctx, projs) == projs);
    CHECK(silting_of_resolving(*ctx, projs) == projs);
    // The whole category is resolving; its silting is the rigid core.
    Subcat core = silting_of_resolving(*ctx, all);
    CHECK(is_silting(*ctx, core).ok());
    CHECK(resolving_of_silting(*ctx, core) == all);
}

TEST_CASE("vee-closures of siltings are resolving and recover the silting") {
    auto ctx = make_pinfty_context(an(3));
    SiltingQuiver q = silting_quiver(*ctx, ctx->projective_handles());
    REQUIRE(q.complete);
    for (const Subcat& m : q.vertices) {
        Subcat x = resolving_of_silting(*ctx, m);
        CHECK(is_resolving(*ctx, x));
        CHECK(silting_of_resolving(*ctx, x) == m);
    }
}
