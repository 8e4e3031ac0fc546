#include "silt/standardization.hpp"

#include "silt/complex.hpp"
#include "silt/error.hpp"
#include "silt/rep.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace silt {

namespace {

Subcat universe_subcat(const ExtContext& ctx) {
    Subcat all(static_cast<size_t>(ctx.size()));
    std::iota(all.begin(), all.end(), 0);
    return all;
}

CtxMorphism conflation_first_map(const Conflation& con) {
    CtxMorphism f;
    if (con.ses) f.mod = con.ses->f;
    else f.der = *con.der_f;
    return f;
}

CtxMorphism conflation_second_map(const Conflation& con) {
    CtxMorphism g;
    if (con.ses) g.mod = con.ses->g;
    else g.der = *con.der_g;
    return g;
}

// Identity conflation for empty towers: 0 -> e -> e when the identity sits
// on the right (deflation side), e -> e -> 0 when it sits on the left.
Conflation trivial_conflation(const ExtContext& fctx, const ObjectExpr& e, bool identity_right) {
    Conflation con;
    con.a = identity_right ? ObjectExpr{} : e;
    con.b = e;
    con.c = identity_right ? e : ObjectExpr{};
    if (fctx.derived_model()) {
        ComplexPtr x = materialize_complex(fctx, e);
        ComplexPtr z = complex_zero(fctx.alg);
        con.der_f = identity_right ? chain_zero(z, x) : chain_identity(x);
        con.der_g = identity_right ? chain_identity(x) : chain_zero(x, z);
    } else {
        RepPtr x = materialize_module(fctx, e);
        RepPtr z = share(Representation::zero(fctx.alg));
        ShortExact ses;
        ses.a = identity_right ? z : x;
        ses.b = x;
        ses.c = identity_right ? x : z;
        ses.f = identity_right ? morphism_zero(z, x) : morphism_identity(x);
        ses.g = identity_right ? morphism_identity(x) : morphism_zero(x, z);
        con.ses = std::move(ses);
    }
    return con;
}

// All F_p coefficient vectors with first nonzero entry 1 (one per scalar
// line), lexicographic.
std::vector<std::vector<uint32_t>> scalar_lines(const ExtContext& ctx, int dim) {
    uint64_t p = ctx.alg->field.p();
    std::vector<std::vector<uint32_t>> out;
    for (int lead = 0; lead < dim; ++lead) {
        uint64_t total = 1;
        for (int t = lead + 1; t < dim; ++t) {
            total *= p;
            if (total > ctx.opt.morphism_budget)
                fail(ErrorCode::BudgetExceeded, "morphism sweep exceeds morphism_budget");
        }
        for (uint64_t mask = 0; mask < total; ++mask) {
            std::vector<uint32_t> v(static_cast<size_t>(dim), 0);
            v[lead] = 1;
            uint64_t rest = mask;
            for (int t = lead + 1; t < dim; ++t) {
                v[t] = static_cast<uint32_t>(rest % p);
                rest /= p;
            }
            out.push_back(std::move(v));
            if (out.size() > ctx.opt.morphism_budget)
                fail(ErrorCode::BudgetExceeded, "morphism sweep exceeds morphism_budget");
        }
    }
    return out;
}

CtxMorphism combine_morphisms(const ExtContext& ctx, const std::vector<CtxMorphism>& basis,
                              const std::vector<uint32_t>& coeffs) {
    internal_check(!basis.empty() && basis.size() == coeffs.size(),
                   "morphism combination shape mismatch");
    CtxMorphism acc = ctx_mor_scale(ctx, coeffs[0], basis[0]);
    for (size_t i = 1; i < basis.size(); ++i)
        acc = ctx_mor_add(ctx, acc, ctx_mor_scale(ctx, coeffs[i], basis[i]));
    return acc;
}

} // namespace

ThetaSet check_standardizable(const ContextPtr& parent, const std::vector<int>& objects) {
    internal_check(parent != nullptr, "standardizable check needs a parent context");
    const ExtContext& ctx = *parent;
    ThetaSet ts;
    ts.parent = parent;
    ts.objects = objects;
    ts.s1 = true;
    ts.s2 = true;
    ts.s3 = true;
    int n = static_cast<int>(objects.size());
    for (int i = 0; i < n; ++i)
        if (objects[i] < 0 || objects[i] >= ctx.size()) {
            ts.s1 = false;
            ts.failures.push_back({1, i + 1, 0, 0});
        }
    if (!ts.s1) return ts;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i > j) {
                int d = ctx_hom_dim(ctx, expr_of(objects[i]), expr_of(objects[j]));
                if (d > 0) {
                    ts.s2 = false;
                    ts.failures.push_back({2, i + 1, j + 1, d});
                }
            }
            if (i >= j) {
                int d = ctx_ext_dim(ctx, 1, expr_of(objects[i]), expr_of(objects[j]));
                if (d > 0) {
                    ts.s3 = false;
                    ts.failures.push_back({3, i + 1, j + 1, d});
                }
            }
        }
    return ts;
}

ContextPtr f_theta(const ThetaSet& theta) {
    if (!theta.ok())
        fail(ErrorCode::HypothesisFailed,
             "the ordered collection does not satisfy the triangular vanishing conditions");
    return make_ftheta_context(theta.parent, theta.objects);
}

std::vector<Conflation> theta_filtration(const ExtContext& fctx, const ObjectExpr& e,
                                         const std::vector<int>& levels) {
    internal_check(!fctx.theta.empty(), "filtration peel needs a generated subcontext");
    std::vector<Conflation> chain;
    ObjectExpr cur = e;
    int guard = 0;
    while (!cur.is_zero()) {
        if (++guard > fctx.opt.tower_cap)
            fail(ErrorCode::NonTermination, "generator filtration peel did not terminate");
        bool advanced = false;
        for (int l : levels) {
            internal_check(l >= 1 && l <= static_cast<int>(fctx.theta.size()),
                           "filtration level out of range");
            ObjectExpr tl = expr_of(fctx.theta[l - 1]);
            std::vector<CtxMorphism> basis = ctx_hom_basis(fctx, cur, tl);
            if (basis.empty()) continue;
            for (const auto& coeffs : scalar_lines(fctx, static_cast<int>(basis.size()))) {
                CtxMorphism f = combine_morphisms(fctx, basis, coeffs);
                if (!ctx_is_deflation(fctx, f)) continue;
                Conflation con = conflation_from_deflation(fctx, f);
                chain.push_back(std::move(con));
                cur = chain.back().a;
                advanced = true;
                break;
            }
            if (advanced) break;
        }
        if (!advanced)
            fail(ErrorCode::NonTermination,
                 "no generator quotient available: object is not filtered within the allowed tail");
    }
    return chain;
}

std::vector<Conflation> theta_filtration(const ExtContext& fctx, const ObjectExpr& e) {
    std::vector<int> levels(fctx.theta.size());
    std::iota(levels.begin(), levels.end(), 1);
    return theta_filtration(fctx, e, levels);
}

namespace {

// Level (1-based) of the quotient of a peel conflation: its third corner is
// a positive multiple of a single generator.
int quotient_level(const ExtContext& fctx, const Conflation& con) {
    internal_check(con.c.parts.size() == 1, "peel quotient is not a single generator power");
    int h = con.c.parts[0].first;
    for (size_t l = 0; l < fctx.theta.size(); ++l)
        if (fctx.theta[l] == h) return static_cast<int>(l) + 1;
    fail(ErrorCode::InternalError, "peel quotient is not a generator");
}

GeneratorResult build_generator(const ExtContext& fctx, bool projective_side) {
    int n = static_cast<int>(fctx.theta.size());
    internal_check(n > 0, "generator construction needs a generated subcontext");
    GeneratorResult out;
    out.pieces.assign(static_cast<size_t>(n), ObjectExpr{});

    for (int step = 0; step < n; ++step) {
        int i = projective_side ? n - step : step + 1; // n..1 or 1..n
        ObjectExpr cur = expr_of(fctx.theta[i - 1]);
        std::vector<Conflation> tower;
        auto js = [&]() {
            std::vector<int> order;
            if (projective_side)
                for (int j = i + 1; j <= n; ++j) order.push_back(j);
            else
                for (int j = i - 1; j >= 1; --j) order.push_back(j);
            return order;
        }();
        for (int j : js) {
            if (cur.is_zero()) break;
            ObjectExpr tj = expr_of(fctx.theta[j - 1]);
            // Projective side kills E(current, T(j)); injective side kills
            // E(T(j), current).
            int d = projective_side ? ctx_ext_dim(fctx, 1, cur, tj)
                                    : ctx_ext_dim(fctx, 1, tj, cur);
            if (d == 0) continue;
            UniversalExtension ue = projective_side ? universal_extension(fctx, cur, tj)
                                                    : universal_coextension(fctx, cur, tj);
            internal_check(ue.surjective, "universal glue map is not surjective");
            int after = projective_side ? ctx_ext_dim(fctx, 1, ue.middle, tj)
                                        : ctx_ext_dim(fctx, 1, tj, ue.middle);
            if (after != 0)
                fail(ErrorCode::NonTermination,
                     "extension space failed to vanish after a universal glue step at index " +
                         std::to_string(i));
            tower.push_back(ue.glue);
            cur = ue.middle;
        }
        out.pieces[static_cast<size_t>(i - 1)] = cur;

        StdResolutionRecord rec;
        rec.index = i;
        rec.tower = tower;
        if (tower.empty()) {
            rec.con = trivial_conflation(fctx, cur, /*identity_right=*/projective_side);
        } else if (projective_side) {
            // Composite deflation P(i) -> ... -> T(i) of the tower's second
            // maps; its cocone is K(i).
            CtxMorphism comp = conflation_second_map(tower[0]);
            for (size_t t = 1; t < tower.size(); ++t)
                comp = ctx_mor_compose(fctx, comp, conflation_second_map(tower[t]));
            internal_check(ctx_is_deflation(fctx, comp), "tower composite is not a deflation");
            rec.con = conflation_from_deflation(fctx, comp);
        } else {
            // Composite inflation T(i) -> ... -> I(i); its cone is C(i).
            CtxMorphism comp = conflation_first_map(tower[0]);
            for (size_t t = 1; t < tower.size(); ++t)
                comp = ctx_mor_compose(fctx, conflation_first_map(tower[t]), comp);
            internal_check(ctx_is_inflation(fctx, comp), "tower composite is not an inflation");
            rec.con = conflation_from_inflation(fctx, comp);
        }
        // Filtration of the third corner within the allowed generator tail.
        std::vector<int> tail;
        if (projective_side)
            for (int l = i + 1; l <= n; ++l) tail.push_back(l);
        else
            for (int l = 1; l < i; ++l) tail.push_back(l);
        const ObjectExpr& corner = projective_side ? rec.con.a : rec.con.c;
        rec.filtration = theta_filtration(fctx, corner, tail);
        for (const Conflation& pc : rec.filtration)
            rec.quotient_levels.push_back(quotient_level(fctx, pc));
        out.records.push_back(std::move(rec));
    }

    std::vector<int> handles;
    for (const ObjectExpr& piece : out.pieces)
        for (const auto& [h, m] : piece.parts) {
            (void)m;
            handles.push_back(h);
        }
    out.basic = subcat_normalize(handles);

    Subcat all = universe_subcat(fctx);
    if (projective_side) {
        for (int x : all)
            for (int pb : out.basic)
                internal_check(ctx_ext_dim(fctx, 1, expr_of(pb), expr_of(x)) == 0,
                               "projective generator has a nonzero extension into the universe");
        internal_check(closure_cone(fctx, all, out.basic) == all,
                       "projective generator does not generate by cones");
        if (!fctx.projectives_known())
            fctx.provide_projectives(out.basic);
        else
            internal_check(fctx.projective_handles() == out.basic,
                           "projective generator disagrees with the wired projectives");
    } else {
        for (int x : all)
            for (int ib : out.basic)
                internal_check(ctx_ext_dim(fctx, 1, expr_of(x), expr_of(ib)) == 0,
                               "injective cogenerator receives a nonzero extension");
        internal_check(closure_cocone(fctx, out.basic, all) == all,
                       "injective cogenerator does not cogenerate by cocones");
    }
    return out;
}

} // namespace

GeneratorResult projective_generator(const ExtContext& fctx) {
    return build_generator(fctx, /*projective_side=*/true);
}

GeneratorResult injective_cogenerator(const ExtContext& fctx) {
    return build_generator(fctx, /*projective_side=*/false);
}

StdSilting std_silting(const ExtContext& fctx) {
    StdSilting out;
    out.projective = projective_generator(fctx); // wires the projectives
    out.injective = injective_cogenerator(fctx);
    out.greatest = is_silting(fctx, out.projective.basic);
    out.least = is_silting(fctx, out.injective.basic);
    internal_check(out.greatest.ok(), "projective generator is not silting");
    internal_check(out.least.ok(), "injective cogenerator is not silting");

    SiltingQuiver q = silting_quiver(fctx, out.projective.basic, 4096);
    internal_check(q.complete, "silting enumeration of the subcontext is incomplete");
    bool least_seen = false;
    for (const Subcat& v : q.vertices) {
        internal_check(silting_geq(fctx, out.projective.basic, v),
                       "projective generator is not greatest among enumerated siltings");
        internal_check(silting_geq(fctx, v, out.injective.basic),
                       "injective cogenerator is not least among enumerated siltings");
        if (v == out.least.subcat) least_seen = true;
    }
    internal_check(least_seen, "injective cogenerator unreachable by mutation");
    out.poset_size = static_cast<int>(q.vertices.size());
    return out;
}

} // namespace silt
