#include <algorithm>
#include <set>

#include "silt/context.hpp"
#include "silt/error.hpp"

namespace silt {

namespace {

// Cache key tags (shared cache maps, disjoint tag ranges).
constexpr int kStarTag = 10;
constexpr int kConeTag = 11;
constexpr int kCoconeTag = 12;
constexpr int kWedgeLevelTag = 20;
constexpr int kVeeLevelTag = 21;
constexpr int kPresiltingTag = 30;
constexpr int kKeySep = -7;

void append_expr_key(std::vector<int>& key, const ObjectExpr& e) {
    key.push_back(kKeySep);
    for (const auto& [h, m] : e.parts) {
        key.push_back(h);
        key.push_back(m);
    }
}

void append_subcat_key(std::vector<int>& key, const Subcat& s) {
    key.push_back(kKeySep);
    key.insert(key.end(), s.begin(), s.end());
}

void check_handles(const ExtContext& ctx, const Subcat& s) {
    for (int h : s) internal_check(h >= 0 && h < ctx.size(), "subcat handle out of range");
}

bool expr_in_add(const ObjectExpr& e, const Subcat& s) {
    for (const auto& [h, m] : e.parts) {
        (void)m;
        if (!subcat_contains(s, h)) return false;
    }
    return true;
}

// All formal sums of at most `budget` summands (with repetition) from s,
// including the zero object, cheapest first. Deterministic order.
std::vector<ObjectExpr> pair_sums(const Subcat& s, int budget) {
    std::vector<ObjectExpr> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, size_t start) -> void {
        out.push_back(expr_from_handles(cur));
        if (static_cast<int>(cur.size()) == budget) return;
        for (size_t i = start; i < s.size(); ++i) {
            cur.push_back(s[i]);
            self(self, i);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), [](const ObjectExpr& a, const ObjectExpr& b) {
        if (a.summand_count() != b.summand_count())
            return a.summand_count() < b.summand_count();
        return expr_less(a, b);
    });
    return out;
}

// Number of scalar-normalized coefficient vectors (first nonzero entry 1)
// of length dim over F_p, zero vector excluded; cap+1 when above cap.
uint64_t normalized_count(uint32_t p, int dim, uint64_t cap) {
    uint64_t acc = 0, pw = 1;
    for (int i = 0; i < dim; ++i) {
        acc += pw;
        if (acc > cap) return cap + 1;
        if (pw > cap) pw = cap + 1;
        else pw *= p;
    }
    return acc;
}

// Visits every nonzero F_p vector of length dim with first nonzero entry 1
// (one representative per scalar line).
template <typename Fn>
void sweep_nonzero_normalized(uint32_t p, int dim, Fn&& fn) {
    for (int lead = 0; lead < dim; ++lead) {
        std::vector<uint32_t> c(static_cast<size_t>(dim), 0);
        c[static_cast<size_t>(lead)] = 1;
        for (;;) {
            fn(c);
            int i = dim - 1;
            while (i > lead && c[static_cast<size_t>(i)] == p - 1) c[static_cast<size_t>(i--)] = 0;
            if (i == lead) break;
            ++c[static_cast<size_t>(i)];
        }
    }
}

// Identification failures that mean "this conflation leaves the modeled
// universe" rather than "the model is broken": the shift window boundary in
// derived models, and any ambient-universe miss for subcontexts (there the
// morphism simply fails to be an inflation/deflation of the subcategory).
bool boundary_miss(const ExtContext& ctx, const Error& e) {
    if (e.code() == ErrorCode::WindowExhausted) return true;
    if (ctx.parent && (e.code() == ErrorCode::MembershipViolation ||
                       e.code() == ErrorCode::NotFound || e.code() == ErrorCode::CapTooSmall))
        return true;
    return false;
}

enum class ScanOp { Star, Cone, Cocone };

void add_handles(Subcat& out, const ObjectExpr& e) {
    for (const auto& [h, m] : e.parts) {
        (void)m;
        out.push_back(h);
    }
}

// Corner scan for one pair of objects; memoized per (op, ea, eb).
//   Star:   middles B of conflations ea -> B -> eb (all classes in E(eb, ea)).
//   Cone:   third terms C of conflations ea -> eb -> C (all inflations ea -> eb).
//   Cocone: first terms A of conflations A -> ea -> eb (all deflations ea -> eb).
Subcat corner_scan(const ExtContext& ctx, ScanOp op, const ObjectExpr& ea,
                   const ObjectExpr& eb) {
    std::vector<int> key = {op == ScanOp::Star   ? kStarTag
                            : op == ScanOp::Cone ? kConeTag
                                                 : kCoconeTag};
    append_expr_key(key, ea);
    append_expr_key(key, eb);
    {
        std::lock_guard<std::mutex> lk(ctx.cache.mx);
        auto it = ctx.cache.corners.find(key);
        if (it != ctx.cache.corners.end()) return it->second;
    }
    const uint32_t p = ctx.alg->field.p();
    Subcat out;
    if (op == ScanOp::Star) {
        // Split class first: middle ea + eb.
        add_handles(out, ea);
        add_handles(out, eb);
        if (!ea.is_zero() && !eb.is_zero()) {
            ExtClassSpace sp = ctx_ext1_space(ctx, eb, ea);
            if (normalized_count(p, sp.dim, ctx.opt.class_budget) > ctx.opt.class_budget)
                fail(ErrorCode::BudgetExceeded,
                     "extension class sweep over " + expr_to_string(ctx, eb) + " by " +
                         expr_to_string(ctx, ea) + " exceeds the class budget");
            sweep_nonzero_normalized(p, sp.dim, [&](const std::vector<uint32_t>& coeffs) {
                try {
                    Conflation con = ctx_realize(ctx, sp, coeffs);
                    add_handles(out, con.b);
                } catch (const Error& err) {
                    if (!boundary_miss(ctx, err)) throw;
                }
            });
        }
    } else {
        const bool cone = op == ScanOp::Cone;
        std::vector<CtxMorphism> basis = ctx_hom_basis(ctx, ea, eb);
        int dim = static_cast<int>(basis.size());
        if (normalized_count(p, dim, ctx.opt.morphism_budget) + 1 > ctx.opt.morphism_budget)
            fail(ErrorCode::BudgetExceeded,
                 "morphism sweep from " + expr_to_string(ctx, ea) + " to " +
                     expr_to_string(ctx, eb) + " exceeds the morphism budget");
        CtxMorphism zero;
        if (ctx.derived_model())
            zero.der = chain_zero(materialize_complex(ctx, ea), materialize_complex(ctx, eb));
        else
            zero.mod = morphism_zero(materialize_module(ctx, ea), materialize_module(ctx, eb));
        auto corner_of = [&](const CtxMorphism& f) {
            try {
                if (ctx.derived_model()) {
                    ConeResult cr = mapping_cone(*f.der);
                    ComplexPtr target =
                        cone ? cr.cone : shift_complex(cr.cone, -1);
                    ObjectExpr corner = identify_complex(ctx, minimize_complex(target).min);
                    add_handles(out, corner);
                } else if (cone) {
                    if (!f.mod->is_mono()) return;
                    ObjectExpr corner = identify_module(ctx, cokernel(*f.mod).rep);
                    add_handles(out, corner);
                } else {
                    if (!f.mod->is_epi()) return;
                    ObjectExpr corner = identify_module(ctx, kernel(*f.mod).rep);
                    add_handles(out, corner);
                }
            } catch (const Error& err) {
                if (!boundary_miss(ctx, err)) throw;
            }
        };
        corner_of(zero);
        sweep_nonzero_normalized(p, dim, [&](const std::vector<uint32_t>& coeffs) {
            CtxMorphism f = zero;
            for (int i = 0; i < dim; ++i) {
                if (coeffs[static_cast<size_t>(i)] == 0) continue;
                CtxMorphism term =
                    coeffs[static_cast<size_t>(i)] == 1
                        ? basis[static_cast<size_t>(i)]
                        : ctx_mor_scale(ctx, coeffs[static_cast<size_t>(i)],
                                        basis[static_cast<size_t>(i)]);
                f = ctx_mor_add(ctx, f, term);
            }
            corner_of(f);
        });
    }
    out = subcat_normalize(std::move(out));
    std::lock_guard<std::mutex> lk(ctx.cache.mx);
    ctx.cache.corners.emplace(key, out);
    return ctx.cache.corners[key];
}

Subcat scan_union(const ExtContext& ctx, ScanOp op, const Subcat& x, const Subcat& y) {
    Subcat out;
    for (const ObjectExpr& ea : pair_sums(x, ctx.opt.pair_budget))
        for (const ObjectExpr& eb : pair_sums(y, ctx.opt.pair_budget))
            out = subcat_union(out, corner_scan(ctx, op, ea, eb));
    return out;
}

// Minimal-approximation tower level (exact for presilting x): number of
// steps until the running corner lands in add(x); -1 when it never does.
int tower_level(const ExtContext& ctx, Side side, const Subcat& x, const ObjectExpr& e) {
    std::vector<int> key = {side == Side::Right ? kWedgeLevelTag : kVeeLevelTag};
    append_subcat_key(key, x);
    append_expr_key(key, e);
    {
        std::lock_guard<std::mutex> lk(ctx.cache.mx);
        auto it = ctx.cache.levels.find(key);
        if (it != ctx.cache.levels.end()) return it->second;
    }
    int level = -2;
    ObjectExpr cur = e;
    std::set<std::vector<std::pair<int, int>>> seen;
    for (int step = 0; step <= ctx.opt.tower_cap && level == -2; ++step) {
        if (expr_in_add(cur, x)) {
            level = step;
            break;
        }
        if (!seen.insert(cur.parts).second) {
            level = -1; // periodic tower: never lands in add(x)
            break;
        }
        try {
            ApproxResult ar = ctx_approx(ctx, side == Side::Right ? Side::Right : Side::Left,
                                         x, cur, true);
            if (!ar.good) {
                level = -1;
                break;
            }
            if (side == Side::Right) {
                Conflation con = conflation_from_deflation(ctx, ar.map);
                cur = con.a;
            } else {
                Conflation con = conflation_from_inflation(ctx, ar.map);
                cur = con.c;
            }
        } catch (const Error& err) {
            if (!boundary_miss(ctx, err)) throw;
            level = -1; // tower left the modeled universe
            break;
        }
    }
    if (level == -2)
        fail(ErrorCode::NoFiniteBound,
             "approximation tower of " + expr_to_string(ctx, e) + " over " +
                 subcat_to_string(ctx, x) + " did not settle within the cap");
    std::lock_guard<std::mutex> lk(ctx.cache.mx);
    ctx.cache.levels.emplace(key, level);
    return level;
}

void require_presilting(const ExtContext& ctx, const Subcat& x, const char* what) {
    if (!is_presilting_subcat(ctx, x))
        fail(ErrorCode::HypothesisFailed,
             std::string(what) + " towers need a presilting argument, and " +
                 subcat_to_string(ctx, x) + " is not presilting");
}

} // namespace

Subcat closure_star(const ExtContext& ctx, const Subcat& x, const Subcat& y) {
    Subcat xs = subcat_normalize(x), ys = subcat_normalize(y);
    check_handles(ctx, xs);
    check_handles(ctx, ys);
    return scan_union(ctx, ScanOp::Star, xs, ys);
}

Subcat closure_cone(const ExtContext& ctx, const Subcat& x, const Subcat& y) {
    Subcat xs = subcat_normalize(x), ys = subcat_normalize(y);
    check_handles(ctx, xs);
    check_handles(ctx, ys);
    return scan_union(ctx, ScanOp::Cone, xs, ys);
}

Subcat closure_cocone(const ExtContext& ctx, const Subcat& x, const Subcat& y) {
    Subcat xs = subcat_normalize(x), ys = subcat_normalize(y);
    check_handles(ctx, xs);
    check_handles(ctx, ys);
    return scan_union(ctx, ScanOp::Cocone, xs, ys);
}

int wedge_level(const ExtContext& ctx, const Subcat& x, const ObjectExpr& e) {
    Subcat xs = subcat_normalize(x);
    check_handles(ctx, xs);
    require_presilting(ctx, xs, "right approximation");
    return tower_level(ctx, Side::Right, xs, e);
}

int vee_level(const ExtContext& ctx, const Subcat& x, const ObjectExpr& e) {
    Subcat xs = subcat_normalize(x);
    check_handles(ctx, xs);
    require_presilting(ctx, xs, "left approximation");
    return tower_level(ctx, Side::Left, xs, e);
}

namespace {

// Shared engine for wedge/vee: exact towers for presilting x, iterated
// corner scans otherwise. n < 0 means "to the fixpoint".
Subcat closure_tower(const ExtContext& ctx, Side side, const Subcat& x, int n) {
    Subcat xs = subcat_normalize(x);
    check_handles(ctx, xs);
    if (n == 0) return xs;
    if (is_presilting_subcat(ctx, xs)) {
        Subcat out;
        for (int h = 0; h < ctx.size(); ++h) {
            int l = tower_level(ctx, side, xs, expr_of(h));
            if (l >= 0 && (n < 0 || l <= n)) out.push_back(h);
        }
        return out; // ascending already
    }
    Subcat w = xs;
    for (int l = 0; n < 0 || l < n; ++l) {
        Subcat grown = side == Side::Right ? closure_cone(ctx, w, xs)
                                           : closure_cocone(ctx, xs, w);
        Subcat next = subcat_union(w, grown);
        if (next == w) break;
        w = std::move(next);
    }
    return w;
}

} // namespace

Subcat closure_wedge(const ExtContext& ctx, const Subcat& x, int n) {
    internal_check(n >= 0, "wedge level must be >= 0");
    return closure_tower(ctx, Side::Right, x, n);
}

Subcat closure_vee(const ExtContext& ctx, const Subcat& x, int n) {
    internal_check(n >= 0, "vee level must be >= 0");
    return closure_tower(ctx, Side::Left, x, n);
}

Subcat closure_wedge_inf(const ExtContext& ctx, const Subcat& x) {
    return closure_tower(ctx, Side::Right, x, -1);
}

Subcat closure_vee_inf(const ExtContext& ctx, const Subcat& x) {
    return closure_tower(ctx, Side::Left, x, -1);
}

Subcat ctx_perp(const ExtContext& ctx, Side side, const Subcat& x, int n) {
    Subcat xs = subcat_normalize(x);
    check_handles(ctx, xs);
    internal_check(n >= 0, "perp threshold must be >= 0");
    Subcat out;
    for (int h = 0; h < ctx.size(); ++h) {
        bool ok = true;
        for (int xh : xs) {
            ok = side == Side::Right
                     ? ctx_ext_vanishes_above(ctx, expr_of(xh), expr_of(h), n)
                     : ctx_ext_vanishes_above(ctx, expr_of(h), expr_of(xh), n);
            if (!ok) break;
        }
        if (ok) out.push_back(h);
    }
    return out;
}

Subcat thick_closure(const ExtContext& ctx, const Subcat& x) {
    Subcat s = subcat_normalize(x);
    check_handles(ctx, s);
    Subcat all;
    for (int h = 0; h < ctx.size(); ++h) all.push_back(h);
    bool grew = true;
    while (grew) {
        grew = false;
        for (ScanOp op : {ScanOp::Star, ScanOp::Cone, ScanOp::Cocone}) {
            std::vector<ObjectExpr> sums = pair_sums(s, ctx.opt.pair_budget);
            for (const ObjectExpr& ea : sums) {
                for (const ObjectExpr& eb : sums) {
                    if (s == all) return s;
                    Subcat next = subcat_union(s, corner_scan(ctx, op, ea, eb));
                    if (next != s) {
                        s = std::move(next);
                        grew = true;
                    }
                }
            }
        }
    }
    return s;
}

bool is_resolving(const ExtContext& ctx, const Subcat& x) {
    Subcat xs = subcat_normalize(x);
    check_handles(ctx, xs);
    if (!ctx.projectives_known())
        fail(ErrorCode::NoProjectives,
             "resolving test needs the context's projectives");
    if (!subcat_subset(ctx.projective_handles(), xs)) return false;
    std::vector<ObjectExpr> sums = pair_sums(xs, ctx.opt.pair_budget);
    for (ScanOp op : {ScanOp::Star, ScanOp::Cocone})
        for (const ObjectExpr& ea : sums)
            for (const ObjectExpr& eb : sums)
                if (!subcat_subset(corner_scan(ctx, op, ea, eb), xs)) return false;
    return true;
}

bool is_presilting_subcat(const ExtContext& ctx, const Subcat& m) {
    Subcat ms = subcat_normalize(m);
    check_handles(ctx, ms);
    std::vector<int> key = {kPresiltingTag};
    append_subcat_key(key, ms);
    {
        std::lock_guard<std::mutex> lk(ctx.cache.mx);
        auto it = ctx.cache.flags.find(key);
        if (it != ctx.cache.flags.end()) return it->second != 0;
    }
    bool ok = true;
    for (int a : ms) {
        for (int b : ms) {
            if (!ctx_ext_vanishes_above(ctx, expr_of(a), expr_of(b), 0)) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
    }
    std::lock_guard<std::mutex> lk(ctx.cache.mx);
    ctx.cache.flags.emplace(key, ok ? 1 : 0);
    return ok;
}

} // namespace silt
