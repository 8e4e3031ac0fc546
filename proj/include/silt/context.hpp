#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "silt/complex.hpp"
#include "silt/decompose.hpp"

namespace silt {

// ===========================================================================
// Extension contexts.
//
// An ExtContext packages one concrete extriangulated category at desk scale:
// a finite universe of indecomposable objects (handles 0..size()-1), exact
// Hom and extension spaces over F_p, realization of extension classes as
// conflations, inflation/deflation tests, minimal approximations, and
// identification of arbitrary objects against the universe. Four kinds:
//
//   Module   all indecomposable modules of total dimension <= dim_cap;
//            E^k = Ext^k, conflations are short exact sequences.
//   Derived  shifted stalk complexes resolve(class)[s] for s in a window;
//            E^k(X, Y) = Hom(X, Sigma^k Y) in the homotopy category of
//            bounded complexes of projectives; every morphism is both an
//            inflation and a deflation.
//   PInfty   modules of finite projective dimension inside a Module parent;
//            E^k ambient in every degree.
//   FTheta   an extension-closed subcategory of a Module or Derived parent;
//            E^1 is the ambient restriction, higher E^k are computed by
//            syzygy shifting along the context's projectives once those
//            have been provided (see provide_projectives).
//
// Contexts are immutable after construction; mutable members are memoization
// caches guarded by a mutex. All operations are free functions.
// ===========================================================================

enum class ContextKind { Module, Derived, FTheta, PInfty };
const char* context_kind_name(ContextKind k);

struct ContextOptions {
    int dim_cap = 8;                    // module-class enumeration cap
    int window_lo = -1;                 // derived shift window, inclusive
    int window_hi = 1;
    uint64_t class_budget = 4096;       // extension classes swept per space
    uint64_t morphism_budget = 1 << 14; // morphisms swept per hom space
    int pair_budget = 2;                // summands per side in closure scans
    int resolution_cap = 32;
    int tower_cap = 64;                 // approximation/syzygy tower cap
    DecomposeBudget decompose;
};

// Formal direct sum of universe objects: (handle, multiplicity) pairs,
// sorted by handle, multiplicities positive. Empty = zero object.
struct ObjectExpr {
    std::vector<std::pair<int, int>> parts;

    bool is_zero() const { return parts.empty(); }
    int summand_count() const;
    std::vector<int> handle_set() const;
};

ObjectExpr expr_of(int handle, int mult = 1);
ObjectExpr expr_from_handles(const std::vector<int>& handles); // repeats allowed
ObjectExpr expr_add(const ObjectExpr& a, const ObjectExpr& b);
bool expr_equal(const ObjectExpr& a, const ObjectExpr& b);
bool expr_less(const ObjectExpr& a, const ObjectExpr& b); // lexicographic order

// Subcategory: the sorted set of its indecomposable handles (add-closure
// implied).
using Subcat = std::vector<int>;
Subcat subcat_normalize(std::vector<int> handles);
bool subcat_contains(const Subcat& s, int h);
bool subcat_subset(const Subcat& a, const Subcat& b);
Subcat subcat_union(const Subcat& a, const Subcat& b);
Subcat subcat_intersect(const Subcat& a, const Subcat& b);

class ExtContext;
using ContextPtr = std::shared_ptr<const ExtContext>;

// Morphism between materialized objects. Exactly one payload is set: module
// morphisms for module-model contexts, chain maps (read up to homotopy) for
// derived-model ones.
struct CtxMorphism {
    std::optional<ModuleMorphism> mod;
    std::optional<ChainMap> der;

    bool is_module() const { return mod.has_value(); }
};

CtxMorphism ctx_mor_compose(const ExtContext& ctx, const CtxMorphism& g, const CtxMorphism& f);
CtxMorphism ctx_mor_add(const ExtContext& ctx, const CtxMorphism& f, const CtxMorphism& g);
CtxMorphism ctx_mor_scale(const ExtContext& ctx, uint32_t c, const CtxMorphism& f);

// Realized conflation A -> B -> C with identified corners. Module-model
// contexts carry a short exact sequence; derived-model ones carry the two
// chain maps of a triangle rotation.
struct Conflation {
    ObjectExpr a, b, c;
    std::optional<ShortExact> ses;
    std::optional<ChainMap> der_f; // A -> B
    std::optional<ChainMap> der_g; // B -> C
};

// E(C, A) = E^1(C, A) with an enumerable basis of classes.
struct ExtClassSpace {
    ObjectExpr c, a;
    int dim = 0;
    std::shared_ptr<const ExtSpace> mod;        // module model
    std::shared_ptr<const ComplexHomSpace> der; // derived model: Hom(C, Sigma A)
    ComplexPtr c_cx, sa_cx;                     // materialized endpoints
};

enum class Side { Left, Right };

struct ApproxResult {
    Side side = Side::Left;
    ObjectExpr d;      // approximating object
    CtxMorphism map;   // X -> D (left) or D -> X (right)
    bool minimal = true;
    bool good = false; // left: map is an inflation; right: a deflation
};

class ExtContext {
public:
    ContextKind kind = ContextKind::Module;
    AlgebraPtr alg;
    ContextOptions opt;

    // Sub-context wiring (FTheta, PInfty). Parents are root contexts
    // (Module or Derived).
    ContextPtr parent;
    std::vector<int> to_parent; // local handle -> parent handle
    std::vector<int> theta;     // FTheta: ordered generating handles (local)

    // Universe storage (set by the factories; treat as read-only).
    std::shared_ptr<ModuleRegistry> registry;     // module classes (root ctx)
    std::vector<std::pair<int, int>> der_handles; // Derived: (class, shift)
    std::vector<std::string> names;
    std::map<std::string, int> name_index;
    std::map<int, int> parent_to_local;
    bool universe_complete = true; // Derived: stalk shifts exhaust the window

    int size() const { return static_cast<int>(names.size()); }
    const std::string& name(int h) const;
    int handle_by_name(const std::string& n) const; // -1 if absent
    int local_of_parent(int parent_handle) const;   // -1 if absent

    // True when objects are modeled as complexes (Derived, FTheta over
    // Derived).
    bool derived_model() const;
    // Root context actually holding the models (this, or the parent).
    const ExtContext& root() const;
    int root_handle(int h) const;

    RepPtr rep_of(int h) const;         // module model
    ComplexPtr complex_of(int h) const; // derived model
    int class_of(int h) const;          // Derived: module-class id
    int shift_of(int h) const;          // Derived: shift
    int handle_of_class_shift(int cls, int s) const; // -1 if absent
    int obj_dim(int h) const;           // total dimension of the model

    const Subcat& projective_handles() const;
    bool projectives_known() const;
    // One-shot wiring of an FTheta context's projectives (computed by the
    // standardization layer right after construction).
    void provide_projectives(Subcat handles) const;

    // Memoization caches (internal).
    struct Caches {
        std::mutex mx;
        std::map<int, ResolutionPtr> resolution;              // by class id
        std::map<int, ComplexPtr> complex;                    // by handle
        std::map<std::vector<int>, int> dims;                 // hom/ext dims
        std::map<std::vector<int>, std::vector<int>> corners; // closure scans
        std::map<std::vector<int>, int> levels;               // tower levels
        std::map<std::vector<int>, int> flags;                // misc booleans
    };
    mutable Caches cache;

    mutable Subcat projs;
    mutable bool projs_set = false;
};

// ---- construction ---------------------------------------------------------
ContextPtr make_module_context(const AlgebraPtr& alg, ContextOptions opt = {});
ContextPtr make_derived_context(const AlgebraPtr& alg, ContextOptions opt = {});
ContextPtr make_pinfty_context(const AlgebraPtr& alg, ContextOptions opt = {});
// Extension-closed subcontext of `parent` generated by the ordered objects
// `theta_parent_handles`. The universe is the extension closure (fixpoint
// over all realized extension classes); projectives start out unknown.
ContextPtr make_ftheta_context(const ContextPtr& parent,
                               const std::vector<int>& theta_parent_handles);

// ---- objects ---------------------------------------------------------------
RepPtr materialize_module(const ExtContext& ctx, const ObjectExpr& e);
ComplexPtr materialize_complex(const ExtContext& ctx, const ObjectExpr& e);
// Decompose and match against the universe. Raises CapTooSmall /
// WindowExhausted / NotFound / MembershipViolation as appropriate.
ObjectExpr identify_module(const ExtContext& ctx, const RepPtr& m);
ObjectExpr identify_complex(const ExtContext& ctx, const ComplexPtr& x);
int expr_dim(const ExtContext& ctx, const ObjectExpr& e);
ObjectExpr shift_expr(const ExtContext& ctx, const ObjectExpr& e, int n); // Derived
std::string expr_to_string(const ExtContext& ctx, const ObjectExpr& e);
std::string subcat_to_string(const ExtContext& ctx, const Subcat& s);
// Resolution of a module class (root module registry id), cached.
ResolutionPtr ctx_resolution(const ExtContext& ctx, int cls);

// ---- hom and ext -----------------------------------------------------------
int ctx_hom_dim(const ExtContext& ctx, const ObjectExpr& x, const ObjectExpr& y);
// E^k for k >= 1. FTheta contexts need their projectives for k >= 2.
int ctx_ext_dim(const ExtContext& ctx, int k, const ObjectExpr& x, const ObjectExpr& y);
// Basis of Hom(X, Y) as materialized morphisms (homotopy-class
// representatives in derived models).
std::vector<CtxMorphism> ctx_hom_basis(const ExtContext& ctx, const ObjectExpr& x,
                                       const ObjectExpr& y);
// E^k(x, y) = 0 for every k > n (finite vanishing bound per kind; raises
// NoFiniteBound when no bound exists).
bool ctx_ext_vanishes_above(const ExtContext& ctx, const ObjectExpr& x,
                            const ObjectExpr& y, int n);

// ---- conflations -----------------------------------------------------------
ExtClassSpace ctx_ext1_space(const ExtContext& ctx, const ObjectExpr& c,
                             const ObjectExpr& a);
Conflation ctx_realize(const ExtContext& ctx, const ExtClassSpace& sp,
                       const std::vector<uint32_t>& coeffs);
// Coordinates of a realized conflation's class over sp's class basis
// (module-model contexts).
std::vector<uint32_t> ctx_class_of_conflation(const ExtContext& ctx,
                                              const ExtClassSpace& sp,
                                              const Conflation& con);
bool ctx_is_inflation(const ExtContext& ctx, const CtxMorphism& f);
bool ctx_is_deflation(const ExtContext& ctx, const CtxMorphism& f);
Conflation conflation_from_inflation(const ExtContext& ctx, const CtxMorphism& f);
Conflation conflation_from_deflation(const ExtContext& ctx, const CtxMorphism& g);

// ---- approximation ---------------------------------------------------------
// Left: X -> D0 through which every X -> add(D) factors; Right: D0 -> X.
// `minimal` strips redundant summand copies greedily (exact at desk scale:
// a non-minimal approximation always has a droppable copy).
ApproxResult ctx_approx(const ExtContext& ctx, Side side, const Subcat& d,
                        const ObjectExpr& x, bool minimal = true);

// ---- closure operators (closure.cpp) ---------------------------------------
// star(X, Y): summands of middles of conflations X' -> M -> Y'.
// cone(X, Y): summands of third terms of conflations X' -> Y' -> C.
// cocone(X, Y): summands of first terms of conflations A -> X' -> Y'.
// All scans run over pairs of objects assembled from at most
// opt.pair_budget summands per side, sweeping all extension classes
// (star) or all morphisms (cone/cocone) over F_p; memoized per pair.
Subcat closure_star(const ExtContext& ctx, const Subcat& x, const Subcat& y);
Subcat closure_cone(const ExtContext& ctx, const Subcat& x, const Subcat& y);
Subcat closure_cocone(const ExtContext& ctx, const Subcat& x, const Subcat& y);
// Wedge/vee towers X^, X^_n (resolutions by X from the right/left). For
// presilting X these are computed exactly by minimal-approximation towers;
// otherwise by iterated cone/cocone scans.
Subcat closure_wedge(const ExtContext& ctx, const Subcat& x, int n);
Subcat closure_vee(const ExtContext& ctx, const Subcat& x, int n);
Subcat closure_wedge_inf(const ExtContext& ctx, const Subcat& x);
Subcat closure_vee_inf(const ExtContext& ctx, const Subcat& x);
// Tower level of e over presilting x: least n with e in wedge_n (vee_n);
// -1 when e is not in the (co)resolving closure at all.
int wedge_level(const ExtContext& ctx, const Subcat& x, const ObjectExpr& e);
int vee_level(const ExtContext& ctx, const Subcat& x, const ObjectExpr& e);
// perp(Left, X, n)  = {h : E^k(h, X) = 0 for all k > n},
// perp(Right, X, n) = {h : E^k(X, h) = 0 for all k > n}.
Subcat ctx_perp(const ExtContext& ctx, Side side, const Subcat& x, int n);
// Smallest thick subcategory containing X (extensions, cones of inflations,
// cocones of deflations, summands).
Subcat thick_closure(const ExtContext& ctx, const Subcat& x);
// Contains the projectives, closed under extensions and cocones.
bool is_resolving(const ExtContext& ctx, const Subcat& x);
// Least n with the n-th syzygy projective (module kinds: minimal
// resolutions; FTheta: towers along the provided projectives).
int ctx_projdim(const ExtContext& ctx, const ObjectExpr& e);
// E^k(M, M) = 0 for all k >= 1, all pairs from m.
bool is_presilting_subcat(const ExtContext& ctx, const Subcat& m);

} // namespace silt
