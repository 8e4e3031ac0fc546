#pragma once

#include "silt/context.hpp"
#include "silt/intmat.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace silt {

// ===========================================================================
// Silting layer on top of an ExtContext: self-orthogonality certificates,
// silting detection, mutation and the silting/Hasse quivers, the silting
// partial order, gamma vectors over a silting subcategory, a Grothendieck
// group presentation, hereditary cotorsion pairs, universal (co)extensions
// with Bongartz-style completion, the correspondence with contravariantly
// finite resolving subcategories in finite-projective-dimension contexts,
// and tilting-module enumeration.
//
// All searches and basis choices break ties toward the least handle, so
// every operation is deterministic. Results carry explicit certificates;
// nothing is reported as certified unless it was verified on the instance.
// ===========================================================================

// ---- certificates ----------------------------------------------------------

// One ordered pair (x, y) of indecomposables in a self-orthogonality check:
// either E^k(x, y) = 0 for all k >= 1 within the context's vanishing bound
// (ok), or `k`/`dim` name the first failing degree.
struct OrthWitness {
    int x = 0, y = 0;
    bool ok = false;
    int k = 0;
    int dim = 0;
};

struct PresiltingCertificate {
    bool ok = false;
    std::vector<OrthWitness> pairs; // all ordered pairs, ascending (x, y)
};

enum class SiltingMode { Certified, RankHeuristic };

struct SiltingCertificate {
    bool ok = false;
    SiltingMode mode = SiltingMode::Certified;
    bool heuristic = false; // true exactly in rank mode; never a certificate
    std::string detail;
};

struct SiltingRecord {
    Subcat subcat;
    PresiltingCertificate presilting;
    SiltingCertificate silting;
    bool ok() const { return presilting.ok && silting.ok; }
};

PresiltingCertificate presilting_certificate(const ExtContext& ctx, const Subcat& s);
bool is_presilting(const ExtContext& ctx, const Subcat& s);

// Certified mode: presilting and thick closure = universe; in finite-pd
// contexts the equivalent test "projectives contained in vee_inf(S)" is used
// instead. Rank mode: presilting and |ind S| = |ind reference|; flagged
// heuristic, and it is an error (NoReferenceSilting) to omit the reference.
SiltingRecord is_silting(const ExtContext& ctx, const Subcat& s,
                         SiltingMode mode = SiltingMode::Certified,
                         const std::optional<Subcat>& reference = std::nullopt);

// ---- the silting order -----------------------------------------------------

// m >= n: E^k(m, n) = 0 for all k >= 1, over all pairs of indecomposables.
bool silting_geq(const ExtContext& ctx, const Subcat& m, const Subcat& n);
bool silting_gt(const ExtContext& ctx, const Subcat& m, const Subcat& n);

// ---- mutation ---------------------------------------------------------------

struct MutationStep {
    Subcat source;
    Subcat cut;                   // D, an add-subcategory of source
    std::vector<int> removed;     // ind source \ ind D, ascending
    std::vector<Conflation> glue; // one approximation conflation per removed
    Subcat result;
};

// Left mutation at the cut D: every removed indecomposable X is replaced by
// the summands of the cone of its canonical left add(D)-approximation
// X -> D0 (which must be an inflation; otherwise NotGood names X). Right
// mutation is dual: cocones of right approximations, which must be
// deflations. The cut must be a subcategory of m (else NotSubcat).
MutationStep left_mutation(const ExtContext& ctx, const Subcat& m, const Subcat& cut);
MutationStep right_mutation(const ExtContext& ctx, const Subcat& m, const Subcat& cut);

// Irreducible mutation: the cut keeps everything except one indecomposable.
MutationStep left_mutation_at(const ExtContext& ctx, const Subcat& m, int removed);
MutationStep right_mutation_at(const ExtContext& ctx, const Subcat& m, int removed);

// ---- silting quiver ---------------------------------------------------------

struct SiltingQuiverArrow {
    int from = 0, to = 0; // vertex indices
    int removed = -1;     // indecomposable replaced by the left mutation (-1: n/a)
};

struct SiltingQuiver {
    std::vector<Subcat> vertices; // discovery order (seed first) or input order
    std::vector<SiltingQuiverArrow> arrows;
    bool complete = false; // closed under both mutation directions in budget
};

// BFS closure of a verified silting seed under all irreducible left and
// right mutations; cuts whose approximation is not good are skipped (those
// edges are absent). Arrows record the irreducible left mutations.
SiltingQuiver silting_quiver(const ExtContext& ctx, const Subcat& seed,
                             int max_vertices = 512);

// Cover relations of the silting order on an explicit deduplicated list.
// Arrow (i -> j) means vertices[i] > vertices[j] with nothing in between.
SiltingQuiver hasse_quiver(const ExtContext& ctx, const std::vector<Subcat>& siltings);

// ---- gamma vectors ----------------------------------------------------------

struct GammaVector {
    std::vector<int> basis;        // ind M, ascending handles
    std::vector<int64_t> coords;   // one integer per basis entry
};

// Integer class vector of n over the silting subcategory m: unit vectors on
// ind m, extended by additivity along approximation conflations (minimal
// right m-approximations below m, minimal left ones above, and a conflation
// U -> V -> N with V in vee_inf(m), U in wedge_inf(m) in general).
GammaVector gamma_vector(const ExtContext& ctx, const Subcat& m, const ObjectExpr& n);

// ---- Grothendieck group -----------------------------------------------------

struct K0Presentation {
    std::vector<int> generators;  // universe handles, ascending
    IntMat relations;             // one row [A] - [B] + [C] per conflation
    Snf snf;                      // Smith normal form of relations transposed
    int rank = 0;                 // free rank of the quotient
    std::vector<int64_t> torsion; // invariant factors > 1
    IntMat free_coords;           // rank x n: generator class -> free coordinates
};

K0Presentation k0_presentation(const ExtContext& ctx);

// Free-part coordinates of the class of e. Meaningful modulo torsion (the
// acceptance instances are torsion-free).
std::vector<int64_t> k0_class(const K0Presentation& k0, const ObjectExpr& e);

// True when the classes of ind m form a Z-basis of K0: no torsion, matching
// rank, and unimodular expansion against the computed free basis. A second
// independent test (Smith form of the relation rows stacked with the unit
// rows of ind m) must agree, else InternalError.
bool k0_basis_check(const ExtContext& ctx, const K0Presentation& k0, const Subcat& m);

// ---- cotorsion pairs --------------------------------------------------------

struct CotorsionPair {
    Subcat x, y;
    bool orthogonal = false;       // E^k(x, y) = 0 for all k >= 1
    bool cone_generates = false;   // universe = cone(y, x)
    bool cocone_generates = false; // universe = cocone(y, x)
    bool bounded = false;          // wedge_inf(x) and vee_inf(y) both exhaust
    bool hereditary() const { return orthogonal && cone_generates && cocone_generates; }
};

// (vee_inf m, wedge_inf m) with all axioms and boundedness evaluated.
CotorsionPair silting_cotorsion_pair(const ExtContext& ctx, const Subcat& m);
// The core x int y (for pairs from siltings this recovers the silting).
Subcat cotorsion_core(const ExtContext& ctx, const CotorsionPair& p);
// Evaluates the hereditary-cotorsion-pair axioms for an arbitrary (x, y).
CotorsionPair verify_hcotors(const ExtContext& ctx, const Subcat& x, const Subcat& y);

// ---- universal (co)extensions ----------------------------------------------

struct UniversalExtension {
    ObjectExpr m, n;         // the named endpoints (see the glue direction)
    int ext_dim = 0;         // d
    Conflation glue;         // coextension: m -> F -> n^d; extension: n^d -> F -> m
    ObjectExpr middle;       // identified middle F
    bool surjective = false; // universal-property connecting map is onto
};

// Universal coextension of m by n: conflation m -> F -> n^{(+)d} whose
// connecting class has the deterministic basis of E(n, m) as components;
// certified by surjectivity of Hom(n, n^{(+)d}) -> E(n, m). Errors:
// ZeroExtension when d = 0.
UniversalExtension universal_coextension(const ExtContext& ctx, const ObjectExpr& m,
                                         const ObjectExpr& n);

// Dual universal extension: conflation n^{(+)d} -> F -> m over the basis of
// E(m, n), certified by surjectivity of Hom(n^{(+)d}, n) -> E(m, n).
UniversalExtension universal_extension(const ExtContext& ctx, const ObjectExpr& m,
                                       const ObjectExpr& n);

// ---- Bongartz completion ----------------------------------------------------

struct BongartzCompletion {
    SiltingRecord record;                   // the completed, verified silting
    std::optional<UniversalExtension> glue; // absent when d = 0
};

// m silting, n presilting with n in wedge_1(m) (else HypothesisFailed):
// returns the verified silting add(F + n) built from the universal
// coextension M -> F -> n^{(+)d}; when d = 0, add(m + n).
BongartzCompletion bongartz_complete(const ExtContext& ctx, const Subcat& m,
                                     const ObjectExpr& n);

// Finite-poset descent: enumerate the siltings reachable from m, then walk
// minimal elements of {L silting | L >= n, L inside wedge_1(previous)} until
// the result contains n. NotFound when the enumeration is incomplete or the
// descent cannot reach a silting containing n.
SiltingRecord bongartz_search(const ExtContext& ctx, const Subcat& m, const Subcat& n,
                              int max_vertices = 512);

// ---- resolving correspondence (finite-pd contexts) --------------------------

// m -> vee_inf(m), verified resolving.
Subcat resolving_of_silting(const ExtContext& ctx, const Subcat& m);
// x -> x int x^{perp} (right Ext-orthogonal in all degrees >= 1).
Subcat silting_of_resolving(const ExtContext& ctx, const Subcat& x);

struct ResolvingCorrespondenceReport {
    std::vector<Subcat> siltings;  // enumerated siltings, sorted
    std::vector<Subcat> resolving; // enumerated resolving subcategories, sorted
    bool maps_land = false;        // each map lands in the opposite side
    bool psi_phi_id = false;       // silting -> resolving -> silting is identity
    bool phi_psi_id = false;       // resolving -> silting -> resolving is identity
    bool ok() const { return maps_land && psi_phi_id && phi_psi_id; }
};

// Enumerates both sides exhaustively (siltings by mutation closure from the
// projectives; resolving subcategories by subset sweep) and verifies the two
// maps are mutually inverse bijections.
ResolvingCorrespondenceReport resolving_correspondence(const ExtContext& ctx,
                                                       int max_vertices = 512);

// ---- tilting enumeration ----------------------------------------------------

struct TiltingEnumeration {
    ContextPtr ctx;                       // finite-pd context the handles refer to
    std::vector<Subcat> mutation_closure; // sorted
    std::vector<Subcat> brute_force;      // sorted; independent oracle
    bool agree = false;
};

// Silting subcategories of the finite-projective-dimension context of alg,
// enumerated two independent ways: mutation closure from the projectives and
// an exhaustive subset sweep (self-orthogonal, finite pd, projectives inside
// the vee-closure). `agree` certifies set-for-set equality.
TiltingEnumeration tilting_modules(const AlgebraPtr& alg, int max_vertices = 512);

// ---- equivalent-conditions diagnostic (finite-pd contexts) -------------------

struct CpConditionsReport {
    bool whole_category = false;    // parent universe = finite-pd universe
    bool thick_in_parent = false;   // thick closure of m in the parent exhausts it
    bool perp_equals_wedge = false; // m^perp = wedge_inf(m) in the context
    CotorsionPair pair_wedge;       // axioms of (vee_inf m, wedge_inf m)
    CotorsionPair pair_perp;        // axioms of (vee_inf m, m^perp)
    bool agree = false;             // all evaluated conditions agree
};

// Evaluates the equivalent characterizations for a silting m of a finite-pd
// context and reports whether they agree on the instance.
CpConditionsReport cp_conditions_check(const ExtContext& ctx, const Subcat& m);

} // namespace silt
