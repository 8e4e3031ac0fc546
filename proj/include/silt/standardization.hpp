#pragma once

#include "silt/context.hpp"
#include "silt/silting.hpp"

#include <utility>
#include <vector>

namespace silt {

// ===========================================================================
// Ordered generating collections with triangular vanishing, the
// extension-closed category they generate, and its canonical projective
// generator / injective cogenerator built by universal-(co)extension towers.
// ===========================================================================

// One violated condition: `cond` is 1 (indecomposability/validity), 2
// (Hom(T(i), T(j)) != 0 for some i > j) or 3 (E(T(i), T(j)) != 0 for some
// i >= j); positions are 1-based, `dim` the offending dimension.
struct ThetaWitness {
    int cond = 0;
    int i = 0, j = 0;
    int dim = 0;
};

struct ThetaSet {
    ContextPtr parent;
    std::vector<int> objects; // ordered parent handles T(1..n)
    bool s1 = false;          // every object a valid indecomposable handle
    bool s2 = false;          // Hom(T(i), T(j)) = 0 for i > j
    bool s3 = false;          // E(T(i), T(j)) = 0 for i >= j
    std::vector<ThetaWitness> failures;
    bool ok() const { return s1 && s2 && s3; }
};

// Evaluates all three conditions, collecting a witness per violation.
ThetaSet check_standardizable(const ContextPtr& parent, const std::vector<int>& objects);

// Extension-closed subcontext generated by the ordered collection; requires
// the checks to pass (HypothesisFailed otherwise).
ContextPtr f_theta(const ThetaSet& theta);

// Peels single generator copies off `e`: a chain of conflations
// A_t -> X_t -> T(l_t) with X_0 = e, X_{t+1} = A_t, ending at zero. `levels`
// restricts the allowed quotient levels (1-based, ascending preference);
// NonTermination when no allowed quotient exists.
std::vector<Conflation> theta_filtration(const ExtContext& fctx, const ObjectExpr& e,
                                         const std::vector<int>& levels);
// Unrestricted variant: all levels allowed.
std::vector<Conflation> theta_filtration(const ExtContext& fctx, const ObjectExpr& e);

// Per-index construction record: the tower of universal-(co)extension steps,
// the resulting conflation K(i) -> P(i) -> T(i) (or T(i) -> I(i) -> C(i)),
// and a generator filtration of the third corner with its quotient levels
// (all > i for the projective side, all < i for the injective side).
struct StdResolutionRecord {
    int index = 0;                     // 1-based generator position
    Conflation con;                    // K -> P -> T(i), or T(i) -> I -> C
    std::vector<Conflation> tower;     // universal-(co)extension steps
    std::vector<Conflation> filtration; // peel of the third corner
    std::vector<int> quotient_levels;  // 1-based level of each peel quotient
};

struct GeneratorResult {
    Subcat basic;                   // summands of the nonzero pieces
    std::vector<ObjectExpr> pieces; // piece per generator index (may be zero)
    std::vector<StdResolutionRecord> records;
};

// P(i) for i = n..1: iterated universal extensions of T(i) by T(j), j
// ascending i+1..n, each step killing E(current, T(j)). Verifies projectivity
// (E^1(P, X) = 0 on the universe) and generation (every object a cone over
// add P), then wires the context's projectives. Zero pieces are dropped from
// the basic generator.
GeneratorResult projective_generator(const ExtContext& fctx);

// Dual: I(i) by universal coextensions of T(i) by T(j), j descending i-1..1,
// each step killing E(T(j), current); verifies injectivity and cogeneration.
GeneratorResult injective_cogenerator(const ExtContext& fctx);

struct StdSilting {
    GeneratorResult projective;
    GeneratorResult injective;
    SiltingRecord greatest; // add of the projective generator
    SiltingRecord least;    // add of the injective cogenerator
    int poset_size = 0;     // enumerated siltings of the subcontext
};

// Builds both generators, verifies both are silting, and confirms greatest /
// least against every silting enumerated from the projective generator.
StdSilting std_silting(const ExtContext& fctx);

} // namespace silt
