#pragma once

#include "silt/decompose.hpp"

namespace silt {

// Element of e_w Lambda e_v: an F_p coefficient vector over the path basis,
// supported on paths w ~> v. (This is the coordinate form of a morphism
// P(v) -> P(w): the image of the generator e_v inside P(w).)
using PathVec = std::vector<uint32_t>;

PathVec path_vec_zero(const AlgebraPtr& alg);
PathVec path_vec_unit(const AlgebraPtr& alg, int path);
bool path_vec_is_zero(const PathVec& v);
// Concatenation product: (x * y) where x spans paths u ~> w and y spans
// paths w ~> v; the result spans paths u ~> v.
PathVec path_mul(const AlgebraPtr& alg, const PathVec& x, const PathVec& y);
PathVec path_add(const AlgebraPtr& alg, const PathVec& x, const PathVec& y);
PathVec path_scale(const AlgebraPtr& alg, uint32_t c, const PathVec& x);
// Inverse inside e_v Lambda e_v when the trivial-path coefficient is nonzero
// (the radical part is nilpotent, so a geometric series terminates).
PathVec path_local_inverse(const AlgebraPtr& alg, int v, const PathVec& x);

// Matrix over the path algebra describing a map between finite direct sums
// of indecomposable projectives: entry (j, i) lies in e_{tgt_j} Lambda e_{src_i},
// i.e. is supported on paths tgt_j ~> src_i.
class LambdaMat {
public:
    AlgebraPtr alg;
    std::vector<int> src_slots; // vertex per source copy
    std::vector<int> tgt_slots; // vertex per target copy

    LambdaMat() = default;
    LambdaMat(const AlgebraPtr& a, std::vector<int> tgt, std::vector<int> src);
    static LambdaMat identity(const AlgebraPtr& a, const std::vector<int>& slots);

    int rows() const { return static_cast<int>(tgt_slots.size()); }
    int cols() const { return static_cast<int>(src_slots.size()); }
    PathVec& at(int r, int c) { return e_[static_cast<size_t>(r) * src_slots.size() + c]; }
    const PathVec& at(int r, int c) const { return e_[static_cast<size_t>(r) * src_slots.size() + c]; }
    bool is_zero() const;
    void validate() const; // support restricted to admissible paths

    // Scalar part: the matrix of trivial-path coefficients (zero when the
    // slot vertices differ). A LambdaMat between equal slot multisets is
    // invertible iff its scalar part is.
    FpMat scalar_part() const;
    bool is_invertible() const;

private:
    std::vector<PathVec> e_;
};

LambdaMat lm_compose(const LambdaMat& a, const LambdaMat& b); // a after b
LambdaMat lm_add(const LambdaMat& a, const LambdaMat& b);
LambdaMat lm_sub(const LambdaMat& a, const LambdaMat& b);
LambdaMat lm_neg(const LambdaMat& a);
LambdaMat lm_scale(uint32_t c, const LambdaMat& a);

// Conversions between the path-coordinate form and the realized morphism of
// representations (generator images correspond to entry columns).
ModuleMorphism lambda_to_morphism(const LambdaMat& m, const ProjSum& src, const ProjSum& tgt);
LambdaMat lambda_from_morphism(const ProjSum& src, const ProjSum& tgt, const ModuleMorphism& f);

// Bounded cochain complex of projective sums; diffs[i] maps degree lo+i to
// degree lo+i+1. Degrees with no slots are allowed inside the range.
struct ProjComplex {
    AlgebraPtr alg;
    int lo = 0;
    std::vector<std::vector<int>> slots; // per degree, vertex per copy
    std::vector<LambdaMat> diffs;        // size = max(slots.size() - 1, 0)

    int hi() const { return lo + static_cast<int>(slots.size()) - 1; }
    bool in_range(int d) const { return d >= lo && d <= hi(); }
    const std::vector<int>& slots_at(int d) const;
    LambdaMat diff_at(int d) const; // degree d -> d+1 (zero outside range)
    bool is_zero_object() const;
    int total_slots() const;
    void validate() const;

    // Realized representation of degree d with its copy bookkeeping.
    ProjSum term(int d) const;
};

using ComplexPtr = std::shared_ptr<const ProjComplex>;
ComplexPtr share_complex(ProjComplex x);

int complex_total_dim(const ProjComplex& x);
// Structural equality of complexes (same algebra, degrees, slots, entries).
bool complex_same_shape(const ProjComplex& a, const ProjComplex& b);

ComplexPtr complex_zero(const AlgebraPtr& alg);
// Drops empty degrees at both ends (returns an equal complex).
ComplexPtr trim_complex(const ProjComplex& x);
// Stalk-style complex of a module from its minimal resolution: P_k sits in
// degree -k. Requires finite projective dimension.
ComplexPtr complex_from_resolution(const MinimalResolution& res);
// Shift: (shift(X, n))^d = X^{d+n}, differential scaled by (-1)^n.
ComplexPtr shift_complex(const ComplexPtr& x, int n);

// Degreewise map of complexes; components stored on [lo, lo+comps.size()-1],
// zero elsewhere. A valid ChainMap commutes with the differentials.
struct ChainMap {
    ComplexPtr src, tgt;
    int lo = 0;
    std::vector<LambdaMat> comps;

    LambdaMat comp_at(int d) const; // zero outside the stored range
    bool is_zero() const;
    void validate() const;
};

ChainMap chain_zero(const ComplexPtr& x, const ComplexPtr& y);
ChainMap chain_identity(const ComplexPtr& x);
ChainMap chain_compose(const ChainMap& g, const ChainMap& f); // g after f
ChainMap chain_add(const ChainMap& x, const ChainMap& y);
ChainMap chain_scale(uint32_t c, const ChainMap& x);
// Same map, shifted ambient degrees: shift(f, n): shift(X, n) -> shift(Y, n).
ChainMap shift_chain_map(const ChainMap& f, int n);
bool chain_map_is_iso(const ChainMap& f);

// Mapping cone C(f) = shift(X,1) + Y with the twisted differential, plus the
// triangle maps Y -> C(f) and C(f) -> shift(X,1).
struct ConeResult {
    ComplexPtr cone;
    ChainMap into_cone;   // Y -> C(f)
    ChainMap onto_shift;  // C(f) -> shift(X, 1)
};
ConeResult mapping_cone(const ChainMap& f);

// Direct sum with injections/projections.
struct ComplexSum {
    ComplexPtr sum;
    std::vector<ChainMap> inject;
    std::vector<ChainMap> project;
};
ComplexSum complex_direct_sum(const AlgebraPtr& alg, const std::vector<ComplexPtr>& parts);

// Hom space between complexes: genuine chain maps, the null-homotopic
// subspace, and boundary-reduced representatives of homotopy classes.
// Coordinates index (degree, target slot, source slot, path) unknowns.
struct ComplexHomSpace {
    ComplexPtr x, y;
    int coord_dim = 0;
    std::vector<ChainMap> chain_basis;
    FpMat chain_basis_coords; // columns
    FpMat boundary_cols;      // null-homotopic maps, as coordinate columns
    int k_dim = 0;            // dim of Hom in the homotopy category
    std::vector<FpMat> k_class_reps; // reduced coordinate columns

    ChainMap materialize(const FpMat& coord_col) const;
    FpMat coords_of(const ChainMap& f) const;
    // Reduced representative of the homotopy class of a chain map.
    FpMat k_reduce(const FpMat& coord_col) const;
    // Chain map from homotopy-class coefficients over k_class_reps.
    ChainMap from_class(const std::vector<uint32_t>& coeffs) const;
};
ComplexHomSpace hom_complexes(const ComplexPtr& x, const ComplexPtr& y);
int hom_k_dim(const ComplexPtr& x, const ComplexPtr& y);

// Gaussian minimization: cancels invertible differential entries until the
// differential lands in the radical. Returns the minimal model with the
// contraction maps (project: X -> min, include: min -> X, both homotopy
// equivalences, project after include = identity).
struct MinimizeResult {
    ComplexPtr min;
    ChainMap project;
    ChainMap include;
};
MinimizeResult minimize_complex(const ComplexPtr& x);
bool complex_is_minimal(const ProjComplex& x);

// Indecomposable direct summands of a complex (minimized first). Same
// certification contract as decompose_module: exhaustive endomorphism sweep
// or BudgetExceeded.
std::vector<ComplexPtr> decompose_complex(const ComplexPtr& x, const DecomposeBudget& budget = {});

// Chain-level isomorphism of minimal complexes (equal slot profiles plus an
// invertible chain map found by the layered search).
bool complexes_isomorphic(const ComplexPtr& x, const ComplexPtr& y);

} // namespace silt
