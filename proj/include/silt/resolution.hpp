#pragma once

#include "silt/rep.hpp"

namespace silt {

// Direct sum of indecomposable projectives, tracked copy by copy. The
// realized representation concatenates per-vertex blocks in copy order, so
// the generator e_v of copy i has a known coordinate (see generator_offset).
struct ProjSum {
    AlgebraPtr alg;
    std::vector<int> copies; // vertex index per copy
    RepPtr rep;

    int copy_count() const { return static_cast<int>(copies.size()); }
    bool is_zero() const { return copies.empty(); }
    // Coordinate of the generator of copy i inside rep's block at its vertex.
    int generator_offset(int i) const;

    static ProjSum build(const AlgebraPtr& alg, std::vector<int> copies);
};

// Head of a module: per-vertex quotient by the radical (sum of all incoming
// arrow images), with the projection matrices.
struct Top {
    std::vector<int> dims;
    std::vector<FpMat> proj;           // M_v -> top_v
    std::vector<std::vector<int>> rep_units; // unit-vector representatives per vertex
};
Top top_of(const Representation& m);

// Projective cover P -> M (minimal: induces an iso on heads).
struct ProjCover {
    ProjSum p;
    ModuleMorphism map; // p.rep -> M, epi
};
ProjCover projective_cover(const RepPtr& m);

// Morphism from a projective sum determined by generator images. images[i]
// is a column vector in N at the vertex of copy i.
ModuleMorphism morphism_from_generators(const ProjSum& p, const RepPtr& n,
                                        const std::vector<FpMat>& images);

// Reads generator images back off a morphism from a projective sum.
std::vector<FpMat> generator_images(const ProjSum& p, const ModuleMorphism& f);

enum class ResolutionStatus { Terminated, CycleDetected, CapExceeded };

// Minimal projective resolution ... -> P_1 -> P_0 -> M -> 0, computed up to
// `cap` steps. Syzygy isomorphism recurrence is detected exactly (a repeat
// proves infinite projective dimension); running past the cap without either
// termination or a repeat is reported as CapExceeded.
struct MinimalResolution {
    RepPtr module;
    std::vector<ProjSum> terms;        // P_0, P_1, ...
    std::vector<ModuleMorphism> diffs; // diffs[0]: P_0 -> M; diffs[k]: P_k -> P_{k-1}
    std::vector<RepPtr> syzygies;      // syzygies[k] = Omega^{k+1} M (kernel after P_k)
    ResolutionStatus status = ResolutionStatus::Terminated;
    int cycle_first = -1, cycle_second = -1; // syzygy indices witnessing a repeat

    // Projective dimension; throws InfiniteProjDim on a detected cycle and
    // ResolutionCapExceeded when the cap was hit inconclusively.
    int projdim() const;
    bool finite_pd() const { return status == ResolutionStatus::Terminated; }
    // Number of terms actually computed (>= 1 unless M = 0).
    int length() const { return static_cast<int>(terms.size()); }
};

using ResolutionPtr = std::shared_ptr<const MinimalResolution>;
ResolutionPtr resolve_module(const RepPtr& m, int cap = 32);

// Self-extension vanishing bound: checking E^k for k in [1, bound] decides
// vanishing of all positive-degree Ext out of M. Exists for finite pd (bound
// = pd) and for cyclic syzygies (bound = cycle_second).
int ext_vanish_bound(const MinimalResolution& res);

// Ext^k(M, N) computed off a minimal resolution of M. Cocycles live in
// Hom(P_k, N), coordinatized by generator images; classes are stored as
// boundary-reduced representatives.
struct ExtSpace {
    int k = 0;
    RepPtr m, n;
    ResolutionPtr res; // resolution of m
    int dim = 0;
    std::vector<FpMat> class_reps; // one reduced cocycle vector (column) per class
    FpMat boundary_basis;          // columns span the boundary space
    int cocycle_coords = 0;        // length of a cocycle coordinate vector

    FpMat combine(const std::vector<uint32_t>& coeffs) const; // reduced cocycle
};

ExtSpace ext_space(const ResolutionPtr& res, int k, const RepPtr& n);
int ext_dim(const ResolutionPtr& res, int k, const RepPtr& n);

// Short exact sequence of modules.
struct ShortExact {
    RepPtr a, b, c;
    ModuleMorphism f; // a -> b
    ModuleMorphism g; // b -> c
};

// Realizes a degree-1 class as a short exact sequence A -> B -> C by pushing
// the resolution presentation of C = ext.m out along the cocycle P_1 -> A.
// `coeffs` are coordinates over ext.class_reps; the zero class gives the
// split sequence.
ShortExact realize_ext_class(const ExtSpace& ext, const std::vector<uint32_t>& coeffs);

// Connecting class of a short exact sequence, as a reduced cocycle vector in
// the Ext^1(C, A) coordinates of `ext` (which must be built from the same
// resolution of C and module A).
FpMat ext_class_of_ses(const ExtSpace& ext, const ShortExact& ses);

} // namespace silt
