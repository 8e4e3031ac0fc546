#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "silt/algebra.hpp"

namespace silt {

// Finite-dimensional right module over a bound quiver algebra, presented as a
// quiver representation: one F_p space per vertex, one matrix per arrow.
// Arrow matrices act on column vectors: for a: v -> w, mat is dim_w x dim_v.
struct Representation {
    AlgebraPtr alg;
    std::vector<int> dims;     // per vertex
    std::vector<FpMat> arrows; // per arrow of the quiver

    int total_dim() const;
    bool is_zero() const { return total_dim() == 0; }
    // Offset of vertex v's block in the concatenated coordinate space.
    int vertex_offset(int v) const;
    void validate() const; // shape + relation check

    // Matrix of the action of basis path p (composite of its arrow matrices).
    FpMat path_action(int p) const;

    static Representation zero(const AlgebraPtr& alg);
    static Representation direct_sum(const Representation& a, const Representation& b);
};

using RepPtr = std::shared_ptr<const Representation>;
RepPtr share(Representation rep);

bool same_dims(const Representation& a, const Representation& b);

// Morphism of representations: one matrix per vertex, f[v]: M_v -> N_v with
// N_a f[src] = f[tgt] M_a for every arrow a. Owns (shares) its endpoints, so
// morphisms remain valid independent of where the objects came from.
struct ModuleMorphism {
    RepPtr src;
    RepPtr tgt;
    std::vector<FpMat> f;

    void validate() const;
    bool is_zero() const;
    bool is_mono() const;
    bool is_epi() const;
    bool is_iso() const;
};

ModuleMorphism morphism_zero(const RepPtr& src, const RepPtr& tgt);
ModuleMorphism morphism_identity(const RepPtr& m);
ModuleMorphism morphism_compose(const ModuleMorphism& g, const ModuleMorphism& f); // g after f
ModuleMorphism morphism_add(const ModuleMorphism& x, const ModuleMorphism& y);
ModuleMorphism morphism_scale(uint32_t c, const ModuleMorphism& x);

// Basis of Hom(M, N), deterministic order. Each element's matrices are read
// off a nullspace computation over the arrow-commutation constraints.
std::vector<ModuleMorphism> hom_modules(const RepPtr& m, const RepPtr& n);
int hom_dim(const Representation& m, const Representation& n);

// Kernel/image/cokernel with the structural morphism (inclusion for kernel
// and image, projection for cokernel).
struct SubQuotient {
    RepPtr rep;
    ModuleMorphism map;
};
SubQuotient kernel(const ModuleMorphism& f);
SubQuotient image(const ModuleMorphism& f);
SubQuotient cokernel(const ModuleMorphism& f);

// Canonical modules.
Representation projective_module(const AlgebraPtr& alg, int v);
Representation injective_module(const AlgebraPtr& alg, int v);
Representation simple_module(const AlgebraPtr& alg, int v);
Representation regular_module(const AlgebraPtr& alg); // direct sum of all P(v)

// Interval module over a linear A_n quiver: dims 1 on vertices a..b (0-based).
Representation interval_module(const AlgebraPtr& alg, int a, int b);

// Exact isomorphism test: equal dimension vectors, then search for an
// invertible morphism (basis elements, seeded random combinations, and full
// enumeration when the hom space is small enough to sweep).
bool modules_isomorphic(const Representation& a, const Representation& b);

// Searches the span of a `dim`-dimensional space for a coefficient vector
// passing `test`: basis elements first, then `random_tries` seeded random
// combinations, then an exhaustive sweep when p^dim <= sweep_cap. Returns
// the coefficients of a hit, or an empty vector if none was found.
std::vector<uint32_t> search_combination(const Fp& F, int dim, int random_tries,
                                         uint64_t sweep_cap, uint64_t seed,
                                         const std::function<bool(const std::vector<uint32_t>&)>& test);

// Per-algebra registry of isomorphism classes of modules. Class ids are
// stable within a run: classes are numbered in first-found order.
class ModuleRegistry {
public:
    explicit ModuleRegistry(AlgebraPtr alg) : alg_(std::move(alg)) {}

    const AlgebraPtr& algebra() const { return alg_; }
    int find_or_insert(const Representation& rep); // nonzero reps only
    int find(const Representation& rep) const;     // -1 if absent
    const RepPtr& rep(int id) const { return reps_[id]; }
    int size() const { return static_cast<int>(reps_.size()); }
    const std::string& name(int id) const { return names_[id]; }
    void set_name(int id, const std::string& n) { names_[id] = n; }

private:
    AlgebraPtr alg_;
    std::vector<RepPtr> reps_;
    std::vector<std::string> names_;
};

} // namespace silt
