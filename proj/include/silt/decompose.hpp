#pragma once

#include "silt/resolution.hpp"

namespace silt {

// Budgets guarding the exhaustive sweeps inside decomposition and extension
// enumeration. Hitting one raises BudgetExceeded rather than guessing.
struct DecomposeBudget {
    int random_tries = 64;
    uint64_t endo_sweep_cap = 1 << 18; // max p^dim(End) for the exhaustive phase
};

// Splits m into indecomposable direct summands (with multiplicity), sorted by
// (total dim, dimension vector). Indecomposability is certified: a module is
// declared indecomposable only when its endomorphism algebra is local, which
// is checked exactly via an exhaustive sweep (after the cheap phases fail to
// split). Raises BudgetExceeded when the sweep would be too large.
std::vector<RepPtr> decompose_module(const RepPtr& m, const DecomposeBudget& budget = {});

bool is_indecomposable(const RepPtr& m, const DecomposeBudget& budget = {});

// All isomorphism classes of indecomposables of total dimension <= dim_cap,
// built as the fixpoint of realizing all extension classes between known
// classes, seeded with the simple modules. Raises CapTooSmall if a realized
// extension produces an indecomposable summand above the cap (the fixpoint
// would be lied about otherwise), and BudgetExceeded when an extension space
// has more than class_budget classes to sweep.
struct EnumerateResult {
    std::vector<RepPtr> classes; // sorted by (total dim, dim vector, first-found)
    bool saturated = false;      // fixpoint reached with nothing discarded
};
EnumerateResult enumerate_indecomposables(const AlgebraPtr& alg, int dim_cap,
                                          uint64_t class_budget = 4096,
                                          const DecomposeBudget& budget = {});

} // namespace silt
