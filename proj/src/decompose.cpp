#include "silt/decompose.hpp"

#include <algorithm>

namespace silt {

namespace {

// Stable power of an endomorphism: f^(2^s) with 2^s >= total dim, at which
// point kernel and image intersect trivially (Fitting's lemma).
std::vector<FpMat> stable_power(const ModuleMorphism& f) {
    const Fp& F = f.src->alg->field;
    std::vector<FpMat> g = f.f;
    int need = f.src->total_dim();
    for (int have = 1; have < need; have *= 2)
        for (auto& m : g) m = fp_mul(F, m, m);
    return g;
}

bool power_is_zero(const std::vector<FpMat>& g) {
    for (const auto& m : g)
        if (!m.is_zero()) return false;
    return true;
}

bool power_is_invertible(const Fp& F, const std::vector<FpMat>& g) {
    for (const auto& m : g)
        if (fp_rank(F, m) < m.rows()) return false;
    return true;
}

// Builds the subrepresentation spanned per vertex by the given column bases.
Representation sub_on_columns(const Representation& m, const std::vector<FpMat>& cols) {
    const auto& alg = *m.alg;
    const Fp& F = alg.field;
    Representation sub;
    sub.alg = m.alg;
    for (int v = 0; v < alg.vertex_count(); ++v) sub.dims.push_back(cols[v].cols());
    for (int a = 0; a < alg.quiver.arrow_count(); ++a) {
        const Arrow& ar = alg.quiver.arrows[a];
        FpMat rhs = fp_mul(F, m.arrows[a], cols[ar.src]);
        auto x = fp_solve(F, cols[ar.tgt], rhs);
        internal_check(x.has_value(), "Fitting part is not arrow-stable");
        sub.arrows.push_back(std::move(*x));
    }
    sub.validate();
    return sub;
}

void decompose_into(const RepPtr& m, const DecomposeBudget& budget, std::vector<RepPtr>& out) {
    if (m->is_zero()) return;
    const Fp& F = m->alg->field;
    auto endos = hom_modules(m, m);
    internal_check(!endos.empty(), "endomorphism algebra of a nonzero module is nonzero");
    if (endos.size() == 1) { // End = k id: local
        out.push_back(m);
        return;
    }
    // A splitter is an endomorphism that is neither nilpotent nor invertible;
    // its stable power cuts m into kernel + image, both nonzero submodules.
    std::vector<FpMat> split_power;
    auto is_splitter = [&](const std::vector<uint32_t>& coeffs) {
        ModuleMorphism f = morphism_zero(m, m);
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i]) f = morphism_add(f, morphism_scale(coeffs[i], endos[i]));
        auto g = stable_power(f);
        if (power_is_zero(g) || power_is_invertible(F, g)) return false;
        split_power = g;
        return true;
    };
    auto hit = search_combination(F, static_cast<int>(endos.size()), budget.random_tries,
                                  budget.endo_sweep_cap, 0xF177ULL, is_splitter);
    if (hit.empty()) {
        // No splitter. That certifies locality only if the whole endomorphism
        // algebra was swept.
        uint64_t count = 1;
        for (size_t i = 0; i < endos.size(); ++i) {
            count *= F.p();
            if (count > budget.endo_sweep_cap)
                fail(ErrorCode::BudgetExceeded,
                     "endomorphism algebra too large to certify indecomposability");
        }
        out.push_back(m);
        return;
    }
    std::vector<FpMat> ker_cols, im_cols;
    for (const auto& g : split_power) {
        ker_cols.push_back(fp_nullspace(F, g));
        im_cols.push_back(fp_column_basis(F, g));
    }
    RepPtr ker = share(sub_on_columns(*m, ker_cols));
    RepPtr im = share(sub_on_columns(*m, im_cols));
    internal_check(ker->total_dim() + im->total_dim() == m->total_dim(),
                   "Fitting decomposition dimension mismatch");
    internal_check(ker->total_dim() > 0 && im->total_dim() > 0,
                   "Fitting decomposition produced a trivial part");
    decompose_into(ker, budget, out);
    decompose_into(im, budget, out);
}

} // namespace

std::vector<RepPtr> decompose_module(const RepPtr& m, const DecomposeBudget& budget) {
    std::vector<RepPtr> out;
    decompose_into(m, budget, out);
    std::stable_sort(out.begin(), out.end(), [](const RepPtr& a, const RepPtr& b) {
        if (a->total_dim() != b->total_dim()) return a->total_dim() < b->total_dim();
        return a->dims < b->dims;
    });
    return out;
}

bool is_indecomposable(const RepPtr& m, const DecomposeBudget& budget) {
    return !m->is_zero() && decompose_module(m, budget).size() == 1;
}

EnumerateResult enumerate_indecomposables(const AlgebraPtr& alg, int dim_cap,
                                          uint64_t class_budget, const DecomposeBudget& budget) {
    internal_check(dim_cap >= 1, "dimension cap must be positive");
    ModuleRegistry reg(alg);
    for (int v = 0; v < alg->vertex_count(); ++v) reg.find_or_insert(simple_module(alg, v));

    std::vector<ResolutionPtr> resolutions; // per class id, lazily aligned below
    auto resolution_of = [&](int id) {
        while (static_cast<int>(resolutions.size()) < reg.size()) {
            resolutions.push_back(nullptr);
        }
        if (!resolutions[id]) resolutions[id] = resolve_module(reg.rep(id));
        return resolutions[id];
    };

    bool changed = true;
    while (changed) {
        changed = false;
        const int known = reg.size();
        for (int cid = 0; cid < known; ++cid) {
            for (int aid = 0; aid < known; ++aid) {
                ExtSpace ext = ext_space(resolution_of(cid), 1, reg.rep(aid));
                if (ext.dim == 0) continue;
                uint64_t classes = 1;
                for (int i = 0; i < ext.dim; ++i) {
                    classes *= alg->field.p();
                    if (classes > class_budget)
                        fail(ErrorCode::BudgetExceeded,
                             "extension class sweep exceeds the class budget");
                }
                std::vector<uint32_t> coeffs(ext.dim, 0);
                for (uint64_t tick = 1; tick < classes; ++tick) {
                    for (int i = 0; i < ext.dim; ++i) {
                        coeffs[i] = (coeffs[i] + 1) % alg->field.p();
                        if (coeffs[i] != 0) break;
                    }
                    ShortExact ses = realize_ext_class(ext, coeffs);
                    for (const RepPtr& part : decompose_module(ses.b, budget)) {
                        if (part->total_dim() > dim_cap)
                            fail(ErrorCode::CapTooSmall,
                                 "an extension middle has an indecomposable summand above the "
                                 "dimension cap");
                        int before = reg.size();
                        reg.find_or_insert(*part);
                        if (reg.size() > before) changed = true;
                    }
                }
            }
        }
    }

    EnumerateResult out;
    for (int i = 0; i < reg.size(); ++i) out.classes.push_back(reg.rep(i));
    std::stable_sort(out.classes.begin(), out.classes.end(),
                     [](const RepPtr& a, const RepPtr& b) {
                         if (a->total_dim() != b->total_dim())
                             return a->total_dim() < b->total_dim();
                         return a->dims < b->dims;
                     });
    out.saturated = true;
    return out;
}

} // namespace silt
