#include "silt/rep.hpp"

#include <algorithm>
#include <random>

namespace silt {

int Representation::total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
}

int Representation::vertex_offset(int v) const {
    int off = 0;
    for (int w = 0; w < v; ++w) off += dims[w];
    return off;
}

void Representation::validate() const {
    internal_check(static_cast<int>(dims.size()) == alg->vertex_count(), "dimension vector size mismatch");
    internal_check(static_cast<int>(arrows.size()) == alg->quiver.arrow_count(), "arrow matrix count mismatch");
    for (int a = 0; a < alg->quiver.arrow_count(); ++a) {
        const Arrow& ar = alg->quiver.arrows[a];
        internal_check(arrows[a].rows() == dims[ar.tgt] && arrows[a].cols() == dims[ar.src],
                       "arrow matrix shape mismatch");
    }
    const Fp& F = alg->field;
    for (const auto& r : alg->relations) {
        int src = alg->quiver.arrows[r.front()].src;
        FpMat acc = FpMat::identity(dims[src]);
        for (int a : r) acc = fp_mul(F, arrows[a], acc);
        internal_check(acc.is_zero(), "module does not satisfy a defining relation");
    }
}

FpMat Representation::path_action(int p) const {
    const Path& pa = alg->paths[p];
    FpMat acc = FpMat::identity(dims[pa.source]);
    for (int a : pa.arrows) acc = fp_mul(alg->field, arrows[a], acc);
    return acc;
}

Representation Representation::zero(const AlgebraPtr& alg) {
    Representation r;
    r.alg = alg;
    r.dims.assign(alg->vertex_count(), 0);
    for (int a = 0; a < alg->quiver.arrow_count(); ++a) r.arrows.push_back(FpMat(0, 0));
    return r;
}

Representation Representation::direct_sum(const Representation& a, const Representation& b) {
    internal_check(a.alg == b.alg, "direct sum across algebras");
    Representation s;
    s.alg = a.alg;
    for (int v = 0; v < a.alg->vertex_count(); ++v) s.dims.push_back(a.dims[v] + b.dims[v]);
    for (int ar = 0; ar < a.alg->quiver.arrow_count(); ++ar) {
        const Arrow& arr = a.alg->quiver.arrows[ar];
        FpMat m(s.dims[arr.tgt], s.dims[arr.src]);
        for (int i = 0; i < a.dims[arr.tgt]; ++i)
            for (int j = 0; j < a.dims[arr.src]; ++j) m.at(i, j) = a.arrows[ar].at(i, j);
        for (int i = 0; i < b.dims[arr.tgt]; ++i)
            for (int j = 0; j < b.dims[arr.src]; ++j)
                m.at(a.dims[arr.tgt] + i, a.dims[arr.src] + j) = b.arrows[ar].at(i, j);
        s.arrows.push_back(std::move(m));
    }
    return s;
}

RepPtr share(Representation rep) { return std::make_shared<const Representation>(std::move(rep)); }

bool same_dims(const Representation& a, const Representation& b) {
    return a.alg == b.alg && a.dims == b.dims;
}

void ModuleMorphism::validate() const {
    internal_check(src->alg == tgt->alg, "morphism across algebras");
    const auto& alg = *src->alg;
    internal_check(static_cast<int>(f.size()) == alg.vertex_count(), "morphism matrix count mismatch");
    for (int v = 0; v < alg.vertex_count(); ++v)
        internal_check(f[v].rows() == tgt->dims[v] && f[v].cols() == src->dims[v],
                       "morphism matrix shape mismatch");
    const Fp& F = alg.field;
    for (int a = 0; a < alg.quiver.arrow_count(); ++a) {
        const Arrow& ar = alg.quiver.arrows[a];
        FpMat lhs = fp_mul(F, tgt->arrows[a], f[ar.src]);
        FpMat rhs = fp_mul(F, f[ar.tgt], src->arrows[a]);
        internal_check(lhs == rhs, "morphism does not commute with an arrow");
    }
}

bool ModuleMorphism::is_zero() const {
    for (const auto& m : f)
        if (!m.is_zero()) return false;
    return true;
}

bool ModuleMorphism::is_mono() const {
    const Fp& F = src->alg->field;
    for (int v = 0; v < src->alg->vertex_count(); ++v)
        if (fp_rank(F, f[v]) < src->dims[v]) return false;
    return true;
}

bool ModuleMorphism::is_epi() const {
    const Fp& F = src->alg->field;
    for (int v = 0; v < src->alg->vertex_count(); ++v)
        if (fp_rank(F, f[v]) < tgt->dims[v]) return false;
    return true;
}

bool ModuleMorphism::is_iso() const {
    return same_dims(*src, *tgt) && is_mono();
}

ModuleMorphism morphism_zero(const RepPtr& src, const RepPtr& tgt) {
    ModuleMorphism m;
    m.src = src;
    m.tgt = tgt;
    for (int v = 0; v < src->alg->vertex_count(); ++v)
        m.f.push_back(FpMat(tgt->dims[v], src->dims[v]));
    return m;
}

ModuleMorphism morphism_identity(const RepPtr& m0) {
    ModuleMorphism m;
    m.src = m0;
    m.tgt = m0;
    for (int v = 0; v < m0->alg->vertex_count(); ++v) m.f.push_back(FpMat::identity(m0->dims[v]));
    return m;
}

ModuleMorphism morphism_compose(const ModuleMorphism& g, const ModuleMorphism& f) {
    internal_check(same_dims(*f.tgt, *g.src), "composition target/source mismatch");
    ModuleMorphism m;
    m.src = f.src;
    m.tgt = g.tgt;
    const Fp& F = f.src->alg->field;
    for (size_t v = 0; v < f.f.size(); ++v) m.f.push_back(fp_mul(F, g.f[v], f.f[v]));
    return m;
}

ModuleMorphism morphism_add(const ModuleMorphism& x, const ModuleMorphism& y) {
    ModuleMorphism m;
    m.src = x.src;
    m.tgt = x.tgt;
    const Fp& F = x.src->alg->field;
    for (size_t v = 0; v < x.f.size(); ++v) m.f.push_back(fp_add(F, x.f[v], y.f[v]));
    return m;
}

ModuleMorphism morphism_scale(uint32_t c, const ModuleMorphism& x) {
    ModuleMorphism m;
    m.src = x.src;
    m.tgt = x.tgt;
    const Fp& F = x.src->alg->field;
    for (size_t v = 0; v < x.f.size(); ++v) m.f.push_back(fp_scale(F, c, x.f[v]));
    return m;
}

std::vector<ModuleMorphism> hom_modules(const RepPtr& m, const RepPtr& n) {
    internal_check(m->alg == n->alg, "hom across algebras");
    const auto& alg = *m->alg;
    const Fp& F = alg.field;
    const int nv = alg.vertex_count();

    // Unknowns: entries of f[v] (row-major), blocks in vertex order.
    std::vector<int> ofs(nv + 1, 0);
    for (int v = 0; v < nv; ++v) ofs[v + 1] = ofs[v] + n->dims[v] * m->dims[v];
    const int unknowns = ofs[nv];

    int eqs = 0;
    for (int a = 0; a < alg.quiver.arrow_count(); ++a) {
        const Arrow& ar = alg.quiver.arrows[a];
        eqs += n->dims[ar.tgt] * m->dims[ar.src];
    }
    FpMat sys(eqs, unknowns);
    int row = 0;
    for (int a = 0; a < alg.quiver.arrow_count(); ++a) {
        const Arrow& ar = alg.quiver.arrows[a];
        const FpMat& Ma = m->arrows[a]; // m.dims[tgt] x m.dims[src]
        const FpMat& Na = n->arrows[a]; // n.dims[tgt] x n.dims[src]
        // Constraint: f[tgt] * Ma - Na * f[src] = 0, entry (i, j):
        //   sum_k f[tgt](i,k) Ma(k,j) - sum_k Na(i,k) f[src](k,j) = 0
        for (int i = 0; i < n->dims[ar.tgt]; ++i)
            for (int j = 0; j < m->dims[ar.src]; ++j) {
                for (int k = 0; k < m->dims[ar.tgt]; ++k)
                    sys.at(row, ofs[ar.tgt] + i * m->dims[ar.tgt] + k) =
                        F.add(sys.at(row, ofs[ar.tgt] + i * m->dims[ar.tgt] + k), Ma.at(k, j));
                for (int k = 0; k < n->dims[ar.src]; ++k)
                    sys.at(row, ofs[ar.src] + k * m->dims[ar.src] + j) =
                        F.sub(sys.at(row, ofs[ar.src] + k * m->dims[ar.src] + j), Na.at(i, k));
                ++row;
            }
    }
    FpMat basis = fp_nullspace(F, sys);
    std::vector<ModuleMorphism> out;
    for (int b = 0; b < basis.cols(); ++b) {
        ModuleMorphism mo = morphism_zero(m, n);
        for (int v = 0; v < nv; ++v)
            for (int i = 0; i < n->dims[v]; ++i)
                for (int j = 0; j < m->dims[v]; ++j)
                    mo.f[v].at(i, j) = basis.at(ofs[v] + i * m->dims[v] + j, b);
        out.push_back(std::move(mo));
    }
    return out;
}

int hom_dim(const Representation& m, const Representation& n) {
    return static_cast<int>(hom_modules(share(m), share(n)).size());
}

SubQuotient kernel(const ModuleMorphism& f) {
    const auto& alg = *f.src->alg;
    const Fp& F = alg.field;
    Representation ker;
    ker.alg = f.src->alg;
    std::vector<FpMat> incl;
    for (int v = 0; v < alg.vertex_count(); ++v) {
        FpMat k = fp_nullspace(F, f.f[v]);
        ker.dims.push_back(k.cols());
        incl.push_back(std::move(k));
    }
    for (int a = 0; a < alg.quiver.arrow_count(); ++a) {
        const Arrow& ar = alg.quiver.arrows[a];
        // Arrow action in kernel coordinates: solve incl[tgt] * X = M_a * incl[src].
        FpMat rhs = fp_mul(F, f.src->arrows[a], incl[ar.src]);
        auto x = fp_solve(F, incl[ar.tgt], rhs);
        internal_check(x.has_value(), "kernel is not arrow-stable");
        ker.arrows.push_back(std::move(*x));
    }
    ker.validate();
    SubQuotient out;
    out.rep = share(std::move(ker));
    out.map.src = out.rep;
    out.map.tgt = f.src;
    out.map.f = std::move(incl);
    out.map.validate();
    return out;
}

SubQuotient image(const ModuleMorphism& f) {
    const auto& alg = *f.src->alg;
    const Fp& F = alg.field;
    Representation im;
    im.alg = f.src->alg;
    std::vector<FpMat> incl;
    for (int v = 0; v < alg.vertex_count(); ++v) {
        FpMat b = fp_column_basis(F, f.f[v]);
        im.dims.push_back(b.cols());
        incl.push_back(std::move(b));
    }
    for (int a = 0; a < alg.quiver.arrow_count(); ++a) {
        const Arrow& ar = alg.quiver.arrows[a];
        FpMat rhs = fp_mul(F, f.tgt->arrows[a], incl[ar.src]);
        auto x = fp_solve(F, incl[ar.tgt], rhs);
        internal_check(x.has_value(), "image is not arrow-stable");
        im.arrows.push_back(std::move(*x));
    }
    im.validate();
    SubQuotient out;
    out.rep = share(std::move(im));
    out.map.src = out.rep;
    out.map.tgt = f.tgt;
    out.map.f = std::move(incl);
    out.map.validate();
    return out;
}

SubQuotient cokernel(const ModuleMorphism& f) {
    const auto& alg = *f.tgt->alg;
    const Fp& F = alg.field;
    Representation cok;
    cok.alg = f.tgt->alg;
    std::vector<FpMat> proj;    // quotient maps Q_v
    std::vector<FpMat> section; // unit-vector sections U_v with Q_v U_v = id
    for (int v = 0; v < alg.vertex_count(); ++v) {
        FpMat b = fp_column_basis(F, f.f[v]); // image basis in N_v
        int r = b.cols();
        FpMat full = b;
        std::vector<int> added = fp_extend_to_basis(F, full, f.tgt->dims[v]);
        int c = static_cast<int>(added.size());
        cok.dims.push_back(c);
        // Q_v = last c rows of full^{-1}: kills the image, identity on added units.
        FpMat q(c, f.tgt->dims[v]);
        if (f.tgt->dims[v] > 0) {
            auto inv = fp_inverse(F, full);
            internal_check(inv.has_value(), "cokernel basis not invertible");
            for (int i = 0; i < c; ++i)
                for (int j = 0; j < f.tgt->dims[v]; ++j) q.at(i, j) = inv->at(r + i, j);
        }
        FpMat u(f.tgt->dims[v], c);
        for (int i = 0; i < c; ++i) u.at(added[i], i) = 1;
        proj.push_back(std::move(q));
        section.push_back(std::move(u));
    }
    for (int a = 0; a < alg.quiver.arrow_count(); ++a) {
        const Arrow& ar = alg.quiver.arrows[a];
        // Well-defined on the quotient because N_a preserves the image of f.
        cok.arrows.push_back(fp_mul(F, proj[ar.tgt], fp_mul(F, f.tgt->arrows[a], section[ar.src])));
    }
    cok.validate();
    SubQuotient out;
    out.rep = share(std::move(cok));
    out.map.src = f.tgt;
    out.map.tgt = out.rep;
    out.map.f = std::move(proj);
    out.map.validate();
    return out;
}

Representation projective_module(const AlgebraPtr& alg, int v) {
    if (v < 0 || v >= alg->vertex_count()) fail(ErrorCode::UnknownVertex, "projective at unknown vertex");
    Representation r;
    r.alg = alg;
    const int nv = alg->vertex_count();
    for (int w = 0; w < nv; ++w)
        r.dims.push_back(static_cast<int>(alg->paths_between(v, w).size()));
    for (int a = 0; a < alg->quiver.arrow_count(); ++a) {
        const Arrow& ar = alg->quiver.arrows[a];
        const auto& src_paths = alg->paths_between(v, ar.src);
        const auto& tgt_paths = alg->paths_between(v, ar.tgt);
        FpMat m(static_cast<int>(tgt_paths.size()), static_cast<int>(src_paths.size()));
        // Basis path q: v ~> src maps to q then a (if relation-free).
        int arrow_as_path = -1;
        for (int pi : alg->paths_between(ar.src, ar.tgt))
            if (alg->paths[pi].length() == 1 && alg->paths[pi].arrows[0] == a) arrow_as_path = pi;
        internal_check(arrow_as_path >= 0, "arrow missing from path basis");
        for (size_t j = 0; j < src_paths.size(); ++j) {
            int ext = alg->compose(src_paths[j], arrow_as_path);
            if (ext < 0) continue;
            auto it = std::find(tgt_paths.begin(), tgt_paths.end(), ext);
            internal_check(it != tgt_paths.end(), "composed path missing from basis");
            m.at(static_cast<int>(it - tgt_paths.begin()), static_cast<int>(j)) = 1;
        }
        r.arrows.push_back(std::move(m));
    }
    r.validate();
    return r;
}

Representation injective_module(const AlgebraPtr& alg, int v) {
    if (v < 0 || v >= alg->vertex_count()) fail(ErrorCode::UnknownVertex, "injective at unknown vertex");
    Representation r;
    r.alg = alg;
    const int nv = alg->vertex_count();
    for (int w = 0; w < nv; ++w)
        r.dims.push_back(static_cast<int>(alg->paths_between(w, v).size()));
    for (int a = 0; a < alg->quiver.arrow_count(); ++a) {
        const Arrow& ar = alg->quiver.arrows[a];
        const auto& src_paths = alg->paths_between(ar.src, v);
        const auto& tgt_paths = alg->paths_between(ar.tgt, v);
        FpMat m(static_cast<int>(tgt_paths.size()), static_cast<int>(src_paths.size()));
        // Basis path q: src ~> v maps to its tail q' when q = a then q', else 0.
        int arrow_as_path = -1;
        for (int pi : alg->paths_between(ar.src, ar.tgt))
            if (alg->paths[pi].length() == 1 && alg->paths[pi].arrows[0] == a) arrow_as_path = pi;
        internal_check(arrow_as_path >= 0, "arrow missing from path basis");
        for (size_t i = 0; i < tgt_paths.size(); ++i) {
            int whole = alg->compose(arrow_as_path, tgt_paths[i]);
            if (whole < 0) continue;
            auto it = std::find(src_paths.begin(), src_paths.end(), whole);
            internal_check(it != src_paths.end(), "prefixed path missing from basis");
            m.at(static_cast<int>(i), static_cast<int>(it - src_paths.begin())) = 1;
        }
        r.arrows.push_back(std::move(m));
    }
    r.validate();
    return r;
}

Representation simple_module(const AlgebraPtr& alg, int v) {
    if (v < 0 || v >= alg->vertex_count()) fail(ErrorCode::UnknownVertex, "simple at unknown vertex");
    Representation r;
    r.alg = alg;
    r.dims.assign(alg->vertex_count(), 0);
    r.dims[v] = 1;
    for (int a = 0; a < alg->quiver.arrow_count(); ++a) {
        const Arrow& ar = alg->quiver.arrows[a];
        r.arrows.push_back(FpMat(r.dims[ar.tgt], r.dims[ar.src]));
    }
    r.validate();
    return r;
}

Representation regular_module(const AlgebraPtr& alg) {
    Representation r = Representation::zero(alg);
    for (int v = 0; v < alg->vertex_count(); ++v)
        r = Representation::direct_sum(r, projective_module(alg, v));
    return r;
}

Representation interval_module(const AlgebraPtr& alg, int a, int b) {
    internal_check(0 <= a && a <= b && b < alg->vertex_count(), "bad interval bounds");
    Representation r;
    r.alg = alg;
    r.dims.assign(alg->vertex_count(), 0);
    for (int v = a; v <= b; ++v) r.dims[v] = 1;
    for (int ar = 0; ar < alg->quiver.arrow_count(); ++ar) {
        const Arrow& arr = alg->quiver.arrows[ar];
        FpMat m(r.dims[arr.tgt], r.dims[arr.src]);
        if (r.dims[arr.src] == 1 && r.dims[arr.tgt] == 1) m.at(0, 0) = 1;
        r.arrows.push_back(std::move(m));
    }
    r.validate();
    return r;
}

std::vector<uint32_t> search_combination(const Fp& F, int dim, int random_tries,
                                         uint64_t sweep_cap, uint64_t seed,
                                         const std::function<bool(const std::vector<uint32_t>&)>& test) {
    if (dim == 0) return {};
    std::vector<uint32_t> coeffs(dim, 0);
    // Basis elements first.
    for (int i = 0; i < dim; ++i) {
        std::fill(coeffs.begin(), coeffs.end(), 0);
        coeffs[i] = 1;
        if (test(coeffs)) return coeffs;
    }
    // Seeded random combinations.
    std::mt19937_64 rng(seed);
    for (int t = 0; t < random_tries; ++t) {
        for (int i = 0; i < dim; ++i) coeffs[i] = static_cast<uint32_t>(rng() % F.p());
        if (test(coeffs)) return coeffs;
    }
    // Exhaustive sweep when feasible.
    uint64_t count = 1;
    bool small = true;
    for (int i = 0; i < dim; ++i) {
        count *= F.p();
        if (count > sweep_cap) { small = false; break; }
    }
    if (small) {
        std::fill(coeffs.begin(), coeffs.end(), 0);
        for (uint64_t n = 1; n < count; ++n) {
            // Increment base-p counter.
            for (int i = 0; i < dim; ++i) {
                coeffs[i] = (coeffs[i] + 1) % F.p();
                if (coeffs[i] != 0) break;
            }
            if (test(coeffs)) return coeffs;
        }
    }
    return {};
}

bool modules_isomorphic(const Representation& a, const Representation& b) {
    if (!same_dims(a, b)) return false;
    if (a.total_dim() == 0) return true;
    RepPtr pa = share(a), pb = share(b);
    auto basis = hom_modules(pa, pb);
    if (basis.empty()) return false;
    const Fp& F = a.alg->field;
    auto combo_is_iso = [&](const std::vector<uint32_t>& coeffs) {
        ModuleMorphism m = morphism_zero(pa, pb);
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i]) m = morphism_add(m, morphism_scale(coeffs[i], basis[i]));
        return m.is_iso();
    };
    auto hit = search_combination(F, static_cast<int>(basis.size()), 64, 1 << 16,
                                  0x51170001ULL, combo_is_iso);
    return !hit.empty();
}

int ModuleRegistry::find(const Representation& rep) const {
    for (size_t i = 0; i < reps_.size(); ++i)
        if (modules_isomorphic(*reps_[i], rep)) return static_cast<int>(i);
    return -1;
}

int ModuleRegistry::find_or_insert(const Representation& rep) {
    internal_check(rep.total_dim() > 0, "registry stores nonzero modules only");
    int id = find(rep);
    if (id >= 0) return id;
    reps_.push_back(share(rep));
    std::string nm = "M[";
    for (size_t v = 0; v < rep.dims.size(); ++v) {
        if (v) nm += ",";
        nm += std::to_string(rep.dims[v]);
    }
    nm += "]#" + std::to_string(reps_.size() - 1);
    names_.push_back(nm);
    return static_cast<int>(reps_.size()) - 1;
}

} // namespace silt
