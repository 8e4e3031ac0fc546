#include "silt/resolution.hpp"

#include <algorithm>

namespace silt {

int ProjSum::generator_offset(int i) const {
    int v = copies[i];
    int off = 0;
    for (int j = 0; j < i; ++j)
        off += static_cast<int>(alg->paths_between(copies[j], v).size());
    // The trivial path e_v sorts first among paths v ~> v.
    return off;
}

ProjSum ProjSum::build(const AlgebraPtr& alg, std::vector<int> copies) {
    ProjSum p;
    p.alg = alg;
    p.copies = std::move(copies);
    Representation rep = Representation::zero(alg);
    for (int v : p.copies) rep = Representation::direct_sum(rep, projective_module(alg, v));
    p.rep = share(std::move(rep));
    return p;
}

Top top_of(const Representation& m) {
    const auto& alg = *m.alg;
    const Fp& F = alg.field;
    Top t;
    for (int v = 0; v < alg.vertex_count(); ++v) {
        // Radical at v: sum of images of all arrows into v.
        FpMat rad(m.dims[v], 0);
        for (int a = 0; a < alg.quiver.arrow_count(); ++a)
            if (alg.quiver.arrows[a].tgt == v) rad = hstack(rad, m.arrows[a]);
        FpMat basis = fp_column_basis(F, rad);
        int r = basis.cols();
        FpMat full = basis;
        std::vector<int> added = fp_extend_to_basis(F, full, m.dims[v]);
        int c = static_cast<int>(added.size());
        FpMat q(c, m.dims[v]);
        if (m.dims[v] > 0) {
            auto inv = fp_inverse(F, full);
            internal_check(inv.has_value(), "top basis not invertible");
            for (int i = 0; i < c; ++i)
                for (int j = 0; j < m.dims[v]; ++j) q.at(i, j) = inv->at(r + i, j);
        }
        t.dims.push_back(c);
        t.proj.push_back(std::move(q));
        t.rep_units.push_back(std::move(added));
    }
    return t;
}

ModuleMorphism morphism_from_generators(const ProjSum& p, const RepPtr& n,
                                        const std::vector<FpMat>& images) {
    const auto& alg = *p.alg;
    const Fp& F = alg.field;
    internal_check(static_cast<int>(images.size()) == p.copy_count(),
                   "generator image count mismatch");
    ModuleMorphism mo = morphism_zero(p.rep, n);
    for (int w = 0; w < alg.vertex_count(); ++w) {
        int col = 0;
        for (int i = 0; i < p.copy_count(); ++i) {
            int v = p.copies[i];
            internal_check(images[i].rows() == n->dims[v] && images[i].cols() == 1,
                           "generator image shape mismatch");
            for (int q : alg.paths_between(v, w)) {
                // Column for basis element (copy i, path q) is act(q) applied
                // to the generator image.
                FpMat colvec = fp_mul(F, n->path_action(q), images[i]);
                for (int r = 0; r < n->dims[w]; ++r) mo.f[w].at(r, col) = colvec.at(r, 0);
                ++col;
            }
        }
        internal_check(col == p.rep->dims[w], "projective sum column bookkeeping mismatch");
    }
    mo.validate();
    return mo;
}

std::vector<FpMat> generator_images(const ProjSum& p, const ModuleMorphism& f) {
    std::vector<FpMat> images;
    for (int i = 0; i < p.copy_count(); ++i) {
        int v = p.copies[i];
        int col = 0;
        for (int j = 0; j < i; ++j)
            col += static_cast<int>(p.alg->paths_between(p.copies[j], v).size());
        FpMat img(f.tgt->dims[v], 1);
        for (int r = 0; r < f.tgt->dims[v]; ++r) img.at(r, 0) = f.f[v].at(r, col);
        images.push_back(std::move(img));
    }
    return images;
}

ProjCover projective_cover(const RepPtr& m) {
    const auto& alg = *m->alg;
    Top t = top_of(*m);
    std::vector<int> copies;
    std::vector<FpMat> images;
    for (int v = 0; v < alg.vertex_count(); ++v)
        for (int u : t.rep_units[v]) {
            copies.push_back(v);
            FpMat img(m->dims[v], 1);
            img.at(u, 0) = 1;
            images.push_back(std::move(img));
        }
    ProjCover cover;
    cover.p = ProjSum::build(m->alg, std::move(copies));
    cover.map = morphism_from_generators(cover.p, m, images);
    internal_check(cover.map.is_epi(), "projective cover is not surjective");
    return cover;
}

ResolutionPtr resolve_module(const RepPtr& m, int cap) {
    auto res = std::make_shared<MinimalResolution>();
    res->module = m;
    if (m->is_zero()) {
        res->status = ResolutionStatus::Terminated;
        return res;
    }
    RepPtr current = m;
    ModuleMorphism into_prev; // inclusion of the current syzygy into P_{k-1}
    // After a syzygy repeat is found we still extend by two steps so Ext can
    // be read off up to the certified vanishing bound (degree repeat + 2).
    int extra_after_cycle = -1;
    for (int k = 0; k <= cap + 2; ++k) {
        ProjCover cover = projective_cover(current);
        if (k == 0) {
            res->diffs.push_back(cover.map);
        } else {
            // d_k = inclusion of syzygy after composing with the new cover.
            res->diffs.push_back(morphism_compose(into_prev, cover.map));
        }
        res->terms.push_back(cover.p);
        SubQuotient ker = kernel(cover.map);
        if (ker.rep->is_zero()) {
            res->status = ResolutionStatus::Terminated;
            return res;
        }
        if (res->status != ResolutionStatus::CycleDetected) {
            // Cycle detection: a repeated syzygy class proves infinite pd.
            for (size_t s = 0; s < res->syzygies.size(); ++s)
                if (modules_isomorphic(*res->syzygies[s], *ker.rep)) {
                    res->status = ResolutionStatus::CycleDetected;
                    res->cycle_first = static_cast<int>(s);
                    res->cycle_second = static_cast<int>(res->syzygies.size());
                    extra_after_cycle = 2;
                    break;
                }
        } else if (extra_after_cycle-- <= 0) {
            res->syzygies.push_back(ker.rep);
            return res;
        }
        res->syzygies.push_back(ker.rep);
        current = ker.rep;
        into_prev = ker.map;
        if (res->status != ResolutionStatus::CycleDetected && k == cap) {
            res->status = ResolutionStatus::CapExceeded;
            return res;
        }
    }
    internal_check(res->status == ResolutionStatus::CycleDetected, "resolution loop exit state");
    return res;
}

int MinimalResolution::projdim() const {
    switch (status) {
        case ResolutionStatus::Terminated:
            return length() - 1; // length 0 only for the zero module
        case ResolutionStatus::CycleDetected:
            fail(ErrorCode::InfiniteProjDim, "syzygy class repeats; projective dimension is infinite");
        case ResolutionStatus::CapExceeded:
            fail(ErrorCode::ResolutionCapExceeded, "resolution cap hit without termination or cycle");
    }
    fail(ErrorCode::InternalError, "unreachable");
}

int ext_vanish_bound(const MinimalResolution& res) {
    switch (res.status) {
        case ResolutionStatus::Terminated:
            return res.length() - 1;
        case ResolutionStatus::CycleDetected:
            // Syzygies repeat with period (second - first) after the preamble,
            // so degrees 1..second+1 cover every syzygy class that ever occurs.
            return res.cycle_second + 1;
        case ResolutionStatus::CapExceeded:
            fail(ErrorCode::NoFiniteBound, "resolution cap hit; no vanishing bound certified");
    }
    fail(ErrorCode::InternalError, "unreachable");
}

namespace {

// Coordinates of Hom(P, N): one block per copy, of size dim N at the copy's
// vertex. Returns per-copy offsets plus the total length.
std::vector<int> hom_from_proj_offsets(const ProjSum& p, const Representation& n, int* total) {
    std::vector<int> ofs;
    int t = 0;
    for (int i = 0; i < p.copy_count(); ++i) {
        ofs.push_back(t);
        t += n.dims[p.copies[i]];
    }
    *total = t;
    return ofs;
}

// Matrix of composition with d: Hom(P_{k-1}, N) -> Hom(P_k, N).
FpMat compose_matrix(const ProjSum& pk, const ProjSum& pk1, const ModuleMorphism& d,
                     const Representation& n) {
    const auto& alg = *pk.alg;
    const Fp& F = alg.field;
    int rows_total = 0, cols_total = 0;
    std::vector<int> row_ofs = hom_from_proj_offsets(pk, n, &rows_total);
    std::vector<int> col_ofs = hom_from_proj_offsets(pk1, n, &cols_total);
    FpMat out(rows_total, cols_total);
    // Generator images of d: for copy j of P_k, d(gen_j) has coordinates over
    // the basis (copy i, path q) of P_{k-1} at vertex v_j.
    std::vector<FpMat> dgen = generator_images(pk, d);
    for (int j = 0; j < pk.copy_count(); ++j) {
        int vj = pk.copies[j];
        // Walk the P_{k-1} basis at vertex vj.
        int pos = 0;
        for (int i = 0; i < pk1.copy_count(); ++i) {
            int vi = pk1.copies[i];
            for (int q : alg.paths_between(vi, vj)) {
                uint32_t c = dgen[j].at(pos, 0);
                ++pos;
                if (c == 0) continue;
                // phi(d gen_j) += c * act(q) * phi(gen_i); contributes the
                // block c * act(q) mapping copy-i coordinates to copy-j rows.
                FpMat act = n.path_action(q); // n.dims[vj] x n.dims[vi]
                for (int r = 0; r < n.dims[vj]; ++r)
                    for (int s = 0; s < n.dims[vi]; ++s)
                        out.at(row_ofs[j] + r, col_ofs[i] + s) =
                            F.add(out.at(row_ofs[j] + r, col_ofs[i] + s), F.mul(c, act.at(r, s)));
            }
        }
        internal_check(pos == dgen[j].rows(), "generator coordinate bookkeeping mismatch");
    }
    return out;
}

} // namespace

ExtSpace ext_space(const ResolutionPtr& res, int k, const RepPtr& n) {
    internal_check(k >= 1, "ext_space is for positive degrees");
    const auto& alg = *res->module->alg;
    const Fp& F = alg.field;
    ExtSpace ext;
    ext.k = k;
    ext.m = res->module;
    ext.n = n;
    ext.res = res;
    if (k >= res->length()) {
        if (res->status == ResolutionStatus::Terminated) return ext; // Ext^k = 0
        fail(ErrorCode::ResolutionCapExceeded,
             "resolution not long enough for requested Ext degree");
    }
    const ProjSum& pk = res->terms[k];
    int coords = 0;
    hom_from_proj_offsets(pk, *n, &coords);
    ext.cocycle_coords = coords;

    // Cocycles: kernel of composition with d_{k+1} (everything if the
    // resolution terminates at k).
    FpMat cocycles;
    if (k + 1 < res->length()) {
        FpMat t_next = compose_matrix(res->terms[k + 1], pk, res->diffs[k + 1], *n);
        cocycles = fp_nullspace(F, t_next);
    } else if (res->status == ResolutionStatus::Terminated) {
        cocycles = FpMat::identity(coords);
    } else {
        fail(ErrorCode::ResolutionCapExceeded,
             "resolution not long enough for requested Ext degree");
    }
    // Boundaries: image of composition with d_k.
    FpMat t_k = compose_matrix(pk, res->terms[k - 1], res->diffs[k], *n);
    ext.boundary_basis = fp_column_basis(F, t_k);

    Rref bnd_t = fp_rref(F, ext.boundary_basis.transpose());
    // Classes: columns of `cocycles` that extend the boundary space, reduced.
    FpMat span = ext.boundary_basis;
    for (int c = 0; c < cocycles.cols(); ++c) {
        FpMat col(coords, 1);
        for (int r = 0; r < coords; ++r) col.at(r, 0) = cocycles.at(r, c);
        FpMat ext_col = hstack(span, col);
        if (fp_rank(F, ext_col) > span.cols()) {
            span = ext_col;
            ext.class_reps.push_back(fp_reduce_mod_columns(F, bnd_t, col));
        }
    }
    ext.dim = static_cast<int>(ext.class_reps.size());
    return ext;
}

int ext_dim(const ResolutionPtr& res, int k, const RepPtr& n) {
    return ext_space(res, k, n).dim;
}

FpMat ExtSpace::combine(const std::vector<uint32_t>& coeffs) const {
    internal_check(static_cast<int>(coeffs.size()) == dim, "class coefficient count mismatch");
    const Fp& F = m->alg->field;
    FpMat v(cocycle_coords, 1);
    for (int i = 0; i < dim; ++i)
        if (coeffs[i])
            v = fp_add(F, v, fp_scale(F, coeffs[i], class_reps[i]));
    return v;
}

ShortExact realize_ext_class(const ExtSpace& ext, const std::vector<uint32_t>& coeffs) {
    internal_check(ext.k == 1, "realize expects a degree-1 class");
    const RepPtr& c = ext.m;
    const RepPtr& a = ext.n;
    const Fp& F = c->alg->field;

    if (c->is_zero() || ext.res->length() == 0) {
        // Degenerate: C = 0 forces B = A.
        ShortExact ses;
        ses.a = a;
        ses.b = a;
        ses.c = c;
        ses.f = morphism_identity(a);
        ses.g = morphism_zero(a, c);
        return ses;
    }

    const ProjSum& p0 = ext.res->terms[0];
    const ModuleMorphism& eps = ext.res->diffs[0];

    ModuleMorphism phi; // P_1 -> A from the cocycle vector
    bool have_p1 = ext.res->length() > 1;
    if (have_p1) {
        const ProjSum& p1 = ext.res->terms[1];
        FpMat v = ext.combine(coeffs);
        std::vector<FpMat> images;
        int pos = 0;
        for (int i = 0; i < p1.copy_count(); ++i) {
            int vi = p1.copies[i];
            FpMat img(a->dims[vi], 1);
            for (int r = 0; r < a->dims[vi]; ++r) img.at(r, 0) = v.at(pos++, 0);
            images.push_back(std::move(img));
        }
        phi = morphism_from_generators(p1, a, images);
    }

    // Pushout: B = (A + P_0) / image of (phi, -d_1).
    RepPtr apb = share(Representation::direct_sum(*a, *p0.rep));
    SubQuotient cok;
    if (have_p1) {
        const ProjSum& p1 = ext.res->terms[1];
        ModuleMorphism u = morphism_zero(p1.rep, apb);
        const ModuleMorphism& d1 = ext.res->diffs[1];
        for (int v = 0; v < c->alg->vertex_count(); ++v) {
            for (int i = 0; i < a->dims[v]; ++i)
                for (int j = 0; j < p1.rep->dims[v]; ++j) u.f[v].at(i, j) = phi.f[v].at(i, j);
            for (int i = 0; i < p0.rep->dims[v]; ++i)
                for (int j = 0; j < p1.rep->dims[v]; ++j)
                    u.f[v].at(a->dims[v] + i, j) = F.neg(d1.f[v].at(i, j));
        }
        u.validate();
        cok = cokernel(u);
    } else {
        cok = cokernel(morphism_zero(share(Representation::zero(c->alg)), apb));
    }

    ShortExact ses;
    ses.a = a;
    ses.c = c;
    ses.b = cok.rep;
    // f = quotient restricted to the A block.
    ses.f = morphism_zero(a, ses.b);
    for (int v = 0; v < c->alg->vertex_count(); ++v)
        for (int i = 0; i < ses.b->dims[v]; ++i)
            for (int j = 0; j < a->dims[v]; ++j) ses.f.f[v].at(i, j) = cok.map.f[v].at(i, j);
    ses.f.validate();
    // g: induced by [0 | eps] on the quotient: solve g * Q = h per vertex.
    ses.g = morphism_zero(ses.b, c);
    for (int v = 0; v < c->alg->vertex_count(); ++v) {
        FpMat h(c->dims[v], apb->dims[v]);
        for (int i = 0; i < c->dims[v]; ++i)
            for (int j = 0; j < p0.rep->dims[v]; ++j)
                h.at(i, a->dims[v] + j) = eps.f[v].at(i, j);
        auto gt = fp_solve(F, cok.map.f[v].transpose(), h.transpose());
        internal_check(gt.has_value(), "pushout projection does not factor");
        ses.g.f[v] = gt->transpose();
    }
    ses.g.validate();

    // Exactness certification.
    internal_check(ses.f.is_mono(), "realized sequence: f not mono");
    internal_check(ses.g.is_epi(), "realized sequence: g not epi");
    internal_check(morphism_compose(ses.g, ses.f).is_zero(), "realized sequence: g f != 0");
    internal_check(ses.b->total_dim() == a->total_dim() + c->total_dim(),
                   "realized sequence: middle dimension off");
    return ses;
}

FpMat ext_class_of_ses(const ExtSpace& ext, const ShortExact& ses) {
    internal_check(ext.k == 1, "connecting class extraction expects degree 1");
    const Fp& F = ext.m->alg->field;
    internal_check(same_dims(*ext.m, *ses.c) && same_dims(*ext.n, *ses.a),
                   "sequence endpoints do not match the Ext space");
    if (ext.res->length() <= 1) return FpMat(ext.cocycle_coords, 1);
    const ProjSum& p0 = ext.res->terms[0];
    const ProjSum& p1 = ext.res->terms[1];
    // Lift eps: P_0 -> C through g to lambda: P_0 -> B.
    std::vector<FpMat> eps_gen = generator_images(p0, ext.res->diffs[0]);
    std::vector<FpMat> lambda_gen;
    for (int i = 0; i < p0.copy_count(); ++i) {
        int v = p0.copies[i];
        auto sol = fp_solve(F, ses.g.f[v], eps_gen[i]);
        internal_check(sol.has_value(), "epi lift failed");
        lambda_gen.push_back(std::move(*sol));
    }
    ModuleMorphism lambda = morphism_from_generators(p0, ses.b, lambda_gen);
    ModuleMorphism psi = morphism_compose(lambda, ext.res->diffs[1]); // P_1 -> B, lands in im f
    std::vector<FpMat> psi_gen = generator_images(p1, psi);
    FpMat vec(ext.cocycle_coords, 1);
    int pos = 0;
    for (int i = 0; i < p1.copy_count(); ++i) {
        int v = p1.copies[i];
        auto pre = fp_solve(F, ses.f.f[v], psi_gen[i]);
        internal_check(pre.has_value(), "connecting image not inside the submodule");
        for (int r = 0; r < pre->rows(); ++r) vec.at(pos++, 0) = pre->at(r, 0);
    }
    Rref bnd_t = fp_rref(F, ext.boundary_basis.transpose());
    // Reduce to the canonical representative convention used by class_reps.
    return fp_reduce_mod_columns(F, bnd_t, vec);
}

} // namespace silt
