#include "silt/complex.hpp"

#include <algorithm>

namespace silt {

// ---------------------------------------------------------------- path vecs

PathVec path_vec_zero(const AlgebraPtr& alg) { return PathVec(alg->dim(), 0); }

PathVec path_vec_unit(const AlgebraPtr& alg, int path) {
    PathVec v(alg->dim(), 0);
    v[path] = 1;
    return v;
}

bool path_vec_is_zero(const PathVec& v) {
    for (uint32_t c : v)
        if (c) return false;
    return true;
}

PathVec path_mul(const AlgebraPtr& alg, const PathVec& x, const PathVec& y) {
    const Fp& F = alg->field;
    PathVec out(alg->dim(), 0);
    for (int i = 0; i < alg->dim(); ++i) {
        if (!x[i]) continue;
        for (int j = 0; j < alg->dim(); ++j) {
            if (!y[j]) continue;
            int k = alg->compose(i, j);
            if (k >= 0) out[k] = F.add(out[k], F.mul(x[i], y[j]));
        }
    }
    return out;
}

PathVec path_add(const AlgebraPtr& alg, const PathVec& x, const PathVec& y) {
    const Fp& F = alg->field;
    PathVec out(alg->dim());
    for (int i = 0; i < alg->dim(); ++i) out[i] = F.add(x[i], y[i]);
    return out;
}

PathVec path_scale(const AlgebraPtr& alg, uint32_t c, const PathVec& x) {
    const Fp& F = alg->field;
    PathVec out(alg->dim());
    for (int i = 0; i < alg->dim(); ++i) out[i] = F.mul(c, x[i]);
    return out;
}

PathVec path_local_inverse(const AlgebraPtr& alg, int v, const PathVec& x) {
    const Fp& F = alg->field;
    int triv = alg->trivial_path[v];
    uint32_t c = x[triv];
    internal_check(c != 0, "local inverse requires a unit scalar part");
    // x = c (e_v + m) with m supported on longer paths v ~> v; m is nilpotent,
    // so (e_v + m)^{-1} is a finite geometric series.
    PathVec m = path_scale(alg, F.inv(c), x);
    m[triv] = F.sub(m[triv], 1);
    PathVec acc = path_vec_unit(alg, triv);
    PathVec term = path_vec_unit(alg, triv);
    for (int guard = 0; guard <= alg->dim(); ++guard) {
        term = path_scale(alg, F.neg(1), path_mul(alg, term, m));
        if (path_vec_is_zero(term)) {
            return path_scale(alg, F.inv(c), acc);
        }
        acc = path_add(alg, acc, term);
    }
    fail(ErrorCode::InternalError, "local inverse geometric series failed to terminate");
}

// ---------------------------------------------------------------- LambdaMat

LambdaMat::LambdaMat(const AlgebraPtr& a, std::vector<int> tgt, std::vector<int> src)
    : alg(a), src_slots(std::move(src)), tgt_slots(std::move(tgt)),
      e_(src_slots.size() * tgt_slots.size(), PathVec(a->dim(), 0)) {}

LambdaMat LambdaMat::identity(const AlgebraPtr& a, const std::vector<int>& slots) {
    LambdaMat m(a, slots, slots);
    for (size_t i = 0; i < slots.size(); ++i)
        m.at(static_cast<int>(i), static_cast<int>(i))[a->trivial_path[slots[i]]] = 1;
    return m;
}

bool LambdaMat::is_zero() const {
    for (const auto& v : e_)
        if (!path_vec_is_zero(v)) return false;
    return true;
}

void LambdaMat::validate() const {
    for (int j = 0; j < rows(); ++j)
        for (int i = 0; i < cols(); ++i) {
            const PathVec& v = at(j, i);
            internal_check(static_cast<int>(v.size()) == alg->dim(), "entry length mismatch");
            for (int p = 0; p < alg->dim(); ++p)
                if (v[p])
                    internal_check(alg->paths[p].source == tgt_slots[j] &&
                                       alg->path_target[p] == src_slots[i],
                                   "entry supported outside its hom space");
        }
}

FpMat LambdaMat::scalar_part() const {
    FpMat s(rows(), cols());
    for (int j = 0; j < rows(); ++j)
        for (int i = 0; i < cols(); ++i)
            if (tgt_slots[j] == src_slots[i]) s.at(j, i) = at(j, i)[alg->trivial_path[tgt_slots[j]]];
    return s;
}

bool LambdaMat::is_invertible() const {
    // A map between projective sums is invertible iff the induced map on
    // heads is, and that map is exactly the scalar part.
    if (rows() != cols()) return false;
    const Fp& F = alg->field;
    return fp_rank(F, scalar_part()) == rows();
}

LambdaMat lm_compose(const LambdaMat& a, const LambdaMat& b) {
    internal_check(a.alg == b.alg, "algebra mismatch in composition");
    internal_check(a.src_slots == b.tgt_slots, "shape mismatch in composition");
    LambdaMat c(a.alg, a.tgt_slots, b.src_slots);
    for (int z = 0; z < a.rows(); ++z)
        for (int x = 0; x < b.cols(); ++x) {
            PathVec acc = path_vec_zero(a.alg);
            for (int y = 0; y < a.cols(); ++y)
                acc = path_add(a.alg, acc, path_mul(a.alg, a.at(z, y), b.at(y, x)));
            c.at(z, x) = std::move(acc);
        }
    return c;
}

LambdaMat lm_add(const LambdaMat& a, const LambdaMat& b) {
    internal_check(a.src_slots == b.src_slots && a.tgt_slots == b.tgt_slots,
                   "shape mismatch in addition");
    LambdaMat c(a.alg, a.tgt_slots, a.src_slots);
    for (int j = 0; j < a.rows(); ++j)
        for (int i = 0; i < a.cols(); ++i) c.at(j, i) = path_add(a.alg, a.at(j, i), b.at(j, i));
    return c;
}

LambdaMat lm_scale(uint32_t c, const LambdaMat& a) {
    LambdaMat out(a.alg, a.tgt_slots, a.src_slots);
    for (int j = 0; j < a.rows(); ++j)
        for (int i = 0; i < a.cols(); ++i) out.at(j, i) = path_scale(a.alg, c, a.at(j, i));
    return out;
}

LambdaMat lm_neg(const LambdaMat& a) { return lm_scale(a.alg->field.neg(1), a); }

LambdaMat lm_sub(const LambdaMat& a, const LambdaMat& b) { return lm_add(a, lm_neg(b)); }

ModuleMorphism lambda_to_morphism(const LambdaMat& m, const ProjSum& src, const ProjSum& tgt) {
    internal_check(m.src_slots == src.copies && m.tgt_slots == tgt.copies,
                   "slot mismatch in materialization");
    std::vector<FpMat> images;
    for (int i = 0; i < src.copy_count(); ++i) {
        int v = src.copies[i];
        FpMat img(tgt.rep->dims[v], 1);
        int off = 0;
        for (int j = 0; j < tgt.copy_count(); ++j) {
            const auto& pb = m.alg->paths_between(tgt.copies[j], v);
            const PathVec& ent = m.at(j, i);
            for (size_t t = 0; t < pb.size(); ++t)
                img.at(off + static_cast<int>(t), 0) = ent[pb[t]];
            off += static_cast<int>(pb.size());
        }
        internal_check(off == tgt.rep->dims[v], "projective block bookkeeping mismatch");
        images.push_back(std::move(img));
    }
    return morphism_from_generators(src, tgt.rep, images);
}

LambdaMat lambda_from_morphism(const ProjSum& src, const ProjSum& tgt, const ModuleMorphism& f) {
    LambdaMat m(src.alg, tgt.copies, src.copies);
    auto images = generator_images(src, f);
    for (int i = 0; i < src.copy_count(); ++i) {
        int v = src.copies[i];
        int off = 0;
        for (int j = 0; j < tgt.copy_count(); ++j) {
            const auto& pb = src.alg->paths_between(tgt.copies[j], v);
            for (size_t t = 0; t < pb.size(); ++t)
                m.at(j, i)[pb[t]] = images[i].at(off + static_cast<int>(t), 0);
            off += static_cast<int>(pb.size());
        }
    }
    return m;
}

// -------------------------------------------------------------- ProjComplex

const std::vector<int>& ProjComplex::slots_at(int d) const {
    static const std::vector<int> empty;
    if (!in_range(d)) return empty;
    return slots[d - lo];
}

LambdaMat ProjComplex::diff_at(int d) const {
    if (d >= lo && d < hi()) return diffs[d - lo];
    return LambdaMat(alg, slots_at(d + 1), slots_at(d));
}

bool ProjComplex::is_zero_object() const { return total_slots() == 0; }

int ProjComplex::total_slots() const {
    int n = 0;
    for (const auto& s : slots) n += static_cast<int>(s.size());
    return n;
}

ProjSum ProjComplex::term(int d) const { return ProjSum::build(alg, slots_at(d)); }

void ProjComplex::validate() const {
    internal_check(diffs.size() == (slots.empty() ? 0 : slots.size() - 1),
                   "differential count mismatch");
    for (size_t i = 0; i < diffs.size(); ++i) {
        internal_check(diffs[i].alg == alg, "differential algebra mismatch");
        internal_check(diffs[i].src_slots == slots[i] && diffs[i].tgt_slots == slots[i + 1],
                       "differential shape mismatch");
        diffs[i].validate();
    }
    for (size_t i = 0; i + 1 < diffs.size(); ++i)
        internal_check(lm_compose(diffs[i + 1], diffs[i]).is_zero(),
                       "differential does not square to zero");
}

ComplexPtr share_complex(ProjComplex x) { return std::make_shared<const ProjComplex>(std::move(x)); }

int complex_total_dim(const ProjComplex& x) {
    int n = 0;
    for (const auto& s : x.slots)
        for (int v : s) {
            int d = 0;
            for (int w = 0; w < x.alg->vertex_count(); ++w)
                d += static_cast<int>(x.alg->paths_between(v, w).size());
            n += d;
        }
    return n;
}

bool complex_same_shape(const ProjComplex& a, const ProjComplex& b) {
    if (a.alg != b.alg) return false;
    int lo = std::min(a.lo, b.lo), hi = std::max(a.hi(), b.hi());
    for (int d = lo; d <= hi; ++d)
        if (a.slots_at(d) != b.slots_at(d)) return false;
    for (int d = lo; d < hi; ++d) {
        LambdaMat da = a.diff_at(d), db = b.diff_at(d);
        if (!lm_sub(da, db).is_zero()) return false;
    }
    return true;
}

ComplexPtr complex_zero(const AlgebraPtr& alg) {
    ProjComplex x;
    x.alg = alg;
    x.lo = 0;
    return share_complex(std::move(x));
}

ComplexPtr trim_complex(const ProjComplex& x) {
    int first = -1, last = -1;
    for (size_t i = 0; i < x.slots.size(); ++i)
        if (!x.slots[i].empty()) {
            if (first < 0) first = static_cast<int>(i);
            last = static_cast<int>(i);
        }
    if (first < 0) return complex_zero(x.alg);
    ProjComplex t;
    t.alg = x.alg;
    t.lo = x.lo + first;
    t.slots.assign(x.slots.begin() + first, x.slots.begin() + last + 1);
    t.diffs.assign(x.diffs.begin() + first, x.diffs.begin() + last);
    return share_complex(std::move(t));
}

ComplexPtr complex_from_resolution(const MinimalResolution& res) {
    int pd = res.module->is_zero() ? -1 : res.projdim(); // throws if pd unknown/infinite
    ProjComplex x;
    x.alg = res.module->alg;
    if (pd < 0) {
        x.lo = 0;
        return share_complex(std::move(x));
    }
    x.lo = -pd;
    for (int k = pd; k >= 0; --k) x.slots.push_back(res.terms[k].copies);
    for (int k = pd; k >= 1; --k)
        x.diffs.push_back(lambda_from_morphism(res.terms[k], res.terms[k - 1], res.diffs[k]));
    ComplexPtr c = trim_complex(x);
    c->validate();
    return c;
}

ComplexPtr shift_complex(const ComplexPtr& x, int n) {
    if (n == 0) return x;
    ProjComplex s;
    s.alg = x->alg;
    s.lo = x->lo - n;
    s.slots = x->slots;
    s.diffs = x->diffs;
    if (n % 2 != 0)
        for (auto& d : s.diffs) d = lm_neg(d);
    return share_complex(std::move(s));
}

// ----------------------------------------------------------------- ChainMap

LambdaMat ChainMap::comp_at(int d) const {
    if (d >= lo && d < lo + static_cast<int>(comps.size())) return comps[d - lo];
    return LambdaMat(src->alg, tgt->slots_at(d), src->slots_at(d));
}

bool ChainMap::is_zero() const {
    for (const auto& c : comps)
        if (!c.is_zero()) return false;
    return true;
}

void ChainMap::validate() const {
    internal_check(src->alg == tgt->alg, "chain map algebra mismatch");
    for (size_t i = 0; i < comps.size(); ++i) {
        int d = lo + static_cast<int>(i);
        internal_check(comps[i].src_slots == src->slots_at(d) &&
                           comps[i].tgt_slots == tgt->slots_at(d),
                       "chain map component shape mismatch");
        comps[i].validate();
    }
    int a = std::min(src->lo, tgt->lo) - 1, b = std::max(src->hi(), tgt->hi()) + 1;
    for (int d = a; d <= b; ++d) {
        LambdaMat lhs = lm_compose(comp_at(d + 1), src->diff_at(d));
        LambdaMat rhs = lm_compose(tgt->diff_at(d), comp_at(d));
        internal_check(lm_sub(lhs, rhs).is_zero(), "chain map does not commute with differentials");
    }
}

ChainMap chain_zero(const ComplexPtr& x, const ComplexPtr& y) {
    ChainMap f;
    f.src = x;
    f.tgt = y;
    f.lo = 0;
    return f;
}

ChainMap chain_identity(const ComplexPtr& x) {
    ChainMap f;
    f.src = x;
    f.tgt = x;
    f.lo = x->lo;
    for (int d = x->lo; d <= x->hi(); ++d)
        f.comps.push_back(LambdaMat::identity(x->alg, x->slots_at(d)));
    return f;
}

static void check_same_frame(const ComplexPtr& a, const ComplexPtr& b, const char* what) {
    internal_check(a == b || complex_same_shape(*a, *b), what);
}

ChainMap chain_compose(const ChainMap& g, const ChainMap& f) {
    check_same_frame(f.tgt, g.src, "chain composition endpoint mismatch");
    ChainMap h;
    h.src = f.src;
    h.tgt = g.tgt;
    int a = std::max(f.src->lo, g.tgt->lo), b = std::min(f.src->hi(), g.tgt->hi());
    h.lo = a;
    for (int d = a; d <= b; ++d) {
        LambdaMat gf = lm_compose(g.comp_at(d), f.comp_at(d));
        h.comps.push_back(std::move(gf));
    }
    return h;
}

ChainMap chain_add(const ChainMap& x, const ChainMap& y) {
    check_same_frame(x.src, y.src, "chain sum source mismatch");
    check_same_frame(x.tgt, y.tgt, "chain sum target mismatch");
    ChainMap h;
    h.src = x.src;
    h.tgt = x.tgt;
    int a = std::max(x.src->lo, x.tgt->lo), b = std::min(x.src->hi(), x.tgt->hi());
    if (a > b) { h.lo = 0; return h; }
    h.lo = a;
    for (int d = a; d <= b; ++d) h.comps.push_back(lm_add(x.comp_at(d), y.comp_at(d)));
    return h;
}

ChainMap chain_scale(uint32_t c, const ChainMap& x) {
    ChainMap h = x;
    for (auto& m : h.comps) m = lm_scale(c, m);
    return h;
}

ChainMap shift_chain_map(const ChainMap& f, int n) {
    ChainMap h;
    h.src = shift_complex(f.src, n);
    h.tgt = shift_complex(f.tgt, n);
    h.lo = f.lo - n;
    h.comps = f.comps;
    return h;
}

bool chain_map_is_iso(const ChainMap& f) {
    int a = std::min(f.src->lo, f.tgt->lo), b = std::max(f.src->hi(), f.tgt->hi());
    for (int d = a; d <= b; ++d) {
        LambdaMat c = f.comp_at(d);
        if (c.rows() == 0 && c.cols() == 0) continue;
        if (!c.is_invertible()) return false;
    }
    return true;
}

// ------------------------------------------------------------ cone and sums

ConeResult mapping_cone(const ChainMap& f) {
    const ComplexPtr& x = f.src;
    const ComplexPtr& y = f.tgt;
    const AlgebraPtr& alg = x->alg;
    ProjComplex c;
    c.alg = alg;
    int lo = std::min(x->lo - 1, y->lo), hi = std::max(x->hi() - 1, y->hi());
    if (x->is_zero_object() && y->is_zero_object()) { lo = 0; hi = -1; }
    c.lo = lo;
    for (int d = lo; d <= hi; ++d) {
        std::vector<int> s = x->slots_at(d + 1);
        const auto& ys = y->slots_at(d);
        s.insert(s.end(), ys.begin(), ys.end());
        c.slots.push_back(std::move(s));
    }
    for (int d = lo; d < hi; ++d) {
        LambdaMat m(alg, c.slots[d + 1 - lo], c.slots[d - lo]);
        LambdaMat dx = x->diff_at(d + 1);
        LambdaMat dy = y->diff_at(d);
        LambdaMat fc = f.comp_at(d + 1);
        int xr = dx.rows(), xc = dx.cols();
        int yr = dy.rows();
        // Block layout: rows [shift(X) | Y], cols [shift(X) | Y];
        // d_cone = [ -d_X, 0 ; -f, d_Y ].
        for (int j = 0; j < xr; ++j)
            for (int i = 0; i < xc; ++i) m.at(j, i) = path_scale(alg, alg->field.neg(1), dx.at(j, i));
        for (int j = 0; j < yr; ++j) {
            for (int i = 0; i < xc; ++i)
                m.at(xr + j, i) = path_scale(alg, alg->field.neg(1), fc.at(j, i));
            for (int i = 0; i < dy.cols(); ++i) m.at(xr + j, xc + i) = dy.at(j, i);
        }
        c.diffs.push_back(std::move(m));
    }
    ConeResult res;
    res.cone = share_complex(std::move(c));
    res.cone->validate();

    ChainMap into;
    into.src = y;
    into.tgt = res.cone;
    into.lo = lo;
    for (int d = lo; d <= hi; ++d) {
        LambdaMat m(alg, res.cone->slots_at(d), y->slots_at(d));
        int xr = static_cast<int>(x->slots_at(d + 1).size());
        for (size_t i = 0; i < y->slots_at(d).size(); ++i)
            m.at(xr + static_cast<int>(i), static_cast<int>(i))[alg->trivial_path[y->slots_at(d)[i]]] = 1;
        into.comps.push_back(std::move(m));
    }
    into.validate();

    ComplexPtr sx = shift_complex(x, 1);
    ChainMap onto;
    onto.src = res.cone;
    onto.tgt = sx;
    onto.lo = lo;
    for (int d = lo; d <= hi; ++d) {
        LambdaMat m(alg, sx->slots_at(d), res.cone->slots_at(d));
        for (size_t i = 0; i < sx->slots_at(d).size(); ++i)
            m.at(static_cast<int>(i), static_cast<int>(i))[alg->trivial_path[sx->slots_at(d)[i]]] = 1;
        onto.comps.push_back(std::move(m));
    }
    onto.validate();

    res.into_cone = std::move(into);
    res.onto_shift = std::move(onto);
    return res;
}

ComplexSum complex_direct_sum(const AlgebraPtr& alg, const std::vector<ComplexPtr>& parts) {
    ProjComplex s;
    s.alg = alg;
    int lo = 0, hi = -1;
    bool any = false;
    for (const auto& p : parts) {
        if (p->slots.empty()) continue;
        if (!any) { lo = p->lo; hi = p->hi(); any = true; }
        else { lo = std::min(lo, p->lo); hi = std::max(hi, p->hi()); }
    }
    s.lo = any ? lo : 0;
    std::vector<std::vector<int>> offsets(parts.size()); // per part, per degree
    if (any) {
        for (int d = lo; d <= hi; ++d) {
            std::vector<int> sl;
            for (size_t k = 0; k < parts.size(); ++k) {
                offsets[k].push_back(static_cast<int>(sl.size()));
                const auto& ps = parts[k]->slots_at(d);
                sl.insert(sl.end(), ps.begin(), ps.end());
            }
            s.slots.push_back(std::move(sl));
        }
        for (int d = lo; d < hi; ++d) {
            LambdaMat m(alg, s.slots[d + 1 - lo], s.slots[d - lo]);
            for (size_t k = 0; k < parts.size(); ++k) {
                LambdaMat dk = parts[k]->diff_at(d);
                for (int j = 0; j < dk.rows(); ++j)
                    for (int i = 0; i < dk.cols(); ++i)
                        m.at(offsets[k][d + 1 - lo] + j, offsets[k][d - lo] + i) = dk.at(j, i);
            }
            s.diffs.push_back(std::move(m));
        }
    }
    ComplexSum out;
    out.sum = share_complex(std::move(s));
    out.sum->validate();
    for (size_t k = 0; k < parts.size(); ++k) {
        ChainMap in = chain_zero(parts[k], out.sum);
        ChainMap pr = chain_zero(out.sum, parts[k]);
        in.lo = out.sum->lo;
        pr.lo = out.sum->lo;
        for (int d = out.sum->lo; d <= out.sum->hi(); ++d) {
            LambdaMat mi(alg, out.sum->slots_at(d), parts[k]->slots_at(d));
            LambdaMat mp(alg, parts[k]->slots_at(d), out.sum->slots_at(d));
            const auto& ps = parts[k]->slots_at(d);
            int off = offsets[k].empty() ? 0 : offsets[k][d - out.sum->lo];
            for (size_t i = 0; i < ps.size(); ++i) {
                int t = alg->trivial_path[ps[i]];
                mi.at(off + static_cast<int>(i), static_cast<int>(i))[t] = 1;
                mp.at(static_cast<int>(i), off + static_cast<int>(i))[t] = 1;
            }
            in.comps.push_back(std::move(mi));
            pr.comps.push_back(std::move(mp));
        }
        in.validate();
        pr.validate();
        out.inject.push_back(std::move(in));
        out.project.push_back(std::move(pr));
    }
    return out;
}

// ------------------------------------------------------------- hom space

namespace {

// Coordinate layout for degreewise maps X^d -> Y^{d+off}: one coordinate per
// (degree, target slot, source slot, admissible path), in that scan order.
struct MapLayout {
    int lo = 0, hi = -1; // degree range (of the X side)
    std::vector<int> deg_offset;
    int total = 0;
};

MapLayout build_layout(const ProjComplex& x, const ProjComplex& y, int off) {
    MapLayout L;
    L.lo = std::max(x.lo, y.lo - off);
    L.hi = std::min(x.hi(), y.hi() - off);
    int acc = 0;
    for (int d = L.lo; d <= L.hi; ++d) {
        L.deg_offset.push_back(acc);
        for (int w : y.slots_at(d + off))
            for (int v : x.slots_at(d))
                acc += static_cast<int>(x.alg->paths_between(w, v).size());
    }
    L.total = acc;
    return L;
}

// Coordinate index of (degree d, target slot j, source slot i, path p) in a
// layout for maps X^d -> Y^{d+off}.
int coord_index(const ProjComplex& x, const ProjComplex& y, int off, const MapLayout& L, int d,
                int j, int i, int p) {
    int pos = L.deg_offset[d - L.lo];
    const auto& ys = y.slots_at(d + off);
    const auto& xs = x.slots_at(d);
    for (int jj = 0; jj < j; ++jj)
        for (size_t ii = 0; ii < xs.size(); ++ii)
            pos += static_cast<int>(x.alg->paths_between(ys[jj], xs[ii]).size());
    for (int ii = 0; ii < i; ++ii)
        pos += static_cast<int>(x.alg->paths_between(ys[j], xs[ii]).size());
    const auto& pb = x.alg->paths_between(ys[j], xs[i]);
    for (size_t t = 0; t < pb.size(); ++t)
        if (pb[t] == p) return pos + static_cast<int>(t);
    fail(ErrorCode::InternalError, "path outside its hom space in coordinate lookup");
}

// Writes entry coefficients of a degree-d component into a coordinate column.
void pack_component(const ProjComplex& x, const ProjComplex& y, int off, const MapLayout& L,
                    int d, const LambdaMat& m, FpMat& col, bool add, const Fp& F) {
    int pos = L.deg_offset[d - L.lo];
    const auto& ys = y.slots_at(d + off);
    const auto& xs = x.slots_at(d);
    for (size_t j = 0; j < ys.size(); ++j)
        for (size_t i = 0; i < xs.size(); ++i)
            for (int p : x.alg->paths_between(ys[j], xs[i])) {
                uint32_t c = m.at(static_cast<int>(j), static_cast<int>(i))[p];
                col.at(pos, 0) = add ? F.add(col.at(pos, 0), c) : c;
                ++pos;
            }
}

LambdaMat unpack_component(const ProjComplex& x, const ProjComplex& y, int off, const MapLayout& L,
                           int d, const FpMat& col) {
    LambdaMat m(x.alg, y.slots_at(d + off), x.slots_at(d));
    int pos = L.deg_offset[d - L.lo];
    const auto& ys = y.slots_at(d + off);
    const auto& xs = x.slots_at(d);
    for (size_t j = 0; j < ys.size(); ++j)
        for (size_t i = 0; i < xs.size(); ++i)
            for (int p : x.alg->paths_between(ys[j], xs[i]))
                m.at(static_cast<int>(j), static_cast<int>(i))[p] = col.at(pos++, 0);
    return m;
}

ChainMap chain_from_coords(const ComplexPtr& x, const ComplexPtr& y, const MapLayout& L,
                           const FpMat& col) {
    ChainMap f;
    f.src = x;
    f.tgt = y;
    f.lo = L.lo;
    for (int d = L.lo; d <= L.hi; ++d) f.comps.push_back(unpack_component(*x, *y, 0, L, d, col));
    return f;
}

} // namespace

ChainMap ComplexHomSpace::materialize(const FpMat& coord_col) const {
    MapLayout L = build_layout(*x, *y, 0);
    internal_check(coord_col.rows() == L.total && coord_col.cols() == 1,
                   "coordinate column shape mismatch");
    ChainMap f = chain_from_coords(x, y, L, coord_col);
    f.validate();
    return f;
}

FpMat ComplexHomSpace::coords_of(const ChainMap& f) const {
    check_same_frame(f.src, x, "coords_of source mismatch");
    check_same_frame(f.tgt, y, "coords_of target mismatch");
    MapLayout L = build_layout(*x, *y, 0);
    FpMat col(L.total, 1);
    for (int d = L.lo; d <= L.hi; ++d)
        pack_component(*x, *y, 0, L, d, f.comp_at(d), col, false, x->alg->field);
    return col;
}

FpMat ComplexHomSpace::k_reduce(const FpMat& coord_col) const {
    const Fp& F = x->alg->field;
    if (coord_col.rows() == 0) return coord_col;
    Rref bnd_t = fp_rref(F, boundary_cols.transpose());
    return fp_reduce_mod_columns(F, bnd_t, coord_col);
}

ChainMap ComplexHomSpace::from_class(const std::vector<uint32_t>& coeffs) const {
    internal_check(static_cast<int>(coeffs.size()) == k_dim, "class coefficient count mismatch");
    const Fp& F = x->alg->field;
    FpMat col(coord_dim, 1);
    for (int i = 0; i < k_dim; ++i)
        if (coeffs[i])
            for (int r = 0; r < coord_dim; ++r)
                col.at(r, 0) = F.add(col.at(r, 0), F.mul(coeffs[i], k_class_reps[i].at(r, 0)));
    return materialize(col);
}

ComplexHomSpace hom_complexes(const ComplexPtr& x, const ComplexPtr& y) {
    internal_check(x->alg == y->alg, "hom between complexes over different algebras");
    const AlgebraPtr& alg = x->alg;
    const Fp& F = alg->field;
    ComplexHomSpace H;
    H.x = x;
    H.y = y;
    MapLayout L = build_layout(*x, *y, 0);
    H.coord_dim = L.total;

    // Chain-map condition: f^{d+1} d_X^d - d_Y^d f^d = 0 for all d. Rows are
    // coordinates of maps X^d -> Y^{d+1}.
    MapLayout R = build_layout(*x, *y, 1);
    FpMat sys(R.total, L.total);
    for (int d = R.lo; d <= R.hi; ++d) {
        // Contribution of f^{d+1} through d_X^d.
        if (d + 1 >= L.lo && d + 1 <= L.hi) {
            LambdaMat dx = x->diff_at(d);
            int pos = L.deg_offset[d + 1 - L.lo];
            const auto& ys = y->slots_at(d + 1);
            const auto& xs = x->slots_at(d + 1);
            for (size_t j = 0; j < ys.size(); ++j)
                for (size_t m = 0; m < xs.size(); ++m)
                    for (int q : alg->paths_between(ys[j], xs[m])) {
                        // unit f^{d+1} with path q at (j, m): composite with
                        // d_X lands at rows (j, i, compose(q, r)).
                        for (int i = 0; i < dx.cols(); ++i) {
                            const PathVec& ent = dx.at(static_cast<int>(m), i);
                            for (int r = 0; r < alg->dim(); ++r) {
                                if (!ent[r]) continue;
                                int pc = alg->compose(q, r);
                                if (pc < 0) continue;
                                int row = coord_index(*x, *y, 1, R, d, static_cast<int>(j), i, pc);
                                sys.at(row, pos) = F.add(sys.at(row, pos), ent[r]);
                            }
                        }
                        ++pos;
                    }
        }
        // Contribution of -d_Y^d f^d.
        if (d >= L.lo && d <= L.hi) {
            LambdaMat dy = y->diff_at(d);
            int pos = L.deg_offset[d - L.lo];
            const auto& ys = y->slots_at(d);
            const auto& xs = x->slots_at(d);
            for (size_t j = 0; j < ys.size(); ++j)
                for (size_t i = 0; i < xs.size(); ++i)
                    for (int q : alg->paths_between(ys[j], xs[i])) {
                        for (int jp = 0; jp < dy.rows(); ++jp) {
                            const PathVec& ent = dy.at(jp, static_cast<int>(j));
                            for (int r = 0; r < alg->dim(); ++r) {
                                if (!ent[r]) continue;
                                int pc = alg->compose(r, q);
                                if (pc < 0) continue;
                                int row =
                                    coord_index(*x, *y, 1, R, d, jp, static_cast<int>(i), pc);
                                sys.at(row, pos) = F.sub(sys.at(row, pos), ent[r]);
                            }
                        }
                        ++pos;
                    }
        }
    }

    FpMat null = fp_nullspace(F, sys);
    H.chain_basis_coords = null;
    for (int c = 0; c < null.cols(); ++c) {
        FpMat col(null.rows(), 1);
        for (int r = 0; r < null.rows(); ++r) col.at(r, 0) = null.at(r, c);
        H.chain_basis.push_back(chain_from_coords(x, y, L, col));
        H.chain_basis.back().validate();
    }

    // Null-homotopic subspace: boundaries d_Y h + h d_X of degree -1 maps h.
    MapLayout HL = build_layout(*x, *y, -1);
    FpMat bnd(L.total, HL.total);
    int hcol = 0;
    for (int d = HL.lo; d <= HL.hi; ++d) {
        const auto& ys = y->slots_at(d - 1);
        const auto& xs = x->slots_at(d);
        for (size_t j = 0; j < ys.size(); ++j)
            for (size_t i = 0; i < xs.size(); ++i)
                for (int q : alg->paths_between(ys[j], xs[i])) {
                    FpMat col(L.total, 1);
                    // d_Y^{d-1} h^d contributes at degree d.
                    if (d >= L.lo && d <= L.hi) {
                        LambdaMat m(alg, y->slots_at(d), x->slots_at(d));
                        LambdaMat dy = y->diff_at(d - 1);
                        for (int jp = 0; jp < dy.rows(); ++jp) {
                            const PathVec& ent = dy.at(jp, static_cast<int>(j));
                            for (int r = 0; r < alg->dim(); ++r) {
                                if (!ent[r]) continue;
                                int pc = alg->compose(r, q);
                                if (pc >= 0)
                                    m.at(jp, static_cast<int>(i))[pc] =
                                        F.add(m.at(jp, static_cast<int>(i))[pc], ent[r]);
                            }
                        }
                        pack_component(*x, *y, 0, L, d, m, col, true, F);
                    }
                    // h^d d_X^{d-1} contributes at degree d-1.
                    if (d - 1 >= L.lo && d - 1 <= L.hi) {
                        LambdaMat m(alg, y->slots_at(d - 1), x->slots_at(d - 1));
                        LambdaMat dx = x->diff_at(d - 1);
                        for (int ip = 0; ip < dx.cols(); ++ip) {
                            const PathVec& ent = dx.at(static_cast<int>(i), ip);
                            for (int r = 0; r < alg->dim(); ++r) {
                                if (!ent[r]) continue;
                                int pc = alg->compose(q, r);
                                if (pc >= 0)
                                    m.at(static_cast<int>(j), ip)[pc] =
                                        F.add(m.at(static_cast<int>(j), ip)[pc], ent[r]);
                            }
                        }
                        pack_component(*x, *y, 0, L, d - 1, m, col, true, F);
                    }
                    for (int r = 0; r < L.total; ++r) bnd.at(r, hcol) = col.at(r, 0);
                    ++hcol;
                }
    }
    H.boundary_cols = fp_column_basis(F, bnd);
    H.k_dim = static_cast<int>(H.chain_basis.size()) - H.boundary_cols.cols();
    internal_check(H.k_dim >= 0, "homotopy boundaries exceed chain maps");

    // Reduced class representatives: basis columns that extend the boundary
    // span, reduced modulo it.
    if (H.k_dim > 0) {
        Rref bnd_t = fp_rref(F, H.boundary_cols.transpose());
        FpMat grow = H.boundary_cols;
        int base = fp_rank(F, grow);
        for (int c = 0; c < null.cols() && static_cast<int>(H.k_class_reps.size()) < H.k_dim; ++c) {
            FpMat col(null.rows(), 1);
            for (int r = 0; r < null.rows(); ++r) col.at(r, 0) = null.at(r, c);
            FpMat cand = hstack(grow, col);
            if (fp_rank(F, cand) > base) {
                grow = cand;
                ++base;
                H.k_class_reps.push_back(fp_reduce_mod_columns(F, bnd_t, col));
            }
        }
        internal_check(static_cast<int>(H.k_class_reps.size()) == H.k_dim,
                       "failed to complete homotopy class representatives");
    }
    return H;
}

int hom_k_dim(const ComplexPtr& x, const ComplexPtr& y) { return hom_complexes(x, y).k_dim; }

// ------------------------------------------------------------- minimization

bool complex_is_minimal(const ProjComplex& x) {
    for (const auto& d : x.diffs)
        if (!d.scalar_part().is_zero()) return false;
    return true;
}

namespace {

struct CancelStep {
    ComplexPtr next;
    ChainMap project; // cur -> next
    ChainMap include; // next -> cur
};

// Cancels an invertible entry (j, i) of the differential at degree d,
// producing the contracted complex and the two contraction chain maps.
CancelStep cancel_entry(const ComplexPtr& cur, int d, int j, int i) {
    const AlgebraPtr& alg = cur->alg;
    const Fp& F = alg->field;
    LambdaMat dd = cur->diff_at(d);
    int v = cur->slots_at(d)[i];
    internal_check(cur->slots_at(d + 1)[j] == v, "cancellation pivot vertex mismatch");
    PathVec u = dd.at(j, i);
    PathVec uinv = path_local_inverse(alg, v, u);

    auto drop = [](const std::vector<int>& s, int k) {
        std::vector<int> out;
        for (int t = 0; t < static_cast<int>(s.size()); ++t)
            if (t != k) out.push_back(s[t]);
        return out;
    };

    ProjComplex nx;
    nx.alg = alg;
    nx.lo = cur->lo;
    for (int e = cur->lo; e <= cur->hi(); ++e) {
        if (e == d) nx.slots.push_back(drop(cur->slots_at(e), i));
        else if (e == d + 1) nx.slots.push_back(drop(cur->slots_at(e), j));
        else nx.slots.push_back(cur->slots_at(e));
    }
    for (int e = cur->lo; e < cur->hi(); ++e) {
        LambdaMat old = cur->diff_at(e);
        LambdaMat m(alg, nx.slots[e + 1 - nx.lo], nx.slots[e - nx.lo]);
        if (e == d) {
            int rj = 0;
            for (int r = 0; r < old.rows(); ++r) {
                if (r == j) continue;
                int ci = 0;
                for (int cidx = 0; cidx < old.cols(); ++cidx) {
                    if (cidx == i) continue;
                    PathVec corr = path_mul(alg, old.at(r, i), path_mul(alg, uinv, old.at(j, cidx)));
                    PathVec val = path_add(alg, old.at(r, cidx), path_scale(alg, F.neg(1), corr));
                    m.at(rj, ci) = std::move(val);
                    ++ci;
                }
                ++rj;
            }
        } else if (e == d - 1) {
            int rj = 0;
            for (int r = 0; r < old.rows(); ++r) {
                if (r == i) continue;
                for (int cidx = 0; cidx < old.cols(); ++cidx) m.at(rj, cidx) = old.at(r, cidx);
                ++rj;
            }
        } else if (e == d + 1) {
            for (int r = 0; r < old.rows(); ++r) {
                int ci = 0;
                for (int cidx = 0; cidx < old.cols(); ++cidx) {
                    if (cidx == j) continue;
                    m.at(r, ci) = old.at(r, cidx);
                    ++ci;
                }
            }
        } else {
            m = old;
        }
        nx.diffs.push_back(std::move(m));
    }
    CancelStep st;
    st.next = share_complex(std::move(nx));
    st.next->validate();

    // Projection cur -> next: identity away from the pivot; at degree d the
    // pivot column is dropped, at degree d+1 the pivot row folds into the
    // survivors via -d(.,i) u^{-1}.
    ChainMap pr;
    pr.src = cur;
    pr.tgt = st.next;
    pr.lo = cur->lo;
    for (int e = cur->lo; e <= cur->hi(); ++e) {
        LambdaMat m(alg, st.next->slots_at(e), cur->slots_at(e));
        if (e == d) {
            int rj = 0;
            for (int r = 0; r < static_cast<int>(cur->slots_at(e).size()); ++r) {
                if (r == i) continue;
                m.at(rj, r)[alg->trivial_path[cur->slots_at(e)[r]]] = 1;
                ++rj;
            }
        } else if (e == d + 1) {
            LambdaMat old = cur->diff_at(d);
            int rj = 0;
            for (int r = 0; r < static_cast<int>(cur->slots_at(e).size()); ++r) {
                if (r == j) continue;
                m.at(rj, r)[alg->trivial_path[cur->slots_at(e)[r]]] = 1;
                m.at(rj, j) = path_scale(alg, F.neg(1), path_mul(alg, old.at(r, i), uinv));
                ++rj;
            }
        } else {
            m = LambdaMat::identity(alg, cur->slots_at(e));
        }
        pr.comps.push_back(std::move(m));
    }
    pr.validate();

    // Inclusion next -> cur: identity away from the pivot; at degree d the
    // dropped row i is filled with -u^{-1} d(j, .).
    ChainMap in;
    in.src = st.next;
    in.tgt = cur;
    in.lo = cur->lo;
    for (int e = cur->lo; e <= cur->hi(); ++e) {
        LambdaMat m(alg, cur->slots_at(e), st.next->slots_at(e));
        if (e == d) {
            LambdaMat old = cur->diff_at(d);
            int ci = 0;
            for (int cidx = 0; cidx < static_cast<int>(cur->slots_at(e).size()); ++cidx) {
                if (cidx == i) continue;
                m.at(cidx, ci)[alg->trivial_path[cur->slots_at(e)[cidx]]] = 1;
                m.at(i, ci) = path_scale(alg, F.neg(1), path_mul(alg, uinv, old.at(j, cidx)));
                ++ci;
            }
        } else if (e == d + 1) {
            int ci = 0;
            for (int cidx = 0; cidx < static_cast<int>(cur->slots_at(e).size()); ++cidx) {
                if (cidx == j) continue;
                m.at(cidx, ci)[alg->trivial_path[cur->slots_at(e)[cidx]]] = 1;
                ++ci;
            }
        } else {
            m = LambdaMat::identity(alg, cur->slots_at(e));
        }
        in.comps.push_back(std::move(m));
    }
    in.validate();

    st.project = std::move(pr);
    st.include = std::move(in);
    return st;
}

// Reframes a chain map onto structurally equal endpoint objects.
ChainMap reframe(const ChainMap& f, const ComplexPtr& src, const ComplexPtr& tgt) {
    check_same_frame(f.src, src, "reframe source mismatch");
    check_same_frame(f.tgt, tgt, "reframe target mismatch");
    ChainMap out = f;
    out.src = src;
    out.tgt = tgt;
    return out;
}

} // namespace

MinimizeResult minimize_complex(const ComplexPtr& x) {
    const Fp& F = x->alg->field;
    ComplexPtr cur = x;
    ChainMap proj = chain_identity(x);
    ChainMap incl = chain_identity(x);
    for (;;) {
        int fd = 0, fj = -1, fi = -1;
        for (int e = cur->lo; e < cur->hi() && fj < 0; ++e) {
            LambdaMat dd = cur->diff_at(e);
            FpMat sc = dd.scalar_part();
            for (int j = 0; j < sc.rows() && fj < 0; ++j)
                for (int i = 0; i < sc.cols(); ++i)
                    if (sc.at(j, i) != 0) {
                        fd = e;
                        fj = j;
                        fi = i;
                        break;
                    }
        }
        if (fj < 0) break;
        CancelStep st = cancel_entry(cur, fd, fj, fi);
        proj = chain_compose(st.project, proj);
        incl = chain_compose(incl, st.include);
        cur = st.next;
    }
    ComplexPtr trimmed = trim_complex(*cur);
    MinimizeResult res;
    res.min = trimmed;
    res.project = reframe(proj, x, trimmed);
    res.include = reframe(incl, trimmed, x);
    internal_check(complex_is_minimal(*res.min), "minimization left an invertible entry");
    // project after include is the identity on the minimal model.
    ChainMap round = chain_compose(res.project, res.include);
    ChainMap idm = chain_identity(trimmed);
    internal_check(chain_add(round, chain_scale(F.neg(1), idm)).is_zero(),
                   "contraction maps do not retract");
    return res;
}

// ------------------------------------------------------------ decomposition

namespace {

// Stable power f^(2^s) with 2^s >= total dimension, computed degreewise.
std::vector<LambdaMat> chain_stable_power(const ComplexPtr& c, const ChainMap& f) {
    int need = complex_total_dim(*c);
    std::vector<LambdaMat> g;
    for (int d = c->lo; d <= c->hi(); ++d) g.push_back(f.comp_at(d));
    for (int have = 1; have < need; have *= 2)
        for (auto& m : g) m = lm_compose(m, m);
    return g;
}

bool chain_power_zero(const std::vector<LambdaMat>& g) {
    for (const auto& m : g)
        if (!m.is_zero()) return false;
    return true;
}

bool chain_power_invertible(const std::vector<LambdaMat>& g) {
    for (const auto& m : g)
        if (m.rows() > 0 && !m.is_invertible()) return false;
    return true;
}

ModuleMorphism morphism_inverse(const ModuleMorphism& f) {
    const Fp& F = f.src->alg->field;
    ModuleMorphism g = morphism_zero(f.tgt, f.src);
    for (size_t v = 0; v < f.f.size(); ++v) {
        auto inv = fp_inverse(F, f.f[v]);
        internal_check(inv.has_value(), "expected an isomorphism");
        g.f[v] = std::move(*inv);
    }
    g.validate();
    return g;
}

void decompose_complex_into(const ComplexPtr& m, const DecomposeBudget& budget,
                            std::vector<ComplexPtr>& out) {
    if (m->is_zero_object()) return;
    const AlgebraPtr& alg = m->alg;
    const Fp& F = alg->field;
    ComplexHomSpace H = hom_complexes(m, m);
    internal_check(!H.chain_basis.empty(), "chain endomorphisms of a nonzero complex are nonzero");
    if (H.chain_basis.size() == 1) {
        out.push_back(m);
        return;
    }
    std::vector<LambdaMat> split_power;
    auto is_splitter = [&](const std::vector<uint32_t>& coeffs) {
        ChainMap f = chain_zero(m, m);
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i]) f = chain_add(f, chain_scale(coeffs[i], H.chain_basis[i]));
        auto g = chain_stable_power(m, f);
        if (chain_power_zero(g) || chain_power_invertible(g)) return false;
        split_power = g;
        return true;
    };
    auto hit = search_combination(F, static_cast<int>(H.chain_basis.size()), budget.random_tries,
                                  budget.endo_sweep_cap, 0xC0117E5ULL, is_splitter);
    if (hit.empty()) {
        uint64_t count = 1;
        for (size_t i = 0; i < H.chain_basis.size(); ++i) {
            count *= F.p();
            if (count > budget.endo_sweep_cap)
                fail(ErrorCode::BudgetExceeded,
                     "chain endomorphism algebra too large to certify indecomposability");
        }
        out.push_back(m);
        return;
    }

    // Split degreewise along the stable power: kernel and image parts are
    // subcomplexes; both are degreewise projective, so each re-expresses on
    // its projective cover, transported by conjugation.
    std::vector<ProjSum> terms;
    for (int d = m->lo; d <= m->hi(); ++d) terms.push_back(m->term(d));
    auto build_part = [&](bool use_kernel) -> ComplexPtr {
        std::vector<RepPtr> parts;          // degreewise submodule
        std::vector<ModuleMorphism> incls;  // into m's terms
        for (size_t k = 0; k < terms.size(); ++k) {
            ModuleMorphism g =
                lambda_to_morphism(split_power[k], terms[k], terms[k]);
            std::vector<FpMat> cols;
            for (size_t v = 0; v < g.f.size(); ++v)
                cols.push_back(use_kernel ? fp_nullspace(F, g.f[v]) : fp_column_basis(F, g.f[v]));
            Representation sub;
            sub.alg = alg;
            for (size_t v = 0; v < cols.size(); ++v) sub.dims.push_back(cols[v].cols());
            for (int a = 0; a < alg->quiver.arrow_count(); ++a) {
                const Arrow& ar = alg->quiver.arrows[a];
                FpMat rhs = fp_mul(F, terms[k].rep->arrows[a], cols[ar.src]);
                auto xs = fp_solve(F, cols[ar.tgt], rhs);
                internal_check(xs.has_value(), "Fitting part is not arrow-stable");
                sub.arrows.push_back(std::move(*xs));
            }
            sub.validate();
            RepPtr subp = share(std::move(sub));
            ModuleMorphism inc = morphism_zero(subp, terms[k].rep);
            inc.f = cols;
            inc.validate();
            parts.push_back(subp);
            incls.push_back(std::move(inc));
        }
        // Restrict the differential, then conjugate onto projective covers.
        std::vector<ProjCover> covers;
        for (const auto& p : parts) {
            ProjCover cv = projective_cover(p);
            internal_check(cv.p.rep->total_dim() == p->total_dim(),
                           "Fitting part of a complex degree is not projective");
            covers.push_back(std::move(cv));
        }
        ProjComplex px;
        px.alg = alg;
        px.lo = m->lo;
        for (const auto& cv : covers) px.slots.push_back(cv.p.copies);
        for (size_t k = 0; k + 1 < parts.size(); ++k) {
            ModuleMorphism dmat = lambda_to_morphism(m->diff_at(m->lo + static_cast<int>(k)),
                                                     terms[k], terms[k + 1]);
            // Solve incl_{k+1} restricted = d incl_k.
            ModuleMorphism dink = morphism_compose(dmat, incls[k]);
            ModuleMorphism rest = morphism_zero(parts[k], parts[k + 1]);
            for (size_t v = 0; v < rest.f.size(); ++v) {
                auto xs = fp_solve(F, incls[k + 1].f[v], dink.f[v]);
                internal_check(xs.has_value(), "differential does not preserve the Fitting part");
                rest.f[v] = std::move(*xs);
            }
            rest.validate();
            ModuleMorphism conj = morphism_compose(morphism_inverse(covers[k + 1].map),
                                                   morphism_compose(rest, covers[k].map));
            px.diffs.push_back(lambda_from_morphism(covers[k].p, covers[k + 1].p, conj));
        }
        ComplexPtr part = trim_complex(px);
        part->validate();
        return part;
    };
    ComplexPtr ker = build_part(true);
    ComplexPtr im = build_part(false);
    internal_check(complex_total_dim(*ker) + complex_total_dim(*im) == complex_total_dim(*m),
                   "Fitting decomposition dimension mismatch");
    internal_check(!ker->is_zero_object() && !im->is_zero_object(),
                   "Fitting decomposition produced a trivial part");
    decompose_complex_into(ker, budget, out);
    decompose_complex_into(im, budget, out);
}

std::vector<std::vector<int>> sorted_profile(const ProjComplex& x) {
    std::vector<std::vector<int>> prof;
    for (const auto& s : x.slots) {
        auto t = s;
        std::sort(t.begin(), t.end());
        prof.push_back(std::move(t));
    }
    return prof;
}

} // namespace

std::vector<ComplexPtr> decompose_complex(const ComplexPtr& x, const DecomposeBudget& budget) {
    ComplexPtr m = complex_is_minimal(*x) ? trim_complex(*x) : minimize_complex(x).min;
    std::vector<ComplexPtr> out;
    decompose_complex_into(m, budget, out);
    std::stable_sort(out.begin(), out.end(), [](const ComplexPtr& a, const ComplexPtr& b) {
        int da = complex_total_dim(*a), db = complex_total_dim(*b);
        if (da != db) return da < db;
        if (a->lo != b->lo) return a->lo < b->lo;
        return sorted_profile(*a) < sorted_profile(*b);
    });
    return out;
}

bool complexes_isomorphic(const ComplexPtr& x, const ComplexPtr& y) {
    ComplexPtr a = complex_is_minimal(*x) ? trim_complex(*x) : minimize_complex(x).min;
    ComplexPtr b = complex_is_minimal(*y) ? trim_complex(*y) : minimize_complex(y).min;
    if (a->is_zero_object() || b->is_zero_object())
        return a->is_zero_object() && b->is_zero_object();
    if (a->lo != b->lo || a->slots.size() != b->slots.size()) return false;
    if (sorted_profile(*a) != sorted_profile(*b)) return false;
    ComplexHomSpace H = hom_complexes(a, b);
    auto is_iso = [&](const std::vector<uint32_t>& coeffs) {
        ChainMap f = chain_zero(a, b);
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i]) f = chain_add(f, chain_scale(coeffs[i], H.chain_basis[i]));
        return chain_map_is_iso(f);
    };
    auto hit = search_combination(a->alg->field, static_cast<int>(H.chain_basis.size()), 64,
                                  1 << 16, 0x51170002ULL, is_iso);
    return !hit.empty();
}

} // namespace silt
