#include "silt/algebra.hpp"

#include <algorithm>
#include <set>

namespace silt {

int Quiver::vertex_index(const std::string& name) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == name) return static_cast<int>(i);
    fail(ErrorCode::UnknownVertex, "unknown vertex '" + name + "'");
}

int Quiver::arrow_index(const std::string& id) const {
    for (size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i].id == id) return static_cast<int>(i);
    fail(ErrorCode::ValidationError, "unknown arrow '" + id + "'");
}

void Quiver::validate() const {
    std::set<std::string> seen;
    for (const auto& v : vertices) {
        if (v.empty()) fail(ErrorCode::ValidationError, "empty vertex name");
        if (!seen.insert(v).second)
            fail(ErrorCode::ValidationError, "duplicate vertex name '" + v + "'");
    }
    std::set<std::string> aseen;
    for (const auto& a : arrows) {
        if (a.id.empty()) fail(ErrorCode::ValidationError, "empty arrow id");
        if (!aseen.insert(a.id).second)
            fail(ErrorCode::ValidationError, "duplicate arrow id '" + a.id + "'");
        if (seen.count(a.id))
            fail(ErrorCode::ValidationError, "arrow id '" + a.id + "' collides with a vertex name");
        if (a.src < 0 || a.src >= vertex_count() || a.tgt < 0 || a.tgt >= vertex_count())
            fail(ErrorCode::UnknownVertex, "arrow '" + a.id + "' references unknown vertex");
    }
}

Quiver Quiver::linear_an(int n) {
    Quiver q;
    for (int i = 1; i <= n; ++i) q.vertices.push_back(std::to_string(i));
    for (int i = 1; i < n; ++i) q.arrows.push_back({"a" + std::to_string(i), i - 1, i});
    return q;
}

namespace {

// True when `path` contains some relation as a contiguous arrow subsequence.
bool hits_relation(const std::vector<int>& path, const std::vector<std::vector<int>>& relations) {
    for (const auto& r : relations) {
        if (r.size() > path.size()) continue;
        for (size_t off = 0; off + r.size() <= path.size(); ++off) {
            bool eq = true;
            for (size_t k = 0; k < r.size(); ++k)
                if (path[off + k] != r[k]) { eq = false; break; }
            if (eq) return true;
        }
    }
    return false;
}

// Lexicographic key for ordering nontrivial paths of equal length.
std::vector<std::string> arrow_id_key(const Quiver& q, const Path& p) {
    std::vector<std::string> key;
    key.reserve(p.arrows.size());
    for (int a : p.arrows) key.push_back(q.arrows[a].id);
    return key;
}

} // namespace

std::string BoundQuiverAlgebra::path_name(int p) const {
    const Path& pa = paths[p];
    if (pa.arrows.empty()) return "e(" + quiver.vertices[pa.source] + ")";
    std::string s;
    for (size_t i = 0; i < pa.arrows.size(); ++i) {
        if (i) s += "*";
        s += quiver.arrows[pa.arrows[i]].id;
    }
    return s;
}

AlgebraPtr build_algebra(const Quiver& q, uint32_t p,
                         const std::vector<std::vector<int>>& relations) {
    q.validate();
    Fp field(p); // validates the characteristic
    for (const auto& r : relations) {
        if (r.size() < 2)
            fail(ErrorCode::BadRelation, "relation shorter than two arrows");
        for (size_t i = 0; i < r.size(); ++i) {
            if (r[i] < 0 || r[i] >= q.arrow_count())
                fail(ErrorCode::BadRelation, "relation references unknown arrow");
            if (i + 1 < r.size() && q.arrows[r[i]].tgt != q.arrows[r[i + 1]].src)
                fail(ErrorCode::BadRelation, "relation path is not composable");
        }
    }

    // Growth bound: a relation-free path is a walk through (vertex, matcher
    // state) pairs, where the matcher state tracks partial relation matches
    // (at most sum of relation lengths + 1 states). Any relation-free path
    // longer than the number of pairs repeats one, and the loop between the
    // repeats pumps to arbitrarily long relation-free paths.
    size_t states = 1;
    for (const auto& r : relations) states += r.size();
    size_t slack = q.vertices.size() * states + 1;

    std::shared_ptr<BoundQuiverAlgebra> alg(new BoundQuiverAlgebra(q, p));
    alg->relations = relations;

    const int nv = q.vertex_count();
    std::vector<Path> current;
    for (int v = 0; v < nv; ++v) current.push_back(Path{v, {}});
    std::vector<Path> all = current;
    while (!current.empty()) {
        if (!current.front().arrows.empty() && current.front().arrows.size() >= slack)
            fail(ErrorCode::InfiniteDimensional,
                 "relation-free paths of unbounded length exist (first witness length " +
                     std::to_string(current.front().arrows.size()) + ")");
        std::vector<Path> next;
        for (const auto& pa : current) {
            int end = pa.arrows.empty() ? pa.source : q.arrows[pa.arrows.back()].tgt;
            for (int a = 0; a < q.arrow_count(); ++a) {
                if (q.arrows[a].src != end) continue;
                Path ext = pa;
                ext.arrows.push_back(a);
                if (!hits_relation(ext.arrows, relations)) next.push_back(ext);
            }
        }
        for (const auto& pa : next) all.push_back(pa);
        current = std::move(next);
    }

    std::stable_sort(all.begin(), all.end(), [&](const Path& x, const Path& y) {
        if (x.length() != y.length()) return x.length() < y.length();
        if (x.length() == 0) return x.source < y.source;
        return arrow_id_key(q, x) < arrow_id_key(q, y);
    });
    alg->paths = std::move(all);

    const int n = alg->dim();
    alg->path_target.resize(n);
    alg->paths_from_to.assign(static_cast<size_t>(nv) * nv, {});
    alg->trivial_path.assign(nv, -1);
    for (int i = 0; i < n; ++i) {
        const Path& pa = alg->paths[i];
        int tgt = pa.arrows.empty() ? pa.source : q.arrows[pa.arrows.back()].tgt;
        alg->path_target[i] = tgt;
        alg->paths_from_to[static_cast<size_t>(pa.source) * nv + tgt].push_back(i);
        if (pa.arrows.empty()) alg->trivial_path[pa.source] = i;
    }

    // Composition table keyed on concatenated arrow sequences.
    std::map<std::pair<int, std::vector<int>>, int> lookup;
    for (int i = 0; i < n; ++i)
        lookup[{alg->paths[i].source, alg->paths[i].arrows}] = i;
    alg->mult.assign(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (alg->path_target[i] != alg->paths[j].source) continue;
            std::vector<int> cat = alg->paths[i].arrows;
            cat.insert(cat.end(), alg->paths[j].arrows.begin(), alg->paths[j].arrows.end());
            auto it = lookup.find({alg->paths[i].source, cat});
            alg->mult[i][j] = it == lookup.end() ? -1 : it->second;
        }
    return alg;
}

AlgebraPtr build_algebra_named(const Quiver& q, uint32_t p,
                               const std::vector<std::vector<std::string>>& relations) {
    std::vector<std::vector<int>> rel;
    for (const auto& r : relations) {
        std::vector<int> seq;
        for (const auto& id : r) seq.push_back(q.arrow_index(id));
        rel.push_back(std::move(seq));
    }
    return build_algebra(q, p, rel);
}

} // namespace silt
