#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "silt/fp.hpp"

namespace silt {

struct Arrow {
    std::string id;
    int src = 0;
    int tgt = 0;
};

// Finite quiver with named vertices and arrows. Vertex and arrow order is the
// declaration order; everything downstream is deterministic in that order.
struct Quiver {
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int arrow_count() const { return static_cast<int>(arrows.size()); }
    int vertex_index(const std::string& name) const; // throws UnknownVertex
    int arrow_index(const std::string& id) const;    // throws ValidationError
    void validate() const;

    // Linear A_n quiver 1 -> 2 -> ... -> n with vertices "1".."n" and arrows
    // "a1".."a(n-1)". Used heavily by tests and the demo instances.
    static Quiver linear_an(int n);
};

// A path in the quiver: a source vertex plus a (possibly empty) sequence of
// composable arrows, read left to right.
struct Path {
    int source = 0;
    std::vector<int> arrows;

    int length() const { return static_cast<int>(arrows.size()); }
};

// Basis-indexed bound quiver algebra F_p Q / I with monomial admissible
// relations. The basis consists of all relation-free paths, ordered by
// (length, arrow id sequence lex); trivial paths come first in vertex order.
class BoundQuiverAlgebra {
public:
    Quiver quiver;
    Fp field;
    std::vector<std::vector<int>> relations; // forbidden paths, as arrow index sequences

    std::vector<Path> paths;                  // the path basis
    std::vector<int> path_target;             // target vertex per basis path
    std::vector<std::vector<int>> paths_from_to; // [src * nv + tgt] -> basis indices
    std::vector<int> trivial_path;            // basis index of e_v per vertex
    std::vector<std::vector<int>> mult;       // mult[i][j] = basis index of p_i then p_j, or -1

    int dim() const { return static_cast<int>(paths.size()); }
    int vertex_count() const { return quiver.vertex_count(); }
    const std::vector<int>& paths_between(int src, int tgt) const {
        return paths_from_to[static_cast<size_t>(src) * quiver.vertex_count() + tgt];
    }
    // Composition p then q; -1 if not composable or hits a relation.
    int compose(int p, int q) const { return mult[p][q]; }

    std::string path_name(int p) const;

private:
    friend std::shared_ptr<const BoundQuiverAlgebra> build_algebra(
        const Quiver&, uint32_t, const std::vector<std::vector<int>>&);
    BoundQuiverAlgebra(const Quiver& q, uint32_t p) : quiver(q), field(p) {}
};

using AlgebraPtr = std::shared_ptr<const BoundQuiverAlgebra>;

// Builds the algebra, enumerating the full path basis. Throws BadRelation for
// non-composable/short relations and InfiniteDimensional when relation-free
// paths of unbounded length exist.
AlgebraPtr build_algebra(const Quiver& q, uint32_t p,
                         const std::vector<std::vector<int>>& relations);

// Convenience: relations given as arrow id sequences like {"a","b"}.
AlgebraPtr build_algebra_named(const Quiver& q, uint32_t p,
                               const std::vector<std::vector<std::string>>& relations);

} // namespace silt
