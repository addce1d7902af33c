#ifndef GTRACE_GRAPH_HPP
#define GTRACE_GRAPH_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gtrace/errors.hpp"

namespace gtrace {

using VertexId = std::string;
using EdgeId = std::string;

struct EdgeSpec {
    EdgeId id;
    VertexId src;  // s(e)
    VertexId rng;  // r(e)
};

/// Finite directed multigraph. Parallel edges and self-loops are allowed.
///
/// Edge orientation follows the src/rng convention: an edge e points from
/// its source s(e) to its range r(e). A path e1 e2 ... en is composable
/// when s(e_i) = r(e_{i+1}), so paths extend by appending edges whose
/// range equals the current source.
///
/// Vertices and edges are stored sorted by id; every enumeration in the
/// library iterates in this order, which makes all outputs deterministic.
class Graph {
public:
    Graph() = default;

    static Graph make(std::vector<VertexId> vertices, std::vector<EdgeSpec> edges) {
        Graph g;
        std::sort(vertices.begin(), vertices.end());
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            if (vertices[i] == vertices[i + 1])
                throw ValidationError("duplicate vertex id '" + vertices[i] + "'");
        g.vertex_ids_ = std::move(vertices);
        for (std::size_t i = 0; i < g.vertex_ids_.size(); ++i)
            g.vertex_index_[g.vertex_ids_[i]] = static_cast<int>(i);

        std::sort(edges.begin(), edges.end(),
                  [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            if (edges[i].id == edges[i + 1].id)
                throw ValidationError("duplicate edge id '" + edges[i].id + "'");
        g.edge_ids_.reserve(edges.size());
        for (const EdgeSpec& e : edges) {
            auto s = g.vertex_index_.find(e.src);
            auto r = g.vertex_index_.find(e.rng);
            if (s == g.vertex_index_.end())
                throw ValidationError("edge '" + e.id + "' references unknown vertex '" + e.src + "'");
            if (r == g.vertex_index_.end())
                throw ValidationError("edge '" + e.id + "' references unknown vertex '" + e.rng + "'");
            g.edge_index_[e.id] = static_cast<int>(g.edge_ids_.size());
            g.edge_ids_.push_back(e.id);
            g.edge_src_.push_back(s->second);
            g.edge_rng_.push_back(r->second);
        }

        g.out_edges_.assign(g.vertex_count(), {});
        g.in_edges_.assign(g.vertex_count(), {});
        for (int e = 0; e < g.edge_count(); ++e) {
            g.out_edges_[g.edge_src_[e]].push_back(e);
            g.in_edges_[g.edge_rng_[e]].push_back(e);
        }
        return g;
    }

    int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
    int edge_count() const { return static_cast<int>(edge_ids_.size()); }

    const std::vector<VertexId>& vertex_ids() const { return vertex_ids_; }
    const std::vector<EdgeId>& edge_ids() const { return edge_ids_; }

    const VertexId& vertex_id(int v) const { return vertex_ids_[v]; }
    const EdgeId& edge_id(int e) const { return edge_ids_[e]; }

    int vertex(const VertexId& id) const {
        auto it = vertex_index_.find(id);
        if (it == vertex_index_.end()) throw ValidationError("unknown vertex '" + id + "'");
        return it->second;
    }
    int edge(const EdgeId& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end()) throw ValidationError("unknown edge '" + id + "'");
        return it->second;
    }
    bool has_vertex(const VertexId& id) const { return vertex_index_.count(id) != 0; }

    int src(int e) const { return edge_src_[e]; }
    int rng(int e) const { return edge_rng_[e]; }

    // Edges e with s(e) = v, in edge-id order.
    const std::vector<int>& edges_out_of(int v) const { return out_edges_[v]; }
    // Edges e with r(e) = v, in edge-id order.
    const std::vector<int>& edges_into(int v) const { return in_edges_[v]; }

    bool operator==(const Graph& o) const {
        return vertex_ids_ == o.vertex_ids_ && edge_ids_ == o.edge_ids_ &&
               edge_src_ == o.edge_src_ && edge_rng_ == o.edge_rng_;
    }

private:
    std::vector<VertexId> vertex_ids_;
    std::vector<EdgeId> edge_ids_;
    std::vector<int> edge_src_;
    std::vector<int> edge_rng_;
    std::vector<std::vector<int>> out_edges_;
    std::vector<std::vector<int>> in_edges_;
    std::map<VertexId, int> vertex_index_;
    std::map<EdgeId, int> edge_index_;
};

/// A composable edge sequence e1 ... en with s(e_i) = r(e_{i+1}),
/// stored as edge indices of a fixed graph. A length-zero path is a
/// vertex, kept in `base`.
struct Path {
    int base = -1;               // used when edges is empty
    std::vector<int> edges;      // path order: edges[0] is the range end

    static Path at_vertex(int v) {
        Path p;
        p.base = v;
        return p;
    }

    static Path single(const Graph& g, int e) {
        Path p;
        p.base = g.rng(e);
        p.edges = {e};
        return p;
    }

    int length() const { return static_cast<int>(edges.size()); }
    bool is_vertex() const { return edges.empty(); }

    int range(const Graph& g) const { return edges.empty() ? base : g.rng(edges.front()); }
    int source(const Graph& g) const { return edges.empty() ? base : g.src(edges.back()); }

    // Appends one edge at the source end; requires r(e) = source(path).
    Path extended(const Graph& g, int e) const {
        if (g.rng(e) != source(g))
            throw CompositionError("cannot extend: range of '" + g.edge_id(e) +
                                   "' is not the path source");
        Path p = *this;
        if (p.edges.empty()) p.base = g.rng(e);
        p.edges.push_back(e);
        return p;
    }

    bool is_loop(const Graph& g) const { return !edges.empty() && source(g) == range(g); }

    std::vector<EdgeId> edge_id_list(const Graph& g) const {
        std::vector<EdgeId> ids;
        ids.reserve(edges.size());
        for (int e : edges) ids.push_back(g.edge_id(e));
        return ids;
    }

    bool operator==(const Path& o) const {
        if (edges.empty() || o.edges.empty()) return edges == o.edges && base == o.base;
        return edges == o.edges;
    }
    bool operator!=(const Path& o) const { return !(*this == o); }
    bool operator<(const Path& o) const {
        if (edges.size() != o.edges.size()) return edges.size() < o.edges.size();
        if (edges.empty()) return base < o.base;
        return edges < o.edges;
    }
};

/// Builds a path from explicit edges, validating composability.
inline Path make_path(const Graph& g, const std::vector<int>& edges) {
    if (edges.empty()) throw ValidationError("make_path needs at least one edge; use Path::at_vertex");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (g.src(edges[i]) != g.rng(edges[i + 1]))
            throw CompositionError("edges '" + g.edge_id(edges[i]) + "' and '" +
                                   g.edge_id(edges[i + 1]) + "' do not compose");
    Path p;
    p.base = g.rng(edges.front());
    p.edges = edges;
    return p;
}

inline Path path_from_edge_ids(const Graph& g, const std::vector<EdgeId>& ids) {
    std::vector<int> edges;
    edges.reserve(ids.size());
    for (const EdgeId& id : ids) edges.push_back(g.edge(id));
    return make_path(g, edges);
}

/// Concatenation pq; requires source(p) = range(q).
inline Path compose(const Graph& g, const Path& p, const Path& q) {
    if (p.source(g) != q.range(g))
        throw CompositionError("source(p) = '" + g.vertex_id(p.source(g)) +
                               "' differs from range(q) = '" + g.vertex_id(q.range(g)) + "'");
    if (p.is_vertex()) return q;
    if (q.is_vertex()) return p;
    Path r = p;
    r.edges.insert(r.edges.end(), q.edges.begin(), q.edges.end());
    return r;
}

/// Smallest period of the edge sequence; the loop is primitive iff this
/// equals its length.
inline int primitive_period(const std::vector<int>& edges) {
    const int n = static_cast<int>(edges.size());
    for (int p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (int i = 0; i + p < n && periodic; ++i)
            if (edges[i] != edges[i + p]) periodic = false;
        if (periodic) return p;
    }
    return n;
}

/// Rotation-equivalence class of loops. Two loops are in the same class
/// iff one is a rotation of the other. The stored representative is
/// canonical: among all rotations, its base vertex id is lexicographically
/// least, with the edge-id sequence as tie break.
class LoopClass {
public:
    LoopClass(const Graph& g, const Path& loop) {
        if (!loop.is_loop(g)) throw NotALoop("not a loop path");
        primitive_ = primitive_period(loop.edges) == loop.length();
        representative_ = canonical_rotation(g, loop);
    }

    const Path& representative() const { return representative_; }
    bool primitive() const { return primitive_; }
    int length() const { return representative_.length(); }
    int base(const Graph& g) const { return representative_.range(g); }

    bool operator==(const LoopClass& o) const { return representative_ == o.representative_; }
    bool operator!=(const LoopClass& o) const { return !(*this == o); }
    bool operator<(const LoopClass& o) const { return representative_ < o.representative_; }

    static Path rotate(const Graph& g, const Path& loop, int k) {
        const int n = loop.length();
        std::vector<int> edges(loop.edges.begin(), loop.edges.end());
        std::rotate(edges.begin(), edges.begin() + (k % n + n) % n, edges.end());
        return make_path(g, edges);
    }

private:
    static Path canonical_rotation(const Graph& g, const Path& loop) {
        Path best = loop;
        auto best_key = rotation_key(g, best);
        for (int k = 1; k < loop.length(); ++k) {
            Path cand = rotate(g, loop, k);
            auto key = rotation_key(g, cand);
            if (key < best_key) {
                best = cand;
                best_key = key;
            }
        }
        return best;
    }

    static std::pair<VertexId, std::vector<EdgeId>> rotation_key(const Graph& g, const Path& p) {
        return {g.vertex_id(p.range(g)), p.edge_id_list(g)};
    }

    Path representative_;
    bool primitive_ = false;
};

/// Vertices receiving at least one edge: v with 0 < |r^{-1}(v)|.
inline std::set<int> regular_vertices(const Graph& g) {
    std::set<int> reg;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (!g.edges_into(v).empty()) reg.insert(v);
    return reg;
}

inline std::set<int> singular_vertices(const Graph& g) {
    std::set<int> sng;
    const auto reg = regular_vertices(g);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (reg.count(v) == 0) sng.insert(v);
    return sng;
}

inline bool is_regular(const Graph& g, int v) { return !g.edges_into(v).empty(); }

}  // namespace gtrace

#endif  // GTRACE_GRAPH_HPP
