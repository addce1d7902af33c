#ifndef GTRACE_STRUCTURE_HPP
#define GTRACE_STRUCTURE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gtrace/graph.hpp"
#include "gtrace/rational.hpp"

namespace gtrace {

/// Exact nonnegative count, or infinity.
struct CountOrInfinite {
    bool finite = true;
    Natural count = 0;  // meaningful only when finite

    static CountOrInfinite infinite() { return {false, 0}; }
    static CountOrInfinite of(Natural n) { return {true, std::move(n)}; }

    bool operator==(const CountOrInfinite& o) const {
        return finite == o.finite && (!finite || count == o.count);
    }
    bool operator!=(const CountOrInfinite& o) const { return !(*this == o); }

    std::string str() const { return finite ? count.get_str() : "inf"; }
};

using VertexCounts = std::map<VertexId, CountOrInfinite>;

inline bool all_finite(const VertexCounts& counts) {
    for (const auto& [v, c] : counts)
        if (!c.finite) return false;
    return true;
}

inline CountOrInfinite total_count(const VertexCounts& counts) {
    Natural total = 0;
    for (const auto& [v, c] : counts) {
        if (!c.finite) return CountOrInfinite::infinite();
        total += c.count;
    }
    return CountOrInfinite::of(total);
}

/// Strongly connected components in the src->rng direction, as a partition
/// of the vertex indices. Components are sorted by least vertex index.
inline std::vector<std::vector<int>> scc(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0, next_comp = 0;

    // Iterative Tarjan; frame = (vertex, position in its out-edge list).
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<std::pair<int, std::size_t>> frames{{root, 0}};
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            bool descended = false;
            while (pos < g.edges_out_of(v).size()) {
                const int w = g.rng(g.edges_out_of(v)[pos]);
                ++pos;
                if (index[w] == -1) {
                    frames.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if (w == v) break;
                }
                ++next_comp;
            }
            const int finished = v;
            frames.pop_back();
            if (!frames.empty()) {
                const int parent = frames.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
        }
    }

    std::vector<std::vector<int>> parts(next_comp);
    for (int v = 0; v < n; ++v) parts[comp[v]].push_back(v);
    for (auto& p : parts) std::sort(p.begin(), p.end());
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return parts;
}

/// One loop class per strongly connected component that is a simple cycle:
/// as many internal edges as vertices, each vertex with exactly one internal
/// outgoing and one internal incoming edge. Equivalently, the loops based at
/// the cycle are exactly the powers of one primitive loop, which is the
/// isolated-loop condition for a finite discrete graph.
inline std::vector<LoopClass> enumerate_isolated_loop_classes(const Graph& g) {
    std::vector<LoopClass> classes;
    for (const auto& component : scc(g)) {
        std::set<int> members(component.begin(), component.end());
        std::vector<int> internal_out(g.vertex_count(), -1);
        int internal_edges = 0;
        bool simple = true;
        for (int v : component) {
            int out_here = 0, in_here = 0;
            for (int e : g.edges_out_of(v))
                if (members.count(g.rng(e))) {
                    ++out_here;
                    internal_out[v] = e;
                }
            for (int e : g.edges_into(v))
                if (members.count(g.src(e))) ++in_here;
            if (out_here != 1 || in_here != 1) simple = false;
            internal_edges += out_here;
        }
        if (!simple || internal_edges != static_cast<int>(component.size())) continue;

        // Walk the cycle once from its least vertex; the path traverses the
        // walk edges in reverse order.
        const int start = component.front();
        std::vector<int> walk;
        int v = start;
        do {
            const int e = internal_out[v];
            walk.push_back(e);
            v = g.rng(e);
        } while (v != start);
        std::vector<int> edges(walk.rbegin(), walk.rend());
        classes.emplace_back(g, make_path(g, edges));
    }
    std::sort(classes.begin(), classes.end());
    return classes;
}

namespace detail {

// Walk graph on an abstract state space: states 0..n-1, step(state) lists
// (edge, next state). Counts walks from `start`, per underlying vertex.
template <typename StepFn, typename VertexOf>
VertexCounts count_walks(const Graph& g, int state_count, int start, StepFn&& step,
                         VertexOf&& vertex_of) {
    std::vector<std::vector<int>> succ(state_count), pred(state_count);
    for (int s = 0; s < state_count; ++s)
        for (int t : step(s)) {
            succ[s].push_back(t);
            pred[t].push_back(s);
        }

    auto closure = [state_count](const std::vector<std::vector<int>>& adj, int from) {
        std::vector<bool> seen(state_count, false);
        std::vector<int> todo{from};
        seen[from] = true;
        while (!todo.empty()) {
            const int s = todo.back();
            todo.pop_back();
            for (int t : adj[s])
                if (!seen[t]) {
                    seen[t] = true;
                    todo.push_back(t);
                }
        }
        return seen;
    };
    const std::vector<bool> reachable = closure(succ, start);

    VertexCounts result;
    for (int w = 0; w < g.vertex_count(); ++w) result[g.vertex_id(w)] = CountOrInfinite::of(0);

    for (int w = 0; w < g.vertex_count(); ++w) {
        // States relevant for walks start -> (w, *): reachable from start and
        // co-reachable to some state over w.
        std::vector<bool> to_w(state_count, false);
        {
            std::vector<int> todo;
            for (int s = 0; s < state_count; ++s)
                if (vertex_of(s) == w) {
                    to_w[s] = true;
                    todo.push_back(s);
                }
            while (!todo.empty()) {
                const int s = todo.back();
                todo.pop_back();
                for (int t : pred[s])
                    if (!to_w[t]) {
                        to_w[t] = true;
                        todo.push_back(t);
                    }
            }
        }
        std::vector<bool> live(state_count, false);
        for (int s = 0; s < state_count; ++s) live[s] = reachable[s] && to_w[s];
        if (!live[start]) continue;  // count stays 0

        // Any cycle through a live state stays live, so a cycle inside the
        // live region certifies infinitely many walks.
        std::vector<int> color(state_count, 0);
        bool cyclic = false;
        std::vector<int> order;
        for (int s = 0; s < state_count && !cyclic; ++s) {
            if (!live[s] || color[s] != 0) continue;
            std::vector<std::pair<int, std::size_t>> frames{{s, 0}};
            color[s] = 1;
            while (!frames.empty() && !cyclic) {
                auto& [u, pos] = frames.back();
                bool descended = false;
                while (pos < succ[u].size()) {
                    const int t = succ[u][pos];
                    ++pos;
                    if (!live[t]) continue;
                    if (color[t] == 1) {
                        cyclic = true;
                        break;
                    }
                    if (color[t] == 0) {
                        color[t] = 1;
                        frames.emplace_back(t, 0);
                        descended = true;
                        break;
                    }
                }
                if (cyclic || descended) continue;
                color[u] = 2;
                order.push_back(u);
                frames.pop_back();
            }
        }
        if (cyclic) {
            result[g.vertex_id(w)] = CountOrInfinite::infinite();
            continue;
        }

        // order is a reverse topological order of the live DAG; walks(s) =
        // number of walks from start to s.
        std::map<int, Natural> walks;
        walks[start] = 1;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int s = *it;
            if (walks.find(s) == walks.end()) continue;
            for (int t : succ[s])
                if (live[t]) walks[t] += walks[s];
        }
        Natural total = 0;
        for (const auto& [s, c] : walks)
            if (vertex_of(s) == w) total += c;
        result[g.vertex_id(w)] = CountOrInfinite::of(total);
    }
    return result;
}

}  // namespace detail

/// Number of paths with source v and range w, for every w. The count is
/// infinite exactly when some walk from v to w passes through a cycle.
inline VertexCounts count_paths_into_vertex(const Graph& g, int v) {
    return detail::count_walks(
        g, g.vertex_count(), v,
        [&g](int s) {
            std::vector<int> next;
            for (int e : g.edges_out_of(s)) next.push_back(g.rng(e));
            return next;
        },
        [](int s) { return s; });
}

inline VertexCounts count_paths_into_vertex(const Graph& g, const VertexId& v) {
    return count_paths_into_vertex(g, g.vertex(v));
}

/// Number of reduced paths into the given loop, per range vertex: paths
/// with source r(loop) that do not end with a full copy of the loop.
///
/// Decision procedure: walk the graph from the source end while a
/// (|loop|+2)-state matcher tracks progress through the reversed loop
/// edge sequence. The matched-complete state is dead (the path and all of
/// its extensions end with the loop); a mismatch at any point is
/// permanently safe. Infinity is certified by a reachable cycle among the
/// live product states, never by a growth timeout.
inline VertexCounts count_reduced_paths(const Graph& g, const Path& loop) {
    if (loop.edges.empty()) throw NotALoop("count_reduced_paths needs a loop");
    for (int e : loop.edges)
        if (e < 0 || e >= g.edge_count()) throw NotALoop("loop edge outside graph");
    for (std::size_t i = 0; i + 1 < loop.edges.size(); ++i)
        if (g.src(loop.edges[i]) != g.rng(loop.edges[i + 1]))
            throw NotALoop("loop edges do not compose in this graph");
    if (!loop.is_loop(g)) throw NotALoop("count_reduced_paths needs a loop");
    const int k = loop.length();
    const int n = g.vertex_count();
    const int safe = k;  // matcher states 0..k-1 = progress, k = safe
    const int state_count = n * (k + 1);
    const int base = loop.range(g);
    auto state = [&](int v, int m) { return v * (k + 1) + m; };

    auto step = [&](int s) {
        const int v = s / (k + 1), m = s % (k + 1);
        std::vector<int> next;
        for (int e : g.edges_out_of(v)) {
            if (m == safe) {
                next.push_back(state(g.rng(e), safe));
            } else if (e == loop.edges[k - 1 - m]) {
                if (m + 1 < k) next.push_back(state(g.rng(e), m + 1));
                // m + 1 == k: complete match, dead
            } else {
                next.push_back(state(g.rng(e), safe));
            }
        }
        return next;
    };
    return detail::count_walks(g, state_count, state(base, 0), step,
                               [k](int s) { return s / (k + 1); });
}

inline VertexCounts count_reduced_paths(const Graph& g, const LoopClass& loop) {
    return count_reduced_paths(g, loop.representative());
}

inline bool is_isolated(const Graph& g, const LoopClass& loop) {
    const auto classes = enumerate_isolated_loop_classes(g);
    return std::find(classes.begin(), classes.end(), loop) != classes.end();
}

/// A loop class is summable iff it is isolated and every reduced path
/// count is finite.
inline bool is_summable(const Graph& g, const LoopClass& loop) {
    if (!is_isolated(g, loop)) return false;
    return all_finite(count_reduced_paths(g, loop));
}

inline std::vector<LoopClass> enumerate_summable_loop_classes(const Graph& g) {
    std::vector<LoopClass> summable;
    for (const LoopClass& c : enumerate_isolated_loop_classes(g))
        if (all_finite(count_reduced_paths(g, c))) summable.push_back(c);
    return summable;
}

/// A finite discrete graph is free iff it has no isolated loop.
inline bool is_free(const Graph& g) {
    return enumerate_isolated_loop_classes(g).empty();
}

namespace detail {

// Vertices reachable from v along edges in the src->rng direction,
// including v itself.
inline std::vector<bool> forward_closure(const Graph& g, int v) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::vector<int> todo{v};
    seen[v] = true;
    while (!todo.empty()) {
        const int x = todo.back();
        todo.pop_back();
        for (int e : g.edges_out_of(x))
            if (!seen[g.rng(e)]) {
                seen[g.rng(e)] = true;
                todo.push_back(g.rng(e));
            }
    }
    return seen;
}

// Simple loops based at v (distinct vertices along the cycle), as walk
// edge sequences in src->rng order. Aborts early once `visit` returns true.
template <typename Visit>
bool visit_simple_loops_at(const Graph& g, int v, Visit&& visit) {
    std::vector<int> walk;
    std::vector<bool> used(g.vertex_count(), false);
    used[v] = true;

    // Depth-first over walk extensions with distinct intermediate vertices.
    struct Frame {
        int vertex;
        std::size_t pos;
    };
    std::vector<Frame> frames{{v, 0}};
    while (!frames.empty()) {
        Frame& f = frames.back();
        if (f.pos < g.edges_out_of(f.vertex).size()) {
            const int e = g.edges_out_of(f.vertex)[f.pos++];
            const int w = g.rng(e);
            if (w == v) {
                walk.push_back(e);
                if (visit(walk)) return true;
                walk.pop_back();
            } else if (!used[w]) {
                used[w] = true;
                walk.push_back(e);
                frames.push_back({w, 0});
            }
        } else {
            const int leaving = f.vertex;
            frames.pop_back();
            if (!frames.empty()) {  // non-root frame: un-mark and drop its entry edge
                used[leaving] = false;
                walk.pop_back();
            }
        }
    }
    return false;
}

}  // namespace detail

/// Independent freeness test, scanning vertices for a simple loop whose
/// edges are the unique edges into their ranges from anywhere reachable.
/// In the discrete topology the isolation condition on the vertex itself
/// holds automatically, so only the loop-edge uniqueness is checked.
/// Must agree with is_free on every graph.
inline bool is_free_direct(const Graph& g) {
    for (int v = 0; v < g.vertex_count(); ++v) {
        const std::vector<bool> reach = detail::forward_closure(g, v);
        const bool found = detail::visit_simple_loops_at(g, v, [&](const std::vector<int>& walk) {
            for (int le : walk) {
                for (int e : g.edges_into(g.rng(le))) {
                    if (e == le) continue;
                    if (reach[g.src(e)]) return false;  // competing edge: next loop
                }
            }
            return true;  // qualifying loop found
        });
        if (found) return false;
    }
    return true;
}

/// Freeness and gauge-invariance verdicts for the graph algebra.
struct Verdict {
    bool free = true;
    bool states_gauge_invariant = true;
    bool weights_gauge_invariant = true;
    std::vector<LoopClass> witnesses;  // summable loop classes
};

/// Tracial weights are all gauge-invariant iff no summable loop exists;
/// tracial states iff no summable loop with finite total reduced-path
/// count exists. On a finite graph the two conditions coincide; both are
/// computed independently and asserted equal.
inline Verdict gauge_invariance_verdict(const Graph& g) {
    Verdict verdict;
    const auto isolated = enumerate_isolated_loop_classes(g);
    verdict.free = isolated.empty();
    bool any_summable = false;
    bool any_summable_finite_total = false;
    for (const LoopClass& c : isolated) {
        const VertexCounts counts = count_reduced_paths(g, c);
        if (!all_finite(counts)) continue;
        any_summable = true;
        verdict.witnesses.push_back(c);
        if (total_count(counts).finite) any_summable_finite_total = true;
    }
    verdict.weights_gauge_invariant = !any_summable;
    verdict.states_gauge_invariant = !any_summable_finite_total;
    if (verdict.states_gauge_invariant != verdict.weights_gauge_invariant)
        throw InternalInconsistency("states and weights verdicts differ on a finite graph");
    if (verdict.free && !verdict.weights_gauge_invariant)
        throw InternalInconsistency("free graph with a non-gauge-invariant weight verdict");
    return verdict;
}

}  // namespace gtrace

#endif  // GTRACE_STRUCTURE_HPP
