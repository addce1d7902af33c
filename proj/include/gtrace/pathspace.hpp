#ifndef GTRACE_PATHSPACE_HPP
#define GTRACE_PATHSPACE_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "gtrace/graph.hpp"
#include "gtrace/measures.hpp"
#include "gtrace/rational.hpp"
#include "gtrace/structure.hpp"

namespace gtrace {

constexpr std::size_t kDefaultMaxPaths = 1000000;

/// Element of the boundary path space: either a finite path whose source
/// is a singular vertex, or an eventually cyclic infinite path p c c c ...
///
/// Eventually cyclic values are kept in canonical form: the cycle is
/// primitive and the prefix is the shortest one realizing the path, which
/// in particular never ends with a copy of the cycle. Canonical forms are
/// unique, so equality is plain field comparison.
class BoundaryPath {
public:
    enum class Kind { Finite, EventuallyCyclic };

    static BoundaryPath finite(const Graph& g, Path p) {
        if (is_regular(g, p.source(g)))
            throw ValidationError("finite boundary path needs a singular source, got '" +
                                  g.vertex_id(p.source(g)) + "'");
        BoundaryPath x;
        x.kind_ = Kind::Finite;
        x.prefix_ = std::move(p);
        return x;
    }

    static BoundaryPath eventually_cyclic(const Graph& g, Path prefix, Path cycle) {
        if (!cycle.is_loop(g)) throw ValidationError("cycle of an eventually cyclic path must be a loop");
        if (prefix.source(g) != cycle.range(g))
            throw ValidationError("prefix source must equal the cycle range");

        // Primitive root first; powers of the root describe the same path.
        const int p = primitive_period(cycle.edges);
        if (p < cycle.length())
            cycle = make_path(g, std::vector<int>(cycle.edges.begin(), cycle.edges.begin() + p));

        // Peel matching edges from the prefix end, rotating the cycle along,
        // until the prefix is shortest.
        while (!prefix.edges.empty() && prefix.edges.back() == cycle.edges.back()) {
            prefix.edges.pop_back();
            std::rotate(cycle.edges.begin(), cycle.edges.end() - 1, cycle.edges.end());
            cycle.base = g.rng(cycle.edges.front());
            if (prefix.edges.empty()) prefix = Path::at_vertex(cycle.range(g));
        }
        if (prefix.edges.empty()) prefix = Path::at_vertex(cycle.range(g));

        BoundaryPath x;
        x.kind_ = Kind::EventuallyCyclic;
        x.prefix_ = std::move(prefix);
        x.cycle_ = std::move(cycle);
        return x;
    }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }

    /// The finite path (Finite kind) or the reduced prefix (EventuallyCyclic).
    const Path& prefix() const { return prefix_; }
    /// The aligned primitive cycle rotation; only for EventuallyCyclic.
    const Path& cycle() const { return cycle_; }

    int range(const Graph& g) const {
        if (kind_ == Kind::Finite || !prefix_.is_vertex()) return prefix_.range(g);
        return cycle_.range(g);
    }

    /// Generator of the periodicity group {k - l : sigma^k x = sigma^l x}:
    /// 0 for finite paths, the primitive cycle length otherwise.
    int period_group() const { return kind_ == Kind::Finite ? 0 : cycle_.length(); }

    /// Backwards shift: removes the first (range-end) edge.
    BoundaryPath shift(const Graph& g) const {
        if (kind_ == Kind::Finite) {
            if (prefix_.is_vertex()) throw ShiftOfVertex("shift of a length-zero path");
            Path rest = prefix_;
            rest.edges.erase(rest.edges.begin());
            if (rest.edges.empty()) rest = Path::at_vertex(prefix_.source(g));
            return finite(g, rest);
        }
        if (!prefix_.is_vertex()) {
            Path rest = prefix_;
            rest.edges.erase(rest.edges.begin());
            if (rest.edges.empty()) rest = Path::at_vertex(prefix_.source(g));
            BoundaryPath x;
            x.kind_ = Kind::EventuallyCyclic;
            x.prefix_ = std::move(rest);
            x.cycle_ = cycle_;
            return x;
        }
        // Purely periodic: shifting rotates the cycle one step.
        Path rotated = cycle_;
        std::rotate(rotated.edges.begin(), rotated.edges.begin() + 1, rotated.edges.end());
        rotated.base = g.rng(rotated.edges.front());
        BoundaryPath x;
        x.kind_ = Kind::EventuallyCyclic;
        x.cycle_ = std::move(rotated);
        x.prefix_ = Path::at_vertex(x.cycle_.range(g));
        return x;
    }

    BoundaryPath shift_by(const Graph& g, int k) const {
        BoundaryPath x = *this;
        for (int i = 0; i < k; ++i) x = x.shift(g);
        return x;
    }

    /// First `count` edges, in path order; a finite path yields at most
    /// its own length.
    std::vector<int> unroll(int count) const {
        std::vector<int> edges;
        edges.reserve(static_cast<std::size_t>(count));
        for (int e : prefix_.edges) {
            if (static_cast<int>(edges.size()) == count) return edges;
            edges.push_back(e);
        }
        if (kind_ == Kind::Finite) return edges;
        while (static_cast<int>(edges.size()) < count)
            for (int e : cycle_.edges) {
                if (static_cast<int>(edges.size()) == count) break;
                edges.push_back(e);
            }
        return edges;
    }

    /// beta is an initial segment of this path (a vertex path matches when
    /// it sits at the range).
    bool starts_with(const Graph& g, const Path& beta) const {
        if (beta.is_vertex()) return beta.base == range(g);
        if (kind_ == Kind::Finite && beta.length() > prefix_.length()) return false;
        return unroll(beta.length()) == beta.edges;
    }

    bool operator==(const BoundaryPath& o) const {
        if (kind_ != o.kind_) return false;
        if (kind_ == Kind::Finite) return prefix_ == o.prefix_;
        return prefix_ == o.prefix_ && cycle_ == o.cycle_;
    }
    bool operator!=(const BoundaryPath& o) const { return !(*this == o); }
    bool operator<(const BoundaryPath& o) const {
        if (kind_ != o.kind_) return kind_ == Kind::Finite;
        if (kind_ == Kind::Finite) return prefix_ < o.prefix_;
        if (prefix_ != o.prefix_) return prefix_ < o.prefix_;
        return cycle_ < o.cycle_;
    }

    std::string str(const Graph& g) const {
        auto path_str = [&g](const Path& p) {
            if (p.is_vertex()) return "(" + g.vertex_id(p.base) + ")";
            std::string s;
            for (int e : p.edges) {
                if (!s.empty()) s += " ";
                s += g.edge_id(e);
            }
            return s;
        };
        if (kind_ == Kind::Finite) return path_str(prefix_);
        return path_str(prefix_) + " [" + path_str(cycle_) + "]^inf";
    }

private:
    Kind kind_ = Kind::Finite;
    Path prefix_;
    Path cycle_;
};

inline int period_group(const BoundaryPath& x) { return x.period_group(); }

inline std::string path_label(const Graph& g, const Path& p) {
    if (p.is_vertex()) return "(" + g.vertex_id(p.base) + ")";
    std::string s;
    for (int e : p.edges) {
        if (!s.empty()) s += " ";
        s += g.edge_id(e);
    }
    return s;
}

inline BoundaryPath shift(const Graph& g, const BoundaryPath& x) { return x.shift(g); }

/// p followed by infinitely many copies of the candidate loop is a
/// well-formed eventually cyclic path.
inline bool is_eventually_cyclic(const Graph& g, const Path& p, const LoopClass& candidate) {
    return p.source(g) == candidate.representative().range(g);
}

/// All paths of length 0..max_len, grouped by length. Throws SizeLimit
/// when the total exceeds the cap.
inline std::vector<std::vector<Path>> paths_by_length(const Graph& g, int max_len,
                                                      std::size_t cap = kDefaultMaxPaths) {
    std::vector<std::vector<Path>> levels;
    std::vector<Path> level;
    for (int v = 0; v < g.vertex_count(); ++v) level.push_back(Path::at_vertex(v));
    std::size_t total = level.size();
    levels.push_back(level);
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Path> next;
        for (const Path& p : levels.back())
            for (int e : g.edges_into(p.source(g))) next.push_back(p.extended(g, e));
        total += next.size();
        if (total > cap)
            throw SizeLimit("path enumeration exceeded cap of " + std::to_string(cap));
        levels.push_back(std::move(next));
        if (levels.back().empty()) break;
    }
    while (static_cast<int>(levels.size()) <= max_len) levels.emplace_back();
    for (auto& lv : levels) std::sort(lv.begin(), lv.end());
    return levels;
}

/// Depth-n truncation of the boundary path space: every path of length
/// less than n with singular source, plus every path of length exactly n.
inline std::vector<Path> truncated_space(const Graph& g, int depth,
                                         std::size_t cap = kDefaultMaxPaths) {
    const auto levels = paths_by_length(g, depth, cap);
    std::vector<Path> space;
    for (int len = 0; len < depth; ++len)
        for (const Path& p : levels[len])
            if (!is_regular(g, p.source(g))) space.push_back(p);
    for (const Path& p : levels[depth]) space.push_back(p);
    std::sort(space.begin(), space.end());
    return space;
}

struct WeightedAtom {
    BoundaryPath atom;
    Rational weight;
};

/// Explicit atom list of an extremal invariant measure. Boundary kind
/// yields every path with the given source; cyclic-harmonic kind yields
/// one eventually cyclic path per reduced prefix of the loop.
inline std::vector<WeightedAtom> expand_atoms(const Graph& g, const AtomicInvariantMeasure& nu,
                                              std::size_t cap = kDefaultMaxPaths) {
    std::vector<WeightedAtom> atoms;
    if (nu.kind() == AtomicInvariantMeasure::Kind::Boundary) {
        const int v = nu.base_vertex();
        // Walks from v in the src->rng direction; reversal gives the paths
        // with source v. Finiteness is guaranteed by the measure invariant.
        std::vector<Path> frontier{Path::at_vertex(v)};
        while (!frontier.empty()) {
            std::vector<Path> next;
            for (const Path& p : frontier) {
                atoms.push_back({BoundaryPath::finite(g, p), nu.scale()});
                if (atoms.size() > cap) throw SizeLimit("atom expansion exceeded cap");
                for (int e : g.edges_out_of(p.range(g))) {
                    Path q = p;
                    q.edges.insert(q.edges.begin(), e);
                    q.base = g.rng(e);
                    next.push_back(q);
                }
            }
            frontier = std::move(next);
        }
    } else {
        const Path rep = nu.loop().representative();
        const int k = rep.length();
        // Prefix enumeration with the reversed-loop matcher: a walk dies
        // once its first k steps complete the loop from the source end.
        struct State {
            Path path;
            int matched;  // 0..k, k = safe
        };
        std::vector<State> frontier{{Path::at_vertex(rep.range(g)), 0}};
        while (!frontier.empty()) {
            std::vector<State> next;
            for (const State& s : frontier) {
                atoms.push_back(
                    {BoundaryPath::eventually_cyclic(g, s.path, rep), nu.scale()});
                if (atoms.size() > cap) throw SizeLimit("atom expansion exceeded cap");
                for (int e : g.edges_out_of(s.path.range(g))) {
                    int matched = k;  // safe
                    if (s.matched < k) {
                        if (e == rep.edges[static_cast<std::size_t>(k - 1 - s.matched)]) {
                            if (s.matched + 1 == k) continue;  // completed: dead
                            matched = s.matched + 1;
                        }
                    }
                    Path q = s.path;
                    q.edges.insert(q.edges.begin(), e);
                    q.base = g.rng(e);
                    next.push_back({std::move(q), matched});
                }
            }
            frontier = std::move(next);
        }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const WeightedAtom& a, const WeightedAtom& b) { return a.atom < b.atom; });
    return atoms;
}

inline Rational atoms_in_cylinder(const Graph& g, const std::vector<WeightedAtom>& atoms,
                                  const Path& beta) {
    Rational mass(0);
    for (const auto& wa : atoms)
        if (wa.atom.starts_with(g, beta)) mass += wa.weight;
    return mass;
}

inline Rational atoms_at_point(const Graph&, const std::vector<WeightedAtom>& atoms,
                               const Path& beta) {
    Rational mass(0);
    for (const auto& wa : atoms)
        if (wa.atom.is_finite() && wa.atom.prefix() == beta) mass += wa.weight;
    return mass;
}

struct InvarianceViolation {
    std::string set;
    Rational lhs;  // nu(A)
    Rational rhs;  // nu(sigma(A))
};

struct InvarianceReport {
    std::size_t checked = 0;
    std::vector<InvarianceViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Brute-force check of shift invariance, nu(sigma A) = nu(A), over the
/// sets on which the shift is injective: full cylinders of paths up to
/// the given depth, and the singleton finite paths among them. The
/// shift image of the cylinder of beta is the cylinder of the shifted
/// path, so every identity is exact rational arithmetic on atom sums.
inline InvarianceReport check_invariance_bruteforce(const Graph& g,
                                                    const std::vector<WeightedAtom>& atoms,
                                                    int depth,
                                                    std::size_t cap = kDefaultMaxPaths) {
    InvarianceReport report;
    for (const auto& wa : atoms)
        if (wa.weight.sign() < 0)
            report.violations.push_back({"atom " + wa.atom.str(g), wa.weight, Rational(0)});

    auto shifted = [&g](const Path& beta) {
        Path rest = beta;
        rest.edges.erase(rest.edges.begin());
        if (rest.edges.empty()) rest = Path::at_vertex(beta.source(g));
        return rest;
    };

    const auto levels = paths_by_length(g, depth, cap);
    for (int len = 1; len <= depth; ++len) {
        for (const Path& beta : levels[len]) {
            const Path tail = shifted(beta);
            const Rational lhs = atoms_in_cylinder(g, atoms, beta);
            const Rational rhs = atoms_in_cylinder(g, atoms, tail);
            ++report.checked;
            if (lhs != rhs)
                report.violations.push_back({"Z(" + path_label(g, beta) + ")", lhs, rhs});
            if (!is_regular(g, beta.source(g))) {
                const Rational plhs = atoms_at_point(g, atoms, beta);
                const Rational prhs = atoms_at_point(g, atoms, tail);
                ++report.checked;
                if (plhs != prhs)
                    report.violations.push_back({"{" + path_label(g, beta) + "}", plhs, prhs});
            }
        }
    }
    return report;
}

inline InvarianceReport check_invariance_bruteforce(const Graph& g,
                                                    const AtomicInvariantMeasure& nu, int depth,
                                                    std::size_t cap = kDefaultMaxPaths) {
    return check_invariance_bruteforce(g, expand_atoms(g, nu, cap), depth, cap);
}

}  // namespace gtrace

#endif  // GTRACE_PATHSPACE_HPP
