#ifndef GTRACE_MEASURES_HPP
#define GTRACE_MEASURES_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gtrace/graph.hpp"
#include "gtrace/linalg.hpp"
#include "gtrace/rational.hpp"
#include "gtrace/structure.hpp"

namespace gtrace {

/// Nonnegative exact-rational vector over the vertices of a graph,
/// aligned with the graph's sorted vertex order.
class VertexMeasure {
public:
    explicit VertexMeasure(RVector values) : values_(std::move(values)) {
        for (Eigen::Index i = 0; i < values_.size(); ++i)
            if (values_(i).sign() < 0)
                throw ValidationError("vertex measure with a negative entry");
    }

    static VertexMeasure zero(const Graph& g) {
        return VertexMeasure(RVector::Zero(g.vertex_count()));
    }

    static VertexMeasure from_entries(const Graph& g, const std::map<VertexId, Rational>& entries) {
        RVector v = RVector::Zero(g.vertex_count());
        for (const auto& [id, value] : entries) v(g.vertex(id)) = value;
        return VertexMeasure(v);
    }

    const RVector& values() const { return values_; }
    const Rational& at(int v) const { return values_(v); }
    Eigen::Index size() const { return values_.size(); }

    Rational total() const {
        Rational sum(0);
        for (Eigen::Index i = 0; i < values_.size(); ++i) sum += values_(i);
        return sum;
    }

    bool is_zero() const { return values_.isZero(Rational(0)); }

    std::map<VertexId, Rational> to_entries(const Graph& g) const {
        std::map<VertexId, Rational> entries;
        for (int v = 0; v < g.vertex_count(); ++v) entries[g.vertex_id(v)] = values_(v);
        return entries;
    }

    bool operator==(const VertexMeasure& o) const {
        return values_.size() == o.values_.size() && (values_ - o.values_).isZero(Rational(0));
    }
    bool operator!=(const VertexMeasure& o) const { return !(*this == o); }

private:
    RVector values_;
};

/// Vertex matrix A(v, w) = number of edges with range v and source w.
/// The transfer operator T sends mu to A mu.
inline RMatrix vertex_matrix(const Graph& g) {
    RMatrix a = RMatrix::Zero(g.vertex_count(), g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) a(g.rng(e), g.src(e)) += Rational(1);
    return a;
}

inline VertexMeasure apply_transfer(const RMatrix& a, const VertexMeasure& mu) {
    if (a.cols() != mu.size()) throw ValidationError("transfer matrix / measure size mismatch");
    return VertexMeasure((a * mu.values()).eval());
}

inline Rational norm1(const RVector& v) {
    Rational sum(0);
    for (Eigen::Index i = 0; i < v.size(); ++i) sum += abs(v(i));
    return sum;
}

/// mu is vertex-invariant iff (A mu)_v <= mu_v componentwise, with
/// equality at every regular vertex.
inline bool is_vertex_invariant(const Graph& g, const VertexMeasure& mu) {
    const RVector t = vertex_matrix(g) * mu.values();
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (t(v) > mu.at(v)) return false;
        if (is_regular(g, v) && t(v) != mu.at(v)) return false;
    }
    return true;
}

struct RieszDecomposition {
    VertexMeasure harmonic;  // mu1, with T mu1 = mu1
    VertexMeasure boundary;  // mu2, with T^n mu2 -> 0
};

/// Splits a vertex-invariant measure as mu = mu1 + mu2 with T mu1 = mu1
/// and T^n mu2 -> 0. The split is computed algebraically: with
/// d = |vertices| and B = (A - I)^d, the space decomposes as
/// ker B (+) im B, and mu1 is the ker-B component of mu. A verification
/// pass recomputes A mu1 = mu1, mu1 >= 0, mu2 >= 0 and the monotone decay
/// of |T^k mu2|_1, and throws InternalInconsistency on any failure.
inline RieszDecomposition riesz_decompose(const Graph& g, const VertexMeasure& mu) {
    if (!is_vertex_invariant(g, mu))
        throw NotInvariant("riesz_decompose requires a vertex-invariant measure");
    const int n = g.vertex_count();
    if (n == 0) return {VertexMeasure(RVector(0)), VertexMeasure(RVector(0))};

    const RMatrix a = vertex_matrix(g);
    const RMatrix b = matrix_power<Rational>(a - RMatrix::Identity(n, n), n);
    const RMatrix ker = kernel_basis<Rational>(b);
    const RMatrix img = image_basis<Rational>(b);
    const Eigen::Index k = ker.cols();
    if (k + img.cols() != n)
        throw InternalInconsistency("kernel/image dimensions do not add up");

    RVector h;
    if (k == 0) {
        h = RVector::Zero(n);
    } else {
        RMatrix basis(n, n);
        basis.leftCols(k) = ker;
        basis.rightCols(n - k) = img;
        const auto coeffs = solve_exact<Rational>(basis, mu.values());
        if (!coeffs) throw InternalInconsistency("kernel (+) image does not span");
        h = ker * coeffs->head(k);
    }
    const RVector t = mu.values() - h;

    if (!(a * h - h).isZero(Rational(0)))
        throw InternalInconsistency("harmonic part is not transfer-fixed");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (h(i).sign() < 0) throw InternalInconsistency("harmonic part has a negative entry");
        if (t(i).sign() < 0) throw InternalInconsistency("boundary part has a negative entry");
    }
    RVector iter = t;
    Rational prev = norm1(iter);
    for (int step = 0; step <= n; ++step) {
        iter = (a * iter).eval();
        const Rational cur = norm1(iter);
        if (cur > prev) throw InternalInconsistency("transfer iterates of the boundary part grow");
        prev = cur;
    }
    return {VertexMeasure(h), VertexMeasure(t)};
}

/// |T^k mu|_1 for k = 0..steps, the decay trace of the boundary part.
inline std::vector<Rational> transfer_norm_trace(const Graph& g, const VertexMeasure& mu,
                                                 int steps) {
    const RMatrix a = vertex_matrix(g);
    std::vector<Rational> norms;
    RVector v = mu.values();
    norms.push_back(norm1(v));
    for (int k = 1; k <= steps; ++k) {
        v = (a * v).eval();
        norms.push_back(norm1(v));
    }
    return norms;
}

/// eta = mu2 - T mu2. For the boundary part of a vertex-invariant measure
/// this is nonnegative and supported on the singular vertices.
inline VertexMeasure defect(const Graph& g, const VertexMeasure& mu2) {
    const RVector t = vertex_matrix(g) * mu2.values();
    RVector eta = mu2.values() - t;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        if (eta(i).sign() < 0)
            throw NegativeDefect("T mu exceeds mu at vertex '" +
                                 g.vertex_id(static_cast<int>(i)) + "'");
    return VertexMeasure(eta);
}

/// Regular vertices carrying defect mass; nonempty means the input was not
/// the boundary part of a vertex-invariant measure.
inline std::vector<VertexId> defect_regular_support(const Graph& g, const VertexMeasure& eta) {
    std::vector<VertexId> bad;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (is_regular(g, v) && eta.at(v).sign() > 0) bad.push_back(g.vertex_id(v));
    return bad;
}

/// Extremal invariant measure on the boundary path space with a countable
/// atom family, described by its generator.
///
/// Boundary kind: atoms are all finite paths with source `vertex` (a
/// singular vertex with finitely many paths into it), each of mass
/// `scale`. CyclicHarmonic kind: atoms are x = p c^inf for the summable
/// loop class c, one per reduced prefix p, each of mass `scale`.
class AtomicInvariantMeasure {
public:
    enum class Kind { Boundary, CyclicHarmonic };

    static AtomicInvariantMeasure boundary(const Graph& g, int vertex, Rational scale = Rational(1)) {
        if (is_regular(g, vertex))
            throw ValidationError("boundary measure requires a singular vertex");
        const VertexCounts counts = count_paths_into_vertex(g, vertex);
        if (!all_finite(counts))
            throw ValidationError("boundary measure requires finitely many paths into '" +
                                  g.vertex_id(vertex) + "' from every vertex");
        AtomicInvariantMeasure m;
        m.kind_ = Kind::Boundary;
        m.vertex_ = vertex;
        m.scale_ = scale;
        m.finish(g, counts);
        return m;
    }

    static AtomicInvariantMeasure cyclic_harmonic(const Graph& g, const LoopClass& loop,
                                                  Rational scale = Rational(1)) {
        if (!is_isolated(g, loop))
            throw ValidationError("cyclic-harmonic measure requires an isolated loop");
        const VertexCounts counts = count_reduced_paths(g, loop);
        if (!all_finite(counts))
            throw ValidationError("cyclic-harmonic measure requires a summable loop");
        AtomicInvariantMeasure m;
        m.kind_ = Kind::CyclicHarmonic;
        m.loop_ = loop;
        m.scale_ = scale;
        m.finish(g, counts);
        return m;
    }

    Kind kind() const { return kind_; }
    int base_vertex() const { return vertex_; }
    const LoopClass& loop() const { return *loop_; }
    const Rational& scale() const { return scale_; }
    const VertexCounts& atom_counts() const { return counts_; }

    /// r-pushforward: mass per range vertex, i.e. scale * atom count.
    const VertexMeasure& pushforward() const { return *pushforward_; }
    Rational total_mass() const { return pushforward_->total(); }

    /// Subgroup generator of the almost-everywhere periodicity group:
    /// 0 for boundary measures, the loop length for cyclic-harmonic ones.
    int period() const { return kind_ == Kind::Boundary ? 0 : loop_->length(); }

private:
    AtomicInvariantMeasure() = default;

    void finish(const Graph& g, const VertexCounts& counts) {
        counts_ = counts;
        RVector push = RVector::Zero(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            push(v) = scale_ * Rational(mpq_class(counts.at(g.vertex_id(v)).count));
        pushforward_ = VertexMeasure(push);
    }

    Kind kind_ = Kind::Boundary;
    int vertex_ = -1;
    std::optional<LoopClass> loop_;
    Rational scale_{1};
    VertexCounts counts_;
    std::optional<VertexMeasure> pushforward_;
};

/// One boundary measure (scale 1) per singular vertex with finitely many
/// paths into it, sorted by vertex id.
inline std::vector<AtomicInvariantMeasure> enumerate_extremal_boundary(const Graph& g) {
    std::vector<AtomicInvariantMeasure> measures;
    for (int v : singular_vertices(g))
        if (all_finite(count_paths_into_vertex(g, v)))
            measures.push_back(AtomicInvariantMeasure::boundary(g, v));
    return measures;
}

/// One cyclic-harmonic measure (scale 1) per summable loop class.
inline std::vector<AtomicInvariantMeasure> enumerate_extremal_cyclic_harmonic(const Graph& g) {
    std::vector<AtomicInvariantMeasure> measures;
    for (const LoopClass& c : enumerate_summable_loop_classes(g))
        measures.push_back(AtomicInvariantMeasure::cyclic_harmonic(g, c));
    return measures;
}

/// Mass of the cylinder of a path under the unique invariant measure with
/// r-pushforward mu: the cylinder of beta has mass mu(source(beta)).
inline Rational cylinder_mass(const Graph& g, const VertexMeasure& mu, const Path& beta) {
    if (!is_vertex_invariant(g, mu))
        throw NotInvariant("cylinder_mass requires a vertex-invariant measure");
    return mu.at(beta.source(g));
}

/// Exact extreme points of the invariant probability polytope
///   { mu >= 0 : (A mu)_v = mu_v at regular v, (A mu)_v <= mu_v at
///     singular v, sum mu = 1 },
/// sorted lexicographically. Exhaustive vertex enumeration; graphs above
/// max_vertices are rejected to avoid combinatorial blowup.
inline std::vector<VertexMeasure> enumerate_polytope_vertices(const Graph& g,
                                                              int max_vertices = 12) {
    const int n = g.vertex_count();
    if (n > max_vertices)
        throw SizeLimit("polytope enumeration limited to " + std::to_string(max_vertices) +
                        " vertices (graph has " + std::to_string(n) + ")");
    if (n == 0) return {};

    const RMatrix ai = vertex_matrix(g) - RMatrix::Identity(n, n);
    const auto regular = regular_vertices(g);

    RMatrix eq(static_cast<Eigen::Index>(regular.size()) + 1, n);
    RVector eq_rhs(static_cast<Eigen::Index>(regular.size()) + 1);
    Eigen::Index row = 0;
    for (int v : regular) {
        eq.row(row) = ai.row(v);
        eq_rhs(row) = Rational(0);
        ++row;
    }
    eq.row(row).setConstant(Rational(1));
    eq_rhs(row) = Rational(1);

    const auto singular = singular_vertices(g);
    RMatrix ineq(n + static_cast<Eigen::Index>(singular.size()), n);
    RVector ineq_rhs = RVector::Zero(n + static_cast<Eigen::Index>(singular.size()));
    ineq.setZero();
    for (int v = 0; v < n; ++v) ineq(v, v) = Rational(-1);  // mu >= 0
    row = n;
    for (int v : singular) {
        ineq.row(row) = ai.row(v);
        ++row;
    }

    auto points = enumerate_polyhedron_vertices<Rational>(eq, eq_rhs, ineq, ineq_rhs);
    std::sort(points.begin(), points.end(), [](const RVector& a, const RVector& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a(i) < b(i)) return true;
            if (b(i) < a(i)) return false;
        }
        return false;
    });
    std::vector<VertexMeasure> result;
    result.reserve(points.size());
    for (auto& p : points) result.push_back(VertexMeasure(std::move(p)));
    return result;
}

struct Classification {
    enum class Kind { Boundary, CyclicHarmonic, HarmonicOther };
    Kind kind = Kind::HarmonicOther;
    std::optional<VertexId> vertex;   // Boundary
    std::optional<LoopClass> loop;    // CyclicHarmonic
};

/// Matches an extreme point against the normalized pushforwards of the
/// enumerated boundary and cyclic-harmonic measures. HarmonicOther is a
/// loud fallback: the finite-graph analysis gives no example of it, and
/// callers treat it as a reportable event.
inline Classification classify_extreme_point(const Graph& g, const VertexMeasure& mu) {
    const Rational total = mu.total();
    if (total.is_zero()) return {};
    auto matches = [&](const VertexMeasure& push) {
        const Rational push_total = push.total();
        if (push_total.is_zero()) return false;
        // mu / total == push / push_total, cross-multiplied to stay exact.
        return (mu.values() * push_total - push.values() * total).isZero(Rational(0));
    };
    for (const auto& m : enumerate_extremal_boundary(g))
        if (matches(m.pushforward())) {
            Classification c;
            c.kind = Classification::Kind::Boundary;
            c.vertex = g.vertex_id(m.base_vertex());
            return c;
        }
    for (const auto& m : enumerate_extremal_cyclic_harmonic(g))
        if (matches(m.pushforward())) {
            Classification c;
            c.kind = Classification::Kind::CyclicHarmonic;
            c.loop = m.loop();
            return c;
        }
    return {};
}

}  // namespace gtrace

#endif  // GTRACE_MEASURES_HPP
