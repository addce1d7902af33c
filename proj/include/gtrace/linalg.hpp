#ifndef GTRACE_LINALG_HPP
#define GTRACE_LINALG_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gtrace/rational.hpp"

namespace gtrace {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RMatrix = DenseMatrix<Rational>;
using RVector = DenseVector<Rational>;

template <typename Scalar>
DenseMatrix<Scalar> matrix_power(const DenseMatrix<Scalar>& m, int n) {
    DenseMatrix<Scalar> acc = DenseMatrix<Scalar>::Identity(m.rows(), m.cols());
    for (int i = 0; i < n; ++i) acc = (acc * m).eval();
    return acc;
}

/// Basis of the kernel of m, as columns. Empty (0-column) matrix when the
/// kernel is trivial; Eigen's zero-column sentinel is normalized away.
template <typename Scalar>
DenseMatrix<Scalar> kernel_basis(const DenseMatrix<Scalar>& m) {
    Eigen::FullPivLU<DenseMatrix<Scalar>> lu(m);
    const Eigen::Index dim = lu.dimensionOfKernel();
    if (dim == 0) return DenseMatrix<Scalar>(m.cols(), 0);
    return lu.kernel();
}

/// Basis of the column space of m, as columns.
template <typename Scalar>
DenseMatrix<Scalar> image_basis(const DenseMatrix<Scalar>& m) {
    Eigen::FullPivLU<DenseMatrix<Scalar>> lu(m);
    const Eigen::Index r = lu.rank();
    if (r == 0) return DenseMatrix<Scalar>(m.rows(), 0);
    return lu.image(m);
}

template <typename Scalar>
Eigen::Index rank_of(const DenseMatrix<Scalar>& m) {
    return Eigen::FullPivLU<DenseMatrix<Scalar>>(m).rank();
}

/// Solves a x = b exactly, verifying the candidate; nullopt when the
/// system is inconsistent.
template <typename Scalar>
std::optional<DenseVector<Scalar>> solve_exact(const DenseMatrix<Scalar>& a,
                                               const DenseVector<Scalar>& b) {
    Eigen::FullPivLU<DenseMatrix<Scalar>> lu(a);
    DenseVector<Scalar> x = lu.solve(b);
    if ((a * x - b).isZero(Scalar(0))) return x;
    return std::nullopt;
}

/// Exact extreme points of the bounded polyhedron
///   { x : eq x = eq_rhs, ineq x <= ineq_rhs }.
///
/// The equality system is solved once for a particular point and a
/// nullspace basis; vertices are then found by making rank-many inequality
/// constraints tight in the nullspace coordinates. Exhaustive over
/// constraint subsets, so only suitable at desk scale.
template <typename Scalar>
std::vector<DenseVector<Scalar>> enumerate_polyhedron_vertices(
    const DenseMatrix<Scalar>& eq, const DenseVector<Scalar>& eq_rhs,
    const DenseMatrix<Scalar>& ineq, const DenseVector<Scalar>& ineq_rhs) {
    std::vector<DenseVector<Scalar>> vertices;
    const auto particular = solve_exact<Scalar>(eq, eq_rhs);
    if (!particular) return vertices;
    const DenseVector<Scalar> p = *particular;
    const DenseMatrix<Scalar> nullsp = kernel_basis<Scalar>(eq);
    const Eigen::Index k = nullsp.cols();

    const auto feasible = [&](const DenseVector<Scalar>& x) {
        for (Eigen::Index i = 0; i < ineq.rows(); ++i)
            if (ineq.row(i).dot(x) > ineq_rhs(i)) return false;
        return true;
    };

    auto push_unique = [&](const DenseVector<Scalar>& x) {
        for (const auto& v : vertices)
            if ((v - x).isZero(Scalar(0))) return;
        vertices.push_back(x);
    };

    if (k == 0) {
        if (feasible(p)) vertices.push_back(p);
        return vertices;
    }

    // Inequalities pulled back to nullspace coordinates: g y <= h.
    const DenseMatrix<Scalar> g = ineq * nullsp;
    DenseVector<Scalar> h = ineq_rhs - ineq * p;

    const Eigen::Index m = g.rows();
    std::vector<Eigen::Index> pick(k);
    // Iterate over all k-element subsets of the m inequality rows.
    for (Eigen::Index i = 0; i < k; ++i) pick[i] = i;
    if (m < k) return vertices;
    while (true) {
        DenseMatrix<Scalar> tight(k, k);
        DenseVector<Scalar> rhs(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            tight.row(i) = g.row(pick[i]);
            rhs(i) = h(pick[i]);
        }
        if (rank_of<Scalar>(tight) == k) {
            if (auto y = solve_exact<Scalar>(tight, rhs)) {
                const DenseVector<Scalar> x = p + nullsp * (*y);
                if (feasible(x)) push_unique(x);
            }
        }
        // next combination
        Eigen::Index i = k - 1;
        while (i >= 0 && pick[i] == m - k + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (Eigen::Index j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return vertices;
}

}  // namespace gtrace

#endif  // GTRACE_LINALG_HPP
