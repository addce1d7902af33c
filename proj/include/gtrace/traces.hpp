#ifndef GTRACE_TRACES_HPP
#define GTRACE_TRACES_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtrace/graph.hpp"
#include "gtrace/measures.hpp"
#include "gtrace/pathspace.hpp"
#include "gtrace/rational.hpp"

namespace gtrace {

/// Exact complex number with rational real and imaginary parts.
struct RationalComplex {
    Rational re{0};
    Rational im{0};

    RationalComplex() = default;
    RationalComplex(Rational r) : re(std::move(r)) {}  // NOLINT: implicit by design
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static RationalComplex one() { return RationalComplex(Rational(1)); }
    static RationalComplex i() { return RationalComplex(Rational(0), Rational(1)); }

    RationalComplex operator+(const RationalComplex& o) const { return {re + o.re, im + o.im}; }
    RationalComplex operator-(const RationalComplex& o) const { return {re - o.re, im - o.im}; }
    RationalComplex operator*(const RationalComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    RationalComplex& operator+=(const RationalComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    RationalComplex conj() const { return {re, -im}; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    bool operator==(const RationalComplex& o) const { return re == o.re && im == o.im; }
    bool operator!=(const RationalComplex& o) const { return !(*this == o); }

    std::string str() const {
        if (im.is_zero()) return re.str();
        if (re.is_zero()) return im.str() + "i";
        return re.str() + (im.sign() > 0 ? "+" : "") + im.str() + "i";
    }
};

/// Uniform scalar interface over RationalComplex (exact) and
/// std::complex<double> (floating, with a documented tolerance).
template <typename Scalar>
struct ScalarOps;

template <>
struct ScalarOps<RationalComplex> {
    static RationalComplex zero() { return {}; }
    static RationalComplex one() { return RationalComplex::one(); }
    static RationalComplex from_rational(const Rational& r) { return RationalComplex(r); }
    static RationalComplex conj(const RationalComplex& z) { return z.conj(); }
    static bool nonzero(const RationalComplex& z) { return !z.is_zero(); }
    static bool differ(const RationalComplex& a, const RationalComplex& b) { return a != b; }
    static bool on_unit_circle(const RationalComplex& z) {
        return z.re * z.re + z.im * z.im == Rational(1);
    }
    static std::string str(const RationalComplex& z) { return z.str(); }
};

template <>
struct ScalarOps<std::complex<double>> {
    static constexpr double kTol = 1e-9;
    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> from_rational(const Rational& r) { return {r.to_double(), 0.0}; }
    static std::complex<double> conj(const std::complex<double>& z) { return std::conj(z); }
    static bool nonzero(const std::complex<double>& z) { return std::abs(z) > kTol; }
    static bool differ(const std::complex<double>& a, const std::complex<double>& b) {
        return std::abs(a - b) > kTol;
    }
    static bool on_unit_circle(const std::complex<double>& z) {
        return std::abs(std::abs(z) - 1.0) < 1e-12;
    }
    static std::string str(const std::complex<double>& z) {
        return std::to_string(z.real()) + (z.imag() >= 0 ? "+" : "") + std::to_string(z.imag()) +
               "i";
    }
};

/// z^m for z on the unit circle; negative powers go through the conjugate.
template <typename Scalar>
Scalar unit_power(Scalar z, long m) {
    if (m < 0) {
        z = ScalarOps<Scalar>::conj(z);
        m = -m;
    }
    Scalar acc = ScalarOps<Scalar>::one();
    for (long i = 0; i < m; ++i) acc = acc * z;
    return acc;
}

/// One cylinder-pair term c . S_beta S_gamma*: the functionals sample it
/// on pairs (beta x, |beta| - |gamma|, gamma x). Valid terms have
/// source(beta) = source(gamma); the degree is |beta| - |gamma|.
template <typename Scalar>
struct CylinderTerm {
    Path beta;
    Path gamma;
    Scalar coeff;

    int degree() const { return beta.length() - gamma.length(); }
};

template <typename Scalar>
CylinderTerm<Scalar> make_term(const Graph& g, Path beta, Path gamma, Scalar coeff) {
    if (beta.source(g) != gamma.source(g))
        throw ValidationError("cylinder term requires source(beta) = source(gamma)");
    return {std::move(beta), std::move(gamma), std::move(coeff)};
}

template <typename Scalar>
std::vector<CylinderTerm<Scalar>> adjoint(const std::vector<CylinderTerm<Scalar>>& f) {
    std::vector<CylinderTerm<Scalar>> out;
    out.reserve(f.size());
    for (const auto& t : f) out.push_back({t.gamma, t.beta, ScalarOps<Scalar>::conj(t.coeff)});
    return out;
}

namespace detail {

// whole = pre . rest: strips the range-end initial segment `pre`, or
// nullopt when `pre` is not an initial segment.
inline std::optional<Path> strip_prefix(const Graph& g, const Path& whole, const Path& pre) {
    if (pre.is_vertex()) {
        if (whole.range(g) != pre.base) return std::nullopt;
        return whole;
    }
    if (pre.length() > whole.length()) return std::nullopt;
    for (int i = 0; i < pre.length(); ++i)
        if (whole.edges[i] != pre.edges[i]) return std::nullopt;
    if (pre.length() == whole.length()) return Path::at_vertex(whole.source(g));
    Path rest;
    rest.edges.assign(whole.edges.begin() + pre.length(), whole.edges.end());
    rest.base = g.rng(rest.edges.front());
    return rest;
}

}  // namespace detail

/// Product of two cylinder terms in the partial-isometry calculus:
/// S_gamma1* S_beta2 collapses to S_delta when beta2 = gamma1 delta, to
/// S_eps* when gamma1 = beta2 eps, and to zero otherwise. A source/range
/// mismatch in the glued paths also kills the product.
template <typename Scalar>
std::vector<CylinderTerm<Scalar>> convolve(const Graph& g, const CylinderTerm<Scalar>& t1,
                                           const CylinderTerm<Scalar>& t2) {
    const Scalar coeff = t1.coeff * t2.coeff;
    if (t2.beta.length() >= t1.gamma.length()) {
        const auto delta = detail::strip_prefix(g, t2.beta, t1.gamma);
        if (!delta) return {};
        if (t1.beta.source(g) != delta->range(g)) return {};
        return {CylinderTerm<Scalar>{compose(g, t1.beta, *delta), t2.gamma, coeff}};
    }
    const auto eps = detail::strip_prefix(g, t1.gamma, t2.beta);
    if (!eps) return {};
    if (t2.gamma.source(g) != eps->range(g)) return {};
    return {CylinderTerm<Scalar>{t1.beta, compose(g, t2.gamma, *eps), coeff}};
}

/// Product of two term sums, expanded pairwise.
template <typename Scalar>
std::vector<CylinderTerm<Scalar>> convolve(const Graph& g,
                                           const std::vector<CylinderTerm<Scalar>>& f,
                                           const std::vector<CylinderTerm<Scalar>>& h) {
    std::vector<CylinderTerm<Scalar>> out;
    for (const auto& t1 : f)
        for (const auto& t2 : h)
            for (auto& t : convolve(g, t1, t2)) out.push_back(std::move(t));
    return out;
}

/// Character of the subgroup dZ of Z: u_{d m} maps to zeta^m. d = 0
/// encodes the trivial subgroup with the trivial character.
template <typename Scalar>
struct Character {
    int d = 0;
    Scalar zeta = ScalarOps<Scalar>::one();

    static Character trivial(int d = 0) { return {d, ScalarOps<Scalar>::one()}; }

    static Character make(int d, Scalar zeta) {
        if (d < 0) throw MalformedFunctional("negative subgroup generator");
        if (!ScalarOps<Scalar>::on_unit_circle(zeta))
            throw MalformedFunctional("character value must lie on the unit circle");
        if (d == 0 && ScalarOps<Scalar>::differ(zeta, ScalarOps<Scalar>::one()))
            throw MalformedFunctional("the trivial subgroup only carries the trivial character");
        return {d, std::move(zeta)};
    }
};

/// The tracial weight determined by an extremal invariant measure and a
/// state on the group algebra of its periodicity group. The state is a
/// character or a finite convex mixture of characters, all on the same
/// subgroup d Z, where d is the measure's almost-everywhere period.
template <typename Scalar>
class TraceFunctional {
public:
    using Mixture = std::vector<std::pair<Rational, Character<Scalar>>>;

    TraceFunctional(const Graph& g, AtomicInvariantMeasure nu, Character<Scalar> phi)
        : TraceFunctional(g, std::move(nu), Mixture{{Rational(1), std::move(phi)}}) {}

    TraceFunctional(const Graph& g, AtomicInvariantMeasure nu, Mixture mixture)
        : nu_(std::move(nu)), mixture_(std::move(mixture)) {
        if (mixture_.empty()) throw MalformedFunctional("empty character mixture");
        for (const auto& [w, chi] : mixture_) {
            if (w.sign() < 0) throw MalformedFunctional("negative mixture weight");
            if (chi.d != nu_.period())
                throw MalformedFunctional("character subgroup " + std::to_string(chi.d) +
                                          " does not match the measure period " +
                                          std::to_string(nu_.period()));
        }
        atoms_ = expand_atoms(g, nu_);
    }

    const AtomicInvariantMeasure& measure() const { return nu_; }
    const std::vector<WeightedAtom>& atoms() const { return atoms_; }
    int period() const { return nu_.period(); }

    /// phi(u_degree); degree must lie in the subgroup d Z.
    Scalar phi(int degree) const {
        const int d = nu_.period();
        if (d == 0) {
            if (degree != 0)
                throw InternalInconsistency("nonzero degree reached a period-0 functional");
            Scalar sum = ScalarOps<Scalar>::zero();
            for (const auto& [w, chi] : mixture_) sum += ScalarOps<Scalar>::from_rational(w);
            return sum;
        }
        if (degree % d != 0)
            throw InternalInconsistency("degree outside the periodicity subgroup");
        Scalar sum = ScalarOps<Scalar>::zero();
        for (const auto& [w, chi] : mixture_)
            sum += ScalarOps<Scalar>::from_rational(w) * unit_power(chi.zeta, degree / d);
        return sum;
    }

private:
    AtomicInvariantMeasure nu_;
    Mixture mixture_;
    std::vector<WeightedAtom> atoms_;
};

namespace detail {

// Diagonal mass of one term under nu alone (phi stripped off): the atom
// weight collected over atoms x with beta, gamma both initial segments
// and sigma^{|beta|} x = sigma^{|gamma|} x.
inline Rational diagonal_mass(const Graph& g, const std::vector<WeightedAtom>& atoms,
                              const Path& beta, const Path& gamma) {
    Rational mass(0);
    for (const auto& wa : atoms) {
        if (!wa.atom.starts_with(g, beta) || !wa.atom.starts_with(g, gamma)) continue;
        if (beta.length() != gamma.length()) {
            if (wa.atom.is_finite()) continue;  // distinct shifts of a finite path differ
            if (wa.atom.shift_by(g, beta.length()) != wa.atom.shift_by(g, gamma.length()))
                continue;
        }
        mass += wa.weight;
    }
    return mass;
}

}  // namespace detail

/// psi(f) = sum over atoms x and terms (beta, gamma, c) of
/// c . nu{x} . phi(u_{|beta|-|gamma|}), restricted to the pairs where both
/// paths begin x and the shifted tails agree.
template <typename Scalar>
Scalar evaluate_trace(const Graph& g, const TraceFunctional<Scalar>& psi,
                      const std::vector<CylinderTerm<Scalar>>& terms) {
    Scalar total = ScalarOps<Scalar>::zero();
    for (const auto& term : terms) {
        const Rational mass = detail::diagonal_mass(g, psi.atoms(), term.beta, term.gamma);
        if (mass.is_zero()) continue;
        total += term.coeff * ScalarOps<Scalar>::from_rational(mass) * psi.phi(term.degree());
    }
    return total;
}

/// Gauge action: a degree-k term picks up the factor z^k.
template <typename Scalar>
std::vector<CylinderTerm<Scalar>> gauge_rotate(const std::vector<CylinderTerm<Scalar>>& f,
                                               const Scalar& z) {
    std::vector<CylinderTerm<Scalar>> out;
    out.reserve(f.size());
    for (const auto& t : f)
        out.push_back({t.beta, t.gamma, unit_power(z, t.degree()) * t.coeff});
    return out;
}

/// Test z values separating every degree: -1 and i handle small orders,
/// and (3+4i)/5 has infinite multiplicative order on the unit circle.
template <typename Scalar>
std::vector<Scalar> gauge_test_values();

template <>
inline std::vector<RationalComplex> gauge_test_values<RationalComplex>() {
    return {RationalComplex(Rational(-1)), RationalComplex::i(),
            RationalComplex(Rational(3, 5), Rational(4, 5))};
}

template <>
inline std::vector<std::complex<double>> gauge_test_values<std::complex<double>>() {
    return {{-1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}};
}

/// True iff psi agrees with all of its gauge rotations on every basis
/// term with both path lengths bounded by test_degree_bound. The rotation
/// sweep and the direct criterion (period 0, or the character mixture
/// vanishing on every realized nonzero degree) are computed independently
/// and asserted equal.
template <typename Scalar>
bool is_gauge_invariant_functional(const Graph& g, const TraceFunctional<Scalar>& psi,
                                   int test_degree_bound) {
    const auto levels = paths_by_length(g, test_degree_bound);
    std::vector<Path> paths;
    for (const auto& level : levels) paths.insert(paths.end(), level.begin(), level.end());
    const auto zs = gauge_test_values<Scalar>();

    bool rotations_agree = true;
    bool direct = true;
    for (const Path& beta : paths) {
        for (const Path& gamma : paths) {
            if (beta.source(g) != gamma.source(g)) continue;
            const auto f = std::vector<CylinderTerm<Scalar>>{
                {beta, gamma, ScalarOps<Scalar>::one()}};
            const Scalar value = evaluate_trace(g, psi, f);
            for (const Scalar& z : zs)
                if (ScalarOps<Scalar>::differ(evaluate_trace(g, psi, gauge_rotate(f, z)), value))
                    rotations_agree = false;
            if (f.front().degree() != 0 && ScalarOps<Scalar>::nonzero(value)) direct = false;
        }
    }
    if (rotations_agree != direct)
        throw InternalInconsistency("gauge rotation sweep disagrees with the direct criterion");
    return direct;
}

}  // namespace gtrace

#endif  // GTRACE_TRACES_HPP
