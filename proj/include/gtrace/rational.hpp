#ifndef GTRACE_RATIONAL_HPP
#define GTRACE_RATIONAL_HPP

#include <gmpxx.h>

#include <Eigen/Core>
#include <ostream>
#include <string>

#include "gtrace/errors.hpp"

namespace gtrace {

using Natural = mpz_class;

/// Arbitrary-precision rational, always kept in canonical reduced form.
///
/// Thin value wrapper around mpq_class. GMP's C++ operators return
/// expression templates, which Eigen cannot digest as a scalar type;
/// this wrapper returns plain values so Rational can be used as the
/// scalar of dense Eigen types.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<long int>(n)) {}  // NOLINT: implicit by design
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw ParseError("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rational(const mpz_class& z) : v_(z) {}

    // Accepts "p", "-p" or "p/q" with arbitrary-precision decimal digits.
    static Rational parse(const std::string& text);

    const mpq_class& raw() const { return v_; }
    Natural numerator() const { return v_.get_num(); }
    Natural denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }
    bool is_integer() const { return v_.get_den() == 1; }
    double to_double() const { return v_.get_d(); }

    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw Error("rational division by zero");
        return Rational(mpq_class(v_ / o.v_));
    }
    Rational operator-() const { return Rational(mpq_class(-v_)); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }
    bool operator<=(const Rational& o) const { return v_ <= o.v_; }
    bool operator>(const Rational& o) const { return v_ > o.v_; }
    bool operator>=(const Rational& o) const { return v_ >= o.v_; }

private:
    mpq_class v_;
};

inline Rational abs(const Rational& q) {
    return q.sign() < 0 ? -q : q;
}

inline std::ostream& operator<<(std::ostream& os, const Rational& q) {
    return os << q.str();
}

inline Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    auto valid = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            if (!valid(text)) throw ParseError("bad rational literal '" + text + "'");
            return Rational(mpq_class(mpz_class(text)));
        }
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (!valid(num) || !valid(den)) throw ParseError("bad rational literal '" + text + "'");
        mpz_class d(den);
        if (d == 0) throw ParseError("zero denominator in '" + text + "'");
        mpq_class q{mpz_class(num)};
        q /= mpq_class(d);
        return Rational(q);
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal '" + text + "'");
    }
}

}  // namespace gtrace

namespace Eigen {

template <>
struct NumTraits<gtrace::Rational> {
    using Real = gtrace::Rational;
    using NonInteger = gtrace::Rational;
    using Literal = gtrace::Rational;
    using Nested = gtrace::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 40,
        MulCost = 40,
    };
    static Real epsilon() { return gtrace::Rational(0); }
    static Real dummy_precision() { return gtrace::Rational(0); }
    static int digits10() { return 0; }
};

}  // namespace Eigen

#endif  // GTRACE_RATIONAL_HPP
