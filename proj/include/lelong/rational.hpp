// Exact rational scalars and rational complex numbers.
//
// All invariants the exact engines report (Lelong numbers, integrability
// thresholds, LP values) are arbitrary-precision rationals so that the
// acceptance checks compare values without float ambiguity. Doubles convert
// in exactly (every finite double is a dyadic rational), which is what makes
// the Taylor-shift vanishing-order computation exact for float inputs.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lelong {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using Complex = std::complex<double>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite input");
    return Rational(x);
}

// Parses "p/q" or a plain integer string. Throws std::invalid_argument on junk.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("parse_rational: malformed rational '" + s + "'");
    }
}

// Canonical "p/q" form (denominator always present, e.g. "3/1").
inline std::string format_rational(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Complex number with exact rational parts; just enough arithmetic for
// polynomial evaluation and Taylor shifts.
struct RationalComplex {
    Rational re{0};
    Rational im{0};

    RationalComplex() = default;
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    explicit RationalComplex(const Complex& z)
        : re(rational_from_double(z.real())), im(rational_from_double(z.imag())) {}

    bool is_zero() const { return re == 0 && im == 0; }

    RationalComplex& operator+=(const RationalComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) { return a += b; }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    RationalComplex& operator*=(const RationalComplex& o) { return *this = *this * o; }
    friend RationalComplex operator*(const Rational& s, const RationalComplex& a) {
        return {s * a.re, s * a.im};
    }

    // |z|_1 magnitude in double, used only for relative noise thresholds.
    double mag1() const { return std::abs(to_double(re)) + std::abs(to_double(im)); }

    Complex to_complex() const { return {to_double(re), to_double(im)}; }
};

}  // namespace lelong
