// Invariant estimates: a Lelong number or singularity exponent, either exact
// (rational point value, rational interval, or +infinity) or numeric
// (interval with uncertainty), always tagged with the method that produced it.

#pragma once

#include "lelong/rational.hpp"

#include <limits>
#include <string>

namespace lelong {

enum class InvariantKind { lelong, lct };

enum class Method {
    exact_rule,            // structural recursion on the expression
    closed_form,           // radial closed form
    lp,                    // exact rational LP on the Newton polyhedron
    interval_certificate,  // sandwich bounds (tower symmetrization / Skoda)
    numeric,               // estimator output
    numeric_required,      // exact rules do not cover this case
};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::exact_rule: return "exact-rule";
        case Method::closed_form: return "closed-form";
        case Method::lp: return "lp";
        case Method::interval_certificate: return "interval-certificate";
        case Method::numeric: return "numeric";
        case Method::numeric_required: return "numeric-required";
    }
    return "?";
}

inline const char* kind_name(InvariantKind k) {
    return k == InvariantKind::lelong ? "lelong" : "lct";
}

struct InvariantEstimate {
    InvariantKind kind = InvariantKind::lelong;
    Method method = Method::numeric_required;
    bool exact = false;     // rlo/rhi are meaningful
    bool infinite = false;  // the value is +infinity
    Rational rlo{0};
    Rational rhi{0};
    double nlo = 0.0;
    double nhi = 0.0;
    bool inconclusive = false;      // numeric run did not resolve the verdict
    bool budget_exhausted = false;  // interval wider than requested tolerance
    std::string note;

    static InvariantEstimate exact_point(InvariantKind k, Method m, Rational v,
                                         std::string note = {}) {
        InvariantEstimate e;
        e.kind = k;
        e.method = m;
        e.exact = true;
        e.rlo = v;
        e.rhi = std::move(v);
        e.note = std::move(note);
        return e;
    }

    static InvariantEstimate exact_interval(InvariantKind k, Method m, Rational lo, Rational hi,
                                            std::string note = {}) {
        InvariantEstimate e;
        e.kind = k;
        e.method = m;
        e.exact = true;
        e.rlo = std::move(lo);
        e.rhi = std::move(hi);
        e.note = std::move(note);
        return e;
    }

    static InvariantEstimate infinity(InvariantKind k, Method m, std::string note = {}) {
        InvariantEstimate e;
        e.kind = k;
        e.method = m;
        e.infinite = true;
        e.note = std::move(note);
        return e;
    }

    static InvariantEstimate numeric_interval(InvariantKind k, double lo, double hi,
                                              std::string note = {}) {
        InvariantEstimate e;
        e.kind = k;
        e.method = Method::numeric;
        e.nlo = lo;
        e.nhi = hi;
        e.note = std::move(note);
        return e;
    }

    static InvariantEstimate unavailable(InvariantKind k, std::string note = {}) {
        InvariantEstimate e;
        e.kind = k;
        e.method = Method::numeric_required;
        e.note = std::move(note);
        return e;
    }

    bool available() const { return method != Method::numeric_required; }
    bool is_point() const { return infinite || (exact ? rlo == rhi : nlo == nhi); }

    double lo() const {
        if (infinite) return std::numeric_limits<double>::infinity();
        return exact ? to_double(rlo) : nlo;
    }
    double hi() const {
        if (infinite) return std::numeric_limits<double>::infinity();
        return exact ? to_double(rhi) : nhi;
    }
    double mid() const { return infinite ? lo() : 0.5 * (lo() + hi()); }
    double halfwidth() const { return infinite ? 0.0 : 0.5 * (hi() - lo()); }
};

}  // namespace lelong
