// Multivariate complex polynomials and exact vanishing orders.
//
// A polynomial is a normalized term list (multi-index, complex coefficient).
// The vanishing order at a point is computed by Taylor-shifting the
// polynomial to the point in exact rational-complex arithmetic (doubles embed
// losslessly), then reading off the smallest total degree with a surviving
// coefficient. A relative magnitude threshold prunes float-roundoff residue
// when the inputs were produced by inexact computation.

#pragma once

#include "lelong/errors.hpp"
#include "lelong/rational.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace lelong {

using CVector = std::vector<Complex>;

struct PolyTerm {
    std::vector<unsigned> powers;  // length nvars
    Complex coeff{0.0, 0.0};
};

class Polynomial {
public:
    Polynomial() = default;

    Polynomial(int nvars, std::vector<PolyTerm> terms) : nvars_(nvars) {
        if (nvars <= 0) throw InputError("polynomial: nvars must be positive");
        std::map<std::vector<unsigned>, Complex> acc;
        for (auto& t : terms) {
            if (static_cast<int>(t.powers.size()) != nvars)
                throw InputError("polynomial: term power length != nvars");
            acc[t.powers] += t.coeff;
        }
        for (auto& [p, c] : acc)
            if (c != Complex(0.0, 0.0)) terms_.push_back({p, c});
    }

    int nvars() const { return nvars_; }
    const std::vector<PolyTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& t : terms_) {
            unsigned s = 0;
            for (unsigned p : t.powers) s += p;
            d = std::max(d, s);
        }
        return d;
    }

    Complex eval(const CVector& z) const {
        if (static_cast<int>(z.size()) != nvars_)
            throw InputError("polynomial eval: point arity mismatch");
        Complex acc(0.0, 0.0);
        for (const auto& t : terms_) {
            Complex m = t.coeff;
            for (int j = 0; j < nvars_; ++j)
                for (unsigned p = 0; p < t.powers[j]; ++p) m *= z[j];
            acc += m;
        }
        return acc;
    }

    // Exact evaluation; meaningful because doubles convert in losslessly.
    RationalComplex eval_exact(const std::vector<RationalComplex>& z) const {
        if (static_cast<int>(z.size()) != nvars_)
            throw InputError("polynomial eval: point arity mismatch");
        RationalComplex acc;
        for (const auto& t : terms_) {
            RationalComplex m{RationalComplex(t.coeff)};
            for (int j = 0; j < nvars_; ++j)
                for (unsigned p = 0; p < t.powers[j]; ++p) m *= z[j];
            acc += m;
        }
        return acc;
    }

    Polynomial derivative(int var) const {
        if (var < 0 || var >= nvars_) throw InputError("polynomial derivative: bad variable");
        std::vector<PolyTerm> out;
        for (const auto& t : terms_) {
            if (t.powers[var] == 0) continue;
            PolyTerm d = t;
            d.coeff *= static_cast<double>(t.powers[var]);
            d.powers[var] -= 1;
            out.push_back(std::move(d));
        }
        return Polynomial(nvars_, std::move(out));
    }

    // Coefficient map of p(point + u) in exact arithmetic.
    std::map<std::vector<unsigned>, RationalComplex> shifted_coefficients(const CVector& point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw InputError("polynomial shift: point arity mismatch");
        std::map<std::vector<unsigned>, RationalComplex> acc;
        for (const auto& t : terms_) acc[t.powers] += RationalComplex(t.coeff);

        // Substitute one variable at a time: z_j -> x_j + u_j.
        for (int j = 0; j < nvars_; ++j) {
            const RationalComplex xj{point[j]};
            if (xj.is_zero()) continue;
            std::map<std::vector<unsigned>, RationalComplex> next;
            for (const auto& [pw, c] : acc) {
                const unsigned a = pw[j];
                // (x + u)^a expanded with exact binomials.
                Rational binom{1};
                RationalComplex xpow{Rational(1), Rational(0)};
                std::vector<RationalComplex> xpows(a + 1);
                xpows[0] = xpow;
                for (unsigned i = 1; i <= a; ++i) xpows[i] = xpows[i - 1] * xj;
                for (unsigned b = 0; b <= a; ++b) {
                    std::vector<unsigned> q = pw;
                    q[j] = b;
                    next[q] += binom * (c * xpows[a - b]);
                    binom = binom * Rational(a - b) / Rational(b + 1);
                }
            }
            acc = std::move(next);
        }
        return acc;
    }
private:
    int nvars_ = 0;
    std::vector<PolyTerm> terms_;
};

// Vanishing order of poly at point: smallest total degree with a nonzero
// coefficient after the Taylor shift. Exact zeros are exact; additionally,
// coefficients below rel_tol times the largest shifted coefficient are
// treated as float noise.
inline unsigned ord_at(const Polynomial& poly, const CVector& point, double rel_tol = 1e-12) {
    if (poly.is_zero()) throw InputError("ord_at: zero polynomial");
    const auto shifted = poly.shifted_coefficients(point);

    double max_mag = 0.0;
    for (const auto& [pw, c] : shifted) max_mag = std::max(max_mag, c.mag1());

    unsigned best = ~0u;
    for (const auto& [pw, c] : shifted) {
        if (c.is_zero() || c.mag1() <= rel_tol * max_mag) continue;
        unsigned s = 0;
        for (unsigned p : pw) s += p;
        best = std::min(best, s);
    }
    // poly is not identically zero, so some coefficient survives.
    return best;
}

}  // namespace lelong
