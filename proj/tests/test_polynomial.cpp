#include "lelong/polynomial.hpp"

#include "lelong/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace lelong;

namespace {

// Independent order oracle: differentiate (a different code path than the
// Taylor shift) and evaluate exactly until some partial of total order s is
// nonzero at the point.
unsigned ord_by_derivatives(const Polynomial& p, const CVector& at) {
    std::vector<RationalComplex> pt;
    for (const auto& z : at) pt.emplace_back(z);
    std::vector<Polynomial> level{p};
    for (unsigned s = 0; s <= p.total_degree(); ++s) {
        for (const auto& q : level)
            if (!q.is_zero() && !q.eval_exact(pt).is_zero()) return s;
        std::vector<Polynomial> next;
        for (const auto& q : level)
            for (int v = 0; v < p.nvars(); ++v) next.push_back(q.derivative(v));
        level = std::move(next);
    }
    return p.total_degree() + 1;  // vanishes to all orders: impossible for nonzero p
}

}  // namespace

TEST_CASE("vanishing order basics") {
    Polynomial f(2, {{{2, 1}, Complex(1, 0)}});  // z1^2 z2
    CHECK(ord_at(f, {Complex(0, 0), Complex(0, 0)}) == 3);
    CHECK(ord_at(f, {Complex(0, 0), Complex(5, 0)}) == 2);
    CHECK(ord_at(f, {Complex(1, 0), Complex(0, 0)}) == 1);
    CHECK(ord_at(f, {Complex(1, 0), Complex(1, 0)}) == 0);

    Polynomial g(1, {{{2}, Complex(1, 0)}, {{1}, Complex(-2, 0)}, {{0}, Complex(1, 0)}});
    CHECK(ord_at(g, {Complex(1, 0)}) == 2);  // (z-1)^2 at 1

    CHECK_THROWS_AS(ord_at(Polynomial(1, {}), {Complex(0, 0)}), InputError);
}

TEST_CASE("taylor shift is exact for dyadic inputs") {
    // (z - 0.25)^3 expanded; the shift to 0.25 recovers the pure cube.
    Polynomial f(1, {{{3}, Complex(1, 0)},
                     {{2}, Complex(-0.75, 0)},
                     {{1}, Complex(0.1875, 0)},
                     {{0}, Complex(-0.015625, 0)}});
    CHECK(ord_at(f, {Complex(0.25, 0)}) == 3);
}

TEST_CASE("relative threshold absorbs float noise in the shift point") {
    // 0.1 + 0.2 != 0.3 in binary; the exact shift leaves a ~5e-17 residue
    // that the relative threshold treats as zero.
    Polynomial f(1, {{{1}, Complex(1, 0)}, {{0}, Complex(-0.3, 0)}});
    CHECK(ord_at(f, {Complex(0.1 + 0.2, 0)}) == 1);
}

TEST_CASE("order agrees with the derivative oracle on random polynomials") {
    auto rng = substream(48, 0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<PolyTerm> terms;
        const int nterms = 1 + static_cast<int>(rng() % 5);
        for (int t = 0; t < nterms; ++t) {
            PolyTerm term;
            term.powers = {static_cast<unsigned>(rng() % 4), static_cast<unsigned>(rng() % 4)};
            // Dyadic coefficients keep every evaluation exact.
            term.coeff = Complex((static_cast<int>(rng() % 9) - 4) * 0.25,
                                 (static_cast<int>(rng() % 9) - 4) * 0.25);
            terms.push_back(std::move(term));
        }
        Polynomial p(2, terms);
        if (p.is_zero()) continue;
        CVector at{Complex((static_cast<int>(rng() % 5) - 2) * 0.5, 0),
                   Complex((static_cast<int>(rng() % 5) - 2) * 0.5, 0)};
        CHECK(ord_at(p, at) == ord_by_derivatives(p, at));
    }
}

TEST_CASE("polynomial evaluation, exact and floating") {
    Polynomial f(2, {{{1, 1}, Complex(2, 0)}, {{0, 0}, Complex(0, 1)}});
    const Complex v = f.eval({Complex(0.5, 0), Complex(0.25, 0)});
    CHECK(v.real() == Catch::Approx(0.25));
    CHECK(v.imag() == Catch::Approx(1.0));

    std::vector<RationalComplex> pt{RationalComplex(Complex(0.5, 0)),
                                    RationalComplex(Complex(0.25, 0))};
    const RationalComplex ve = f.eval_exact(pt);
    CHECK(ve.re == Rational(1, 4));
    CHECK(ve.im == Rational(1));
}
