#include "lelong/newton.hpp"

#include "corpus.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace lelong;
using lelong::testing::mono;

namespace {

const CVector o1{Complex(0, 0)};
const CVector o2{Complex(0, 0), Complex(0, 0)};
const CVector o3{Complex(0, 0), Complex(0, 0), Complex(0, 0)};

// Independent sigma* oracle for two-dimensional generator sets: the optimum
// of min_lambda max(sum lambda_i a_i) over the simplex is attained either at
// a vertex or where two coordinates of the combination tie, so scanning all
// generator pairs (with the tie solved exactly) brackets it.
Rational brute_sigma_star_2d(const std::vector<std::vector<Rational>>& gens) {
    auto sigma_of = [](const std::vector<Rational>& v) { return std::max(v[0], v[1]); };
    Rational best = sigma_of(gens.front());
    for (const auto& g : gens) best = std::min(best, sigma_of(g));
    for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const auto &a = gens[i], &b = gens[j];
            // combination lambda a + (1-lambda) b with equal coordinates
            const Rational den = (a[0] - a[1]) - (b[0] - b[1]);
            if (den == 0) continue;
            const Rational lam = (b[1] - b[0]) / den;
            if (lam < 0 || lam > 1) continue;
            const std::vector<Rational> mix{lam * a[0] + (1 - lam) * b[0],
                                            lam * a[1] + (1 - lam) * b[1]};
            best = std::min(best, sigma_of(mix));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("newton polyhedron construction") {
    auto np = newton_polyhedron(mono({2, 1}));
    REQUIRE(np.generators.size() == 1);
    CHECK(np.generators[0] == std::vector<Rational>{Rational(2), Rational(1)});

    auto u = newton_polyhedron(PshExpr::max_of({mono({2, 1}), mono({0, 3})}));
    CHECK(u.generators.size() == 2);

    auto s = newton_polyhedron(PshExpr::sum_of({mono({1, 0}), mono({0, 1})}));
    REQUIRE(s.generators.size() == 1);
    CHECK(s.generators[0] == std::vector<Rational>{Rational(1), Rational(1)});

    CHECK_THROWS_AS(newton_polyhedron(PshExpr::radial(1, {}, Rational(1))), ClassError);
}

TEST_CASE("polyhedron membership is exact") {
    auto np = newton_polyhedron(PshExpr::max_of({mono({2, 1}), mono({0, 3})}));
    CHECK(np.contains({Rational(2), Rational(1)}));
    CHECK(np.contains({Rational(5), Rational(7)}));           // deep inside the orthant shift
    CHECK(np.contains({Rational(1), Rational(2)}));           // on the segment
    CHECK_FALSE(np.contains({Rational(1), Rational(1)}));     // below the hull
    CHECK_FALSE(np.contains({Rational(0), Rational(0)}));
}

TEST_CASE("sigma* frozen values and the 2d brute-force oracle") {
    CHECK(newton_polyhedron(mono({2, 1})).sigma_star() == Rational(2));
    CHECK(newton_polyhedron(mono({1, 1})).sigma_star() == Rational(1));
    CHECK(newton_polyhedron(PshExpr::max_of({mono({1, 0}), mono({0, 1})})).sigma_star() ==
          Rational(1, 2));
    CHECK(newton_polyhedron(PshExpr::max_of({mono({2, 1}), mono({0, 3})})).sigma_star() ==
          Rational(3, 2));

    auto rng = substream(49, 0);
    for (int trial = 0; trial < 60; ++trial) {
        NewtonPolyhedron np;
        np.dim = 2;
        const int g = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < g; ++i)
            np.generators.push_back(
                {Rational(static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 3)),
                 Rational(static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 3))});
        CHECK(np.sigma_star() == brute_sigma_star_2d(np.generators));
    }
}

TEST_CASE("redundant generators never change sigma*") {
    auto rng = substream(50, 0);
    for (int trial = 0; trial < 30; ++trial) {
        NewtonPolyhedron np;
        np.dim = 3;
        const int g = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < g; ++i)
            np.generators.push_back({Rational(static_cast<int>(rng() % 5)),
                                     Rational(static_cast<int>(rng() % 5)),
                                     Rational(static_cast<int>(rng() % 5))});
        const Rational base = np.sigma_star();

        NewtonPolyhedron padded = np;
        padded.generators.push_back(np.generators.front());  // duplicate
        auto dominated = np.generators.back();
        for (auto& v : dominated) v += Rational(1 + static_cast<int>(rng() % 3));
        padded.generators.push_back(dominated);  // inside hull + orthant
        CHECK(padded.sigma_star() == base);
    }
}

TEST_CASE("lelong exact rules") {
    CHECK(lelong_exact(mono({2, 1}), o2).rlo == Rational(3));
    CHECK(lelong_exact(mono({2, 1}), {Complex(0, 0), Complex(5, 0)}).rlo == Rational(2));
    CHECK(lelong_exact(mono({2, 1}), {Complex(1, 0), Complex(0, 0)}).rlo == Rational(1));
    CHECK(lelong_exact(mono({2, 1}), {Complex(1, 0), Complex(1, 0)}).rlo == Rational(0));

    CHECK(lelong_exact(PshExpr::max_of({mono({2, 1}), mono({0, 3})}), o2).rlo == Rational(3));
    CHECK(lelong_exact(PshExpr::sum_of({mono({1, 0}), mono({0, 1})}), o2).rlo == Rational(2));

    auto rad = PshExpr::radial(2, {}, Rational(5, 2));
    CHECK(lelong_exact(rad, o2).rlo == Rational(5, 2));
    CHECK(lelong_exact(rad, {Complex(0.3, 0), Complex(0, 0)}).rlo == Rational(0));

    auto lap = PshExpr::log_abs_poly(Polynomial(2, {{{2, 1}, Complex(1, 0)}}));
    CHECK(lelong_exact(lap, o2).rlo == Rational(3));

    // difference pullback and symmetrization rules at (z, 0)
    auto e = PshExpr::monomial_log(Rational(3), {Rational(1)});
    auto t = tower_pullback(e, 1);
    auto p = symmetrized_tower(e, 1);
    CHECK(lelong_exact(t, o2).rlo == Rational(3));
    CHECK(lelong_exact(p, o2).rlo == Rational(3));
    CHECK(lelong_exact(p, {Complex(0.5, 0), Complex(0, 0)}).rlo == Rational(0));
    // off the zero block no rule applies
    CHECK_FALSE(lelong_exact(p, {Complex(0.5, 0), Complex(0.1, 0)}).available());
}

TEST_CASE("lct exact rules") {
    CHECK(lct_exact(PshExpr::max_of({mono({1, 0}), mono({0, 1})}), o2).rlo == Rational(2));
    CHECK(lct_exact(mono({1, 1}), o2).rlo == Rational(1));
    CHECK(lct_exact(mono({2, 1}), o2).rlo == Rational(1, 2));
    CHECK(lct_exact(mono({2, 1}), o2).method == Method::lp);

    auto rad = PshExpr::radial(2, {}, Rational(1));
    const auto r = lct_exact(rad, o2);
    CHECK(r.method == Method::closed_form);
    CHECK(r.rlo == Rational(2));

    auto rad0 = PshExpr::radial(2, {{0.0, 1.0}}, Rational(0));
    CHECK(lct_exact(rad0, o2).infinite);

    // away from the singular locus everything is locally bounded
    CHECK(lct_exact(mono({2, 1}), {Complex(1, 0), Complex(2, 0)}).infinite);

    // scaling: lct(c phi) = lct(phi)/c
    CHECK(lct_exact(scale(mono({1, 1}), Rational(2)), o2).rlo == Rational(1, 2));

    // log|poly| falls back to the Skoda interval from the vanishing order
    auto lap = PshExpr::log_abs_poly(
        Polynomial(2, {{{2, 1}, Complex(1, 0)}, {{0, 3}, Complex(1, 0)}}));
    const auto s = lct_exact(lap, o2);
    CHECK(s.method == Method::interval_certificate);
    CHECK(s.rlo == Rational(1, 3));
    CHECK(s.rhi == Rational(2, 3));
    CHECK(lct_exact(PshExpr::log_abs_poly(Polynomial(1, {{{0}, Complex(2, 0)}})), o1).infinite);
}

TEST_CASE("symmetrized tower certificate") {
    auto e = PshExpr::monomial_log(Rational(2), {Rational(1)});
    auto p1 = symmetrized_tower(e, 1);
    const auto cert = lct_exact(p1, o2);
    REQUIRE(cert.method == Method::interval_certificate);
    CHECK(cert.rlo == Rational(1, 2));
    CHECK(cert.rhi == Rational(1));

    // scaled tower: the certificate scales by the factor
    const auto scaled_cert = lct_exact(scale(p1, Rational(2)), o2);
    CHECK(scaled_cert.rlo == Rational(1, 4));
    CHECK(scaled_cert.rhi == Rational(1, 2));

    // smooth base point: locally bounded
    CHECK(lct_exact(p1, {Complex(0.5, 0), Complex(0, 0)}).infinite);

    // k = 2 in one variable: block arity 3, bounds [3/nu, 4/nu]
    auto p2 = symmetrized_tower(e, 2);
    CVector o4(4, Complex(0, 0));
    const auto cert2 = lct_exact(p2, o4);
    CHECK(cert2.rlo == Rational(3, 2));
    CHECK(cert2.rhi == Rational(2));
}

TEST_CASE("skoda sandwich") {
    const auto s = skoda_sandwich(Rational(3), 2);
    CHECK(s.rlo == Rational(1, 3));
    CHECK(s.rhi == Rational(2, 3));
    CHECK(s.rlo <= Rational(1, 2));
    CHECK(Rational(1, 2) <= s.rhi);  // contains lct(z^(2,1))

    const auto unit = skoda_sandwich(Rational(1), 5);
    CHECK(unit.rlo == Rational(1));
    CHECK(unit.rhi == Rational(5));

    const auto tight = skoda_sandwich(Rational(2), 1);
    CHECK(tight.rlo == tight.rhi);
    CHECK(tight.rlo == Rational(1, 2));

    CHECK(skoda_sandwich(Rational(0), 3).infinite);
    CHECK_THROWS_AS(skoda_sandwich(Rational(-1), 3), InputError);
}

TEST_CASE("scaling laws over random monomial instances") {
    auto rng = substream(51, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        std::vector<Rational> exps;
        bool nonzero = false;
        for (int j = 0; j < n; ++j) {
            const int a = static_cast<int>(rng() % 4);
            nonzero = nonzero || a > 0;
            exps.emplace_back(a);
        }
        if (!nonzero) exps[0] = Rational(1);
        auto e = PshExpr::monomial_log(Rational(1 + static_cast<int>(rng() % 3)), exps);
        const Rational c(1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 3));
        CVector origin(n, Complex(0, 0));

        CHECK(lelong_exact(scale(e, c), origin).rlo == c * lelong_exact(e, origin).rlo);
        const auto lct = lct_exact(e, origin);
        const auto lct_scaled = lct_exact(scale(e, c), origin);
        REQUIRE(lct.exact);
        CHECK(lct_scaled.rlo == lct.rlo / c);
    }
}

TEST_CASE("enlarging a max never raises nu nor lowers lct") {
    auto rng = substream(52, 0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<PshExpr> children;
        const int g = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < g; ++i)
            children.push_back(mono({static_cast<int>(rng() % 4), static_cast<int>(rng() % 4)}));
        auto base = PshExpr::max_of(children);
        children.push_back(mono({static_cast<int>(rng() % 4), static_cast<int>(rng() % 4)}));
        auto bigger = PshExpr::max_of(children);

        CHECK(lelong_exact(bigger, o2).rlo <= lelong_exact(base, o2).rlo);
        const auto ca = lct_exact(base, o2);
        const auto cb = lct_exact(bigger, o2);
        if (!ca.infinite && !cb.infinite) {
            CHECK(cb.rlo >= ca.rlo);
        } else {
            CHECK(cb.infinite);  // bounded stays bounded under max growth
        }
    }
}

TEST_CASE("sandwich holds across the corpus") {
    for (const auto& entry : lelong::testing::monomial_corpus()) {
        CVector origin(entry.expr.arity(), Complex(0, 0));
        const auto nu = lelong_exact(entry.expr, origin);
        const auto c = lct_exact(entry.expr, origin);
        REQUIRE(nu.exact);
        REQUIRE(c.exact);
        CHECK(nu.rlo == entry.nu);
        CHECK(c.rlo == entry.lct);
        CHECK(c.rlo >= Rational(1) / nu.rlo);
        CHECK(c.rlo <= Rational(entry.expr.arity()) / nu.rlo);
    }
}

TEST_CASE("restricted monomials keep exact engines") {
    // log|z1 z2| on the diagonal: nu 2 -> 2, lct 1 -> 1/2.
    auto e = mono({1, 1});
    SliceMap diag;
    diag.base = o2;
    diag.directions = {{Complex(1, 0)}, {Complex(1, 0)}};
    auto r = restrict_to_slice(e, diag);
    CHECK(lelong_exact(r, o1).rlo == Rational(2));
    CHECK(lct_exact(r, o1).rlo == Rational(1, 2));

    // max{log|z1|, log|z2|} on the plane z2 = 0 restricts to log|z1|.
    auto corner = PshExpr::max_of({mono({1, 0}), mono({0, 1})});
    SliceMap plane;
    plane.base = o2;
    plane.directions = {{Complex(1, 0)}, {Complex(0, 0)}};
    auto rc = restrict_to_slice(corner, plane);
    CHECK(lelong_exact(rc, o1).rlo == Rational(1));
    CHECK(lct_exact(rc, o1).rlo == Rational(1));
}
