// Exact engine: Lelong numbers and singularity exponents in rational
// arithmetic.
//
// The monomial class (MonomialLog atoms under Max/Sum/Scale, plus
// coordinate/diagonal substitution pullbacks) reduces to a Newton
// polyhedron: Max unions generator sets, Sum takes Minkowski sums, Scale
// multiplies, and a point with nonzero coordinates eliminates those
// variables (their factors are O(1) near the point). On the polyhedron,
//   nu  = min over generators of the surviving exponent sum,
//   lct = 1 / sigma*   with sigma* = min { s : s*(1,..,1) in hull + orthant },
// the latter an exact rational LP.
//
// Outside the monomial class the engine applies structural rules: vanishing
// orders for log|poly|, the radial closed forms nu = nu_inf and lct = n/nu,
// min/sum/scaling for Max/Sum/Scale, invariance of the Lelong number under
// the difference pullback and unitary symmetrization at points with zero
// trailing block, the sandwich certificate for symmetrized towers, and the
// Skoda bounds [1/nu, N/nu] as a fallback interval. Points no rule covers
// yield a numeric-required signal, not a guess.

#pragma once

#include "lelong/estimate.hpp"
#include "lelong/expr.hpp"
#include "lelong/simplex.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace lelong {

// -- Newton polyhedron ---------------------------------------------------------

struct NewtonPolyhedron {
    int dim = 0;
    std::vector<std::vector<Rational>> generators;  // each of length dim

    // Exact membership of q in convexhull(generators) + nonnegative orthant.
    bool contains(const std::vector<Rational>& q) const {
        const int g = static_cast<int>(generators.size());
        const int nvars = g + dim;  // lambda, slacks
        std::vector<std::vector<Rational>> a(dim + 1, std::vector<Rational>(nvars, Rational(0)));
        std::vector<Rational> b(dim + 1, Rational(0));
        for (int r = 0; r < dim; ++r) {
            for (int i = 0; i < g; ++i) a[r][i] = generators[i][r];
            a[r][g + r] = 1;
            b[r] = q[r];
        }
        for (int i = 0; i < g; ++i) a[dim][i] = 1;
        b[dim] = 1;
        const std::vector<Rational> cost(nvars, Rational(0));
        return solve_lp(std::move(a), std::move(b), cost).status == LpSolution::Status::optimal;
    }

    // min { sigma : sigma*(1,...,1) in the region }, exact.
    Rational sigma_star() const {
        const int g = static_cast<int>(generators.size());
        const int nvars = g + 1 + dim;  // lambda, sigma, slacks
        std::vector<std::vector<Rational>> a(dim + 1, std::vector<Rational>(nvars, Rational(0)));
        std::vector<Rational> b(dim + 1, Rational(0));
        for (int r = 0; r < dim; ++r) {
            for (int i = 0; i < g; ++i) a[r][i] = generators[i][r];
            a[r][g] = -1;      // - sigma
            a[r][g + 1 + r] = 1;  // slack
        }
        for (int i = 0; i < g; ++i) a[dim][i] = 1;
        b[dim] = 1;
        std::vector<Rational> cost(nvars, Rational(0));
        cost[g] = 1;
        const auto sol = solve_lp(std::move(a), std::move(b), cost);
        // Always feasible (pick any single generator and sigma = max entry).
        return sol.objective;
    }
};

// -- monomial hull collection ----------------------------------------------------

namespace detail {

struct MonomialHull {
    bool bottom = false;                          // identically -inf
    std::vector<std::vector<Rational>> gens;      // over the node's variables
};

inline constexpr std::size_t kHullGeneratorCap = 4096;

// Matrix is exactly [I | -I] (the difference map z - w)?
inline bool is_difference_matrix(const CMatrix& m) {
    const int rows = static_cast<int>(m.size());
    if (rows == 0) return false;
    const int cols = static_cast<int>(m.front().size());
    if (cols != 2 * rows) return false;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            Complex want(0.0, 0.0);
            if (j == i) want = Complex(1.0, 0.0);
            if (j == rows + i) want = Complex(-1.0, 0.0);
            if (m[i][j] != want) return false;
        }
    return true;
}

inline bool has_orthonormal_columns(const CMatrix& m, double tol = 1e-12) {
    if (m.empty()) return false;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m.front().size());
    for (int a = 0; a < cols; ++a)
        for (int b = a; b < cols; ++b) {
            Complex dot(0.0, 0.0);
            for (int r = 0; r < rows; ++r) dot += std::conj(m[r][a]) * m[r][b];
            const Complex want = a == b ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            if (std::abs(dot - want) > tol) return false;
        }
    return true;
}

inline bool is_zero_offset(const CVector& off) {
    for (const auto& z : off)
        if (z != Complex(0.0, 0.0)) return false;
    return true;
}

// Generator-set semantics of the monomial class with substitution pullbacks.
// Returns nullopt when the subtree is outside the class.
inline std::optional<MonomialHull> monomial_hull(const PshExpr& e) {
    switch (e.kind()) {
        case NodeKind::monomial_log: {
            const auto& d = e.as<MonomialLogData>();
            MonomialHull h;
            std::vector<Rational> g;
            g.reserve(d.exponents.size());
            for (const auto& a : d.exponents) g.push_back(d.coeff * a);
            h.gens.push_back(std::move(g));
            return h;
        }
        case NodeKind::max: {
            MonomialHull h;
            bool any = false;
            for (const auto& c : e.children()) {
                auto ch = monomial_hull(c);
                if (!ch) return std::nullopt;
                if (ch->bottom) continue;  // -inf children drop out of a max
                any = true;
                for (auto& g : ch->gens) h.gens.push_back(std::move(g));
            }
            h.bottom = !any;
            return h;
        }
        case NodeKind::sum: {
            MonomialHull h;
            bool first = true;
            for (const auto& c : e.children()) {
                auto ch = monomial_hull(c);
                if (!ch) return std::nullopt;
                if (ch->bottom) {
                    h.bottom = true;  // -inf absorbs through sums
                    h.gens.clear();
                    return h;
                }
                if (first) {
                    h.gens = std::move(ch->gens);
                    first = false;
                    continue;
                }
                if (h.gens.size() * ch->gens.size() > kHullGeneratorCap) return std::nullopt;
                std::vector<std::vector<Rational>> mink;
                mink.reserve(h.gens.size() * ch->gens.size());
                for (const auto& ga : h.gens)
                    for (const auto& gb : ch->gens) {
                        std::vector<Rational> s(ga.size());
                        for (std::size_t j = 0; j < ga.size(); ++j) s[j] = ga[j] + gb[j];
                        mink.push_back(std::move(s));
                    }
                h.gens = std::move(mink);
            }
            return h;
        }
        case NodeKind::scale: {
            auto ch = monomial_hull(e.children().front());
            if (!ch) return std::nullopt;
            const auto& f = e.as<ScaleData>().factor;
            for (auto& g : ch->gens)
                for (auto& v : g) v *= f;
            return ch;
        }
        case NodeKind::linear_pullback: {
            const auto& d = e.as<LinearPullbackData>();
            if (!is_zero_offset(d.offset)) return std::nullopt;
            const int rows = static_cast<int>(d.matrix.size());
            const int cols = e.arity();
            // Substitution shape: every child variable maps to at most one
            // slice variable (or is pinned to zero).
            std::vector<int> target(rows, -1);  // -1: pinned to zero
            for (int i = 0; i < rows; ++i) {
                int nz = -1;
                for (int j = 0; j < cols; ++j) {
                    if (d.matrix[i][j] != Complex(0.0, 0.0)) {
                        if (nz >= 0) return std::nullopt;
                        nz = j;
                    }
                }
                target[i] = nz;
            }
            auto ch = monomial_hull(e.children().front());
            if (!ch || ch->bottom) return ch;
            MonomialHull h;
            for (const auto& g : ch->gens) {
                std::vector<Rational> out(cols, Rational(0));
                bool dead = false;
                for (int i = 0; i < rows; ++i) {
                    if (g[i] == 0) continue;
                    if (target[i] < 0) {
                        dead = true;  // monomial hits a coordinate pinned to 0
                        break;
                    }
                    out[target[i]] += g[i];
                }
                if (!dead) h.gens.push_back(std::move(out));
            }
            h.bottom = h.gens.empty();
            return h;
        }
        default:
            return std::nullopt;
    }
}

}  // namespace detail

// Strict monomial-class polyhedron (MonomialLog/Max/Sum/Scale only).
inline NewtonPolyhedron newton_polyhedron(const PshExpr& e) {
    switch (e.kind()) {
        case NodeKind::monomial_log:
        case NodeKind::max:
        case NodeKind::sum:
        case NodeKind::scale:
            break;
        default:
            throw ClassError("newton_polyhedron: expression is not in the monomial class");
    }
    for (const auto& c : e.children()) (void)newton_polyhedron(c);  // recursive class check
    auto hull = detail::monomial_hull(e);
    if (!hull || hull->bottom)
        throw ClassError("newton_polyhedron: expression is not in the monomial class");
    return NewtonPolyhedron{e.arity(), std::move(hull->gens)};
}

// -- Lelong numbers ---------------------------------------------------------------

namespace detail {

struct NuResult {
    enum class State { value, bottom, uncovered } state = State::uncovered;
    Rational v{0};

    static NuResult value_of(Rational r) { return {State::value, std::move(r)}; }
    static NuResult bottom() { return {State::bottom, Rational(0)}; }
    static NuResult uncovered() { return {State::uncovered, Rational(0)}; }
};

inline bool point_is_zero(std::span<const Complex> pt) {
    for (const auto& z : pt)
        if (z != Complex(0.0, 0.0)) return false;
    return true;
}

// nu from a monomial hull at a point: eliminate nonzero coordinates, then the
// minimum surviving exponent sum over generators.
inline NuResult hull_nu_at(const MonomialHull& h, std::span<const Complex> pt) {
    if (h.bottom) return NuResult::bottom();
    bool first = true;
    Rational best{0};
    for (const auto& g : h.gens) {
        Rational s{0};
        for (std::size_t j = 0; j < g.size(); ++j)
            if (pt[j] == Complex(0.0, 0.0)) s += g[j];
        if (first || s < best) {
            best = s;
            first = false;
        }
    }
    return NuResult::value_of(best);
}

inline NuResult nu_rec(const PshExpr& e, std::span<const Complex> pt) {
    switch (e.kind()) {
        case NodeKind::monomial_log: {
            const auto& d = e.as<MonomialLogData>();
            Rational s{0};
            for (int j = 0; j < e.arity(); ++j)
                if (pt[j] == Complex(0.0, 0.0)) s += d.exponents[j];
            return NuResult::value_of(d.coeff * s);
        }
        case NodeKind::log_abs_poly: {
            const auto& d = e.as<LogAbsPolyData>();
            return NuResult::value_of(
                Rational(ord_at(d.poly, CVector(pt.begin(), pt.end()))));
        }
        case NodeKind::radial: {
            const auto& d = e.as<RadialData>();
            return NuResult::value_of(point_is_zero(pt) ? d.nu_inf : Rational(0));
        }
        case NodeKind::max: {
            // nu(max u_i) = min nu(u_i); -inf children drop out.
            bool any = false, first = true;
            Rational best{0};
            for (const auto& c : e.children()) {
                auto r = nu_rec(c, pt);
                if (r.state == NuResult::State::uncovered) return NuResult::uncovered();
                if (r.state == NuResult::State::bottom) continue;
                any = true;
                if (first || r.v < best) {
                    best = r.v;
                    first = false;
                }
            }
            return any ? NuResult::value_of(best) : NuResult::bottom();
        }
        case NodeKind::sum: {
            Rational s{0};
            for (const auto& c : e.children()) {
                auto r = nu_rec(c, pt);
                if (r.state == NuResult::State::uncovered) return NuResult::uncovered();
                if (r.state == NuResult::State::bottom) return NuResult::bottom();
                s += r.v;
            }
            return NuResult::value_of(s);
        }
        case NodeKind::scale: {
            auto r = nu_rec(e.children().front(), pt);
            if (r.state == NuResult::State::value) r.v *= e.as<ScaleData>().factor;
            return r;
        }
        case NodeKind::linear_pullback: {
            const auto& d = e.as<LinearPullbackData>();
            const PshExpr& child = e.children().front();
            if (is_zero_offset(d.offset)) {
                // Difference pullback at (z0, 0): nu equals nu of the child at z0.
                if (is_difference_matrix(d.matrix)) {
                    const int m = static_cast<int>(d.matrix.size());
                    if (point_is_zero(pt.subspan(m))) return nu_rec(child, pt.subspan(0, m));
                }
                // Isometric pullback of a radial function stays radial.
                if (child.kind() == NodeKind::radial && has_orthonormal_columns(d.matrix)) {
                    const auto& rd = child.as<RadialData>();
                    return NuResult::value_of(point_is_zero(pt) ? rd.nu_inf : Rational(0));
                }
            }
            // Coordinate/diagonal substitution of a monomial subtree.
            if (auto h = monomial_hull(e)) return hull_nu_at(*h, pt);
            return NuResult::uncovered();
        }
        case NodeKind::unitary_sup: {
            const auto& d = e.as<UnitarySupData>();
            if (point_is_zero(pt.subspan(d.base_arity)))
                return nu_rec(e.children().front(), pt);
            return NuResult::uncovered();
        }
    }
    return NuResult::uncovered();
}

}  // namespace detail

inline InvariantEstimate lelong_exact(const PshExpr& e, const CVector& point) {
    if (static_cast<int>(point.size()) != e.arity())
        throw InputError("lelong_exact: point arity mismatch", "arity-mismatch");
    const auto r = detail::nu_rec(e, point);
    switch (r.state) {
        case detail::NuResult::State::value:
            return InvariantEstimate::exact_point(InvariantKind::lelong, Method::exact_rule, r.v);
        case detail::NuResult::State::bottom:
            return InvariantEstimate::unavailable(InvariantKind::lelong,
                                                  "degenerate: identically -inf near the point");
        case detail::NuResult::State::uncovered:
            break;
    }
    return InvariantEstimate::unavailable(InvariantKind::lelong,
                                          "no exact rule covers this expression/point");
}

// Skoda bounds: for nu > 0 in ambient dimension N, lct lies in [1/nu, N/nu].
inline InvariantEstimate skoda_sandwich(const Rational& nu, int ambient_dim) {
    if (ambient_dim < 1) throw InputError("skoda_sandwich: ambient_dim must be positive");
    if (nu < 0) throw InputError("skoda_sandwich: nu must be nonnegative");
    if (nu == 0)
        return InvariantEstimate::infinity(InvariantKind::lct, Method::interval_certificate,
                                           "nu = 0: unbounded");
    return InvariantEstimate::exact_interval(InvariantKind::lct, Method::interval_certificate,
                                             Rational(1) / nu, Rational(ambient_dim) / nu,
                                             "Skoda sandwich");
}

namespace detail {

// Recognizes unitary_sup over a chain of difference pullbacks; returns the
// base expression and the tower depth when the shape matches.
inline std::optional<std::pair<PshExpr, int>> symmetrized_tower_shape(const PshExpr& e) {
    if (e.kind() != NodeKind::unitary_sup) return std::nullopt;
    const auto& d = e.as<UnitarySupData>();
    PshExpr cur = e.children().front();
    int k = 0;
    while (cur.kind() == NodeKind::linear_pullback) {
        const auto& pd = cur.as<LinearPullbackData>();
        if (!is_zero_offset(pd.offset) || !is_difference_matrix(pd.matrix)) break;
        cur = cur.children().front();
        ++k;
    }
    if (k == 0) return std::nullopt;
    if (cur.arity() != d.base_arity) return std::nullopt;
    if ((1 << k) * d.base_arity != d.base_arity + d.block_arity) return std::nullopt;
    return std::make_pair(cur, k);
}

}  // namespace detail

inline InvariantEstimate lct_exact(const PshExpr& e, const CVector& point) {
    if (static_cast<int>(point.size()) != e.arity())
        throw InputError("lct_exact: point arity mismatch", "arity-mismatch");

    // Monomial class (with substitutions): exact LP on the eliminated polyhedron.
    if (auto hull = detail::monomial_hull(e)) {
        if (hull->bottom)
            return InvariantEstimate::exact_point(InvariantKind::lct, Method::exact_rule,
                                                  Rational(0),
                                                  "degenerate: identically -inf near the point");
        std::vector<int> zero_coords;
        for (int j = 0; j < e.arity(); ++j)
            if (point[j] == Complex(0.0, 0.0)) zero_coords.push_back(j);
        if (zero_coords.empty())
            return InvariantEstimate::infinity(InvariantKind::lct, Method::exact_rule,
                                               "locally bounded at the point");
        NewtonPolyhedron np;
        np.dim = static_cast<int>(zero_coords.size());
        for (const auto& g : hull->gens) {
            std::vector<Rational> r(np.dim);
            for (int j = 0; j < np.dim; ++j) r[j] = g[zero_coords[j]];
            np.generators.push_back(std::move(r));
        }
        const Rational sigma = np.sigma_star();
        if (sigma == 0)
            return InvariantEstimate::infinity(InvariantKind::lct, Method::lp,
                                               "bounded generator dominates: sigma* = 0");
        return InvariantEstimate::exact_point(InvariantKind::lct, Method::lp,
                                              Rational(1) / sigma);
    }

    switch (e.kind()) {
        case NodeKind::radial: {
            const auto& d = e.as<RadialData>();
            if (!detail::point_is_zero(point))
                return InvariantEstimate::infinity(InvariantKind::lct, Method::exact_rule,
                                                   "locally bounded at the point");
            if (d.nu_inf == 0)
                return InvariantEstimate::infinity(InvariantKind::lct, Method::closed_form,
                                                   "nu_inf = 0: locally bounded");
            return InvariantEstimate::exact_point(InvariantKind::lct, Method::closed_form,
                                                  Rational(e.arity()) / d.nu_inf,
                                                  "radial closed form n/nu");
        }
        case NodeKind::scale: {
            auto child = lct_exact(e.children().front(), point);
            const auto& f = e.as<ScaleData>().factor;
            if (!child.available() || child.infinite) return child;
            child.rlo /= f;
            child.rhi /= f;
            return child;
        }
        case NodeKind::linear_pullback: {
            const auto& d = e.as<LinearPullbackData>();
            const PshExpr& child = e.children().front();
            if (child.kind() == NodeKind::radial && detail::is_zero_offset(d.offset) &&
                detail::has_orthonormal_columns(d.matrix)) {
                const auto& rd = child.as<RadialData>();
                if (!detail::point_is_zero(point))
                    return InvariantEstimate::infinity(InvariantKind::lct, Method::exact_rule,
                                                       "locally bounded at the point");
                if (rd.nu_inf == 0)
                    return InvariantEstimate::infinity(InvariantKind::lct, Method::closed_form,
                                                       "nu_inf = 0: locally bounded");
                return InvariantEstimate::exact_point(InvariantKind::lct, Method::closed_form,
                                                      Rational(e.arity()) / rd.nu_inf,
                                                      "radial closed form d/nu on the slice");
            }
            break;
        }
        case NodeKind::log_abs_poly: {
            const auto& d = e.as<LogAbsPolyData>();
            const unsigned ord = ord_at(d.poly, point);
            if (ord == 0)
                return InvariantEstimate::infinity(InvariantKind::lct, Method::exact_rule,
                                                   "poly nonzero at the point: locally bounded");
            auto est = skoda_sandwich(Rational(ord), e.arity());
            est.note = "Skoda sandwich from vanishing order";
            return est;
        }
        case NodeKind::unitary_sup: {
            // Symmetrized difference tower at (z0, 0): sandwich certificate.
            if (auto shape = detail::symmetrized_tower_shape(e)) {
                const auto& d = e.as<UnitarySupData>();
                if (detail::point_is_zero(
                        std::span<const Complex>(point).subspan(d.base_arity))) {
                    const auto& [base, k] = *shape;
                    CVector z0(point.begin(), point.begin() + d.base_arity);
                    const auto nu = lelong_exact(base, z0);
                    if (nu.available()) {
                        if (nu.rlo == 0)
                            return InvariantEstimate::infinity(
                                InvariantKind::lct, Method::interval_certificate,
                                "base has nu = 0 at the point: locally bounded");
                        return InvariantEstimate::exact_interval(
                            InvariantKind::lct, Method::interval_certificate,
                            Rational(d.block_arity) / nu.rlo,
                            Rational(d.block_arity + d.base_arity) / nu.rlo,
                            "symmetrized-tower sandwich [(2^k-1)n/nu, 2^k n/nu]");
                    }
                }
            }
            break;
        }
        default:
            break;
    }

    // Fallback: Skoda interval from an exact Lelong number, when known.
    const auto nu = lelong_exact(e, point);
    if (nu.available()) {
        if (nu.rlo == 0)
            return InvariantEstimate::infinity(InvariantKind::lct, Method::exact_rule,
                                               "nu = 0: locally bounded in this class");
        return skoda_sandwich(nu.rlo, e.arity());
    }
    return InvariantEstimate::unavailable(InvariantKind::lct,
                                          "no exact rule covers this expression/point");
}

}  // namespace lelong
