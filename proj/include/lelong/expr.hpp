// Expression trees for structured plurisubharmonic functions.
//
// Atoms:
//   MonomialLog  c * sum_j a_j log|z_j|          (c > 0, a_j >= 0 rational)
//   LogAbsPoly   log|p(z)|                        (p a complex polynomial)
//   Radial       chi(log ||z||)                   (chi piecewise-linear convex
//                increasing, limiting slope nu_inf at t -> -inf)
// Combinators: Max, Sum, Scale, LinearPullback (matrix plus optional affine
// offset), UnitarySup (supremum of child(z, g w) over unitaries g acting on
// the trailing w block).
//
// Expressions are immutable after construction; eval is pure and safe for
// concurrent calls. Values live in [-inf, +inf): -inf propagates through Sum
// (absorbing) and Scale, Max drops -inf children unless all are -inf, and
// +inf never occurs.
//
// The UnitarySup value for block arity 1 is an exact circle supremum (dense
// grid plus golden-section refinement to ~1e-10 relative). For larger blocks
// it is a sampled supremum over Haar and diagonal-phase unitaries including
// the identity, hence a deterministic lower bound of the true value.

#pragma once

#include "lelong/errors.hpp"
#include "lelong/polynomial.hpp"
#include "lelong/rational.hpp"
#include "lelong/rng.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace lelong {

using CMatrix = std::vector<CVector>;  // row-major; rows = child arity

inline constexpr int kArityCapComplex = 32;  // 64 real dimensions
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class NodeKind {
    monomial_log,
    log_abs_poly,
    radial,
    max,
    sum,
    scale,
    linear_pullback,
    unitary_sup,
};

struct EvalOptions {
    std::uint64_t seed = kDefaultSeed;
    int circle_grid = 256;         // grid size for the exact circle supremum
    bool circle_refine = true;     // golden-section refinement after the grid
    double circle_rel_tol = 1e-10;
    int unitary_samples = 64;      // sampled unitaries when block arity > 1
};

struct MonomialLogData {
    Rational coeff;
    std::vector<Rational> exponents;
    // Cached doubles for the evaluation hot path.
    double coeff_d = 0.0;
    std::vector<double> exponents_d;
};

struct LogAbsPolyData {
    Polynomial poly;
};

struct RadialData {
    std::vector<std::pair<double, double>> breakpoints;  // (t, chi(t)), t increasing
    Rational nu_inf;
    double nu_inf_d = 0.0;
};

struct ScaleData {
    Rational factor;
    double factor_d = 0.0;
};

struct LinearPullbackData {
    CMatrix matrix;  // child_arity rows, node_arity columns
    CVector offset;  // child_arity entries; all-zero for a linear map
};

struct UnitarySupData {
    int base_arity = 0;
    int block_arity = 0;
};

class PshExpr;

struct ExprNode;

class PshExpr {
public:
    PshExpr() = default;

    static PshExpr monomial_log(const Rational& coeff, std::vector<Rational> exponents);
    static PshExpr log_abs_poly(Polynomial poly);
    static PshExpr radial(int arity, std::vector<std::pair<double, double>> breakpoints,
                          const Rational& nu_inf);
    static PshExpr max_of(std::vector<PshExpr> children);
    static PshExpr sum_of(std::vector<PshExpr> children);
    static PshExpr scaled(const Rational& factor, PshExpr child);
    static PshExpr linear_pullback(CMatrix matrix, PshExpr child);
    static PshExpr affine_pullback(CMatrix matrix, CVector offset, PshExpr child);
    static PshExpr unitary_sup(int base_arity, int block_arity, PshExpr child);

    bool valid() const { return node_ != nullptr; }
    NodeKind kind() const;
    int arity() const;
    const ExprNode& node() const { return *node_; }
    const std::vector<PshExpr>& children() const;

    template <typename T>
    const T& as() const;

private:
    explicit PshExpr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    NodeKind kind;
    int arity = 0;
    std::variant<std::monostate, MonomialLogData, LogAbsPolyData, RadialData, ScaleData,
                 LinearPullbackData, UnitarySupData>
        data;
    std::vector<PshExpr> children;
};

inline NodeKind PshExpr::kind() const { return node_->kind; }
inline int PshExpr::arity() const { return node_->arity; }
inline const std::vector<PshExpr>& PshExpr::children() const { return node_->children; }

template <typename T>
const T& PshExpr::as() const {
    return std::get<T>(node_->data);
}

// -- factories ---------------------------------------------------------------

inline PshExpr PshExpr::monomial_log(const Rational& coeff, std::vector<Rational> exponents) {
    if (coeff <= 0) throw InputError("monomial_log: coeff must be positive", "nonpositive-weight");
    if (exponents.empty()) throw InputError("monomial_log: empty exponent vector");
    MonomialLogData d;
    d.coeff = coeff;
    d.coeff_d = to_double(coeff);
    for (const auto& e : exponents) {
        if (e < 0) throw InputError("monomial_log: exponents must be nonnegative");
        d.exponents_d.push_back(to_double(e));
    }
    d.exponents = std::move(exponents);
    ExprNode n{NodeKind::monomial_log, static_cast<int>(d.exponents.size()), std::move(d), {}};
    return PshExpr(std::make_shared<const ExprNode>(std::move(n)));
}

inline PshExpr PshExpr::log_abs_poly(Polynomial poly) {
    if (poly.is_zero()) throw InputError("log_abs_poly: zero polynomial");
    const int ar = poly.nvars();
    ExprNode n{NodeKind::log_abs_poly, ar, LogAbsPolyData{std::move(poly)}, {}};
    return PshExpr(std::make_shared<const ExprNode>(std::move(n)));
}

inline PshExpr PshExpr::radial(int arity, std::vector<std::pair<double, double>> breakpoints,
                               const Rational& nu_inf) {
    if (arity < 1) throw InputError("radial: arity must be positive");
    if (nu_inf < 0) throw InputError("radial: nu_inf must be nonnegative");
    RadialData d;
    d.nu_inf = nu_inf;
    d.nu_inf_d = to_double(nu_inf);
    double prev_slope = d.nu_inf_d;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const auto& [t, chi] = breakpoints[i];
        if (!std::isfinite(t) || !std::isfinite(chi))
            throw InputError("radial: breakpoints must be finite", "bad-breakpoints");
        if (i > 0) {
            const auto& [t0, chi0] = breakpoints[i - 1];
            if (t <= t0) throw InputError("radial: breakpoint abscissae must increase", "bad-breakpoints");
            const double slope = (chi - chi0) / (t - t0);
            if (slope < prev_slope - 1e-12)
                throw InputError("radial: slopes must be nondecreasing (convex increasing)",
                                 "bad-breakpoints");
            prev_slope = slope;
        }
    }
    d.breakpoints = std::move(breakpoints);
    ExprNode n{NodeKind::radial, arity, std::move(d), {}};
    return PshExpr(std::make_shared<const ExprNode>(std::move(n)));
}

inline PshExpr PshExpr::max_of(std::vector<PshExpr> children) {
    if (children.empty()) throw InputError("max: empty children", "empty-children");
    const int ar = children.front().arity();
    for (const auto& c : children)
        if (c.arity() != ar) throw InputError("max: children arity mismatch", "arity-mismatch");
    ExprNode n{NodeKind::max, ar, std::monostate{}, std::move(children)};
    return PshExpr(std::make_shared<const ExprNode>(std::move(n)));
}

inline PshExpr PshExpr::sum_of(std::vector<PshExpr> children) {
    if (children.empty()) throw InputError("sum: empty children", "empty-children");
    const int ar = children.front().arity();
    for (const auto& c : children)
        if (c.arity() != ar) throw InputError("sum: children arity mismatch", "arity-mismatch");
    ExprNode n{NodeKind::sum, ar, std::monostate{}, std::move(children)};
    return PshExpr(std::make_shared<const ExprNode>(std::move(n)));
}

inline PshExpr PshExpr::scaled(const Rational& factor, PshExpr child) {
    if (factor <= 0) throw InputError("scale: factor must be positive", "nonpositive-weight");
    ScaleData d{factor, to_double(factor)};
    const int ar = child.arity();
    ExprNode n{NodeKind::scale, ar, std::move(d), {std::move(child)}};
    return PshExpr(std::make_shared<const ExprNode>(std::move(n)));
}

inline PshExpr PshExpr::affine_pullback(CMatrix matrix, CVector offset, PshExpr child) {
    const int rows = static_cast<int>(matrix.size());
    if (rows != child.arity())
        throw InputError("linear_pullback: matrix rows must equal child arity", "bad-matrix");
    if (rows == 0) throw InputError("linear_pullback: empty matrix", "bad-matrix");
    const int cols = static_cast<int>(matrix.front().size());
    if (cols < 1) throw InputError("linear_pullback: matrix needs at least one column", "bad-matrix");
    for (const auto& row : matrix)
        if (static_cast<int>(row.size()) != cols)
            throw InputError("linear_pullback: ragged matrix", "bad-matrix");
    if (offset.empty()) offset.assign(rows, Complex(0.0, 0.0));
    if (static_cast<int>(offset.size()) != rows)
        throw InputError("linear_pullback: offset length must equal child arity", "bad-matrix");
    LinearPullbackData d{std::move(matrix), std::move(offset)};
    ExprNode n{NodeKind::linear_pullback, cols, std::move(d), {std::move(child)}};
    return PshExpr(std::make_shared<const ExprNode>(std::move(n)));
}

inline PshExpr PshExpr::linear_pullback(CMatrix matrix, PshExpr child) {
    return affine_pullback(std::move(matrix), {}, std::move(child));
}

inline PshExpr PshExpr::unitary_sup(int base_arity, int block_arity, PshExpr child) {
    if (base_arity < 0 || block_arity < 1)
        throw InputError("unitary_sup: need base arity >= 0 and block arity >= 1");
    if (base_arity + block_arity != child.arity())
        throw InputError("unitary_sup: split must partition the child arity", "arity-mismatch");
    ExprNode n{NodeKind::unitary_sup, base_arity + block_arity,
               UnitarySupData{base_arity, block_arity}, {std::move(child)}};
    return PshExpr(std::make_shared<const ExprNode>(std::move(n)));
}

// -- evaluation --------------------------------------------------------------

inline double chi_eval(const RadialData& d, double t) {
    const auto& bp = d.breakpoints;
    if (bp.empty()) {
        if (d.nu_inf_d == 0.0) return 0.0;
        return d.nu_inf_d * t;  // -inf maps to -inf
    }
    if (t <= bp.front().first) {
        if (t == kNegInf) return d.nu_inf_d > 0.0 ? kNegInf : bp.front().second;
        return bp.front().second + d.nu_inf_d * (t - bp.front().first);
    }
    for (std::size_t i = 1; i < bp.size(); ++i) {
        if (t <= bp[i].first) {
            const double w = (t - bp[i - 1].first) / (bp[i].first - bp[i - 1].first);
            return bp[i - 1].second + w * (bp[i].second - bp[i - 1].second);
        }
    }
    const double slope = bp.size() >= 2 ? (bp.back().second - bp[bp.size() - 2].second) /
                                              (bp.back().first - bp[bp.size() - 2].first)
                                        : d.nu_inf_d;
    return bp.back().second + slope * (t - bp.back().first);
}

inline std::uint64_t hash_point(std::span<const Complex> pt) {
    std::uint64_t h = 0x8c2f1d5bull;
    for (const auto& z : pt) {
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(z.real()));
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(z.imag()));
    }
    return h;
}

namespace detail {

double eval_impl(const ExprNode& n, std::span<const Complex> pt, const EvalOptions& opts);

// Exact supremum over the unit circle acting on a single trailing coordinate.
inline double circle_sup(const ExprNode& child, std::span<const Complex> pt, int base,
                         const EvalOptions& opts) {
    const Complex w = pt[base];
    CVector buf(pt.begin(), pt.end());
    auto value_at = [&](double theta) {
        buf[base] = std::polar(std::abs(w), std::arg(w) + theta);
        return eval_impl(child, buf, opts);
    };

    const int grid = std::max(8, opts.circle_grid);
    const double step = 6.283185307179586476925286766559 / grid;
    double best = kNegInf;
    int best_i = 0;
    for (int i = 0; i < grid; ++i) {
        const double v = value_at(i * step);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    if (!opts.circle_refine || best == kNegInf) return best;

    // Golden-section ascent on the bracketing interval around the grid best;
    // the interval shrinks below 1e-13 rad, far past circle_rel_tol in value.
    double a = (best_i - 1) * step, b = (best_i + 1) * step;
    constexpr double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = value_at(x1), f2 = value_at(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = value_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = value_at(x1);
        }
        best = std::max(best, std::max(f1, f2));
    }
    return best;
}

// Sampled supremum for block arity > 1: identity, diagonal-phase rotations and
// Haar unitaries (QR of a complex Ginibre matrix with positive-diagonal R).
// Deterministic per (seed, point); a lower bound of the true supremum.
inline double sampled_unitary_sup(const ExprNode& child, std::span<const Complex> pt, int base,
                                  int m, const EvalOptions& opts) {
    CVector buf(pt.begin(), pt.end());
    const CVector w(pt.begin() + base, pt.end());

    double best = eval_impl(child, buf, opts);  // identity element

    auto rng = substream(opts.seed, 0x5a3fu, hash_point(pt));
    const int s = std::max(2, opts.unitary_samples);

    const double two_pi = 6.283185307179586476925286766559;
    for (int trial = 0; trial < s / 2; ++trial) {
        for (int l = 0; l < m; ++l)
            buf[base + l] = w[l] * std::polar(1.0, two_pi * uniform01(rng));
        best = std::max(best, eval_impl(child, buf, opts));
    }

    std::vector<CVector> q(m, CVector(m));
    for (int trial = 0; trial < s - s / 2; ++trial) {
        // Columns of a Ginibre matrix, orthonormalized in place.
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) q[i][j] = Complex(gaussian(rng), gaussian(rng));
            for (int p = 0; p < j; ++p) {
                Complex proj(0.0, 0.0);
                for (int i = 0; i < m; ++i) proj += std::conj(q[i][p]) * q[i][j];
                for (int i = 0; i < m; ++i) q[i][j] -= proj * q[i][p];
            }
            double nm = 0.0;
            for (int i = 0; i < m; ++i) nm += std::norm(q[i][j]);
            nm = std::sqrt(nm);
            if (nm < 1e-14) {
                q[j][j] += 1.0;  // essentially impossible; keep well-defined
                nm = 1.0;
            }
            for (int i = 0; i < m; ++i) q[i][j] /= nm;
        }
        for (int i = 0; i < m; ++i) {
            Complex acc(0.0, 0.0);
            for (int j = 0; j < m; ++j) acc += q[i][j] * w[j];
            buf[base + i] = acc;
        }
        best = std::max(best, eval_impl(child, buf, opts));
    }
    return best;
}

inline double eval_impl(const ExprNode& n, std::span<const Complex> pt, const EvalOptions& opts) {
    switch (n.kind) {
        case NodeKind::monomial_log: {
            const auto& d = std::get<MonomialLogData>(n.data);
            double acc = 0.0;
            for (int j = 0; j < n.arity; ++j) {
                const double a = d.exponents_d[j];
                if (a == 0.0) continue;
                const double m = std::abs(pt[j]);
                if (m == 0.0) return kNegInf;
                acc += a * std::log(m);
            }
            return d.coeff_d * acc;
        }
        case NodeKind::log_abs_poly: {
            const auto& d = std::get<LogAbsPolyData>(n.data);
            const double m = std::abs(d.poly.eval(CVector(pt.begin(), pt.end())));
            return m == 0.0 ? kNegInf : std::log(m);
        }
        case NodeKind::radial: {
            const auto& d = std::get<RadialData>(n.data);
            double s = 0.0;
            for (const auto& z : pt) s += std::norm(z);
            const double nrm = std::sqrt(s);
            return chi_eval(d, nrm == 0.0 ? kNegInf : std::log(nrm));
        }
        case NodeKind::max: {
            double best = kNegInf;
            for (const auto& c : n.children) best = std::max(best, eval_impl(c.node(), pt, opts));
            return best;
        }
        case NodeKind::sum: {
            double acc = 0.0;
            for (const auto& c : n.children) {
                const double v = eval_impl(c.node(), pt, opts);
                if (v == kNegInf) return kNegInf;
                acc += v;
            }
            return acc;
        }
        case NodeKind::scale: {
            const auto& d = std::get<ScaleData>(n.data);
            const double v = eval_impl(n.children.front().node(), pt, opts);
            return v == kNegInf ? kNegInf : d.factor_d * v;
        }
        case NodeKind::linear_pullback: {
            const auto& d = std::get<LinearPullbackData>(n.data);
            const int rows = static_cast<int>(d.matrix.size());
            CVector img(rows);
            for (int i = 0; i < rows; ++i) {
                Complex acc = d.offset[i];
                const auto& row = d.matrix[i];
                for (int j = 0; j < n.arity; ++j) acc += row[j] * pt[j];
                img[i] = acc;
            }
            return eval_impl(n.children.front().node(), img, opts);
        }
        case NodeKind::unitary_sup: {
            const auto& d = std::get<UnitarySupData>(n.data);
            bool block_zero = true;
            for (int l = 0; l < d.block_arity; ++l)
                if (pt[d.base_arity + l] != Complex(0.0, 0.0)) {
                    block_zero = false;
                    break;
                }
            const ExprNode& child = n.children.front().node();
            if (block_zero) return eval_impl(child, pt, opts);
            if (d.block_arity == 1) return circle_sup(child, pt, d.base_arity, opts);
            return sampled_unitary_sup(child, pt, d.base_arity, d.block_arity, opts);
        }
    }
    return kNegInf;  // unreachable
}

}  // namespace detail

inline double eval(const PshExpr& e, std::span<const Complex> point, const EvalOptions& opts = {}) {
    if (static_cast<int>(point.size()) != e.arity())
        throw InputError("eval: point arity mismatch", "arity-mismatch");
    for (const auto& z : point)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InputError("eval: non-finite input coordinate");
    return detail::eval_impl(e.node(), point, opts);
}

inline double eval(const PshExpr& e, const CVector& point, const EvalOptions& opts = {}) {
    return eval(e, std::span<const Complex>(point), opts);
}

// -- structural operations ---------------------------------------------------

// Pullback under the difference map (z, w) -> z - w; doubles the arity.
inline PshExpr pullback_difference(const PshExpr& e) {
    const int m = e.arity();
    if (2 * m > kArityCapComplex)
        throw CapacityError("pullback_difference: arity cap exceeded");
    CMatrix mat(m, CVector(2 * m, Complex(0.0, 0.0)));
    for (int i = 0; i < m; ++i) {
        mat[i][i] = Complex(1.0, 0.0);
        mat[i][m + i] = Complex(-1.0, 0.0);
    }
    return PshExpr::linear_pullback(std::move(mat), e);
}

// k-fold difference pullback; arity n -> 2^k n.
inline PshExpr tower_pullback(const PshExpr& e, int k) {
    if (k < 1) throw InputError("tower_pullback: k must be >= 1");
    PshExpr cur = e;
    for (int i = 0; i < k; ++i) cur = pullback_difference(cur);
    return cur;
}

// Unitary symmetrization of the k-fold difference tower over the trailing
// (2^k - 1) n coordinates.
inline PshExpr symmetrized_tower(const PshExpr& e, int k) {
    const int n = e.arity();
    PshExpr tower = tower_pullback(e, k);
    const int block = tower.arity() - n;
    return PshExpr::unitary_sup(n, block, std::move(tower));
}

inline PshExpr scale(const PshExpr& e, const Rational& c) { return PshExpr::scaled(c, e); }

// -- slices ------------------------------------------------------------------

// Affine parametrization t -> base + directions * t of a regular submanifold.
struct SliceMap {
    CVector base;        // length n
    CMatrix directions;  // n rows, d columns, full column rank

    int ambient_arity() const { return static_cast<int>(base.size()); }
    int slice_arity() const {
        return directions.empty() ? 0 : static_cast<int>(directions.front().size());
    }
};

inline void validate_slice(const SliceMap& s) {
    const int n = s.ambient_arity();
    const int d = s.slice_arity();
    if (n < 1 || d < 1 || d > n) throw InputError("slice: need 1 <= d <= n");
    if (static_cast<int>(s.directions.size()) != n)
        throw InputError("slice: directions must have one row per ambient coordinate");
    for (const auto& row : s.directions)
        if (static_cast<int>(row.size()) != d) throw InputError("slice: ragged direction matrix");

    // Column rank via Gaussian elimination with partial pivoting.
    CMatrix m = s.directions;
    int rank = 0;
    for (int col = 0; col < d && rank < n; ++col) {
        int piv = -1;
        double best = 1e-10;
        for (int r = rank; r < n; ++r)
            if (std::abs(m[r][col]) > best) {
                best = std::abs(m[r][col]);
                piv = r;
            }
        if (piv < 0) throw InputError("slice: directions not of full column rank");
        std::swap(m[piv], m[rank]);
        for (int r = rank + 1; r < n; ++r) {
            const Complex f = m[r][col] / m[rank][col];
            for (int c2 = col; c2 < d; ++c2) m[r][c2] -= f * m[rank][c2];
        }
        ++rank;
    }
}

// expr restricted to the slice, as an expression in the d slice variables.
// Throws DegenerateSliceError when 50 seeded samples all evaluate to -inf.
inline PshExpr restrict_to_slice(const PshExpr& e, const SliceMap& slice) {
    validate_slice(slice);
    if (slice.ambient_arity() != e.arity())
        throw InputError("restrict_to_slice: slice/expr arity mismatch", "arity-mismatch");
    PshExpr restricted = PshExpr::affine_pullback(slice.directions, slice.base, e);

    const int d = restricted.arity();
    auto rng = substream(kDefaultSeed, 0x511CEu);
    const EvalOptions opts;
    bool finite_somewhere = false;
    for (int s = 0; s < 50 && !finite_somewhere; ++s) {
        CVector t(d);
        for (int j = 0; j < d; ++j) t[j] = 0.3 * Complex(gaussian(rng), gaussian(rng));
        finite_somewhere = eval(restricted, t, opts) > kNegInf;
    }
    if (!finite_somewhere)
        throw DegenerateSliceError(
            "restrict_to_slice: function is identically -inf on the slice (50 samples)");
    return restricted;
}

}  // namespace lelong
