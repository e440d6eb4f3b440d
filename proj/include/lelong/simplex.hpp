// Exact rational two-phase simplex for the tiny LPs behind Newton-polyhedron
// queries. Dense tableau, Bland's rule (termination guaranteed), arbitrary
// precision rationals throughout, so feasibility and optima are exact.

#pragma once

#include "lelong/rational.hpp"

#include <utility>
#include <vector>

namespace lelong {

struct LpSolution {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    Rational objective{0};
    std::vector<Rational> x;
};

// Minimizes c.x subject to A x = b, x >= 0. Callers add their own slacks.
inline LpSolution solve_lp(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
                           const std::vector<Rational>& c) {
    const int m = static_cast<int>(a.size());
    const int n = m > 0 ? static_cast<int>(a.front().size()) : static_cast<int>(c.size());

    for (int i = 0; i < m; ++i) {
        if (b[i] < 0) {
            b[i] = -b[i];
            for (auto& v : a[i]) v = -v;
        }
    }

    // Tableau columns: n structural, m artificial, 1 rhs.
    const int ncols = n + m + 1;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(ncols, Rational(0)));
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1;
        t[i][ncols - 1] = b[i];
        basis[i] = n + i;
    }

    auto pivot = [&](int row, int col) {
        const Rational p = t[row][col];
        for (auto& v : t[row]) v /= p;
        for (int i = 0; i < m; ++i) {
            if (i == row || t[i][col] == 0) continue;
            const Rational f = t[i][col];
            for (int j = 0; j < ncols; ++j) t[i][j] -= f * t[row][j];
        }
        basis[row] = col;
    };

    // Runs simplex for the given full cost vector over allowed columns.
    auto run = [&](const std::vector<Rational>& cost, int allowed_cols) -> bool {
        // Reduced cost row: cost minus cost of basic solution expressed in tableau.
        std::vector<Rational> r(ncols, Rational(0));
        for (int j = 0; j < allowed_cols; ++j) r[j] = cost[j];
        for (int i = 0; i < m; ++i) {
            const Rational cb = cost[basis[i]];
            if (cb == 0) continue;
            for (int j = 0; j < allowed_cols; ++j) r[j] -= cb * t[i][j];
        }

        while (true) {
            int enter = -1;
            for (int j = 0; j < allowed_cols; ++j) {
                if (r[j] < 0) {
                    enter = j;
                    break;  // Bland: smallest index
                }
            }
            if (enter < 0) return true;

            int leave = -1;
            Rational best_ratio{0};
            for (int i = 0; i < m; ++i) {
                if (t[i][enter] <= 0) continue;
                const Rational ratio = t[i][ncols - 1] / t[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;  // unbounded

            const Rational rf = r[enter];
            pivot(leave, enter);
            for (int j = 0; j < allowed_cols; ++j) r[j] -= rf * t[leave][j];
            r[enter] = 0;
        }
    };

    // Phase 1: minimize the artificial sum.
    std::vector<Rational> phase1_cost(ncols, Rational(0));
    for (int j = n; j < n + m; ++j) phase1_cost[j] = 1;
    run(phase1_cost, n + m);

    Rational infeas{0};
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) infeas += t[i][ncols - 1];
    LpSolution sol;
    if (infeas != 0) {
        sol.status = LpSolution::Status::infeasible;
        return sol;
    }

    // Drive leftover zero-value artificials out of the basis where possible;
    // rows that cannot pivot are redundant and harmless (rhs is zero).
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        for (int j = 0; j < n; ++j) {
            if (t[i][j] != 0) {
                pivot(i, j);
                break;
            }
        }
    }

    // Phase 2 over structural columns only.
    std::vector<Rational> phase2_cost(ncols, Rational(0));
    for (int j = 0; j < n; ++j) phase2_cost[j] = c[j];
    if (!run(phase2_cost, n)) {
        sol.status = LpSolution::Status::unbounded;
        return sol;
    }

    sol.status = LpSolution::Status::optimal;
    sol.x.assign(n, Rational(0));
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) sol.x[basis[i]] = t[i][ncols - 1];
    for (int j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];
    return sol;
}

}  // namespace lelong
