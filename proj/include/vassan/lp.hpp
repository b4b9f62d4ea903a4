#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vassan/core.hpp"
#include "vassan/graph.hpp"

namespace vassan {

using Rational = boost::multiprecision::cpp_rational;

enum class Relation { eq, ge, le };

struct LinearConstraint {
    std::vector<std::pair<std::size_t, Rational>> terms;
    Relation relation = Relation::eq;
    Rational rhs = 0;
};

// Feasibility problem over non-negative variables.
struct LpProblem {
    std::size_t variable_count = 0;
    std::vector<LinearConstraint> constraints;

    void add(std::vector<std::pair<std::size_t, Rational>> terms, Relation rel, Rational rhs) {
        constraints.push_back({std::move(terms), rel, std::move(rhs)});
    }
};

struct LpLimits {
    std::size_t max_pivots = 200000;
    std::size_t max_cells = 4000000;
};

// Phase-one simplex over exact rationals with Bland's rule. Returns a feasible point or nullopt.
inline std::optional<std::vector<Rational>> find_feasible_point(const LpProblem& lp, const LpLimits& limits = {}) {
    const std::size_t m = lp.constraints.size();
    const std::size_t n = lp.variable_count;
    std::size_t slack_count = 0;
    for (const auto& c : lp.constraints)
        if (c.relation != Relation::eq) ++slack_count;
    const std::size_t cols = n + slack_count + m;  // originals, slacks, artificials
    if ((m + 1) * (cols + 1) > limits.max_cells) throw BudgetExceeded("linear program too large", (m + 1) * (cols + 1));
    if (m == 0) return std::vector<Rational>(n, 0);

    std::vector<std::vector<Rational>> tab(m + 1, std::vector<Rational>(cols + 1, 0));
    std::vector<std::size_t> basis(m);
    std::size_t slack = n;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& c = lp.constraints[r];
        auto& row = tab[r];
        for (const auto& [var, coef] : c.terms) {
            if (var >= n) throw ModelError("linear constraint references an unknown variable");
            row[var] += coef;
        }
        if (c.relation == Relation::ge) row[slack++] = -1;
        else if (c.relation == Relation::le) row[slack++] = 1;
        row[cols] = c.rhs;
        if (row[cols] < 0)
            for (auto& x : row) x = -x;
        row[n + slack_count + r] = 1;
        basis[r] = n + slack_count + r;
    }
    // Objective row: minimise the sum of artificials, stored as reduced costs.
    auto& obj = tab[m];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j <= cols; ++j) obj[j] -= tab[r][j];
    for (std::size_t r = 0; r < m; ++r) obj[n + slack_count + r] = 0;

    for (std::size_t pivots = 0;; ++pivots) {
        if (pivots > limits.max_pivots) throw BudgetExceeded("simplex pivot limit reached", pivots);
        std::size_t enter = npos;
        for (std::size_t j = 0; j < cols; ++j)
            if (obj[j] < 0) {
                enter = j;
                break;
            }
        if (enter == npos) break;
        std::size_t leave = npos;
        Rational best;
        for (std::size_t r = 0; r < m; ++r) {
            if (tab[r][enter] <= 0) continue;
            Rational ratio = tab[r][cols] / tab[r][enter];
            if (leave == npos || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                leave = r;
                best = ratio;
            }
        }
        if (leave == npos) break;  // unbounded direction cannot occur in phase one
        Rational piv = tab[leave][enter];
        for (auto& x : tab[leave]) x /= piv;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave || tab[r][enter] == 0) continue;
            Rational f = tab[r][enter];
            for (std::size_t j = 0; j <= cols; ++j)
                if (tab[leave][j] != 0) tab[r][j] -= f * tab[leave][j];
        }
        basis[leave] = enter;
    }
    if (obj[cols] != 0) return std::nullopt;
    std::vector<Rational> x(n, 0);
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) x[basis[r]] = tab[r][cols];
    return x;
}

inline bool satisfies(const LpProblem& lp, const std::vector<Rational>& x) {
    if (x.size() != lp.variable_count) return false;
    for (const auto& v : x)
        if (v < 0) return false;
    for (const auto& c : lp.constraints) {
        Rational lhs = 0;
        for (const auto& [var, coef] : c.terms) lhs += coef * x[var];
        if (c.relation == Relation::eq && lhs != c.rhs) return false;
        if (c.relation == Relation::ge && lhs < c.rhs) return false;
        if (c.relation == Relation::le && lhs > c.rhs) return false;
    }
    return true;
}

}  // namespace vassan
