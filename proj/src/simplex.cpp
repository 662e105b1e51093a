#include "telehardy/simplex.hpp"

#include <stdexcept>

namespace telehardy {

LpFeasibility solve_feasibility(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b) {
    const std::size_t m = a.size();
    if (b.size() != m) throw std::invalid_argument("solve_feasibility: row count mismatch");
    const std::size_t n = m == 0 ? 0 : a.front().size();
    const std::size_t rhs = n + m;

    // Tableau [A | I | b] with the artificials as the starting basis.
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(n + m + 1));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i].size() != n) throw std::invalid_argument("solve_feasibility: ragged matrix");
        if (b[i] < 0) throw std::invalid_argument("solve_feasibility: negative right-hand side");
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1;
        t[i][rhs] = b[i];
        basis[i] = n + i;
    }
    // Reduced costs for minimizing the sum of artificials; obj[rhs] = -objective.
    std::vector<Rational> obj(n + m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) obj[j] -= t[i][j];
        obj[rhs] -= t[i][rhs];
    }

    for (;;) {
        std::size_t enter = rhs;
        for (std::size_t j = 0; j < rhs; ++j) {
            if (obj[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == rhs) break;

        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][rhs] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        // Phase I is bounded below by zero, so some row always qualifies.
        if (leave == m) throw std::logic_error("solve_feasibility: unbounded phase I");

        const Rational piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j <= rhs; ++j) t[i][j] -= f * t[leave][j];
        }
        if (obj[enter] != 0) {
            const Rational f = obj[enter];
            for (std::size_t j = 0; j <= rhs; ++j) obj[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    LpFeasibility out;
    if (obj[rhs] == 0) {
        out.feasible = true;
        out.solution.assign(n, Rational(0));
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n) out.solution[basis[i]] = t[i][rhs];
        }
        return out;
    }
    // Duals: reduced cost of artificial k is 1 - y_k. The Farkas functional is -y.
    out.farkas.resize(m);
    for (std::size_t k = 0; k < m; ++k) out.farkas[k] = obj[n + k] - 1;
    return out;
}

}  // namespace telehardy
