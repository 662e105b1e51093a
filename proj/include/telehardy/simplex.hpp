#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace telehardy {

using Rational = boost::multiprecision::cpp_rational;

struct LpFeasibility {
    bool feasible = false;
    /// Nonnegative solution of A x = b when feasible.
    std::vector<Rational> solution;
    /// When infeasible: y with yᵀA_j >= 0 for every column j and yᵀb < 0.
    std::vector<Rational> farkas;
};

/// Exact phase-I simplex (Bland's rule) deciding A x = b, x >= 0.
/// Requires b >= 0 entrywise; rows of A may be linearly dependent.
LpFeasibility solve_feasibility(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b);

}  // namespace telehardy
