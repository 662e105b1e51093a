#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "telehardy/qstate.hpp"

namespace telehardy {

struct RunConfig {
    ObservableOp first;
    ObservableOp second;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    /// Worker threads; the counts do not depend on this.
    unsigned threads = 1;
};

/// Outcome counts for (0,0), (0,1), (1,0), (1,1).
struct CountTable {
    std::array<std::uint64_t, 4> counts{};

    std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// Uniform double in [0,1) for shot `k` of stream `seed`. Counter based: the
/// value depends on (seed, k) only, so shot ranges can be drawn in any order.
double shot_uniform(std::uint64_t seed, std::uint64_t k);

/// Exact joint distribution of the context with cells below `tol` clamped to 0.
std::array<double, 4> sampling_distribution(const StateVector& state, const RunConfig& cfg, double tol = kTolerance);

/// Draw `cfg.shots` joint outcomes. Throws NonCommuting for an invalid context.
CountTable sample(const StateVector& state, const RunConfig& cfg, double tol = kTolerance);

struct DeviationReport {
    std::array<double, 4> expected{};
    std::array<double, 4> frequency{};
    std::array<double, 4> deviation{};
    std::array<double, 4> std_error{};
    std::array<double, 4> z{};
    double max_abs_z = 0.0;
    /// Cells with zero probability but nonzero count.
    std::vector<int> impossible_cells;
    bool impossible_event_violation() const { return !impossible_cells.empty(); }
};

/// Per-cell deviation against the exact table with binomial standard errors.
/// Cells with zero standard error contribute no z-score; a count in a
/// zero-probability cell is flagged instead.
DeviationReport compare_frequencies(const CountTable& counts, const std::array<double, 4>& exact,
                                    double tol = kTolerance);

}  // namespace telehardy
