#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "telehardy/protocol.hpp"
#include "telehardy/qstate.hpp"
#include "telehardy/tables.hpp"

namespace telehardy {

/// How U1/U2 are read.
///  - FixedBasis: U1 = |+><+| on slot 1, U2 = |+><+| on slot 2, as printed.
///  - CollapsedState: U2 projects onto the slot-2 residual of the A1 expansion
///    branch picked by D1; U1 onto the slot-1 residual of the 2B branch picked
///    by D2. Residuals come from expand_in_bell_basis at run time.
enum class Interpretation { FixedBasis, CollapsedState };

inline constexpr std::array<Interpretation, 2> kInterpretations{Interpretation::FixedBasis,
                                                                Interpretation::CollapsedState};

/// "fixed" / "collapsed"
std::string_view interpretation_label(Interpretation i);
std::optional<Interpretation> parse_interpretation(std::string_view text);

/// Rank-1 Bell projector on `pair` (A1 or 2B), identity on the other two slots.
ObservableOp build_d(SlotPair pair, BellIndex i);

/// U on slot 1 or 2. Under CollapsedState `partner_outcome` selects the
/// expansion branch of `source` (A1 branch for slot 2, 2B branch for slot 1).
ObservableOp build_u(Slot slot, Interpretation interp, BellIndex partner_outcome);
ObservableOp build_u(Slot slot, Interpretation interp, BellIndex partner_outcome, const StateVector& source);

/// D1, D2, U1, U2 for one Bell pair and interpretation.
struct ObservableSet {
    BellIndex d1_index;
    BellIndex d2_index;
    Interpretation interp;
    std::array<ObservableOp, 4> ops;  // indexed by Observable

    const ObservableOp& operator[](Observable o) const { return ops[static_cast<std::size_t>(o)]; }
};

ObservableSet build_observables(BellIndex i, BellIndex j, Interpretation interp);

/// <s|C·T·C|s> / <s|C|s>. Refuses non-commuting pairs and zero-probability conditions.
double conditional_probability(const ObservableOp& cond, const ObservableOp& then, const StateVector& s,
                               double tol = kTolerance);

/// Joint outcome distribution of two commuting projectors, cells (0,0),(0,1),(1,0),(1,1).
std::array<double, 4> joint_distribution(const ObservableOp& x, const ObservableOp& y, const StateVector& s,
                                         double tol = kTolerance);

struct HardyClaimSet {
    double p_joint;  // P(D1=1, D2=1)
    double c_d1u2;   // P(U2=1 | D1=1)
    double c_d2u1;   // P(U1=1 | D2=1)
    double p_u1u2;   // P(U1=1, U2=1)
};

/// The four stated values {1/16, 1, 1, 0}.
inline constexpr HardyClaimSet kClaimedValues{1.0 / 16.0, 1.0, 1.0, 0.0};

struct ClaimVerdict {
    std::string name;
    double claimed;
    double measured;
    bool pass;
};

struct AuditReport {
    BellIndex d1_index;
    BellIndex d2_index;
    Interpretation interp;
    HardyClaimSet measured;
    std::array<ClaimVerdict, 4> verdicts;  // p_joint, c_d1u2, c_d2u1, p_u1u2

    bool all_pass() const;
};

AuditReport audit_pair(BellIndex i, BellIndex j, Interpretation interp, double tol = kTolerance);

struct PairEnumeration {
    Interpretation interp;
    std::vector<AuditReport> reports;  // (psi-,psi+,phi-,phi+) x same, row-major
    double total_p_joint = 0.0;
    int pairs_passing_all = 0;
};

PairEnumeration enumerate_all_pairs(Interpretation interp, double tol = kTolerance);

/// Exact joint distributions of the contexts D1D2, D1U2, U1D2, U1U2 on the total state.
ProbabilityTable quantum_probability_table(BellIndex i, BellIndex j, Interpretation interp,
                                           double tol = kTolerance);

}  // namespace telehardy
