#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "telehardy/qstate.hpp"

namespace telehardy {

/// The four Bell states, in report order.
enum class BellIndex { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

inline constexpr std::array<BellIndex, 4> kBellOrder{BellIndex::PsiMinus, BellIndex::PsiPlus, BellIndex::PhiMinus,
                                                     BellIndex::PhiPlus};

/// "psi-", "psi+", "phi-", "phi+"
std::string_view bell_label(BellIndex i);
std::optional<BellIndex> parse_bell(std::string_view label);

struct SlotPair {
    Slot first;
    Slot second;

    SlotList list() const { return {first, second}; }
    friend bool operator==(const SlotPair&, const SlotPair&) = default;
};

inline constexpr SlotPair kAlicePair{Slot::A, Slot::One};
inline constexpr SlotPair kBobPair{Slot::Two, Slot::B};

std::string slot_pair_name(SlotPair p);
std::optional<SlotPair> parse_slot_pair(std::string_view text);

StateVector make_singlet();
std::pair<StateVector, StateVector> make_ancillas();
/// |A> ⊗ singlet ⊗ |B> over (A, 1, 2, B).
StateVector make_total_state();
StateVector bell_state(BellIndex i, SlotPair slots);

struct Branch {
    BellIndex index;
    Amplitude coefficient;
    /// nullopt marks an empty (zero-weight) branch.
    std::optional<StateVector> residual;

    bool empty() const { return !residual.has_value(); }
    /// coefficient * residual, or zeros for an empty branch.
    CVector weighted_residual(std::size_t dim) const;
};

struct BranchExpansion {
    SlotPair measured;
    SlotList source_slots;
    SlotList residual_slots;
    std::array<Branch, 4> branches;

    const Branch& branch(BellIndex i) const { return branches[static_cast<std::size_t>(i)]; }
    double total_weight() const;
    /// Σ coefficient · (bell ⊗ residual), put back in the source slot order.
    RawState reconstruct() const;
};

/// Coefficients are partial inner products <bell_i|s>. Each nonempty residual
/// is normalized and phase-fixed so its first nonzero amplitude is real
/// positive; the phase goes to the coefficient.
BranchExpansion expand_in_bell_basis(const StateVector& s, SlotPair slots, double tol = kTolerance);

/// Comparison target for one expansion, loaded from the expansion table file.
struct PrintedBranch {
    BellIndex index;
    /// Unnormalized residual exactly as printed (branch sign included).
    RawState residual;
};

struct PrintedExpansion {
    SlotPair measured;
    SlotList residual_slots;
    Amplitude overall;
    std::array<std::optional<PrintedBranch>, 4> branches;

    /// overall * residual for branch i, or zeros when the branch is absent.
    CVector branch_vector(BellIndex i) const;
};

using PrintedTables = std::map<std::string, PrintedExpansion>;

/// Parse the plain-text expansion table format (see docs/expansion_tables.md).
PrintedTables parse_expansion_tables(std::string_view text);
PrintedTables load_expansion_tables(const std::string& path);

struct BranchVerdict {
    BellIndex index;
    bool empty = false;           // derived branch has zero weight
    bool printed_empty = false;   // printed table has no (or a zero) branch
    Amplitude coefficient;
    std::optional<StateVector> residual;
    bool exact_match = false;
    bool phase_match = false;
    /// Phase e^{iφ} with derived = e^{iφ} · printed; unset when undefined.
    std::optional<Amplitude> phase;
    double exact_deviation = 0.0;
    double phase_deviation = 0.0;
};

struct ExpansionReport {
    SlotPair measured;
    SlotList residual_slots;
    std::array<BranchVerdict, 4> branches;
    bool all_exact = false;
    bool all_up_to_phase = false;
};

ExpansionReport compare_expansion(const BranchExpansion& derived, const PrintedExpansion& printed,
                                  double tol = kTolerance);

/// Expands the total state over `slots` and compares with the printed table.
ExpansionReport verify_expansion_against_printed(SlotPair slots, const PrintedTables& tables,
                                               double tol = kTolerance);

}  // namespace telehardy
