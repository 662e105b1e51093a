#include "telehardy/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace telehardy {

std::string_view bell_label(BellIndex i) {
    switch (i) {
        case BellIndex::PsiMinus: return "psi-";
        case BellIndex::PsiPlus: return "psi+";
        case BellIndex::PhiMinus: return "phi-";
        case BellIndex::PhiPlus: return "phi+";
    }
    return "?";
}

std::optional<BellIndex> parse_bell(std::string_view label) {
    for (BellIndex i : kBellOrder) {
        if (bell_label(i) == label) return i;
    }
    return std::nullopt;
}

std::string slot_pair_name(SlotPair p) { return std::string(slot_name(p.first)) + std::string(slot_name(p.second)); }

std::optional<SlotPair> parse_slot_pair(std::string_view text) {
    if (text.size() != 2) return std::nullopt;
    auto a = parse_slot(text.substr(0, 1));
    auto b = parse_slot(text.substr(1, 1));
    if (!a || !b || *a == *b) return std::nullopt;
    return SlotPair{*a, *b};
}

StateVector make_singlet() {
    const double h = std::numbers::sqrt2 / 2;
    CVector v = CVector::Zero(4);
    v(0b01) = h;   // |+->
    v(0b10) = -h;  // |-+>
    return StateVector({Slot::One, Slot::Two}, v);
}

std::pair<StateVector, StateVector> make_ancillas() { return {ket_up(Slot::A), ket_up_x(Slot::B)}; }

StateVector make_total_state() {
    auto [a, b] = make_ancillas();
    return tensor(tensor(a, make_singlet()), b);
}

StateVector bell_state(BellIndex i, SlotPair slots) {
    const double h = std::numbers::sqrt2 / 2;
    CVector v = CVector::Zero(4);
    switch (i) {
        case BellIndex::PsiMinus: v(0b01) = h; v(0b10) = -h; break;
        case BellIndex::PsiPlus: v(0b01) = h; v(0b10) = h; break;
        case BellIndex::PhiMinus: v(0b00) = h; v(0b11) = -h; break;
        case BellIndex::PhiPlus: v(0b00) = h; v(0b11) = h; break;
    }
    return StateVector(slots.list(), v);
}

CVector Branch::weighted_residual(std::size_t dim) const {
    if (!residual) return CVector::Zero(static_cast<Eigen::Index>(dim));
    return coefficient * residual->amplitudes();
}

double BranchExpansion::total_weight() const {
    double w = 0.0;
    for (const auto& b : branches) w += std::norm(b.coefficient);
    return w;
}

RawState BranchExpansion::reconstruct() const {
    SlotList order = measured.list();
    order.insert(order.end(), residual_slots.begin(), residual_slots.end());
    const std::size_t rdim = std::size_t{1} << residual_slots.size();
    CVector sum = CVector::Zero(static_cast<Eigen::Index>(4 * rdim));
    for (const auto& b : branches) {
        if (b.empty()) continue;
        const CVector bell = bell_state(b.index, measured).amplitudes();
        const CVector r = b.weighted_residual(rdim);
        for (Eigen::Index k = 0; k < 4; ++k) sum.segment(k * static_cast<Eigen::Index>(rdim), static_cast<Eigen::Index>(rdim)) += bell(k) * r;
    }
    return reorder(RawState(order, sum), source_slots);
}

BranchExpansion expand_in_bell_basis(const StateVector& s, SlotPair slots, double tol) {
    for (Slot x : {slots.first, slots.second}) {
        if (!s.has_slot(x)) {
            throw Error(ErrorKind::SlotAbsent, "slot " + std::string(slot_name(x)) + " not in " + slot_list_name(s.slots()));
        }
    }
    if (slots.first == slots.second) throw Error(ErrorKind::SlotCollision, "measured pair repeats a slot");

    BranchExpansion out{slots, s.slots(), {}, {}};
    for (Slot x : s.slots()) {
        if (x != slots.first && x != slots.second) out.residual_slots.push_back(x);
    }
    SlotList order = slots.list();
    order.insert(order.end(), out.residual_slots.begin(), out.residual_slots.end());
    const CVector amps = reorder(s.raw(), order).amplitudes();
    const Eigen::Index rdim = Eigen::Index{1} << out.residual_slots.size();

    for (std::size_t n = 0; n < 4; ++n) {
        const BellIndex i = kBellOrder[n];
        const CVector bell = bell_state(i, slots).amplitudes();
        CVector r = CVector::Zero(rdim);
        for (Eigen::Index k = 0; k < 4; ++k) r += std::conj(bell(k)) * amps.segment(k * rdim, rdim);
        const double norm = r.norm();
        Branch b{i, Amplitude{0.0, 0.0}, std::nullopt};
        if (norm > tol) {
            Eigen::Index lead = 0;
            while (std::abs(r(lead)) <= tol * norm) ++lead;
            const Amplitude phase = r(lead) / std::abs(r(lead));
            b.coefficient = norm * phase;
            b.residual = StateVector(out.residual_slots, r / b.coefficient);
        }
        out.branches[n] = std::move(b);
    }
    return out;
}

CVector PrintedExpansion::branch_vector(BellIndex i) const {
    const auto& b = branches[static_cast<std::size_t>(i)];
    if (!b) return CVector::Zero(Eigen::Index{1} << residual_slots.size());
    return overall * b->residual.amplitudes();
}

ExpansionReport compare_expansion(const BranchExpansion& derived, const PrintedExpansion& printed, double tol) {
    if (!(derived.measured == printed.measured) || derived.residual_slots != printed.residual_slots) {
        throw Error(ErrorKind::DimensionMismatch, "printed expansion over " + slot_pair_name(printed.measured) + "/" +
                                                      slot_list_name(printed.residual_slots) + " vs derived " +
                                                      slot_pair_name(derived.measured) + "/" +
                                                      slot_list_name(derived.residual_slots));
    }
    ExpansionReport rep{derived.measured, derived.residual_slots, {}, true, true};
    const std::size_t rdim = std::size_t{1} << derived.residual_slots.size();
    for (std::size_t n = 0; n < 4; ++n) {
        const Branch& b = derived.branches[n];
        BranchVerdict v;
        v.index = b.index;
        v.empty = b.empty();
        v.coefficient = b.coefficient;
        v.residual = b.residual;

        const CVector d = b.weighted_residual(rdim);
        const CVector p = printed.branch_vector(b.index);
        v.printed_empty = p.norm() <= tol;
        v.exact_deviation = max_abs_entry(d - p);
        v.exact_match = v.exact_deviation <= tol;

        if (v.empty && v.printed_empty) {
            v.phase_match = true;
        } else if (!v.empty && !v.printed_empty) {
            const Amplitude overlap = p.dot(d);
            if (std::abs(overlap) > tol) {
                v.phase = overlap / std::abs(overlap);
                v.phase_deviation = max_abs_entry(d - *v.phase * p);
                v.phase_match = v.phase_deviation <= tol;
            } else {
                v.phase_deviation = std::max(d.cwiseAbs().maxCoeff(), p.cwiseAbs().maxCoeff());
            }
        } else {
            v.phase_deviation = v.exact_deviation;
        }
        rep.all_exact = rep.all_exact && v.exact_match;
        rep.all_up_to_phase = rep.all_up_to_phase && v.phase_match;
        rep.branches[n] = std::move(v);
    }
    return rep;
}

ExpansionReport verify_expansion_against_printed(SlotPair slots, const PrintedTables& tables, double tol) {
    const auto it = tables.find(slot_pair_name(slots));
    if (it == tables.end()) throw Error(ErrorKind::Parse, "no printed expansion for pair " + slot_pair_name(slots));
    return compare_expansion(expand_in_bell_basis(make_total_state(), slots, tol), it->second, tol);
}

}  // namespace telehardy
