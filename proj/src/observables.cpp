#include "telehardy/observables.hpp"

#include <cctype>
#include <cmath>

namespace telehardy {

std::string_view observable_name(Observable o) {
    switch (o) {
        case Observable::D1: return "D1";
        case Observable::D2: return "D2";
        case Observable::U1: return "U1";
        case Observable::U2: return "U2";
    }
    return "?";
}

std::optional<Observable> parse_observable(std::string_view text) {
    for (Observable o : kObservables) {
        const auto name = observable_name(o);
        if (text.size() == 2 && std::tolower(text[0]) == std::tolower(name[0]) && text[1] == name[1]) return o;
    }
    return std::nullopt;
}

std::string_view context_name(Context c) {
    switch (c) {
        case Context::D1D2: return "D1D2";
        case Context::D1U2: return "D1U2";
        case Context::U1D2: return "U1D2";
        case Context::U1U2: return "U1U2";
    }
    return "?";
}

std::optional<Context> parse_context(std::string_view text) {
    if (text.size() != 4) return std::nullopt;
    auto a = parse_observable(text.substr(0, 2));
    auto b = parse_observable(text.substr(2, 2));
    for (Context c : kContexts) {
        if (a == alice_of(c) && b == bob_of(c)) return c;
    }
    return std::nullopt;
}

Observable alice_of(Context c) {
    return (c == Context::D1D2 || c == Context::D1U2) ? Observable::D1 : Observable::U1;
}

Observable bob_of(Context c) {
    return (c == Context::D1D2 || c == Context::U1D2) ? Observable::D2 : Observable::U2;
}

std::string_view interpretation_label(Interpretation i) {
    return i == Interpretation::FixedBasis ? "fixed" : "collapsed";
}

std::optional<Interpretation> parse_interpretation(std::string_view text) {
    if (text == "fixed") return Interpretation::FixedBasis;
    if (text == "collapsed") return Interpretation::CollapsedState;
    return std::nullopt;
}

ObservableOp build_d(SlotPair pair, BellIndex i) {
    return ObservableOp::projector_onto("D(" + std::string(bell_label(i)) + ")_" + slot_pair_name(pair),
                                        bell_state(i, pair), canonical_slots());
}

ObservableOp build_u(Slot slot, Interpretation interp, BellIndex partner_outcome) {
    return build_u(slot, interp, partner_outcome, make_total_state());
}

ObservableOp build_u(Slot slot, Interpretation interp, BellIndex partner_outcome, const StateVector& source) {
    if (slot != Slot::One && slot != Slot::Two) {
        throw Error(ErrorKind::SlotAbsent, "U is defined on slot 1 or 2 only");
    }
    const std::string name = "U_" + std::string(slot_name(slot));
    if (interp == Interpretation::FixedBasis) {
        return ObservableOp::projector_onto(name + "(+)", ket_up(slot), canonical_slots());
    }

    // Slot 2 is steered by Alice's Bell outcome, slot 1 by Bob's.
    const SlotPair measured = slot == Slot::Two ? kAlicePair : kBobPair;
    const BranchExpansion ex = expand_in_bell_basis(source, measured);
    const Branch& b = ex.branch(partner_outcome);
    if (b.empty()) {
        throw Error(ErrorKind::EmptyBranch, "branch " + std::string(bell_label(partner_outcome)) + " over " +
                                                slot_pair_name(measured) + " has zero weight");
    }
    const CMatrix rho = reduced_density(*b.residual, slot);
    const double purity = (rho * rho).trace().real();
    if (std::abs(purity - 1.0) > kTolerance) {
        throw Error(ErrorKind::NotFactorized, "slot " + std::string(slot_name(slot)) +
                                                  " residual is entangled with its partner slot; purity " +
                                                  std::to_string(purity));
    }
    return ObservableOp::embed(name + "(" + std::string(bell_label(partner_outcome)) + "@" +
                                   slot_pair_name(measured) + ")",
                               rho, {slot}, canonical_slots(), true);
}

ObservableSet build_observables(BellIndex i, BellIndex j, Interpretation interp) {
    const StateVector psi = make_total_state();
    return ObservableSet{i,
                         j,
                         interp,
                         {build_d(kAlicePair, i), build_d(kBobPair, j), build_u(Slot::One, interp, j, psi),
                          build_u(Slot::Two, interp, i, psi)}};
}

namespace {

void require_commuting(const ObservableOp& a, const ObservableOp& b, double tol) {
    const double c = commutator_norm(a, b);
    if (c > tol) {
        throw Error(ErrorKind::NonCommuting, a.name() + " and " + b.name() + " (commutator " + std::to_string(c) + ")");
    }
}

void require_projector(const ObservableOp& p) {
    if (!p.is_projector()) throw Error(ErrorKind::NotProjector, p.name());
}

double sandwich(const CMatrix& m, const StateVector& s) { return s.amplitudes().dot(m * s.amplitudes()).real(); }

}  // namespace

double conditional_probability(const ObservableOp& cond, const ObservableOp& then, const StateVector& s,
                               double tol) {
    require_projector(cond);
    require_projector(then);
    require_commuting(cond, then, tol);
    const double pc = born_probability(cond, s).probability;
    if (pc <= tol) {
        throw Error(ErrorKind::ZeroProbabilityBranch, "condition " + cond.name() + " has probability " + std::to_string(pc));
    }
    return sandwich(cond.matrix() * then.matrix() * cond.matrix(), s) / pc;
}

std::array<double, 4> joint_distribution(const ObservableOp& x, const ObservableOp& y, const StateVector& s,
                                         double tol) {
    require_projector(x);
    require_projector(y);
    require_commuting(x, y, tol);
    if (x.slots() != s.slots()) throw Error(ErrorKind::DimensionMismatch, "observables and state on different slots");
    const auto dim = x.matrix().rows();
    const CMatrix id = CMatrix::Identity(dim, dim);
    const std::array<CMatrix, 2> xs{id - x.matrix(), x.matrix()};
    const std::array<CMatrix, 2> ys{id - y.matrix(), y.matrix()};
    std::array<double, 4> out{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) out[cell_index(a, b)] = sandwich(xs[a] * ys[b], s);
    }
    return out;
}

bool AuditReport::all_pass() const {
    for (const auto& v : verdicts) {
        if (!v.pass) return false;
    }
    return true;
}

AuditReport audit_pair(BellIndex i, BellIndex j, Interpretation interp, double tol) {
    const StateVector psi = make_total_state();
    const ObservableSet obs = build_observables(i, j, interp);
    const auto& d1 = obs[Observable::D1];
    const auto& d2 = obs[Observable::D2];
    const auto& u1 = obs[Observable::U1];
    const auto& u2 = obs[Observable::U2];

    HardyClaimSet m{};
    m.p_joint = born_probability(product(d1, d2, tol), psi).probability;
    m.c_d1u2 = conditional_probability(d1, u2, psi, tol);
    m.c_d2u1 = conditional_probability(d2, u1, psi, tol);
    m.p_u1u2 = born_probability(product(u1, u2, tol), psi).probability;

    const HardyClaimSet& c = kClaimedValues;
    auto verdict = [tol](std::string name, double claimed, double measured) {
        return ClaimVerdict{std::move(name), claimed, measured, std::abs(claimed - measured) <= tol};
    };
    return AuditReport{i,
                       j,
                       interp,
                       m,
                       {verdict("p_joint", c.p_joint, m.p_joint), verdict("c_d1u2", c.c_d1u2, m.c_d1u2),
                        verdict("c_d2u1", c.c_d2u1, m.c_d2u1), verdict("p_u1u2", c.p_u1u2, m.p_u1u2)}};
}

PairEnumeration enumerate_all_pairs(Interpretation interp, double tol) {
    PairEnumeration out{interp, {}, 0.0, 0};
    for (BellIndex i : kBellOrder) {
        for (BellIndex j : kBellOrder) {
            AuditReport r = audit_pair(i, j, interp, tol);
            out.total_p_joint += r.measured.p_joint;
            if (r.all_pass()) ++out.pairs_passing_all;
            out.reports.push_back(std::move(r));
        }
    }
    return out;
}

ProbabilityTable quantum_probability_table(BellIndex i, BellIndex j, Interpretation interp, double tol) {
    const StateVector psi = make_total_state();
    const ObservableSet obs = build_observables(i, j, interp);
    ProbabilityTable t;
    for (Context c : kContexts) t[c] = joint_distribution(obs[alice_of(c)], obs[bob_of(c)], psi, tol);
    return t;
}

}  // namespace telehardy
