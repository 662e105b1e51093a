#include "telehardy/lhv.hpp"

#include <cmath>
#include <map>

namespace telehardy {

int DeterministicAssignment::value(Observable o) const {
    switch (o) {
        case Observable::D1: return d1;
        case Observable::D2: return d2;
        case Observable::U1: return u1;
        case Observable::U2: return u2;
    }
    return 0;
}

std::size_t DeterministicAssignment::index() const {
    return (std::size_t(d1) << 3) | (std::size_t(d2) << 2) | (std::size_t(u1) << 1) | std::size_t(u2);
}

DeterministicAssignment DeterministicAssignment::from_index(std::size_t index) {
    return {bool(index & 8U), bool(index & 4U), bool(index & 2U), bool(index & 1U)};
}

bool DeterministicAssignment::hits(Context c, int a, int b) const {
    return value(alice_of(c)) == a && value(bob_of(c)) == b;
}

const std::array<DeterministicAssignment, 16>& all_assignments() {
    static const auto all = [] {
        std::array<DeterministicAssignment, 16> out{};
        for (std::size_t k = 0; k < 16; ++k) out[k] = DeterministicAssignment::from_index(k);
        return out;
    }();
    return all;
}

ExactTable LhvModel::predicted_table() const {
    ExactTable t;
    for (const auto& v : all_assignments()) {
        const Rational& w = weights[v.index()];
        for (Context c : kContexts) t.at(c, v.value(alice_of(c)), v.value(bob_of(c))) += w;
    }
    return t;
}

Rational SeparatingFunctional::evaluate(const ExactTable& table) const {
    Rational sum = 0;
    for (Context c : kContexts) {
        for (std::size_t k = 0; k < 4; ++k) sum += coefficients[c][k] * table[c][k];
    }
    return sum;
}

Rational SeparatingFunctional::evaluate(const DeterministicAssignment& v) const {
    Rational sum = 0;
    for (Context c : kContexts) sum += coefficients.at(c, v.value(alice_of(c)), v.value(bob_of(c)));
    return sum;
}

std::string_view rule_name(DeductionStep::Rule r) {
    switch (r) {
        case DeductionStep::Rule::Premise: return "premise";
        case DeductionStep::Rule::ElementOfReality: return "element-of-reality";
        case DeductionStep::Rule::Locality: return "locality";
        case DeductionStep::Rule::Contradiction: return "contradiction";
    }
    return "?";
}

SeparatingFunctional DeductionChain::functional() const {
    SeparatingFunctional f;
    for (const auto& s : steps) {
        switch (s.rule) {
            case DeductionStep::Rule::Premise: f.coefficients.at(s.cell.context, s.cell.a, s.cell.b) -= 1; break;
            case DeductionStep::Rule::ElementOfReality:
            case DeductionStep::Rule::Contradiction: f.coefficients.at(s.cell.context, s.cell.a, s.cell.b) += 1; break;
            case DeductionStep::Rule::Locality: break;
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Rationalization

Rational rationalize(double x, double tol, std::int64_t max_den) {
    using boost::multiprecision::cpp_int;
    if (!std::isfinite(x)) throw Error(ErrorKind::Rationalization, "non-finite value");
    const Rational exact(x);
    cpp_int n = numerator(exact);
    cpp_int d = denominator(exact);
    Rational best;
    if (d <= max_den) {
        best = exact;
    } else {
        // Continued-fraction convergents, then the best semiconvergent below the bound.
        cpp_int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        for (;;) {
            const cpp_int a = n / d;
            const cpp_int q2 = q0 + a * q1;
            if (q2 > max_den) break;
            const cpp_int p2 = p0 + a * p1;
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            const cpp_int r = n - a * d;
            n = d;
            d = r;
            if (d == 0) break;
        }
        const cpp_int k = (cpp_int(max_den) - q0) / q1;
        const Rational semi(p0 + k * p1, q0 + k * q1);
        const Rational conv(p1, q1);
        best = abs(conv - exact) <= abs(semi - exact) ? conv : semi;
    }
    const double err = std::abs(static_cast<double>(Rational(best - exact)));
    if (err > tol) {
        throw Error(ErrorKind::Rationalization, std::to_string(x) + " has no rational with denominator <= " +
                                                    std::to_string(max_den) + " within tolerance");
    }
    return best;
}

ExactTable rationalize(const ProbabilityTable& t, double tol, std::int64_t max_den) {
    ExactTable out;
    for (Context c : kContexts) {
        for (std::size_t k = 0; k < 4; ++k) out[c][k] = rationalize(t[c][k], tol, max_den);
    }
    return out;
}

ProbabilityTable to_double(const ExactTable& t) {
    ProbabilityTable out;
    for (Context c : kContexts) {
        for (std::size_t k = 0; k < 4; ++k) out[c][k] = static_cast<double>(t[c][k]);
    }
    return out;
}

void check_table(const ExactTable& t) {
    for (Context c : kContexts) {
        Rational sum = 0;
        for (const auto& v : t[c]) {
            if (v < 0) throw Error(ErrorKind::MalformedTable, std::string(context_name(c)) + " has a negative cell");
            sum += v;
        }
        if (sum != 1) {
            throw Error(ErrorKind::MalformedTable, std::string(context_name(c)) + " sums to " + sum.str());
        }
    }
}

// ---------------------------------------------------------------------------
// Feasibility

namespace {

std::string cell_text(Context c, int a, int b) {
    return "P(" + std::string(observable_name(alice_of(c))) + "=" + std::to_string(a) + "," +
           std::string(observable_name(bob_of(c))) + "=" + std::to_string(b) + ")";
}

std::string value_text(Observable o, int v) { return std::string(observable_name(o)) + "=" + std::to_string(v); }

std::optional<DeductionChain> chain_from(const ExactTable& t, CellRef premise) {
    std::map<Observable, int> known;
    DeductionChain chain;
    const Observable pa = alice_of(premise.context);
    const Observable pb = bob_of(premise.context);
    known[pa] = premise.a;
    known[pb] = premise.b;
    chain.steps.push_back({DeductionStep::Rule::Premise, premise, std::nullopt, 0,
                           cell_text(premise.context, premise.a, premise.b) + " = " +
                               t.at(premise.context, premise.a, premise.b).str() +
                               " > 0, so some run has " + value_text(pa, premise.a) + " and " +
                               value_text(pb, premise.b)});

    for (bool progress = true; progress;) {
        progress = false;
        for (Context c : kContexts) {
            const Observable x = alice_of(c);
            const Observable y = bob_of(c);
            for (int a = 0; a < 2 && !progress; ++a) {
                for (int b = 0; b < 2 && !progress; ++b) {
                    if (t.at(c, a, b) != 0) continue;
                    const bool kx = known.count(x) > 0;
                    const bool ky = known.count(y) > 0;
                    if (kx && ky && known[x] == a && known[y] == b) {
                        chain.steps.push_back({DeductionStep::Rule::Contradiction, {c, a, b}, std::nullopt, 0,
                                               "the run has " + value_text(x, a) + " and " + value_text(y, b) +
                                                   " but " + cell_text(c, a, b) + " = 0"});
                        return chain;
                    }
                    // One side fixed by the run forces the other side away from the forbidden cell.
                    std::optional<std::pair<Observable, int>> derived;
                    Observable from = x;
                    if (kx && !ky && known[x] == a) {
                        derived = {y, 1 - b};
                    } else if (ky && !kx && known[y] == b) {
                        derived = {x, 1 - a};
                        from = y;
                    }
                    if (!derived) continue;
                    known[derived->first] = derived->second;
                    chain.steps.push_back(
                        {DeductionStep::Rule::ElementOfReality, {c, a, b}, derived->first, derived->second,
                         cell_text(c, a, b) + " = 0 and " + value_text(from, known[from]) + ", so " +
                             value_text(derived->first, derived->second) + " is predictable with certainty"});
                    chain.steps.push_back({DeductionStep::Rule::Locality, {c, a, b}, derived->first, derived->second,
                                           value_text(derived->first, derived->second) +
                                               " is unaffected by the distant party's choice of measurement"});
                    progress = true;
                }
            }
            if (progress) break;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<DeductionChain> find_deduction_chain(const ExactTable& table) {
    for (Context c : kContexts) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                if (table.at(c, a, b) <= 0) continue;
                if (auto chain = chain_from(table, {c, a, b})) return chain;
            }
        }
    }
    return std::nullopt;
}

LhvCertificate feasibility(const ExactTable& table) {
    check_table(table);
    // Rows: 16 table cells; columns: 16 deterministic assignments.
    std::vector<std::vector<Rational>> a(16, std::vector<Rational>(16));
    std::vector<Rational> b(16);
    for (Context c : kContexts) {
        for (std::size_t k = 0; k < 4; ++k) {
            const std::size_t row = static_cast<std::size_t>(c) * 4 + k;
            b[row] = table[c][k];
            for (const auto& v : all_assignments()) {
                if (v.hits(c, static_cast<int>(k / 2), static_cast<int>(k % 2))) a[row][v.index()] = 1;
            }
        }
    }
    LpFeasibility lp = solve_feasibility(a, b);
    if (lp.feasible) {
        LhvModel m;
        for (std::size_t j = 0; j < 16; ++j) m.weights[j] = lp.solution[j];
        return {Verdict::Feasible, m, std::nullopt};
    }
    if (auto chain = find_deduction_chain(table)) return {Verdict::Infeasible, std::nullopt, std::move(*chain)};
    SeparatingFunctional f;
    for (Context c : kContexts) {
        for (std::size_t k = 0; k < 4; ++k) f.coefficients[c][k] = lp.farkas[static_cast<std::size_t>(c) * 4 + k];
    }
    return {Verdict::Infeasible, std::nullopt, std::move(f)};
}

LhvCertificate feasibility(const ProbabilityTable& table, double tol) { return feasibility(rationalize(table, tol)); }

// ---------------------------------------------------------------------------
// Certificate validation

namespace {

CertificateCheck fail(std::string why) { return {false, std::move(why)}; }

CertificateCheck check_functional(const ExactTable& table, const SeparatingFunctional& f) {
    for (const auto& v : all_assignments()) {
        if (f.evaluate(v) < 0) {
            return fail("functional is negative on deterministic assignment " + std::to_string(v.index()));
        }
    }
    const Rational on_table = f.evaluate(table);
    if (on_table >= 0) return fail("functional is " + on_table.str() + " on the table; no strict violation");
    return {true, "functional >= 0 on all 16 assignments and " + on_table.str() + " < 0 on the table"};
}

CertificateCheck check_chain(const ExactTable& table, const DeductionChain& chain) {
    using Rule = DeductionStep::Rule;
    if (chain.steps.size() < 2) return fail("chain too short");
    if (chain.steps.front().rule != Rule::Premise) return fail("chain does not start with a premise");
    if (chain.steps.back().rule != Rule::Contradiction) return fail("chain does not end in a contradiction");

    std::map<Observable, int> known;
    std::optional<Observable> last_derived;
    for (std::size_t n = 0; n < chain.steps.size(); ++n) {
        const auto& s = chain.steps[n];
        const Observable x = alice_of(s.cell.context);
        const Observable y = bob_of(s.cell.context);
        const Rational& p = table.at(s.cell.context, s.cell.a, s.cell.b);
        const std::string where = "step " + std::to_string(n + 1) + ": ";
        switch (s.rule) {
            case Rule::Premise:
                if (n != 0) return fail(where + "premise must come first");
                if (p <= 0) return fail(where + "premise cell has zero probability");
                known[x] = s.cell.a;
                known[y] = s.cell.b;
                break;
            case Rule::ElementOfReality: {
                if (p != 0) return fail(where + "cell is not a zero-probability event");
                if (!s.derived || (*s.derived != x && *s.derived != y)) return fail(where + "derived observable not in the cell's context");
                const Observable other = *s.derived == x ? y : x;
                const int other_val = other == x ? s.cell.a : s.cell.b;
                const int forbidden = *s.derived == x ? s.cell.a : s.cell.b;
                if (!known.count(other) || known[other] != other_val) return fail(where + "conditioning value not established");
                if (s.derived_value != 1 - forbidden) return fail(where + "derived value does not avoid the forbidden cell");
                if (known.count(*s.derived) && known[*s.derived] != s.derived_value) return fail(where + "derived value conflicts");
                known[*s.derived] = s.derived_value;
                last_derived = s.derived;
                break;
            }
            case Rule::Locality:
                if (!s.derived || s.derived != last_derived || known[*s.derived] != s.derived_value) {
                    return fail(where + "locality step must carry the previously derived value");
                }
                break;
            case Rule::Contradiction:
                if (n + 1 != chain.steps.size()) return fail(where + "contradiction must be last");
                if (p != 0) return fail(where + "contradicted cell is not a zero-probability event");
                if (!known.count(x) || !known.count(y) || known[x] != s.cell.a || known[y] != s.cell.b) {
                    return fail(where + "established values do not land in the contradicted cell");
                }
                break;
        }
    }
    CertificateCheck f = check_functional(table, chain.functional());
    if (!f.passed) return fail("chain functional: " + f.reason);
    return {true, "deduction chain replays against the table; " + f.reason};
}

}  // namespace

CertificateCheck validate_certificate(const ExactTable& table, const LhvCertificate& cert) {
    try {
        check_table(table);
    } catch (const Error& e) {
        return fail(e.what());
    }
    if (cert.verdict == Verdict::Feasible) {
        if (!cert.model || cert.witness) return fail("feasible certificate must carry a model and no witness");
        Rational total = 0;
        for (const auto& w : cert.model->weights) {
            if (w < 0) return fail("negative model weight");
            total += w;
        }
        if (total != 1) return fail("model weights sum to " + total.str());
        const ExactTable predicted = cert.model->predicted_table();
        for (Context c : kContexts) {
            for (std::size_t k = 0; k < 4; ++k) {
                if (predicted[c][k] != table[c][k]) {
                    return fail("model predicts " + predicted[c][k].str() + " for " +
                                cell_text(c, static_cast<int>(k / 2), static_cast<int>(k % 2)) + ", table has " +
                                table[c][k].str());
                }
            }
        }
        return {true, "model reproduces all 16 cells exactly"};
    }
    if (cert.model || !cert.witness) return fail("infeasible certificate must carry a witness and no model");
    if (const auto* chain = std::get_if<DeductionChain>(&*cert.witness)) return check_chain(table, *chain);
    return check_functional(table, std::get<SeparatingFunctional>(*cert.witness));
}

// ---------------------------------------------------------------------------
// Symbolic replay

DeductionTrace replay_deductions(const HardyClaimSet& claims, double tol) {
    DeductionTrace tr;
    auto is_one = [tol](double v) { return std::abs(v - 1.0) <= tol; };

    const bool run_exists = claims.p_joint > tol;
    const bool first = run_exists && is_one(claims.c_d1u2);
    tr.steps.push_back({1, "element-of-reality", first,
                        !run_exists ? "P(D1=1,D2=1) = 0: no run with D1=D2=1 exists"
                        : first     ? "run with D1=D2=1 exists and P(U2=1|D1=1) = 1, so U2=1 is an element of reality"
                                    : "P(U2=1|D1=1) is not 1, so U2 is not predictable with certainty"});
    if (!first) {
        tr.stopped_at = 1;
        return tr;
    }
    tr.steps.push_back({2, "locality", true, "measuring U1 instead of D1 on Alice's side leaves U2=1 unchanged"});

    const bool third = is_one(claims.c_d2u1);
    tr.steps.push_back({3, "element-of-reality", third,
                        third ? "P(U1=1|D2=1) = 1, so U1=1 is an element of reality"
                              : "P(U1=1|D2=1) is not 1, so U1 is not predictable with certainty"});
    if (!third) {
        tr.stopped_at = 3;
        return tr;
    }

    const bool fourth = std::abs(claims.p_u1u2) <= tol;
    tr.steps.push_back({4, "contradiction", fourth,
                        fourth ? "the run would give U1=U2=1, but P(U1=1,U2=1) = 0"
                               : "the run gives U1=U2=1, which P(U1=1,U2=1) > 0 permits"});
    if (fourth) {
        tr.contradiction = true;
    } else {
        tr.stopped_at = 4;
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Claims table

Marginals derived_marginals() {
    const StateVector psi = make_total_state();
    const ObservableSet obs = build_observables(BellIndex::PsiMinus, BellIndex::PsiMinus, Interpretation::FixedBasis);
    auto p = [&](Observable o) { return rationalize(born_probability(obs[o], psi).probability); };
    return {p(Observable::D1), p(Observable::D2), p(Observable::U1), p(Observable::U2)};
}

ExactTable complete_claims_table(const ExactClaims& c, const Marginals& m) {
    ExactTable t;
    t.at(Context::D1D2, 1, 1) = c.p_joint;
    t.at(Context::D1D2, 1, 0) = m.d1 - c.p_joint;
    t.at(Context::D1D2, 0, 1) = m.d2 - c.p_joint;
    t.at(Context::D1D2, 0, 0) = 1 - m.d1 - m.d2 + c.p_joint;

    t.at(Context::D1U2, 1, 1) = m.d1 * c.c_d1u2;
    t.at(Context::D1U2, 1, 0) = m.d1 * (1 - c.c_d1u2);
    t.at(Context::D1U2, 0, 1) = m.u2 - m.d1 * c.c_d1u2;
    t.at(Context::D1U2, 0, 0) = 1 - m.d1 - m.u2 + m.d1 * c.c_d1u2;

    t.at(Context::U1D2, 1, 1) = m.d2 * c.c_d2u1;
    t.at(Context::U1D2, 0, 1) = m.d2 * (1 - c.c_d2u1);
    t.at(Context::U1D2, 1, 0) = m.u1 - m.d2 * c.c_d2u1;
    t.at(Context::U1D2, 0, 0) = 1 - m.d2 - m.u1 + m.d2 * c.c_d2u1;

    t.at(Context::U1U2, 1, 1) = c.p_u1u2;
    t.at(Context::U1U2, 1, 0) = m.u1 - c.p_u1u2;
    t.at(Context::U1U2, 0, 1) = m.u2 - c.p_u1u2;
    t.at(Context::U1U2, 0, 0) = 1 - m.u1 - m.u2 + c.p_u1u2;

    check_table(t);
    return t;
}

ExactTable claims_table(const Rational& p_joint) {
    return complete_claims_table({p_joint, 1, 1, 0}, derived_marginals());
}

}  // namespace telehardy
