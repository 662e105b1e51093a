#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "telehardy/observables.hpp"
#include "telehardy/simplex.hpp"
#include "telehardy/tables.hpp"

namespace telehardy {

using ExactTable = BasicProbabilityTable<Rational>;

/// Definite values for all four observables in one hidden-variable state.
struct DeterministicAssignment {
    bool d1 = false;
    bool d2 = false;
    bool u1 = false;
    bool u2 = false;

    int value(Observable o) const;
    /// d1 d2 u1 u2 as bits, d1 most significant.
    std::size_t index() const;
    static DeterministicAssignment from_index(std::size_t index);
    /// True when the assignment produces outcome (a, b) in context c.
    bool hits(Context c, int a, int b) const;
};

const std::array<DeterministicAssignment, 16>& all_assignments();

/// Mixture of deterministic assignments, weights indexed by DeterministicAssignment::index().
struct LhvModel {
    std::array<Rational, 16> weights{};

    ExactTable predicted_table() const;
};

struct CellRef {
    Context context;
    int a;
    int b;

    friend bool operator==(const CellRef&, const CellRef&) = default;
};

/// Linear functional over table cells. A valid witness is >= 0 on every
/// deterministic assignment and < 0 on the table.
struct SeparatingFunctional {
    ExactTable coefficients;

    Rational evaluate(const ExactTable& table) const;
    Rational evaluate(const DeterministicAssignment& v) const;
};

struct DeductionStep {
    enum class Rule { Premise, ElementOfReality, Locality, Contradiction };

    Rule rule;
    CellRef cell;
    /// Observable whose value the step fixes (ElementOfReality / Locality).
    std::optional<Observable> derived;
    int derived_value = 0;
    std::string statement;
};

std::string_view rule_name(DeductionStep::Rule r);

/// Counterfactual chain: a positive-probability event, then forced values
/// read off zero-probability cells, ending in a forbidden cell.
struct DeductionChain {
    std::vector<DeductionStep> steps;

    /// -premise + Σ (zero cells used by the chain).
    SeparatingFunctional functional() const;
};

using InfeasibilityWitness = std::variant<DeductionChain, SeparatingFunctional>;

enum class Verdict { Feasible, Infeasible };

struct LhvCertificate {
    Verdict verdict;
    std::optional<LhvModel> model;
    std::optional<InfeasibilityWitness> witness;
};

inline constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 20;

/// Closest rational with denominator <= max_den; throws Rationalization when
/// it is farther than `tol` from x.
Rational rationalize(double x, double tol = kTolerance, std::int64_t max_den = kMaxDenominator);
ExactTable rationalize(const ProbabilityTable& t, double tol = kTolerance, std::int64_t max_den = kMaxDenominator);
ProbabilityTable to_double(const ExactTable& t);

/// Throws MalformedTable for negative cells or a context not summing to exactly 1.
void check_table(const ExactTable& t);

/// Exact decision of whether a mixture of the 16 deterministic assignments
/// reproduces every context of the table.
LhvCertificate feasibility(const ExactTable& table);
LhvCertificate feasibility(const ProbabilityTable& table, double tol = kTolerance);

/// Tries every positive cell as premise; returns the first chain that ends in a contradiction.
std::optional<DeductionChain> find_deduction_chain(const ExactTable& table);

struct CertificateCheck {
    bool passed;
    std::string reason;
};

CertificateCheck validate_certificate(const ExactTable& table, const LhvCertificate& cert);

struct TraceStep {
    int number;  // 1..4
    std::string rule;
    bool fired;
    std::string statement;
};

struct DeductionTrace {
    bool contradiction = false;
    /// First deduction whose premise did not hold.
    std::optional<int> stopped_at;
    std::vector<TraceStep> steps;
};

/// Symbolic four-step argument over the claim values. Rules fire only on
/// values equal to 1 (or 0) within `tol`.
DeductionTrace replay_deductions(const HardyClaimSet& claims, double tol = kTolerance);

struct ExactClaims {
    Rational p_joint;
    Rational c_d1u2;
    Rational c_d2u1;
    Rational p_u1u2;
};

struct Marginals {
    Rational d1;  // P(D1=1)
    Rational d2;
    Rational u1;
    Rational u2;
};

/// P(X=1) for each observable on the total state (pair psi-,psi-, fixed basis),
/// rationalized. These are the derived inputs of the claims table.
Marginals derived_marginals();

/// Fill the four contexts from the claims and single-observable marginals.
/// Each 2x2 table is pinned by its two marginals plus one claimed cell.
ExactTable complete_claims_table(const ExactClaims& claims, const Marginals& marginals);

/// The stated claims {p_joint, 1, 1, 0} completed with derived_marginals().
ExactTable claims_table(const Rational& p_joint = Rational(1, 16));

}  // namespace telehardy
