// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "telehardy/cli.hpp"
#include "telehardy/lhv.hpp"
#include "telehardy/observables.hpp"
#include "telehardy/report.hpp"
#include "telehardy/sampler.hpp"
#include "test_support.hpp"

using namespace telehardy;

namespace {

constexpr double kTol = 1e-12;

// Collects failed sub-checks for one criterion.
class Criterion {
public:
    void require(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) failures_.push_back(what);
    }
    bool passed() const { return failures_.empty(); }
    int checks() const { return checks_; }
    const std::vector<std::string>& failures() const { return failures_; }

private:
    int checks_ = 0;
    std::vector<std::string> failures_;
};

json cli_json(const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = cli::run(args, out, err);
    return json::parse(out.str());
}

bool near(double a, double b, double tol = kTol) { return std::abs(a - b) <= tol; }

std::string str(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

// 1. Expansion fidelity
void expansion_fidelity(Criterion& c) {
    const PrintedTables& printed = load_expansion_tables(TELEHARDY_DEFAULT_TABLE);
    const ExpansionReport alice = verify_expansion_against_printed(kAlicePair, printed, kTol);
    c.require(alice.all_exact, "A1 expansion not exact");
    const std::array<StateVector, 4> slot2{ket_up(Slot::Two), ket_up(Slot::Two), ket_down(Slot::Two),
                                           ket_down(Slot::Two)};
    for (std::size_t n = 0; n < 4; ++n) {
        const BranchVerdict& b = alice.branches[n];
        const std::string label(bell_label(b.index));
        c.require(b.exact_match && b.exact_deviation <= kTol, "A1 branch " + label + " deviation " + str(b.exact_deviation));
        c.require(near(std::abs(b.coefficient), 0.5), "A1 branch " + label + " |coefficient| != 1/2");
        c.require(b.residual && near(reduced_projector_fidelity(*b.residual, Slot::Two, slot2[n]), 1.0),
                  "A1 branch " + label + " slot-2 residual");
    }

    const ExpansionReport bob = verify_expansion_against_printed(kBobPair, printed, kTol);
    c.require(bob.all_up_to_phase, "2B expansion not equal up to phase");
    for (const BranchVerdict& b : bob.branches) {
        c.require(b.phase.has_value() && b.phase_deviation <= kTol,
                  "2B branch " + std::string(bell_label(b.index)) + " phase missing or deviation " +
                      str(b.phase_deviation));
    }

    int code = -1;
    const json a1 = cli_json({"expand", "--slots", "A1"}, code);
    c.require(code == cli::kExitOk && a1["results"]["all_exact"].get<bool>(), "expand --slots A1 via CLI");
    const json b2 = cli_json({"expand", "--slots", "2B"}, code);
    c.require(code == cli::kExitOk, "expand --slots 2B exit code");
    for (const auto& b : b2["results"]["branches"]) c.require(b.contains("phase"), "2B CLI phase field");
}

// 2. Joint probability
void joint_probability(Criterion& c) {
    const StateVector psi = make_total_state();
    const ObservableOp dd = product(build_d(kAlicePair, BellIndex::PsiMinus), build_d(kBobPair, BellIndex::PsiMinus));
    const double p = born_probability(dd, psi).probability;
    c.require(near(p, 1.0 / 16), "<D1 D2> = " + str(p));

    for (Interpretation interp : kInterpretations) {
        const PairEnumeration e = enumerate_all_pairs(interp, kTol);
        c.require(e.reports.size() == 16, "16 pairs");
        for (const auto& r : e.reports) c.require(near(r.measured.p_joint, 1.0 / 16), "pair p_joint " + str(r.measured.p_joint));
        c.require(near(e.total_p_joint, 1.0), "sum over pairs " + str(e.total_p_joint));
    }
}

// 3. Claims under the fixed-basis reading, plus the reported conditional under both readings.
void fixed_basis_claims(Criterion& c) {
    const AuditReport fixed = audit_pair(BellIndex::PsiMinus, BellIndex::PsiMinus, Interpretation::FixedBasis, kTol);
    c.require(fixed.measured.p_u1u2 == 0.0, "P(U1=1,U2=1) = " + str(fixed.measured.p_u1u2) + ", not exactly 0");
    c.require(near(fixed.measured.c_d1u2, 1.0), "P(U2=1|D1=1) = " + str(fixed.measured.c_d1u2));
    const double comm = commutator_norm(build_d(kAlicePair, BellIndex::PsiMinus), build_d(kBobPair, BellIndex::PsiMinus));
    c.require(comm <= kTol, "[D1,D2] norm " + str(comm));

    // Independent Kronecker oracle for P(U1=1|D2=1) with U1 = |+><+| on slot 1.
    using namespace oracle;
    const Vec s = total_state();
    const Mat d2 = on_2B(outer(bell(0)));
    const Mat u1 = on_1(outer(up()));
    const double oracle_value = sandwich(s, mul(d2, u1)).real() / sandwich(s, d2).real();
    c.require(near(fixed.measured.c_d2u1, oracle_value),
              "fixed P(U1=1|D2=1) = " + str(fixed.measured.c_d2u1) + ", oracle " + str(oracle_value));

    const AuditReport collapsed =
        audit_pair(BellIndex::PsiMinus, BellIndex::PsiMinus, Interpretation::CollapsedState, kTol);
    c.require(near(collapsed.measured.c_d2u1, 1.0), "collapsed P(U1=1|D2=1) = " + str(collapsed.measured.c_d2u1));

    int code = -1;
    const json f = cli_json({"audit", "--d1", "psi-", "--d2", "psi-", "--interp", "fixed"}, code);
    c.require(code == cli::kExitOk && near(f["results"]["measured"]["c_d2u1"].get<double>(), oracle_value),
              "audit report shows the fixed-basis value");
    const json k = cli_json({"audit", "--d1", "psi-", "--d2", "psi-", "--interp", "collapsed"}, code);
    c.require(code == cli::kExitOk && near(k["results"]["measured"]["c_d2u1"].get<double>(), 1.0),
              "audit report shows the collapsed-state value");
}

// 4. LHV contradiction
void lhv_contradiction(Criterion& c) {
    int code = -1;
    const json j = cli_json({"lhv", "--source", "paper-claims"}, code);
    c.require(code == cli::kExitOk, "lhv exit code " + std::to_string(code));
    c.require(j["results"]["certificate"]["verdict"] == "infeasible", "verdict not infeasible");
    c.require(j["results"]["certificate"]["witness"]["kind"] == "deduction-chain", "witness is not a chain");
    c.require(j["results"]["validation"]["passed"].get<bool>(), "certificate validation");

    const ExactTable t = claims_table();
    const LhvCertificate cert = feasibility(t);
    const auto* chain = cert.witness ? std::get_if<DeductionChain>(&*cert.witness) : nullptr;
    c.require(chain != nullptr, "library witness is not a chain");
    if (chain) {
        using Rule = DeductionStep::Rule;
        const std::vector<Rule> rules{Rule::Premise,          Rule::ElementOfReality, Rule::Locality,
                                      Rule::ElementOfReality, Rule::Locality,         Rule::Contradiction};
        bool same = chain->steps.size() == rules.size();
        for (std::size_t k = 0; same && k < rules.size(); ++k) same = chain->steps[k].rule == rules[k];
        c.require(same, "chain does not replay premise, two element-of-reality and locality steps, contradiction");
    }
    c.require(validate_certificate(t, cert).passed, "validate_certificate on claims table");

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> den(4, 5000);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = den(rng);
        const Rational p(std::uniform_int_distribution<int>(1, d / 4)(rng), d);
        const ExactTable tp = claims_table(p);
        const LhvCertificate cp = feasibility(tp);
        c.require(cp.verdict == Verdict::Infeasible && validate_certificate(tp, cp).passed,
                  "claims with p_joint = " + p.str() + " not certified infeasible");
    }
}

// 5. Certificate soundness
void certificate_soundness(Criterion& c) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const ExactTable t = test::random_mixture(rng).predicted_table();
        const LhvCertificate cert = feasibility(t);
        const std::string tag = "table " + std::to_string(trial);
        c.require(cert.verdict == Verdict::Feasible && cert.model.has_value(), tag + " not feasible");
        if (!cert.model) continue;
        c.require(cert.model->predicted_table() == t, tag + " model does not reproduce table exactly");
        c.require(validate_certificate(t, cert).passed, tag + " validation");
        LhvCertificate bad = cert;
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 15)(rng);
        bad.model->weights[k] += Rational(1, std::uniform_int_distribution<int>(2, 1000)(rng));
        c.require(!validate_certificate(t, bad).passed, tag + " perturbed weight still validates");
    }
}

// 6. Sampler statistics
void sampler_statistics(Criterion& c) {
    const StateVector psi = make_total_state();
    const ObservableSet obs = build_observables(BellIndex::PsiMinus, BellIndex::PsiMinus, Interpretation::FixedBasis);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const CountTable t = sample(psi, RunConfig{obs[Observable::D1], obs[Observable::D2], 160000, seed, 4});
        const double f = static_cast<double>(t.counts[3]) / 160000.0;
        c.require(std::abs(f - 0.0625) <= 0.005, "seed " + std::to_string(seed) + " P(1,1) = " + str(f));
    }
    for (std::uint64_t shots : {1ULL, 10ULL, 1000ULL, 100000ULL, 400000ULL}) {
        const CountTable t = sample(psi, RunConfig{obs[Observable::U1], obs[Observable::U2], shots, shots + 3, 4});
        c.require(t.counts[3] == 0, "U1U2 (1,1) count nonzero at " + std::to_string(shots) + " shots");
        c.require(t.total() == shots, "U1U2 total");
    }
}

// 7. Invariant suite
void invariant_suite(Criterion& c) {
    const auto& slots = canonical_slots();
    for (Slot x : slots) {
        for (Slot y : slots) {
            if (x == y) continue;
            CMatrix sum = CMatrix::Zero(16, 16);
            for (BellIndex i : kBellOrder) sum += build_d({x, y}, i).matrix();
            c.require((sum - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() <= kTol,
                      "Bell completeness on " + slot_pair_name({x, y}));
        }
    }

    for (Interpretation interp : kInterpretations) {
        for (BellIndex i : kBellOrder) {
            for (BellIndex j : kBellOrder) {
                const ObservableSet obs = build_observables(i, j, interp);
                for (const ObservableOp& op : obs.ops) {
                    c.require(hermiticity_defect(op.matrix()) <= kTol, op.name() + " Hermiticity");
                    c.require(idempotence_defect(op.matrix()) <= kTol, op.name() + " idempotence");
                }
            }
        }
    }

    const StateVector psi = make_total_state();
    c.require(near(psi.amplitudes().squaredNorm(), 1.0), "total state normalization");
    for (SlotPair pair : {kAlicePair, kBobPair}) {
        const BranchExpansion ex = expand_in_bell_basis(psi, pair);
        for (const Branch& b : ex.branches)
            c.require(b.residual && near(b.residual->amplitudes().squaredNorm(), 1.0), "residual normalization");
    }

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const StateVector singlet = make_singlet();
    const SlotList pair{Slot::One, Slot::Two};
    for (int n = 0; n < 100; ++n) {
        const double theta = std::acos(1.0 - 2.0 * unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        const ObservableOp a = ObservableOp::projector_onto("n1", ket_along(Slot::One, theta, phi), pair);
        const ObservableOp b = ObservableOp::projector_onto("n2", ket_along(Slot::Two, theta, phi), pair);
        const double p = born_probability(product(a, b), singlet).probability;
        c.require(std::abs(p) <= kTol, "singlet same-direction probability " + str(p));
    }

    auto reconstructs = [&](const StateVector& s) {
        for (Slot x : s.slots())
            for (Slot y : s.slots()) {
                if (x == y) continue;
                const RawState back = expand_in_bell_basis(s, {x, y}).reconstruct();
                c.require((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff() <= kTol,
                          "reconstruction over " + slot_pair_name({x, y}));
            }
    };
    reconstructs(psi);
    for (int n = 0; n < 20; ++n) reconstructs(test::random_state(rng, slots));
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
        {"expansion fidelity", expansion_fidelity},
        {"joint probability", joint_probability},
        {"fixed-basis claims and reported conditional", fixed_basis_claims},
        {"LHV contradiction", lhv_contradiction},
        {"certificate soundness", certificate_soundness},
        {"sampler statistics", sampler_statistics},
        {"invariant suite", invariant_suite},
    };
    int failed = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        Criterion c;
        try {
            criteria[n].second(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        std::cout << (c.passed() ? "PASS" : "FAIL") << "  criterion " << n + 1 << ": " << criteria[n].first << " ("
                  << c.checks() << " checks)\n";
        for (const auto& f : c.failures()) std::cout << "      " << f << '\n';
        if (!c.passed()) ++failed;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
