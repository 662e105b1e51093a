#include "telehardy/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "telehardy/report.hpp"

namespace telehardy::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string format = "json";
    double tolerance = kTolerance;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--tolerance", c.tolerance, "comparison tolerance")->check(CLI::PositiveNumber);
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

std::string fmt(Amplitude z) {
    std::ostringstream s;
    s << std::setprecision(12) << z.real();
    if (std::abs(z.imag()) > 0) s << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return s.str();
}

BellIndex require_bell(const std::string& label) {
    auto b = parse_bell(label);
    if (!b) throw UsageError("bad Bell label '" + label + "' (use psi-, psi+, phi-, phi+)");
    return *b;
}

Interpretation require_interp(const std::string& label) {
    auto i = parse_interpretation(label);
    if (!i) throw UsageError("bad interpretation '" + label + "' (use fixed or collapsed)");
    return *i;
}

void emit(std::ostream& out, const ReportEnvelope& env, const Common& c, const std::string& table_text) {
    if (c.format == "json") {
        out << to_json(env).dump(2) << '\n';
    } else {
        out << "# " << env.command << "  (" << env.tool_version << ", tolerance " << fmt(env.tolerance) << ")\n";
        out << table_text;
    }
}

// ---------------------------------------------------------------------------

struct ExpandArgs {
    Common common;
    std::string slots;
    std::string table_file = TELEHARDY_DEFAULT_TABLE;
};

int cmd_expand(const ExpandArgs& a, std::ostream& out) {
    if (a.slots != "A1" && a.slots != "2B") throw UsageError("--slots must be A1 or 2B");
    const SlotPair pair = *parse_slot_pair(a.slots);
    PrintedTables tables;
    try {
        tables = load_expansion_tables(a.table_file);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const ExpansionReport rep = verify_expansion_against_printed(pair, tables, a.common.tolerance);

    ReportEnvelope env{"expand", {{"slots", a.slots}, {"table_file", a.table_file}}, to_json(rep), kToolVersion,
                       a.common.tolerance};
    env.results["printed_overall"] = to_json(tables.at(a.slots).overall);

    std::ostringstream t;
    t << "expansion over " << a.slots << ", residual slots " << slot_list_name(rep.residual_slots) << '\n';
    t << std::left << std::setw(7) << "bell" << std::setw(26) << "coefficient" << std::setw(8) << "exact"
      << std::setw(8) << "phase" << "phase factor\n";
    for (const auto& b : rep.branches) {
        t << std::setw(7) << bell_label(b.index) << std::setw(26) << (b.empty ? "empty branch" : fmt(b.coefficient))
          << std::setw(8) << (b.exact_match ? "yes" : "no") << std::setw(8) << (b.phase_match ? "yes" : "no")
          << (b.phase ? fmt(*b.phase) : "-") << '\n';
    }
    t << "all exact: " << (rep.all_exact ? "yes" : "no") << ", all up to phase: " << (rep.all_up_to_phase ? "yes" : "no")
      << '\n';
    emit(out, env, a.common, t.str());
    return rep.all_up_to_phase ? kExitOk : kExitVerificationFailure;
}

// ---------------------------------------------------------------------------

struct AuditArgs {
    Common common;
    std::string d1 = "psi-";
    std::string d2 = "psi-";
    std::string interp = "fixed";
    bool all = false;
};

json audit_entry(const AuditReport& r, double tol) {
    json j = to_json(r);
    j["deduction_trace"] = to_json(replay_deductions(r.measured, tol));
    return j;
}

std::string audit_row(const AuditReport& r, double tol) {
    std::ostringstream t;
    const DeductionTrace tr = replay_deductions(r.measured, tol);
    t << std::left << std::setw(6) << bell_label(r.d1_index) << std::setw(6) << bell_label(r.d2_index);
    for (const auto& v : r.verdicts) t << std::setw(16) << (fmt(v.measured) + (v.pass ? " ok" : " X"));
    t << (tr.contradiction ? "contradiction" : "stops at " + std::to_string(tr.stopped_at.value_or(0))) << '\n';
    return t.str();
}

std::string audit_header() {
    std::ostringstream t;
    t << std::left << std::setw(6) << "D1" << std::setw(6) << "D2" << std::setw(16) << "p_joint" << std::setw(16)
      << "c_d1u2" << std::setw(16) << "c_d2u1" << std::setw(16) << "p_u1u2" << "deductions\n";
    return t.str();
}

int cmd_audit(const AuditArgs& a, std::ostream& out) {
    const Interpretation interp = require_interp(a.interp);
    const double tol = a.common.tolerance;
    ReportEnvelope env{"audit", {{"interp", a.interp}}, json::object(), kToolVersion, tol};
    std::ostringstream t;
    t << "interpretation: " << a.interp << '\n' << audit_header();
    if (a.all) {
        env.parameters["all"] = "true";
        const PairEnumeration e = enumerate_all_pairs(interp, tol);
        json reports = json::array();
        for (const auto& r : e.reports) {
            reports.push_back(audit_entry(r, tol));
            t << audit_row(r, tol);
        }
        env.results = {{"interpretation", a.interp},
                       {"reports", reports},
                       {"total_p_joint", e.total_p_joint},
                       {"pairs_passing_all", e.pairs_passing_all}};
        t << "sum of p_joint over 16 pairs: " << fmt(e.total_p_joint) << ", pairs passing all four: "
          << e.pairs_passing_all << '\n';
    } else {
        env.parameters["d1"] = a.d1;
        env.parameters["d2"] = a.d2;
        const AuditReport r = audit_pair(require_bell(a.d1), require_bell(a.d2), interp, tol);
        env.results = audit_entry(r, tol);
        t << audit_row(r, tol);
        for (const auto& s : replay_deductions(r.measured, tol).steps) {
            t << "  " << s.number << ". [" << (s.fired ? "fires" : "fails") << "] " << s.statement << '\n';
        }
    }
    emit(out, env, a.common, t.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct LhvArgs {
    Common common;
    std::string source;
    std::string p_joint = "1/16";
};

Rational parse_rational_text(const std::string& s) {
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
        boost::multiprecision::cpp_int n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) throw UsageError("zero denominator in '" + s + "'");
        return Rational(n, d);
    } catch (const std::runtime_error&) {
        throw UsageError("bad rational '" + s + "'");
    }
}

std::string exact_table_text(const ExactTable& t) {
    std::ostringstream s;
    s << std::left << std::setw(7) << "ctx" << std::setw(12) << "(0,0)" << std::setw(12) << "(0,1)" << std::setw(12)
      << "(1,0)" << "(1,1)\n";
    for (Context c : kContexts) {
        s << std::setw(7) << context_name(c);
        for (const auto& v : t[c]) s << std::setw(12) << v.str();
        s << '\n';
    }
    return s.str();
}

int cmd_lhv(const LhvArgs& a, std::ostream& out) {
    const double tol = a.common.tolerance;
    ExactTable table;
    ReportEnvelope env{"lhv", {{"source", a.source}}, json::object(), kToolVersion, tol};

    if (a.source == "paper-claims") {
        env.parameters["p_joint"] = a.p_joint;
        const Rational p = parse_rational_text(a.p_joint);
        const Marginals m = derived_marginals();
        try {
            table = complete_claims_table({p, 1, 1, 0}, m);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        env.results["derived_inputs"] = {{"P(D1=1)", to_json(m.d1)},
                                         {"P(D2=1)", to_json(m.d2)},
                                         {"P(U1=1)", to_json(m.u1)},
                                         {"P(U2=1)", to_json(m.u2)},
                                         {"note", "single-observable marginals are computed from the quantum state, "
                                                  "not stated claims; the remaining cells follow from them and the "
                                                  "four claims"}};
        env.results["claims"] = {{"p_joint", to_json(p)}, {"c_d1u2", 1}, {"c_d2u1", 1}, {"p_u1u2", 0}};
    } else if (a.source.rfind("quantum:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(a.source.substr(8));
        for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
        if (parts.size() != 3) throw UsageError("quantum source is quantum:<d1>,<d2>,<interp>");
        const ProbabilityTable q = quantum_probability_table(require_bell(parts[0]), require_bell(parts[1]),
                                                             require_interp(parts[2]), tol);
        try {
            table = rationalize(q, tol);
            check_table(table);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        env.results["table_decimal"] = to_json(q);
    } else if (a.source.rfind("file:", 0) == 0) {
        const std::string path = a.source.substr(5);
        std::ifstream f(path);
        if (!f) throw UsageError("cannot read table file " + path);
        try {
            table = exact_table_from_json(json::parse(f), tol);
        } catch (const json::exception& e) {
            throw UsageError(std::string("malformed table file: ") + e.what());
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    } else {
        throw UsageError("--source is paper-claims, quantum:<d1>,<d2>,<interp> or file:<path>");
    }

    const LhvCertificate cert = feasibility(table);
    const CertificateCheck check = validate_certificate(table, cert);
    env.results["table"] = to_json(table);
    env.results["certificate"] = to_json(cert);
    env.results["validation"] = to_json(check);

    std::ostringstream t;
    t << exact_table_text(table);
    t << "verdict: " << (cert.verdict == Verdict::Feasible ? "feasible" : "infeasible") << '\n';
    if (cert.witness) {
        if (const auto* chain = std::get_if<DeductionChain>(&*cert.witness)) {
            int n = 0;
            for (const auto& s : chain->steps) t << "  " << ++n << ". [" << rule_name(s.rule) << "] " << s.statement << '\n';
        } else {
            t << "  separating functional (see JSON output)\n";
        }
    }
    t << "certificate " << (check.passed ? "validated" : "INVALID") << ": " << check.reason << '\n';
    emit(out, env, a.common, t.str());
    return check.passed ? kExitOk : kExitVerificationFailure;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
    Common common;
    std::string context = "d1d2";
    std::string d1 = "psi-";
    std::string d2 = "psi-";
    std::string interp = "fixed";
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
    const double tol = a.common.tolerance;
    if (a.context.size() != 4) throw UsageError("--context names two observables, e.g. d1d2 or u1u2");
    const auto x = parse_observable(a.context.substr(0, 2));
    const auto y = parse_observable(a.context.substr(2, 2));
    if (!x || !y) throw UsageError("--context names two of d1, d2, u1, u2");

    const ObservableSet obs = build_observables(require_bell(a.d1), require_bell(a.d2), require_interp(a.interp));
    RunConfig cfg{obs[*x], obs[*y], a.shots, a.seed, a.threads};
    const StateVector psi = make_total_state();
    std::array<double, 4> exact{};
    try {
        exact = sampling_distribution(psi, cfg, tol);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NonCommuting) throw UsageError(std::string("context rejected: ") + e.what());
        throw;
    }
    const CountTable counts = sample(psi, cfg, tol);

    ReportEnvelope env{"sample",
                       {{"context", a.context},
                        {"d1", a.d1},
                        {"d2", a.d2},
                        {"interp", a.interp},
                        {"shots", std::to_string(a.shots)},
                        {"seed", std::to_string(a.seed)}},
                       json::object(),
                       kToolVersion,
                       tol};
    env.results["observables"] = {observable_name(*x), observable_name(*y)};
    env.results["exact"] = exact;
    env.results["counts"] = to_json(counts);
    std::ostringstream t;
    t << "context " << observable_name(*x) << "," << observable_name(*y) << "  shots " << a.shots << "  seed " << a.seed
      << '\n';
    t << std::left << std::setw(8) << "cell" << std::setw(12) << "count" << std::setw(16) << "frequency" << std::setw(16)
      << "exact" << "z\n";
    if (counts.total() > 0) {
        const DeviationReport dev = compare_frequencies(counts, exact, tol);
        env.results["deviation"] = to_json(dev);
        for (int c = 0; c < 4; ++c) {
            t << std::setw(8) << ("(" + std::to_string(c / 2) + "," + std::to_string(c % 2) + ")") << std::setw(12)
              << counts.counts[c] << std::setw(16) << fmt(dev.frequency[c]) << std::setw(16) << fmt(exact[c])
              << fmt(dev.z[c]) << '\n';
        }
        t << "max |z| = " << fmt(dev.max_abs_z)
          << (dev.impossible_event_violation() ? "  IMPOSSIBLE EVENT OBSERVED" : "") << '\n';
    } else {
        env.results["deviation"] = nullptr;
        t << "no shots drawn\n";
    }
    emit(out, env, a.common, t.str());
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact checks of a teleportation-based Hardy-type nonlocality argument", "telehardy"};
    app.require_subcommand(1);

    ExpandArgs ea;
    auto* expand = app.add_subcommand("expand", "Bell-basis expansion of the four-particle state vs the printed table");
    add_common(expand, ea.common);
    expand->add_option("--slots", ea.slots, "A1 or 2B")->required();
    expand->add_option("--table-file", ea.table_file, "printed expansion table");

    AuditArgs aa;
    auto* audit = app.add_subcommand("audit", "evaluate the four Hardy conditions for Bell pairs");
    add_common(audit, aa.common);
    audit->add_option("--d1", aa.d1, "Bell label for D1 on (A,1)");
    audit->add_option("--d2", aa.d2, "Bell label for D2 on (2,B)");
    audit->add_option("--interp", aa.interp, "fixed or collapsed");
    audit->add_flag("--all", aa.all, "all 16 Bell pairs");

    LhvArgs la;
    auto* lhv = app.add_subcommand("lhv", "decide local hidden-variable feasibility of a probability table");
    add_common(lhv, la.common);
    lhv->add_option("--source", la.source, "paper-claims | quantum:<d1>,<d2>,<interp> | file:<path>")->required();
    lhv->add_option("--p-joint", la.p_joint, "P(D1=1,D2=1) for the claims table, as a rational");

    SampleArgs sa;
    auto* samp = app.add_subcommand("sample", "Monte Carlo measurement runs of one context");
    add_common(samp, sa.common);
    samp->add_option("--context", sa.context, "two observables, e.g. d1d2, d1u2, u1d2, u1u2");
    samp->add_option("--d1", sa.d1, "Bell label for D1");
    samp->add_option("--d2", sa.d2, "Bell label for D2");
    samp->add_option("--interp", sa.interp, "fixed or collapsed");
    samp->add_option("--shots", sa.shots, "number of runs")->required();
    samp->add_option("--seed", sa.seed, "64-bit seed")->required();
    samp->add_option("--threads", sa.threads, "worker threads (result independent of this)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (expand->parsed()) return cmd_expand(ea, out);
        if (audit->parsed()) return cmd_audit(aa, out);
        if (lhv->parsed()) return cmd_lhv(la, out);
        if (samp->parsed()) return cmd_sample(sa, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "verification failure: " << e.what() << '\n';
        return kExitVerificationFailure;
    }
    return kExitUsage;
}

}  // namespace telehardy::cli
