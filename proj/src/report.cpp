#include "telehardy/report.hpp"

#include <limits>

namespace telehardy {

json to_json(const ReportEnvelope& e) {
    json params = json::object();
    for (const auto& [k, v] : e.parameters) params[k] = v;
    return json{{"schema_version", kSchemaVersion},
                {"command", e.command},
                {"parameters", params},
                {"results", e.results},
                {"tool_version", e.tool_version},
                {"tolerance", e.tolerance}};
}

ReportEnvelope envelope_from_json(const json& j) {
    ReportEnvelope e;
    e.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) e.parameters[k] = v.get<std::string>();
    e.results = j.at("results");
    e.tool_version = j.at("tool_version").get<std::string>();
    e.tolerance = j.at("tolerance").get<double>();
    return e;
}

json to_json(Amplitude z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

namespace {

json integer_json(const boost::multiprecision::cpp_int& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return json(static_cast<std::int64_t>(v));
    }
    return json(v.str());
}

boost::multiprecision::cpp_int integer_from_json(const json& j) {
    if (j.is_number_integer()) return boost::multiprecision::cpp_int(j.get<std::int64_t>());
    if (j.is_string()) return boost::multiprecision::cpp_int(j.get<std::string>());
    throw Error(ErrorKind::MalformedTable, "rational part must be an integer or a decimal string");
}

}  // namespace

json to_json(const Rational& r) { return json{{"num", integer_json(numerator(r))}, {"den", integer_json(denominator(r))}}; }

Rational rational_from_json(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den")) {
        throw Error(ErrorKind::MalformedTable, "rational must be {\"num\": n, \"den\": d}");
    }
    const auto den = integer_from_json(j.at("den"));
    if (den == 0) throw Error(ErrorKind::MalformedTable, "zero denominator");
    return Rational(integer_from_json(j.at("num")), den);
}

json to_json(const StateVector& s) {
    json amps = json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) amps.push_back(to_json(s.amplitude(i)));
    return json{{"slots", slot_list_name(s.slots())}, {"amplitudes", amps}};
}

json to_json(const ExpansionReport& r) {
    json branches = json::array();
    for (const auto& b : r.branches) {
        json jb{{"bell", bell_label(b.index)},
                {"empty", b.empty},
                {"printed_empty", b.printed_empty},
                {"coefficient", to_json(b.coefficient)},
                {"weight", std::norm(b.coefficient)},
                {"exact_match", b.exact_match},
                {"phase_match", b.phase_match},
                {"exact_deviation", b.exact_deviation},
                {"phase_deviation", b.phase_deviation}};
        jb["residual"] = b.residual ? to_json(*b.residual) : json(nullptr);
        jb["phase"] = b.phase ? to_json(*b.phase) : json(nullptr);
        branches.push_back(jb);
    }
    return json{{"measured", slot_pair_name(r.measured)},
                {"residual_slots", slot_list_name(r.residual_slots)},
                {"branches", branches},
                {"all_exact", r.all_exact},
                {"all_up_to_phase", r.all_up_to_phase}};
}

json to_json(const HardyClaimSet& c) {
    return json{{"p_joint", c.p_joint}, {"c_d1u2", c.c_d1u2}, {"c_d2u1", c.c_d2u1}, {"p_u1u2", c.p_u1u2}};
}

json to_json(const AuditReport& r) {
    json verdicts = json::array();
    for (const auto& v : r.verdicts) {
        verdicts.push_back({{"claim", v.name}, {"claimed", v.claimed}, {"measured", v.measured}, {"pass", v.pass}});
    }
    json out{{"d1", bell_label(r.d1_index)},
             {"d2", bell_label(r.d2_index)},
             {"interpretation", interpretation_label(r.interp)},
             {"measured", to_json(r.measured)},
             {"verdicts", verdicts},
             {"all_pass", r.all_pass()}};
    if (r.interp == Interpretation::CollapsedState) {
        out["interpretation_note"] =
            "U1/U2 read as projectors onto the teleported residual states; this reading is a choice of the tool";
    }
    return out;
}

json to_json(const PairEnumeration& e) {
    json reports = json::array();
    for (const auto& r : e.reports) reports.push_back(to_json(r));
    return json{{"interpretation", interpretation_label(e.interp)},
                {"reports", reports},
                {"total_p_joint", e.total_p_joint},
                {"pairs_passing_all", e.pairs_passing_all}};
}

json to_json(const ProbabilityTable& t) {
    json out = json::object();
    for (Context c : kContexts) out[std::string(context_name(c))] = t[c];
    return out;
}

json to_json(const ExactTable& t) {
    json out = json::object();
    for (Context c : kContexts) {
        json cells = json::array();
        for (const auto& v : t[c]) cells.push_back(to_json(v));
        out[std::string(context_name(c))] = cells;
    }
    return out;
}

json to_json(const DeductionTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps) {
        steps.push_back({{"deduction", s.number}, {"rule", s.rule}, {"fired", s.fired}, {"statement", s.statement}});
    }
    return json{{"contradiction", t.contradiction},
                {"stopped_at", t.stopped_at ? json(*t.stopped_at) : json(nullptr)},
                {"steps", steps}};
}

namespace {

json cell_json(const CellRef& c) { return json{{"context", context_name(c.context)}, {"a", c.a}, {"b", c.b}}; }

json functional_json(const SeparatingFunctional& f) { return to_json(f.coefficients); }

}  // namespace

json to_json(const LhvCertificate& c) {
    json out{{"verdict", c.verdict == Verdict::Feasible ? "feasible" : "infeasible"}};
    if (c.model) {
        json weights = json::array();
        for (const auto& v : all_assignments()) {
            const Rational& w = c.model->weights[v.index()];
            if (w == 0) continue;
            weights.push_back({{"assignment", {{"d1", int(v.d1)}, {"d2", int(v.d2)}, {"u1", int(v.u1)}, {"u2", int(v.u2)}}},
                               {"weight", to_json(w)}});
        }
        out["model"] = json{{"weights", weights}};
    } else {
        out["model"] = nullptr;
    }
    if (c.witness) {
        if (const auto* chain = std::get_if<DeductionChain>(&*c.witness)) {
            json steps = json::array();
            for (const auto& s : chain->steps) {
                json js{{"rule", rule_name(s.rule)}, {"cell", cell_json(s.cell)}, {"statement", s.statement}};
                if (s.derived) js["derived"] = {{"observable", observable_name(*s.derived)}, {"value", s.derived_value}};
                steps.push_back(js);
            }
            out["witness"] = {{"kind", "deduction-chain"}, {"steps", steps}, {"functional", functional_json(chain->functional())}};
        } else {
            out["witness"] = {{"kind", "separating-functional"},
                              {"functional", functional_json(std::get<SeparatingFunctional>(*c.witness))}};
        }
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

json to_json(const CertificateCheck& c) { return json{{"passed", c.passed}, {"reason", c.reason}}; }

json to_json(const CountTable& c) { return json{{"counts", c.counts}, {"total", c.total()}}; }

json to_json(const DeviationReport& r) {
    return json{{"expected", r.expected},
                {"frequency", r.frequency},
                {"deviation", r.deviation},
                {"std_error", r.std_error},
                {"z", r.z},
                {"max_abs_z", r.max_abs_z},
                {"impossible_cells", r.impossible_cells},
                {"impossible_event_violation", r.impossible_event_violation()}};
}

ExactTable exact_table_from_json(const json& j, double tol) {
    if (!j.is_object()) throw Error(ErrorKind::MalformedTable, "table must be a JSON object");
    ExactTable t;
    for (Context c : kContexts) {
        const std::string name(context_name(c));
        if (!j.contains(name)) throw Error(ErrorKind::MalformedTable, "missing context " + name);
        const json& cells = j.at(name);
        if (!cells.is_array() || cells.size() != 4) throw Error(ErrorKind::MalformedTable, name + " must have 4 cells");
        for (std::size_t k = 0; k < 4; ++k) {
            const json& v = cells[k];
            if (v.is_number()) {
                t[c][k] = rationalize(v.get<double>(), tol);
            } else {
                t[c][k] = rational_from_json(v);
            }
        }
    }
    check_table(t);
    return t;
}

}  // namespace telehardy
