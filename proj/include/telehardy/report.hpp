#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "telehardy/lhv.hpp"
#include "telehardy/observables.hpp"
#include "telehardy/protocol.hpp"
#include "telehardy/sampler.hpp"

namespace telehardy {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "telehardy 1.0.0";
inline constexpr int kSchemaVersion = 1;

/// Common wrapper around every command result.
struct ReportEnvelope {
    std::string command;
    std::map<std::string, std::string> parameters;
    json results;
    std::string tool_version = kToolVersion;
    double tolerance = kTolerance;

    friend bool operator==(const ReportEnvelope&, const ReportEnvelope&) = default;
};

json to_json(const ReportEnvelope& e);
ReportEnvelope envelope_from_json(const json& j);

json to_json(Amplitude z);
json to_json(const Rational& r);
Rational rational_from_json(const json& j);

json to_json(const StateVector& s);
json to_json(const ExpansionReport& r);
json to_json(const HardyClaimSet& c);
json to_json(const AuditReport& r);
json to_json(const PairEnumeration& e);
json to_json(const ProbabilityTable& t);
json to_json(const ExactTable& t);
json to_json(const DeductionTrace& t);
json to_json(const LhvCertificate& c);
json to_json(const CertificateCheck& c);
json to_json(const CountTable& c);
json to_json(const DeviationReport& r);

/// Table file: {"D1D2": [c00, c01, c10, c11], "D1U2": ..., "U1D2": ..., "U1U2": ...}
/// with each cell a number or {"num": n, "den": d}. Numbers are rationalized
/// at `tol`. Throws MalformedTable / Rationalization.
ExactTable exact_table_from_json(const json& j, double tol = kTolerance);

}  // namespace telehardy
