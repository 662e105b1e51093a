#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "telehardy/protocol.hpp"

namespace telehardy {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
    throw Error(ErrorKind::Parse, "expansion table line " + std::to_string(line) + ": " + msg);
}

// [+-]N[/M][/sqrt2|*sqrt2]
double parse_coefficient(const std::string& tok, std::size_t line) {
    static const std::regex re(R"(^([+-]?)(\d+)(?:/(\d+))?(/sqrt2|\*sqrt2)?$)");
    std::smatch m;
    if (!std::regex_match(tok, m, re)) parse_fail(line, "bad coefficient '" + tok + "'");
    double v = std::stod(m[2].str());
    if (m[3].matched) {
        const double den = std::stod(m[3].str());
        if (den == 0) parse_fail(line, "zero denominator");
        v /= den;
    }
    if (m[4].matched) v = m[4].str()[0] == '/' ? v / std::numbers::sqrt2 : v * std::numbers::sqrt2;
    return m[1].str() == "-" ? -v : v;
}

std::size_t parse_ket(const std::string& tok, std::size_t n, std::size_t line) {
    if (tok.size() != n) parse_fail(line, "ket '" + tok + "' must have " + std::to_string(n) + " symbols");
    std::size_t idx = 0;
    for (char c : tok) {
        if (c != '+' && c != '-') parse_fail(line, "ket symbols are '+' or '-'");
        idx = (idx << 1) | (c == '-' ? 1U : 0U);
    }
    return idx;
}

}  // namespace

PrintedTables parse_expansion_tables(std::string_view text) {
    PrintedTables out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    std::optional<PrintedExpansion> cur;
    bool have_residual = false;
    bool have_overall = false;

    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::string key;
        if (!(ls >> key)) continue;

        if (key == "expansion") {
            if (cur) parse_fail(line, "nested 'expansion' block");
            std::string name;
            ls >> name;
            auto pair = parse_slot_pair(name);
            if (!pair) parse_fail(line, "bad slot pair '" + name + "'");
            cur = PrintedExpansion{*pair, {}, Amplitude{1.0, 0.0}, {}};
            have_residual = have_overall = false;
            continue;
        }
        if (!cur) parse_fail(line, "'" + key + "' outside an expansion block");

        if (key == "residual") {
            std::string s;
            while (ls >> s) {
                auto slot = parse_slot(s);
                if (!slot) parse_fail(line, "bad slot '" + s + "'");
                cur->residual_slots.push_back(*slot);
            }
            have_residual = true;
        } else if (key == "overall") {
            std::string tok;
            ls >> tok;
            cur->overall = parse_coefficient(tok, line);
            have_overall = true;
        } else if (key == "branch") {
            if (!have_residual) parse_fail(line, "'branch' before 'residual'");
            std::string label, sign, colon;
            ls >> label >> sign >> colon;
            auto idx = parse_bell(label);
            if (!idx) parse_fail(line, "bad Bell label '" + label + "'");
            if ((sign != "+" && sign != "-") || colon != ":") parse_fail(line, "expected 'branch <label> <+|-> :'");
            const std::size_t n = cur->residual_slots.size();
            CVector v = CVector::Zero(Eigen::Index{1} << n);
            std::string coef, ket;
            while (ls >> coef) {
                if (!(ls >> ket)) parse_fail(line, "coefficient without ket");
                v(static_cast<Eigen::Index>(parse_ket(ket, n, line))) += parse_coefficient(coef, line);
            }
            if (sign == "-") v = -v;
            auto& slot = cur->branches[static_cast<std::size_t>(*idx)];
            if (slot) parse_fail(line, "duplicate branch " + label);
            slot = PrintedBranch{*idx, RawState(cur->residual_slots, v)};
        } else if (key == "end") {
            if (!have_residual || !have_overall) parse_fail(line, "block missing 'residual' or 'overall'");
            const std::string name = slot_pair_name(cur->measured);
            if (out.count(name)) parse_fail(line, "duplicate expansion " + name);
            out.emplace(name, std::move(*cur));
            cur.reset();
        } else {
            parse_fail(line, "unknown keyword '" + key + "'");
        }
    }
    if (cur) parse_fail(line, "unterminated expansion block");
    return out;
}

PrintedTables load_expansion_tables(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::Parse, "cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_expansion_tables(buf.str());
}

}  // namespace telehardy
