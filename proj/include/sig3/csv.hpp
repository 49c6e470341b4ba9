#ifndef SIG3_CSV_HPP
#define SIG3_CSV_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "transfer.hpp"

namespace sig3
{

inline constexpr std::string_view csv_header
    = "p,alpha,beta,lhs56,rhs56,relerr56,lhs57,rhs57,relerr57,lhs58,rhs58,relerr58,pass56,pass57,pass58";

/// Shortest decimal form that parses back to the same double (at most 17 significant digits).
/// Integral values keep a trailing ".0" so they still read as reals.
inline std::string format_real(double x)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    std::string out(buf.data(), res.ptr);
    if (std::isfinite(x) && out.find_first_of(".e") == std::string::npos) {
        out += ".0";
    }
    return out;
}

inline double parse_real(std::string_view text)
{
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a real number: '" + std::string(text) + "'");
    }
    return value;
}

inline void emit_csv(const VerificationReport &report, std::ostream &sink)
{
    if (report.rows.empty()) {
        throw std::invalid_argument("emit_csv: report has no rows");
    }
    sink << csv_header << '\n';
    auto flag = [](bool b) { return b ? "true" : "false"; };
    for (const auto &r : report.rows) {
        sink << format_real(r.p) << ',' << format_real(r.alpha) << ',' << format_real(r.beta);
        for (const auto *c : {&r.thm56, &r.thm57, &r.thm58}) {
            sink << ',' << format_real(c->lhs) << ',' << format_real(c->rhs) << ',' << format_real(c->relerr);
        }
        sink << ',' << flag(r.thm56.pass) << ',' << flag(r.thm57.pass) << ',' << flag(r.thm58.pass) << '\n';
    }
    if (!sink) {
        throw std::runtime_error("emit_csv: write failed");
    }
}

/// Reads rows written by emit_csv.
inline std::vector<VerificationRow> parse_csv(std::istream &source)
{
    std::string line;
    if (!std::getline(source, line) || line != csv_header) {
        throw std::invalid_argument("parse_csv: missing or unexpected header");
    }
    auto parse_flag = [](std::string_view f) {
        if (f == "true") {
            return true;
        }
        if (f == "false") {
            return false;
        }
        throw std::invalid_argument("parse_csv: bad boolean '" + std::string(f) + "'");
    };
    std::vector<VerificationRow> rows;
    while (std::getline(source, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) {
            fields.push_back(f);
        }
        if (fields.size() != 15) {
            throw std::invalid_argument("parse_csv: expected 15 fields, got " + std::to_string(fields.size()));
        }
        VerificationRow r{};
        r.p = parse_real(fields[0]);
        r.alpha = parse_real(fields[1]);
        r.beta = parse_real(fields[2]);
        IdentityCheck *checks[] = {&r.thm56, &r.thm57, &r.thm58};
        for (int i = 0; i < 3; ++i) {
            checks[i]->lhs = parse_real(fields[3 + 3 * i]);
            checks[i]->rhs = parse_real(fields[4 + 3 * i]);
            checks[i]->relerr = parse_real(fields[5 + 3 * i]);
            checks[i]->pass = parse_flag(fields[12 + i]);
        }
        rows.push_back(r);
    }
    return rows;
}

} // namespace sig3

#endif
