#pragma once

// CSV persistence for benchmark records. The schema is fixed; readers reject
// unknown headers and malformed rows with line-numbered diagnostics so a
// truncated or hand-edited results file fails loudly.

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fsb/bench.hpp"

namespace fsb {

inline constexpr std::string_view kCsvHeader =
    "experiment,threads,schedule,chunk,construct,rep,fish,steps,seconds_total,seconds_eat,checksum";

struct CsvError : std::runtime_error {
    CsvError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

// Seconds carry 9 significant digits; failed cells serialize as NaN.
inline std::string format_seconds(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string format_checksum(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << kCsvHeader << '\n';
    for (const BenchRecord& r : records) {
        out << r.experiment << ',' << r.threads << ',' << r.schedule << ',' << r.chunk << ','
            << r.construct << ',' << r.rep << ',' << r.fish << ',' << r.steps << ','
            << format_seconds(r.seconds_total) << ',' << format_seconds(r.seconds_eat) << ','
            << format_checksum(r.checksum) << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline long long parse_integer(const std::string& field, std::size_t line, const char* name) {
    if (field.empty()) throw CsvError(line, std::string(name) + ": empty field");
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(field.c_str(), &end, 10);
    if (errno != 0 || end != field.c_str() + field.size() || v < 0) {
        throw CsvError(line, std::string(name) + ": malformed value '" + field + "'");
    }
    return v;
}

inline double parse_seconds(const std::string& field, std::size_t line, const char* name) {
    if (field.empty()) throw CsvError(line, std::string(name) + ": empty field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) {
        throw CsvError(line, std::string(name) + ": malformed value '" + field + "'");
    }
    return v;
}

inline std::uint64_t parse_checksum(const std::string& field, std::size_t line) {
    if (field.size() != 16) {
        throw CsvError(line, "checksum: expected 16 hex digits, got '" + field + "'");
    }
    std::uint64_t v = 0;
    for (char c : field) {
        v <<= 4;
        if (c >= '0' && c <= '9') {
            v |= static_cast<std::uint64_t>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            v |= static_cast<std::uint64_t>(c - 'a' + 10);
        } else {
            throw CsvError(line, "checksum: non-hex digit in '" + field + "'");
        }
    }
    return v;
}

}  // namespace detail

inline std::vector<BenchRecord> read_csv(std::istream& in) {
    std::string line;
    std::size_t line_number = 1;
    if (!std::getline(in, line)) throw CsvError(1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw CsvError(1, "unknown header '" + line + "'");

    std::vector<BenchRecord> records;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 11) {
            throw CsvError(line_number, "expected 11 fields, got " + std::to_string(fields.size()));
        }
        BenchRecord r;
        r.experiment = fields[0];
        r.threads = static_cast<int>(detail::parse_integer(fields[1], line_number, "threads"));
        r.schedule = fields[2];
        r.chunk = static_cast<std::size_t>(detail::parse_integer(fields[3], line_number, "chunk"));
        r.construct = fields[4];
        r.rep = static_cast<int>(detail::parse_integer(fields[5], line_number, "rep"));
        r.fish = static_cast<std::size_t>(detail::parse_integer(fields[6], line_number, "fish"));
        r.steps = static_cast<std::size_t>(detail::parse_integer(fields[7], line_number, "steps"));
        r.seconds_total = detail::parse_seconds(fields[8], line_number, "seconds_total");
        r.seconds_eat = detail::parse_seconds(fields[9], line_number, "seconds_eat");
        r.checksum = detail::parse_checksum(fields[10], line_number);
        records.push_back(std::move(r));
    }
    return records;
}

inline std::string write_csv_string(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    write_csv(out, records);
    return out.str();
}

inline std::vector<BenchRecord> read_csv_string(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

// Post-read invariant check: flags rows whose timed regions are inconsistent.
// Returns one human-readable diagnostic per offending row (line numbers count
// the header as line 1).
inline std::vector<std::string> validate_records(const std::vector<BenchRecord>& records) {
    std::vector<std::string> issues;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const BenchRecord& r = records[i];
        const std::size_t line = i + 2;
        if (r.failed()) continue;
        if (std::isnan(r.seconds_eat)) {
            issues.push_back("line " + std::to_string(line) + ": seconds_eat is NaN but seconds_total is not");
            continue;
        }
        if (r.seconds_total < 0.0 || r.seconds_eat < 0.0) {
            issues.push_back("line " + std::to_string(line) + ": negative seconds");
        }
        if (r.seconds_eat > r.seconds_total) {
            issues.push_back("line " + std::to_string(line) + ": seconds_eat exceeds seconds_total");
        }
    }
    return issues;
}

}  // namespace fsb
