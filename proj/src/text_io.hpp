#pragma once

// Small CSV and number-formatting helpers shared by the loaders and emitters.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rankbench::detail {

/// Splits CSV text into records. Supports RFC 4180 quoting and both LF and
/// CRLF line endings; blank lines are skipped. Each record carries its
/// 1-based starting line number.
struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};
std::vector<CsvRecord> parse_csv(std::string_view text);

/// Quotes a field only when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Strict number parsing: the whole token must be consumed.
bool parse_double(std::string_view token, double& out);
bool parse_u64(std::string_view token, std::uint64_t& out);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rankbench::detail
