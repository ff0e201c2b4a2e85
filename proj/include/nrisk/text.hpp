#pragma once

// Small text helpers shared by the file formats: CSV field splitting,
// round-trip number formatting and ISO-8601 UTC timestamps.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nrisk::text {

std::string_view trim(std::string_view s);

/// Split one CSV record. Double-quoted fields may contain commas and "" escapes.
/// Returns std::nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv(std::string_view line);

/// Quote a field only if it needs quoting.
std::string csv_field(std::string_view field);

/// Shortest decimal representation that parses back to the same double.
std::string shortest(double v);

/// Strict full-string double parse; rejects trailing garbage, NaN and inf.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Parses "YYYY-MM-DDTHH:MM[:SS][Z]" as UTC seconds since the epoch.
std::optional<std::int64_t> parse_iso8601(std::string_view s);
/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t utc_seconds);

/// Splits a document into lines, tolerating CRLF. The final line may lack a newline.
std::vector<std::string_view> lines(std::string_view doc);

std::string to_upper(std::string_view s);

/// 64-bit FNV-1a, hex encoded. Used for catalog version identifiers.
std::string fnv1a_hex(std::string_view data);

}  // namespace nrisk::text
