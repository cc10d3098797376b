#pragma once

// Small CSV helpers shared by dataset ingestion and result writers.
// Numbers are formatted with std::to_chars shortest round-trip so equal
// inputs always produce byte-identical files; '.' decimals, ',' delimiter.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace activecover::csv {

// Shortest representation that parses back to exactly the same double.
std::string format_double(double value);

std::string format_u64(std::uint64_t value);

// Splits one CSV line on commas; fields are trimmed of surrounding spaces
// and trailing CR. No quoting support (no field in this format needs it).
std::vector<std::string> split_line(std::string_view line);

// Strict double parse of a whole field; nullopt when any character is left over.
std::optional<double> parse_double(std::string_view field);

std::optional<std::uint64_t> parse_u64(std::string_view field);

}  // namespace activecover::csv
