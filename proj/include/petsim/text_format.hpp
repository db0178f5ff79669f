#pragma once

// Locale-independent number formatting and parsing for every file we write.

#include <string>
#include <string_view>

namespace petsim {

/// Fixed notation with exactly `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Shortest representation that parses back to the same double.
std::string format_roundtrip(double value);

/// Fixed notation with trailing zeros trimmed, keeping at least one decimal.
std::string format_compact(double value, int max_decimals = 6);

/// Fixed notation with enough decimals to show `digits` significant digits.
std::string format_significant(double value, int digits);

/// Whole-string parse; throws ConfigError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long parse_long(std::string_view text, std::string_view what);

}  // namespace petsim
