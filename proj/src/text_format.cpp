#include "petsim/text_format.hpp"

#include "petsim/errors.hpp"

#include <array>
#include <charconv>
#include <algorithm>
#include <cmath>
#include <string>

namespace petsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    if (value == 0.0) value = 0.0;  // drop the sign of negative zero
    std::array<char, 512> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed,
                                   decimals);
    if (ec != std::errc()) throw NumericError("number too large to format");
    std::string out(buf.data(), end);
    if (out.size() > 1 && out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos)
        out.erase(0, 1);  // "-0.000" after rounding
    return out;
}

std::string format_roundtrip(double value) {
    if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw NumericError("number too large to format");
    return {buf.data(), end};
}

std::string format_compact(double value, int max_decimals) {
    std::string s = format_fixed(value, max_decimals);
    const auto dot = s.find('.');
    if (dot == std::string::npos) return s + ".0";
    std::size_t last = s.find_last_not_of('0');
    if (last == dot) ++last;
    s.erase(last + 1);
    return s;
}

std::string format_significant(double value, int digits) {
    if (!std::isfinite(value) || value == 0.0) return format_fixed(value, digits);
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
    return format_fixed(value, std::clamp(digits - 1 - magnitude, 0, 300));
}

double parse_double(std::string_view text, std::string_view what) {
    const std::string_view t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

long parse_long(std::string_view text, std::string_view what) {
    const std::string_view t = trim(text);
    long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

}  // namespace petsim
