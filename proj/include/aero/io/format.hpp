#pragma once

#include <string>
#include <string_view>

namespace aero::io {

/// Locale-independent general format with `digits` significant digits.
std::string format_sig(double value, int digits = 6);

/// Shortest text that parses back to exactly `value`.
std::string format_exact(double value);

/// Locale-independent parse of the whole string; throws ConfigError.
double parse_double(std::string_view text);

}  // namespace aero::io
