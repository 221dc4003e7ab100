#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sdmlab {

/// Fixed-point text for a double, independent of the global locale.
/// Non-finite values print as "nan", "inf" or "-inf".
std::string format_fixed(double value, int decimals = 6);

/// Locale-independent parse; throws std::invalid_argument on junk.
double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

}  // namespace sdmlab
