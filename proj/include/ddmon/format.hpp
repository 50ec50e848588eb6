#pragma once

#include <string>

namespace ddmon {

/// Shortest-safe decimal for CSV: 17 significant digits, '.' separator,
/// independent of the global locale.
std::string format_double(double value);

}  // namespace ddmon
