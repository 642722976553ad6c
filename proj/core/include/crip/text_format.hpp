#pragma once

#include <string>

namespace crip {

// Canonical shortest round-trip decimal rendering ("%.17g" trimmed), used
// everywhere persisted output must be byte-reproducible.
std::string format_double(double v);

// Fixed 4-decimal rendering for percentages in reports.
std::string format_percent(double v);

}  // namespace crip
