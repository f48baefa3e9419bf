#pragma once

#include <string>

namespace homodyne {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace homodyne
