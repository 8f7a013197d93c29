#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qs {

/// Parse CLI range syntax: "a..b", "a..b:odd", "a..b:even", or a single
/// integer "a".  Returns the expanded ascending list.  Throws
/// std::invalid_argument on malformed input or ranges with more than 10^7
/// elements.
std::vector<std::int64_t> parse_range(const std::string& spec);

}  // namespace qs
