#include "qs/ranges.hpp"

#include <charconv>
#include <stdexcept>

namespace qs {

namespace {

std::int64_t parse_int(const std::string& s) {
  std::int64_t value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("parse_range: not an integer: '" + s + "'");
  return value;
}

}  // namespace

std::vector<std::int64_t> parse_range(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("parse_range: empty spec");
  int parity = -1;  // -1 none, 0 even, 1 odd
  std::string body = spec;
  if (const auto colon = body.find(':'); colon != std::string::npos) {
    const std::string tag = body.substr(colon + 1);
    if (tag == "odd")
      parity = 1;
    else if (tag == "even")
      parity = 0;
    else
      throw std::invalid_argument("parse_range: unknown parity tag ':" + tag + "'");
    body = body.substr(0, colon);
  }
  std::int64_t lo, hi;
  if (const auto dots = body.find(".."); dots != std::string::npos) {
    lo = parse_int(body.substr(0, dots));
    hi = parse_int(body.substr(dots + 2));
  } else {
    lo = hi = parse_int(body);
  }
  if (lo > hi) throw std::invalid_argument("parse_range: descending range");
  if (static_cast<unsigned __int128>(hi) - lo > 10000000)
    throw std::invalid_argument("parse_range: range too large");
  std::vector<std::int64_t> out;
  for (std::int64_t v = lo;; ++v) {
    if (parity < 0 || ((v % 2 + 2) % 2) == parity) out.push_back(v);
    if (v == hi) break;  // checked before ++v so INT64_MAX can't overflow
  }
  return out;
}

}  // namespace qs
