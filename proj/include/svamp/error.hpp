#pragma once

#include <stdexcept>
#include <string>

namespace svamp {

// Raised when an operation is called outside its domain (bad epsilon, odd n,
// out-of-range edge, malformed ensemble, ...). The message names the
// violated condition so the CLI can forward it verbatim.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw precondition_error(what);
}

}  // namespace svamp
