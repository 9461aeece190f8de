#pragma once

#include <stdexcept>
#include <string>

namespace hodisc {

/// Raised when caller input violates an operation's precondition.
/// The CLI maps it to exit status 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace hodisc
