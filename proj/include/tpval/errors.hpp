#pragma once

#include <stdexcept>
#include <string>

namespace tpval {

// Exit-code classes used by the CLI: parse 2, resource 3, precondition 4,
// internal invariant 5.

struct ParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& what, int line_ = 0, int column_ = 0)
      : std::runtime_error(line_ > 0 ? what + " at line " + std::to_string(line_) + ", column " +
                                           std::to_string(column_)
                                     : what),
        line(line_),
        column(column_) {}
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace tpval
