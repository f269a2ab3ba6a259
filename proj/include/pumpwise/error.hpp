#pragma once

#include <stdexcept>
#include <string>

namespace pumpwise {

enum class ErrorKind {
  Parse,        // malformed file or field
  Validation,   // an invariant of the data model is violated
  CrossCheck,   // declared value disagrees with the derived one
  UnknownTask,
  Infeasible,   // base clock above some task's f_max, empty ranges
  InvalidPlan,
  Precondition,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pumpwise
