#pragma once

#include <stdexcept>
#include <string>

namespace gila {

/// Broad failure categories. The C API maps each one to a status code.
enum class ErrorKind {
  InvalidArgument,
  Parse,
  Io,
  EmptyGraph,
  Config,
  Infeasible,
  Lookup,
  ContractViolation,
  Resource,
  Numerical,
  Timeout,
  Mismatch,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace gila
