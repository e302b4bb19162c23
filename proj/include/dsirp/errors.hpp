#pragma once

#include <stdexcept>
#include <string>

namespace dsirp {

// Caller passed arguments outside the documented domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A precondition that the caller is responsible for was violated
// (e.g. an infeasible tour handed to the cost model).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Problem size exceeds what an exact routine is guarded for.
class CapabilityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed or unexpected content in a persisted file. The message
// starts with the JSON path of the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace dsirp
