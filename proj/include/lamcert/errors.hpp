#pragma once

#include <stdexcept>
#include <string>

namespace lamcert {

// Every failure carries a stable code (e.g. "NotIrreducible", "SchemaError")
// so callers can map it to an exit category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// How a failure maps to the CLI exit-code discipline.
enum class ErrorCategory {
  InvalidInput,   // exit 2
  Violated,       // exit 1
  Inconclusive,   // exit 3
};

ErrorCategory categorize(const std::string& code);

}  // namespace lamcert
