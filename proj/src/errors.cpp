#include "lamcert/errors.hpp"

namespace lamcert {

ErrorCategory categorize(const std::string& code) {
  // Theorem-backed properties that failed: a defect, reported as violated.
  if (code == "LemmaViolation") return ErrorCategory::Violated;
  // Searches that ran out of budget without a verdict.
  if (code == "PropagationTimeout" || code == "NotSeparable" ||
      code == "EnumerationCapExceeded" || code == "WidthNotReached")
    return ErrorCategory::Inconclusive;
  // Everything else is a problem with the input.
  return ErrorCategory::InvalidInput;
}

}  // namespace lamcert
