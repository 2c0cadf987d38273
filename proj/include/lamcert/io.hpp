#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lamcert/disc_model.hpp"
#include "lamcert/matrix.hpp"
#include "lamcert/pushaway.hpp"
#include "lamcert/rational.hpp"

namespace lamcert::io {

using nlohmann::json;

// Inputs for the subinvariance/power/submatrix certification command; the
// optional parts select which checks run.
struct SubinvarianceCase {
  IncidenceMatrix matrix;
  WeightVector weights;
  Rational lambda;
  std::optional<std::size_t> power;
  std::optional<IncidenceMatrix> dominated;
  std::optional<std::vector<std::size_t>> subset;  // 0-based internally, 1-based on the wire
  std::optional<std::size_t> p_max;
};

struct LayeredCase {
  LayeredFamily family;
  std::map<std::string, LabelMultiset> d_update;
  std::optional<std::size_t> p_max;
};

struct PatternCase {
  IntersectionPattern pattern;
  std::optional<std::vector<CurveId>> order;
};

using Payload = std::variant<IncidenceMatrix, SubinvarianceCase, DiscSystem, Enlargement,
                             LayeredCase, PatternCase, StabilizationTrace>;

struct DocumentEnvelope {
  std::string format_version;
  std::string kind;  // matrix | subinvariance-case | disc-system | enlargement |
                     // layered-family | pattern | trace
  Payload payload;
};

struct Diagnostic {
  std::string operation;
  std::string location;
  std::string message;
};

struct ParseOutcome {
  std::optional<DocumentEnvelope> envelope;
  std::vector<Diagnostic> errors;  // schema errors with JSON paths; empty iff envelope is set

  bool ok() const { return envelope.has_value(); }
};

// Total: never throws on malformed input; all problems come back as
// diagnostics with paths.
ParseOutcome parse(const std::string& text);

json envelope_to_json(const DocumentEnvelope& envelope);
std::string emit(const DocumentEnvelope& envelope);

enum class Verdict { Verified, Violated, Inconclusive, InvalidInput };

const char* verdict_name(Verdict verdict);
int exit_code(Verdict verdict);

struct Report {
  Verdict verdict = Verdict::InvalidInput;
  json certificates = json::array();
  std::vector<Diagnostic> diagnostics;
  std::uint64_t seed = 0;
  std::string version;

  Report();
  void add_diagnostic(std::string operation, std::string location, std::string message);
};

enum class ReportMode { Text, Machine };

// Machine mode is a stable JSON schema; text mode shows certificate bounds
// as exact rationals with decimal renderings marked non-normative.
std::string emit_report(const Report& report, ReportMode mode);

// Certificate serializers (1-based indices on the wire).
json to_json(const PerronCertificate& cert);
json to_json(const SubinvarianceReport& report);
json to_json(const TighteningCertificate& cert);
json to_json(const PushAwayResult& result);
json to_json(const StabilizationVerdict& verdict);

}  // namespace lamcert::io
