// lamcert — exact-rational certification toolkit for incidence-matrix
// growth rates and push-away rewriting.
//
// Subcommands: perron, certify, tighten, layers, pushaway, fuzz.
// Exit codes: 0 verified, 1 property violated, 2 invalid input,
// 3 inconclusive.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lamcert/disc_model.hpp"
#include "lamcert/errors.hpp"
#include "lamcert/fuzz.hpp"
#include "lamcert/io.hpp"
#include "lamcert/perron.hpp"
#include "lamcert/version.hpp"

namespace {

using namespace lamcert;
using io::json;
using io::Report;
using io::Verdict;

io::Verdict verdict_of(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Violated:
      return Verdict::Violated;
    case ErrorCategory::Inconclusive:
      return Verdict::Inconclusive;
    default:
      return Verdict::InvalidInput;
  }
}

// Loads and parses a document; throws Error("SchemaError") carrying the
// first path for context, after stashing all issues in the report.
io::DocumentEnvelope load_document(const std::string& path, Report& report) {
  std::ifstream in(path);
  if (!in) throw Error("SchemaError", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  io::ParseOutcome outcome = io::parse(text.str());
  if (!outcome.ok()) {
    for (const auto& issue : outcome.errors)
      report.add_diagnostic(issue.operation, issue.location, issue.message);
    throw Error("SchemaError", outcome.errors.empty()
                                   ? "unparsable document"
                                   : outcome.errors.front().location + ": " +
                                         outcome.errors.front().message);
  }
  return std::move(*outcome.envelope);
}

template <typename T>
const T& payload_as(const io::DocumentEnvelope& envelope, const char* wanted) {
  const T* value = std::get_if<T>(&envelope.payload);
  if (!value)
    throw Error("SchemaError",
                "document kind \"" + envelope.kind + "\" is not usable here; expected " + wanted);
  return *value;
}

Report cmd_perron(const std::string& path, std::size_t max_iterations,
                  const std::string& width_text) {
  Report report;
  auto envelope = load_document(path, report);
  const auto& m = payload_as<IncidenceMatrix>(envelope, "a matrix document");
  Rational width = rational_from_string(width_text);
  PerronCertificate cert = perron_bounds(m, max_iterations, width);
  report.certificates.push_back(io::to_json(cert));
  if (!cert.width_reached)
    report.add_diagnostic("perron", "certificate", "WidthNotReached: interval width " +
                                                       rational_to_string(cert.width()) +
                                                       " exceeds the target");
  report.verdict = Verdict::Verified;
  return report;
}

Report cmd_certify(const std::string& path) {
  Report report;
  auto envelope = load_document(path, report);

  if (envelope.kind == "trace") {
    const auto& trace = payload_as<StabilizationTrace>(envelope, "a trace document");
    StabilizationVerdict verdict = validate_stabilization(trace);
    report.certificates.push_back(io::to_json(verdict));
    if (!verdict.ok)
      report.add_diagnostic("validate_stabilization", "payload", verdict.detail);
    report.verdict = verdict.ok ? Verdict::Verified : Verdict::Violated;
    return report;
  }

  if (envelope.kind == "disc-system") {
    const auto& system = payload_as<DiscSystem>(envelope, "a disc-system document");
    validate_disc_system(system);  // irreducible, nonempty rows, subinvariant
    IncidenceMatrix m = incidence_matrix(system);
    SubinvarianceReport sub = check_subinvariance(m, system.weights, system.lambda);
    report.certificates.push_back(io::to_json(sub));
    report.certificates.push_back(
        io::to_json(perron_bounds(m, 500, rational_pow(Rational(1, 10), 9), &system.weights)));
    report.verdict = Verdict::Verified;
    return report;
  }

  const auto& c = payload_as<io::SubinvarianceCase>(envelope, "a subinvariance-case document");
  SubinvarianceReport sub = check_subinvariance(c.matrix, c.weights, c.lambda);
  json sub_json = io::to_json(sub);
  sub_json["op"] = "check_subinvariance";
  report.certificates.push_back(sub_json);
  bool all_hold = sub.holds;
  bool inconclusive = false;

  if (sub.holds && is_irreducible(c.matrix)) {
    // Seeding with the subinvariant vector pins the upper bound at or below
    // lambda from the very first Collatz–Wielandt evaluation.
    const WeightVector* start = is_strictly_positive(c.weights) ? &c.weights : nullptr;
    PerronCertificate cert = perron_bounds(c.matrix, 64, Rational(1, 1000000), start);
    if (!sub.strict_indices.empty()) {
      for (int round = 1; round < 7 && !(cert.upper < c.lambda); ++round)
        cert = perron_bounds(c.matrix, 64u << round,
                             rational_pow(Rational(1, 10), 6 + 2 * round), start);
      if (!(cert.upper < c.lambda)) {
        report.add_diagnostic("perron", "certificate",
                              "NotSeparable: strict subinvariance holds but the interval did "
                              "not drop below lambda at the cap");
        inconclusive = true;
      }
    }
    report.certificates.push_back(io::to_json(cert));
  }

  if (c.power) {
    SubinvarianceReport power = power_subinvariance(c.matrix, c.weights, c.lambda, *c.power);
    json j = io::to_json(power);
    j["op"] = "power_subinvariance";
    j["power"] = *c.power;
    report.certificates.push_back(j);
    all_hold = all_hold && power.holds;
  }
  if (c.dominated) {
    SubinvarianceReport dom =
        dominated_power_check(*c.dominated, c.matrix, c.weights, c.lambda, c.power.value_or(1));
    json j = io::to_json(dom);
    j["op"] = "dominated_power_check";
    report.certificates.push_back(j);
    all_hold = all_hold && dom.holds;
  }
  if (c.subset) {
    IndexSubset subset(*c.subset, c.matrix.dim());
    std::size_t p_max = c.p_max.value_or(c.matrix.dim() * (c.matrix.dim() + 1));
    auto drop = submatrix_strict_drop(c.matrix, subset, c.weights, c.lambda, p_max);
    json j{{"type", "strict-drop"}, {"op", "submatrix_strict_drop"}};
    if (drop) {
      j["power"] = drop->power;
      j["index"] = drop->index + 1;
      PerronCertificate after = perron_bounds(submatrix(c.matrix, subset), 512,
                                              rational_pow(Rational(1, 10), 9));
      j["submatrix_bounds"] = io::to_json(after);
      if (!(after.upper < c.lambda)) {
        report.add_diagnostic("submatrix_strict_drop", "certificate",
                              "NotSeparable: submatrix interval still touches lambda");
        inconclusive = true;
      }
    } else {
      report.add_diagnostic("submatrix_strict_drop", "payload.subset",
                            "no strict power within p_max=" + std::to_string(p_max));
      inconclusive = true;
    }
    report.certificates.push_back(j);
  }

  report.verdict = !all_hold        ? Verdict::Violated
                   : inconclusive   ? Verdict::Inconclusive
                                    : Verdict::Verified;
  return report;
}

Report cmd_tighten(const std::string& path, std::size_t p_max) {
  Report report;
  auto envelope = load_document(path, report);
  const auto& e = payload_as<Enlargement>(envelope, "an enlargement document");
  TightenOutcome out = run_tightening(e, p_max);

  json matrices{{"type", "matrices"}};
  matrices["mbar"] = io::envelope_to_json({"1", "matrix", io::Payload(out.mbar)})["payload"]["entries"];
  matrices["mhat"] = io::envelope_to_json({"1", "matrix", io::Payload(out.mhat)})["payload"]["entries"];
  report.certificates.push_back(matrices);
  for (const auto& scc : out.scc_certificates) {
    json j = io::to_json(scc.cert);
    json members = json::array();
    for (std::size_t i : scc.subset.indices()) members.push_back(i + 1);
    j["scc"] = members;
    report.certificates.push_back(j);
  }
  report.certificates.push_back(io::to_json(out.cert));

  report.verdict = out.cert.verdict      ? Verdict::Verified
                   : out.cert.conclusive ? Verdict::Violated
                                         : Verdict::Inconclusive;
  if (!out.cert.conclusive)
    report.add_diagnostic("certify_improvement", "certificate",
                          "NotSeparable: intervals overlap at the refinement cap");
  return report;
}

Report cmd_layers(const std::string& path, std::size_t p_max) {
  Report report;
  auto envelope = load_document(path, report);
  const auto& c = payload_as<io::LayeredCase>(envelope, "a layered-family document");
  WeightVector u = c.family.full_weights();
  PipelineResult res =
      pipeline(c.family, c.d_update, u, c.family.base.lambda, p_max ? p_max : c.p_max.value_or(0));

  json matrices{{"type", "matrices"}};
  auto entries = [](const IncidenceMatrix& m) {
    return io::envelope_to_json({"1", "matrix", io::Payload(m)})["payload"]["entries"];
  };
  matrices["W"] = entries(res.w);
  matrices["T0"] = entries(res.t0);
  matrices["T1"] = entries(res.t1);
  matrices["T2"] = entries(res.t2);
  matrices["T3"] = entries(res.t3);
  report.certificates.push_back(matrices);
  for (const auto& scc : res.scc_certificates) {
    json j = io::to_json(scc.cert);
    json members = json::array();
    for (std::size_t i : scc.subset.indices()) members.push_back(i + 1);
    j["scc"] = members;
    report.certificates.push_back(j);
  }
  report.certificates.push_back(io::to_json(res.cert));

  report.verdict = res.cert.verdict      ? Verdict::Verified
                   : res.cert.conclusive ? Verdict::Violated
                                         : Verdict::Inconclusive;
  if (!res.cert.conclusive)
    report.add_diagnostic("certify_improvement", "certificate",
                          "NotSeparable: intervals overlap at the refinement cap");
  return report;
}

Report cmd_pushaway(const std::string& path, bool enumerate_all, std::size_t cap) {
  Report report;
  auto envelope = load_document(path, report);
  const auto& c = payload_as<io::PatternCase>(envelope, "a pattern document");

  if (enumerate_all) {
    EnumerationOutcome outcome = enumerate_all_orders(c.pattern, cap);
    json j{{"type", "confluence"},
           {"sequences", outcome.sequence_count},
           {"distinct_results", outcome.distinct.size()}};
    json results = json::array();
    for (const auto& r : outcome.distinct) results.push_back(io::to_json(r));
    j["results"] = results;
    report.certificates.push_back(j);
    report.verdict = outcome.confluent() ? Verdict::Verified : Verdict::Violated;
    if (!outcome.confluent())
      report.add_diagnostic("enumerate_all_orders", "payload",
                            "surgery order changed the outcome");
    return report;
  }

  PushAwayResult result =
      push_away(c.pattern, c.order ? &*c.order : nullptr);
  report.certificates.push_back(io::to_json(result));
  json deltas = json::object();
  for (const auto& [comp, delta] : weight_delta(c.pattern, result))
    deltas[comp] = rational_to_string(delta);
  report.certificates.push_back(json{{"type", "weight-delta"}, {"per_component", deltas}});
  report.verdict = Verdict::Verified;
  return report;
}

Report cmd_fuzz(const std::string& suite, std::size_t trials, std::uint64_t seed) {
  return fuzz::fuzz_suite(suite, trials, seed);
}

int run(const std::function<Report()>& body, bool machine) {
  Report report;
  try {
    report = body();
  } catch (const Error& e) {
    report.verdict = verdict_of(categorize(e.code()));
    report.add_diagnostic("error", e.code(), e.what());
  } catch (const std::exception& e) {
    report.verdict = Verdict::InvalidInput;
    report.add_diagnostic("error", "internal", e.what());
  }
  std::cout << io::emit_report(report, machine ? io::ReportMode::Machine : io::ReportMode::Text);
  return io::exit_code(report.verdict);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LAMCERT_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      return 0;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lamcert — exact-rational growth-rate and push-away certification"};
  app.set_version_flag("--version", lamcert::kVersion);
  app.require_subcommand(1);
  bool machine = false;
  app.add_flag("--machine", machine, "emit the machine-readable JSON report");

  std::string file;
  std::size_t max_iterations = 500;
  std::string width = "1/1000000000";
  auto* perron = app.add_subcommand("perron", "certified spectral-radius interval of a matrix");
  perron->fallthrough();
  perron->add_option("file", file, "matrix document")->required();
  perron->add_option("--max-iterations", max_iterations, "iteration cap");
  perron->add_option("--target-width", width, "target interval width as p/q");

  auto* certify =
      app.add_subcommand("certify", "subinvariance, power, submatrix and trace checks");
  certify->fallthrough();
  certify->add_option("file", file, "subinvariance-case or trace document")->required();

  std::size_t p_max = 0;
  auto* tighten = app.add_subcommand("tighten", "enlargement -> tightened matrix certificate");
  tighten->fallthrough();
  tighten->add_option("file", file, "enlargement document")->required();
  tighten->add_option("--p-max", p_max, "strict-power search cap (default dim*(dim+1))");

  auto* layers = app.add_subcommand("layers", "layered family -> block-matrix pipeline");
  layers->fallthrough();
  layers->add_option("file", file, "layered-family document")->required();
  layers->add_option("--p-max", p_max, "strict-power search cap (default dim*(dim+1))");

  bool enumerate_all = false;
  std::size_t cap = 5000;
  auto* pushaway = app.add_subcommand("pushaway", "push-away rewriting of a pattern");
  pushaway->fallthrough();
  pushaway->add_option("file", file, "pattern document")->required();
  pushaway->add_flag("--enumerate-all", enumerate_all, "run every valid surgery order");
  pushaway->add_option("--cap", cap, "maximal number of surgery sequences");

  std::string suite;
  std::size_t trials = 100;
  std::uint64_t seed = default_seed();
  auto* fuzz_cmd = app.add_subcommand("fuzz", "randomized suites: pf | propagation | pipeline | confluence");
  fuzz_cmd->fallthrough();
  fuzz_cmd->add_option("suite", suite, "suite name")->required();
  fuzz_cmd->add_option("--trials", trials, "number of trials");
  fuzz_cmd->add_option("--seed", seed, "RNG seed (default: LAMCERT_SEED or 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (perron->parsed())
    return run([&] { return cmd_perron(file, max_iterations, width); }, machine);
  if (certify->parsed()) return run([&] { return cmd_certify(file); }, machine);
  if (tighten->parsed()) return run([&] { return cmd_tighten(file, p_max); }, machine);
  if (layers->parsed()) return run([&] { return cmd_layers(file, p_max); }, machine);
  if (pushaway->parsed())
    return run([&] { return cmd_pushaway(file, enumerate_all, cap); }, machine);
  if (fuzz_cmd->parsed()) return run([&] { return cmd_fuzz(suite, trials, seed); }, machine);
  return 2;
}
