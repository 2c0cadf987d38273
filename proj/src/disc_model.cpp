#include "lamcert/disc_model.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "lamcert/errors.hpp"

namespace lamcert {

namespace {

std::unordered_map<std::string, std::size_t> label_index(const std::vector<std::string>& labels,
                                                         const char* what) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw Error("InvariantViolation", std::string(what) + ": empty label");
    if (!index.emplace(labels[i], i).second)
      throw Error("InvariantViolation", std::string(what) + ": duplicate label " + labels[i]);
  }
  return index;
}

std::vector<BigInt> resolve_row(const LabelMultiset& counts,
                                const std::unordered_map<std::string, std::size_t>& index,
                                std::size_t n, const std::string& owner) {
  std::vector<BigInt> row(n, BigInt(0));
  for (const auto& [label, mult] : counts) {
    auto it = index.find(label);
    if (it == index.end())
      throw Error("UnknownLabel", "image of " + owner + " references unknown label " + label);
    if (mult < 0)
      throw Error("InvariantViolation", "image of " + owner + " has negative multiplicity for " + label);
    row[it->second] = mult;
  }
  return row;
}

long multiset_total(const LabelMultiset& counts) {
  long total = 0;
  for (const auto& [label, mult] : counts) total += mult;
  return total;
}

// Shortest walk length (>= 1) from each vertex to vertex 0; nullopt when
// vertex 0 is unreachable. Entry 0 is the shortest cycle through 0, or
// nullopt if none exists.
std::vector<std::optional<std::size_t>> walks_to_front(const IncidenceMatrix& t) {
  const std::size_t n = t.dim();
  std::vector<std::vector<std::size_t>> rev(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (t.at(i, j) > 0) rev[j].push_back(i);

  std::vector<std::optional<std::size_t>> dist(n);
  std::deque<std::size_t> queue;
  for (std::size_t u : rev[0]) {
    if (!dist[u] && u != 0) {
      dist[u] = 1;
      queue.push_back(u);
    }
    if (u == 0 && !dist[0]) dist[0] = 1;  // self-loop
  }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t u : rev[v]) {
      if (u == 0) {
        if (!dist[0]) dist[0] = *dist[v] + 1;
        continue;
      }
      if (!dist[u]) {
        dist[u] = *dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

}  // namespace

void validate_disc_system(const DiscSystem& system) {
  auto index = label_index(system.labels, "disc system");
  if (system.labels.empty())
    throw Error("InvariantViolation", "disc system must contain at least one disc");
  if (system.images.size() != system.labels.size())
    throw Error("InvariantViolation", "disc system needs one image row per disc");
  if (system.weights.size() != system.labels.size())
    throw Error("InvariantViolation", "disc system needs one weight per disc");
  if (!is_nonnegative(system.weights) || is_zero(system.weights))
    throw Error("InvariantViolation", "weights must be nonnegative and not all zero");
  if (system.lambda <= 0) throw Error("InvariantViolation", "lambda must be positive");
  for (std::size_t i = 0; i < system.labels.size(); ++i)
    if (multiset_total(system.images[i]) == 0)
      throw Error("InvariantViolation",
                  "image of " + system.labels[i] + " is empty; every disc image must meet the base");

  IncidenceMatrix m = incidence_matrix(system);
  if (!is_irreducible(m))
    throw Error("NotIrreducible", "disc system incidence matrix is not irreducible");
  SubinvarianceReport report = check_subinvariance(m, system.weights, system.lambda);
  if (!report.holds)
    throw Error("InvariantViolation",
                "subinvariance fails at row " + std::to_string(report.violated_indices.front() + 1));
}

IncidenceMatrix incidence_matrix(const DiscSystem& system) {
  auto index = label_index(system.labels, "disc system");
  const std::size_t k = system.labels.size();
  if (system.images.size() != k)
    throw Error("InvariantViolation", "disc system needs one image row per disc");
  IncidenceMatrix m(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto row = resolve_row(system.images[i], index, k, system.labels[i]);
    for (std::size_t j = 0; j < k; ++j) m.at(i, j) = row[j];
  }
  return m;
}

Rational weighted_intersection(const LabelMultiset& counts,
                               const std::vector<std::string>& labels,
                               const WeightVector& weights, const Rational& lambda, long level) {
  auto index = label_index(labels, "weighted intersection");
  std::vector<long> dense(labels.size(), 0);
  for (const auto& [label, mult] : counts) {
    auto it = index.find(label);
    if (it == index.end())
      throw Error("UnknownLabel", "count references unknown label " + label);
    dense[it->second] = mult;
  }
  return weighted_intersection(dense, weights, lambda, level);
}

Rational weighted_intersection(const std::vector<long>& counts, const WeightVector& weights,
                               const Rational& lambda, long level) {
  if (counts.size() != weights.size())
    throw Error("DimensionMismatch", "counts and weights differ in length");
  Rational scale = rational_pow(lambda, level);
  Rational total(0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw Error("InvariantViolation", "negative multiplicity");
    if (counts[i] == 0) continue;
    total += Rational(counts[i]) * scale * weights[i];
  }
  return total;
}

std::vector<std::string> Enlargement::full_labels() const {
  std::vector<std::string> all = base.labels;
  all.insert(all.end(), new_labels.begin(), new_labels.end());
  return all;
}

WeightVector Enlargement::full_weights() const {
  WeightVector all = base.weights;
  all.insert(all.end(), new_weights.begin(), new_weights.end());
  return all;
}

void validate_enlargement(const Enlargement& e) {
  validate_disc_system(e.base);
  if (e.new_weights.size() != e.new_labels.size() || e.new_images.size() != e.new_labels.size())
    throw Error("InvariantViolation", "enlargement needs one weight and image row per new disc");
  if (!is_nonnegative(e.new_weights))
    throw Error("InvariantViolation", "new weights must be nonnegative");
  auto all = e.full_labels();
  label_index(all, "enlargement");  // duplicates across base/new surface here

  // An empty enlargement degenerates to the base system; there is no
  // tightening disc to constrain.
  if (e.new_labels.empty()) return;

  const std::size_t k = e.base.labels.size();
  const std::size_t total = all.size();
  if (e.delta_index < k || e.delta_index >= total)
    throw Error("InvariantViolation", "tightening disc must be one of the new discs");
  if (e.parallel_to >= k)
    throw Error("InvariantViolation", "tightening target must be a base disc");
  WeightVector v = e.full_weights();
  if (!(v[e.delta_index] < v[e.parallel_to]))
    throw Error("InvariantViolation",
                "parallel-tightening inequality fails: weight of " + all[e.delta_index] +
                    " must be strictly below weight of " + all[e.parallel_to]);
  // Row-by-row subinvariance of the assembled matrix is checked in
  // build_bar_matrix so the offending row can be named.
}

IncidenceMatrix build_bar_matrix(const Enlargement& e) {
  validate_enlargement(e);
  const std::size_t k = e.base.labels.size();
  const std::size_t l = e.new_labels.size();
  auto all = e.full_labels();
  auto index = label_index(all, "enlargement");

  IncidenceMatrix mbar(k + l);
  IncidenceMatrix m = incidence_matrix(e.base);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) mbar.at(i, j) = m.at(i, j);
  for (std::size_t i = 0; i < l; ++i) {
    auto row = resolve_row(e.new_images[i], index, k + l, e.new_labels[i]);
    for (std::size_t j = 0; j < k + l; ++j) mbar.at(k + i, j) = row[j];
  }

  WeightVector v = e.full_weights();
  WeightVector image = mat_vec(mbar, v);
  for (std::size_t i = 0; i < k + l; ++i)
    if (image[i] > e.base.lambda * v[i])
      throw Error("InvariantViolation",
                  "enlarged subinvariance fails at row " + std::to_string(i + 1) + " (" + all[i] + ")");
  return mbar;
}

IncidenceMatrix apply_tightening(const IncidenceMatrix& mbar, std::size_t delta,
                                 std::size_t target) {
  return row_copy(mbar, delta, target);
}

std::vector<std::string> LayeredFamily::full_labels() const {
  std::vector<std::string> all = base.labels;
  for (const auto& layer : lower_layers) all.insert(all.end(), layer.begin(), layer.end());
  return all;
}

WeightVector LayeredFamily::full_weights() const {
  WeightVector all = base.weights;
  for (const auto& layer : lower_layers)
    for (const auto& surface : layer) {
      auto it = surface_weights.find(surface);
      if (it == surface_weights.end())
        throw Error("InvariantViolation", "missing weight for surface " + surface);
      all.push_back(it->second);
    }
  return all;
}

namespace {

// Allowed image targets per lower-layer surface: base discs plus the layer
// one step up (which is the base itself for the topmost lower layer).
std::vector<std::set<std::string>> allowed_targets(const LayeredFamily& family) {
  std::vector<std::set<std::string>> allowed(family.lower_layers.size());
  std::set<std::string> base(family.base.labels.begin(), family.base.labels.end());
  for (std::size_t t = 0; t < family.lower_layers.size(); ++t) {
    allowed[t] = base;
    if (t > 0)
      allowed[t].insert(family.lower_layers[t - 1].begin(), family.lower_layers[t - 1].end());
  }
  return allowed;
}

}  // namespace

void validate_layered_family(const LayeredFamily& family) {
  validate_disc_system(family.base);
  if (family.lower_layers.empty())
    throw Error("InvariantViolation", "layered family needs height >= 1");
  for (const auto& layer : family.lower_layers)
    if (layer.empty()) throw Error("InvariantViolation", "layers must be nonempty");
  auto all = family.full_labels();
  label_index(all, "layered family");

  std::size_t lower_count = all.size() - family.base.labels.size();
  if (family.carried.size() != lower_count)
    throw Error("InvariantViolation", "carried data must cover exactly the lower-layer surfaces");
  if (family.surface_weights.size() != lower_count)
    throw Error("InvariantViolation", "weights must cover exactly the lower-layer surfaces");

  auto allowed = allowed_targets(family);
  for (std::size_t t = 0; t < family.lower_layers.size(); ++t) {
    for (const auto& surface : family.lower_layers[t]) {
      auto it = family.carried.find(surface);
      if (it == family.carried.end())
        throw Error("InvariantViolation", "missing carried row for surface " + surface);
      for (const auto& [target, mult] : it->second) {
        if (mult < 0)
          throw Error("InvariantViolation", "negative multiplicity in row of " + surface);
        if (mult > 0 && allowed[t].count(target) == 0)
          throw Error("LayerRuleViolation",
                      "surface " + surface + " is carried by " + target +
                          ", which is neither a base disc nor one layer up");
      }
      auto wit = family.surface_weights.find(surface);
      if (wit == family.surface_weights.end())
        throw Error("InvariantViolation", "missing weight for surface " + surface);
      if (wit->second < 0)
        throw Error("InvariantViolation", "negative weight for surface " + surface);
    }
  }
}

IncidenceMatrix build_layer_matrix(const LayeredFamily& family) {
  validate_layered_family(family);
  auto all = family.full_labels();
  auto index = label_index(all, "layered family");
  const std::size_t k = family.base.labels.size();
  const std::size_t n = all.size();

  IncidenceMatrix w(n);
  IncidenceMatrix m = incidence_matrix(family.base);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) w.at(i, j) = m.at(i, j);

  std::size_t row = k;
  for (const auto& layer : family.lower_layers)
    for (const auto& surface : layer) {
      auto resolved = resolve_row(family.carried.at(surface), index, n, surface);
      for (std::size_t j = 0; j < n; ++j) w.at(row, j) = resolved[j];
      ++row;
    }
  return w;
}

bool check_layer_zero_pattern(const LayeredFamily& family, const IncidenceMatrix& w) {
  auto all = family.full_labels();
  if (w.dim() != all.size()) return false;
  auto index = label_index(all, "layered family");
  const std::size_t k = family.base.labels.size();

  IncidenceMatrix m = incidence_matrix(family.base);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < w.dim(); ++j) {
      const BigInt& expected = j < k ? m.at(i, j) : BigInt(0);
      if (w.at(i, j) != expected) return false;
    }

  auto allowed = allowed_targets(family);
  std::size_t row = k;
  for (std::size_t t = 0; t < family.lower_layers.size(); ++t)
    for (std::size_t s = 0; s < family.lower_layers[t].size(); ++s, ++row)
      for (std::size_t j = 0; j < w.dim(); ++j)
        if (w.at(row, j) != 0 && allowed[t].count(all[j]) == 0) return false;
  return true;
}

PipelineResult pipeline(const LayeredFamily& family,
                        const std::map<std::string, LabelMultiset>& d_update,
                        const WeightVector& u, const Rational& lambda, std::size_t p_max) {
  IncidenceMatrix w = build_layer_matrix(family);
  const std::size_t m = w.dim();
  const std::size_t k = family.base.labels.size();
  const std::size_t l = family.lower_layers.back().size();
  if (u.size() != m)
    throw Error("DimensionMismatch", "weight vector length does not match the family");
  if (!is_nonnegative(u) || is_zero(u))
    throw Error("InvariantViolation", "weights must be nonnegative and not all zero");
  if (p_max == 0) p_max = m * (m + 1);

  // Rational surrogate of the eigen-relation: Wu <= lambda u, with the
  // tightening surface strictly lighter than its parallel base disc.
  WeightVector wu = mat_vec(w, u);
  for (std::size_t i = 0; i < m; ++i)
    if (wu[i] > lambda * u[i])
      throw Error("SurrogateViolation",
                  "Wu <= lambda u fails at row " + std::to_string(i + 1));
  if (u[m - 1] > u[0])
    throw Error("SurrogateViolation",
                "tightening surface weight exceeds the weight of its parallel base disc");
  const bool strict_tightening = u[m - 1] < u[0];

  PipelineResult result{std::move(w),
                        IncidenceMatrix(),
                        IncidenceMatrix(),
                        IncidenceMatrix(),
                        IncidenceMatrix(),
                        IndexSubset({0}, 1),
                        {},
                        {}};
  result.t0 = row_copy(result.w, m - 1, 0);

  // T1 rewrites only the bottom-layer rows with the updated incidence; its
  // targets live among base discs and bottom-layer surfaces.
  const auto& bottom = family.lower_layers.back();
  std::set<std::string> bottom_set(bottom.begin(), bottom.end());
  if (d_update.size() != bottom.size())
    throw Error("InvariantViolation", "d_update must cover exactly the bottom-layer surfaces");
  auto all = family.full_labels();
  auto index = label_index(all, "layered family");
  result.t1 = result.t0;
  for (std::size_t s = 0; s < bottom.size(); ++s) {
    auto it = d_update.find(bottom[s]);
    if (it == d_update.end())
      throw Error("InvariantViolation", "d_update is missing a row for surface " + bottom[s]);
    for (const auto& [target, mult] : it->second)
      if (mult > 0 && bottom_set.count(target) == 0 &&
          std::find(family.base.labels.begin(), family.base.labels.end(), target) ==
              family.base.labels.end())
        throw Error("LayerRuleViolation", "updated row of " + bottom[s] + " is carried by " +
                                              target +
                                              ", which is neither a base disc nor a bottom-layer surface");
    auto row = resolve_row(it->second, index, m, bottom[s]);
    std::size_t r = m - l + s;
    for (std::size_t j = 0; j < m; ++j) result.t1.at(r, j) = row[j];
  }

  WeightVector t0u = mat_vec(result.t0, u);
  WeightVector t1u = mat_vec(result.t1, u);
  for (std::size_t s = 0; s < l; ++s) {
    std::size_t r = m - l + s;
    if (t1u[r] > t0u[r])
      throw Error("NonIncreaseViolation",
                  "updated image of " + bottom[s] + " increases the weighted intersection");
  }

  result.t2 = row_copy(result.t1, m - 1, 0);

  WeightVector t2u = mat_vec(result.t2, u);
  for (std::size_t i = 0; i < m; ++i)
    if (t2u[i] > lambda * u[i])
      throw Error("LemmaViolation", "T2 u <= lambda u failed at row " + std::to_string(i + 1));

  // Strict schedule: least p with (T2^p u)_j < lambda^p u_j per index.
  std::map<std::size_t, std::size_t> schedule;
  {
    WeightVector x = u;
    Rational lpow(1);
    for (std::size_t p = 1; p <= p_max && schedule.size() < m; ++p) {
      x = mat_vec(result.t2, x);
      lpow *= lambda;
      for (std::size_t j = 0; j < m; ++j) {
        if (schedule.count(j)) continue;
        if (x[j] < lpow * u[j]) schedule.emplace(j, p);
      }
    }
  }

  // Cross-check the propagation mechanism itself: strictness at the first
  // row must reach every row j no later than one step after the first walk
  // from j to row 1.
  if (t2u[0] < lambda * u[0]) {
    auto reach = walks_to_front(result.t2);
    for (std::size_t j = 1; j < m; ++j) {
      if (!reach[j] || *reach[j] + 1 > p_max) continue;
      auto it = schedule.find(j);
      if (it == schedule.end() || it->second > *reach[j] + 1)
        throw Error("LemmaViolation",
                    "strictness failed to propagate to row " + std::to_string(j + 1) +
                        " within " + std::to_string(*reach[j] + 1) + " powers");
    }
  }

  if (schedule.size() < m && strict_tightening) {
    std::size_t missing = 0;
    while (schedule.count(missing)) ++missing;
    throw Error("PropagationTimeout",
                "no strict power <= " + std::to_string(p_max) + " for index " +
                    std::to_string(missing + 1));
  }

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < k; ++i) kept.push_back(i);
  for (std::size_t i = m - l; i < m; ++i) kept.push_back(i);
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  result.kept = IndexSubset(kept, m);
  result.t3 = submatrix(result.t2, result.kept);

  // Certify every strongly connected piece; the growth of the tightened map
  // is the maximum over them, so the certificate uses the component with
  // the largest certified lower bound.
  auto sccs = scc_decompose(result.t3);
  std::size_t best = 0;
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    PerronCertificate cert =
        perron_bounds(submatrix(result.t3, sccs[c]), 256, Rational(1, 1000000000));
    if (!result.scc_certificates.empty() &&
        cert.lower > result.scc_certificates[best].cert.lower)
      best = c;
    result.scc_certificates.push_back({sccs[c], std::move(cert)});
  }

  result.cert = certify_improvement(family.base, result.t3, sccs[best]);
  result.cert.strict_schedule = std::move(schedule);
  result.cert.verdict = result.cert.verdict && result.cert.strict_schedule.size() == m;
  return result;
}

TighteningCertificate certify_improvement(const DiscSystem& before,
                                          const IncidenceMatrix& after_matrix,
                                          const IndexSubset& scc) {
  validate_disc_system(before);
  IncidenceMatrix n = submatrix(after_matrix, scc);
  if (!is_irreducible(n))
    throw Error("SubmatrixNotIrreducible", "certify_improvement needs an irreducible component");
  IncidenceMatrix m = incidence_matrix(before);

  TighteningCertificate cert;
  cert.scc_used = scc;
  const WeightVector* start =
      is_strictly_positive(before.weights) ? &before.weights : nullptr;

  for (int round = 0; round < 7; ++round) {
    std::size_t budget = 64u << round;
    Rational width = rational_pow(Rational(1, 10), 6 + 2 * round);
    cert.before = perron_bounds(m, budget, width, start);
    cert.after = perron_bounds(n, budget, width);
    if (cert.after.upper < cert.before.lower) {
      cert.verdict = true;
      cert.conclusive = true;
      return cert;
    }
    if (cert.after.lower > cert.before.upper) {
      cert.verdict = false;  // certified not an improvement
      cert.conclusive = true;
      return cert;
    }
  }
  cert.verdict = false;
  cert.conclusive = false;  // NotSeparable: intervals overlap at the cap
  return cert;
}

TightenOutcome run_tightening(const Enlargement& e, std::size_t p_max) {
  if (e.new_labels.empty())
    throw Error("InvariantViolation", "tightening needs at least one new disc");
  TightenOutcome out;
  out.mbar = build_bar_matrix(e);
  out.mhat = apply_tightening(out.mbar, e.delta_index, e.parallel_to);

  const std::size_t n = out.mhat.dim();
  if (p_max == 0) p_max = n * (n + 1);
  WeightVector v = e.full_weights();
  const Rational& lambda = e.base.lambda;

  std::map<std::size_t, std::size_t> schedule;
  {
    WeightVector x = v;
    Rational lpow(1);
    for (std::size_t p = 1; p <= p_max && schedule.size() < n; ++p) {
      x = mat_vec(out.mhat, x);
      lpow *= lambda;
      for (std::size_t j = 0; j < n; ++j)
        if (!schedule.count(j) && x[j] < lpow * v[j]) schedule.emplace(j, p);
    }
  }
  if (schedule.size() < n) {
    std::size_t missing = 0;
    while (schedule.count(missing)) ++missing;
    throw Error("PropagationTimeout",
                "no strict power <= " + std::to_string(p_max) + " for index " +
                    std::to_string(missing + 1));
  }

  auto sccs = scc_decompose(out.mhat);
  std::size_t best = 0;
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    PerronCertificate cert =
        perron_bounds(submatrix(out.mhat, sccs[c]), 256, Rational(1, 1000000000));
    if (!out.scc_certificates.empty() && cert.lower > out.scc_certificates[best].cert.lower)
      best = c;
    out.scc_certificates.push_back({sccs[c], std::move(cert)});
  }
  out.cert = certify_improvement(e.base, out.mhat, sccs[best]);
  out.cert.strict_schedule = std::move(schedule);
  out.cert.verdict = out.cert.verdict && out.cert.strict_schedule.size() == n;
  return out;
}

StabilizationVerdict validate_stabilization(const StabilizationTrace& trace) {
  StabilizationVerdict verdict;
  if (trace.systems.empty()) {
    verdict.detail = "trace contains no systems";
    return verdict;
  }
  for (std::size_t i = 0; i < trace.systems.size(); ++i) {
    std::set<std::string> seen;
    for (const auto& disc : trace.systems[i]) {
      if (!seen.insert(disc.label).second) {
        verdict.detail = "system " + std::to_string(i) + " repeats disc " + disc.label;
        return verdict;
      }
      if (disc.weight < 0) {
        verdict.detail = "disc " + disc.label + " has negative weight";
        return verdict;
      }
    }
  }

  // Nesting: each system carries every disc of the previous one, unchanged.
  for (std::size_t i = 0; i + 1 < trace.systems.size(); ++i) {
    std::map<std::string, const TraceDisc*> next;
    for (const auto& disc : trace.systems[i + 1]) next.emplace(disc.label, &disc);
    for (const auto& disc : trace.systems[i]) {
      auto it = next.find(disc.label);
      if (it == next.end()) {
        verdict.detail = "nesting fails: disc " + disc.label + " of system " +
                         std::to_string(i) + " is missing from system " + std::to_string(i + 1);
        return verdict;
      }
      if (it->second->parallel_class != disc.parallel_class ||
          it->second->weight != disc.weight) {
        verdict.detail = "nesting fails: disc " + disc.label + " changes between systems " +
                         std::to_string(i) + " and " + std::to_string(i + 1);
        return verdict;
      }
    }
  }

  auto stabilizes_at = [&](std::size_t j) -> std::optional<std::string> {
    for (const auto& disc : trace.systems[j + 1]) {
      bool found = false;
      for (const auto& prev : trace.systems[j]) {
        if (prev.parallel_class == disc.parallel_class && prev.weight <= disc.weight) {
          found = true;
          break;
        }
      }
      if (!found)
        return "disc " + disc.label + " of system " + std::to_string(j + 1) +
               " has no parallel predecessor of weight <= " + rational_to_string(disc.weight);
    }
    return std::nullopt;
  };

  for (std::size_t j = 0; j + 1 < trace.systems.size(); ++j) {
    if (!stabilizes_at(j)) {
      verdict.minimal_j = j;
      break;
    }
  }

  const std::size_t j = trace.stabilization_index;
  if (j + 1 >= trace.systems.size()) {
    verdict.detail = "trace horizon too short to witness stabilization at index " +
                     std::to_string(j);
    return verdict;
  }
  if (auto failure = stabilizes_at(j)) {
    verdict.detail = *failure;
    return verdict;
  }
  verdict.ok = true;
  return verdict;
}

}  // namespace lamcert
