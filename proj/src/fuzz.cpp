#include "lamcert/fuzz.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lamcert/errors.hpp"
#include "lamcert/kernels.hpp"
#include "lamcert/perron.hpp"

namespace lamcert::fuzz {

using io::json;

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the pair; good enough to decorrelate trials.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

IncidenceMatrix random_irreducible(Rng& rng, std::size_t n_min, std::size_t n_max,
                                   long entry_max) {
  std::size_t n = n_min + rng.below(n_max - n_min + 1);
  IncidenceMatrix m(n);
  if (n == 1) {
    m.at(0, 0) = rng.range(0, entry_max);
    return m;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng.one_in(2)) m.at(i, j) = rng.range(0, entry_max);
  // Cycle backbone guarantees strong connectivity.
  for (std::size_t i = 0; i < n; ++i)
    if (m.at(i, (i + 1) % n) == 0) m.at(i, (i + 1) % n) = 1;
  return m;
}

EigenInstance random_eigen_instance(Rng& rng, std::size_t n_min, std::size_t n_max) {
  std::size_t n = n_min + rng.below(n_max - n_min + 1);
  EigenInstance out;
  out.v.assign(n, Rational(1));
  for (std::size_t i = 1; i < n; ++i) out.v[i] = rng.range(1, 3);
  long lambda = rng.range(4, 9);
  out.lambda = lambda;
  out.matrix = IncidenceMatrix(n);

  // Row i is filled to hit lambda * v_i exactly; v_0 = 1 absorbs the slack,
  // and the cycle entry keeps the digraph strongly connected.
  for (std::size_t i = 0; i < n; ++i) {
    long budget = lambda * static_cast<long>(out.v[i].get_num().get_si());
    if (n > 1) {
      std::size_t succ = (i + 1) % n;
      long cost = out.v[succ].get_num().get_si();
      out.matrix.at(i, succ) += 1;
      budget -= cost;
    }
    for (int tries = 0; tries < 3; ++tries) {
      std::size_t j = rng.below(n);
      long cost = out.v[j].get_num().get_si();
      long count = rng.range(0, 2);
      if (count > 0 && cost * count <= budget) {
        out.matrix.at(i, j) += count;
        budget -= cost * count;
      }
    }
    out.matrix.at(i, 0) += budget;  // v_0 = 1
  }
  return out;
}

IncidenceMatrix reduce_entries(Rng& rng, const IncidenceMatrix& m) {
  IncidenceMatrix n = m;
  for (std::size_t tries = 0; tries < m.dim() + 2; ++tries) {
    std::size_t i = rng.below(m.dim());
    std::size_t j = rng.below(m.dim());
    if (n.at(i, j) == 0) continue;
    n.at(i, j) -= 1;
    if (!is_irreducible(n)) n.at(i, j) += 1;
  }
  return n;
}

namespace {

DiscSystem system_from_eigen(const EigenInstance& inst) {
  DiscSystem system;
  const std::size_t k = inst.matrix.dim();
  for (std::size_t i = 0; i < k; ++i) system.labels.push_back("E" + std::to_string(i + 1));
  system.images.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (inst.matrix.at(i, j) > 0)
        system.images[i][system.labels[j]] = inst.matrix.at(i, j).get_si();
  system.weights = inst.v;
  system.lambda = inst.lambda;
  return system;
}

Rational fraction_below_one(Rng& rng) {
  long num = rng.range(1, 3);
  long den = rng.range(num + 1, num + 3);
  return make_rational(num, den);
}

}  // namespace

Enlargement random_enlargement(Rng& rng) {
  Enlargement e;
  e.base = system_from_eigen(random_eigen_instance(rng, 2, 4));
  const std::size_t k = e.base.labels.size();
  const std::size_t l = 1 + rng.below(3);
  for (std::size_t i = 0; i < l; ++i) e.new_labels.push_back("D" + std::to_string(k + i + 1));

  for (std::size_t i = 0; i < l; ++i) {
    // Keep lambda * w >= 1 so every new row can afford a base entry.
    Rational w = i + 1 == l ? fraction_below_one(rng)
                            : make_rational(rng.range(1, 2), rng.range(1, 2));
    if (w * e.base.lambda < 1) w = Rational(1, 2);
    e.new_weights.push_back(w);
  }
  e.delta_index = k + l - 1;
  e.parallel_to = 0;

  auto all = e.full_labels();
  WeightVector v = e.full_weights();
  e.new_images.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    Rational budget = e.base.lambda * e.new_weights[i];
    e.new_images[i][all[0]] = 1;  // reaches the base, cost v_0 = 1
    budget -= v[0];
    for (int tries = 0; tries < 4; ++tries) {
      std::size_t j = rng.below(all.size());
      if (v[j] == 0) continue;
      if (v[j] <= budget && rng.one_in(2)) {
        e.new_images[i][all[j]] += 1;
        budget -= v[j];
      }
    }
  }
  return e;
}

io::LayeredCase random_layered_case(Rng& rng, std::size_t h_max) {
  io::LayeredCase out;
  EigenInstance base = random_eigen_instance(rng, 2, 3);
  out.family.base = system_from_eigen(base);
  const std::size_t height = 1 + rng.below(h_max);

  std::size_t counter = 0;
  for (std::size_t t = 0; t < height; ++t) {
    std::size_t size = 1 + rng.below(2);
    if (t + 1 == height && size < 1) size = 1;
    std::vector<std::string> layer;
    for (std::size_t s = 0; s < size; ++s) layer.push_back("S" + std::to_string(++counter));
    out.family.lower_layers.push_back(std::move(layer));
  }

  // Weights are derived so that Wu = lambda u holds exactly row by row.
  WeightVector u = out.family.base.weights;
  const auto& labels = out.family.base.labels;
  std::vector<std::string> prev;  // layer above the one being built
  std::vector<WeightVector::value_type> prev_weights;
  for (std::size_t t = 0; t < out.family.lower_layers.size(); ++t) {
    std::vector<std::string> allowed = labels;
    WeightVector allowed_w = out.family.base.weights;
    if (t > 0) {
      allowed.insert(allowed.end(), prev.begin(), prev.end());
      allowed_w.insert(allowed_w.end(), prev_weights.begin(), prev_weights.end());
    }
    std::vector<std::string> current = out.family.lower_layers[t];
    WeightVector current_weights;
    for (std::size_t s = 0; s < current.size(); ++s) {
      const bool is_tightening =
          t + 1 == out.family.lower_layers.size() && s + 1 == current.size();
      LabelMultiset row;
      Rational total(0);
      if (is_tightening) {
        row[labels[0]] = 1;  // weight 1/lambda, strictly below the first disc's weight
        total = out.family.base.weights[0];
      } else {
        // Bottom-layer rows keep a base entry so the update budget below can
        // always afford one.
        if (t + 1 == out.family.lower_layers.size())
          row[labels[rng.below(labels.size())]] += 1;
        else
          row[allowed[rng.below(allowed.size())]] += 1;
        for (int tries = 0; tries < 3; ++tries)
          if (rng.one_in(2)) row[allowed[rng.below(allowed.size())]] += 1;
        for (const auto& [label, mult] : row) {
          auto it = std::find(allowed.begin(), allowed.end(), label);
          total += Rational(mult) * allowed_w[static_cast<std::size_t>(it - allowed.begin())];
        }
      }
      Rational weight = total / out.family.base.lambda;
      out.family.carried.emplace(current[s], std::move(row));
      out.family.surface_weights.emplace(current[s], weight);
      current_weights.push_back(weight);
      u.push_back(weight);
    }
    prev = std::move(current);
    prev_weights = std::move(current_weights);
  }

  // Bottom-row update: within budget (no weighted increase) and reaching the
  // base so strictness propagates everywhere.
  const auto& bottom = out.family.lower_layers.back();
  std::vector<std::string> bottom_allowed = labels;
  bottom_allowed.insert(bottom_allowed.end(), bottom.begin(), bottom.end());
  for (const auto& surface : bottom) {
    Rational budget = out.family.base.lambda * out.family.surface_weights.at(surface);
    LabelMultiset row;
    row[labels[0]] = 1;
    budget -= out.family.base.weights[0];
    for (int tries = 0; tries < 3; ++tries) {
      const std::string& target = bottom_allowed[rng.below(bottom_allowed.size())];
      Rational cost = 0;
      auto bit = std::find(labels.begin(), labels.end(), target);
      if (bit != labels.end())
        cost = out.family.base.weights[static_cast<std::size_t>(bit - labels.begin())];
      else
        cost = out.family.surface_weights.at(target);
      if (cost > 0 && cost <= budget && rng.one_in(2)) {
        row[target] += 1;
        budget -= cost;
      }
    }
    out.d_update.emplace(surface, std::move(row));
  }
  return out;
}

IntersectionPattern random_pattern(Rng& rng, std::size_t max_curves,
                                   std::size_t max_components) {
  IntersectionPattern p;
  const std::size_t n = rng.below(max_curves + 1);
  for (std::size_t i = 0; i < n; ++i) p.curves.push_back("g" + std::to_string(i));

  std::vector<std::size_t> comp_of(n, 0);
  std::vector<Rational> s_weight(n), d_weight(n);
  std::set<ComponentId> used;
  auto frac = [&rng]() { return make_rational(rng.range(1, 3), rng.range(3, 5)); };

  for (std::size_t i = 0; i < n; ++i) {
    // s-parent among earlier curves (or root), component inherited.
    bool root = i == 0 || rng.one_in(3);
    if (root) {
      p.s_parent.emplace(p.curves[i], std::nullopt);
      comp_of[i] = rng.below(max_components);
    } else {
      std::size_t par = rng.below(i);
      p.s_parent.emplace(p.curves[i], p.curves[par]);
      comp_of[i] = comp_of[par];
    }
    ComponentId comp = "C" + std::to_string(comp_of[i]);
    p.s_component.emplace(p.curves[i], comp);
    used.insert(comp);

    bool droot = i == 0 || rng.one_in(3);
    if (droot)
      p.delta_parent.emplace(p.curves[i], std::nullopt);
    else
      p.delta_parent.emplace(p.curves[i], p.curves[rng.below(i)]);
  }
  for (const auto& comp : used) p.w_component.emplace(comp, Rational(rng.range(2, 4)));
  if (rng.one_in(4)) p.w_component.emplace("C" + std::to_string(max_components), Rational(1));

  for (std::size_t i = 0; i < n; ++i) {
    const auto& spar = p.s_parent.at(p.curves[i]);
    Rational cap = spar ? s_weight[static_cast<std::size_t>(
                              std::find(p.curves.begin(), p.curves.end(), *spar) -
                              p.curves.begin())]
                        : p.w_component.at(p.s_component.at(p.curves[i]));
    s_weight[i] = cap * frac();
    p.w_s.emplace(p.curves[i], s_weight[i]);

    const auto& dpar = p.delta_parent.at(p.curves[i]);
    Rational dcap = dpar ? d_weight[static_cast<std::size_t>(
                               std::find(p.curves.begin(), p.curves.end(), *dpar) -
                               p.curves.begin())]
                         : make_rational(rng.range(1, 2), 1);
    d_weight[i] = dcap * frac();
    p.w_delta.emplace(p.curves[i], d_weight[i]);
  }
  return p;
}

std::vector<IntersectionPattern> exhaustive_pattern_corpus(std::size_t max_curves,
                                                           std::size_t max_components,
                                                           std::size_t cap) {
  std::vector<IntersectionPattern> corpus;

  auto emit_pattern = [&](std::size_t n, const std::vector<std::size_t>& s_code,
                          const std::vector<std::size_t>& comp_code,
                          const std::vector<std::size_t>& d_code) {
    IntersectionPattern p;
    for (std::size_t i = 0; i < n; ++i) p.curves.push_back("g" + std::to_string(i));
    std::vector<std::size_t> comp_of(n, 0);
    std::size_t root_seen = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (s_code[i] == 0) {
        p.s_parent.emplace(p.curves[i], std::nullopt);
        comp_of[i] = comp_code[root_seen++];
      } else {
        p.s_parent.emplace(p.curves[i], p.curves[s_code[i] - 1]);
        comp_of[i] = comp_of[s_code[i] - 1];
      }
      p.s_component.emplace(p.curves[i], "C" + std::to_string(comp_of[i]));
      if (d_code[i] == 0)
        p.delta_parent.emplace(p.curves[i], std::nullopt);
      else
        p.delta_parent.emplace(p.curves[i], p.curves[d_code[i] - 1]);
    }
    std::set<std::size_t> comps(comp_of.begin(), comp_of.end());
    for (std::size_t c : comps) p.w_component.emplace("C" + std::to_string(c), Rational(2));

    auto depth = [&](const std::map<CurveId, std::optional<CurveId>>& parent, std::size_t i) {
      std::size_t d = 0;
      auto cur = p.curves[i];
      while (parent.at(cur)) {
        cur = *parent.at(cur);
        ++d;
      }
      return d;
    };
    for (std::size_t i = 0; i < n; ++i) {
      p.w_s.emplace(p.curves[i],
                    rational_pow(Rational(1, 2), static_cast<long>(depth(p.s_parent, i))));
      p.w_delta.emplace(p.curves[i], rational_pow(Rational(1, 3),
                                                  static_cast<long>(depth(p.delta_parent, i)) + 1));
    }
    corpus.push_back(std::move(p));
  };

  for (std::size_t n = 0; n <= max_curves && corpus.size() < cap; ++n) {
    if (n == 0) {
      emit_pattern(0, {}, {}, {});
      continue;
    }
    // Odometer over increasing-forest codes: code[i] in 0..i, where 0 means
    // root and k > 0 means parent is curve k-1.
    std::vector<std::size_t> s_code(n, 0);
    while (corpus.size() < cap) {
      std::size_t roots = static_cast<std::size_t>(std::count(s_code.begin(), s_code.end(), 0));
      std::vector<std::size_t> comp_code(roots, 0);  // first root stays C0
      while (corpus.size() < cap) {
        std::vector<std::size_t> d_code(n, 0);
        while (corpus.size() < cap) {
          emit_pattern(n, s_code, comp_code, d_code);
          std::size_t k = 0;
          for (; k < n; ++k) {
            if (d_code[k] < k) {
              ++d_code[k];
              std::fill(d_code.begin(), d_code.begin() + k, 0);
              break;
            }
          }
          if (k == n) break;
        }
        std::size_t k = 1;  // component of the first root is fixed
        for (; k < roots; ++k) {
          if (comp_code[k] + 1 < max_components) {
            ++comp_code[k];
            std::fill(comp_code.begin() + 1, comp_code.begin() + k, 0);
            break;
          }
        }
        if (k >= roots) break;
      }
      std::size_t k = 0;
      for (; k < n; ++k) {
        if (s_code[k] < k) {
          ++s_code[k];
          std::fill(s_code.begin(), s_code.begin() + k, 0);
          break;
        }
      }
      if (k == n) break;
    }
  }
  return corpus;
}

// --- properties -------------------------------------------------------------

namespace {

std::optional<std::string> prop_pf(const IncidenceMatrix& m, std::uint64_t seed) {
  Rng rng(seed);
  PerronCertificate cert = perron_bounds(m, 500, Rational(1, 1000000000));
  if (cert.lower > cert.upper) return "certificate bounds crossed";
  if (!is_strictly_positive(cert.witness)) return "witness is not strictly positive";

  WeightVector mw = mat_vec(m, cert.witness);
  Rational lo, hi;
  for (std::size_t i = 0; i < mw.size(); ++i) {
    Rational ratio = mw[i] / cert.witness[i];
    if (i == 0 || ratio < lo) lo = ratio;
    if (i == 0 || ratio > hi) hi = ratio;
  }
  if (lo != cert.lower || hi != cert.upper)
    return "certificate bounds are not the Collatz–Wielandt values of the witness";

  for (int probe = 0; probe < 3; ++probe) {
    WeightVector w(m.dim());
    for (auto& x : w) x = rng.range(1, 9);
    WeightVector y = mat_vec(m, w);
    Rational pmin, pmax;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Rational ratio = y[i] / w[i];
      if (i == 0 || ratio < pmin) pmin = ratio;
      if (i == 0 || ratio > pmax) pmax = ratio;
    }
    if (pmin > cert.upper || pmax < cert.lower)
      return "random probe bracket does not intersect the certificate";
  }

  SubinvarianceReport sub = check_subinvariance(m, cert.witness, cert.upper);
  if (!sub.holds) return "witness fails subinvariance at its own upper bound";
  std::size_t p = 2 + rng.below(7);
  power_subinvariance(m, cert.witness, cert.upper, p);  // raises LemmaViolation on defect

  IncidenceMatrix reduced = reduce_entries(rng, m);
  SubinvarianceReport dom = dominated_power_check(reduced, m, cert.witness, cert.upper, p);
  if (!dom.holds) return "entrywise-dominated power chain violated";
  return std::nullopt;
}

std::optional<std::string> prop_propagation(const IncidenceMatrix& m,
                                            const std::vector<BigInt>& first_row) {
  IncidenceMatrix mbar = m;
  for (std::size_t j = 0; j < m.dim(); ++j) mbar.at(0, j) = first_row[j];
  if (!propagation_check(m, mbar)) return "propagation falsified by a first-row replacement";
  return std::nullopt;
}

std::optional<std::string> prop_tighten(const Enlargement& e) {
  TightenOutcome out = run_tightening(e);
  const std::size_t k = e.base.labels.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = k; j < out.mbar.dim(); ++j)
      if (out.mbar.at(i, j) != 0) return "zero block of the enlarged matrix is dirty";
  for (std::size_t i = 1; i < out.mhat.dim(); ++i)
    if (!out.mhat.rows_equal(i, out.mbar, i)) return "tightening changed a row other than the first";
  if (!out.cert.conclusive) return "interval separation inconclusive";
  if (!out.cert.verdict) return "tightening certificate did not verify";
  if (!(out.cert.after.upper < out.cert.before.lower)) return "certified intervals overlap";
  return std::nullopt;
}

std::optional<std::string> prop_layered(const io::LayeredCase& c) {
  WeightVector u = c.family.full_weights();
  PipelineResult res =
      pipeline(c.family, c.d_update, u, c.family.base.lambda, c.p_max.value_or(0));
  if (!check_layer_zero_pattern(c.family, res.w)) return "layer matrix violates the zero pattern";
  const std::size_t m = res.w.dim();
  for (std::size_t i = 1; i < m; ++i)
    if (!res.t0.rows_equal(i, res.w, i)) return "first row copy touched a later row";
  const std::size_t l = c.family.lower_layers.back().size();
  for (std::size_t i = 0; i < m - l; ++i)
    if (i != 0 && !res.t1.rows_equal(i, res.t0, i)) return "row update touched a non-bottom row";
  for (std::size_t i = 1; i < m; ++i)
    if (!res.t2.rows_equal(i, res.t1, i)) return "second row copy touched a later row";
  if (!res.cert.verdict) return "pipeline certificate did not verify";
  return std::nullopt;
}

std::optional<std::string> prop_confluence(const IntersectionPattern& pattern,
                                           std::uint64_t seed) {
  EnumerationOutcome outcome = enumerate_all_orders(pattern, 200000);
  if (!outcome.confluent()) return "distinct results under different surgery orders";
  if (pattern.curves.empty()) return std::nullopt;
  const PushAwayResult& canonical = outcome.distinct.front();

  PushAwayResult by_strategy = push_away(pattern);
  if (by_strategy.normalized() != canonical.normalized())
    return "lowest-id strategy disagrees with the enumerated result";

  // A random valid order must agree as well.
  Rng rng(seed);
  RewriteState state{pattern};
  while (!state.done()) {
    auto leaves = state.delta_leaves();
    state = surger(state, leaves[rng.below(leaves.size())]);
  }
  if (result_of(state).normalized() != canonical.normalized())
    return "random valid order disagrees with the enumerated result";

  // Componentwise factorization: restriction commutes with pushing away.
  for (const auto& [comp, weight] : pattern.w_component) {
    IntersectionPattern restricted = component_restrict(pattern, comp);
    PushAwayResult local = push_away(restricted);
    for (const auto& id : local.glued)
      if (!canonical.glued.count(id)) return "restricted run glues " + id + " but full run does not";
    for (const auto& id : canonical.glued)
      if (pattern.s_component.at(id) == comp && !local.glued.count(id))
        return "full run glues " + id + " but restricted run does not";
    if (local.final_weights.at(comp) != canonical.final_weights.at(comp))
      return "restricted and full runs disagree on the weight of " + comp;
  }
  return std::nullopt;
}

// --- suite plumbing ---------------------------------------------------------

struct Trial {
  bool failed = false;
  bool invalid = false;
  std::string message;
  json counterexample;
};

json matrix_doc(const IncidenceMatrix& m) {
  io::DocumentEnvelope env{"1", "matrix", io::Payload(m)};
  return io::envelope_to_json(env);
}

}  // namespace

// Greedy minimizer for a failing matrix instance: drop indices, then push
// entries toward zero, as long as the property keeps failing.
IncidenceMatrix shrink_matrix(const IncidenceMatrix& start,
                              const std::function<bool(const IncidenceMatrix&)>& fails) {
  IncidenceMatrix current = start;
  bool progress = true;
  int evaluations = 0;
  while (progress && evaluations < 2000) {
    progress = false;
    for (std::size_t drop = 0; current.dim() > 1 && drop < current.dim(); ++drop) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < current.dim(); ++i)
        if (i != drop) keep.push_back(i);
      IncidenceMatrix candidate = submatrix(current, IndexSubset(keep, current.dim()));
      ++evaluations;
      if (fails(candidate)) {
        current = std::move(candidate);
        progress = true;
        break;
      }
    }
    if (progress) continue;
    for (std::size_t i = 0; i < current.dim() && !progress; ++i)
      for (std::size_t j = 0; j < current.dim() && !progress; ++j) {
        if (current.at(i, j) == 0) continue;
        IncidenceMatrix candidate = current;
        candidate.at(i, j) = 0;
        ++evaluations;
        if (fails(candidate)) {
          current = std::move(candidate);
          progress = true;
        } else if (current.at(i, j) > 1) {
          candidate.at(i, j) = current.at(i, j) - 1;
          ++evaluations;
          if (fails(candidate)) {
            current = std::move(candidate);
            progress = true;
          }
        }
      }
  }
  return current;
}

namespace {

// Drop curves one at a time (children re-attach to the grandparent) while
// the property keeps failing.
IntersectionPattern drop_curve(const IntersectionPattern& p, const CurveId& victim) {
  IntersectionPattern out;
  out.w_component = p.w_component;
  for (const auto& id : p.curves) {
    if (id == victim) continue;
    out.curves.push_back(id);
    out.s_component.emplace(id, p.s_component.at(id));
    out.w_delta.emplace(id, p.w_delta.at(id));
    out.w_s.emplace(id, p.w_s.at(id));
    auto lift = [&](const std::map<CurveId, std::optional<CurveId>>& parent) {
      std::optional<CurveId> par = parent.at(id);
      while (par && *par == victim) par = parent.at(*par);
      return par;
    };
    out.s_parent.emplace(id, lift(p.s_parent));
    out.delta_parent.emplace(id, lift(p.delta_parent));
  }
  return out;
}

}  // namespace

IntersectionPattern shrink_pattern(const IntersectionPattern& start,
                                   const std::function<bool(const IntersectionPattern&)>& fails) {
  IntersectionPattern current = start;
  bool progress = true;
  int evaluations = 0;
  while (progress && evaluations < 500) {
    progress = false;
    for (const auto& id : std::vector<CurveId>(current.curves)) {
      IntersectionPattern candidate = drop_curve(current, id);
      ++evaluations;
      if (fails(candidate)) {
        current = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return current;
}

namespace {

template <typename Instance>
bool fails_quietly(const std::function<std::optional<std::string>(const Instance&)>& prop,
                   const Instance& instance) {
  try {
    return prop(instance).has_value();
  } catch (const Error& e) {
    return categorize(e.code()) != ErrorCategory::InvalidInput;
  } catch (const std::exception&) {
    return true;
  }
}

}  // namespace

io::Report fuzz_suite(const std::string& name, std::size_t trials, std::uint64_t seed) {
  if (name != "pf" && name != "propagation" && name != "pipeline" && name != "confluence")
    throw Error("UnknownSuite", "unknown fuzz suite \"" + name + "\"");

  std::vector<Trial> outcomes(trials);

  auto run_one = [&](std::size_t index) {
    Trial trial;
    std::uint64_t ts = trial_seed(seed, index);
    Rng rng(ts);
    try {
      if (name == "pf") {
        IncidenceMatrix m = random_irreducible(rng, 1, 6, 3);
        trial.counterexample = matrix_doc(m);
        if (auto msg = prop_pf(m, ts)) {
          trial.failed = true;
          trial.message = *msg;
          auto fails = [&](const IncidenceMatrix& cand) {
            return fails_quietly<IncidenceMatrix>(
                [&](const IncidenceMatrix& x) { return prop_pf(x, ts); }, cand);
          };
          trial.counterexample = matrix_doc(shrink_matrix(m, fails));
        }
      } else if (name == "propagation") {
        IncidenceMatrix m = random_irreducible(rng, 2, 8, 3);
        std::vector<BigInt> row(m.dim());
        for (auto& x : row) x = rng.range(0, 3);
        IncidenceMatrix mbar = m;
        for (std::size_t j = 0; j < m.dim(); ++j) mbar.at(0, j) = row[j];
        trial.counterexample = json{{"m", matrix_doc(m)}, {"mbar", matrix_doc(mbar)}};
        if (auto msg = prop_propagation(m, row)) {
          trial.failed = true;
          trial.message = *msg;
        }
      } else if (name == "pipeline") {
        if (index % 2 == 0) {
          Enlargement e = random_enlargement(rng);
          trial.counterexample =
              io::envelope_to_json(io::DocumentEnvelope{"1", "enlargement", io::Payload(e)});
          if (auto msg = prop_tighten(e)) {
            trial.failed = true;
            trial.message = *msg;
          }
        } else {
          io::LayeredCase c = random_layered_case(rng, 3);
          trial.counterexample =
              io::envelope_to_json(io::DocumentEnvelope{"1", "layered-family", io::Payload(c)});
          if (auto msg = prop_layered(c)) {
            trial.failed = true;
            trial.message = *msg;
          }
        }
      } else {  // confluence
        IntersectionPattern p = random_pattern(rng, 7, 2);
        trial.counterexample =
            io::envelope_to_json(io::DocumentEnvelope{"1", "pattern", io::Payload(io::PatternCase{p, std::nullopt})});
        if (auto msg = prop_confluence(p, ts)) {
          trial.failed = true;
          trial.message = *msg;
          auto fails = [&](const IntersectionPattern& cand) {
            return fails_quietly<IntersectionPattern>(
                [&](const IntersectionPattern& x) { return prop_confluence(x, ts); }, cand);
          };
          IntersectionPattern small = shrink_pattern(p, fails);
          trial.counterexample = io::envelope_to_json(
              io::DocumentEnvelope{"1", "pattern", io::Payload(io::PatternCase{small, std::nullopt})});
        }
      }
    } catch (const std::exception& e) {
      trial.failed = true;
      trial.message = e.what();
    }
    outcomes[index] = std::move(trial);
  };

  const long total = static_cast<long>(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < total; ++i) run_one(static_cast<std::size_t>(i));

  io::Report report;
  report.seed = seed;
  std::size_t failures = 0;
  for (const auto& t : outcomes)
    if (t.failed) ++failures;
  report.verdict = failures == 0 ? io::Verdict::Verified : io::Verdict::Violated;
  report.certificates.push_back(json{
      {"type", "fuzz"}, {"suite", name}, {"trials", trials}, {"failures", failures}});

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].failed) continue;
    report.add_diagnostic("fuzz/" + name, "trial " + std::to_string(i), outcomes[i].message);
    report.certificates.back()["counterexample"] = outcomes[i].counterexample;
    break;  // the first failing trial carries the minimized document
  }
  return report;
}

}  // namespace lamcert::fuzz
