#include "lamcert/perron.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <string>

#include "lamcert/errors.hpp"

namespace lamcert {

namespace {

std::vector<std::vector<std::size_t>> out_edges(const IncidenceMatrix& m) {
  std::vector<std::vector<std::size_t>> adj(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (m.at(i, j) > 0) adj[i].push_back(j);
  return adj;
}

// Iterative Tarjan; components come out in reverse topological order and
// are re-sorted by smallest member afterwards.
std::vector<std::vector<std::size_t>> tarjan_sccs(const IncidenceMatrix& m) {
  const std::size_t n = m.dim();
  auto adj = out_edges(m);
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  int next_index = 0;

  struct Frame {
    std::size_t v;
    std::size_t edge = 0;
  };

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root}};
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < adj[f.v].size()) {
        std::size_t w = adj[f.v][f.edge++];
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        if (lowlink[f.v] == index[f.v]) {
          std::vector<std::size_t> comp;
          while (true) {
            std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
            if (w == f.v) break;
          }
          std::sort(comp.begin(), comp.end());
          comps.push_back(std::move(comp));
        }
        std::size_t v = f.v;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
      }
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

void require_dims(const IncidenceMatrix& m, const WeightVector& v, const char* op) {
  if (m.dim() != v.size())
    throw Error("DimensionMismatch", std::string(op) + ": matrix dimension " +
                                         std::to_string(m.dim()) + " vs vector length " +
                                         std::to_string(v.size()));
}

void require_weight_vector(const WeightVector& v, const char* op) {
  if (!is_nonnegative(v) || is_zero(v))
    throw Error("PreconditionFailed",
                std::string(op) + ": weight vector must be nonnegative and nonzero");
}

SubinvarianceReport compare(const WeightVector& lhs, const WeightVector& rhs) {
  SubinvarianceReport report;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] < rhs[i])
      report.strict_indices.push_back(i);
    else if (lhs[i] > rhs[i])
      report.violated_indices.push_back(i);
  }
  report.holds = report.violated_indices.empty();
  return report;
}

// Divide out the content so iterate entries track direction, not magnitude.
void normalize_content(std::vector<BigInt>& w) {
  BigInt g = 0;
  for (const BigInt& x : w) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (BigInt& x : w) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

}  // namespace

bool is_irreducible(const IncidenceMatrix& m) { return tarjan_sccs(m).size() == 1; }

std::vector<IndexSubset> scc_decompose(const IncidenceMatrix& m) {
  std::vector<IndexSubset> out;
  for (auto& comp : tarjan_sccs(m)) out.emplace_back(std::move(comp), m.dim());
  return out;
}

PerronCertificate perron_bounds(const IncidenceMatrix& m, std::size_t max_iterations,
                                const Rational& target_width, const WeightVector* start) {
  const std::size_t n = m.dim();
  if (!is_irreducible(m)) throw Error("NotIrreducible", "perron_bounds requires irreducibility");
  if (target_width < 0)
    throw Error("PreconditionFailed", "target width must be nonnegative");

  std::vector<BigInt> w(n, BigInt(1));
  if (start != nullptr) {
    if (start->size() != n)
      throw Error("DimensionMismatch", "start witness length does not match matrix");
    if (!is_strictly_positive(*start))
      throw Error("PreconditionFailed", "start witness must be strictly positive");
    BigInt lcm = 1;
    for (const Rational& x : *start)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    for (std::size_t i = 0; i < n; ++i)
      w[i] = (*start)[i].get_num() * (lcm / (*start)[i].get_den());
    normalize_content(w);
  }

  IncidenceMatrix shifted = m;
  for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) += 1;
  IncidenceMatrix op = shifted;  // grows to shifted^(2^k) as iterations proceed

  // Squaring is cut off once operator entries get this large; afterwards the
  // same operator keeps being applied.
  constexpr std::size_t kMaxOpBits = 1 << 16;

  PerronCertificate cert;
  bool first_eval = true;
  auto evaluate = [&]() {
    std::vector<BigInt> y = mat_vec(m, w);
    Rational lo, hi;
    for (std::size_t i = 0; i < n; ++i) {
      Rational ratio(y[i], w[i]);
      ratio.canonicalize();
      if (i == 0 || ratio < lo) lo = ratio;
      if (i == 0 || ratio > hi) hi = ratio;
    }
    // Monotone by construction: each update applies a positive power of the
    // shifted matrix.
    assert(first_eval || (lo >= cert.lower && hi <= cert.upper));
    first_eval = false;
    cert.lower = lo;
    cert.upper = hi;
  };

  evaluate();
  std::size_t it = 0;
  bool keep_squaring = true;
  while (cert.upper - cert.lower >= target_width && it < max_iterations) {
    w = mat_vec(op, w);
    normalize_content(w);
    ++it;
    evaluate();
    if (keep_squaring) {
      std::size_t bits = 0;
      for (std::size_t i = 0; i < n && keep_squaring; ++i)
        for (std::size_t j = 0; j < n; ++j)
          bits = std::max(bits, mpz_sizeinbase(op.at(i, j).get_mpz_t(), 2));
      if (bits > kMaxOpBits)
        keep_squaring = false;
      else
        op = mat_mul(op, op);
    }
  }

  cert.iterations = it;
  cert.width_reached = cert.upper - cert.lower < target_width;
  cert.witness.reserve(n);
  for (const BigInt& x : w) cert.witness.emplace_back(x);
  return cert;
}

SubinvarianceReport check_subinvariance(const IncidenceMatrix& m, const WeightVector& v,
                                        const Rational& lambda) {
  require_dims(m, v, "check_subinvariance");
  require_weight_vector(v, "check_subinvariance");
  WeightVector mv = mat_vec(m, v);
  WeightVector bound(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) bound[i] = lambda * v[i];
  return compare(mv, bound);
}

SubinvarianceReport power_subinvariance(const IncidenceMatrix& m, const WeightVector& v,
                                        const Rational& lambda, std::size_t p) {
  if (p == 0) throw Error("PreconditionFailed", "power must be >= 1");
  SubinvarianceReport base = check_subinvariance(m, v, lambda);
  if (!base.holds)
    throw Error("PreconditionFailed", "power_subinvariance requires Mv <= lambda v");
  WeightVector x = v;
  for (std::size_t k = 0; k < p; ++k) x = mat_vec(m, x);
  SubinvarianceReport report = compare(x, scale_pow(v, lambda, p));
  if (!report.holds)
    throw Error("LemmaViolation",
                "M^p v <= lambda^p v failed although Mv <= lambda v holds; this indicates "
                "an arithmetic defect, not valid input behaviour");
  return report;
}

SubinvarianceReport dominated_power_check(const IncidenceMatrix& n, const IncidenceMatrix& m,
                                          const WeightVector& v, const Rational& lambda,
                                          std::size_t p) {
  if (p == 0) throw Error("PreconditionFailed", "power must be >= 1");
  if (n.dim() != m.dim())
    throw Error("DimensionMismatch", "dominated_power_check: matrices differ in dimension");
  require_dims(m, v, "dominated_power_check");
  require_weight_vector(v, "dominated_power_check");

  WeightVector nv = mat_vec(n, v);
  WeightVector mv = mat_vec(m, v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (nv[i] > mv[i])
      throw Error("PreconditionFailed",
                  "Nv <= Mv fails at index " + std::to_string(i + 1));
    if (mv[i] > lambda * v[i])
      throw Error("PreconditionFailed",
                  "Mv <= lambda v fails at index " + std::to_string(i + 1));
  }

  WeightVector xn = v, xm = v;
  for (std::size_t k = 0; k < p; ++k) {
    xn = mat_vec(n, xn);
    xm = mat_vec(m, xm);
  }
  WeightVector bound = scale_pow(v, lambda, p);

  SubinvarianceReport report;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (xn[i] > xm[i] || xm[i] > bound[i]) {
      report.violated_indices.push_back(i);
      continue;
    }
    if (xm[i] < bound[i]) report.strict_indices.push_back(i);
  }
  report.holds = report.violated_indices.empty();
  return report;
}

std::optional<StrictDrop> submatrix_strict_drop(const IncidenceMatrix& m,
                                                const IndexSubset& subset, const WeightVector& v,
                                                const Rational& lambda, std::size_t p_max) {
  SubinvarianceReport base = check_subinvariance(m, v, lambda);
  if (!base.holds)
    throw Error("PreconditionFailed", "submatrix_strict_drop requires Mv <= lambda v");
  if (!is_irreducible(submatrix(m, subset)))
    throw Error("SubmatrixNotIrreducible",
                "the selected submatrix is not irreducible; pass to an SCC first");

  WeightVector x = v;
  Rational lpow(1);
  for (std::size_t p = 1; p <= p_max; ++p) {
    x = mat_vec(m, x);
    lpow *= lambda;
    for (std::size_t i : subset.indices()) {
      if (x[i] < lpow * v[i]) return StrictDrop{p, i};
    }
  }
  return std::nullopt;
}

std::size_t first_reach(const IncidenceMatrix& m, std::size_t j) {
  const std::size_t n = m.dim();
  if (j >= n) throw Error("IndexOutOfRange", "row index out of range");
  auto adj = out_edges(m);
  // Shortest walk of length >= 1 from j to vertex 0.
  std::vector<bool> seen(n, false);
  std::deque<std::pair<std::size_t, std::size_t>> queue;  // (vertex, distance from j)
  for (std::size_t w : adj[j]) {
    if (w == 0) return 1;
    if (!seen[w]) {
      seen[w] = true;
      queue.emplace_back(w, 1);
    }
  }
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (d >= n) break;
    for (std::size_t w : adj[v]) {
      if (w == 0) return d + 1;
      if (!seen[w]) {
        seen[w] = true;
        queue.emplace_back(w, d + 1);
      }
    }
  }
  throw Error("NotIrreducible", "no walk from index " + std::to_string(j + 1) +
                                    " to index 1 within " + std::to_string(n) + " steps");
}

bool propagation_check(const IncidenceMatrix& m, const IncidenceMatrix& mbar) {
  if (m.dim() != mbar.dim())
    throw Error("DimensionMismatch", "propagation_check: dimensions differ");
  if (!is_irreducible(m))
    throw Error("NotIrreducible", "propagation_check requires an irreducible base matrix");
  for (std::size_t j = 1; j < m.dim(); ++j)
    if (!m.rows_equal(j, mbar, j))
      throw Error("PreconditionFailed",
                  "matrices differ outside the first row (row " + std::to_string(j + 1) + ")");

  const std::size_t n = m.dim();
  std::vector<std::size_t> reach(n, 0);
  std::size_t max_q = 0;
  for (std::size_t j = 1; j < n; ++j) {
    reach[j] = first_reach(m, j);
    max_q = std::max(max_q, reach[j]);
  }

  IncidenceMatrix mp = m, bp = mbar;
  for (std::size_t p = 1; p <= max_q; ++p) {
    if (p > 1) {
      mp = mat_mul(mp, m);
      bp = mat_mul(bp, mbar);
    }
    for (std::size_t j = 1; j < n; ++j)
      if (p <= reach[j] && !mp.rows_equal(j, bp, j)) return false;
  }
  return true;
}

WeightVector scale_pow(const WeightVector& v, const Rational& lambda, std::size_t p) {
  Rational factor = rational_pow(lambda, static_cast<long>(p));
  WeightVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = factor * v[i];
  return out;
}

}  // namespace lamcert
