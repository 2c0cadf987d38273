#include "lamcert/io.hpp"

#include <iomanip>
#include <sstream>

#include "lamcert/errors.hpp"
#include "lamcert/version.hpp"

namespace lamcert::io {

namespace {

struct Ctx {
  std::vector<Diagnostic>* errors;
  void fail(const std::string& path, const std::string& message) const {
    errors->push_back({"parse", path, message});
  }
};

std::string item(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}
std::string key(const std::string& path, const std::string& k) { return path + "." + k; }

const json* expect_object(const json& j, const std::string& path, const Ctx& ctx) {
  if (!j.is_object()) {
    ctx.fail(path, "expected an object");
    return nullptr;
  }
  return &j;
}

const json* expect_array(const json& j, const std::string& path, const Ctx& ctx) {
  if (!j.is_array()) {
    ctx.fail(path, "expected an array");
    return nullptr;
  }
  return &j;
}

const json* field(const json& obj, const std::string& name, const std::string& path,
                  const Ctx& ctx, bool required = true) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    if (required) ctx.fail(key(path, name), "missing required field");
    return nullptr;
  }
  return &*it;
}

std::optional<std::string> read_string(const json& j, const std::string& path, const Ctx& ctx) {
  if (!j.is_string()) {
    ctx.fail(path, "expected a string");
    return std::nullopt;
  }
  return j.get<std::string>();
}

std::optional<std::size_t> read_count(const json& j, const std::string& path, const Ctx& ctx) {
  if (!j.is_number_unsigned()) {
    ctx.fail(path, "expected a nonnegative integer");
    return std::nullopt;
  }
  return j.get<std::size_t>();
}

// Entries may be JSON integers or decimal digit strings (for values beyond
// the JSON-safe integer range). Floats are rejected: exactness is the point.
std::optional<BigInt> read_entry(const json& j, const std::string& path, const Ctx& ctx) {
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    ctx.fail(path, "expected a nonnegative integer");
    return std::nullopt;
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    BigInt value;
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos ||
        value.set_str(s, 10) != 0) {
      ctx.fail(path, "expected a nonnegative integer, got \"" + s + "\"");
      return std::nullopt;
    }
    return value;
  }
  ctx.fail(path, "expected a nonnegative integer (number or digit string)");
  return std::nullopt;
}

std::optional<Rational> read_rational(const json& j, const std::string& path, const Ctx& ctx) {
  if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number_float()) {
    ctx.fail(path, "floating point is not accepted; use a \"p/q\" string");
    return std::nullopt;
  }
  if (!j.is_string()) {
    ctx.fail(path, "expected a rational as \"p/q\" string or integer");
    return std::nullopt;
  }
  try {
    return rational_from_string(j.get<std::string>());
  } catch (const Error& e) {
    ctx.fail(path, e.what());
    return std::nullopt;
  }
}

std::optional<IncidenceMatrix> read_matrix(const json& j, const std::string& path,
                                           const Ctx& ctx) {
  const json* rows = expect_array(j, path, ctx);
  if (!rows) return std::nullopt;
  if (rows->empty()) {
    ctx.fail(path, "matrix must have dimension >= 1");
    return std::nullopt;
  }
  const std::size_t n = rows->size();
  IncidenceMatrix m(n);
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    const json* row = expect_array((*rows)[i], item(path, i), ctx);
    if (!row) {
      ok = false;
      continue;
    }
    if (row->size() != n) {
      ctx.fail(item(path, i), "expected " + std::to_string(n) + " entries (square matrix)");
      ok = false;
      continue;
    }
    for (std::size_t jj = 0; jj < n; ++jj) {
      auto value = read_entry((*row)[jj], item(item(path, i), jj), ctx);
      if (!value) {
        ok = false;
        continue;
      }
      m.at(i, jj) = *value;
    }
  }
  if (!ok) return std::nullopt;
  return m;
}

std::optional<std::vector<std::string>> read_label_list(const json& j, const std::string& path,
                                                        const Ctx& ctx) {
  const json* arr = expect_array(j, path, ctx);
  if (!arr) return std::nullopt;
  std::vector<std::string> labels;
  bool ok = true;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    auto s = read_string((*arr)[i], item(path, i), ctx);
    if (!s) {
      ok = false;
      continue;
    }
    labels.push_back(*s);
  }
  if (!ok) return std::nullopt;
  return labels;
}

std::optional<LabelMultiset> read_multiset(const json& j, const std::string& path,
                                           const Ctx& ctx) {
  const json* obj = expect_object(j, path, ctx);
  if (!obj) return std::nullopt;
  LabelMultiset counts;
  bool ok = true;
  for (const auto& [label, value] : obj->items()) {
    if (!value.is_number_unsigned() || value.get<std::uint64_t>() > (1ull << 40)) {
      ctx.fail(key(path, label), "expected a small nonnegative integer multiplicity");
      ok = false;
      continue;
    }
    counts[label] = static_cast<long>(value.get<std::uint64_t>());
  }
  if (!ok) return std::nullopt;
  return counts;
}

std::optional<std::map<std::string, Rational>> read_rational_map(const json& j,
                                                                 const std::string& path,
                                                                 const Ctx& ctx) {
  const json* obj = expect_object(j, path, ctx);
  if (!obj) return std::nullopt;
  std::map<std::string, Rational> values;
  bool ok = true;
  for (const auto& [label, value] : obj->items()) {
    auto r = read_rational(value, key(path, label), ctx);
    if (!r) {
      ok = false;
      continue;
    }
    values.emplace(label, *r);
  }
  if (!ok) return std::nullopt;
  return values;
}

// Per-label weights in the order of the label list.
std::optional<WeightVector> weights_for(const std::vector<std::string>& labels,
                                        const std::map<std::string, Rational>& map,
                                        const std::string& path, const Ctx& ctx) {
  WeightVector weights;
  bool ok = true;
  for (const auto& label : labels) {
    auto it = map.find(label);
    if (it == map.end()) {
      ctx.fail(key(path, label), "missing weight for label " + label);
      ok = false;
      continue;
    }
    weights.push_back(it->second);
  }
  for (const auto& [label, value] : map)
    if (std::find(labels.begin(), labels.end(), label) == labels.end())
      ctx.fail(key(path, label), "weight for unknown label " + label);
  if (!ok || map.size() != labels.size()) return std::nullopt;
  return weights;
}

std::optional<std::vector<LabelMultiset>> images_for(const std::vector<std::string>& labels,
                                                     const json& j, const std::string& path,
                                                     const Ctx& ctx) {
  const json* obj = expect_object(j, path, ctx);
  if (!obj) return std::nullopt;
  std::vector<LabelMultiset> rows;
  bool ok = true;
  for (const auto& label : labels) {
    auto it = obj->find(label);
    if (it == obj->end()) {
      ctx.fail(key(path, label), "missing image row for label " + label);
      ok = false;
      continue;
    }
    auto row = read_multiset(*it, key(path, label), ctx);
    if (!row) {
      ok = false;
      continue;
    }
    rows.push_back(std::move(*row));
  }
  if (obj->size() != labels.size())
    for (const auto& [label, value] : obj->items())
      if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
        ctx.fail(key(path, label), "image row for unknown label " + label);
        ok = false;
      }
  if (!ok) return std::nullopt;
  return rows;
}

std::optional<DiscSystem> read_disc_system(const json& j, const std::string& path,
                                           const Ctx& ctx) {
  const json* obj = expect_object(j, path, ctx);
  if (!obj) return std::nullopt;
  auto labels_j = field(*obj, "labels", path, ctx);
  auto images_j = field(*obj, "images", path, ctx);
  auto weights_j = field(*obj, "weights", path, ctx);
  auto lambda_j = field(*obj, "lambda", path, ctx);
  if (!labels_j || !images_j || !weights_j || !lambda_j) return std::nullopt;

  auto labels = read_label_list(*labels_j, key(path, "labels"), ctx);
  if (!labels) return std::nullopt;
  auto images = images_for(*labels, *images_j, key(path, "images"), ctx);
  auto weight_map = read_rational_map(*weights_j, key(path, "weights"), ctx);
  auto lambda = read_rational(*lambda_j, key(path, "lambda"), ctx);
  if (!images || !weight_map || !lambda) return std::nullopt;
  auto weights = weights_for(*labels, *weight_map, key(path, "weights"), ctx);
  if (!weights) return std::nullopt;

  DiscSystem system{std::move(*labels), std::move(*images), std::move(*weights),
                    std::move(*lambda)};
  return system;
}

std::optional<Payload> read_matrix_payload(const json& j, const Ctx& ctx) {
  const json* obj = expect_object(j, "payload", ctx);
  if (!obj) return std::nullopt;
  auto entries = field(*obj, "entries", "payload", ctx);
  if (!entries) return std::nullopt;
  auto m = read_matrix(*entries, "payload.entries", ctx);
  if (!m) return std::nullopt;
  return Payload(std::move(*m));
}

std::optional<Payload> read_subinvariance_payload(const json& j, const Ctx& ctx) {
  const json* obj = expect_object(j, "payload", ctx);
  if (!obj) return std::nullopt;
  auto matrix_j = field(*obj, "matrix", "payload", ctx);
  auto weights_j = field(*obj, "weights", "payload", ctx);
  auto lambda_j = field(*obj, "lambda", "payload", ctx);
  if (!matrix_j || !weights_j || !lambda_j) return std::nullopt;

  auto matrix = read_matrix(*matrix_j, "payload.matrix", ctx);
  auto lambda = read_rational(*lambda_j, "payload.lambda", ctx);
  const json* warr = expect_array(*weights_j, "payload.weights", ctx);
  if (!matrix || !lambda || !warr) return std::nullopt;

  WeightVector weights;
  bool ok = true;
  for (std::size_t i = 0; i < warr->size(); ++i) {
    auto r = read_rational((*warr)[i], item("payload.weights", i), ctx);
    if (!r)
      ok = false;
    else
      weights.push_back(*r);
  }
  if (!ok) return std::nullopt;

  SubinvarianceCase c{std::move(*matrix), std::move(weights), std::move(*lambda),
                      std::nullopt,       std::nullopt,       std::nullopt,
                      std::nullopt};
  if (auto* p = field(*obj, "power", "payload", ctx, false)) {
    c.power = read_count(*p, "payload.power", ctx);
    if (!c.power) return std::nullopt;
  }
  if (auto* d = field(*obj, "dominated", "payload", ctx, false)) {
    auto dm = read_matrix(*d, "payload.dominated", ctx);
    if (!dm) return std::nullopt;
    c.dominated = std::move(*dm);
  }
  if (auto* s = field(*obj, "subset", "payload", ctx, false)) {
    const json* arr = expect_array(*s, "payload.subset", ctx);
    if (!arr) return std::nullopt;
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto v = read_count((*arr)[i], item("payload.subset", i), ctx);
      if (!v) return std::nullopt;
      if (*v == 0) {
        ctx.fail(item("payload.subset", i), "indices are 1-based");
        return std::nullopt;
      }
      subset.push_back(*v - 1);
    }
    c.subset = std::move(subset);
  }
  if (auto* p = field(*obj, "p_max", "payload", ctx, false)) {
    c.p_max = read_count(*p, "payload.p_max", ctx);
    if (!c.p_max) return std::nullopt;
  }
  return Payload(std::move(c));
}

std::optional<Payload> read_enlargement_payload(const json& j, const Ctx& ctx) {
  const json* obj = expect_object(j, "payload", ctx);
  if (!obj) return std::nullopt;
  auto base_j = field(*obj, "base", "payload", ctx);
  auto labels_j = field(*obj, "new_labels", "payload", ctx);
  auto weights_j = field(*obj, "new_weights", "payload", ctx);
  auto images_j = field(*obj, "new_images", "payload", ctx);
  if (!base_j || !labels_j || !weights_j || !images_j) return std::nullopt;

  auto base = read_disc_system(*base_j, "payload.base", ctx);
  auto labels = read_label_list(*labels_j, "payload.new_labels", ctx);
  if (!base || !labels) return std::nullopt;
  auto weight_map = read_rational_map(*weights_j, "payload.new_weights", ctx);
  auto images = images_for(*labels, *images_j, "payload.new_images", ctx);
  if (!weight_map || !images) return std::nullopt;
  auto weights = weights_for(*labels, *weight_map, "payload.new_weights", ctx);
  if (!weights) return std::nullopt;

  Enlargement e{std::move(*base), std::move(*labels), std::move(*weights), std::move(*images),
                0,                0};
  if (!e.new_labels.empty())
    e.delta_index = e.base.labels.size() + e.new_labels.size() - 1;
  e.parallel_to = 0;

  if (auto* t = field(*obj, "tightening", "payload", ctx, false)) {
    const json* tobj = expect_object(*t, "payload.tightening", ctx);
    if (!tobj) return std::nullopt;
    auto all = e.full_labels();
    auto find_label = [&](const std::string& name, const std::string& path) -> std::optional<std::size_t> {
      auto* f = field(*tobj, name, "payload.tightening", ctx);
      if (!f) return std::nullopt;
      auto s = read_string(*f, path, ctx);
      if (!s) return std::nullopt;
      auto it = std::find(all.begin(), all.end(), *s);
      if (it == all.end()) {
        ctx.fail(path, "unknown label " + *s);
        return std::nullopt;
      }
      return static_cast<std::size_t>(it - all.begin());
    };
    auto delta = find_label("delta", "payload.tightening.delta");
    auto target = find_label("parallel_to", "payload.tightening.parallel_to");
    if (!delta || !target) return std::nullopt;
    e.delta_index = *delta;
    e.parallel_to = *target;
  }
  return Payload(std::move(e));
}

std::optional<Payload> read_layered_payload(const json& j, const Ctx& ctx) {
  const json* obj = expect_object(j, "payload", ctx);
  if (!obj) return std::nullopt;
  auto base_j = field(*obj, "base", "payload", ctx);
  auto layers_j = field(*obj, "layers", "payload", ctx);
  auto carried_j = field(*obj, "carried", "payload", ctx);
  auto weights_j = field(*obj, "weights", "payload", ctx);
  if (!base_j || !layers_j || !carried_j || !weights_j) return std::nullopt;

  auto base = read_disc_system(*base_j, "payload.base", ctx);
  const json* layer_arr = expect_array(*layers_j, "payload.layers", ctx);
  if (!base || !layer_arr) return std::nullopt;

  std::vector<std::vector<std::string>> layers;
  for (std::size_t i = 0; i < layer_arr->size(); ++i) {
    auto layer = read_label_list((*layer_arr)[i], item("payload.layers", i), ctx);
    if (!layer) return std::nullopt;
    layers.push_back(std::move(*layer));
  }

  std::vector<std::string> lower;
  for (const auto& layer : layers) lower.insert(lower.end(), layer.begin(), layer.end());

  auto carried_obj = expect_object(*carried_j, "payload.carried", ctx);
  if (!carried_obj) return std::nullopt;
  std::map<std::string, LabelMultiset> carried;
  for (const auto& surface : lower) {
    auto it = carried_obj->find(surface);
    if (it == carried_obj->end()) {
      ctx.fail(key("payload.carried", surface), "missing carried row for surface " + surface);
      return std::nullopt;
    }
    auto row = read_multiset(*it, key("payload.carried", surface), ctx);
    if (!row) return std::nullopt;
    carried.emplace(surface, std::move(*row));
  }

  auto weight_map = read_rational_map(*weights_j, "payload.weights", ctx);
  if (!weight_map) return std::nullopt;

  LayeredFamily family{std::move(*base), std::move(layers), std::move(carried), {}};
  for (const auto& surface : lower) {
    auto it = weight_map->find(surface);
    if (it == weight_map->end()) {
      ctx.fail(key("payload.weights", surface), "missing weight for surface " + surface);
      return std::nullopt;
    }
    family.surface_weights.emplace(surface, it->second);
  }

  LayeredCase c{std::move(family), {}, std::nullopt};
  if (auto* d = field(*obj, "d_update", "payload", ctx, false)) {
    auto dobj = expect_object(*d, "payload.d_update", ctx);
    if (!dobj) return std::nullopt;
    for (const auto& [surface, row] : dobj->items()) {
      auto counts = read_multiset(row, key("payload.d_update", surface), ctx);
      if (!counts) return std::nullopt;
      c.d_update.emplace(surface, std::move(*counts));
    }
  } else if (!c.family.lower_layers.empty()) {
    // Default: keep the bottom layer's carried rows, i.e. no rewrite.
    for (const auto& surface : c.family.lower_layers.back())
      c.d_update.emplace(surface, c.family.carried.at(surface));
  }
  if (auto* p = field(*obj, "p_max", "payload", ctx, false)) {
    c.p_max = read_count(*p, "payload.p_max", ctx);
    if (!c.p_max) return std::nullopt;
  }
  return Payload(std::move(c));
}

std::optional<Payload> read_pattern_payload(const json& j, const Ctx& ctx) {
  const json* obj = expect_object(j, "payload", ctx);
  if (!obj) return std::nullopt;
  auto curves_j = field(*obj, "curves", "payload", ctx);
  auto dpar_j = field(*obj, "delta_parent", "payload", ctx);
  auto comp_j = field(*obj, "s_component", "payload", ctx);
  auto spar_j = field(*obj, "s_parent", "payload", ctx);
  auto wd_j = field(*obj, "w_delta", "payload", ctx);
  auto ws_j = field(*obj, "w_s", "payload", ctx);
  auto wc_j = field(*obj, "w_component", "payload", ctx);
  if (!curves_j || !dpar_j || !comp_j || !spar_j || !wd_j || !ws_j || !wc_j)
    return std::nullopt;

  IntersectionPattern p;
  auto curves = read_label_list(*curves_j, "payload.curves", ctx);
  if (!curves) return std::nullopt;
  p.curves = std::move(*curves);

  auto read_parent_map = [&](const json& src, const std::string& path,
                             std::map<CurveId, std::optional<CurveId>>& dest) -> bool {
    const json* pobj = expect_object(src, path, ctx);
    if (!pobj) return false;
    for (const auto& curve : p.curves) {
      auto it = pobj->find(curve);
      if (it == pobj->end()) {
        ctx.fail(key(path, curve), "missing parent entry for curve " + curve);
        return false;
      }
      if (it->is_null()) {
        dest.emplace(curve, std::nullopt);
      } else {
        auto s = read_string(*it, key(path, curve), ctx);
        if (!s) return false;
        dest.emplace(curve, *s);
      }
    }
    return true;
  };
  if (!read_parent_map(*dpar_j, "payload.delta_parent", p.delta_parent)) return std::nullopt;
  if (!read_parent_map(*spar_j, "payload.s_parent", p.s_parent)) return std::nullopt;

  const json* comp_obj = expect_object(*comp_j, "payload.s_component", ctx);
  if (!comp_obj) return std::nullopt;
  for (const auto& curve : p.curves) {
    auto it = comp_obj->find(curve);
    if (it == comp_obj->end()) {
      ctx.fail(key("payload.s_component", curve), "missing component for curve " + curve);
      return std::nullopt;
    }
    auto s = read_string(*it, key("payload.s_component", curve), ctx);
    if (!s) return std::nullopt;
    p.s_component.emplace(curve, *s);
  }

  auto wd = read_rational_map(*wd_j, "payload.w_delta", ctx);
  auto ws = read_rational_map(*ws_j, "payload.w_s", ctx);
  auto wc = read_rational_map(*wc_j, "payload.w_component", ctx);
  if (!wd || !ws || !wc) return std::nullopt;
  for (const auto& curve : p.curves) {
    if (!wd->count(curve)) {
      ctx.fail(key("payload.w_delta", curve), "missing weight for curve " + curve);
      return std::nullopt;
    }
    if (!ws->count(curve)) {
      ctx.fail(key("payload.w_s", curve), "missing weight for curve " + curve);
      return std::nullopt;
    }
  }
  p.w_delta = std::move(*wd);
  p.w_s = std::move(*ws);
  p.w_component = std::move(*wc);

  PatternCase c{std::move(p), std::nullopt};
  if (auto* o = field(*obj, "order", "payload", ctx, false)) {
    auto order = read_label_list(*o, "payload.order", ctx);
    if (!order) return std::nullopt;
    c.order = std::move(*order);
  }
  return Payload(std::move(c));
}

std::optional<Payload> read_trace_payload(const json& j, const Ctx& ctx) {
  const json* obj = expect_object(j, "payload", ctx);
  if (!obj) return std::nullopt;
  auto systems_j = field(*obj, "systems", "payload", ctx);
  auto j_j = field(*obj, "J", "payload", ctx);
  if (!systems_j || !j_j) return std::nullopt;

  const json* arr = expect_array(*systems_j, "payload.systems", ctx);
  auto stabilization_index = read_count(*j_j, "payload.J", ctx);
  if (!arr || !stabilization_index) return std::nullopt;

  StabilizationTrace trace;
  trace.stabilization_index = *stabilization_index;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string spath = item("payload.systems", i);
    const json* sys = expect_array((*arr)[i], spath, ctx);
    if (!sys) return std::nullopt;
    std::vector<TraceDisc> discs;
    for (std::size_t d = 0; d < sys->size(); ++d) {
      const std::string dpath = item(spath, d);
      const json* disc = expect_object((*sys)[d], dpath, ctx);
      if (!disc) return std::nullopt;
      auto label_j = field(*disc, "label", dpath, ctx);
      auto class_j = field(*disc, "class", dpath, ctx);
      auto weight_j = field(*disc, "weight", dpath, ctx);
      if (!label_j || !class_j || !weight_j) return std::nullopt;
      auto label = read_string(*label_j, key(dpath, "label"), ctx);
      auto klass = read_string(*class_j, key(dpath, "class"), ctx);
      auto weight = read_rational(*weight_j, key(dpath, "weight"), ctx);
      if (!label || !klass || !weight) return std::nullopt;
      discs.push_back({std::move(*label), std::move(*klass), std::move(*weight)});
    }
    trace.systems.push_back(std::move(discs));
  }
  return Payload(std::move(trace));
}

json entry_to_json(const BigInt& value) {
  // JSON numbers are only safe up to 2^53; larger entries travel as strings.
  static const BigInt kSafe("9007199254740992");
  if (value <= kSafe) return json(value.get_ui());
  return json(value.get_str());
}

json matrix_to_json(const IncidenceMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(entry_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json multiset_to_json(const LabelMultiset& counts) {
  json obj = json::object();
  for (const auto& [label, mult] : counts) obj[label] = mult;
  return obj;
}

json rational_map_to_json(const std::map<std::string, Rational>& values) {
  json obj = json::object();
  for (const auto& [label, value] : values) obj[label] = rational_to_string(value);
  return obj;
}

json disc_system_to_json(const DiscSystem& system) {
  json images = json::object();
  json weights = json::object();
  for (std::size_t i = 0; i < system.labels.size(); ++i) {
    images[system.labels[i]] = multiset_to_json(system.images[i]);
    weights[system.labels[i]] = rational_to_string(system.weights[i]);
  }
  return json{{"labels", system.labels},
              {"images", images},
              {"weights", weights},
              {"lambda", rational_to_string(system.lambda)}};
}

}  // namespace

ParseOutcome parse(const std::string& text) {
  ParseOutcome outcome;
  Ctx ctx{&outcome.errors};

  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) {
    ctx.fail("$", "not well-formed JSON");
    return outcome;
  }
  const json* obj = expect_object(root, "$", ctx);
  if (!obj) return outcome;

  auto version_j = field(*obj, "format_version", "$", ctx);
  auto kind_j = field(*obj, "kind", "$", ctx);
  auto payload_j = field(*obj, "payload", "$", ctx);
  if (!version_j || !kind_j || !payload_j) return outcome;

  auto version = read_string(*version_j, "format_version", ctx);
  auto kind = read_string(*kind_j, "kind", ctx);
  if (!version || !kind) return outcome;
  if (*version != kFormatVersion) {
    outcome.errors.push_back(
        {"parse", "format_version", "VersionUnsupported: recognized version is 1"});
    return outcome;
  }

  std::optional<Payload> payload;
  if (*kind == "matrix")
    payload = read_matrix_payload(*payload_j, ctx);
  else if (*kind == "subinvariance-case")
    payload = read_subinvariance_payload(*payload_j, ctx);
  else if (*kind == "disc-system") {
    auto system = read_disc_system(*payload_j, "payload", ctx);
    if (system) payload = Payload(std::move(*system));
  } else if (*kind == "enlargement")
    payload = read_enlargement_payload(*payload_j, ctx);
  else if (*kind == "layered-family")
    payload = read_layered_payload(*payload_j, ctx);
  else if (*kind == "pattern")
    payload = read_pattern_payload(*payload_j, ctx);
  else if (*kind == "trace")
    payload = read_trace_payload(*payload_j, ctx);
  else {
    ctx.fail("kind", "unrecognized kind \"" + *kind + "\"");
    return outcome;
  }

  if (!payload) return outcome;
  outcome.envelope = DocumentEnvelope{*version, *kind, std::move(*payload)};
  return outcome;
}

json envelope_to_json(const DocumentEnvelope& envelope) {
  json payload;
  if (const auto* m = std::get_if<IncidenceMatrix>(&envelope.payload)) {
    payload = json{{"entries", matrix_to_json(*m)}};
  } else if (const auto* c = std::get_if<SubinvarianceCase>(&envelope.payload)) {
    json weights = json::array();
    for (const auto& w : c->weights) weights.push_back(rational_to_string(w));
    payload = json{{"matrix", matrix_to_json(c->matrix)},
                   {"weights", weights},
                   {"lambda", rational_to_string(c->lambda)}};
    if (c->power) payload["power"] = *c->power;
    if (c->dominated) payload["dominated"] = matrix_to_json(*c->dominated);
    if (c->subset) {
      json subset = json::array();
      for (std::size_t i : *c->subset) subset.push_back(i + 1);
      payload["subset"] = subset;
    }
    if (c->p_max) payload["p_max"] = *c->p_max;
  } else if (const auto* s = std::get_if<DiscSystem>(&envelope.payload)) {
    payload = disc_system_to_json(*s);
  } else if (const auto* e = std::get_if<Enlargement>(&envelope.payload)) {
    json images = json::object();
    json weights = json::object();
    for (std::size_t i = 0; i < e->new_labels.size(); ++i) {
      images[e->new_labels[i]] = multiset_to_json(e->new_images[i]);
      weights[e->new_labels[i]] = rational_to_string(e->new_weights[i]);
    }
    payload = json{{"base", disc_system_to_json(e->base)},
                   {"new_labels", e->new_labels},
                   {"new_weights", weights},
                   {"new_images", images}};
    if (!e->new_labels.empty()) {
      auto all = e->full_labels();
      payload["tightening"] =
          json{{"delta", all[e->delta_index]}, {"parallel_to", all[e->parallel_to]}};
    }
  } else if (const auto* l = std::get_if<LayeredCase>(&envelope.payload)) {
    json carried = json::object();
    json weights = json::object();
    for (const auto& [surface, row] : l->family.carried) carried[surface] = multiset_to_json(row);
    for (const auto& [surface, w] : l->family.surface_weights)
      weights[surface] = rational_to_string(w);
    json d_update = json::object();
    for (const auto& [surface, row] : l->d_update) d_update[surface] = multiset_to_json(row);
    payload = json{{"base", disc_system_to_json(l->family.base)},
                   {"layers", l->family.lower_layers},
                   {"carried", carried},
                   {"weights", weights},
                   {"d_update", d_update}};
    if (l->p_max) payload["p_max"] = *l->p_max;
  } else if (const auto* pc = std::get_if<PatternCase>(&envelope.payload)) {
    const IntersectionPattern& p = pc->pattern;
    auto parent_map = [](const std::map<CurveId, std::optional<CurveId>>& parents) {
      json obj = json::object();
      for (const auto& [curve, parent] : parents)
        obj[curve] = parent ? json(*parent) : json(nullptr);
      return obj;
    };
    json comps = json::object();
    for (const auto& [curve, comp] : p.s_component) comps[curve] = comp;
    payload = json{{"curves", p.curves},
                   {"delta_parent", parent_map(p.delta_parent)},
                   {"s_component", comps},
                   {"s_parent", parent_map(p.s_parent)},
                   {"w_delta", rational_map_to_json(p.w_delta)},
                   {"w_s", rational_map_to_json(p.w_s)},
                   {"w_component", rational_map_to_json(p.w_component)}};
    if (pc->order) payload["order"] = *pc->order;
  } else if (const auto* t = std::get_if<StabilizationTrace>(&envelope.payload)) {
    json systems = json::array();
    for (const auto& sys : t->systems) {
      json discs = json::array();
      for (const auto& disc : sys)
        discs.push_back(json{{"label", disc.label},
                             {"class", disc.parallel_class},
                             {"weight", rational_to_string(disc.weight)}});
      systems.push_back(std::move(discs));
    }
    payload = json{{"systems", systems}, {"J", t->stabilization_index}};
  }

  return json{{"format_version", envelope.format_version},
              {"kind", envelope.kind},
              {"payload", payload}};
}

std::string emit(const DocumentEnvelope& envelope) { return envelope_to_json(envelope).dump(2); }

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Verified:
      return "verified";
    case Verdict::Violated:
      return "violated";
    case Verdict::Inconclusive:
      return "inconclusive";
    default:
      return "invalid-input";
  }
}

int exit_code(Verdict verdict) {
  switch (verdict) {
    case Verdict::Verified:
      return 0;
    case Verdict::Violated:
      return 1;
    case Verdict::Inconclusive:
      return 3;
    default:
      return 2;
  }
}

Report::Report() : version(kVersion) {}

void Report::add_diagnostic(std::string operation, std::string location, std::string message) {
  diagnostics.push_back({std::move(operation), std::move(location), std::move(message)});
}

namespace {

std::string approx(const Rational& value) {
  std::ostringstream out;
  out << std::setprecision(10) << rational_to_double(value);
  return out.str();
}

}  // namespace

std::string emit_report(const Report& report, ReportMode mode) {
  if (mode == ReportMode::Machine) {
    json diags = json::array();
    for (const auto& d : report.diagnostics)
      diags.push_back(json{{"operation", d.operation}, {"location", d.location},
                           {"message", d.message}});
    json out{{"format_version", kFormatVersion},
             {"kind", "report"},
             {"verdict", verdict_name(report.verdict)},
             {"certificates", report.certificates},
             {"diagnostics", diags},
             {"reproduction", json{{"seed", report.seed}, {"version", report.version}}}};
    return out.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "lamcert " << report.version << " — verdict: " << verdict_name(report.verdict) << "\n";
  for (const auto& cert : report.certificates) {
    out << "  certificate " << cert.value("type", "?");
    if (cert.contains("lower") && cert.contains("upper")) {
      Rational lo = rational_from_string(cert["lower"].get<std::string>());
      Rational hi = rational_from_string(cert["upper"].get<std::string>());
      out << ": [" << rational_to_string(lo) << ", " << rational_to_string(hi) << "]"
          << "  ≈ [" << approx(lo) << ", " << approx(hi)
          << "] (approximate, non-normative)";
    }
    out << "\n";
    for (const auto& [k, v] : cert.items()) {
      if (k == "type" || k == "lower" || k == "upper" || k == "witness") continue;
      out << "    " << k << ": " << v.dump() << "\n";
    }
  }
  for (const auto& d : report.diagnostics)
    out << "  " << d.operation << " @ " << d.location << ": " << d.message << "\n";
  out << "  reproduction: seed=" << report.seed << " version=" << report.version << "\n";
  return out.str();
}

json to_json(const PerronCertificate& cert) {
  json witness = json::array();
  for (const auto& w : cert.witness) witness.push_back(rational_to_string(w));
  return json{{"type", "perron"},
              {"lower", rational_to_string(cert.lower)},
              {"upper", rational_to_string(cert.upper)},
              {"witness", witness},
              {"iterations", cert.iterations},
              {"width_reached", cert.width_reached}};
}

json to_json(const SubinvarianceReport& report) {
  json strict = json::array();
  json violated = json::array();
  for (std::size_t i : report.strict_indices) strict.push_back(i + 1);
  for (std::size_t i : report.violated_indices) violated.push_back(i + 1);
  return json{{"type", "subinvariance"},
              {"holds", report.holds},
              {"strict_indices", strict},
              {"violated_indices", violated}};
}

json to_json(const TighteningCertificate& cert) {
  json schedule = json::object();
  for (const auto& [index, power] : cert.strict_schedule)
    schedule[std::to_string(index + 1)] = power;
  json scc = json::array();
  if (cert.scc_used)
    for (std::size_t i : cert.scc_used->indices()) scc.push_back(i + 1);
  return json{{"type", "tightening"},
              {"strict_schedule", schedule},
              {"scc_used", scc},
              {"before", to_json(cert.before)},
              {"after", to_json(cert.after)},
              {"verdict", cert.verdict},
              {"conclusive", cert.conclusive}};
}

json to_json(const PushAwayResult& result) {
  json weights = json::object();
  for (const auto& [comp, weight] : result.final_weights)
    weights[comp] = rational_to_string(weight);
  return json{{"type", "push-away"},
              {"glued", std::vector<std::string>(result.glued.begin(), result.glued.end())},
              {"removed", std::vector<std::string>(result.removed.begin(), result.removed.end())},
              {"discarded",
               std::vector<std::string>(result.discarded.begin(), result.discarded.end())},
              {"final_weights", weights}};
}

json to_json(const StabilizationVerdict& verdict) {
  json out{{"type", "stabilization"}, {"ok", verdict.ok}, {"detail", verdict.detail}};
  if (verdict.minimal_j) out["minimal_J"] = *verdict.minimal_j;
  return out;
}

}  // namespace lamcert::io
