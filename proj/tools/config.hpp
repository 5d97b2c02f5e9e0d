#pragma once

// JSON problem descriptions: parsing into library types with located errors.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "difop/fixtures.hpp"
#include "difop/symmetric.hpp"
#include "json.hpp"

namespace difop::cfg {

using json = nlohmann::ordered_json;

/// Config errors carry a JSON-pointer-like location.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModuleKind { Regular, Trivial, Algebra, Explicit };

struct Params {
  std::size_t n_max = 3;
  std::vector<int> caps{4, 6};
  std::uint64_t seed = 1;
  std::size_t degree_left = 1, degree_right = 1;
  int value_cap = 2;
  std::size_t trials = 20;
};

struct ProblemConfig {
  bool symmetric = false;
  AlgebraData data;
  SymmetricModeSpec sym;
  ModuleKind module_kind = ModuleKind::Regular;
  BimoduleSpec module;  // filled for Explicit; others are built after validation
  Params params;

  const Field& field() const { return symmetric ? sym.field : data.field; }
};

namespace detail {

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

inline std::size_t natural(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::size_t index(const json& j, const std::string& where, std::size_t bound) {
  std::size_t i = natural(j, where);
  if (i >= bound)
    throw ConfigError(where + ": index " + std::to_string(i) + " out of range (dimension " + std::to_string(bound) + ")");
  return i;
}

inline Scalar coeff(const json& j, const std::string& where, const Field& f) {
  try {
    if (j.is_number_integer()) return f.from_int(j.get<long>());
    if (j.is_string()) return f.parse_scalar(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": coefficient must be an integer or a \"p/q\" string");
}

inline std::vector<std::string> labels(const json& j, const std::string& where, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw ConfigError(where + ": expected " + std::to_string(dim) + " names");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) throw ConfigError(where + ": names must be strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

/// Each entry is [i_1, ..., i_k, coeff]; bounds gives the range of each index.
template <class F>
void entries(const json& j, const std::string& where, const std::vector<std::size_t>& bounds, const Field& f, F&& sink) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of entries");
  for (std::size_t e = 0; e < j.size(); ++e) {
    const std::string at = where + "[" + std::to_string(e) + "]";
    const auto& row = j[e];
    if (!row.is_array() || row.size() != bounds.size() + 1)
      throw ConfigError(at + ": expected " + std::to_string(bounds.size()) + " indices and a coefficient");
    std::vector<std::size_t> ix;
    for (std::size_t p = 0; p < bounds.size(); ++p) ix.push_back(index(row[p], at, bounds[p]));
    sink(ix, coeff(row[bounds.size()], at, f));
  }
}

inline void add_to(SparseVector& v, std::size_t k, const Scalar& c) { v = v.axpy(c, SparseVector::unit(k)); }

inline AlgebraSpec parse_algebra(const json& j, const Field& f) {
  only_keys(j, "algebra", {"dim", "unit", "names", "products"});
  std::size_t dim = j.contains("dim") ? natural(j["dim"], "algebra.dim") : 1;
  if (dim == 0) throw ConfigError("algebra.dim: must be positive");
  std::size_t unit = j.contains("unit") ? index(j["unit"], "algebra.unit", dim) : 0;
  std::vector<std::string> names;
  if (j.contains("names")) names = labels(j["names"], "algebra.names", dim);
  else
    for (std::size_t i = 0; i < dim; ++i) names.push_back(i == unit ? "1" : "e" + std::to_string(i));
  auto a = AlgebraSpec::with_unit(dim, unit, names);
  if (j.contains("products"))
    entries(j["products"], "algebra.products", {dim, dim, dim}, f, [&](const auto& ix, const Scalar& c) {
      if (ix[0] == unit || ix[1] == unit) throw ConfigError("algebra.products: products with the unit are implied");
      add_to(a.products[ix[0]][ix[1]], ix[2], c);
    });
  return a;
}

inline LieAlgebraSpec parse_lie(const json& j, const Field& f, const std::string& where) {
  only_keys(j, where, {"dim", "labels", "brackets"});
  std::size_t dim = j.contains("dim") ? natural(j["dim"], where + ".dim") : 0;
  auto g = LieAlgebraSpec::abelian(dim);
  if (j.contains("labels")) g.labels = labels(j["labels"], where + ".labels", dim);
  if (j.contains("brackets"))
    entries(j["brackets"], where + ".brackets", {dim, dim, dim}, f, [&](const auto& ix, const Scalar& c) {
      if (ix[0] >= ix[1]) throw ConfigError(where + ".brackets: give [g_i, g_j] with i < j");
      SparseVector v = g.of(ix[0], ix[1]);
      add_to(v, ix[2], c);
      g.set_bracket(ix[0], ix[1], v);
    });
  return g;
}

inline SparseMatrix matrix_of(const std::vector<std::tuple<std::size_t, std::size_t, Scalar>>& t, std::size_t dim) {
  return SparseMatrix::from_triplets(dim, dim, t);
}

inline BimoduleSpec parse_explicit_module(const json& j, const AlgebraData& d) {
  only_keys(j, "module", {"kind", "dim", "left_algebra", "right_algebra", "left_lie", "right_lie"});
  if (!j.contains("dim")) throw ConfigError("module.dim: required for an explicit module");
  std::size_t dim = natural(j["dim"], "module.dim");
  if (dim == 0) throw ConfigError("module.dim: must be positive");
  BimoduleSpec m;
  m.dim = dim;
  for (std::size_t i = 0; i < dim; ++i) m.names.push_back("m" + std::to_string(i));
  auto block = [&](const char* key, std::size_t count, std::vector<SparseMatrix>& out, bool unit_is_identity) {
    std::vector<std::vector<std::tuple<std::size_t, std::size_t, Scalar>>> t(count);
    if (j.contains(key))
      entries(j[key], std::string("module.") + key, {count, dim, dim}, d.field,
              [&](const auto& ix, const Scalar& c) { t[ix[0]].emplace_back(ix[1], ix[2], c); });
    for (std::size_t a = 0; a < count; ++a) {
      if (unit_is_identity && a == d.algebra.unit && t[a].empty())
        for (std::size_t r = 0; r < dim; ++r) t[a].emplace_back(r, r, Scalar(1));
      out.push_back(matrix_of(t[a], dim));
    }
  };
  block("left_algebra", d.algebra.dim, m.left_algebra, true);
  block("right_algebra", d.algebra.dim, m.right_algebra, true);
  block("left_lie", d.lie.dim, m.left_lie, false);
  block("right_lie", d.lie.dim, m.right_lie, false);
  return m;
}

inline SymmetricModeSpec parse_symmetric(const json& j, const Field& f) {
  only_keys(j, "symmetric", {"dim_v", "v_labels", "lie", "action_const", "action_lin", "cocycle_const", "cocycle_lin"});
  if (!j.contains("dim_v")) throw ConfigError("symmetric.dim_v: required");
  std::size_t dv = natural(j["dim_v"], "symmetric.dim_v");
  if (dv == 0 || dv > pexp::kMaxVars) throw ConfigError("symmetric.dim_v: must be between 1 and 8");
  LieAlgebraSpec g = j.contains("lie") ? parse_lie(j["lie"], f, "symmetric.lie") : LieAlgebraSpec::abelian(1);
  std::vector<std::string> vl;
  if (j.contains("v_labels")) vl = labels(j["v_labels"], "symmetric.v_labels", dv);
  auto s = symmetric_base(f, dv, g, vl);
  const std::size_t d = g.dim;
  if (j.contains("action_const"))
    entries(j["action_const"], "symmetric.action_const", {d, dv}, f,
            [&](const auto& ix, const Scalar& c) { s.act_const[ix[0]][ix[1]] += c; });
  if (j.contains("action_lin"))
    entries(j["action_lin"], "symmetric.action_lin", {d, dv, dv}, f,
            [&](const auto& ix, const Scalar& c) { add_to(s.act_lin[ix[0]][ix[1]], ix[2], c); });
  if (j.contains("cocycle_const"))
    entries(j["cocycle_const"], "symmetric.cocycle_const", {d, d}, f,
            [&](const auto& ix, const Scalar& c) { s.f_const[ix[0]][ix[1]] += c; });
  if (j.contains("cocycle_lin"))
    entries(j["cocycle_lin"], "symmetric.cocycle_lin", {d, d, dv}, f,
            [&](const auto& ix, const Scalar& c) { add_to(s.f_lin[ix[0]][ix[1]], ix[2], c); });
  return s;
}

inline Params parse_params(const json& j) {
  only_keys(j, "params", {"n_max", "caps", "seed", "degrees", "value_cap", "trials"});
  Params p;
  if (j.contains("n_max")) p.n_max = natural(j["n_max"], "params.n_max");
  if (p.n_max > 6) throw ConfigError("params.n_max: at most 6");
  if (j.contains("caps")) {
    if (!j["caps"].is_array() || j["caps"].empty()) throw ConfigError("params.caps: expected a non-empty array");
    p.caps.clear();
    for (std::size_t i = 0; i < j["caps"].size(); ++i)
      p.caps.push_back(static_cast<int>(natural(j["caps"][i], "params.caps[" + std::to_string(i) + "]")));
  }
  if (j.contains("seed")) p.seed = natural(j["seed"], "params.seed");
  if (j.contains("degrees")) {
    const auto& dg = j["degrees"];
    if (!dg.is_array() || dg.size() != 2) throw ConfigError("params.degrees: expected [n, n']");
    p.degree_left = natural(dg[0], "params.degrees[0]");
    p.degree_right = natural(dg[1], "params.degrees[1]");
    if (p.degree_left + p.degree_right > 4) throw ConfigError("params.degrees: total degree at most 4");
  }
  if (j.contains("value_cap")) p.value_cap = static_cast<int>(natural(j["value_cap"], "params.value_cap"));
  if (j.contains("trials")) p.trials = natural(j["trials"], "params.trials");
  return p;
}

}  // namespace detail

/// Parses a config document; `field_override` replaces the "field" entry.
inline ProblemConfig parse_config(const std::string& text, const std::optional<std::string>& field_override = {}) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  using namespace detail;
  only_keys(j, "config", {"schema_version", "field", "algebra", "subalgebra", "lie", "action", "cocycle", "module",
                          "symmetric", "params"});
  if (j.contains("schema_version") && (!j["schema_version"].is_number_integer() || j["schema_version"] != 1))
    throw ConfigError("schema_version: only version 1 is supported");
  std::string ftext = field_override ? *field_override : j.value("field", std::string("rationals"));
  Field field;
  try {
    field = Field::parse(ftext);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field: ") + e.what());
  }

  ProblemConfig cfg;
  if (j.contains("params")) cfg.params = parse_params(j["params"]);

  if (j.contains("symmetric")) {
    for (const char* k : {"algebra", "subalgebra", "lie", "action", "cocycle"})
      if (j.contains(k)) throw ConfigError(std::string(k) + ": not allowed together with 'symmetric'");
    cfg.symmetric = true;
    cfg.sym = parse_symmetric(j["symmetric"], field);
    if (j.contains("module")) {
      only_keys(j["module"], "module", {"kind"});
      if (j["module"].value("kind", std::string("regular")) != "regular")
        throw ConfigError("module.kind: symmetric mode supports only 'regular'");
    }
    return cfg;
  }

  AlgebraData& d = cfg.data;
  d.field = field;
  d.algebra = j.contains("algebra") ? parse_algebra(j["algebra"], field) : AlgebraSpec::ground_field();
  d.lie = j.contains("lie") ? parse_lie(j["lie"], field, "lie") : LieAlgebraSpec::abelian(0);
  const std::size_t da = d.algebra.dim, dg = d.lie.dim;
  d.action = ActionSpec::zero(dg, da);
  d.cocycle = CocycleSpec::zero(dg);
  if (j.contains("action"))
    entries(j["action"], "action", {dg, da, da}, field,
            [&](const auto& ix, const Scalar& c) { add_to(d.action.images[ix[0]][ix[1]], ix[2], c); });
  if (j.contains("cocycle"))
    entries(j["cocycle"], "cocycle", {dg, dg, da}, field,
            [&](const auto& ix, const Scalar& c) { add_to(d.cocycle.values[ix[0]][ix[1]], ix[2], c); });
  if (j.contains("subalgebra")) {
    const auto& k = j["subalgebra"];
    only_keys(k, "subalgebra", {"span"});
    if (!k.contains("span") || !k["span"].is_array()) throw ConfigError("subalgebra.span: expected an array of vectors");
    d.subalgebra.ground_field = false;
    for (std::size_t v = 0; v < k["span"].size(); ++v) {
      SparseVector vec;
      entries(k["span"][v], "subalgebra.span[" + std::to_string(v) + "]", {da}, field,
              [&](const auto& ix, const Scalar& c) { add_to(vec, ix[0], c); });
      d.subalgebra.span.push_back(vec);
    }
  }
  if (j.contains("module")) {
    const auto& m = j["module"];
    if (!m.is_object() || !m.contains("kind") || !m["kind"].is_string())
      throw ConfigError("module.kind: required string");
    const std::string kind = m["kind"].get<std::string>();
    if (kind == "regular" || kind == "trivial" || kind == "algebra") {
      only_keys(m, "module", {"kind"});
      cfg.module_kind = kind == "regular" ? ModuleKind::Regular : kind == "trivial" ? ModuleKind::Trivial : ModuleKind::Algebra;
    } else if (kind == "explicit") {
      cfg.module_kind = ModuleKind::Explicit;
      cfg.module = parse_explicit_module(m, d);
    } else {
      throw ConfigError("module.kind: unknown kind '" + kind + "'");
    }
  }
  return cfg;
}

inline ProblemConfig load_config(const std::string& path, const std::optional<std::string>& field_override = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), field_override);
}

}  // namespace difop::cfg
