// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include "gltmean/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gltmean {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(Errc::config, path + ": " + msg);
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) fail(path + "." + k, "unknown key");
}

const Json& required(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required key");
  return *it;
}

// Numbers: JSON numbers, or strings holding "p/q" or a decimal literal.
long double parse_real(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<long double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    char* end = nullptr;
    if (slash != std::string::npos) {
      const std::string p = s.substr(0, slash), q = s.substr(slash + 1);
      char* e1 = nullptr;
      char* e2 = nullptr;
      const long long num = std::strtoll(p.c_str(), &e1, 10);
      const long long den = std::strtoll(q.c_str(), &e2, 10);
      if (p.empty() || q.empty() || *e1 || *e2 || den == 0) fail(path, "malformed rational '" + s + "'");
      return static_cast<long double>(num) / static_cast<long double>(den);
    }
    const long double v = std::strtold(s.c_str(), &end);
    if (s.empty() || *end) fail(path, "malformed number '" + s + "'");
    return v;
  }
  fail(path, "expected a number");
}

long parse_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::complex<long double> parse_complex(const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) fail(path, "complex values are [re, im]");
    return {parse_real(j[0], path + "[0]"), parse_real(j[1], path + "[1]")};
  }
  return parse_real(j, path);
}

Block parse_block(const Json& j, const std::string& path, int r) {
  if (!j.is_array() || j.empty()) fail(path, "expected a square matrix (array of rows)");
  const auto rows = Eigen::Index(j.size());
  Block b(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[std::size_t(i)];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || Eigen::Index(row.size()) != rows)
      fail(rp, "row length differs from the number of rows");
    for (Eigen::Index k = 0; k < rows; ++k)
      b(i, k) = parse_complex(row[std::size_t(k)], rp + "[" + std::to_string(k) + "]");
  }
  if (rows != r)
    fail(path, "block is " + std::to_string(rows) + "x" + std::to_string(rows) + " but r = " +
                   std::to_string(r));
  return b;
}

GeneratingFunction parse_generating(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a symbol descriptor object");
  if (j.contains("coefficients") && !j.contains("catalog")) {
    allow_keys(j, path, {"coefficients"});
    const Json& c = j["coefficients"];
    if (!c.is_object()) fail(path + ".coefficients", "expected an object {\"k\": value}");
    TrigPolynomial p;
    for (const auto& [k, v] : c.items()) {
      char* end = nullptr;
      const long idx = std::strtol(k.c_str(), &end, 10);
      if (k.empty() || *end) fail(path + ".coefficients." + k, "key must be an integer");
      p.coefficients[idx] = parse_complex(v, path + ".coefficients." + k);
    }
    return p;
  }
  const Json& cat = required(j, path, "catalog");
  if (!cat.is_string()) fail(path + ".catalog", "expected a string");
  const std::string name = cat.get<std::string>();
  if (name == "constant") {
    allow_keys(j, path, {"catalog", "value"});
    return ConstantFunction{parse_real(required(j, path, "value"), path + ".value")};
  }
  if (name == "cosine") {
    allow_keys(j, path, {"catalog", "a"});
    const Json& a = required(j, path, "a");
    if (!a.is_array()) fail(path + ".a", "expected an array");
    std::vector<long double> v;
    for (std::size_t i = 0; i < a.size(); ++i)
      v.push_back(parse_real(a[i], path + ".a[" + std::to_string(i) + "]"));
    return cosine_polynomial(v);
  }
  if (name == "indicator") {
    allow_keys(j, path, {"catalog", "half_width"});
    const long double a = parse_real(required(j, path, "half_width"), path + ".half_width");
    if (!(a > 0 && a < 3.14159265358979L)) fail(path + ".half_width", "must lie in (0, pi)");
    return IndicatorFunction{a};
  }
  if (name == "ramp") {
    allow_keys(j, path, {"catalog", "reflected"});
    bool reflected = false;
    if (j.contains("reflected")) {
      if (!j["reflected"].is_boolean()) fail(path + ".reflected", "expected a boolean");
      reflected = j["reflected"].get<bool>();
    }
    return RampFunction{reflected};
  }
  fail(path + ".catalog", "unknown catalog entry '" + name + "'");
}

ScalarWeight parse_weight(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a weight descriptor object");
  const Json& kind = required(j, path, "kind");
  if (!kind.is_string()) fail(path + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  auto real = [&](const char* key) { return parse_real(required(j, path, key), path + "." + key); };
  if (k == "constant") {
    allow_keys(j, path, {"kind", "value"});
    return ConstantWeight{real("value")};
  }
  if (k == "affine") {
    allow_keys(j, path, {"kind", "offset", "slope"});
    return AffineWeight{real("offset"), real("slope")};
  }
  if (k == "step") {
    allow_keys(j, path, {"kind", "at", "below", "above"});
    return StepWeight{real("at"), real("below"), real("above")};
  }
  if (k == "pwlinear") {
    allow_keys(j, path, {"kind", "knots"});
    const Json& knots = required(j, path, "knots");
    if (!knots.is_array() || knots.empty()) fail(path + ".knots", "expected a non-empty array");
    PiecewiseLinearWeight w;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const std::string kp = path + ".knots[" + std::to_string(i) + "]";
      if (!knots[i].is_array() || knots[i].size() != 2) fail(kp, "knots are [x, y] pairs");
      w.knots.emplace_back(parse_real(knots[i][0], kp + "[0]"), parse_real(knots[i][1], kp + "[1]"));
      if (i > 0 && !(w.knots[i].first > w.knots[i - 1].first)) fail(kp, "knot abscissae must increase");
    }
    return w;
  }
  fail(path + ".kind", "unknown weight kind '" + k + "'");
}

template <class T, class Parse>
std::vector<T> per_level(const Json& j, const std::string& path, int d, Parse parse) {
  std::vector<T> out;
  if (j.is_array()) {
    if (int(j.size()) != d)
      fail(path, "expected " + std::to_string(d) + " per-level descriptors, got " +
                     std::to_string(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(parse(j[i], path + "[" + std::to_string(i) + "]"));
  } else {
    if (d != 1) fail(path, "d > 1 needs an array of per-level descriptors");
    out.push_back(parse(j, path));
  }
  return out;
}

struct Shape {
  int d;
  int r;
};

Block default_block(const Json& node, const std::string& path, Shape s) {
  if (node.contains("block")) return parse_block(node["block"], path + ".block", s.r);
  if (s.r != 1) fail(path + ".block", "required when r > 1");
  return Block::Identity(1, 1);
}

SequenceExpr parse_expr(const Json& j, const std::string& path, Shape s);

std::vector<SequenceExpr> parse_list(const Json& node, const std::string& path, const char* key,
                                     Shape s) {
  const Json& list = required(node, path, key);
  const std::string lp = path + "." + key;
  if (!list.is_array() || list.empty()) fail(lp, "expected a non-empty array");
  std::vector<SequenceExpr> out;
  for (std::size_t i = 0; i < list.size(); ++i)
    out.push_back(parse_expr(list[i], lp + "[" + std::to_string(i) + "]", s));
  return out;
}

SequenceExpr parse_expr_body(const Json& j, const std::string& path, Shape s) {
  const Json& node = required(j, path, "node");
  if (!node.is_string()) fail(path + ".node", "expected a string");
  const std::string kind = node.get<std::string>();
  if (kind == "toeplitz") {
    if (j.contains("table")) {
      allow_keys(j, path, {"node", "label", "hpd", "table"});
      const Json& t = j["table"];
      if (!t.is_array()) fail(path + ".table", "expected an array of {k, block}");
      std::map<MultiIndex, Block> table;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string ep = path + ".table[" + std::to_string(i) + "]";
        allow_keys(t[i], ep, {"k", "block"});
        const Json& k = required(t[i], ep, "k");
        MultiIndex idx;
        if (k.is_array()) {
          for (std::size_t l = 0; l < k.size(); ++l)
            idx.push_back(parse_integer(k[l], ep + ".k[" + std::to_string(l) + "]"));
        } else {
          idx.push_back(parse_integer(k, ep + ".k"));
        }
        if (int(idx.size()) != s.d) fail(ep + ".k", "index must have d components");
        table[idx] = parse_block(required(t[i], ep, "block"), ep + ".block", s.r);
      }
      return SequenceExpr::toeplitz(std::make_shared<TableProvider>(s.d, s.r, std::move(table)));
    }
    allow_keys(j, path, {"node", "label", "hpd", "symbol", "block"});
    auto factors = per_level<GeneratingFunction>(required(j, path, "symbol"), path + ".symbol", s.d,
                                                 parse_generating);
    return SequenceExpr::toeplitz(
        std::make_shared<SeparableProvider>(std::move(factors), default_block(j, path, s)));
  }
  if (kind == "diag") {
    allow_keys(j, path, {"node", "label", "hpd", "weight", "block"});
    auto factors =
        per_level<ScalarWeight>(required(j, path, "weight"), path + ".weight", s.d, parse_weight);
    return SequenceExpr::diag(WeightFunction(std::move(factors), default_block(j, path, s)));
  }
  if (kind == "identity") {
    allow_keys(j, path, {"node", "label", "hpd"});
    return SequenceExpr::identity(s.d, s.r);
  }
  if (kind == "sum") {
    allow_keys(j, path, {"node", "label", "hpd", "terms"});
    return SequenceExpr::sum(parse_list(j, path, "terms", s));
  }
  if (kind == "product") {
    allow_keys(j, path, {"node", "label", "hpd", "factors"});
    return SequenceExpr::product(parse_list(j, path, "factors", s));
  }
  if (kind == "scale") {
    allow_keys(j, path, {"node", "label", "hpd", "num", "den", "exponent", "operand"});
    ScaleRule rule;
    if (j.contains("num")) rule.num = parse_integer(j["num"], path + ".num");
    if (j.contains("den")) rule.den = parse_integer(j["den"], path + ".den");
    if (j.contains("exponent")) rule.exponent = int(parse_integer(j["exponent"], path + ".exponent"));
    if (rule.den <= 0) fail(path + ".den", "must be positive");
    return SequenceExpr::scale(rule, parse_expr(required(j, path, "operand"), path + ".operand", s));
  }
  if (kind == "congruence") {
    allow_keys(j, path, {"node", "label", "hpd", "inner", "outer"});
    return SequenceExpr::congruence(parse_expr(required(j, path, "inner"), path + ".inner", s),
                                    parse_expr(required(j, path, "outer"), path + ".outer", s));
  }
  if (kind == "power") {
    allow_keys(j, path, {"node", "label", "hpd", "p", "operand"});
    return SequenceExpr::power(parse_expr(required(j, path, "operand"), path + ".operand", s),
                               parse_real(required(j, path, "p"), path + ".p"));
  }
  fail(path + ".node", "unknown node kind '" + kind + "'");
}

SequenceExpr parse_expr(const Json& j, const std::string& path, Shape s) {
  if (!j.is_object()) fail(path, "expected an expression object");
  SequenceExpr e = [&] {
    try {
      return parse_expr_body(j, path, s);
    } catch (const Error& err) {
      if (err.code() == Errc::config) throw;
      fail(path, err.what());
    }
  }();
  if (j.contains("label")) {
    if (!j["label"].is_string()) fail(path + ".label", "expected a string");
    e = e.with_label(j["label"].get<std::string>());
  }
  if (j.contains("hpd")) {
    if (!j["hpd"].is_boolean()) fail(path + ".hpd", "expected a boolean");
    e = e.declared_hpd(j["hpd"].get<bool>());
  }
  return e;
}

ExperimentSpec parse_experiment(const Json& j, const std::string& path) {
  allow_keys(j, path,
             {"id", "description", "d", "r", "A", "B", "n_list", "threshold", "grid",
              "candidate_tol", "precision", "expected_symbol", "target"});
  const Json& id = required(j, path, "id");
  if (!id.is_string() || id.get<std::string>().empty()) fail(path + ".id", "expected a non-empty string");
  Shape s{1, 1};
  if (j.contains("d")) s.d = int(parse_integer(j["d"], path + ".d"));
  if (j.contains("r")) s.r = int(parse_integer(j["r"], path + ".r"));
  if (s.d < 1) fail(path + ".d", "must be >= 1");
  if (s.r < 1) fail(path + ".r", "must be >= 1");

  ExperimentSpec spec(id.get<std::string>(), parse_expr(required(j, path, "A"), path + ".A", s),
                      parse_expr(required(j, path, "B"), path + ".B", s));
  if (j.contains("description")) {
    if (!j["description"].is_string()) fail(path + ".description", "expected a string");
    spec.description = j["description"].get<std::string>();
  }
  if (j.contains("n_list")) {
    const Json& n = j["n_list"];
    if (!n.is_array() || n.empty()) fail(path + ".n_list", "expected a non-empty array");
    spec.n_list.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string np = path + ".n_list[" + std::to_string(i) + "]";
      const long v = parse_integer(n[i], np);
      if (v < 2) fail(np, "entries must be >= 2");
      if (!spec.n_list.empty() && v <= spec.n_list.back()) fail(np, "entries must increase strictly");
      spec.n_list.push_back(v);
    }
  }
  if (j.contains("threshold")) {
    spec.threshold = double(parse_real(j["threshold"], path + ".threshold"));
    if (!(spec.threshold >= 0)) fail(path + ".threshold", "must be >= 0");
  }
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    if (!g.is_array() || g.size() != 2) fail(path + ".grid", "expected [Mx, Mtheta]");
    spec.grid.mx = parse_integer(g[0], path + ".grid[0]");
    spec.grid.mtheta = parse_integer(g[1], path + ".grid[1]");
    if (spec.grid.mx < 1 || spec.grid.mtheta < 1) fail(path + ".grid", "sizes must be >= 1");
  }
  if (j.contains("candidate_tol")) {
    spec.candidate_tol = parse_real(j["candidate_tol"], path + ".candidate_tol");
    if (!(spec.candidate_tol > 0)) fail(path + ".candidate_tol", "must be positive");
  }
  if (j.contains("precision")) {
    const Json& p = j["precision"];
    if (p == "standard") {
      spec.precision = Precision::standard;
    } else if (p == "extended") {
      spec.precision = Precision::extended;
    } else {
      fail(path + ".precision", "expected \"standard\" or \"extended\"");
    }
  }
  if (j.contains("expected_symbol")) {
    const Json& e = j["expected_symbol"];
    const std::string ep = path + ".expected_symbol";
    if (e == "candidate") {
      spec.symbol.reset();
    } else if (e == "zero") {
      spec.symbol = SymbolFunction::zero(s.d, s.r);
    } else if (e.is_object()) {
      allow_keys(e, ep, {"catalog"});
      const Json& c = required(e, ep, "catalog");
      if (!c.is_string()) fail(ep + ".catalog", "expected a string");
      const std::string cid = c.get<std::string>();
      const auto& ids = catalog_ids();
      if (std::find(ids.begin(), ids.end(), cid) == ids.end())
        fail(ep + ".catalog", "unknown catalog experiment '" + cid + "'");
      ExperimentSpec ref = catalog_entry(cid);
      if (!ref.symbol) fail(ep + ".catalog", "'" + cid + "' has no closed-form symbol");
      spec.symbol = ref.symbol;
      spec.symbol_catalog = cid;
    } else {
      fail(ep, "expected \"candidate\", \"zero\" or {\"catalog\": id}");
    }
  }
  if (j.contains("target")) spec.exact_target = double(parse_real(j["target"], path + ".target"));

  try {
    spec.validate();
  } catch (const Error& err) {
    fail(path, err.what());
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Serialization

Json real_json(long double v) {
  if (!std::isfinite(static_cast<double>(v))) throw Error(Errc::config, "cannot serialize a non-finite value");
  for (long q = 1; q <= 720; ++q) {
    const long double p = std::round(v * q);
    if (std::abs(p) < 1e15L && p / static_cast<long double>(q) == v) {
      if (q == 1) return Json(static_cast<long long>(p));
      return Json(std::to_string(static_cast<long long>(p)) + "/" + std::to_string(q));
    }
  }
  if (static_cast<long double>(static_cast<double>(v)) == v) return Json(static_cast<double>(v));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return Json(std::string(buf));
}

Json complex_json(std::complex<long double> c) {
  if (c.imag() == 0) return real_json(c.real());
  return Json::array({real_json(c.real()), real_json(c.imag())});
}

Json block_json(const Block& b) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < b.cols(); ++k) row.push_back(complex_json(b(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Json generating_json(const GeneratingFunction& f) {
  return std::visit(
      [](const auto& g) -> Json {
        using T = std::decay_t<decltype(g)>;
        Json j;
        if constexpr (std::is_same_v<T, ConstantFunction>) {
          j["catalog"] = "constant";
          j["value"] = real_json(g.value);
        } else if constexpr (std::is_same_v<T, TrigPolynomial>) {
          Json c = Json::object();
          for (const auto& [k, v] : g.coefficients) c[std::to_string(k)] = complex_json(v);
          j["coefficients"] = c;
        } else if constexpr (std::is_same_v<T, IndicatorFunction>) {
          j["catalog"] = "indicator";
          j["half_width"] = real_json(g.half_width);
        } else {
          j["catalog"] = "ramp";
          j["reflected"] = g.reflected;
        }
        return j;
      },
      f);
}

Json weight_json(const ScalarWeight& w) {
  return std::visit(
      [](const auto& g) -> Json {
        using T = std::decay_t<decltype(g)>;
        Json j;
        if constexpr (std::is_same_v<T, ConstantWeight>) {
          j["kind"] = "constant";
          j["value"] = real_json(g.value);
        } else if constexpr (std::is_same_v<T, AffineWeight>) {
          j["kind"] = "affine";
          j["offset"] = real_json(g.offset);
          j["slope"] = real_json(g.slope);
        } else if constexpr (std::is_same_v<T, StepWeight>) {
          j["kind"] = "step";
          j["at"] = real_json(g.at);
          j["below"] = real_json(g.below);
          j["above"] = real_json(g.above);
        } else {
          j["kind"] = "pwlinear";
          Json k = Json::array();
          for (const auto& [x, y] : g.knots) k.push_back(Json::array({real_json(x), real_json(y)}));
          j["knots"] = k;
        }
        return j;
      },
      w);
}

template <class T, class ToJson>
Json levels_json(const std::vector<T>& items, ToJson to_json) {
  if (items.size() == 1) return to_json(items[0]);
  Json a = Json::array();
  for (const auto& i : items) a.push_back(to_json(i));
  return a;
}

Json expr_json(const SequenceExpr& e) {
  using K = SequenceExpr::Kind;
  Json j;
  j["node"] = kind_name(e.kind());
  switch (e.kind()) {
    case K::toeplitz: {
      const auto* sep = dynamic_cast<const SeparableProvider*>(e.provider().get());
      const auto* tab = dynamic_cast<const TableProvider*>(e.provider().get());
      if (sep) {
        j["symbol"] = levels_json(sep->factors(), generating_json);
        j["block"] = block_json(sep->block());
      } else if (tab) {
        Json t = Json::array();
        for (const auto& [k, b] : tab->table()) {
          Json entry;
          entry["k"] = k;
          entry["block"] = block_json(b);
          t.push_back(entry);
        }
        j["table"] = t;
      } else {
        throw Error(Errc::config, "quadrature-backed providers have no config form");
      }
      break;
    }
    case K::diag_sampling: {
      const auto* f = e.weight().factors();
      if (!f) throw Error(Errc::config, "function-backed weights have no config form");
      j["weight"] = levels_json(*f, weight_json);
      j["block"] = block_json(e.weight().block());
      break;
    }
    case K::identity: break;
    case K::sum:
    case K::product: {
      Json list = Json::array();
      for (const auto& c : e.children()) list.push_back(expr_json(c));
      j[e.kind() == K::sum ? "terms" : "factors"] = list;
      break;
    }
    case K::scale:
      j["num"] = e.rule().num;
      j["den"] = e.rule().den;
      j["exponent"] = e.rule().exponent;
      j["operand"] = expr_json(e.children()[0]);
      break;
    case K::congruence:
      j["inner"] = expr_json(e.children()[0]);
      j["outer"] = expr_json(e.children()[1]);
      break;
    case K::power:
      j["p"] = real_json(e.exponent());
      j["operand"] = expr_json(e.children()[0]);
      break;
  }
  if (!e.label().empty()) j["label"] = e.label();
  if (e.hpd_declared()) j["hpd"] = true;
  return j;
}

Json experiment_json(const ExperimentSpec& s) {
  Json j;
  j["id"] = s.id;
  if (!s.description.empty()) j["description"] = s.description;
  j["d"] = s.levels();
  j["r"] = s.block_size();
  j["A"] = expr_json(s.a);
  j["B"] = expr_json(s.b);
  j["n_list"] = s.n_list;
  j["threshold"] = s.threshold;
  j["grid"] = Json::array({s.grid.mx, s.grid.mtheta});
  j["candidate_tol"] = static_cast<double>(s.candidate_tol);
  j["precision"] = precision_name(s.precision);
  if (!s.symbol) {
    j["expected_symbol"] = "candidate";
  } else if (!s.symbol_catalog.empty()) {
    j["expected_symbol"] = Json{{"catalog", s.symbol_catalog}};
  } else if (s.symbol->description() == "0") {
    j["expected_symbol"] = "zero";
  } else {
    throw Error(Errc::config, "experiment '" + s.id + "': custom symbol functions have no config form");
  }
  if (s.exact_target) j["target"] = *s.exact_target;
  return j;
}

}  // namespace

std::vector<ExperimentSpec> parse_config(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::config, std::string("$: malformed JSON: ") + e.what());
  }
  std::vector<ExperimentSpec> out;
  if (doc.is_object() && doc.contains("experiments")) {
    allow_keys(doc, "$", {"experiments"});
    const Json& list = doc["experiments"];
    if (!list.is_array() || list.empty()) fail("$.experiments", "expected a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i)
      out.push_back(parse_experiment(list[i], "$.experiments[" + std::to_string(i) + "]"));
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i)
      out.push_back(parse_experiment(doc[i], "$[" + std::to_string(i) + "]"));
  } else {
    out.push_back(parse_experiment(doc, "$"));
  }
  if (out.empty()) fail("$", "no experiments");
  return out;
}

std::vector<ExperimentSpec> load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::config, "cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string to_json(const std::vector<ExperimentSpec>& specs) {
  Json list = Json::array();
  for (const auto& s : specs) list.push_back(experiment_json(s));
  return Json{{"experiments", list}}.dump(2) + "\n";
}

}  // namespace gltmean
