#include "config.hpp"

#include <fstream>
#include <sstream>

namespace vekua::cli {

namespace {

using nlohmann::json;

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing");
  return *it;
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

Point2 point_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [x, y]");
  return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

Expr parse_at(const std::string& src, const ParseOptions& opts, const std::string& path) {
  try {
    return parse(src, opts);
  } catch (const Error& e) {
    throw ConfigError(path, std::string("cannot parse \"") + src + "\": " + e.what());
  }
}

const ParseOptions kPlane{{Var::X1, Var::X2}};
const ParseOptions kProfile{{Var::Rho}};
const ParseOptions kCurve{{Var::T}};

Expression plane_expression(const json& j, const std::string& path) {
  const std::string src = string_at(j, path);
  return {src, parse_at(src, kPlane, path)};
}

double optional_number(const json& obj, const std::string& key, double fallback, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number_at(*it, path + "." + key);
}

Box parse_box(const json& j, const std::string& path) {
  const auto x = member(j, "x", path), y = member(j, "y", path);
  const Point2 xs = point_at(x, path + ".x"), ys = point_at(y, path + ".y");
  Box box{xs[0], xs[1], ys[0], ys[1]};
  if (box.degenerate()) throw ConfigError(path, "box is empty");
  return box;
}

Curve parse_curve(const json& j, const std::string& path) {
  const std::string kind = string_at(member(j, "kind", path), path + ".kind");
  if (kind == "param") {
    const std::string xs = string_at(member(j, "x", path), path + ".x");
    const std::string ys = string_at(member(j, "y", path), path + ".y");
    return Curve::parametric(parse_at(xs, kCurve, path + ".x"), parse_at(ys, kCurve, path + ".y"));
  }
  if (kind == "polyline") {
    const auto& pts = member(j, "points", path);
    if (!pts.is_array() || pts.size() < 2) throw ConfigError(path + ".points", "expected at least two points");
    std::vector<Point2> vertices;
    for (std::size_t k = 0; k < pts.size(); ++k)
      vertices.push_back(point_at(pts[k], path + ".points[" + std::to_string(k) + "]"));
    return Curve::polyline(vertices);
  }
  throw ConfigError(path + ".kind", "unknown curve kind \"" + kind + "\" (use \"param\" or \"polyline\")");
}

void positive(double v, const std::string& path) {
  if (!(v > 0)) throw ConfigError(path, "must be positive");
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  cfg.source = doc;
  if (!doc.is_object()) throw ConfigError("$", "expected an object");
  cfg.name = doc.contains("name") ? string_at(doc["name"], "$.name") : "unnamed";

  const auto& problem = member(doc, "problem", "$");
  cfg.u = plane_expression(member(problem, "u", "$.problem"), "$.problem.u");
  cfg.f0 = plane_expression(member(problem, "f0", "$.problem"), "$.problem.f0");
  cfg.problem.u = expr_field<2>(cfg.u.expr);
  cfg.problem.f0 = expr_field<2>(cfg.f0.expr);
  if (problem.contains("box")) cfg.problem.box = parse_box(problem["box"], "$.problem.box");
  if (problem.contains("grid")) {
    const auto& g = problem["grid"];
    if (!g.is_number_integer() || g.get<int>() < 2) throw ConfigError("$.problem.grid", "expected an integer >= 2");
    cfg.problem.grid = g.get<int>();
  }
  cfg.problem.zeta = optional_number(problem, "zeta", cfg.problem.zeta, "$.problem");
  positive(cfg.problem.zeta, "$.problem.zeta");

  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    const std::string p = "$.tolerances";
    cfg.tol.residual = optional_number(t, "residual", cfg.tol.residual, p);
    cfg.tol.fd = optional_number(t, "fd", cfg.tol.fd, p);
    cfg.tol.identity = optional_number(t, "identity", cfg.tol.identity, p);
    cfg.tol.cauchy = optional_number(t, "cauchy", cfg.tol.cauchy, p);
    for (const auto& [k, v] : {std::pair{"residual", cfg.tol.residual}, std::pair{"fd", cfg.tol.fd},
                               std::pair{"identity", cfg.tol.identity}, std::pair{"cauchy", cfg.tol.cauchy}})
      positive(v, p + "." + k);
  }

  if (doc.contains("rho")) {
    const auto& r = doc["rho"];
    const std::string p = "$.rho";
    RhoSpec spec;
    spec.rho = string_at(member(r, "rho", p), p + ".rho");
    spec.s = string_at(member(r, "s", p), p + ".s");
    spec.f0_of_rho = string_at(member(r, "f0_of_rho", p), p + ".f0_of_rho");
    if (r.contains("S")) spec.S = string_at(r["S"], p + ".S");
    spec.structure.rho = parse_at(spec.rho, kPlane, p + ".rho");
    spec.structure.s = parse_at(spec.s, kProfile, p + ".s");
    spec.structure.f0_of_rho = parse_at(spec.f0_of_rho, kProfile, p + ".f0_of_rho");
    if (spec.S) spec.structure.S = parse_at(*spec.S, kProfile, p + ".S");
    if (r.contains("rho_ref")) spec.structure.rho_ref = number_at(r["rho_ref"], p + ".rho_ref");
    cfg.rho = std::move(spec);
  }

  if (doc.contains("solutions")) {
    const auto& s = doc["solutions"];
    if (!s.is_object()) throw ConfigError("$.solutions", "expected an object of name: expression");
    for (const auto& [name, value] : s.items()) cfg.solutions[name] = plane_expression(value, "$.solutions." + name);
  }

  if (doc.contains("curves")) {
    const auto& c = doc["curves"];
    if (!c.is_object()) throw ConfigError("$.curves", "expected an object of name: curve");
    for (const auto& [name, value] : c.items()) cfg.curves.emplace(name, parse_curve(value, "$.curves." + name));
  }

  if (doc.contains("test_functions")) {
    const auto& t = doc["test_functions"];
    if (!t.is_array()) throw ConfigError("$.test_functions", "expected an array of expressions");
    for (std::size_t k = 0; k < t.size(); ++k)
      cfg.test_functions.push_back(plane_expression(t[k], "$.test_functions[" + std::to_string(k) + "]"));
  } else {
    for (const char* src : {"x^2*y", "x*y^3 - x", "1 + x + y^2", "x^3 - 3*x*y^2 + y", "x^2*y^2 - 2"})
      cfg.test_functions.push_back({src, parse(src, kPlane)});
  }

  cfg.anchor = cfg.problem.box.center();
  if (doc.contains("pipeline")) {
    const auto& p = doc["pipeline"];
    const std::string path = "$.pipeline";
    if (p.contains("anchor")) cfg.anchor = point_at(p["anchor"], path + ".anchor");
    cfg.C = optional_number(p, "C", cfg.C, path);
    cfg.psi_anchor = optional_number(p, "psi_anchor", cfg.psi_anchor, path);
    if (p.contains("steps")) {
      if (!p["steps"].is_number_integer() || p["steps"].get<int>() < 0)
        throw ConfigError(path + ".steps", "expected a nonnegative integer");
      cfg.steps = p["steps"].get<int>();
    }
    if (cfg.psi_anchor == 0) throw ConfigError(path + ".psi_anchor", "must be nonzero");
  }

  if (doc.contains("generate")) {
    const auto& g = doc["generate"];
    if (!g.is_array()) throw ConfigError("$.generate", "expected an array");
    for (std::size_t k = 0; k < g.size(); ++k) {
      const std::string path = "$.generate[" + std::to_string(k) + "]";
      GenerateSpec spec;
      spec.name = string_at(member(g[k], "name", path), path + ".name");
      spec.from = string_at(member(g[k], "v", path), path + ".v");
      if (spec.from != "F_I" && spec.from != "G_I")
        throw ConfigError(path + ".v", "expected \"F_I\" or \"G_I\"");
      if (g[k].contains("psi")) spec.psi = plane_expression(g[k]["psi"], path + ".psi");
      if (g[k].contains("proportional_to"))
        spec.proportional_to = plane_expression(g[k]["proportional_to"], path + ".proportional_to");
      spec.C = optional_number(g[k], "C", spec.C, path);
      cfg.generate.push_back(std::move(spec));
    }
    if (!cfg.generate.empty() && !cfg.rho) throw ConfigError("$.generate", "needs a rho block");
  }

  if (doc.contains("expect")) {
    const auto& e = doc["expect"];
    if (e.contains("sequence_v1")) {
      const std::string path = "$.expect.sequence_v1";
      const auto& v = e["sequence_v1"];
      cfg.sequence_v1 = {plane_expression(member(v, "re", path), path + ".re"),
                         plane_expression(member(v, "im", path), path + ".im")};
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  constexpr std::string_view prefix = "builtin:";
  if (path.rfind(prefix, 0) == 0) {
    const std::string name = path.substr(prefix.size());
    const auto& cat = catalog();
    auto it = cat.find(name);
    if (it == cat.end()) throw ConfigError(path, "no built-in configuration with this name");
    return parse_config(it->second);
  }
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path + " (byte " + std::to_string(e.byte) + ")", "invalid JSON");
  }
  return parse_config(doc);
}

}  // namespace vekua::cli
