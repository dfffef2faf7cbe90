#pragma once

// Run configuration for the command-line front end. See README.md for the
// JSON schema.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vekua/curve.hpp"
#include "vekua/error.hpp"
#include "vekua/schrod.hpp"

namespace vekua::cli {

/// A malformed or inconsistent configuration; `where` is a JSON path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& where, const std::string& what) : Error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct Tolerances {
  double residual = 1e-6;  // jet-based Vekua and Schrodinger residuals
  double fd = 1e-4;        // finite-difference cross-checks
  double identity = 1e-8;  // pair identities, path independence, closed forms
  double cauchy = 1e-8;    // contour integrals
};

struct Expression {
  std::string source;
  Expr expr;
};

struct GenerateSpec {
  std::string name;
  std::string from;                      // "F_I" or "G_I"
  std::optional<Expression> psi;         // Psi at the anchor, evaluated from this
  std::optional<Expression> proportional_to;
  double C = 1.0;
};

struct RhoSpec {
  std::string rho, s, f0_of_rho;
  std::optional<std::string> S;
  RhoStructure structure;
};

struct RunConfig {
  std::string name;
  nlohmann::json source;

  Expression u, f0;
  SchrodingerProblem problem;
  Tolerances tol;
  std::optional<RhoSpec> rho;

  std::map<std::string, Expression> solutions;
  std::map<std::string, Curve> curves;
  std::vector<Expression> test_functions;
  std::vector<GenerateSpec> generate;

  Point2 anchor{};
  double C = 1.0;
  double psi_anchor = 1.0;
  int steps = 1;

  std::optional<std::pair<Expression, Expression>> sequence_v1;  // expected v after one step (re, im)
};

/// Parses and validates a configuration document.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a configuration file, or a built-in catalog entry when `path` has
/// the form "builtin:NAME".
RunConfig load_config(const std::string& path);

/// Names and documents of the built-in configurations.
const std::map<std::string, nlohmann::json>& catalog();

}  // namespace vekua::cli
