#include "config.hpp"

namespace vekua::cli {

namespace {

// Example 1 data. C1 = -2 keeps (y^2 - x^2 - C1) e^{xy} positive on the box;
// the anchor at the origin reproduces the closed forms of the first cycle.
constexpr const char* kExample1 = R"json({
  "name": "example1",
  "problem": {
    "u": "x^2 + y^2",
    "f0": "exp(x*y)",
    "box": {"x": [0.1, 1.1], "y": [0.1, 1.1]},
    "grid": 21
  },
  "rho": {"rho": "x*y", "s": "0", "S": "0", "f0_of_rho": "exp(rho)"},
  "solutions": {
    "f0": "exp(x*y)",
    "f1": "(y^2 - x^2 + 2)*exp(x*y)",
    "f2": "exp(-x*y) + exp(x*y)",
    "inverse": "exp(-x*y)"
  },
  "curves": {
    "unit_circle": {"kind": "param", "x": "cos(2*pi*t)", "y": "sin(2*pi*t)"},
    "square": {"kind": "polyline", "points": [[-1, -1], [1, -1], [1, 1], [-1, 1], [-1, -1]]}
  },
  "pipeline": {"anchor": [0, 0], "C": 1, "psi_anchor": 1, "steps": 3},
  "generate": [
    {"name": "from_F_I", "v": "F_I", "psi": "(x^2 - y^2 - 2)/2", "proportional_to": "(y^2 - x^2 + 2)*exp(x*y)"},
    {"name": "from_G_I", "v": "G_I", "psi": "(exp(-2*x*y) + 1)/2", "proportional_to": "exp(-x*y) + exp(x*y)"}
  ],
  "expect": {
    "sequence_v1": {
      "re": "-(y*exp(-x*y)*(x^2 - y^2) - x*(exp(-x*y) - exp(x*y)))/2",
      "im": "(y*(exp(-x*y) - exp(x*y)) + x*exp(-x*y)*(x^2 - y^2))/2"
    }
  }
})json";

constexpr const char* kFree = R"json({
  "name": "free",
  "problem": {
    "u": "0",
    "f0": "1",
    "box": {"x": [0.1, 1.1], "y": [0.1, 1.1]},
    "grid": 21
  },
  "rho": {"rho": "x", "s": "0", "S": "0", "f0_of_rho": "1"},
  "solutions": {
    "saddle": "x^2 - y^2",
    "exp_cos": "exp(x)*cos(y)"
  },
  "curves": {
    "unit_circle": {"kind": "param", "x": "cos(2*pi*t)", "y": "sin(2*pi*t)"}
  },
  "pipeline": {"C": 1, "psi_anchor": 1, "steps": 2},
  "generate": [
    {"name": "from_F_I", "v": "F_I", "psi": "2 - y", "proportional_to": "2 - y"},
    {"name": "from_G_I", "v": "G_I", "psi": "2 - x", "proportional_to": "2 - x"}
  ]
})json";

// No closed-form solutions beyond f0; only residual and identity checks apply.
constexpr const char* kRadial = R"json({
  "name": "radial-demo",
  "problem": {
    "u": "1 + 1/sqrt(x^2 + y^2)",
    "f0": "exp(sqrt(x^2 + y^2))",
    "box": {"x": [0.5, 1.5], "y": [0.5, 1.5]},
    "grid": 21
  },
  "rho": {"rho": "sqrt(x^2 + y^2)", "s": "1/rho", "S": "ln(rho)", "f0_of_rho": "exp(rho)"},
  "solutions": {"f0": "exp(sqrt(x^2 + y^2))"},
  "curves": {
    "circle": {"kind": "param", "x": "1 + 0.4*cos(2*pi*t)", "y": "1 + 0.4*sin(2*pi*t)"}
  },
  "pipeline": {"C": 1, "psi_anchor": 1, "steps": 2},
  "generate": [
    {"name": "from_F_I", "v": "F_I"},
    {"name": "from_G_I", "v": "G_I"}
  ]
})json";

}  // namespace

const std::map<std::string, nlohmann::json>& catalog() {
  static const std::map<std::string, nlohmann::json> entries{
      {"example1", nlohmann::json::parse(kExample1)},
      {"free", nlohmann::json::parse(kFree)},
      {"radial-demo", nlohmann::json::parse(kRadial)},
  };
  return entries;
}

}  // namespace vekua::cli
