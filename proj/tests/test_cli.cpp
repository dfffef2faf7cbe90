#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "commands.hpp"

using namespace vekua;
using namespace vekua::cli;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(VEKUA_SOURCE_DIR) / "configs";

const CheckRecord& find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check named " + name);
}

bool has_check(const Report& r, const std::string& prefix) {
  for (const auto& c : r.checks)
    if (c.name.rfind(prefix, 0) == 0) return true;
  return false;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(VEKUA_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json minimal_config() {
  return nlohmann::json::parse(R"json({
    "problem": {"u": "0", "f0": "1", "box": {"x": [0, 1], "y": [0, 1]}, "grid": 5}
  })json");
}

// Trapezoid rule on a periodic integrand: spectrally accurate.
double periodic_trapezoid(const std::function<double(double)>& f, int n) {
  double sum = 0;
  for (int k = 0; k < n; ++k) sum += f(2 * std::numbers::pi * k / n);
  return sum * 2 * std::numbers::pi / n;
}

}  // namespace

TEST(Config, CatalogMatchesConfigDirectory) {
  for (const auto& [name, doc] : catalog()) {
    std::ifstream in(kConfigs / (name + ".json"));
    ASSERT_TRUE(in) << name;
    EXPECT_EQ(nlohmann::json::parse(in), doc) << name;
  }
}

TEST(Config, BuiltinAndFileAgree) {
  const RunConfig a = load_config("builtin:example1");
  const RunConfig b = load_config((kConfigs / "example1.json").string());
  EXPECT_EQ(a.source, b.source);
  EXPECT_EQ(a.steps, 3);
  EXPECT_EQ(a.anchor, (Point2{0, 0}));
}

TEST(Config, DefaultsAnchorToBoxCenter) {
  const RunConfig cfg = parse_config(minimal_config());
  EXPECT_DOUBLE_EQ(cfg.anchor[0], 0.5);
  EXPECT_DOUBLE_EQ(cfg.anchor[1], 0.5);
  EXPECT_EQ(cfg.test_functions.size(), 5u);
  EXPECT_FALSE(cfg.rho);
}

TEST(Config, MalformedExpressionNamesItsLocation) {
  auto doc = minimal_config();
  doc["problem"]["u"] = "x^^2";
  try {
    parse_config(doc);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where(), "$.problem.u");
  }
}

TEST(Config, RejectsInvalidDocuments) {
  auto degenerate = minimal_config();
  degenerate["problem"]["box"]["x"] = {1, 1};
  EXPECT_THROW(parse_config(degenerate), ConfigError);
  auto negative_tol = minimal_config();
  negative_tol["tolerances"] = {{"residual", -1}};
  EXPECT_THROW(parse_config(negative_tol), ConfigError);
  auto unknown_var = minimal_config();
  unknown_var["solutions"] = {{"g", "exp(q)"}};
  EXPECT_THROW(parse_config(unknown_var), ConfigError);
  auto open_bad_curve = minimal_config();
  open_bad_curve["curves"] = {{"c", {{"kind", "spiral"}}}};
  EXPECT_THROW(parse_config(open_bad_curve), ConfigError);
  EXPECT_THROW(load_config("builtin:nope"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Report, PassIffResidualWithinTolerance) {
  Report r;
  run_check(r, "ok", 1e-6, [] { return Measurement{1e-6, 1, {}}; });
  run_check(r, "nan", 1e-6, [] { return Measurement{std::nan(""), 1, {}}; });
  run_check(r, "throws", 1e-6, []() -> Measurement { throw DomainError("boom"); });
  EXPECT_TRUE(r.checks[0].pass);
  EXPECT_FALSE(r.checks[1].pass);
  EXPECT_FALSE(r.checks[2].pass);
  EXPECT_EQ(r.checks[2].detail, "boom");
  EXPECT_FALSE(r.passed());
  const auto j = r.to_json();
  EXPECT_TRUE(j["checks"][1]["max_residual"].is_null());
  EXPECT_EQ(j["version"], kVersion);
}

TEST(Verify, BuiltinConfigsPass) {
  for (const auto& [name, doc] : catalog()) {
    const Report r = cmd_verify(parse_config(doc));
    EXPECT_TRUE(r.passed()) << name << "\n" << r.summary();
  }
}

TEST(Verify, Example1CoversTheSuite) {
  const Report r = cmd_verify(load_config("builtin:example1"));
  for (const char* prefix : {"riccati", "factorization.", "pair.main.", "pair.rho.", "schrodinger.f1",
                             "successor.main_to_next", "successor.rho_adjoint_to_main", "generate.from_F_I.proportional",
                             "generate.from_G_I.proportional", "profile.orthogonality"})
    EXPECT_TRUE(has_check(r, prefix)) << prefix;
  for (const auto& c : r.checks) EXPECT_EQ(c.pass, c.max_residual <= c.tolerance) << c.name;
}

TEST(Verify, NegativeControlFailsOnTheClaimedSolution) {
  const Report r = cmd_verify(load_config((kConfigs / "negative-control.json").string()));
  EXPECT_FALSE(r.passed());
  const auto& c = find_check(r, "schrodinger.claimed");
  EXPECT_FALSE(c.pass);
  // (-Delta + u) e^{2xy} = -3 (x^2 + y^2) e^{2xy}; relative to 1 + |f||u| this
  // peaks at the far corner.
  const double x = 1.1, f = std::exp(2 * x * x), u = 2 * x * x;
  EXPECT_NEAR(c.max_residual, 3 * u * f / (1 + f * u), 1e-9);
  EXPECT_TRUE(find_check(r, "schrodinger.f0").pass);
}

TEST(Cauchy, Example2Passes) {
  const RunConfig cfg = load_config("builtin:example1");
  const Report r = cmd_cauchy(cfg, "unit_circle", "inverse");
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_LE(std::abs(r.metadata["I1"].get<double>()), 1e-8);
  EXPECT_LE(std::abs(r.metadata["I2"].get<double>()), 1e-8);
  EXPECT_TRUE(cmd_cauchy(cfg, "square", "f2").passed());
}

TEST(Cauchy, F0GivesZero) {
  const Report r = cmd_cauchy(load_config("builtin:example1"), "unit_circle", "f0");
  EXPECT_NEAR(r.metadata["I1"].get<double>(), 0.0, 1e-15);
  EXPECT_NEAR(r.metadata["I2"].get<double>(), 0.0, 1e-15);
}

TEST(Cauchy, NegativeControlFails) {
  const Report r = cmd_cauchy(load_config((kConfigs / "negative-control.json").string()), "unit_circle", "claimed");
  EXPECT_FALSE(r.passed());
  // Im of the second integral reduces to int sin(2t) exp(1.5 sin(2t)) dt.
  const double oracle = periodic_trapezoid([](double t) { return std::sin(2 * t) * std::exp(1.5 * std::sin(2 * t)); }, 256);
  EXPECT_NEAR(r.metadata["I2"].get<double>(), oracle, 1e-10);
  EXPECT_NEAR(r.metadata["I1"].get<double>(), 0.0, 1e-12);
}

TEST(Cauchy, RejectsUnknownNamesAndOpenCurves) {
  auto doc = catalog().at("example1");
  doc["curves"]["arc"] = {{"kind", "param"}, {"x", "cos(pi*t)"}, {"y", "sin(pi*t)"}};
  const RunConfig cfg = parse_config(doc);
  EXPECT_THROW(cmd_cauchy(cfg, "arc", "f0"), ConfigError);
  EXPECT_THROW(cmd_cauchy(cfg, "nope", "f0"), ConfigError);
  EXPECT_THROW(cmd_cauchy(cfg, "unit_circle", "nope"), ConfigError);
}

TEST(Sequence, ZeroStepsReportsOnlyPairChecks) {
  const SequenceOutput out = cmd_sequence(load_config("builtin:example1"), 0);
  EXPECT_TRUE(out.report.passed());
  EXPECT_TRUE(out.files.empty());
  EXPECT_FALSE(has_check(out.report, "step"));
  EXPECT_TRUE(has_check(out.report, "pairs.validity"));
}

TEST(Sequence, OneStepMatchesClosedForm) {
  const SequenceOutput out = cmd_sequence(load_config("builtin:example1"), 1);
  EXPECT_TRUE(out.report.passed()) << out.report.summary();
  const auto& c = find_check(out.report, "step1.v_closed_form");
  EXPECT_LE(c.max_residual, 1e-8);
  ASSERT_EQ(out.files.count("step1.csv"), 1u);

  std::istringstream csv(out.files.at("step1.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "x,y,re_v,im_v,f,vekua_residual,schrod_residual");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 441);
}

TEST(Sequence, ThreeStepsStayWithinTolerance) {
  const SequenceOutput out = cmd_sequence(load_config("builtin:example1"), 3);
  EXPECT_TRUE(out.report.passed()) << out.report.summary();
  EXPECT_EQ(out.files.size(), 3u);
  EXPECT_EQ(out.report.metadata["steps_completed"], 3);
}

TEST(Sequence, RequiresRho) {
  EXPECT_THROW(cmd_sequence(parse_config(minimal_config()), 1), ConfigError);
}

TEST(Sequence, FailingStepGivesPartialReport) {
  // Psi changes sign inside the box when its anchor value is tiny.
  auto doc = catalog().at("example1");
  doc["pipeline"]["psi_anchor"] = 1e-3;
  doc["pipeline"]["anchor"] = {0.6, 0.6};
  const SequenceOutput out = cmd_sequence(parse_config(doc), 2);
  EXPECT_FALSE(out.report.passed());
  EXPECT_FALSE(out.report.error.empty());
  EXPECT_TRUE(out.report.to_json().contains("error"));
}

TEST(Sequence, WritesFilesAndReport) {
  const auto dir = std::filesystem::temp_directory_path() / "vekua_test_sequence";
  std::filesystem::remove_all(dir);
  write_sequence_output(cmd_sequence(load_config("builtin:free"), 1), dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "step1.csv"));
  std::ifstream in(dir / "report.json");
  EXPECT_TRUE(nlohmann::json::parse(in)["passed"].get<bool>());
  std::filesystem::remove_all(dir);
}

TEST(Reports, DeterministicApartFromTimings) {
  auto strip = [](nlohmann::json j) {
    for (auto& c : j["checks"]) c.erase("runtime_ms");
    return j;
  };
  const RunConfig cfg = load_config("builtin:free");
  EXPECT_EQ(strip(cmd_verify(cfg).to_json()), strip(cmd_verify(cfg).to_json()));
}

TEST(Tool, ExitCodes) {
  const std::string neg = (kConfigs / "negative-control.json").string();
  EXPECT_EQ(run_tool("verify --config builtin:free"), 0);
  EXPECT_EQ(run_tool("verify --config " + neg), 1);
  EXPECT_EQ(run_tool("verify --config /nonexistent.json"), 2);
  EXPECT_EQ(run_tool("cauchy --config builtin:example1 --curve unit_circle --solution inverse"), 0);
  EXPECT_EQ(run_tool("cauchy --config " + neg + " --curve unit_circle --solution claimed"), 1);
  EXPECT_EQ(run_tool("cauchy --config builtin:example1 --curve missing --solution f0"), 2);
  EXPECT_EQ(run_tool("sequence --config " + neg + " --steps 1 --out /tmp/vekua_tool_out"), 2);
  EXPECT_EQ(run_tool("examples show example1"), 0);
  EXPECT_EQ(run_tool("examples show missing"), 2);
  EXPECT_EQ(run_tool("frobnicate"), 2);
}
