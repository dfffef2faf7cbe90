#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "vekua/error.hpp"

namespace vekua::cli {

bool Report::passed() const {
  if (!error.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["tool"] = "vekua";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config;
  j["passed"] = passed();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json r;
    r["name"] = c.name;
    // NaN and infinity are not representable in JSON.
    if (std::isfinite(c.max_residual)) r["max_residual"] = c.max_residual;
    else r["max_residual"] = nullptr;
    r["tolerance"] = c.tolerance;
    r["pass"] = c.pass;
    r["samples"] = c.samples;
    r["runtime_ms"] = c.runtime_ms;
    if (!c.detail.empty()) r["detail"] = c.detail;
    arr.push_back(std::move(r));
  }
  j["metadata"] = metadata;
  if (!error.empty()) j["error"] = error;
  return j;
}

std::string Report::summary() const {
  std::ostringstream os;
  char line[256];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-4s %-40s %11.3e <= %-9.1e (%zu samples)", c.pass ? "PASS" : "FAIL",
                  c.name.c_str(), c.max_residual, c.tolerance, c.samples);
    os << line;
    if (!c.pass && !c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  if (!error.empty()) os << "aborted: " << error << "\n";
  os << (passed() ? "all checks passed" : "some checks failed") << "\n";
  return os.str();
}

void run_check(Report& report, const std::string& name, double tolerance, const std::function<Measurement()>& body) {
  CheckRecord rec;
  rec.name = name;
  rec.tolerance = tolerance;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Measurement m = body();
    rec.max_residual = m.max_residual;
    rec.samples = m.samples;
    rec.detail = m.detail;
    rec.pass = m.max_residual <= tolerance;
  } catch (const ResidualError& e) {
    rec.max_residual = e.residual();
    rec.detail = e.what();
    rec.pass = false;
  } catch (const Error& e) {
    rec.max_residual = std::nan("");
    rec.detail = e.what();
    rec.pass = false;
  }
  rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report.checks.push_back(std::move(rec));
}

}  // namespace vekua::cli
