#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace vekua::cli {

inline constexpr const char* kVersion = "0.1.0";

struct CheckRecord {
  std::string name;
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::size_t samples = 0;
  double runtime_ms = 0;
  std::string detail;  // error message or location of the worst sample
};

struct Report {
  std::string command;
  std::string config;
  std::vector<CheckRecord> checks;
  nlohmann::json metadata = nlohmann::json::object();
  std::string error;  // set when the run aborted

  bool passed() const;
  nlohmann::json to_json() const;
  std::string summary() const;
};

/// What a check computes: the worst residual, the sample count and an
/// optional detail string.
struct Measurement {
  double max_residual = 0;
  std::size_t samples = 0;
  std::string detail;
};

/// Runs `body`, times it and appends the record. Library errors thrown by the
/// body become a failed record carrying the message.
void run_check(Report& report, const std::string& name, double tolerance, const std::function<Measurement()>& body);

}  // namespace vekua::cli
