#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fracheat::cli {

using nlohmann::json;

/// One numeric with its tolerance. Assertions decide the exit code;
/// measurements (e.g. capacity verdicts) only carry the flag.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "<", "<=", ">", ">=", "abs<"
  bool pass = false;
  bool assertion = true;
};

class RunReport {
 public:
  RunReport(std::string command, json config, std::filesystem::path out_dir);

  const json& config() const { return config_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }

  void expect_below(const std::string& name, double value, double tol, bool assertion = true);
  void expect_at_most(const std::string& name, double value, double tol, bool assertion = true);
  void expect_above(const std::string& name, double value, double tol, bool assertion = true);
  /// |value − target| ≤ tol, recorded as the deviation.
  void expect_near(const std::string& name, double value, double target, double tol, bool assertion = true);
  void expect_true(const std::string& name, bool ok, bool assertion = true);

  json& results() { return results_; }
  /// Registers a file written under out_dir (stored relative to it).
  std::filesystem::path output(const std::string& filename);
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  bool passed() const;
  /// Manifest without wall_time, so reruns compare byte-identical.
  json manifest() const;
  /// Writes manifest.json (with wall_time) and returns the full document.
  json finish();

 private:
  void add(Check c);

  std::string command_;
  json config_;
  std::filesystem::path out_dir_;
  json results_ = json::object();
  std::vector<Check> checks_;
  std::vector<std::string> outputs_;
  std::optional<std::uint64_t> seed_;
  std::chrono::steady_clock::time_point start_;
};

std::string version_string();

/// Failure record for a run aborted by an exception.
json failure_record(const std::string& command, const json& config, const std::string& type,
                    const std::string& message);

void write_json(const json& doc, const std::filesystem::path& path);

}  // namespace fracheat::cli
