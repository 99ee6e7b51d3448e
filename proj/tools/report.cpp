#include "report.hpp"

#include <cmath>
#include <fstream>

#include "fracheat/error.hpp"
#include "fracheat/parallel.hpp"

#ifndef FRACHEAT_VERSION
#define FRACHEAT_VERSION "unknown"
#endif

namespace fracheat::cli {

std::string version_string() { return FRACHEAT_VERSION; }

RunReport::RunReport(std::string command, json config, std::filesystem::path out_dir)
    : command_(std::move(command)),
      config_(std::move(config)),
      out_dir_(std::move(out_dir)),
      start_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(out_dir_);
}

void RunReport::add(Check c) {
  // NaN never passes.
  if (std::isnan(c.value)) c.pass = false;
  checks_.push_back(std::move(c));
}

void RunReport::expect_below(const std::string& name, double value, double tol, bool assertion) {
  add({name, value, tol, "<", value < tol, assertion});
}

void RunReport::expect_at_most(const std::string& name, double value, double tol, bool assertion) {
  add({name, value, tol, "<=", value <= tol, assertion});
}

void RunReport::expect_above(const std::string& name, double value, double tol, bool assertion) {
  add({name, value, tol, ">", value > tol, assertion});
}

void RunReport::expect_near(const std::string& name, double value, double target, double tol, bool assertion) {
  const double dev = std::abs(value - target);
  add({name, value, tol, "abs<", dev <= tol, assertion});
  checks_.back().relation = "|value-" + std::to_string(target) + "|<=";
}

void RunReport::expect_true(const std::string& name, bool ok, bool assertion) {
  add({name, ok ? 1.0 : 0.0, 1.0, "==", ok, assertion});
}

std::filesystem::path RunReport::output(const std::string& filename) {
  outputs_.push_back(filename);
  return out_dir_ / filename;
}

bool RunReport::passed() const {
  for (const auto& c : checks_)
    if (c.assertion && !c.pass) return false;
  return true;
}

json RunReport::manifest() const {
  json checks = json::array();
  json failures = json::array();
  for (const auto& c : checks_) {
    json v = std::isfinite(c.value) ? json(c.value) : json(nullptr);
    checks.push_back({{"name", c.name},
                      {"value", v},
                      {"tolerance", c.tolerance},
                      {"relation", c.relation},
                      {"pass", c.pass},
                      {"kind", c.assertion ? "assertion" : "measurement"}});
    if (c.assertion && !c.pass) failures.push_back(c.name);
  }
  json doc = {{"command", command_},
              {"version", version_string()},
              {"config_echo", config_},
              {"threads", thread_count()},
              {"outputs", outputs_},
              {"checks", checks},
              {"results", results_},
              {"status", passed() ? "passed" : "failed"}};
  doc["seed"] = seed_ ? json(*seed_) : json(nullptr);
  if (!failures.empty()) doc["failures"] = failures;
  return doc;
}

json RunReport::finish() {
  json doc = manifest();
  doc["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  write_json(doc, out_dir_ / "manifest.json");
  return doc;
}

json failure_record(const std::string& command, const json& config, const std::string& type,
                    const std::string& message) {
  return {{"command", command},
          {"version", version_string()},
          {"config_echo", config},
          {"status", "error"},
          {"error", {{"type", type}, {"message", message}}}};
}

void write_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace fracheat::cli
