#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "commands.hpp"

namespace fracheat::cli {

namespace {

struct Row {
  std::string quantity;
  std::string group;
  double fitted = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string group_key(const json& cfg, std::initializer_list<const char*> keys) {
  std::string s;
  for (const char* k : keys) {
    if (!s.empty()) s += ", ";
    s += std::string(k) + "=" + (cfg.contains(k) ? cfg.at(k).dump() : "?");
  }
  return s;
}

Row fitted_row(std::string quantity, std::string group, const std::vector<double>& x, const std::vector<double>& y,
               double target) {
  Row r{std::move(quantity), std::move(group), loglog_slope(x, y), target, 0.1 * std::max(std::abs(target), 1e-12)};
  r.pass = std::abs(r.fitted - r.target) <= r.tolerance;
  return r;
}

}  // namespace

int run_report(const std::vector<std::filesystem::path>& paths, const std::filesystem::path& out_dir) {
  std::vector<std::pair<std::string, json>> docs;
  std::vector<std::string> errors;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) {
      errors.push_back(p.string() + ": missing");
      continue;
    }
    try {
      json d = json::parse(in);
      if (!d.contains("command") || !d.contains("config_echo")) throw std::runtime_error("not a run manifest");
      docs.emplace_back(p.string(), std::move(d));
    } catch (const std::exception& e) {
      errors.push_back(p.string() + ": " + e.what());
    }
  }

  std::vector<Row> rows;
  std::map<std::string, std::vector<std::pair<double, double>>> critical_groups, sweep_groups;
  std::map<std::string, double> critical_targets, sweep_targets;
  for (const auto& [path, d] : docs) {
    const std::string cmd = d["command"];
    const json& cfg = d["config_echo"];
    const json res = d.value("results", json::object());
    if (cmd == "kernel-check" && res.contains("decay")) {
      Row r{"kernel tail exponent", group_key(cfg, {"theta", "dim"}), res["decay"]["slope"], res["decay"]["target"], 0.0};
      r.tolerance = 0.05 * std::abs(r.target);
      r.pass = std::abs(r.fitted - r.target) <= r.tolerance;
      rows.push_back(r);
    } else if (cmd == "capacity-check" && res.contains("cutoff_exponent")) {
      const double target = res["cutoff_exponent"]["target"];
      Row r{"cutoff sigma exponent", group_key(cfg, {"theta", "p"}) + ", dim=" + res["dim"].dump(),
            res["cutoff_exponent"]["fitted"], target, 0.1 * std::max(std::abs(target), 1.0)};
      r.pass = std::abs(r.fitted - r.target) <= r.tolerance;
      rows.push_back(r);
    } else if (cmd == "testfn-build" && res.contains("rhs_functional")) {
      const std::string key = group_key(cfg, {"theta", "dim", "tau"}) + ", p=" + res["p"].dump();
      critical_groups[key].push_back({res["c_delta"], res["rhs_functional"]});
      critical_targets[key] = 1.0 / (res["p"].get<double>() - 1.0);
    } else if (cmd == "she-sweep" && res.contains("predicted_time_exponent")) {
      const std::string key = group_key(cfg, {"theta", "dim", "p"}) + ", shape=" + cfg["shape"].get<std::string>();
      sweep_groups[key].push_back({res["t_end"], res["threshold_mass"]});
      sweep_targets[key] = res["predicted_time_exponent"];
    }
  }
  auto fit_groups = [&](const auto& groups, const auto& targets, const std::string& name) {
    for (const auto& [key, pts] : groups) {
      if (pts.size() < 2) continue;
      std::vector<double> x, y;
      for (const auto& [a, b] : pts) {
        x.push_back(a);
        y.push_back(b);
      }
      rows.push_back(fitted_row(name, key, x, y, targets.at(key)));
    }
  };
  fit_groups(critical_groups, critical_targets, "critical rhs slope vs c_delta");
  fit_groups(sweep_groups, sweep_targets, "threshold mass exponent vs T");

  std::filesystem::create_directories(out_dir);
  std::ofstream md(out_dir / "report.md");
  md << "# fracheat report\n\n## Runs\n\n| manifest | command | status | assertions passed |\n|---|---|---|---|\n";
  for (const auto& [path, d] : docs) {
    int total = 0, ok = 0;
    for (const auto& c : d.value("checks", json::array()))
      if (c.value("kind", "") == "assertion") {
        ++total;
        ok += c.value("pass", false) ? 1 : 0;
      }
    md << "| " << path << " | " << d["command"].get<std::string>() << " | " << d.value("status", "?") << " | " << ok
       << "/" << total << " |\n";
  }
  md << "\n## Fitted exponents\n\n| quantity | group | fitted | target | tolerance | pass |\n|---|---|---|---|---|---|\n";
  std::ofstream csv(out_dir / "report.csv");
  csv << "quantity,group,fitted,target,tolerance,pass\r\n";
  json summary_rows = json::array();
  for (const auto& r : rows) {
    md << "| " << r.quantity << " | " << r.group << " | " << num(r.fitted) << " | " << num(r.target) << " | "
       << num(r.tolerance) << " | " << (r.pass ? "yes" : "no") << " |\n";
    std::string g = r.group;
    for (std::size_t i = 0; (i = g.find('"', i)) != std::string::npos; i += 2) g.insert(i, 1, '"');
    csv << r.quantity << ",\"" << g << "\"," << r.fitted << ',' << r.target << ',' << r.tolerance << ','
        << (r.pass ? "true" : "false") << "\r\n";
    summary_rows.push_back({{"quantity", r.quantity},
                            {"group", r.group},
                            {"fitted", r.fitted},
                            {"target", r.target},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass}});
  }
  if (!errors.empty()) {
    md << "\n## Errors\n\n";
    for (const auto& e : errors) md << "- " << e << '\n';
  }
  const json summary = {{"command", "report"},
                        {"version", version_string()},
                        {"manifests", docs.size()},
                        {"exponents", summary_rows},
                        {"errors", errors},
                        {"outputs", {"report.md", "report.csv"}}};
  std::cout << summary.dump(2) << '\n';
  return errors.empty() ? 0 : 2;
}

}  // namespace fracheat::cli
