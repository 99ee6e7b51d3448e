#pragma once

#include <functional>
#include <string>
#include <vector>

#include "report.hpp"

namespace fracheat::cli {

struct Command {
  std::string name;
  std::string help;
  json defaults;
  std::function<void(RunReport&)> run;
};

Command kernel_check_command();
Command operator_check_command();
Command dirichlet_check_command();
Command testfn_build_command();
Command capacity_check_command();
Command she_run_command();
Command she_sweep_command();

/// Merges manifests; returns the exit code.
int run_report(const std::vector<std::filesystem::path>& paths, const std::filesystem::path& out_dir);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fracheat::cli
