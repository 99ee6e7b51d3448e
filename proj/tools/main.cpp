#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fracheat/error.hpp"

using namespace fracheat::cli;

namespace {

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (char& c : s)
    if (c == '_') c = '-';
  return "--" + s;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Converts a flag string to the JSON type of the default.
json coerce(const std::string& key, const std::string& text, const json& like) {
  try {
    if (like.is_boolean()) {
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw UsageError("");
    }
    std::size_t used = 0;
    if (like.is_number_integer()) {
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw UsageError("");
      return v;
    }
    if (like.is_number()) {
      const double v = std::stod(text, &used);
      if (used != text.size()) throw UsageError("");
      return v;
    }
    if (like.is_array()) return json::parse(text);
    return text;
  } catch (const std::exception&) {
    throw UsageError("bad value '" + text + "' for " + flag_name(key));
  }
}

json load_config(const Command& cmd, const std::string& path, const std::map<std::string, std::string>& flags) {
  json cfg = cmd.defaults;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config " + path);
    json user;
    try {
      user = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("config " + path + " is not valid JSON: " + e.what());
    }
    if (!user.is_object()) throw UsageError("config must be a JSON object");
    for (auto& [k, v] : user.items()) {
      if (!cfg.contains(k)) throw UsageError("unknown config key '" + k + "'");
      if (cfg[k].is_number() && !v.is_number()) throw UsageError("config key '" + k + "' must be numeric");
      if (cfg[k].is_number_integer() && !v.is_number_integer())
        throw UsageError("config key '" + k + "' must be an integer");
      cfg[k] = v;
    }
  }
  for (const auto& [k, text] : flags) cfg[k] = coerce(k, text, cmd.defaults[k]);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Command> commands{kernel_check_command(),   operator_check_command(), dirichlet_check_command(),
                                testfn_build_command(),   capacity_check_command(), she_run_command(),
                                she_sweep_command()};

  CLI::App app{"Fractional semilinear heat equation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  struct Bound {
    CLI::App* sub = nullptr;
    std::string config_path;
    std::string out_dir;
    bool print_defaults = false;
    std::map<std::string, std::string> raw;
  };
  std::vector<Bound> bound(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto& b = bound[i];
    b.sub = app.add_subcommand(commands[i].name, commands[i].help);
    b.sub->add_option("--config", b.config_path, "JSON config merged over the defaults");
    b.sub->add_option("--out", b.out_dir, "Output directory (default fracheat-out/<command>)");
    b.sub->add_flag("--print-defaults", b.print_defaults, "Print the default config and exit");
    for (auto& [key, value] : commands[i].defaults.items()) {
      if (value.is_object()) continue;
      auto* opt = b.sub->add_option_function<std::string>(
          flag_name(key), [&b, key = key](const std::string& s) { b.raw[key] = s; }, "default: " + value.dump());
      opt->type_name(value.is_boolean() ? "BOOL" : value.is_number() ? "NUM" : value.is_array() ? "JSON" : "TEXT");
    }
  }
  std::vector<std::string> report_paths;
  std::string report_out = "fracheat-out/report";
  auto* report = app.add_subcommand("report", "Merge run manifests into a markdown/CSV bundle");
  report->add_option("manifests", report_paths, "manifest.json files from earlier runs");
  report->add_option("--out", report_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (report->parsed()) {
    try {
      return run_report({report_paths.begin(), report_paths.end()}, report_out);
    } catch (const std::exception& e) {
      std::cerr << "report: " << e.what() << '\n';
      return 2;
    }
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto& b = bound[i];
    if (!b.sub->parsed()) continue;
    const Command& cmd = commands[i];
    if (b.print_defaults) {
      std::cout << cmd.defaults.dump(2) << '\n';
      return 0;
    }
    json cfg;
    try {
      cfg = load_config(cmd, b.config_path, b.raw);
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << "\n\n" << b.sub->help();
      return 1;
    }
    const std::filesystem::path out = b.out_dir.empty() ? std::filesystem::path("fracheat-out") / cmd.name : std::filesystem::path(b.out_dir);
    auto fail = [&](const std::string& type, const std::string& message) {
      const json rec = failure_record(cmd.name, cfg, type, message);
      std::cout << rec.dump(2) << '\n';
      std::error_code ec;
      std::filesystem::create_directories(out, ec);
      if (!ec) write_json(rec, out / "failure.json");
      return 2;
    };
    try {
      RunReport rep(cmd.name, cfg, out);
      cmd.run(rep);
      const json doc = rep.finish();
      std::cout << doc.dump(2) << '\n';
      return rep.passed() ? 0 : 2;
    } catch (const fracheat::InvalidArgument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    } catch (const fracheat::DomainTooSmall& e) {
      return fail("DomainTooSmall", e.what());
    } catch (const fracheat::GridTooCoarse& e) {
      return fail("GridTooCoarse", e.what());
    } catch (const fracheat::ConvergenceError& e) {
      return fail("ConvergenceError", e.what());
    } catch (const fracheat::NumericalError& e) {
      return fail("NumericalError", e.what());
    } catch (const std::exception& e) {
      return fail("Error", e.what());
    }
  }
  return 1;
}
