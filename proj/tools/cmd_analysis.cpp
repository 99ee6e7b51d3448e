#include <cmath>
#include <cstdint>
#include <fstream>

#include "commands.hpp"
#include "fracheat/capacity.hpp"
#include "fracheat/dirichlet.hpp"
#include "fracheat/error.hpp"
#include "fracheat/measure.hpp"
#include "fracheat/testfn.hpp"

namespace fracheat::cli {

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

// int64 dim, node count, time count; float64 δ, θ; node coordinates; times;
// values in time-major order. Little-endian throughout.
void write_testfn_binary(const TestFunction& tf, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  const auto& grid = *tf.grid;
  put<std::int64_t>(out, grid.dim());
  put<std::int64_t>(out, static_cast<std::int64_t>(grid.size()));
  put<std::int64_t>(out, static_cast<std::int64_t>(tf.times.size()));
  put<double>(out, tf.delta);
  put<double>(out, tf.theta);
  for (const auto& x : grid.nodes())
    for (int a = 0; a < grid.dim(); ++a) put<double>(out, x[a]);
  for (double t : tf.times) put<double>(out, t);
  for (Eigen::Index k = 0; k < tf.values.cols(); ++k)
    for (Eigen::Index i = 0; i < tf.values.rows(); ++i) put<double>(out, tf.values(i, k));
}

void run_testfn_build(RunReport& rep) {
  const json& cfg = rep.config();
  const double theta = cfg.at("theta").get<double>();
  const int dim = cfg.at("dim").get<int>();
  const int k = cfg.at("delta_exp").get<int>();
  double p = cfg.at("p").get<double>();
  if (p == 0.0) p = 1.0 + theta / dim;
  const double delta = std::pow(2.0, -static_cast<double>(k) / theta);
  const ForcingProfile forcing(delta, theta);
  const BallGrid grid(dim, cfg.at("intervals").get<int>());
  const DirichletOperator op = DirichletOperator::assemble(grid, theta);
  AheOptions opts;
  opts.time_steps = cfg.at("time_steps").get<int>();
  opts.check_refinement = cfg.at("check_refinement").get<bool>();
  opts.refinement_tolerance = cfg.at("refinement_tolerance").get<double>();
  TestFunction tf = solve_ahe(forcing, op, opts);
  const LowerBound lb = check_initial_lower_bound(tf);
  const double tau = cfg.at("tau").get<double>();
  if (tau != 1.0) tf = rescale(tf, tau);

  auto& res = rep.results();
  res["delta"] = delta;
  res["delta_theta"] = forcing.scale();
  res["c_delta"] = tf.c_delta;
  res["c_min"] = lb.c_min;
  res["c_min_nodes"] = lb.nodes;
  res["p"] = p;
  res["tau"] = tau;
  rep.expect_above("c_min", lb.c_min, 0.0);
  if (opts.check_refinement) {
    res["refinement_defect"] = tf.refinement_defect;
    rep.expect_below("refinement_defect", tf.refinement_defect, opts.refinement_tolerance);
  }
  const double rhs = rhs_functional(tf, p);
  const double level = kihon_rhs(tf, p);
  res["rhs_functional"] = rhs;
  res["kihon_rhs"] = level;
  // Nested quadrature and the level-set identity must agree.
  rep.expect_below("rhs_quadrature_agreement", std::abs(rhs - level) / level, 1e-3);
  write_testfn_binary(tf, rep.output("testfn.bin"));
}

void run_capacity_check(RunReport& rep) {
  const json& cfg = rep.config();
  const auto path = cfg.at("measure").get<std::string>();
  if (path.empty()) throw InvalidArgument("capacity-check needs --measure FILE");
  const MeasureSpec mu = read_measure(path);
  const double T = cfg.at("T").get<double>();
  const double p = cfg.at("p").get<double>();
  const double theta = cfg.at("theta").get<double>();
  const double gamma = cfg.at("gamma").get<double>();
  const int dim = mu.dim;
  const bool critical = is_critical(p, theta, dim);
  double s_max = cfg.at("sigma_max").get<double>();
  if (s_max <= 0.0) s_max = 0.99 * std::pow(T, 1.0 / theta);
  const double s_min = cfg.at("sigma_min").get<double>();
  const int count = cfg.at("sigma_count").get<int>();
  if (!(s_min > 0.0) || !(s_max > s_min) || count < 2) throw InvalidArgument("need 0 < sigma_min < sigma_max, count >= 2");
  std::vector<double> sigmas;
  for (int i = 0; i < count; ++i) sigmas.push_back(s_min * std::pow(s_max / s_min, i / (count - 1.0)));
  const double res_cfg = cfg.at("search_resolution").get<double>();
  const auto report = necessary_check(mu, T, p, theta, dim, gamma, sigmas,
                                      res_cfg > 0.0 ? std::optional<double>(res_cfg) : std::nullopt);

  auto& res = rep.results();
  res["critical"] = report.critical;
  res["gamma"] = report.gamma_used;
  res["dim"] = dim;
  json rows = json::array();
  std::ofstream csv(rep.output("capacity.csv"));
  csv << "sigma,sup_mass,bound,verdict\r\n";
  csv.precision(17);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const std::string verdict = to_string(report.verdicts[i]);
    rows.push_back({{"sigma", sigmas[i]},
                    {"sup_mass", report.sup_ball_mass[i]},
                    {"bound", report.bound_values[i]},
                    {"verdict", verdict}});
    csv << sigmas[i] << ',' << report.sup_ball_mass[i] << ',' << report.bound_values[i] << ',' << verdict << "\r\n";
    // A violated bound is a finding about μ, not a failed run.
    rep.expect_at_most("sup_mass_sigma_" + std::to_string(i), report.sup_ball_mass[i], report.bound_values[i], false);
  }
  res["rows"] = rows;
  res["verdict"] = report.smallest_violating_sigma ? "violated" : "satisfied";
  if (report.smallest_violating_sigma) {
    res["smallest_violating_sigma"] = *report.smallest_violating_sigma;
    res["largest_violating_sigma"] = *report.largest_violating_sigma;
  }

  if (cfg.at("cutoff_exponent").get<bool>()) {
    // σ-scaling of the cutoff functional against N − θ/(p−1).
    // σ/h stays above 25, where the discrete functional has converged.
    const std::vector<double> cut{0.4, 0.5, 0.63, 0.8, 1.0};
    const Grid grid(dim, 4.0, dim == 1 ? 1024 : 512);
    std::vector<double> values;
    json jv = json::array();
    for (double s : cut) {
      values.push_back(kihon_rhs(build_cutoff(s, theta, grid), p, dim == 1 ? 2048 : 1024));
      jv.push_back({{"sigma", s}, {"kihon_rhs", values.back()}});
    }
    const double fitted = loglog_slope(cut, values);
    const double target = subcritical_exponent(p, theta, dim);
    res["cutoff_rhs"] = jv;
    res["cutoff_exponent"] = {{"fitted", fitted}, {"target", target}};
    rep.expect_near("cutoff_exponent", fitted, target, 0.1 * std::max(std::abs(target), 1.0));
  }
}

}  // namespace

Command testfn_build_command() {
  return {"testfn-build", "Build the adjoint test function for one delta and evaluate its functionals",
          json{{"delta_exp", 7}, {"theta", 2.0}, {"dim", 1}, {"intervals", 64}, {"time_steps", 256}, {"p", 0.0},
               {"tau", 1.0}, {"check_refinement", true}, {"refinement_tolerance", 1e-3}},
          run_testfn_build};
}

Command capacity_check_command() {
  return {"capacity-check", "Compare sup ball masses of a measure with the necessary-condition bound",
          json{{"measure", ""}, {"T", 1.0}, {"p", 2.0}, {"theta", 2.0}, {"gamma", 1.0}, {"sigma_min", 0.01},
               {"sigma_max", 0.0}, {"sigma_count", 16}, {"search_resolution", 0.0}, {"cutoff_exponent", true}},
          run_capacity_check};
}

}  // namespace fracheat::cli
