#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "commands.hpp"
#include "fracheat/dirichlet.hpp"
#include "fracheat/error.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/mollifier.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat::cli {

namespace {

FracParams params_from(const json& cfg) {
  FracParams p;
  p.theta = cfg.at("theta").get<double>();
  p.n_dim = cfg.at("dim").get<int>();
  if (cfg.contains("p")) p.p_exponent = cfg.at("p").get<double>();
  p.validate();
  return p;
}

Point random_point(std::mt19937_64& rng, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Point x{u(rng), 0.0};
  if (dim == 2) x[1] = u(rng);
  return x;
}

void run_kernel_check(RunReport& rep) {
  const json& cfg = rep.config();
  const FracParams params = params_from(cfg);
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  rep.set_seed(seed);
  std::mt19937_64 rng(seed);
  const KernelEvaluator kernel(params, cfg.at("resolution").get<int>());
  const int dim = params.n_dim;
  const int count = cfg.at("samples").get<int>();

  std::uniform_real_distribution<double> logt(std::log(1e-2), std::log(10.0));
  std::vector<std::pair<Point, double>> samples;
  for (int i = 0; i < count; ++i) samples.push_back({random_point(rng, dim, -5.0, 5.0), std::exp(logt(rng))});
  const double scaling = kernel.check_scaling(samples);
  rep.results()["scaling_error"] = scaling;
  rep.expect_below("scaling_error", scaling, params.classical() ? 1e-10 : 1e-6);

  if (params.theta == 1.0 || params.theta == 2.0) {
    double worst = 0.0;
    for (const auto& [x, t] : samples) {
      const double exact = kernel.eval_gamma(x, t);
      const double direct = kernel.invert(norm(x, dim), t);
      if (exact > 1e-280) worst = std::max(worst, std::abs(direct - exact) / exact);
    }
    rep.results()["closed_form_error"] = worst;
    rep.expect_below("closed_form_error", worst, 1e-8);
  }

  double fast = 0.0;
  for (const auto& [x, t] : samples) {
    const double ref = kernel.eval_gamma(x, t);
    if (ref > 1e-280) fast = std::max(fast, std::abs(kernel.eval_fast(x, t) - ref) / ref);
  }
  rep.results()["table_error"] = fast;
  rep.expect_below("table_error", fast, 1e-6);

  if (!params.classical()) {
    const auto radii = cfg.at("radii").get<std::vector<double>>();
    const DecayReport d = kernel.check_decay(radii);
    rep.results()["decay"] = {{"slope", d.slope}, {"target", d.target}, {"ratio_min", d.ratio_min},
                              {"ratio_max", d.ratio_max}};
    rep.expect_near("decay_slope", d.slope, d.target, 0.05 * std::abs(d.target));
  }

  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < cfg.at("pairs").get<int>(); ++i) {
    Point a = random_point(rng, dim, -6.0, 6.0), b = random_point(rng, dim, -6.0, 6.0);
    if (norm(a, dim) < norm(b, dim)) std::swap(a, b);
    pairs.push_back({a, b});
  }
  const MonotoneReport mono = kernel.check_radial_monotone(pairs);
  rep.results()["monotone_worst_violation"] = mono.worst_violation;
  rep.expect_true("radial_monotone", mono.ok);

  json masses = json::array();
  for (double t : {0.1, 1.0, 10.0}) {
    const double m = kernel.kernel_mass(t);
    masses.push_back({{"t", t}, {"mass", m}});
    char name[32];
    std::snprintf(name, sizeof name, "mass_error_t%g", t);
    rep.expect_below(name, std::abs(m - 1.0), 1e-6);
  }
  rep.results()["kernel_mass"] = masses;
  kernel.write_radial_table_csv(rep.output("radial_table.csv"));
}

// Sum of random Gaussian bumps.
Field random_smooth_field(std::mt19937_64& rng, const Grid& grid) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), width(0.3, 1.0);
  struct Bump {
    Point c;
    double a, w;
  };
  std::vector<Bump> bumps;
  for (int k = 0; k < 3; ++k)
    bumps.push_back({random_point(rng, grid.dim(), -grid.extent() / 3, grid.extent() / 3), amp(rng), width(rng)});
  return Field::sample(grid, [&](const Point& x) {
    double s = 0.0;
    for (const auto& b : bumps) {
      const double r = norm(x - b.c, grid.dim());
      s += b.a * std::exp(-r * r / (2 * b.w * b.w));
    }
    return s;
  });
}

// Mollified nonnegative step function.
Field random_mollified_field(std::mt19937_64& rng, const Grid& grid, const Mollifier& m) {
  std::uniform_real_distribution<double> level(0.2, 2.0), half(0.3, 1.5);
  const Point c1 = random_point(rng, grid.dim(), -2.0, 2.0), c2 = random_point(rng, grid.dim(), -2.0, 2.0);
  const double r1 = half(rng), r2 = half(rng), a1 = level(rng), a2 = level(rng);
  const Field step = Field::sample(grid, [&](const Point& x) {
    return (norm(x - c1, grid.dim()) < r1 ? a1 : 0.0) + (norm(x - c2, grid.dim()) < r2 ? a2 : 0.0);
  });
  return mollify(step, m);
}

void run_operator_check(RunReport& rep) {
  const json& cfg = rep.config();
  const FracParams params = params_from(cfg);
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  rep.set_seed(seed);
  std::mt19937_64 rng(seed);
  const int dim = params.n_dim;
  const Grid grid(dim, cfg.at("extent").get<double>(), cfg.at("points").get<int>());
  const int pairs = cfg.at("pairs").get<int>();

  double adj = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const Field f = random_smooth_field(rng, grid), g = random_smooth_field(rng, grid);
    adj = std::max(adj, selfadjoint_defect(f, g, params));
  }
  rep.results()["selfadjoint_defect"] = adj;
  rep.expect_below("selfadjoint_defect", adj, 1e-10);

  const double eps = cfg.at("epsilon").get<double>();
  const Mollifier moll(dim, eps, grid.spacing());
  double gap_min = std::numeric_limits<double>::infinity(), scale = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const Field f = random_mollified_field(rng, grid, moll);
    const Field gap = jensen_gap(f, params);
    Field high = f;
    const double q = params.dual_exponent();
    for (double& v : high.values()) v = std::pow(std::max(v, 0.0), q);
    scale = std::max(scale, apply_fraclap_spectral(high, params).max_abs());
    gap_min = std::min(gap_min, gap.min());
  }
  rep.results()["jensen_gap_min"] = gap_min;
  rep.results()["jensen_gap_scale"] = scale;
  rep.expect_above("jensen_gap_min_over_scale", gap_min / scale, -1e-8);

  if (params.classical()) {
    rep.results()["pv_checks"] = "not applicable for theta = 2";
    return;
  }
  std::vector<std::pair<Point, Point>> xy;
  for (int i = 0; i < pairs; ++i)
    xy.push_back({random_point(rng, dim, -1.5 * eps, 1.5 * eps), random_point(rng, dim, -1.5 * eps, 1.5 * eps)});
  const double anti = check_mollifier_antisymmetry(moll, params, xy, 0.05 * eps);
  rep.results()["antisymmetry"] = anti;
  rep.expect_below("antisymmetry", anti, dim == 1 ? 1e-6 : 1e-4);

  PvOptions opts;
  opts.supports.push_back({Point{}, eps});
  const ScalarFunction eta = [&](const Point& x) { return moll(x); };
  std::uniform_real_distribution<double> radius(1.05 * eps, 4.0 * eps), angle(0.0, 2.0 * std::numbers::pi);
  double worst = -std::numeric_limits<double>::infinity();
  const int exterior = cfg.at("exterior_points").get<int>();
  for (int i = 0; i < exterior; ++i) {
    const double r = radius(rng), a = angle(rng);
    const Point x = dim == 1 ? Point{a < std::numbers::pi ? r : -r, 0.0} : Point{r * std::cos(a), r * std::sin(a)};
    worst = std::max(worst, apply_fraclap_pv(eta, x, params, 0.25 * (r - eps), opts));
  }
  rep.results()["exterior_max"] = worst;
  rep.expect_below("exterior_sign_max", worst, 0.0);
}

void run_dirichlet_check(RunReport& rep) {
  const json& cfg = rep.config();
  const double theta = cfg.at("theta").get<double>();
  const int dim = cfg.at("dim").get<int>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  rep.set_seed(seed);
  const BallGrid grid(dim, cfg.at("intervals").get<int>());
  const DirichletOperator op = DirichletOperator::assemble(grid, theta);
  const auto& ev = op.eigenvalues();
  json head = json::array();
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(8, ev.size()); ++k) head.push_back(ev[k]);
  rep.results()["eigenvalues_head"] = head;
  rep.results()["nodes"] = grid.size();
  rep.expect_below("symmetry_defect", op.symmetry_defect(), 1e-12);
  rep.expect_below("orthonormality_defect", op.orthonormality_defect(), 1e-10);
  rep.expect_above("lambda1_positive", ev[0], 0.0);
  if (theta == 2.0) {
    // Dirichlet Laplacian on the unit ball: (π/2)², π² in 1D; j01², j11² in 2D.
    const double l1 = dim == 1 ? std::pow(std::numbers::pi / 2, 2) : std::pow(2.404825557695773, 2);
    const double l2 = dim == 1 ? std::pow(std::numbers::pi, 2) : std::pow(3.831705970207512, 2);
    rep.expect_below("lambda1_rel_error", std::abs(ev[0] - l1) / l1, 0.02);
    rep.expect_below("lambda2_rel_error", std::abs(ev[1] - l2) / l2, 0.02);
  }

  const auto samples = sample_two_sided(op, cfg.at("samples").get<std::size_t>(), seed,
                                        cfg.at("t_min").get<double>(), cfg.at("t_max").get<double>());
  const auto bands = verify_two_sided(op, samples, cfg.at("c_candidates").get<std::vector<double>>());
  json jb = json::array();
  const TwoSidedBand* best = nullptr;
  for (const auto& b : bands) {
    jb.push_back({{"c", b.c}, {"ratio_min", b.ratio_min}, {"ratio_max", b.ratio_max}, {"samples", b.samples}});
    if (std::isfinite(b.ratio_max) && b.ratio_max > 0 &&
        (!best || b.ratio_min / b.ratio_max > best->ratio_min / best->ratio_max))
      best = &b;
  }
  rep.results()["two_sided_bands"] = jb;
  rep.expect_true("two_sided_band_finite", best != nullptr);
  if (best) {
    rep.results()["best_c"] = best->c;
    rep.expect_above("two_sided_ratio_min", best->ratio_min, 1e-3);
  }

  // Semigroup property of the discrete propagator.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) v[static_cast<Eigen::Index>(i)] = grid.boundary_distance()[i];
  const Eigen::VectorXd a = op.propagate(op.propagate(v, 0.05), 0.1);
  const Eigen::VectorXd b = op.propagate(v, 0.15);
  const double semi = (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
  rep.results()["semigroup_defect"] = semi;
  rep.expect_below("semigroup_defect", semi, 1e-10);
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Command kernel_check_command() {
  return {"kernel-check", "Scaling, tail, monotonicity and mass checks of the fractional heat kernel",
          json{{"theta", 1.0}, {"dim", 1}, {"resolution", 4096}, {"samples", 50}, {"pairs", 50}, {"seed", 1},
               {"radii", {10.0, 20.0, 40.0, 80.0, 160.0, 200.0}}},
          run_kernel_check};
}

Command operator_check_command() {
  return {"operator-check", "Self-adjointness, Jensen gap, antisymmetry and exterior sign of the operator",
          json{{"theta", 1.0}, {"dim", 1}, {"p", 2.0}, {"pairs", 20}, {"seed", 1}, {"points", 4096},
               {"extent", 8.0}, {"epsilon", 0.5}, {"exterior_points", 50}},
          run_operator_check};
}

Command dirichlet_check_command() {
  return {"dirichlet-check", "Eigenvalues, two-sided estimate and semigroup checks on the unit ball",
          json{{"theta", 2.0}, {"dim", 1}, {"intervals", 64}, {"samples", 200}, {"seed", 1}, {"t_min", 0.02},
               {"t_max", 1.0}, {"c_candidates", {0.25, 0.5, 1.0, 2.0, 4.0}}},
          run_dirichlet_check};
}

}  // namespace fracheat::cli
