// One PASS/FAIL line per acceptance criterion. Tolerances and runtime limits
// are fixed here; `--allow-fail N` keeps the exit code at 0 when only the
// listed criteria fail, `--only N` runs a subset.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fracheat/capacity.hpp"
#include "fracheat/dirichlet.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/mollifier.hpp"
#include "fracheat/solver.hpp"
#include "fracheat/spectral.hpp"
#include "fracheat/testfn.hpp"
#include "oracles.hpp"

using namespace fracheat;

namespace {

FracParams make(double theta, int dim, double p = 2.0) {
  FracParams f;
  f.theta = theta;
  f.n_dim = dim;
  f.p_exponent = p;
  return f;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double delta_for(int k, double theta) { return std::pow(2.0, -k / theta); }

// 1. Gaussian and Cauchy closed forms.
Outcome closed_forms() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> logt(std::log(0.1), std::log(5.0));
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const int dim = 1 + s % 2;
    const double theta = s % 4 < 2 ? 2.0 : 1.0;
    const Point x = oracle::random_point(rng, dim, -5.0, 5.0);
    const double t = std::exp(logt(rng)), r2 = norm(x, dim) * norm(x, dim);
    const double exact = theta == 2.0
                             ? std::exp(-r2 / (4 * t)) / std::pow(4 * std::numbers::pi * t, dim / 2.0)
                             : (dim == 1 ? t / (std::numbers::pi * (t * t + r2))
                                         : t / (2 * std::numbers::pi * std::pow(t * t + r2, 1.5)));
    const double got = shared_kernel(make(theta, dim)).eval_gamma(x, t);
    worst = std::max(worst, std::abs(got - exact) / exact);
  }
  return {worst < 1e-8, fmt("max rel err %.2e (tol 1e-8), 100 samples", worst)};
}

// 2. Γ(x,t) = t^{-N/θ} Γ(x t^{-1/θ}, 1).
Outcome scaling() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> logt(std::log(0.25), std::log(4.0));
  bool ok = true;
  std::string detail;
  for (double theta : {1.0, 1.3, 1.5, 1.7, 2.0}) {
    std::vector<std::pair<Point, double>> samples;
    for (int i = 0; i < 50; ++i) samples.push_back({oracle::random_point(rng, 1, -4.0, 4.0), std::exp(logt(rng))});
    const double err = shared_kernel(make(theta, 1)).check_scaling(samples);
    const double tol = theta == 2.0 ? 1e-10 : 1e-6;
    ok = ok && err < tol;
    detail += fmt("θ=%.1f %.1e ", theta, err);
  }
  return {ok, detail + "(tol 1e-6, 1e-10 at θ=2)"};
}

// 3. Tail exponent −(N+θ).
Outcome decay() {
  const std::vector<double> radii{10, 15, 20, 30, 50, 70, 100, 150, 200};
  bool ok = true;
  std::string detail;
  for (int dim : {1, 2})
    for (double theta : {1.0, 1.5}) {
      const DecayReport d = shared_kernel(make(theta, dim)).check_decay(radii);
      const double rel = std::abs(d.slope - d.target) / std::abs(d.target);
      ok = ok && rel < 0.05;
      detail += fmt("N=%d θ=%.1f slope %.4f ", dim, theta, d.slope);
    }
  return {ok, detail + "(tol 5%)"};
}

Field random_smooth_field(std::mt19937_64& rng, const Grid& grid) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), width(0.3, 1.0);
  std::vector<std::array<double, 4>> bumps;
  for (int k = 0; k < 3; ++k) {
    const Point c = oracle::random_point(rng, grid.dim(), -grid.extent() / 3, grid.extent() / 3);
    bumps.push_back({c[0], c[1], amp(rng), width(rng)});
  }
  return Field::sample(grid, [&](const Point& x) {
    double s = 0.0;
    for (const auto& b : bumps) {
      const double r = norm(x - Point{b[0], b[1]}, grid.dim());
      s += b[2] * std::exp(-r * r / (2 * b[3] * b[3]));
    }
    return s;
  });
}

// 4. Spectral self-adjointness and the Jensen gap.
Outcome selfadjoint_and_jensen() {
  std::mt19937_64 rng(104);
  double defect = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int dim = 1 + i % 2;
    const Grid g(dim, 8.0, dim == 1 ? 1024 : 128);
    const double theta = 0.5 + 1.5 * (i % 4) / 3.0;
    defect = std::max(defect, selfadjoint_defect(random_smooth_field(rng, g), random_smooth_field(rng, g),
                                                 make(theta, dim)));
  }

  const Grid g(1, 8.0, 4096);
  const Mollifier m(1, 0.5, g.spacing());
  std::uniform_real_distribution<double> level(0.2, 2.0), half(0.3, 1.5);
  double worst = std::numeric_limits<double>::infinity();
  for (double theta : {1.0, 2.0})
    for (double p : {2.0, 3.0})
      for (int i = 0; i < 20; ++i) {
        const Point c1 = oracle::random_point(rng, 1, -2.0, 2.0), c2 = oracle::random_point(rng, 1, -2.0, 2.0);
        const double r1 = half(rng), r2 = half(rng), a1 = level(rng), a2 = level(rng);
        const Field f = mollify(Field::sample(g, [&](const Point& x) {
                                  return (std::abs(x[0] - c1[0]) < r1 ? a1 : 0.0) + (std::abs(x[0] - c2[0]) < r2 ? a2 : 0.0);
                                }),
                                m);
        double scale = 0.0;
        for (double v : f.values()) scale = std::max(scale, std::pow(v, p / (p - 1)));
        worst = std::min(worst, jensen_gap(f, make(theta, 1, p)).min() / scale);
      }
  return {defect < 1e-10 && worst >= -1e-8,
          fmt("self-adjoint defect %.2e (tol 1e-10); Jensen min/scale %.2e (tol -1e-8), 80 fields", defect, worst)};
}

// 5. Mollifier antisymmetry and the exterior sign.
Outcome mollifier_identities() {
  std::mt19937_64 rng(105);
  std::vector<std::pair<Point, Point>> p1, p2;
  for (int i = 0; i < 20; ++i) {
    p1.push_back({oracle::random_point(rng, 1, -0.75, 0.75), oracle::random_point(rng, 1, -0.75, 0.75)});
    p2.push_back({oracle::random_point(rng, 2, -0.75, 0.75), oracle::random_point(rng, 2, -0.75, 0.75)});
  }
  const double a1 = check_mollifier_antisymmetry(Mollifier(1, 0.5, 1.0 / 512), make(1.0, 1), p1, 0.025);
  const double a2 = check_mollifier_antisymmetry(Mollifier(2, 0.5, 1.0 / 32), make(1.5, 2), p2, 0.025);

  const Mollifier m1(1, 1.0, 1.0 / 64), m2(2, 1.0, 1.0 / 16);
  PvOptions opts;
  opts.supports.push_back({Point{}, 1.0});
  std::uniform_real_distribution<double> radius(1.05, 4.0), angle(0.0, 2 * std::numbers::pi);
  int negative = 0;
  double largest = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const int dim = 1 + i % 2;
    const double theta = i % 5 < 2 ? 1.0 : (i % 5 < 4 ? 1.5 : 0.5);
    const double r = radius(rng), phi = angle(rng);
    const Point x = dim == 1 ? Point{std::cos(phi) > 0 ? r : -r, 0} : Point{r * std::cos(phi), r * std::sin(phi)};
    const Mollifier& m = dim == 1 ? m1 : m2;
    const double v = apply_fraclap_pv([&](const Point& y) { return m(y); }, x, make(theta, dim), 0.25 * (r - 1), opts);
    largest = std::max(largest, v);
    negative += v < 0;
  }
  return {a1 < 1e-6 && a2 < 1e-4 && negative == 50,
          fmt("antisymmetry 1D %.2e (tol 1e-6), 2D %.2e (tol 1e-4); exterior negative %d/50 (max %.2e)", a1, a2, negative,
              largest)};
}

// 6. Dirichlet eigenvalues and the two-sided band.
Outcome dirichlet() {
  const double pi = std::numbers::pi;
  const DirichletOperator op2 = DirichletOperator::assemble(BallGrid(1, 64), 2.0);
  const double e0 = std::abs(op2.eigenvalues()[0] / (pi * pi / 4) - 1);
  const double e1 = std::abs(op2.eigenvalues()[1] / (pi * pi) - 1);
  bool ok = e0 < 0.02 && e1 < 0.02;
  std::string detail = fmt("λ1 err %.2f%%, λ2 err %.2f%% (tol 2%%); ", 100 * e0, 100 * e1);
  for (double theta : {2.0, 1.0}) {
    const DirichletOperator op = theta == 2.0 ? op2 : DirichletOperator::assemble(BallGrid(1, 64), theta);
    const auto band = verify_two_sided(op, sample_two_sided(op, 200, 7), {1.0})[0];
    const bool good = band.samples == 200 && std::isfinite(band.ratio_max) && band.ratio_min > 1e-3;
    ok = ok && good;
    detail += fmt("θ=%.0f band [%.3g, %.3g] ", theta, band.ratio_min, band.ratio_max);
  }
  return {ok, detail + "(c=1, 200 samples, min > 1e-3)"};
}

// 7. Lower bound of φ_δ(·,0) on B(0,δ) across a δ-sweep.
Outcome lower_bound_sweep() {
  const DirichletOperator op = DirichletOperator::assemble(BallGrid(1, 64), 2.0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::string detail;
  for (int k = 7; k <= 10; ++k) {
    const TestFunction tf = solve_ahe(ForcingProfile(delta_for(k, 2.0), 2.0), op);
    const double c = check_initial_lower_bound(tf).c_min;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    detail += fmt("k=%d %.4f ", k, c);
  }
  return {lo > 0.0 && hi / lo < 3.0, detail + fmt("ratio %.3f (tol < 3)", hi / lo)};
}

// 8. Critical scaling of the rhs functional against c_δ, and τ-independence.
Outcome critical_scaling() {
  bool ok = true;
  std::string detail;
  for (double theta : {2.0, 1.0}) {
    const double p = 1.0 + theta;  // critical exponent for N = 1
    const DirichletOperator op = DirichletOperator::assemble(BallGrid(1, 64), theta);
    std::vector<double> cs, vals;
    double tau_err = 0.0;
    for (int k = 7; k <= 12; ++k) {
      const double d = delta_for(k, theta);
      const TestFunction tf = solve_ahe(ForcingProfile(d, theta), op);
      cs.push_back(c_delta(d, theta));
      vals.push_back(rhs_functional(tf, p));
      if (k == 7)
        for (double tau : {0.6, 0.8}) tau_err = std::max(tau_err, std::abs(rhs_functional(rescale(tf, tau), p) / vals[0] - 1));
    }
    const double slope = oracle::loglog_slope(cs, vals), target = 1.0 / (p - 1);
    ok = ok && std::abs(slope - target) < 0.1 * target && tau_err < 0.05;
    detail += fmt("θ=%.0f slope %.3f vs %.3f, τ dev %.2f%%; ", theta, slope, target, 100 * tau_err);
  }
  return {ok, detail + "(tol 10% / 5%)"};
}

// 9. σ-exponent of the cutoff functional.
Outcome subcritical_scaling() {
  const std::vector<double> sigmas{0.4, 0.5, 0.63, 0.8, 1.0};
  bool ok = true;
  std::string detail;
  struct Case {
    int dim;
    double theta, p;
  };
  for (const Case c : {Case{1, 2.0, 2.0}, Case{1, 1.0, 3.0}, Case{2, 2.0, 2.0}}) {
    const Grid g = c.dim == 1 ? Grid(1, 4.0, 1024) : Grid(2, 2.5, 512);
    std::vector<double> vals;
    for (double s : sigmas) vals.push_back(kihon_rhs(build_cutoff(s, c.theta, g), c.p));
    const double slope = oracle::loglog_slope(sigmas, vals), target = subcritical_exponent(c.p, c.theta, c.dim);
    ok = ok && std::abs(slope - target) <= 0.1 * std::max(std::abs(target), 1.0);
    detail += fmt("(%d,%.0f,%.0f) %.4f vs %.1f; ", c.dim, c.theta, c.p, slope, target);
  }
  return {ok, detail + "(tol 10%, absolute 0.1 at target 0)"};
}

struct SmallCase {
  std::string label;
  SolverConfig config;
  MeasureSpec mu;
};

std::vector<SmallCase> small_cases() {
  std::vector<SmallCase> out;
  auto base = [](double theta, int dim, double p, Grid g, double T) {
    SolverConfig c;
    c.params = make(theta, dim, p);
    c.grid = g;
    c.t_end = T;
    c.dt_init = T / 256;
    return c;
  };
  out.push_back({"θ=2 p=3 atom", base(2.0, 1, 3.0, Grid(1, 16.0, 2048), 1.0), MeasureSpec::single_atom(1, Point{0.3, 0}, 0.5)});
  MeasureSpec two = MeasureSpec::single_atom(1, Point{-1.0, 0}, 0.2);
  two.atoms.push_back({Point{1.0, 0}, 0.3});
  out.push_back({"θ=2 p=2 two atoms", base(2.0, 1, 2.0, Grid(1, 16.0, 2048), 1.0), two});
  MeasureSpec box;
  box.dim = 1;
  box.densities.push_back({BoxRegion{Point{-1, 0}, Point{1, 0}}, 0.3});
  out.push_back({"θ=2 p=3 box", base(2.0, 1, 3.0, Grid(1, 16.0, 2048), 1.0), box});
  out.push_back({"θ=1.5 p=3 atom", base(1.5, 1, 3.0, Grid(1, 32.0, 16384), 1.0),
                 MeasureSpec::single_atom(1, Point{0.0, 0}, 0.3)});
  out.push_back({"θ=2 N=2 p=2.5 atom", base(2.0, 2, 2.5, Grid(2, 6.0, 512), 0.5),
                 MeasureSpec::single_atom(2, Point{0.2, -0.1}, 0.3)});
  return out;
}

// 10. Integral residual small ⇒ weak residual small.
Outcome weak_implication() {
  int premises = 0, counterexamples = 0;
  double worst_int = 0.0, worst_weak = 0.0;
  for (const auto& c : small_cases()) {
    const Trajectory tr = integrate(c.config, c.mu);
    const double ir = integral_residual(tr);
    worst_int = std::max(worst_int, ir);
    if (tr.status != RunStatus::completed || ir >= 1e-3) continue;
    ++premises;
    for (const auto& w : standard_test_bank(c.config)) {
      const double wr = weak_residual(tr, w, c.mu);
      worst_weak = std::max(worst_weak, wr);
      counterexamples += wr >= 1e-2;
    }
  }
  return {premises > 0 && counterexamples == 0,
          fmt("premise held %d/5 (max integral %.1e), counterexamples %d (max weak %.1e, tol 1e-2)", premises, worst_int,
              counterexamples, worst_weak)};
}

// 11. Solver oracles.
Outcome solver_oracles() {
  bool ok = true;
  std::string detail;
  {
    SolverConfig c;
    c.params = make(2.0, 1, 2.0);
    c.grid = Grid(1, 4.0, 64);
    c.monitor_domain = false;
    c.t0 = 1e-4;
    MeasureSpec mu;
    mu.densities.push_back({BoxRegion{Point{-4, 0}, Point{4, 0}}, 2.0});
    const double exact = c.t0 + std::pow(2.0, 1 - 2.0) / (2.0 - 1);
    const Trajectory tr = integrate(c, mu);
    const double rel = std::abs(tr.t_blow - exact) / exact;
    ok = ok && tr.status == RunStatus::blew_up && rel < 0.05;
    detail += fmt("blow-up %.4f vs %.4f; ", tr.t_blow, exact);
  }
  double lin = 0.0;
  for (double theta : {2.0, 1.5}) {
    SolverConfig c;
    c.params = make(theta, 1, 3.0);
    c.grid = theta == 2.0 ? Grid(1, 16.0, 2048) : Grid(1, 32.0, 16384);
    c.nonlinear = false;
    const MeasureSpec mu = MeasureSpec::single_atom(1, Point{0.3, 0}, 0.5);
    const Trajectory tr = integrate(c, mu);
    for (std::size_t k = 0; k < tr.states.size(); k += 7) {
      const Field ref = mollify_initial(mu, tr.times[k], c.grid, c.params);
      for (std::size_t i = 0; i < ref.size(); ++i)
        lin = std::max(lin, std::abs(ref[i] - tr.states[k][i]) / tr.states[0].max());
    }
  }
  ok = ok && lin < 1e-6;
  detail += fmt("linear %.1e; ", lin);
  {
    SolverConfig c;
    c.params = make(2.0, 1, 3.0);
    c.grid = Grid(1, 16.0, 2048);
    const MeasureSpec mu = MeasureSpec::single_atom(1, Point{0.3, 0}, 0.5);
    const Trajectory a = integrate(c, mu);
    c.dt_init = c.t_end / 1024;
    const Trajectory b = picard_duhamel(c, mu, c.max_iter);
    double d = 0.0;
    for (std::size_t i = 0; i < a.states.back().size(); ++i)
      d = std::max(d, std::abs(a.states.back()[i] - b.states.back()[i]));
    d /= a.states.back().max_abs();
    ok = ok && a.status == RunStatus::completed && b.status == RunStatus::completed && d < 1e-3;
    detail += fmt("two-scheme %.1e ", d);
  }
  return {ok, detail + "(tol 5%, 1e-6, 1e-3)"};
}

// 12. One-sided stress test of the necessary condition and the threshold-mass scaling.
Outcome threshold_stress() {
  const FracParams params = make(2.0, 1, 2.0);
  const double a = subcritical_exponent(params.p_exponent, params.theta, params.n_dim);
  struct Shape {
    std::string label;
    MeasureSpec mu;
    bool dirac;
  };
  MeasureSpec pair = MeasureSpec::single_atom(1, Point{-0.5, 0}, 0.5);
  pair.atoms.push_back({Point{0.5, 0}, 0.5});
  const std::vector<Shape> shapes{{"unit atom", MeasureSpec::single_atom(1, Point{}, 1.0), true},
                                  {"atom m=2", MeasureSpec::single_atom(1, Point{0.5, 0}, 2.0), true},
                                  {"two atoms", pair, false}};
  const std::vector<double> horizons{0.25, 0.5, 1.0, 2.0};

  auto config_for = [&](double T) {
    SolverConfig c;
    c.params = params;
    c.grid = Grid(1, 32.0, 4096);
    c.t_end = T;
    c.dt_init = T / 256;
    return c;
  };
  // Violation ratio at scale λ: max over σ ≤ T^{1/θ} of λ·sup μ(B(x,σ))/σ^a,
  // attained at σ = T^{1/θ} because a < 0 and the ball mass grows with σ.
  auto ratio = [&](const MeasureSpec& mu, double lambda, double T) {
    const double s = std::pow(T, 1 / params.theta);
    return lambda * sup_ball_mass(mu, s, s / 16) / std::pow(s, a);
  };

  struct Record {
    std::size_t shape;
    double T, lambda_star;
    std::vector<SweepRun> runs;
  };
  std::vector<Record> records;
  bool monotone = true;
  for (std::size_t si = 0; si < shapes.size(); ++si)
    for (double T : horizons) {
      const double mass = shapes[si].mu.atoms[0].mass + (shapes[si].dirac ? 0.0 : shapes[si].mu.atoms[1].mass);
      const SweepResult r = threshold_sweep(shapes[si].mu, 0.0, 24.0 / (mass * std::sqrt(T)), config_for(T), 12);
      auto runs = r.runs;
      std::sort(runs.begin(), runs.end(), [](const SweepRun& x, const SweepRun& y) { return x.lambda < y.lambda; });
      bool blown = false;
      for (const auto& run : runs) {
        if (blown && run.status != RunStatus::blew_up) monotone = false;
        blown = blown || run.status == RunStatus::blew_up;
      }
      records.push_back({si, T, r.lambda_star, r.runs});
    }

  // Calibration: the largest violation ratio found at threshold.
  double gamma_hat = 0.0;
  for (const auto& rec : records) gamma_hat = std::max(gamma_hat, ratio(shapes[rec.shape].mu, rec.lambda_star, rec.T));

  int checked = 0, survivors = 0;
  for (const auto& rec : records) {
    const MeasureSpec& mu = shapes[rec.shape].mu;
    for (const auto& run : rec.runs)
      if (ratio(mu, run.lambda, rec.T) >= 10 * gamma_hat) {
        ++checked;
        survivors += run.status != RunStatus::blew_up;
      }
    // One run exactly at the 10× margin for every configuration.
    const double lambda = 10 * gamma_hat / ratio(mu, 1.0, rec.T);
    ++checked;
    survivors += integrate(config_for(rec.T), mu.scaled(lambda)).status != RunStatus::blew_up;
  }

  // Threshold mass of a Dirac against T: exponent N/θ − 1/(p−1).
  std::vector<double> ts, masses;
  bool decreasing = true;
  for (std::size_t si = 0; si < shapes.size(); ++si) {
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& rec : records)
      if (rec.shape == si) {
        decreasing = decreasing && rec.lambda_star < prev;
        prev = rec.lambda_star;
        if (shapes[si].dirac) {
          ts.push_back(rec.T);
          masses.push_back(rec.lambda_star * shapes[si].mu.atoms[0].mass);
        }
      }
  }
  const double slope = oracle::loglog_slope(ts, masses);
  const double target = params.n_dim / params.theta - 1 / (params.p_exponent - 1);
  const bool fit = std::abs(slope - target) < 0.1 * std::abs(target);
  return {records.size() >= 12 && survivors == 0 && monotone && decreasing && fit,
          fmt("%zu configs, γ̂=%.3g, %d runs at ≥10γ̂, survivors %d; threshold mass exponent %.4f vs %.2f (tol 10%%)",
              records.size(), gamma_hat, checked, survivors, slope, target)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> allow_fail, only;
  app.add_option("--allow-fail", allow_fail, "criteria whose failure does not change the exit code");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "kernel closed forms", 5, closed_forms},
      {2, "kernel scaling identity", 30, scaling},
      {3, "kernel tail exponent", 30, decay},
      {4, "self-adjointness and Jensen gap", 60, selfadjoint_and_jensen},
      {5, "mollifier antisymmetry and exterior sign", 60, mollifier_identities},
      {6, "Dirichlet eigenvalues and two-sided band", 120, dirichlet},
      {7, "adjoint lower bound across δ", 600, lower_bound_sweep},
      {8, "critical scaling of the rhs functional", 600, critical_scaling},
      {9, "subcritical σ-exponent", 300, subcritical_scaling},
      {10, "integral residual implies weak residual", 600, weak_implication},
      {11, "solver oracles", 600, solver_oracles},
      {12, "threshold stress test", 1800, threshold_stress},
  };

  const std::set<int> allowed(allow_fail.begin(), allow_fail.end()), selected(only.begin(), only.end());
  int hard_failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.time_limit;
    std::printf("%s #%d %s: %s; %.1f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.time_limit);
    std::fflush(stdout);
    if (!pass && !allowed.count(c.id)) ++hard_failures;
  }
  return hard_failures == 0 ? 0 : 1;
}
