#include "fracheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/fft.hpp"
#include "fracheat/io.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/parallel.hpp"

namespace fracheat {

std::string to_string(Scheme s) { return s == Scheme::integrating_factor ? "integrating_factor" : "picard_duhamel"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "integrating_factor") return Scheme::integrating_factor;
  if (s == "picard_duhamel") return Scheme::picard_duhamel;
  throw InvalidArgument("unknown scheme '" + s + "'");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blew_up: return "blew_up";
    case RunStatus::stalled: return "stalled";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  params.validate();
  if (params.n_dim != grid.dim()) throw InvalidArgument("params.n_dim differs from the grid dimension");
  if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
  if (!(dt_init > 0.0) || dt_init > t_end / 64.0 * (1.0 + 1e-12)) throw InvalidArgument("dt_init must lie in (0, t_end/64]");
  if (!(blowup_threshold > 1.0)) throw InvalidArgument("blowup_threshold must exceed 1");
  if (t0 < 0.0 || t0 > t_end / 100.0 * (1.0 + 1e-12)) throw InvalidArgument("t0 must lie in (0, t_end/100]");
  if (!(growth_limit > 1.0)) throw InvalidArgument("growth_limit must exceed 1");
  if (store_stride < 1) throw InvalidArgument("store_stride must be >= 1");
  if (max_iter < 3) throw InvalidArgument("max_iter must be >= 3");
  if (!(picard_tolerance > 0.0)) throw InvalidArgument("picard_tolerance must be positive");
}

namespace {

constexpr double kResolvedDecay = 27.6;  // e^{-27.6} ≈ 1e-12

// exp(−dt|ξ|^θ) per dt, computed on demand.
class Propagator {
 public:
  Propagator(const Grid& grid, double theta) : grid_(grid), theta_(theta), xi_(wave_magnitudes(grid)) {
    for (double& v : xi_) v = theta == 2.0 ? v * v : std::pow(v, theta);
  }
  void apply(Field& f, double dt) {
    auto& m = cache_[dt];
    if (m.empty()) {
      m.resize(xi_.size());
      for (std::size_t k = 0; k < xi_.size(); ++k) m[k] = std::exp(-dt * xi_[k]);
    }
    apply_multiplier(f, m);
  }
  Field operator()(Field f, double dt) {
    apply(f, dt);
    return f;
  }

 private:
  Grid grid_;
  double theta_;
  std::vector<double> xi_;
  std::map<double, std::vector<double>> cache_;
};

Field power(const Field& u, double p) {
  Field out = u;
  for (double& v : out.values()) v = v > 0.0 ? std::pow(v, p) : 0.0;
  return out;
}

void check_domain(const Field& u, double t, double theta) {
  const Grid& g = u.grid();
  const double width = std::pow(t, 1.0 / theta);
  const double edge = g.extent() - 2.0 * width;
  const double top = u.max_abs();
  if (top == 0.0) return;
  double band = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Point x = g.point(k);
    bool near = std::abs(x[0]) >= edge;
    if (g.dim() == 2) near = near || std::abs(x[1]) >= edge;
    if (near) band = std::max(band, std::abs(u[k]));
  }
  if (edge <= 0.0 || band > 1e-3 * top)
    throw DomainTooSmall("solution reaches the periodic box edge at t = " + std::to_string(t) +
                         " (edge/max = " + std::to_string(band / top) + ")");
}

[[noreturn]] void fail_nonfinite(const SolverConfig& config, const Field& last, double t, double dt) {
  std::string where;
  if (config.dump_dir) {
    std::filesystem::create_directories(*config.dump_dir);
    const auto path = *config.dump_dir / "state_dump.bin";
    write_field_binary(last, path);
    where = "; last finite state written to " + path.string();
  }
  throw NumericalError("non-finite values in solver step at t = " + std::to_string(t) + ", dt = " +
                       std::to_string(dt) + ", sup = " + std::to_string(last.max_abs()) + where);
}

[[noreturn]] void fail_negative(double rel, double t) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "negative values beyond rounding (%.3e of sup) at t = %.6g", rel, t);
  throw NumericalError(buf);
}

}  // namespace

Field mollify_initial(const MeasureSpec& mu, double t0, const Grid& grid, const FracParams& params) {
  if (!(t0 > 0.0)) throw InvalidArgument("smoothing time must be positive");
  if (mu.dim != grid.dim()) throw InvalidArgument("measure and grid dimensions differ");
  // The Nyquist content of S(t0)μ and of its p-th power must sit below rounding.
  const double nyquist = std::numbers::pi / grid.spacing();
  if (!mu.atoms.empty() && t0 * std::pow(nyquist, params.theta) < kResolvedDecay * std::max(params.p_exponent, 1.0))
    throw GridTooCoarse("atoms at t0 = " + std::to_string(t0) + " are not resolved by spacing " +
                        std::to_string(grid.spacing()) + "; raise t0 or refine the grid");
  const KernelEvaluator& kernel = shared_kernel(params);
  std::vector<Atom> atoms = mu.atoms;
  // Densities enter as midpoint sub-lattices fine against both h and the kernel width.
  const double sub = std::min(0.5 * grid.spacing(), 0.5 * std::pow(t0, 1.0 / params.theta));
  for (const auto& d : mu.densities) {
    if (d.level == 0.0) continue;
    MeasureSpec one;
    one.dim = mu.dim;
    one.densities.push_back(d);
    const auto [lo, hi] = one.hull();
    const long nx = std::max(1L, static_cast<long>(std::ceil((hi[0] - lo[0]) / sub)));
    const long ny = mu.dim == 2 ? std::max(1L, static_cast<long>(std::ceil((hi[1] - lo[1]) / sub))) : 1;
    const double sx = (hi[0] - lo[0]) / nx, sy = mu.dim == 2 ? (hi[1] - lo[1]) / ny : 1.0;
    for (long i = 0; i < nx; ++i)
      for (long j = 0; j < ny; ++j) {
        const Point c{lo[0] + (i + 0.5) * sx, mu.dim == 2 ? lo[1] + (j + 0.5) * sy : 0.0};
        if (one.density_at(c) > 0.0) atoms.push_back({c, d.level * sx * sy});
      }
  }
  Field u(grid);
  parallel_for(grid.size(), [&](std::size_t k) {
    const Point x = grid.point(k);
    double s = 0.0;
    for (const auto& a : atoms)
      if (a.mass > 0.0) s += a.mass * kernel.eval_periodic(x - a.center, t0, grid.extent());
    u[k] = s;
  });
  return u;
}

Trajectory integrate(const SolverConfig& config, const MeasureSpec& mu) {
  config.validate();
  const double p = config.params.p_exponent;
  const double t_start = config.start_time();
  Trajectory traj;
  traj.config = config;
  traj.initial_measure = mu;
  Propagator prop(config.grid, config.params.theta);

  Field u = mollify_initial(mu, t_start, config.grid, config.params);
  double t = t_start;
  traj.times.push_back(t);
  traj.states.push_back(u);
  if (config.monitor_domain) check_domain(u, t, config.params.theta);

  auto nonlin = [&](const Field& v) { return config.nonlinear ? power(v, p) : Field(v.grid()); };
  // Graded start: the initial layer evolves on the t0 time scale.
  double dt = std::min(config.dt_init, 0.125 * t_start);
  const double initial_sup = u.max_abs();
  bool stored_last = true;
  while (t < config.t_end * (1.0 - 1e-14)) {
    const double h = std::min(dt, config.t_end - t);
    const Field k1 = nonlin(u);
    Field a = u;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += 0.5 * h * k1[i];
    const Field k2 = nonlin(prop(a, 0.5 * h));
    Field eu = prop(u, 0.5 * h);
    Field b = eu;
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += 0.5 * h * k2[i];
    const Field k3 = nonlin(b);
    Field c = eu;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += h * k3[i];
    const Field k4 = nonlin(prop(c, 0.5 * h));
    Field inner = u;
    for (std::size_t i = 0; i < inner.size(); ++i) inner[i] += h / 6.0 * k1[i];
    prop.apply(inner, 0.5 * h);
    for (std::size_t i = 0; i < inner.size(); ++i) inner[i] += h / 3.0 * (k2[i] + k3[i]);
    prop.apply(inner, 0.5 * h);
    for (std::size_t i = 0; i < inner.size(); ++i) inner[i] += h / 6.0 * k4[i];
    Field& v = inner;

    if (!v.all_finite()) fail_nonfinite(config, u, t, h);
    const double before = u.max_abs();
    const double after = v.max_abs();
    const double ratio = before > 0.0 ? after / before : 1.0;
    if (config.nonlinear && ratio > config.growth_limit) {
      ++traj.rejected_steps;
      dt = 0.5 * h;
      if (dt < 1e-12 * config.t_end) {
        traj.status = RunStatus::blew_up;
        traj.t_blow = t;
        break;
      }
      continue;
    }
    const double low = v.min();
    if (low < 0.0) {
      const double rel = after > 0.0 ? -low / after : 0.0;
      traj.clamp_max = std::max(traj.clamp_max, rel);
      if (rel > 1e-12) {
        // The data were resolved at t0, so only nonlinear concentration can
        // push content to the grid scale; that needs growth.
        if (after <= initial_sup) fail_negative(rel, t + h);
        traj.status = RunStatus::blew_up;
        traj.t_blow = t + h;
        break;
      }
      for (double& x : v.values()) x = std::max(x, 0.0);
    }
    u = std::move(v);
    t += h;
    ++traj.steps;
    stored_last = false;
    if (traj.steps % config.store_stride == 0) {
      traj.times.push_back(t);
      traj.states.push_back(u);
      stored_last = true;
    }
    if (after >= config.blowup_threshold) {
      traj.status = RunStatus::blew_up;
      traj.t_blow = t;
      break;
    }
    if (config.monitor_domain) check_domain(u, t, config.params.theta);
    if (ratio <= std::pow(config.growth_limit, 0.25)) dt = std::min(2.0 * h, config.dt_init);
  }
  if (!stored_last) {
    traj.times.push_back(t);
    traj.states.push_back(u);
  }
  return traj;
}

Trajectory picard_duhamel(const SolverConfig& config, const MeasureSpec& mu, int max_iter) {
  config.validate();
  if (max_iter < 3) throw InvalidArgument("max_iter must be >= 3");
  const double p = config.params.p_exponent;
  const double t_start = config.start_time();
  const auto steps = static_cast<std::size_t>(std::ceil((config.t_end - t_start) / config.dt_init - 1e-9));
  const double dt = (config.t_end - t_start) / steps;
  Propagator prop(config.grid, config.params.theta);

  Trajectory traj;
  traj.config = config;
  traj.initial_measure = mu;
  std::vector<Field> linear{mollify_initial(mu, t_start, config.grid, config.params)};
  if (config.monitor_domain) check_domain(linear[0], t_start, config.params.theta);
  for (std::size_t k = 0; k < steps; ++k) linear.push_back(prop(linear.back(), dt));

  std::vector<Field> iterate = linear;
  std::size_t horizon = steps;  // last valid time index
  bool truncated = false, converged = false;
  std::vector<double> change(steps + 1, 0.0);
  int iter = 0;
  if (!config.nonlinear || linear[0].max_abs() == 0.0) {
    converged = true;
  }
  while (!converged && iter < max_iter) {
    ++iter;
    std::vector<Field> next;
    next.reserve(horizon + 1);
    Field duhamel(config.grid);
    Field f_prev = power(iterate[0], p);
    next.push_back(linear[0]);
    std::size_t new_horizon = horizon;
    for (std::size_t k = 1; k <= horizon; ++k) {
      const Field f_next = power(iterate[k], p);
      for (std::size_t i = 0; i < duhamel.size(); ++i) duhamel[i] += 0.5 * dt * f_prev[i];
      prop.apply(duhamel, dt);
      for (std::size_t i = 0; i < duhamel.size(); ++i) duhamel[i] += 0.5 * dt * f_next[i];
      Field u = linear[k];
      u += duhamel;
      if (!u.all_finite() || u.max_abs() >= config.blowup_threshold) {
        new_horizon = k - 1;
        truncated = true;
        break;
      }
      next.push_back(std::move(u));
      f_prev = f_next;
    }
    horizon = new_horizon;
    double top = 0.0;
    for (std::size_t k = 0; k <= horizon; ++k) top = std::max(top, next[k].max_abs());
    double worst = 0.0;
    for (std::size_t k = 0; k <= horizon; ++k) {
      double diff = 0.0, drop = 0.0;
      for (std::size_t i = 0; i < next[k].size(); ++i) {
        const double d = next[k][i] - iterate[k][i];
        diff = std::max(diff, std::abs(d));
        drop = std::max(drop, -d);
      }
      if (drop > 1e-10 * top)
        throw NumericalError("Picard iterates are not monotone (decrease " + std::to_string(drop / top) + " at t = " +
                             std::to_string(t_start + k * dt) + ")");
      const double scale = std::max(next[k].max_abs(), 1e-300);
      change[k] = diff / scale;
      worst = std::max(worst, change[k]);
    }
    iterate = std::move(next);
    if (horizon == 0) break;
    if (worst < config.picard_tolerance) converged = true;
  }
  iterate.erase(iterate.begin() + static_cast<long>(horizon + 1), iterate.end());
  traj.iterations = iter;
  for (std::size_t k = 0; k <= horizon; ++k) {
    traj.times.push_back(t_start + k * dt);
    traj.states.push_back(iterate[k]);
  }
  traj.steps = static_cast<int>(horizon);
  if (converged && !truncated) {
    traj.status = RunStatus::completed;
  } else if (truncated) {
    traj.status = RunStatus::blew_up;
    std::size_t onset = horizon + 1;
    for (std::size_t k = 0; k <= horizon; ++k)
      if (change[k] >= config.picard_tolerance) {
        onset = k;
        break;
      }
    traj.t_blow = t_start + onset * dt;
  } else {
    traj.status = RunStatus::stalled;
  }
  return traj;
}

Trajectory solve(const SolverConfig& config, const MeasureSpec& mu) {
  return config.scheme == Scheme::integrating_factor ? integrate(config, mu) : picard_duhamel(config, mu, config.max_iter);
}

double integral_residual(const Trajectory& traj, std::size_t max_samples) {
  const auto& cfg = traj.config;
  const std::size_t m = traj.states.size();
  if (m == 0) throw InvalidArgument("empty trajectory");
  const double p = cfg.params.p_exponent;
  Propagator prop(cfg.grid, cfg.params.theta);
  std::vector<std::size_t> picks;
  const std::size_t count = std::min(max_samples, m);
  for (std::size_t s = 0; s < count; ++s)
    picks.push_back(count == 1 ? m - 1 : s * (m - 1) / (count - 1));

  double top = 0.0;
  for (const auto& s : traj.states) top = std::max(top, s.max_abs());
  if (top == 0.0) return 0.0;

  Field duhamel(cfg.grid);
  Field f_prev = cfg.nonlinear ? power(traj.states[0], p) : Field(cfg.grid);
  double worst = 0.0;
  std::size_t next_pick = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (k > 0) {
      const double h = traj.times[k] - traj.times[k - 1];
      const Field f_next = cfg.nonlinear ? power(traj.states[k], p) : Field(cfg.grid);
      for (std::size_t i = 0; i < duhamel.size(); ++i) duhamel[i] += 0.5 * h * f_prev[i];
      prop.apply(duhamel, h);
      for (std::size_t i = 0; i < duhamel.size(); ++i) duhamel[i] += 0.5 * h * f_next[i];
      f_prev = f_next;
    }
    if (next_pick < picks.size() && picks[next_pick] == k) {
      while (next_pick < picks.size() && picks[next_pick] == k) ++next_pick;
      const Field kernel = mollify_initial(traj.initial_measure, traj.times[k], cfg.grid, cfg.params);
      double diff = 0.0;
      for (std::size_t i = 0; i < kernel.size(); ++i)
        diff = std::max(diff, std::abs(traj.states[k][i] - kernel[i] - duhamel[i]));
      worst = std::max(worst, diff / top);
    }
  }
  return worst;
}

double weak_residual(const Trajectory& traj, const WeakTest& test, const MeasureSpec& mu) {
  const auto& cfg = traj.config;
  const double p = cfg.params.p_exponent;
  const double t0 = traj.times.front();
  if (test.horizon > traj.times.back() * (1.0 + 1e-12))
    throw InvalidArgument("test function horizon exceeds the trajectory");
  const double eps = 1e-5 * std::max(test.horizon - t0, 1e-12);
  const Grid& grid = cfg.grid;
  Propagator prop(grid, cfg.params.theta);
  // Space integrals of u(−∂_tφ + Lφ), its absolute value, and u^pφ at time t.
  struct Slice {
    double lhs = 0.0, abs_lhs = 0.0, rhs = 0.0;
  };
  auto slice = [&](const Field& u, double t) {
    const Field phi = Field::sample(grid, [&](const Point& x) { return test.phi(x, t); });
    const Field dphi = Field::sample(grid, [&](const Point& x) {
      return (test.phi(x, t + eps) - test.phi(x, t - eps)) / (2.0 * eps);
    });
    const Field lphi = apply_fraclap_spectral(phi, cfg.params);
    Slice out;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double v = u[i] * (-dphi[i] + lphi[i]);
      out.lhs += v;
      out.abs_lhs += std::abs(v);
      if (cfg.nonlinear && u[i] > 0.0) out.rhs += std::pow(u[i], p) * phi[i];
    }
    out.lhs *= grid.cell_volume();
    out.abs_lhs *= grid.cell_volume();
    out.rhs *= grid.cell_volume();
    return out;
  };
  auto nonlin = [&](const Field& v) { return cfg.nonlinear ? power(v, p) : Field(grid); };
  // Simpson per stored interval; the midpoint state propagates the linear
  // part exactly and takes a Heun step for u^p.
  double lhs = 0.0, abs_lhs = 0.0, rhs = 0.0;
  auto prev = slice(traj.states[0], t0);
  for (std::size_t k = 0; k + 1 < traj.states.size() && traj.times[k] < test.horizon; ++k) {
    const double h = traj.times[k + 1] - traj.times[k];
    const Field& u = traj.states[k];
    const Field f = nonlin(u);
    Field guess = u;
    for (std::size_t i = 0; i < guess.size(); ++i) guess[i] += 0.5 * h * f[i];
    prop.apply(guess, 0.5 * h);
    const Field g = nonlin(guess);
    Field mid = u;
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] += 0.25 * h * f[i];
    prop.apply(mid, 0.5 * h);
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] += 0.25 * h * g[i];
    const auto m = slice(mid, traj.times[k] + 0.5 * h);
    const auto next = slice(traj.states[k + 1], traj.times[k + 1]);
    lhs += h / 6.0 * (prev.lhs + 4.0 * m.lhs + next.lhs);
    abs_lhs += h / 6.0 * (prev.abs_lhs + 4.0 * m.abs_lhs + next.abs_lhs);
    rhs += h / 6.0 * (prev.rhs + 4.0 * m.rhs + next.rhs);
    prev = next;
  }
  const Field data = mollify_initial(mu, t0, grid, cfg.params);
  const Field phi0 = Field::sample(grid, [&](const Point& x) { return test.phi(x, t0); });
  rhs += inner_product(phi0, data);
  // Floor: the size of the integrand on the left. Where u^p is negligible in
  // the support of φ both sides are tiny while −∂_tφ and Lφ still cancel
  // against each other at the scale of the solution.
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), abs_lhs, 1e-300});
}

std::vector<WeakTest> standard_test_bank(const SolverConfig& config) {
  const double t0 = config.start_time();
  const double theta = config.params.theta;
  const int dim = config.grid.dim();
  const double base = std::min(config.grid.extent() / 3.0, std::pow(config.t_end - t0, 1.0 / theta));
  std::vector<WeakTest> bank;
  for (double scale : {0.35, 0.6, 1.0}) {
    const double sigma = scale * base;
    const double horizon = std::pow(sigma, theta);
    for (int c = 0; c < 3; ++c) {
      const double off = c == 0 ? 0.0 : (c == 1 ? 0.5 : -0.5) * sigma;
      const Point center{off, dim == 2 ? off : 0.0};
      WeakTest w;
      w.horizon = t0 + 0.75 * horizon;
      w.label = "sigma=" + std::to_string(sigma) + ",center=" + std::to_string(off);
      w.phi = [=](const Point& x, double t) {
        if (t > t0 + 0.75 * horizon) return 0.0;
        const double r = norm(x - center, dim) / sigma;
        const double s = (t - t0) / horizon;
        return smooth_transition((r - 0.5) / 0.45) * smooth_transition((s - 0.25) / 0.5);
      };
      bank.push_back(std::move(w));
    }
  }
  return bank;
}

SweepResult threshold_sweep(const MeasureSpec& shape, double lambda_min, double lambda_max, const SolverConfig& config,
                            int iterations) {
  if (!(lambda_min >= 0.0) || !(lambda_max > lambda_min)) throw InvalidArgument("need 0 <= lambda_min < lambda_max");
  SweepResult res;
  auto run = [&](double lambda) {
    SweepRun r{lambda, RunStatus::completed, std::numeric_limits<double>::quiet_NaN()};
    if (lambda > 0.0) {
      const Trajectory traj = integrate(config, shape.scaled(lambda));
      r.status = traj.status;
      r.t_blow = traj.t_blow;
    }
    res.runs.push_back(r);
    return r.status == RunStatus::blew_up;
  };
  if (run(lambda_min) || !run(lambda_max)) throw InvalidArgument("range does not straddle threshold");
  double lo = lambda_min, hi = lambda_max;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (run(mid) ? hi : lo) = mid;
  }
  res.lambda_completes = lo;
  res.lambda_blows = hi;
  res.lambda_star = 0.5 * (lo + hi);
  auto sorted = res.runs;
  std::sort(sorted.begin(), sorted.end(), [](const SweepRun& a, const SweepRun& b) { return a.lambda < b.lambda; });
  bool seen_blow = false;
  for (const auto& r : sorted) {
    if (r.status == RunStatus::blew_up) seen_blow = true;
    else if (seen_blow)
      throw NumericalError("threshold sweep is not monotone in lambda at lambda = " + std::to_string(r.lambda));
  }
  return res;
}

}  // namespace fracheat
