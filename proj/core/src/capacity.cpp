#include "fracheat/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {

double sup_ball_mass(const MeasureSpec& mu, double sigma, double search_resolution) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(search_resolution > 0.0) || search_resolution > sigma / 8.0 * (1.0 + 1e-12))
    throw InvalidArgument("search_resolution must lie in (0, sigma/8]");
  if (mu.empty()) return 0.0;
  const int dim = mu.dim;

  std::vector<Point> centers;
  for (const auto& a : mu.atoms) centers.push_back(a.center);
  for (std::size_t i = 0; i < mu.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < mu.atoms.size(); ++j)
      centers.push_back(0.5 * (mu.atoms[i].center + mu.atoms[j].center));

  const auto [lo, hi] = mu.hull();
  std::array<long, 2> counts{1, 1};
  for (int a = 0; a < dim; ++a) counts[a] = static_cast<long>(std::floor((hi[a] - lo[a]) / search_resolution)) + 2;
  if (static_cast<double>(counts[0]) * counts[1] > 4e6)
    throw InvalidArgument("search lattice too large; increase search_resolution");
  for (long i = 0; i < counts[0]; ++i)
    for (long j = 0; j < counts[1]; ++j)
      centers.push_back({lo[0] + i * search_resolution, dim == 2 ? lo[1] + j * search_resolution : 0.0});

  std::vector<double> best(centers.size());
  parallel_for(centers.size(), [&](std::size_t k) { best[k] = mu.ball_mass(centers[k], sigma); });
  return *std::max_element(best.begin(), best.end());
}

double subcritical_exponent(double p, double theta, int n_dim) { return n_dim - theta / (p - 1.0); }

bool is_critical(double p, double theta, int n_dim) {
  const double crit = 1.0 + theta / n_dim;
  return std::abs(p - crit) <= 1e-12 * crit;
}

double subcritical_bound(double sigma, double p, double theta, int n_dim, double gamma) {
  if (!(sigma > 0.0) || !(gamma > 0.0)) throw InvalidArgument("sigma and gamma must be positive");
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (is_critical(p, theta, n_dim)) throw InvalidArgument("p is the critical exponent; use critical_bound");
  return gamma * std::pow(sigma, subcritical_exponent(p, theta, n_dim));
}

double critical_bound(double sigma, double T, double theta, int n_dim, double gamma) {
  if (!(sigma > 0.0) || !(gamma > 0.0) || !(T > 0.0)) throw InvalidArgument("sigma, T and gamma must be positive");
  const double reach = std::pow(T, 1.0 / theta);
  if (sigma >= reach) throw InvalidArgument("critical bound needs sigma < T^{1/theta}");
  return gamma * std::pow(std::log(std::numbers::e + reach / sigma), -n_dim / theta);
}

std::string to_string(Verdict v) { return v == Verdict::satisfied ? "satisfied" : "violated"; }

CapacityReport necessary_check(const MeasureSpec& mu, double T, double p, double theta, int n_dim, double gamma,
                               const std::vector<double>& sigma_grid, std::optional<double> search_resolution) {
  if (sigma_grid.empty()) throw InvalidArgument("sigma grid is empty");
  const double reach = std::pow(T, 1.0 / theta);
  CapacityReport rep;
  rep.gamma_used = gamma;
  rep.critical = is_critical(p, theta, n_dim);
  for (double sigma : sigma_grid) {
    if (!(sigma > 0.0 && sigma < reach)) throw InvalidArgument("sigma values must lie in (0, T^{1/theta})");
    const double mass = sup_ball_mass(mu, sigma, search_resolution.value_or(sigma / 8.0));
    const double bound = rep.critical ? critical_bound(sigma, T, theta, n_dim, gamma)
                                      : subcritical_bound(sigma, p, theta, n_dim, gamma);
    const Verdict v = mass > bound ? Verdict::violated : Verdict::satisfied;
    rep.sigma_grid.push_back(sigma);
    rep.sup_ball_mass.push_back(mass);
    rep.bound_values.push_back(bound);
    rep.verdicts.push_back(v);
    if (v == Verdict::violated) {
      rep.smallest_violating_sigma = std::min(rep.smallest_violating_sigma.value_or(sigma), sigma);
      rep.largest_violating_sigma = std::max(rep.largest_violating_sigma.value_or(sigma), sigma);
    }
  }
  return rep;
}

double smooth_transition(double u) {
  auto h = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  const double a = h(1.0 - u), b = h(u);
  return a / (a + b);
}

double CutoffPair::zeta(const Point& x) const {
  const double r = norm(x, spatial.grid().dim()) / sigma;
  return smooth_transition((r - 0.5) / 0.45);
}

double CutoffPair::operator()(const Point& x, double t, const Point& center) const {
  return zeta(x - center) * temporal(t);
}

CutoffPair build_cutoff(double sigma, double theta, const Grid& grid) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (sigma < 8.0 * grid.spacing()) throw InvalidArgument("cutoff radius is under-resolved (sigma < 8 spacings)");
  if (sigma > 0.5 * grid.extent()) throw InvalidArgument("cutoff does not fit in the periodic box");
  CutoffPair c{sigma, theta, Field(grid), {}};
  const double horizon = std::pow(sigma, theta);
  c.temporal = [horizon](double t) { return t < 0.0 ? 1.0 : smooth_transition((t / horizon - 0.25) / 0.5); };
  c.spatial = Field::sample(grid, [&](const Point& x) { return c.zeta(x); });
  return c;
}

double kihon_rhs(const SampledTestFunction& phi, double p, double theta) {
  const std::size_t m = phi.slices.size();
  if (m < 3 || phi.times.size() != m) throw InvalidArgument("sampled test function needs >= 3 matching slices");
  if (phi.slices.back().max_abs() > 1e-10) throw InvalidArgument("test function does not vanish at the terminal time");
  const double q = p / (p - 1.0);
  const FracParams params{theta, phi.slices.front().grid().dim(), p};
  std::vector<double> level(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Field lphi = apply_fraclap_spectral(phi.slices[k], params);
    const std::size_t a = k == 0 ? 0 : k - 1, b = k + 1 == m ? k : k + 1;
    const double dt = phi.times[b] - phi.times[a];
    double s = 0.0;
    for (std::size_t i = 0; i < lphi.size(); ++i) {
      const double dphi = (phi.slices[b][i] - phi.slices[a][i]) / dt;
      s += std::pow(std::abs(-dphi + lphi[i]), q);
    }
    level[k] = s * lphi.grid().cell_volume();
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) total += 0.5 * (level[k] + level[k + 1]) * (phi.times[k + 1] - phi.times[k]);
  return total;
}

double kihon_rhs(const CutoffPair& phi, double p, int time_steps) {
  if (time_steps < 8) throw InvalidArgument("time_steps must be at least 8");
  const double q = p / (p - 1.0);
  const Field& zeta = phi.spatial;
  const Field lzeta = apply_fraclap_spectral(zeta, {phi.theta, zeta.grid().dim(), p});
  const double horizon = std::pow(phi.sigma, phi.theta);
  const double dt = horizon / time_steps;
  const double vol = zeta.grid().cell_volume();
  std::vector<double> level(static_cast<std::size_t>(time_steps) + 1);
  parallel_for(level.size(), [&](std::size_t k) {
    const double t = k * dt;
    const double psi = phi.psi(t);
    const double dpsi = (phi.psi(t + dt) - phi.psi(t - dt)) / (2.0 * dt);
    if (psi == 0.0 && dpsi == 0.0) return;
    double s = 0.0;
    for (std::size_t i = 0; i < zeta.size(); ++i) s += std::pow(std::abs(-zeta[i] * dpsi + psi * lzeta[i]), q);
    level[k] = s * vol;
  });
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < level.size(); ++k) total += 0.5 * (level[k] + level[k + 1]) * dt;
  return total;
}

double kihon_rhs(const TestFunction& phi, double p) {
  // The integrand depends on (x,t) only through u = |x|^θ + t, and the
  // measure of {|x|^θ + t ≤ u, t ≥ 0} has density |S^{N−1}|/N·u^{N/θ}.
  const double q = p / (p - 1.0);
  const int dim = phi.grid->dim();
  const double tau = phi.tau_scale;
  const ForcingProfile& f = *phi.forcing;
  const double amp = phi.c_delta / tau;
  auto g = [&](double u) {
    const double v = amp * f(u / tau);
    return v > 0.0 ? std::pow(v, q) * std::pow(u, static_cast<double>(dim) / phi.theta) : 0.0;
  };
  std::vector<double> cuts;
  for (double b : f.breakpoints()) cuts.push_back(tau * b);
  const double body = integrate_adaptive(g, 0.0, tau, {1e-300, 1e-12, 4000}, cuts).value;
  return unit_sphere_area(dim) / dim * body;
}

double kihon_lhs(const std::function<double(const Point&)>& phi0, const MeasureSpec& mu, double p) {
  const double q = p / (p - 1.0);
  auto power = [q](double v) { return v > 0.0 ? std::pow(v, q) : 0.0; };
  double total = 0.0;
  for (const auto& a : mu.atoms) total += a.mass * power(phi0(a.center));
  const QuadOptions opts{1e-13, 1e-10, 2000};
  for (const auto& d : mu.densities) {
    if (d.level == 0.0) continue;
    double x0, x1;
    std::function<std::pair<double, double>(double)> yrange;
    if (const auto* b = std::get_if<BallRegion>(&d.region)) {
      x0 = b->center[0] - b->radius;
      x1 = b->center[0] + b->radius;
      const BallRegion ball = *b;
      yrange = [ball](double x) {
        const double dx = x - ball.center[0];
        const double h = std::sqrt(std::max(ball.radius * ball.radius - dx * dx, 0.0));
        return std::pair{ball.center[1] - h, ball.center[1] + h};
      };
    } else {
      const auto box = std::get<BoxRegion>(d.region);
      x0 = box.lower[0];
      x1 = box.upper[0];
      yrange = [box](double) { return std::pair{box.lower[1], box.upper[1]}; };
    }
    double value;
    if (mu.dim == 1) {
      value = integrate_adaptive([&](double x) { return power(phi0({x, 0.0})); }, x0, x1, opts).value;
    } else {
      auto column = [&](double x) {
        const auto [y0, y1] = yrange(x);
        return integrate_adaptive([&](double y) { return power(phi0({x, y})); }, y0, y1, opts).value;
      };
      value = integrate_adaptive(column, x0, x1, opts).value;
    }
    total += d.level * value;
  }
  return total;
}

}  // namespace fracheat
