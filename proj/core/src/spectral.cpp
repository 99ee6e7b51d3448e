#include "fracheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracheat/error.hpp"
#include "fracheat/fft.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {

void FracParams::validate() const {
  if (!(theta > 0.0 && theta <= 2.0)) throw InvalidArgument("theta must lie in (0, 2]");
  if (n_dim != 1 && n_dim != 2) throw InvalidArgument("dimension must be 1 or 2");
  if (!(p_exponent > 1.0)) throw InvalidArgument("p must exceed 1");
}

double unit_sphere_area(int dim) { return dim == 1 ? 2.0 : 2.0 * std::numbers::pi; }
double unit_ball_volume(int dim) { return dim == 1 ? 2.0 : std::numbers::pi; }

double normalizing_constant(const FracParams& params) {
  params.validate();
  if (params.classical()) throw ClassicalLaplacian();
  const double n = params.n_dim, th = params.theta;
  return std::tgamma(0.5 * (n + th)) / (std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(2.0 - 0.5 * th)) *
         (0.5 * th) * (1.0 - 0.5 * th);
}

double levy_constant(const FracParams& params) {
  return std::pow(2.0, params.theta) * normalizing_constant(params);
}

Field apply_fraclap_spectral(const Field& f, const FracParams& params) {
  params.validate();
  if (params.n_dim != f.grid().dim()) throw InvalidArgument("params and grid dimensions differ");
  Field out = f;
  auto xi = wave_magnitudes(f.grid());
  const double th = params.theta;
  for (double& v : xi) v = th == 2.0 ? v * v : std::pow(v, th);
  apply_multiplier(out, xi);
  return out;
}

namespace {

// Fourth-order Laplacian of f at x with step d.
double laplacian(const ScalarFunction& f, const Point& x, int dim, double d) {
  double lap = 0.0;
  for (int axis = 0; axis < dim; ++axis) {
    Point e{};
    e[axis] = d;
    const double f0 = f(x);
    lap += (-f(x + 2.0 * e) + 16.0 * f(x + e) - 30.0 * f0 + 16.0 * f(x - e) - f(x - 2.0 * e)) /
           (12.0 * d * d);
  }
  return lap;
}

void add_radius(std::vector<double>& cuts, double r, double lo, double hi) {
  if (r > lo && r < hi) cuts.push_back(r);
}

// Radii where the sphere |z| = r around x crosses a support boundary.
std::vector<double> radial_breaks(const Point& x, int dim, const PvOptions& opts, double lo, double hi) {
  std::vector<double> cuts;
  for (double r = 2.0 * lo; r < hi; r *= 2.0) cuts.push_back(r);
  for (const auto& s : opts.supports) {
    const double d = norm(s.center - x, dim);
    add_radius(cuts, d + s.radius, lo, hi);
    add_radius(cuts, std::abs(d - s.radius), lo, hi);
    add_radius(cuts, d, lo, hi);
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

// Angles in [0, π] where ±(cos φ, sin φ)·r + x crosses a support boundary.
std::vector<double> angular_breaks(const Point& x, double r, const PvOptions& opts) {
  std::vector<double> cuts;
  const double pi = std::numbers::pi;
  auto push = [&](double a) {
    a = std::fmod(a, pi);
    if (a < 0) a += pi;
    if (a > 0.0 && a < pi) cuts.push_back(a);
  };
  for (const auto& s : opts.supports) {
    const Point c = s.center - x;
    const double d = std::hypot(c[0], c[1]);
    if (d == 0.0) continue;
    const double beta = std::atan2(c[1], c[0]);
    push(beta);
    const double cosa = (r * r + d * d - s.radius * s.radius) / (2.0 * r * d);
    if (std::abs(cosa) < 1.0) {
      const double alpha = std::acos(cosa);
      push(beta + alpha);
      push(beta - alpha);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

}  // namespace

double apply_fraclap_pv(const ScalarFunction& f, const Point& x, const FracParams& params, double cutoff,
                        const PvOptions& opts) {
  params.validate();
  if (params.classical()) throw ClassicalLaplacian();
  if (!(cutoff > 0.0)) throw InvalidArgument("cutoff must be positive");
  const int dim = params.n_dim;
  const double th = params.theta;
  const double c = levy_constant(params);
  const double fx = f(x);
  const double outer = std::max(opts.outer_radius, 2.0 * cutoff);

  // Inner ball by Taylor expansion of the symmetric difference.
  const double inner = -laplacian(f, x, dim, 0.5 * cutoff) / (2.0 * dim) * unit_sphere_area(dim) *
                       std::pow(cutoff, 2.0 - th) / (2.0 - th);

  QuadOptions q{opts.abs_tol, opts.rel_tol, 4000};
  // Angular integral of 2f(x) − f(x+z) − f(x−z) at radius r, times r^{−1−θ}.
  std::function<double(double)> shell;
  // Same but without the 2f(x) part (for the tail).
  std::function<double(double)> shell_off;
  if (dim == 1) {
    shell = [&](double r) { return (2.0 * fx - f({x[0] + r, 0.0}) - f({x[0] - r, 0.0})) * std::pow(r, -1.0 - th); };
    shell_off = [&](double r) { return (f({x[0] + r, 0.0}) + f({x[0] - r, 0.0})) * std::pow(r, -1.0 - th); };
  } else {
    auto ring = [&](double r, bool with_center) {
      auto g = [&](double phi) {
        const Point z{r * std::cos(phi), r * std::sin(phi)};
        const double v = f(x + z) + f(x - z);
        return with_center ? 2.0 * fx - v : v;
      };
      const auto cuts = angular_breaks(x, r, opts);
      QuadOptions qi{opts.abs_tol * std::pow(r, 1.0 + th), opts.rel_tol, 2000};
      return integrate_adaptive(g, 0.0, std::numbers::pi, qi, cuts).value;
    };
    shell = [=](double r) { return ring(r, true) * std::pow(r, -1.0 - th); };
    shell_off = [=](double r) { return ring(r, false) * std::pow(r, -1.0 - th); };
  }

  const auto cuts = radial_breaks(x, dim, opts, cutoff, outer);
  const QuadResult mid = integrate_adaptive(shell, cutoff, outer, q, cuts);
  const QuadResult tail = integrate_to_infinity(shell_off, outer, q);
  if (!std::isfinite(mid.value) || !std::isfinite(tail.value) || !tail.converged)
    throw ConvergenceError("principal-value tail integral did not converge");
  const double tail_center = (dim == 1 ? 2.0 : 2.0 * std::numbers::pi) * fx * std::pow(outer, -th) / th;
  return c * (inner + mid.value + tail_center - tail.value);
}

Field jensen_gap(const Field& f, const FracParams& params) {
  params.validate();
  if (f.min() < -1e-12) throw InvalidArgument("jensen_gap requires a nonnegative field");
  const double p = params.p_exponent;
  const double q = p / (p - 1.0);
  Field base = f;
  for (double& v : base.values()) v = std::max(v, 0.0);
  Field low = base, high = base;
  for (double& v : low.values()) v = std::pow(v, 1.0 / (p - 1.0));
  for (double& v : high.values()) v = std::pow(v, q);
  const Field lf = apply_fraclap_spectral(base, params);
  const Field lh = apply_fraclap_spectral(high, params);
  Field gap(f.grid());
  for (std::size_t k = 0; k < gap.size(); ++k) gap[k] = q * low[k] * lf[k] - lh[k];
  return gap;
}

double selfadjoint_defect(const Field& f, const Field& g, const FracParams& params) {
  return std::abs(inner_product(apply_fraclap_spectral(f, params), g) -
                  inner_product(f, apply_fraclap_spectral(g, params)));
}

double selfadjoint_defect_pv(const ScalarFunction& f, const ScalarFunction& g, const Grid& grid,
                             const FracParams& params, double cutoff, const PvOptions& f_opts,
                             const PvOptions& g_opts) {
  const std::size_t n = grid.size();
  std::vector<double> a(n, 0.0), b(n, 0.0);
  parallel_for(n, [&](std::size_t k) {
    const Point x = grid.point(k);
    const double gx = g(x), fx = f(x);
    if (gx != 0.0) a[k] = apply_fraclap_pv(f, x, params, cutoff, f_opts) * gx;
    if (fx != 0.0) b[k] = fx * apply_fraclap_pv(g, x, params, cutoff, g_opts);
  });
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sa += a[k];
    sb += b[k];
  }
  sa *= grid.cell_volume();
  sb *= grid.cell_volume();
  const double scale = std::max({std::abs(sa), std::abs(sb), 1e-300});
  return std::abs(sa - sb) / scale;
}

}  // namespace fracheat
