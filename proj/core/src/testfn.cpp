#include "fracheat/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracheat/error.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

ForcingProfile::ForcingProfile(double delta, double theta, double smoothing_width)
    : delta_(delta), theta_(theta), width_(smoothing_width) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!(theta > 0.0 && theta <= 2.0)) throw InvalidArgument("theta must lie in (0, 2]");
  scale_ = std::pow(delta, theta);
  if (!(scale_ < 1.0 / 64.0)) throw InvalidArgument("delta too large for the construction (delta^theta >= 1/64)");
  if (!(smoothing_width > 0.0) || smoothing_width > 0.5 * scale_ || smoothing_width > 1.0 / 16.0)
    throw InvalidArgument("smoothing width must lie in (0, min(delta^theta/2, 1/16)]");
}

ForcingProfile::ForcingProfile(double delta, double theta) : ForcingProfile(delta, theta, 0.25 * std::pow(delta, theta)) {}

ForcingProfile ForcingProfile::scaled(double factor) const {
  if (!(factor >= 0.0)) throw InvalidArgument("forcing scale must be >= 0");
  ForcingProfile out = *this;
  out.amplitude_ *= factor;
  return out;
}

double ForcingProfile::operator()(double tau) const {
  const double a = scale_, s = width_;
  if (amplitude_ == 0.0 || tau <= 2.0 * a + s || tau >= 0.5 - s) return 0.0;
  double shape;
  if (tau < 4.0 * a - s)
    shape = smoothstep((tau - 2.0 * a - s) / (2.0 * a - 2.0 * s));
  else if (tau <= 0.25 + s)
    shape = 1.0;
  else
    shape = 1.0 - smoothstep((tau - 0.25 - s) / (0.25 - 2.0 * s));
  return amplitude_ * shape / tau;
}

std::vector<double> ForcingProfile::breakpoints() const {
  const double a = scale_, s = width_;
  return {2.0 * a + s, 4.0 * a - s, 0.25 + s, 0.5 - s};
}

ForcingProfile build_forcing(double delta, double theta, double smoothing_width) {
  return ForcingProfile(delta, theta, smoothing_width);
}

double c_delta(double delta, double theta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const double a = std::pow(delta, theta);
  if (!(a < 1.0 / 32.0)) throw InvalidArgument("c_delta needs delta^theta < 1/32");
  return 1.0 / -std::log(32.0 * a);
}

namespace {

double interpolate_space(const BallGrid& grid, const Eigen::VectorXd& col, const Point& x) {
  const double h = grid.spacing();
  if (norm(x, grid.dim()) >= 1.0) return 0.0;
  auto at = [&](int i, int j) {
    const auto k = grid.find(i, j);
    return k < 0 ? 0.0 : col(k);
  };
  const double u = x[0] / h;
  const int i0 = static_cast<int>(std::floor(u));
  const double fu = u - i0;
  if (grid.dim() == 1) return (1.0 - fu) * at(i0, 0) + fu * at(i0 + 1, 0);
  const double v = x[1] / h;
  const int j0 = static_cast<int>(std::floor(v));
  const double fv = v - j0;
  return (1.0 - fu) * ((1.0 - fv) * at(i0, j0) + fv * at(i0, j0 + 1)) +
         fu * ((1.0 - fv) * at(i0 + 1, j0) + fv * at(i0 + 1, j0 + 1));
}

std::vector<double> ahe_time_grid(double scale, int steps) {
  constexpr int fine = 16, tail = 8;
  const int graded = steps - fine - tail;
  std::vector<double> t;
  const double t_fine = scale / 16.0;
  for (int k = 0; k < fine; ++k) t.push_back(t_fine * k / fine);
  const double ratio = std::pow(0.5 / t_fine, 1.0 / graded);
  for (int k = 0; k < graded; ++k) t.push_back(t_fine * std::pow(ratio, k));
  for (int k = 0; k <= tail; ++k) t.push_back(0.5 + 0.5 * k / tail);
  return t;
}

Eigen::MatrixXd duhamel(const ForcingProfile& forcing, const DirichletOperator& op, const std::vector<double>& times,
                        double c) {
  const auto& grid = op.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto m = static_cast<Eigen::Index>(times.size());
  const double theta = forcing.theta();
  Eigen::MatrixXd f(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::pow(norm(grid.node(static_cast<std::size_t>(i)), grid.dim()), theta);
    for (Eigen::Index k = 0; k < m; ++k) f(i, k) = c * forcing(r + times[static_cast<std::size_t>(k)]);
  }
  const Eigen::MatrixXd& v = op.eigenvectors();
  const Eigen::VectorXd& lam = op.eigenvalues();
  const Eigen::MatrixXd b = v.transpose() * f;
  Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(n, m);
  // March from t = 1 down to t = 0 (forward in ψ-time s = 1 − t).
  for (Eigen::Index k = m - 2; k >= 0; --k) {
    const double dt = times[static_cast<std::size_t>(k + 1)] - times[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double z = lam(j) * dt;
      double e, phi1, phi2;
      if (z < 1e-4) {
        e = std::exp(-z);
        phi1 = dt * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0);
        phi2 = dt * (0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0);
      } else {
        const double em1 = -std::expm1(-z);  // 1 − e^{−z}
        e = 1.0 - em1;
        phi1 = em1 / lam(j);
        phi2 = (1.0 - em1 / z) / lam(j);
      }
      const double b0 = b(j, k + 1), b1 = b(j, k);
      coeff(j, k) = e * coeff(j, k + 1) + b0 * phi1 + (b1 - b0) * phi2;
    }
  }
  Eigen::MatrixXd values = v * coeff;
  const double top = values.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    double& x = values.data()[i];
    if (x < 0.0 && x > -1e-12 * top) x = 0.0;
  }
  values.col(m - 1).setZero();
  return values;
}

}  // namespace

double TestFunction::support_radius() const { return std::pow(tau_scale, 1.0 / theta); }

double TestFunction::operator()(const Point& x, double t) const {
  if (t > tau_scale || t < 0.0) return 0.0;
  const double rs = support_radius();
  const Point y = (1.0 / rs) * x;
  const double s = t / tau_scale;
  auto it = std::upper_bound(times.begin(), times.end(), s);
  std::size_t k1 = static_cast<std::size_t>(std::distance(times.begin(), it));
  if (k1 >= times.size()) k1 = times.size() - 1;
  if (k1 == 0) k1 = 1;
  const std::size_t k0 = k1 - 1;
  const double w = (s - times[k0]) / (times[k1] - times[k0]);
  const double v0 = interpolate_space(*grid, values.col(static_cast<Eigen::Index>(k0)), y);
  const double v1 = interpolate_space(*grid, values.col(static_cast<Eigen::Index>(k1)), y);
  return (1.0 - w) * v0 + w * v1;
}

Eigen::VectorXd TestFunction::initial_profile() const { return values.col(0); }

TestFunction solve_ahe(const ForcingProfile& forcing, const DirichletOperator& op, const AheOptions& opts) {
  if (opts.time_steps < 256) throw InvalidArgument("solve_ahe needs at least 256 time steps");
  if (std::abs(op.theta() - forcing.theta()) > 1e-14)
    throw InvalidArgument("operator and forcing use different theta");
  TestFunction tf;
  tf.delta = forcing.delta();
  tf.theta = forcing.theta();
  tf.c_delta = c_delta(forcing.delta(), forcing.theta());
  tf.forcing = std::make_shared<const ForcingProfile>(forcing);
  tf.grid = std::make_shared<const BallGrid>(op.grid());
  tf.times = ahe_time_grid(forcing.scale(), opts.time_steps);
  tf.values = duhamel(forcing, op, tf.times, tf.c_delta);

  if (opts.check_refinement) {
    std::vector<double> fine;
    for (std::size_t k = 0; k + 1 < tf.times.size(); ++k) {
      fine.push_back(tf.times[k]);
      fine.push_back(0.5 * (tf.times[k] + tf.times[k + 1]));
    }
    fine.push_back(tf.times.back());
    const Eigen::MatrixXd ref = duhamel(forcing, op, fine, tf.c_delta);
    double diff = 0.0;
    for (Eigen::Index k = 0; k < tf.values.cols(); ++k)
      diff = std::max(diff, (tf.values.col(k) - ref.col(2 * k)).cwiseAbs().maxCoeff());
    const double top = ref.cwiseAbs().maxCoeff();
    tf.refinement_defect = top > 0.0 ? diff / top : 0.0;
    if (tf.refinement_defect > opts.refinement_tolerance)
      throw ConvergenceError("adjoint solve did not converge under time refinement: relative change " +
                             std::to_string(tf.refinement_defect) + " with " + std::to_string(opts.time_steps) +
                             " steps");
  }
  return tf;
}

LowerBound check_initial_lower_bound(const TestFunction& tf) {
  const auto& grid = *tf.grid;
  LowerBound out;
  out.profile = tf.initial_profile();
  out.c_min = std::numeric_limits<double>::infinity();
  // Unscaled nodes inside B(0, δ) are the rescaled nodes inside B(0, δτ^{1/θ}).
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (norm(grid.node(i), grid.dim()) < tf.delta) {
      out.c_min = std::min(out.c_min, out.profile(static_cast<Eigen::Index>(i)));
      ++out.nodes;
    }
  }
  if (out.nodes < 3)
    throw GridTooCoarse("fewer than 3 nodes inside B(0, delta); refine the ball grid");
  return out;
}

TestFunction rescale(const TestFunction& tf, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  TestFunction out = tf;
  out.tau_scale = tf.tau_scale * tau;
  return out;
}

double rhs_functional(const TestFunction& tf, double p) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  const ForcingProfile& f = *tf.forcing;
  const double tau = tf.tau_scale, theta = tf.theta;
  const int dim = tf.grid->dim();
  const double q = p / (p - 1.0);
  const double amp = tf.c_delta / tau;
  const auto kinks = f.breakpoints();
  const QuadOptions opts{1e-300, 1e-10, 4000};

  auto inner = [&](double r) {
    const double rt = std::pow(r, theta);
    std::vector<double> cuts;
    for (double b : kinks) cuts.push_back(tau * b - rt);
    auto g = [&](double t) {
      const double v = amp * f((rt + t) / tau);
      return v > 0.0 ? std::pow(v, q) : 0.0;
    };
    return integrate_adaptive(g, 0.0, tau, opts, cuts).value * (dim == 1 ? 1.0 : r);
  };
  const double radius = tf.support_radius();
  std::vector<double> rcuts;
  for (double b : kinks) rcuts.push_back(std::pow(tau * b, 1.0 / theta));
  return unit_sphere_area(dim) * integrate_adaptive(inner, 0.0, radius, opts, rcuts).value;
}

}  // namespace fracheat
