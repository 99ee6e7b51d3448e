#pragma once

#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fracheat/dirichlet.hpp"

namespace fracheat {

/// Quintic smoothstep 6u⁵ − 15u⁴ + 10u³ clamped to [0, 1].
double smoothstep(double u);

/// The forcing f_δ: zero below 2δ^θ, equal to 1/τ on [4δ^θ, 1/4], zero from
/// 1/2 on, with quintic ramps of margin `smoothing_width` in between.
class ForcingProfile {
 public:
  ForcingProfile(double delta, double theta, double smoothing_width);
  /// Default smoothing width δ^θ/4.
  ForcingProfile(double delta, double theta);

  double delta() const { return delta_; }
  double theta() const { return theta_; }
  double smoothing_width() const { return width_; }
  /// δ^θ.
  double scale() const { return scale_; }
  /// Multiplies the profile (0 gives the zero forcing).
  ForcingProfile scaled(double factor) const;
  double amplitude() const { return amplitude_; }

  double operator()(double tau) const;
  /// Points where the profile changes formula.
  std::vector<double> breakpoints() const;

 private:
  double delta_, theta_, width_, scale_;
  double amplitude_ = 1.0;
};

ForcingProfile build_forcing(double delta, double theta, double smoothing_width);

/// 1/(−log(32 δ^θ)).
double c_delta(double delta, double theta);

/// φ_δ on the nodes of a ball grid and a time grid on [0, 1], optionally
/// parabolically rescaled: φ_{δ,τ}(x,t) = φ_δ(x/τ^{1/θ}, t/τ).
struct TestFunction {
  double delta = 0.0;
  double theta = 2.0;
  double c_delta = 0.0;
  double tau_scale = 1.0;
  std::shared_ptr<const ForcingProfile> forcing;
  std::shared_ptr<const BallGrid> grid;
  /// Ascending times of the unscaled function, from 0 to 1.
  std::vector<double> times;
  /// values(node, time index).
  Eigen::MatrixXd values;
  /// Max relative change against a run with every time step halved (NaN if
  /// not checked).
  double refinement_defect = std::numeric_limits<double>::quiet_NaN();

  /// Interpolated φ_{δ,τ}(x,t); zero outside the support.
  double operator()(const Point& x, double t) const;
  /// Unscaled φ_δ(x_i, 0) for every node.
  Eigen::VectorXd initial_profile() const;
  /// Radius τ^{1/θ} of the spatial support.
  double support_radius() const;
};

struct AheOptions {
  int time_steps = 256;
  bool check_refinement = false;
  double refinement_tolerance = 1e-3;
};

/// Solves −∂_tφ + Aφ = c_δ f_δ(|x|^θ + t), φ(·,1) = 0 through the Duhamel
/// formula in the eigenbasis of A, with per-mode exact integration against
/// piecewise-linear forcing.
TestFunction solve_ahe(const ForcingProfile& forcing, const DirichletOperator& op, const AheOptions& opts = {});

struct LowerBound {
  double c_min = 0.0;
  std::size_t nodes = 0;
  Eigen::VectorXd profile;
};

/// Min of φ_{δ,τ}(·,0) over nodes inside B(0, δ·τ^{1/θ}); needs ≥ 3 nodes.
LowerBound check_initial_lower_bound(const TestFunction& tf);

TestFunction rescale(const TestFunction& tf, double tau);

/// ∫∫ [c_δ τ^{−1} f_δ((|x|^θ + t)/τ)]^{p/(p−1)} dx dt by nested quadrature.
double rhs_functional(const TestFunction& tf, double p);

}  // namespace fracheat
