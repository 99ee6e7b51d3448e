#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fracheat/capacity.hpp"
#include "fracheat/field.hpp"
#include "fracheat/measure.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

enum class Scheme { integrating_factor, picard_duhamel };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SolverConfig {
  FracParams params;
  Grid grid{1, 16.0, 512};
  double t_end = 1.0;
  double dt_init = 1.0 / 256.0;
  double blowup_threshold = 1e8;
  Scheme scheme = Scheme::integrating_factor;
  /// Smoothing time of the initial measure; 0 selects t_end/100.
  double t0 = 0.0;
  /// Validation mode: false drops the u^p term.
  bool nonlinear = true;
  /// Largest accepted sup-norm ratio per step before dt is halved.
  double growth_limit = 1.25;
  bool monitor_domain = true;
  /// Keep every k-th accepted state (the first and last are always kept).
  int store_stride = 1;
  /// Picard: relative change declaring convergence, and iteration cap.
  double picard_tolerance = 1e-6;
  int max_iter = 300;
  /// If set, the last finite state is written here when a step produces NaN/Inf.
  std::optional<std::filesystem::path> dump_dir;

  void validate() const;
  double start_time() const { return t0 > 0.0 ? t0 : t_end / 100.0; }
};

enum class RunStatus { completed, blew_up, stalled };
std::string to_string(RunStatus s);

struct Trajectory {
  SolverConfig config;
  MeasureSpec initial_measure;
  std::vector<double> times;
  std::vector<Field> states;
  RunStatus status = RunStatus::completed;
  double t_blow = std::numeric_limits<double>::quiet_NaN();
  int steps = 0;
  int rejected_steps = 0;
  int iterations = 0;
  /// Largest negative value removed by clamping, relative to the sup-norm.
  double clamp_max = 0.0;

  double sup_norm(std::size_t k) const { return states[k].max_abs(); }
  double mass(std::size_t k) const { return states[k].integral(); }
};

/// S(t0)μ sampled on the grid: periodized kernel sums for atoms, midpoint
/// sub-lattices for densities.
Field mollify_initial(const MeasureSpec& mu, double t0, const Grid& grid, const FracParams& params);

/// Lawson integrating-factor RK4: the linear flow exp(−dt|ξ|^θ) is exact,
/// the nonlinearity explicit. dt halves whenever the sup-norm grows by more
/// than growth_limit in one step.
Trajectory integrate(const SolverConfig& config, const MeasureSpec& mu);

/// Picard iteration of the Duhamel equation on the uniform grid t0 + k·dt_init
/// with an exponential trapezoid rule. Iterates are monotone; the horizon is
/// cut where they cross blowup_threshold.
Trajectory picard_duhamel(const SolverConfig& config, const MeasureSpec& mu, int max_iter);

/// Dispatches on config.scheme.
Trajectory solve(const SolverConfig& config, const MeasureSpec& mu);

/// max over sampled stored times of |u − S(t)μ − ∫S(t−s)u^p ds| / max u.
double integral_residual(const Trajectory& traj, std::size_t max_samples = 8);

/// Space-time test function with compact support in [t0, horizon].
struct WeakTest {
  std::function<double(const Point&, double)> phi;
  double horizon = 0.0;
  std::string label;
};

/// |LHS − RHS| / max(|LHS|, |RHS|, ∫∫|u(−∂_t + L)φ|) for ∫∫u(−∂_t + L)φ = ∫∫u^pφ + ∫φ(t0)u(t0).
double weak_residual(const Trajectory& traj, const WeakTest& test, const MeasureSpec& mu);

/// Smooth cutoffs ζ_σ(x − c)ψ_σ(t − t0) at 3 radii × 3 centres.
std::vector<WeakTest> standard_test_bank(const SolverConfig& config);

struct SweepRun {
  double lambda = 0.0;
  RunStatus status = RunStatus::completed;
  double t_blow = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  double lambda_star = 0.0;
  double lambda_completes = 0.0;
  double lambda_blows = 0.0;
  std::vector<SweepRun> runs;
};

/// Bisection on λ between a completing and a blowing-up run of λ·shape.
SweepResult threshold_sweep(const MeasureSpec& shape, double lambda_min, double lambda_max, const SolverConfig& config,
                            int iterations = 12);

}  // namespace fracheat
