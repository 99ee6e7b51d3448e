#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "fracheat/field.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

struct DecayReport {
  double slope = 0.0;
  double target = 0.0;
  /// Band of Γ(x,1)·(1+|x|)^{N+θ} over the radii.
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

struct MonotoneReport {
  bool ok = true;
  double worst_violation = 0.0;
};

/// Fundamental solution Γ_θ(x,t) of ∂_t + (−Δ)^{θ/2} on R^N.
class KernelEvaluator {
 public:
  /// `quadrature_resolution` is the node count of the radial table behind
  /// eval_fast; `box_extent` the truncation radius (at t = 1) of kernel_mass.
  explicit KernelEvaluator(FracParams params, int quadrature_resolution = 4096, double box_extent = 40.0);

  const FracParams& params() const { return params_; }
  int quadrature_resolution() const { return resolution_; }
  double box_extent() const { return box_extent_; }

  /// Γ_θ(x,t); closed forms for θ ∈ {1, 2}, Fourier inversion otherwise.
  double eval_gamma(const Point& x, double t) const;
  /// Radial Fourier inversion of exp(−t|ξ|^θ) at |x| = r, for any θ.
  double invert(double r, double t) const;
  /// Table-backed Γ_θ(x,t) via the scaling law; O(1) per call.
  double eval_fast(const Point& x, double t) const;
  /// Σ over periods 2L of Γ_θ(x + 2Lk, t): the kernel on the box [−L, L)^N.
  double eval_periodic(const Point& x, double t, double half_width) const;
  /// Large-|x| expansion of Γ_θ(x,t) (zero for θ = 2).
  double tail(double r, double t) const;

  /// Max relative gap between Γ(x,t) and t^{−N/θ}Γ(t^{−1/θ}x, 1).
  double check_scaling(const std::vector<std::pair<Point, double>>& samples) const;
  /// Least-squares slope of log Γ(r,1) against log(1 + r).
  DecayReport check_decay(const std::vector<double>& radii) const;
  /// Pairs (x, y) with |x| ≥ |y|; checks Γ(x,1) ≤ Γ(y,1) + 1e−10.
  MonotoneReport check_radial_monotone(const std::vector<std::pair<Point, Point>>& pairs) const;
  /// ∫ Γ(x,t) dx over the ball of radius box_extent·t^{1/θ} plus the tail.
  double kernel_mass(double t) const;

  /// (radius, Γ(radius, 1)) nodes of the table.
  std::vector<std::pair<double, double>> radial_table() const;
  void write_radial_table_csv(const std::filesystem::path& path) const;

 private:
  double closed_form(double r, double t) const;
  double profile(double r) const;
  const std::vector<double>& table() const;

  FracParams params_;
  int resolution_;
  double box_extent_;
  std::vector<double> tail_coeffs_;
  struct LazyTable {
    std::once_flag once;
    std::vector<double> values;
  };
  std::shared_ptr<LazyTable> table_;
};

inline constexpr double kKernelTableRadius = 40.0;

/// Process-wide evaluator per (θ, N) so each radial table is built once.
const KernelEvaluator& shared_kernel(const FracParams& params);

}  // namespace fracheat
