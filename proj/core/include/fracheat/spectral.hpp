#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fracheat/field.hpp"

namespace fracheat {

/// Order θ of (−Δ)^{θ/2}, dimension N and nonlinearity exponent p.
struct FracParams {
  double theta = 1.0;
  int n_dim = 1;
  double p_exponent = 2.0;

  void validate() const;
  /// p_{θ,N} = 1 + θ/N.
  double critical_exponent() const { return 1.0 + theta / n_dim; }
  /// p/(p−1).
  double dual_exponent() const { return p_exponent / (p_exponent - 1.0); }
  bool classical() const { return theta == 2.0; }
};

double unit_sphere_area(int dim);
double unit_ball_volume(int dim);

/// A(N,θ) = Γ((N+θ)/2) / (π^{N/2} Γ(2−θ/2)) · (θ/2)(1−θ/2). Throws
/// ClassicalLaplacian for θ = 2.
double normalizing_constant(const FracParams& params);

/// Kernel constant of the |ξ|^θ multiplier, 2^θ · A(N,θ): with it,
/// levy_constant · P.V.∫ (u(x)−u(y))/|x−y|^{N+θ} dy has symbol |ξ|^θ. It is
/// also the tail amplitude Γ_θ(x,t) ~ t·levy_constant·|x|^{−N−θ}.
double levy_constant(const FracParams& params);

/// Fourier multiplier |ξ|^θ on the periodic grid.
Field apply_fraclap_spectral(const Field& f, const FracParams& params);

using ScalarFunction = std::function<double(const Point&)>;

struct PvOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  /// Radius beyond which the tail is integrated on a mapped interval.
  double outer_radius = 64.0;
  /// Compact-support hints: the quadrature places breakpoints where |x − c|
  /// crosses the support boundary so narrow bumps are never stepped over.
  struct Support {
    Point center{};
    double radius = 0.0;
  };
  std::vector<Support> supports;
};

/// levy_constant · P.V.∫ (f(x) − f(y))/|x−y|^{N+θ} dy. The ball of radius
/// `cutoff` around x uses the second-order symmetric correction
/// −Δf(x)/(2N)·|S^{N−1}|·cutoff^{2−θ}/(2−θ); the rest is adaptive quadrature
/// of the symmetric difference 2f(x) − f(x+z) − f(x−z). Throws
/// ClassicalLaplacian for θ = 2 and ConvergenceError when the tail does not
/// converge.
double apply_fraclap_pv(const ScalarFunction& f, const Point& x, const FracParams& params,
                        double cutoff, const PvOptions& opts = {});

/// (p/(p−1))·f^{1/(p−1)}·(−Δ)^{θ/2}f − (−Δ)^{θ/2}(f^{p/(p−1)}). Nonnegative
/// for smooth nonnegative f up to discretization.
Field jensen_gap(const Field& f, const FracParams& params);

/// |⟨(−Δ)^{θ/2}f, g⟩ − ⟨f, (−Δ)^{θ/2}g⟩| with the spectral operator.
double selfadjoint_defect(const Field& f, const Field& g, const FracParams& params);

/// Same defect with the P.V. operator, on the nodes of `grid` (both functions
/// should be supported well inside it). Returns the relative defect
/// |a − b| / max(|a|, |b|).
double selfadjoint_defect_pv(const ScalarFunction& f, const ScalarFunction& g, const Grid& grid,
                             const FracParams& params, double cutoff,
                             const PvOptions& f_opts = {}, const PvOptions& g_opts = {});

}  // namespace fracheat
