#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fracheat {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  int evaluations = 0;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Extra breakpoints seed
/// the initial partition; use them wherever the integrand has structure
/// narrower than the interval.
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const QuadOptions& opts = {},
                              std::span<const double> breakpoints = {});

/// ∫_a^∞ f via x = a + s/(1-s).
QuadResult integrate_to_infinity(const Integrand& f, double a, const QuadOptions& opts = {});

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Cached rule with n points (n >= 1).
  static const GaussLegendre& rule(int n);
};

/// Fixed n-point Gauss-Legendre on [a, b].
double integrate_gauss(const Integrand& f, double a, double b, int n = 20);

}  // namespace fracheat
