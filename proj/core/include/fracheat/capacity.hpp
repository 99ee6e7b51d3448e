#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracheat/field.hpp"
#include "fracheat/measure.hpp"
#include "fracheat/spectral.hpp"
#include "fracheat/testfn.hpp"

namespace fracheat {

/// sup_z μ(B(z,σ)) over atoms, pairwise atom midpoints and a lattice of
/// pitch `search_resolution` anchored at the lower corner of the hull.
double sup_ball_mass(const MeasureSpec& mu, double sigma, double search_resolution);

/// N − θ/(p−1).
double subcritical_exponent(double p, double theta, int n_dim);
bool is_critical(double p, double theta, int n_dim);

/// γ·σ^{N−θ/(p−1)}; rejects the critical exponent.
double subcritical_bound(double sigma, double p, double theta, int n_dim, double gamma);
/// γ·[log(e + T^{1/θ}/σ)]^{−N/θ}; requires σ < T^{1/θ}.
double critical_bound(double sigma, double T, double theta, int n_dim, double gamma);

enum class Verdict { satisfied, violated };
std::string to_string(Verdict v);

struct CapacityReport {
  std::vector<double> sigma_grid;
  std::vector<double> sup_ball_mass;
  std::vector<double> bound_values;
  std::vector<Verdict> verdicts;
  double gamma_used = 0.0;
  bool critical = false;
  std::optional<double> smallest_violating_sigma;
  std::optional<double> largest_violating_sigma;
};

/// Compares sup_ball_mass with the applicable bound at each σ. The search
/// lattice pitch is σ/8 unless `search_resolution` is given.
CapacityReport necessary_check(const MeasureSpec& mu, double T, double p, double theta, int n_dim, double gamma,
                               const std::vector<double>& sigma_grid,
                               std::optional<double> search_resolution = std::nullopt);

/// C^∞ step: 1 for u ≤ 0, 0 for u ≥ 1, built from e^{−1/s}.
double smooth_transition(double u);

/// Spatial cutoff ζ_σ (1 on B(0,σ/2), 0 outside B(0, 0.95σ)) and temporal
/// cutoff ψ_σ (1 on [0, σ^θ/4], 0 on [3σ^θ/4, ∞)).
struct CutoffPair {
  double sigma = 1.0;
  double theta = 2.0;
  Field spatial;
  std::function<double(double)> temporal;

  double zeta(const Point& x) const;
  double psi(double t) const { return temporal(t); }
  /// ζ_σ(x − center)·ψ_σ(t).
  double operator()(const Point& x, double t, const Point& center = {}) const;
};

CutoffPair build_cutoff(double sigma, double theta, const Grid& grid);

/// A test function sampled on a periodic grid at uniformly spaced times
/// t_k = k·dt, k = 0..K, with the last slice the terminal value.
struct SampledTestFunction {
  std::vector<double> times;
  std::vector<Field> slices;
};

/// ∫∫ |(−∂_t + (−Δ)^{θ/2})φ|^{p/(p−1)}: spectral operator per slice,
/// centred time differences, trapezoid in time.
double kihon_rhs(const SampledTestFunction& phi, double p, double theta);
/// Separable ζ_σψ_σ: the spatial operator is applied once.
double kihon_rhs(const CutoffPair& phi, double p, int time_steps = 2048);
/// Adjoint test function φ_{δ,τ}: level-set form of the integral.
double kihon_rhs(const TestFunction& phi, double p);

/// ∫ φ(x,0)^{p/(p−1)} dμ.
double kihon_lhs(const std::function<double(const Point&)>& phi0, const MeasureSpec& mu, double p);

}  // namespace fracheat
