#pragma once

#include <utility>
#include <vector>

#include "fracheat/field.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

/// exp(−1/(1−|x|²)) on |x| < 1, zero elsewhere (not normalized).
double bump(double r);

/// ∫_{R^N} bump(|x|) dx for N ∈ {1, 2}.
double bump_mass(int dim);

/// Radially symmetric unit-mass mollifier η_ε(x) = ε^{−N} η(x/ε).
///
/// `profile` is η sampled at unit scale on the lattice the mollifier acts on
/// (lattice spacing / ε), renormalized to unit discrete mass, so that
/// mollify() preserves discrete integrals exactly.
class Mollifier {
 public:
  Mollifier(int dim, double epsilon, double lattice_spacing);

  double epsilon() const { return epsilon_; }
  int dim() const { return profile_.grid().dim(); }
  double lattice_spacing() const { return lattice_spacing_; }
  const Field& profile() const { return profile_; }

  /// Continuous η_ε(x).
  double operator()(const Point& x) const;

 private:
  double epsilon_;
  double lattice_spacing_;
  Field profile_;
};

/// Discrete periodic convolution f ∗ η_ε. Requires ε ≥ grid spacing and a
/// mollifier built for the same lattice.
Field mollify(const Field& f, const Mollifier& m);

/// max over pairs of |(−Δ)_x η_ε(x−y) − (−Δ)_y η_ε(y−x)|, both sides by the
/// P.V. quadrature.
double check_mollifier_antisymmetry(const Mollifier& m, const FracParams& params,
                                    const std::vector<std::pair<Point, Point>>& pairs,
                                    double cutoff);

}  // namespace fracheat
