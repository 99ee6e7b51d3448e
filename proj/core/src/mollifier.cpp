#include "fracheat/mollifier.hpp"

#include <cmath>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {

double bump(double r) {
  const double s = 1.0 - r * r;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

double bump_mass(int dim) {
  static const double m1 = 2.0 * integrate_adaptive([](double r) { return bump(r); }, 0.0, 1.0,
                                                    {1e-15, 1e-14, 4000}).value;
  static const double m2 = 2.0 * std::numbers::pi *
                           integrate_adaptive([](double r) { return r * bump(r); }, 0.0, 1.0,
                                              {1e-15, 1e-14, 4000}).value;
  if (dim == 1) return m1;
  if (dim == 2) return m2;
  throw InvalidArgument("dimension must be 1 or 2");
}

namespace {

Field build_profile(int dim, double epsilon, double lattice_spacing) {
  if (!(epsilon > 0.0) || !(lattice_spacing > 0.0))
    throw InvalidArgument("mollifier radius and lattice spacing must be positive");
  const double hs = lattice_spacing / epsilon;
  int half = static_cast<int>(std::floor(1.0 / hs)) + 1;
  half = std::max(half, 8);
  const int n = 2 * half;
  Grid g(dim, half * hs, n);
  Field prof(g);
  // Integer offsets from the centre keep the profile exactly symmetric.
  double sum = 0.0;
  for (std::size_t k = 0; k < prof.size(); ++k) {
    const int i = dim == 1 ? static_cast<int>(k) : static_cast<int>(k / n);
    const int j = dim == 1 ? half : static_cast<int>(k % n);
    const double r = dim == 1 ? std::abs(i - half) * hs : std::hypot((i - half) * hs, (j - half) * hs);
    prof[k] = bump(r);
    sum += prof[k];
  }
  const double norm_factor = 1.0 / (sum * g.cell_volume());
  for (double& v : prof.values()) v *= norm_factor;
  return prof;
}

}  // namespace

Mollifier::Mollifier(int dim, double epsilon, double lattice_spacing)
    : epsilon_(epsilon), lattice_spacing_(lattice_spacing), profile_(build_profile(dim, epsilon, lattice_spacing)) {}

double Mollifier::operator()(const Point& x) const {
  const int n = dim();
  return std::pow(epsilon_, -n) * bump(norm(x, n) / epsilon_) / bump_mass(n);
}

Field mollify(const Field& f, const Mollifier& m) {
  const Grid& grid = f.grid();
  const double h = grid.spacing();
  if (m.dim() != grid.dim()) throw InvalidArgument("mollifier and field dimensions differ");
  if (m.epsilon() < h) throw InvalidArgument("mollifier radius is smaller than the grid spacing");
  if (std::abs(m.lattice_spacing() - h) > 1e-12 * h)
    throw InvalidArgument("mollifier was built for a different lattice spacing");

  const Field& prof = m.profile();
  const int pn = prof.grid().points_per_axis();
  const int half = pn / 2;
  const double w0 = prof.grid().cell_volume();
  struct Tap {
    int di, dj;
    double w;
  };
  std::vector<Tap> taps;
  for (std::size_t k = 0; k < prof.size(); ++k) {
    if (prof[k] == 0.0) continue;
    if (grid.dim() == 1)
      taps.push_back({static_cast<int>(k) - half, 0, prof[k] * w0});
    else
      taps.push_back({static_cast<int>(k / pn) - half, static_cast<int>(k % pn) - half, prof[k] * w0});
  }

  const int n = grid.points_per_axis();
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  Field out(grid);
  if (grid.dim() == 1) {
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      double s = 0.0;
      for (const auto& t : taps) s += t.w * f[wrap(static_cast<int>(i) - t.di)];
      out[i] = s;
    });
  } else {
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (const auto& t : taps)
          s += t.w * f[grid.flat_index(wrap(static_cast<int>(i) - t.di), wrap(j - t.dj))];
        out[grid.flat_index(static_cast<int>(i), j)] = s;
      }
    });
  }
  return out;
}

double check_mollifier_antisymmetry(const Mollifier& m, const FracParams& params,
                                    const std::vector<std::pair<Point, Point>>& pairs, double cutoff) {
  std::vector<double> gaps(pairs.size(), 0.0);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto& [x, y] = pairs[k];
    PvOptions ox, oy;
    ox.supports = {{y, m.epsilon()}};
    oy.supports = {{x, m.epsilon()}};
    ox.outer_radius = oy.outer_radius = std::max(64.0, 4.0 * (norm(x - y, m.dim()) + m.epsilon()));
    const double lhs = apply_fraclap_pv([&](const Point& z) { return m(z - y); }, x, params, cutoff, ox);
    const double rhs = apply_fraclap_pv([&](const Point& w) { return m(w - x); }, y, params, cutoff, oy);
    gaps[k] = std::abs(lhs - rhs);
  });
  double worst = 0.0;
  for (double g : gaps) worst = std::max(worst, g);
  return worst;
}

}  // namespace fracheat
