#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fracheat/field.hpp"

namespace fracheat {

struct Atom {
  Point center{};
  double mass = 0.0;
};

struct BallRegion {
  Point center{};
  double radius = 0.0;
};

struct BoxRegion {
  Point lower{};
  Point upper{};
};

using Region = std::variant<BallRegion, BoxRegion>;

struct Density {
  Region region;
  double level = 0.0;
};

/// Nonnegative measure: weighted Dirac atoms plus piecewise-constant densities.
struct MeasureSpec {
  int dim = 1;
  std::vector<Atom> atoms;
  std::vector<Density> densities;

  void validate() const;
  bool empty() const;
  double total_mass() const;
  /// μ(closed ball B(center, radius)).
  double ball_mass(const Point& center, double radius) const;
  /// Sum of density levels at x (atoms excluded).
  double density_at(const Point& x) const;
  /// Axis-aligned box [lo, hi] containing every atom and region.
  std::pair<Point, Point> hull() const;

  MeasureSpec scaled(double lambda) const;
  MeasureSpec translated(const Point& shift) const;

  static MeasureSpec single_atom(int dim, const Point& center, double mass);
};

double region_volume(const Region& region, int dim);
/// |region ∩ B(center, radius)|.
double region_ball_overlap(const Region& region, int dim, const Point& center, double radius);

MeasureSpec measure_from_json(const nlohmann::json& doc);
nlohmann::json measure_to_json(const MeasureSpec& mu);
MeasureSpec read_measure(const std::filesystem::path& path);

}  // namespace fracheat
