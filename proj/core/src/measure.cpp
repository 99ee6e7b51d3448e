#include "fracheat/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "fracheat/error.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {
namespace {

double interval_overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Area of the intersection of two disks.
double lens_area(double d, double r1, double r2) {
  if (d >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (d <= std::abs(r1 - r2)) return std::numbers::pi * rmin * rmin;
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(k, 0.0));
}

// Area of box ∩ disk by integrating clipped chord lengths.
double box_disk_area(const BoxRegion& box, const Point& c, double r) {
  const double x0 = std::max(box.lower[0], c[0] - r);
  const double x1 = std::min(box.upper[0], c[0] + r);
  if (x1 <= x0) return 0.0;
  auto chord = [&](double x) {
    const double dx = x - c[0];
    const double half = std::sqrt(std::max(r * r - dx * dx, 0.0));
    return interval_overlap(c[1] - half, c[1] + half, box.lower[1], box.upper[1]);
  };
  std::vector<double> cuts{c[0]};
  for (double y : {box.lower[1], box.upper[1]}) {
    const double dy = y - c[1];
    if (std::abs(dy) < r) {
      const double w = std::sqrt(r * r - dy * dy);
      cuts.push_back(c[0] - w);
      cuts.push_back(c[0] + w);
    }
  }
  return integrate_adaptive(chord, x0, x1, {1e-14, 1e-12, 2000}, cuts).value;
}

Point read_point(const nlohmann::json& j, int& dim) {
  if (!j.is_array() || j.empty() || j.size() > 2) throw InvalidArgument("points must be arrays of 1 or 2 numbers");
  const int d = static_cast<int>(j.size());
  if (dim == 0) dim = d;
  if (d != dim) throw InvalidArgument("mixed point dimensions in measure");
  Point p{};
  for (int a = 0; a < d; ++a) p[a] = j[a].get<double>();
  return p;
}

nlohmann::json write_point(const Point& p, int dim) {
  auto j = nlohmann::json::array();
  for (int a = 0; a < dim; ++a) j.push_back(p[a]);
  return j;
}

}  // namespace

double region_volume(const Region& region, int dim) {
  if (const auto* b = std::get_if<BallRegion>(&region))
    return dim == 1 ? 2.0 * b->radius : std::numbers::pi * b->radius * b->radius;
  const auto& box = std::get<BoxRegion>(region);
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= std::max(0.0, box.upper[a] - box.lower[a]);
  return v;
}

double region_ball_overlap(const Region& region, int dim, const Point& center, double radius) {
  if (const auto* b = std::get_if<BallRegion>(&region)) {
    if (dim == 1)
      return interval_overlap(b->center[0] - b->radius, b->center[0] + b->radius, center[0] - radius,
                              center[0] + radius);
    return lens_area(norm(b->center - center, 2), b->radius, radius);
  }
  const auto& box = std::get<BoxRegion>(region);
  if (dim == 1) return interval_overlap(box.lower[0], box.upper[0], center[0] - radius, center[0] + radius);
  return box_disk_area(box, center, radius);
}

void MeasureSpec::validate() const {
  if (dim != 1 && dim != 2) throw InvalidArgument("measure dimension must be 1 or 2");
  for (const auto& a : atoms)
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass)) throw InvalidArgument("atom masses must be finite and >= 0");
  for (const auto& d : densities) {
    if (!(d.level >= 0.0) || !std::isfinite(d.level))
      throw InvalidArgument("density levels must be finite and >= 0");
    if (const auto* b = std::get_if<BallRegion>(&d.region); b && !(b->radius > 0.0))
      throw InvalidArgument("density balls need a positive radius");
    if (const auto* b = std::get_if<BoxRegion>(&d.region))
      for (int a = 0; a < dim; ++a)
        if (!(b->upper[a] > b->lower[a])) throw InvalidArgument("density boxes need upper > lower");
  }
}

bool MeasureSpec::empty() const { return total_mass() == 0.0; }

double MeasureSpec::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.mass;
  for (const auto& d : densities) m += d.level * region_volume(d.region, dim);
  return m;
}

double MeasureSpec::ball_mass(const Point& center, double radius) const {
  double m = 0.0;
  for (const auto& a : atoms)
    if (norm(a.center - center, dim) <= radius) m += a.mass;
  for (const auto& d : densities)
    if (d.level > 0.0) m += d.level * region_ball_overlap(d.region, dim, center, radius);
  return m;
}

double MeasureSpec::density_at(const Point& x) const {
  double s = 0.0;
  for (const auto& d : densities) {
    bool inside;
    if (const auto* b = std::get_if<BallRegion>(&d.region)) {
      inside = norm(x - b->center, dim) <= b->radius;
    } else {
      const auto& box = std::get<BoxRegion>(d.region);
      inside = true;
      for (int a = 0; a < dim; ++a) inside = inside && x[a] >= box.lower[a] && x[a] <= box.upper[a];
    }
    if (inside) s += d.level;
  }
  return s;
}

std::pair<Point, Point> MeasureSpec::hull() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Point lo{inf, inf}, hi{-inf, -inf};
  auto take = [&](const Point& a, const Point& b) {
    for (int k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], a[k]);
      hi[k] = std::max(hi[k], b[k]);
    }
  };
  for (const auto& a : atoms) take(a.center, a.center);
  for (const auto& d : densities) {
    if (const auto* b = std::get_if<BallRegion>(&d.region)) {
      const Point r{b->radius, b->radius};
      take(b->center - r, b->center + r);
    } else {
      const auto& box = std::get<BoxRegion>(d.region);
      take(box.lower, box.upper);
    }
  }
  if (lo[0] > hi[0]) return {Point{}, Point{}};
  if (dim == 1) lo[1] = hi[1] = 0.0;
  return {lo, hi};
}

MeasureSpec MeasureSpec::scaled(double lambda) const {
  if (!(lambda >= 0.0)) throw InvalidArgument("measure scale must be >= 0");
  MeasureSpec out = *this;
  for (auto& a : out.atoms) a.mass *= lambda;
  for (auto& d : out.densities) d.level *= lambda;
  return out;
}

MeasureSpec MeasureSpec::translated(const Point& shift) const {
  MeasureSpec out = *this;
  for (auto& a : out.atoms) a.center = a.center + shift;
  for (auto& d : out.densities) {
    if (auto* b = std::get_if<BallRegion>(&d.region)) {
      b->center = b->center + shift;
    } else {
      auto& box = std::get<BoxRegion>(d.region);
      box.lower = box.lower + shift;
      box.upper = box.upper + shift;
    }
  }
  return out;
}

MeasureSpec MeasureSpec::single_atom(int dim, const Point& center, double mass) {
  MeasureSpec mu;
  mu.dim = dim;
  mu.atoms.push_back({center, mass});
  return mu;
}

MeasureSpec measure_from_json(const nlohmann::json& doc) {
  MeasureSpec mu;
  int dim = doc.contains("dim") ? doc.at("dim").get<int>() : 0;
  if (doc.contains("atoms"))
    for (const auto& a : doc.at("atoms")) mu.atoms.push_back({read_point(a.at("center"), dim), a.at("mass").get<double>()});
  if (doc.contains("densities")) {
    for (const auto& d : doc.at("densities")) {
      Density den;
      den.level = d.at("level").get<double>();
      if (d.contains("ball")) {
        const auto& b = d.at("ball");
        den.region = BallRegion{read_point(b.at("center"), dim), b.at("radius").get<double>()};
      } else if (d.contains("box")) {
        const auto& b = d.at("box");
        den.region = BoxRegion{read_point(b.at("lower"), dim), read_point(b.at("upper"), dim)};
      } else {
        throw InvalidArgument("density entries need a \"ball\" or \"box\" region");
      }
      mu.densities.push_back(den);
    }
  }
  mu.dim = dim == 0 ? 1 : dim;
  mu.validate();
  return mu;
}

nlohmann::json measure_to_json(const MeasureSpec& mu) {
  nlohmann::json doc;
  doc["dim"] = mu.dim;
  doc["atoms"] = nlohmann::json::array();
  for (const auto& a : mu.atoms) doc["atoms"].push_back({{"center", write_point(a.center, mu.dim)}, {"mass", a.mass}});
  doc["densities"] = nlohmann::json::array();
  for (const auto& d : mu.densities) {
    nlohmann::json e;
    e["level"] = d.level;
    if (const auto* b = std::get_if<BallRegion>(&d.region))
      e["ball"] = {{"center", write_point(b->center, mu.dim)}, {"radius", b->radius}};
    else {
      const auto& box = std::get<BoxRegion>(d.region);
      e["box"] = {{"lower", write_point(box.lower, mu.dim)}, {"upper", write_point(box.upper, mu.dim)}};
    }
    doc["densities"].push_back(e);
  }
  return doc;
}

MeasureSpec read_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open measure file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed measure file " + path.string() + ": " + e.what());
  }
  return measure_from_json(doc);
}

}  // namespace fracheat
