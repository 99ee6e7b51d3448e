#include "fracheat/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracheat/error.hpp"

namespace fracheat {

double norm(const Point& x, int dim) {
  return dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
}
Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }

Grid::Grid(int dim, double extent, int points_per_axis)
    : dim_(dim), extent_(extent), n_(points_per_axis) {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw InvalidArgument("grid extent must be positive");
  if (points_per_axis < 16 || points_per_axis % 2 != 0)
    throw InvalidArgument("points_per_axis must be an even integer >= 16, got " +
                          std::to_string(points_per_axis));
}

double Grid::cell_volume() const { return dim_ == 1 ? spacing() : spacing() * spacing(); }

std::size_t Grid::size() const {
  const auto n = static_cast<std::size_t>(n_);
  return dim_ == 1 ? n : n * n;
}

Point Grid::point(std::size_t flat) const {
  if (dim_ == 1) return {coord(static_cast<int>(flat)), 0.0};
  const auto n = static_cast<std::size_t>(n_);
  return {coord(static_cast<int>(flat / n)), coord(static_cast<int>(flat % n))};
}

std::size_t Grid::flat_index(int i, int j) const {
  return dim_ == 1 ? static_cast<std::size_t>(i)
                   : static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + j;
}

Field::Field(Grid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidArgument("field size does not match its grid");
}

double Field::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("field grids differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("field grids differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double inner_product(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("field grids differ");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * g[k];
  return s * f.grid().cell_volume();
}

}  // namespace fracheat
