#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace fracheat {

/// Point in R^N, N ∈ {1, 2}; unused trailing components are zero.
using Point = std::array<double, 2>;

double norm(const Point& x, int dim);
Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);

/// Uniform periodic grid on [-L, L)^N.
class Grid {
 public:
  Grid(int dim, double extent, int points_per_axis);

  int dim() const { return dim_; }
  double extent() const { return extent_; }
  int points_per_axis() const { return n_; }
  double spacing() const { return 2.0 * extent_ / n_; }
  double cell_volume() const;
  std::size_t size() const;

  double coord(int i) const { return -extent_ + i * spacing(); }
  /// Row-major: flat = i (1D) or i * n + j (2D), i along the first axis.
  Point point(std::size_t flat) const;
  std::size_t flat_index(int i, int j = 0) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  double extent_;
  int n_;
};

/// Real scalar samples on a Grid.
class Field {
 public:
  explicit Field(Grid grid, double fill = 0.0);
  Field(Grid grid, std::vector<double> values);

  template <class Fn>
  static Field sample(const Grid& grid, Fn&& fn) {
    Field f(grid);
    for (std::size_t k = 0; k < f.size(); ++k) f.values_[k] = fn(grid.point(k));
    return f;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  /// spacing^N · Σ values.
  double integral() const;
  double max_abs() const;
  double min() const;
  double max() const;
  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// spacing^N · Σ f·g.
double inner_product(const Field& f, const Field& g);

}  // namespace fracheat
