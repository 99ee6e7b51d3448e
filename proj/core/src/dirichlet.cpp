#include "fracheat/dirichlet.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fracheat/error.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {
namespace {

double cos_power_integral(double power) {
  return integrate_adaptive([power](double phi) { return std::pow(std::cos(phi), power); }, 0.0,
                            std::numbers::pi / 4.0, {1e-15, 1e-13, 200})
      .value;
}

// Second-order defect of the cell-midpoint far field on a unit lattice:
// Σ_{k≥1} ∫_{cell k} [2k(y−k) + (y−k)²] |y|^{−1−θ} dy. Scales as h^{2−θ}.
double midpoint_defect_1d(double theta) {
  const auto& gl = GaussLegendre::rule(20);
  constexpr int cells = 4000;
  double s = 0.0;
  for (int k = 1; k <= cells; ++k) {
    double cell = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double z = 0.5 * gl.nodes[q];
      cell += gl.weights[q] * (2.0 * k * z + z * z) * std::pow(k + z, -1.0 - theta);
    }
    s += 0.5 * cell;
  }
  return s - (1.0 + 2.0 * theta) / 12.0 * std::pow(cells + 0.5, -theta) / theta;
}

}  // namespace

BallGrid::BallGrid(int dim, int intervals_per_unit) : dim_(dim), per_unit_(intervals_per_unit) {
  if (dim != 1 && dim != 2) throw InvalidArgument("ball grid dimension must be 1 or 2");
  if (intervals_per_unit < 32) throw InvalidArgument("ball grid spacing must be at most 1/32");
  spacing_ = 1.0 / intervals_per_unit;
  const int p = intervals_per_unit;
  const int side = 2 * p + 1;
  index_.assign(dim == 1 ? side : static_cast<std::size_t>(side) * side, -1);
  for (int i = -p + 1; i < p; ++i) {
    for (int j = (dim == 2 ? -p + 1 : 0); j < (dim == 2 ? p : 1); ++j) {
      if (i * i + j * j >= p * p) continue;
      const Point x{i * spacing_, j * spacing_};
      index_[dim == 1 ? i + p : static_cast<std::size_t>(i + p) * side + (j + p)] =
          static_cast<std::ptrdiff_t>(nodes_.size());
      nodes_.push_back(x);
      lattice_.push_back({i, j});
      distance_.push_back(1.0 - norm(x, dim));
    }
  }
}

std::ptrdiff_t BallGrid::find(int i, int j) const {
  const int p = per_unit_;
  if (std::abs(i) >= p || std::abs(j) >= p) return -1;
  if (dim_ == 1) return j == 0 ? index_[i + p] : -1;
  return index_[static_cast<std::size_t>(i + p) * (2 * p + 1) + (j + p)];
}

DirichletOperator::DirichletOperator(BallGrid grid, double theta, Eigen::MatrixXd matrix)
    : grid_(std::move(grid)), theta_(theta), matrix_(std::move(matrix)) {
  const int n = static_cast<int>(matrix_.rows());
  if (symmetry_defect() > 1e-12 * std::max(1.0, matrix_.cwiseAbs().maxCoeff()))
    throw NumericalError("assembled Dirichlet operator is not symmetric");
  eigenvectors_ = matrix_;
  eigenvalues_.resize(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, eigenvectors_.data(), n, eigenvalues_.data());
  if (info != 0) throw NumericalError("symmetric eigensolver failed (info " + std::to_string(info) + ")");
  if (!(eigenvalues_(0) > 0.0))
    throw NumericalError("assembled Dirichlet operator is not positive definite (lambda_1 = " +
                         std::to_string(eigenvalues_(0)) + ")");
}

DirichletOperator DirichletOperator::assemble(const BallGrid& grid, double theta) {
  if (!(theta > 0.0 && theta <= 2.0)) throw InvalidArgument("theta must lie in (0, 2]");
  const int dim = grid.dim();
  const double h = grid.spacing();
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);

  auto add_neighbour_stencil = [&](double weight) {
    // weight·(2N·u_i − Σ neighbours), exterior neighbours are zero.
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto [li, lj] = grid.lattice(static_cast<std::size_t>(i));
      a(i, i) += 2.0 * dim * weight;
      const int offs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (int k = 0; k < 2 * dim; ++k) {
        const auto j = grid.find(li + offs[k][0], lj + offs[k][1]);
        if (j >= 0) a(i, j) -= weight;
      }
    }
  };

  if (theta == 2.0) {
    add_neighbour_stencil(1.0 / (h * h));
    return DirichletOperator(grid, theta, std::move(a));
  }

  const double c = levy_constant({theta, dim, 2.0});
  const double half = 0.5 * h;
  if (dim == 1) {
    // Far field outside the self-cell, split into node cells and exterior.
    const double far = 2.0 * std::pow(half, -theta) / theta;
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, i) = c * far;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double d = std::abs(static_cast<double>(i - j)) * h;
        a(i, j) = -c * (std::pow(d - half, -theta) - std::pow(d + half, -theta)) / theta;
      }
    }
    // Self-cell −u''·(h/2)^{2−θ}/(2−θ), plus the leading midpoint-rule defect
    // of the far cells, both against the three-point u''.
    const double self = std::pow(half, 2.0 - theta) / (2.0 - theta) + std::pow(h, 2.0 - theta) * midpoint_defect_1d(theta);
    add_neighbour_stencil(c * self / (h * h));
    return DirichletOperator(grid, theta, std::move(a));
  }

  // 2D: cell integrals of |z|^{−2−θ} by tensor Gauss-Legendre, cached per offset.
  const int span = 2 * static_cast<int>(std::lround(1.0 / h)) + 1;
  const auto& gl = GaussLegendre::rule(8);
  std::vector<double> cell(static_cast<std::size_t>(span + 1) * (span + 1), 0.0);
  for (int di = 0; di <= span; ++di) {
    for (int dj = 0; dj <= span; ++dj) {
      if (di == 0 && dj == 0) continue;
      double s = 0.0;
      for (std::size_t p = 0; p < gl.nodes.size(); ++p)
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
          const double x = (di + 0.5 * gl.nodes[p]) * h, y = (dj + 0.5 * gl.nodes[q]) * h;
          s += gl.weights[p] * gl.weights[q] * std::pow(x * x + y * y, -0.5 * (2.0 + theta));
        }
      cell[static_cast<std::size_t>(di) * (span + 1) + dj] = s * 0.25 * h * h;
    }
  }
  const double far = 8.0 * std::pow(half, -theta) / theta * cos_power_integral(theta);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [ii, ij] = grid.lattice(static_cast<std::size_t>(i));
    a(i, i) = c * far;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto [ji, jj] = grid.lattice(static_cast<std::size_t>(j));
      a(i, j) = -c * cell[static_cast<std::size_t>(std::abs(ii - ji)) * (span + 1) + std::abs(ij - jj)];
    }
  }
  // Self-cell: −Δu/4·∫_{square}|z|^{−θ} with the five-point Δu.
  const double self = 8.0 * std::pow(half, 2.0 - theta) / (2.0 - theta) * cos_power_integral(theta - 2.0);
  add_neighbour_stencil(c * self / (4.0 * h * h));
  return DirichletOperator(grid, theta, std::move(a));
}

double DirichletOperator::symmetry_defect() const { return (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff(); }

double DirichletOperator::orthonormality_defect() const {
  const auto n = eigenvectors_.cols();
  return (eigenvectors_.transpose() * eigenvectors_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

Eigen::VectorXd DirichletOperator::propagate(const Eigen::VectorXd& v, double t) const {
  Eigen::VectorXd coeff = eigenvectors_.transpose() * v;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::exp(-eigenvalues_(k) * t);
  return eigenvectors_ * coeff;
}

double DirichletKernel::operator()(std::size_t i, std::size_t j, double t) const {
  if (!(t > 0.0)) throw InvalidArgument("heat kernel time must be positive");
  const auto& v = op_->eigenvectors();
  const auto& lam = op_->eigenvalues();
  const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
  double s = 0.0;
  for (Eigen::Index k = 0; k < lam.size(); ++k) s += std::exp(-lam(k) * t) * (v(ii, k) * v(jj, k));
  return s / op_->grid().cell_volume();
}

Eigen::VectorXd DirichletKernel::row(std::size_t i, double t) const {
  if (!(t > 0.0)) throw InvalidArgument("heat kernel time must be positive");
  const auto& v = op_->eigenvectors();
  const auto& lam = op_->eigenvalues();
  Eigen::VectorXd w = v.row(static_cast<Eigen::Index>(i)).transpose();
  for (Eigen::Index k = 0; k < lam.size(); ++k) w(k) *= std::exp(-lam(k) * t);
  return v * w / op_->grid().cell_volume();
}

namespace {

double boundary_factor(double d, double theta, double t) {
  return std::min(1.0, std::pow(d, 0.5 * theta) / std::sqrt(t));
}

}  // namespace

std::vector<KernelSample> sample_two_sided(const DirichletOperator& op, std::size_t count, std::uint64_t seed,
                                           double t_min, double t_max) {
  const auto& grid = op.grid();
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.boundary_distance()[i] >= grid.spacing() * (1.0 - 1e-12)) eligible.push_back(i);
  if (eligible.empty()) throw GridTooCoarse("no nodes at least one spacing from the boundary");
  KernelEvaluator gamma({op.theta(), grid.dim(), 2.0});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
  std::uniform_real_distribution<double> logt(std::log(t_min), std::log(t_max));
  std::vector<KernelSample> out;
  while (out.size() < count) {
    KernelSample s{eligible[pick(rng)], eligible[pick(rng)], std::exp(logt(rng))};
    // The eigen-expansion cannot resolve values many orders below G_B(x,x,t).
    const double rel = gamma.eval_gamma(grid.node(s.i) - grid.node(s.j), s.t) / gamma.eval_gamma({0.0, 0.0}, s.t);
    if (rel < 1e-6) continue;
    out.push_back(s);
  }
  return out;
}

std::vector<TwoSidedBand> verify_two_sided(const DirichletOperator& op, const std::vector<KernelSample>& samples,
                                           const std::vector<double>& c_candidates) {
  const auto& grid = op.grid();
  const double theta = op.theta();
  KernelEvaluator gamma({theta, grid.dim(), 2.0});
  DirichletKernel g(op);
  std::vector<double> kernel(samples.size());
  parallel_for(samples.size(), [&](std::size_t k) { kernel[k] = g(samples[k].i, samples[k].j, samples[k].t); });
  std::vector<TwoSidedBand> bands;
  for (double c : c_candidates) {
    TwoSidedBand band{c, std::numeric_limits<double>::infinity(), 0.0, samples.size()};
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto& s = samples[k];
      const double form = boundary_factor(grid.boundary_distance()[s.i], theta, s.t) *
                          boundary_factor(grid.boundary_distance()[s.j], theta, s.t) *
                          gamma.eval_gamma(grid.node(s.i) - grid.node(s.j), c * s.t);
      const double r = kernel[k] / form;
      band.ratio_min = std::min(band.ratio_min, r);
      band.ratio_max = std::max(band.ratio_max, r);
    }
    bands.push_back(band);
  }
  return bands;
}

}  // namespace fracheat
