#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fracheat/field.hpp"
#include "fracheat/kernel.hpp"

namespace fracheat {

/// Interior nodes of a uniform grid masked to the open unit ball.
class BallGrid {
 public:
  /// 1D: nodes −1 + i·h, 0 < i < 2/h, with h = 1/intervals_per_unit.
  /// 2D: tensor nodes (i·h, j·h) with |x| < 1.
  BallGrid(int dim, int intervals_per_unit);

  int dim() const { return dim_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  /// 1 − |x| per node.
  const std::vector<double>& boundary_distance() const { return distance_; }
  /// Integer lattice coordinates of a node (second entry zero in 1D).
  std::array<int, 2> lattice(std::size_t i) const { return lattice_[i]; }
  /// Index of the node at lattice coordinates (i, j), or −1.
  std::ptrdiff_t find(int i, int j = 0) const;
  /// h^N.
  double cell_volume() const { return dim_ == 1 ? spacing_ : spacing_ * spacing_; }

 private:
  int dim_;
  int per_unit_;
  double spacing_;
  std::vector<Point> nodes_;
  std::vector<double> distance_;
  std::vector<std::array<int, 2>> lattice_;
  std::vector<std::ptrdiff_t> index_;
};

/// Restricted fractional Laplacian on B(0,1) with zero exterior data (θ < 2)
/// or the Dirichlet finite-difference Laplacian (θ = 2), eigen-decomposed.
class DirichletOperator {
 public:
  static DirichletOperator assemble(const BallGrid& grid, double theta);

  const BallGrid& grid() const { return grid_; }
  double theta() const { return theta_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// Ascending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// ℓ²-orthonormal columns.
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

  double symmetry_defect() const;
  double orthonormality_defect() const;

  /// exp(−t·A)·v.
  Eigen::VectorXd propagate(const Eigen::VectorXd& v, double t) const;

 private:
  DirichletOperator(BallGrid grid, double theta, Eigen::MatrixXd matrix);

  BallGrid grid_;
  double theta_;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// Dirichlet heat kernel G_B(x_i, x_j, t) = Σ e^{−λ_n t} e_n(x_i) e_n(x_j) with
/// eigenfunctions normalized in L²(B).
class DirichletKernel {
 public:
  explicit DirichletKernel(const DirichletOperator& op) : op_(&op) {}

  const DirichletOperator& op() const { return *op_; }
  double operator()(std::size_t i, std::size_t j, double t) const;
  /// G_B(x_i, ·, t) at all nodes.
  Eigen::VectorXd row(std::size_t i, double t) const;

 private:
  const DirichletOperator* op_;
};

struct KernelSample {
  std::size_t i = 0;
  std::size_t j = 0;
  double t = 0.0;
};

struct TwoSidedBand {
  double c = 1.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::size_t samples = 0;
};

/// Random node pairs at least one spacing from ∂B with t log-uniform in
/// [t_min, t_max]; pairs whose comparison kernel underflows are redrawn.
std::vector<KernelSample> sample_two_sided(const DirichletOperator& op, std::size_t count, std::uint64_t seed,
                                           double t_min = 0.02, double t_max = 1.0);

/// Ratio G_B / [(1 ∧ d(x)^{θ/2}/√t)(1 ∧ d(y)^{θ/2}/√t) Γ_θ(x−y, c·t)] per
/// candidate c.
std::vector<TwoSidedBand> verify_two_sided(const DirichletOperator& op, const std::vector<KernelSample>& samples,
                                           const std::vector<double>& c_candidates);

}  // namespace fracheat
