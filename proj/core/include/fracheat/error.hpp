#pragma once

#include <stdexcept>
#include <string>

namespace fracheat {

/// An input violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// θ = 2 was routed to a representation that only exists for θ < 2.
class ClassicalLaplacian : public std::domain_error {
 public:
  ClassicalLaplacian()
      : std::domain_error("classical Laplacian: theta = 2 has no integral representation") {}
};

/// A quadrature, fixed-point or refinement loop did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The grid cannot resolve a requested feature.
class GridTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The solution reached the edge of the periodic box.
class DomainTooSmall : public std::runtime_error {
 public:
  explicit DomainTooSmall(const std::string& what)
      : std::runtime_error("domain too small: " + what) {}
};

/// NaN/Inf or a structural breakdown (indefinite matrix, non-monotone iterates).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracheat
