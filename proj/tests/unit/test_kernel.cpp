#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "fracheat/error.hpp"
#include "fracheat/kernel.hpp"
#include "oracles.hpp"

using namespace fracheat;

namespace {

FracParams make(double theta, int dim) {
  FracParams f;
  f.theta = theta;
  f.n_dim = dim;
  return f;
}

}  // namespace

TEST_CASE("closed forms at the origin") {
  CHECK(shared_kernel(make(2.0, 1)).eval_gamma(Point{}, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(4 * std::numbers::pi)).epsilon(1e-14));
  CHECK(shared_kernel(make(1.0, 1)).eval_gamma(Point{}, 1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(shared_kernel(make(1.0, 2)).eval_gamma(Point{}, 1.0) ==
        doctest::Approx(1.0 / (2 * std::numbers::pi)).epsilon(1e-14));
  const double ref = oracle::stable_density_1d(0.0, 1.0, 1.5);
  CHECK(std::abs(shared_kernel(make(1.5, 1)).eval_gamma(Point{}, 1.0) - ref) < 1e-6);
  CHECK_THROWS_AS(shared_kernel(make(1.5, 1)).eval_gamma(Point{}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(shared_kernel(make(1.5, 1)).eval_gamma(Point{}, -1.0), InvalidArgument);
}

TEST_CASE("inversion against Boost quadrature") {
  for (int dim : {1, 2})
    for (double theta : {0.7, 1.0, 1.3, 1.5, 1.7, 2.0}) {
      const KernelEvaluator& k = shared_kernel(make(theta, dim));
      for (double r : {0.0, 0.3, 1.0, 2.5, 6.0})
        for (double t : {0.5, 1.0, 2.0}) {
          const double ref = oracle::stable_density(dim, r, t, theta);
          if (ref < 1e-12) continue;
          const Point x{r, 0.0};
          INFO("dim=" << dim << " theta=" << theta << " r=" << r << " t=" << t);
          CHECK(std::abs(k.eval_gamma(x, t) - ref) <= 1e-7 * ref + 1e-12);
          // 2D tables take seconds to build; one fractional order is enough.
          if (dim == 1 || theta == 1.5) CHECK(std::abs(k.eval_fast(x, t) - ref) <= 1e-6 * ref + 1e-12);
          CHECK(k.eval_gamma(x, t) > 0.0);
        }
    }
}

TEST_CASE("tail expansion") {
  for (int dim : {1, 2})
    for (double theta : {0.8, 1.5}) {
      const KernelEvaluator& k = shared_kernel(make(theta, dim));
      const double r = dim == 1 ? 60.0 : 30.0;
      const double ref = oracle::stable_density(dim, r, 1.0, theta);
      CHECK(k.tail(r, 1.0) == doctest::Approx(ref).epsilon(1e-6));
      // Leading term t·C·r^{-N-θ}.
      CHECK(k.tail(1e4, 1.0) == doctest::Approx(levy_constant(make(theta, dim)) * std::pow(1e4, -dim - theta)).epsilon(1e-6));
    }
  CHECK(shared_kernel(make(2.0, 1)).tail(10.0, 1.0) == 0.0);
}

TEST_CASE("scaling identity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> logt(std::log(0.25), std::log(4.0));
  for (int dim : {1, 2})
    for (double theta : {1.0, 1.3, 1.5, 1.7, 2.0}) {
      const KernelEvaluator& k = shared_kernel(make(theta, dim));
      std::vector<std::pair<Point, double>> at_one, samples;
      for (int i = 0; i < 50; ++i) {
        const Point x = oracle::random_point(rng, dim, -4.0, 4.0);
        at_one.push_back({x, 1.0});
        samples.push_back({x, std::exp(logt(rng))});
      }
      CHECK(k.check_scaling(at_one) == 0.0);
      CHECK(k.check_scaling(samples) < (theta == 2.0 ? 1e-10 : 1e-6));
    }
}

TEST_CASE("tail exponent") {
  const std::vector<double> radii{10, 15, 20, 30, 50, 70, 100, 150, 200};
  for (auto [theta, dim] : std::vector<std::pair<double, int>>{{1.0, 1}, {1.0, 2}, {1.5, 1}, {1.5, 2}}) {
    const DecayReport d = shared_kernel(make(theta, dim)).check_decay(radii);
    CHECK(d.target == -(dim + theta));
    CHECK(std::abs(d.slope - d.target) < 0.05 * std::abs(d.target));
    CHECK(d.ratio_min > 0.0);
    CHECK(std::isfinite(d.ratio_max));
  }
  CHECK_THROWS_AS(shared_kernel(make(2.0, 1)).check_decay(radii), InvalidArgument);
}

TEST_CASE("radial monotonicity") {
  std::mt19937_64 rng(9);
  for (auto [theta, dim] : std::vector<std::pair<double, int>>{{1.7, 2}, {2.0, 1}, {1.0, 1}, {0.6, 2}}) {
    std::vector<std::pair<Point, Point>> pairs;
    for (int i = 0; i < 100; ++i) {
      Point a = oracle::random_point(rng, dim, -8, 8), b = oracle::random_point(rng, dim, -8, 8);
      if (norm(a, dim) < norm(b, dim)) std::swap(a, b);
      pairs.push_back({a, b});
    }
    // Equal radii.
    pairs.push_back({Point{1.5, 0.0}, dim == 1 ? Point{-1.5, 0.0} : Point{0.0, 1.5}});
    const MonotoneReport rep = shared_kernel(make(theta, dim)).check_radial_monotone(pairs);
    CHECK(rep.ok);
    CHECK(rep.worst_violation <= 1e-10);
  }
}

TEST_CASE("kernel mass") {
  CHECK(std::abs(shared_kernel(make(2.0, 1)).kernel_mass(1.0) - 1.0) < 1e-10);
  CHECK(std::abs(shared_kernel(make(1.0, 1)).kernel_mass(1.0) - 1.0) < 1e-8);
  CHECK(std::abs(shared_kernel(make(1.5, 1)).kernel_mass(0.5) - 1.0) < 1e-4);
  for (int dim : {1, 2})
    for (double theta : {1.0, 2.0})
      for (double t : {0.1, 1.0, 10.0}) CHECK(std::abs(shared_kernel(make(theta, dim)).kernel_mass(t) - 1.0) < 1e-6);
  for (double theta : {1.3, 1.7}) CHECK(std::abs(shared_kernel(make(theta, 2)).kernel_mass(1.0) - 1.0) < 1e-4);
}

TEST_CASE("semigroup property") {
  // Γ(·,t+s) = Γ(·,t) ∗ Γ(·,s), convolution by double-exponential quadrature.
  boost::math::quadrature::sinh_sinh<double> ss;
  for (double theta : {1.0, 1.5, 2.0}) {
    const KernelEvaluator& k = shared_kernel(make(theta, 1));
    for (double x : {0.0, 0.7, 3.0}) {
      const double conv = ss.integrate([&](double y) {
        return k.eval_fast(Point{x - y, 0}, 0.3) * k.eval_fast(Point{y, 0}, 0.5);
      });
      CHECK(std::abs(conv - k.eval_gamma(Point{x, 0}, 0.8)) < 1e-6);
    }
  }
}

TEST_CASE("periodized kernel") {
  const KernelEvaluator& g2 = shared_kernel(make(2.0, 1));
  const double L = 1.5, t = 0.7;
  for (double x : {0.0, 0.4, 1.4}) {
    double sum = 0.0;
    for (int k = -50; k <= 50; ++k) sum += g2.eval_gamma(Point{x + 2 * L * k, 0}, t);
    CHECK(g2.eval_periodic(Point{x, 0}, t, L) == doctest::Approx(sum).epsilon(1e-12));
  }
  const KernelEvaluator& g1 = shared_kernel(make(1.0, 1));
  // Cauchy kernel periodized: (1/2L)·sinh(πt/L)/(cosh(πt/L) − cos(πx/L)).
  for (double x : {0.0, 0.4, 1.4}) {
    const double a = std::numbers::pi / L;
    const double exact = std::sinh(a * t) / (std::cosh(a * t) - std::cos(a * x)) / (2 * L);
    CHECK(g1.eval_periodic(Point{x, 0}, t, L) == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("radial table export") {
  const KernelEvaluator k(make(1.5, 1), 512);
  const auto table = k.radial_table();
  REQUIRE(table.size() >= 256);
  CHECK(table.front().first == 0.0);
  for (std::size_t i = 1; i < table.size(); ++i) {
    CHECK(table[i].first > table[i - 1].first);
    CHECK(table[i].second <= table[i - 1].second + 1e-12);
  }
  const auto path = std::filesystem::temp_directory_path() / "fracheat_radial_table.csv";
  k.write_radial_table_csv(path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("radius", 0) == 0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(KernelEvaluator(make(1.5, 1), 100), InvalidArgument);
  CHECK(&shared_kernel(make(1.5, 1)) == &shared_kernel(make(1.5, 1)));
}
