#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracheat/error.hpp"
#include "fracheat/fft.hpp"
#include "fracheat/mollifier.hpp"
#include "fracheat/spectral.hpp"
#include "oracles.hpp"

using namespace fracheat;

namespace {

FracParams make(double theta, int dim, double p = 2.0) {
  FracParams f;
  f.theta = theta;
  f.n_dim = dim;
  f.p_exponent = p;
  return f;
}

Field random_smooth_field(std::mt19937_64& rng, const Grid& grid) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), width(0.3, 1.0);
  std::vector<std::array<double, 4>> bumps;
  for (int k = 0; k < 3; ++k) {
    const Point c = oracle::random_point(rng, grid.dim(), -grid.extent() / 3, grid.extent() / 3);
    bumps.push_back({c[0], c[1], amp(rng), width(rng)});
  }
  return Field::sample(grid, [&](const Point& x) {
    double s = 0.0;
    for (const auto& b : bumps) {
      const double r = norm(x - Point{b[0], b[1]}, grid.dim());
      s += b[2] * std::exp(-r * r / (2 * b[3] * b[3]));
    }
    return s;
  });
}

Field mollified_plateaus(std::mt19937_64& rng, const Grid& grid, const Mollifier& m) {
  std::uniform_real_distribution<double> level(0.2, 2.0), half(0.3, 1.5);
  const Point c1 = oracle::random_point(rng, grid.dim(), -2.0, 2.0), c2 = oracle::random_point(rng, grid.dim(), -2.0, 2.0);
  const double r1 = half(rng), r2 = half(rng), a1 = level(rng), a2 = level(rng);
  const Field step = Field::sample(grid, [&](const Point& x) {
    return (norm(x - c1, grid.dim()) < r1 ? a1 : 0.0) + (norm(x - c2, grid.dim()) < r2 ? a2 : 0.0);
  });
  return mollify(step, m);
}

}  // namespace

TEST_CASE("grid and field basics") {
  CHECK_THROWS_AS(Grid(1, 8.0, 8), InvalidArgument);
  CHECK_THROWS_AS(Grid(3, 8.0, 64), InvalidArgument);
  CHECK_THROWS_AS(Grid(1, -1.0, 64), InvalidArgument);
  const Grid g(2, 4.0, 32);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.size() == 1024);
  CHECK(g.point(g.flat_index(3, 5))[0] == doctest::Approx(g.coord(3)));
  CHECK(g.point(g.flat_index(3, 5))[1] == doctest::Approx(g.coord(5)));
  CHECK_THROWS_AS(Field(g, std::vector<double>(10)), InvalidArgument);
  const Field one(g, 1.0);
  CHECK(one.integral() == doctest::Approx(64.0).epsilon(1e-14));
}

TEST_CASE("normalizing constant against a 50-digit Gamma oracle") {
  CHECK(normalizing_constant(make(1.0, 1)) == doctest::Approx(1.0 / (2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(normalizing_constant(make(1.0, 2)) == doctest::Approx(1.0 / (4 * std::numbers::pi)).epsilon(1e-14));
  for (double theta : {0.3, 0.7, 1.0, 1.3, 1.5, 1.7, 1.99})
    for (int n : {1, 2})
      CHECK(normalizing_constant(make(theta, n)) ==
            doctest::Approx(oracle::normalizing_constant(n, theta)).epsilon(1e-13));
  double prev = normalizing_constant(make(1.9, 1));
  for (double theta : {1.99, 1.999, 1.9999}) {
    const double a = normalizing_constant(make(theta, 1));
    CHECK(a < prev);
    prev = a;
  }
  CHECK(prev < 1e-4);
  CHECK_THROWS_AS(normalizing_constant(make(2.0, 1)), ClassicalLaplacian);
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(make(0.0, 1).validate(), InvalidArgument);
  CHECK_THROWS_AS(make(2.1, 1).validate(), InvalidArgument);
  CHECK_THROWS_AS(make(1.0, 1, 1.0).validate(), InvalidArgument);
  CHECK(make(2.0, 1).critical_exponent() == 3.0);
  CHECK(make(1.0, 2).critical_exponent() == 1.5);
}

TEST_CASE("spectral operator") {
  const Grid g(1, 16.0, 1024);
  SUBCASE("constant field maps to zero") {
    for (double theta : {0.5, 1.0, 2.0}) CHECK(apply_fraclap_spectral(Field(g, 3.0), make(theta, 1)).max_abs() < 1e-12);
  }
  SUBCASE("theta 2 is minus the Laplacian") {
    const Field f = Field::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0] / 2); });
    const Field lf = apply_fraclap_spectral(f, make(2.0, 1));
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double x = g.point(k)[0];
      err = std::max(err, std::abs(lf[k] - (1 - x * x) * std::exp(-x * x / 2)));
    }
    CHECK(err < 1e-10);
  }
  SUBCASE("theta 1 Gaussian at the origin against a Fourier quadrature") {
    // The frequency lattice has spacing π/L and |ξ| has a kink at 0, so the
    // box must be wide for 1e-6.
    const Grid g(1, 2048.0, 65536);
    const Field f = Field::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0] / 2); });
    const Field lf = apply_fraclap_spectral(f, make(1.0, 1));
    boost::math::quadrature::exp_sinh<double> es;
    const double ref =
        es.integrate([](double xi) { return xi * std::sqrt(2 * std::numbers::pi) * std::exp(-xi * xi / 2); }) /
        std::numbers::pi;
    CHECK(std::abs(lf[g.flat_index(32768)] - ref) < 1e-6);
  }
  SUBCASE("zero discrete mean and self-adjointness") {
    std::mt19937_64 rng(7);
    for (int dim : {1, 2}) {
      const Grid grid(dim, 8.0, dim == 1 ? 512 : 64);
      for (double theta : {0.4, 1.0, 1.5, 2.0}) {
        const Field f = random_smooth_field(rng, grid), h = random_smooth_field(rng, grid);
        const Field lf = apply_fraclap_spectral(f, make(theta, dim));
        CHECK(std::abs(lf.integral()) <= 1e-10 * (std::abs(lf.values()[0]) + lf.max_abs() * grid.size() *
                                                                                  grid.cell_volume()));
        CHECK(selfadjoint_defect(f, f, make(theta, dim)) == 0.0);
        CHECK(selfadjoint_defect(f, h, make(theta, dim)) < 1e-10);
      }
    }
  }
}

TEST_CASE("principal value operator") {
  const FracParams p1 = make(1.0, 1);
  CHECK(std::abs(apply_fraclap_pv([](const Point&) { return 2.5; }, Point{0.3, 0}, p1, 0.1)) < 1e-12);
  CHECK_THROWS_AS(apply_fraclap_pv([](const Point&) { return 1.0; }, Point{}, make(2.0, 1), 0.1), ClassicalLaplacian);

  SUBCASE("Gaussian at the origin matches the spectral value") {
    const Grid g(1, 2048.0, 65536);
    const Field f = Field::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0] / 2); });
    const double spec = apply_fraclap_spectral(f, p1)[g.flat_index(32768)];
    const double pv = apply_fraclap_pv([](const Point& x) { return std::exp(-x[0] * x[0] / 2); }, Point{}, p1, 0.05);
    CHECK(std::abs(pv - spec) < 1e-4);
  }

  SUBCASE("mollifier: negative outside its support") {
    for (int dim : {1, 2})
      for (double theta : {0.5, 1.0, 1.5}) {
        const Mollifier m(dim, 1.0, dim == 1 ? 1.0 / 64 : 1.0 / 16);
        PvOptions opts;
        opts.supports.push_back({Point{}, 1.0});
        for (double r : {1.1, 1.5, 3.0}) {
          const Point x = dim == 1 ? Point{r, 0} : Point{r / std::sqrt(2.0), r / std::sqrt(2.0)};
          CHECK(apply_fraclap_pv([&](const Point& y) { return m(y); }, x, make(theta, dim), 0.25 * (r - 1), opts) < 0);
        }
      }
  }

  SUBCASE("spectral and P.V. agree on a mollifier profile") {
    // Periodic images contribute O(L^-θ), hence the wide box.
    const Grid g(1, 64.0, 16384);
    const Mollifier m(1, 1.0, g.spacing());
    const FracParams p = make(1.5, 1);
    const Field lf = apply_fraclap_spectral(Field::sample(g, [&](const Point& x) { return m(x); }), p);
    PvOptions opts;
    opts.supports.push_back({Point{}, 1.0});
    double worst = 0.0;
    for (double x : {0.0, 0.5, -0.9, 1.5, 3.0}) {
      const auto i = static_cast<std::size_t>(std::lround((x + g.extent()) / g.spacing()));
      worst = std::max(worst, std::abs(apply_fraclap_pv([&](const Point& y) { return m(y); }, g.point(i), p,
                                                        2 * g.spacing(), opts) - lf[i]));
    }
    CHECK(worst < std::max(1e-4, 1e-3 * lf.max_abs()));
  }

  SUBCASE("self-adjointness of the P.V. form on mollifiers") {
    const Grid g(1, 4.0, 256);
    const Mollifier m(1, 0.8, 1.0 / 64);
    const FracParams p = make(1.0, 1);
    PvOptions fo, go;
    fo.supports.push_back({Point{}, 0.8});
    go.supports.push_back({Point{0.3, 0}, 0.8});
    const double d = selfadjoint_defect_pv([&](const Point& x) { return m(x); },
                                           [&](const Point& x) { return m(x - Point{0.3, 0}); }, g, p, 2 * g.spacing(),
                                           fo, go);
    CHECK(d < 1e-5);
  }
}

TEST_CASE("mollifier") {
  for (int dim : {1, 2}) {
    const double h = dim == 1 ? 1.0 / 32 : 1.0 / 8;
    const Mollifier m(dim, 1.0, h);
    const Field& prof = m.profile();
    CHECK(prof.min() >= 0.0);
    CHECK(prof.integral() == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t k = 0; k < prof.size(); ++k)
      if (norm(prof.grid().point(k), dim) > 1.0) CHECK(prof[k] == 0.0);
    if (dim == 2) {
      // (3,4) and (0,5) lattice points share |x| = 5h.
      const double r = 5 * prof.grid().spacing();
      double a = -1, b = -1;
      for (std::size_t k = 0; k < prof.size(); ++k) {
        const Point x = prof.grid().point(k);
        if (std::abs(x[0] - 0.6 * r) < 1e-12 && std::abs(x[1] - 0.8 * r) < 1e-12) a = prof[k];
        if (std::abs(x[0]) < 1e-12 && std::abs(x[1] - r) < 1e-12) b = prof[k];
      }
      REQUIRE(a > 0);
      CHECK(std::abs(a - b) <= 1e-12 * a);
    }
  }
  CHECK(bump(0.5) == doctest::Approx(std::exp(-1.0 / 0.75)));
  CHECK(bump(1.0) == 0.0);
  const double bm = boost::math::quadrature::gauss_kronrod<double, 61>::integrate([](double r) { return bump(r); }, -1.0, 1.0, 15, 1e-14);
  CHECK(bump_mass(1) == doctest::Approx(bm).epsilon(1e-10));

  const Grid g(1, 8.0, 512);
  CHECK_THROWS_AS(mollify(Field(g, 1.0), Mollifier(1, 0.5 * g.spacing(), g.spacing())), InvalidArgument);
  const Mollifier m(1, 4 * g.spacing(), g.spacing());
  const Field c = mollify(Field(g, 2.5), m);
  CHECK(c.max() == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(c.min() == doctest::Approx(2.5).epsilon(1e-13));
  const Field box = Field::sample(g, [](const Point& x) { return std::abs(x[0]) < 1.3 ? 1.0 : 0.0; });
  const Field mb = mollify(box, m);
  CHECK(mb.min() >= 0.0);
  CHECK(std::abs(mb.integral() - box.integral()) < 1e-8 * box.integral());
}

TEST_CASE("mollifier antisymmetry") {
  std::mt19937_64 rng(3);
  const Mollifier m1(1, 0.5, 1.0 / 512);
  CHECK(check_mollifier_antisymmetry(m1, make(1.0, 1), {{Point{0.2, 0}, Point{0.2, 0}}}, 0.025) == 0.0);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < 20; ++i)
    pairs.push_back({oracle::random_point(rng, 1, -0.75, 0.75), oracle::random_point(rng, 1, -0.75, 0.75)});
  CHECK(check_mollifier_antisymmetry(m1, make(1.0, 1), pairs, 0.025) < 1e-6);

  const Mollifier m2(2, 0.5, 1.0 / 32);
  pairs.clear();
  for (int i = 0; i < 20; ++i)
    pairs.push_back({oracle::random_point(rng, 2, -0.75, 0.75), oracle::random_point(rng, 2, -0.75, 0.75)});
  CHECK(check_mollifier_antisymmetry(m2, make(1.5, 2), pairs, 0.025) < 1e-4);
}

TEST_CASE("jensen gap") {
  const Grid g(1, 8.0, 4096);
  CHECK(jensen_gap(Field(g, 1.7), make(1.0, 1, 2.0)).max_abs() < 1e-12);
  Field neg(g, 1.0);
  neg[10] = -1e-6;
  CHECK_THROWS_AS(jensen_gap(neg, make(1.0, 1, 2.0)), InvalidArgument);

  std::mt19937_64 rng(11);
  const Mollifier m(1, 0.5, g.spacing());
  for (double theta : {1.0, 2.0})
    for (double p : {2.0, 3.0})
      for (int i = 0; i < 5; ++i) {
        const Field f = mollified_plateaus(rng, g, m);
        const double q = p / (p - 1);
        double scale = 0.0;
        for (double v : f.values()) scale = std::max(scale, std::pow(v, q));
        CHECK(jensen_gap(f, make(theta, 1, p)).min() >= -1e-8 * scale);
      }
}

TEST_CASE("fft helpers") {
  const Grid g(1, std::numbers::pi, 64);
  const auto k = wave_magnitudes(g);
  REQUIRE(k.size() >= 33);
  CHECK(k[0] == 0.0);
  CHECK(k[1] == doctest::Approx(1.0));
  Field f = Field::sample(g, [](const Point& x) { return std::cos(3 * x[0]); });
  std::vector<double> mult(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) mult[i] = k[i] * k[i];
  apply_multiplier(f, mult);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(f[i] == doctest::Approx(9 * std::cos(3 * g.point(i)[0])).scale(1));
}
