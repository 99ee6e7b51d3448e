#include "fracheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {
namespace {

constexpr double kPi = std::numbers::pi;

// ∫ over R^2 minus the square [−a, a]^2 of |y|^{−2−θ} dy.
double square_complement(double a, double theta) {
  const double ang = integrate_adaptive([theta](double phi) { return std::pow(std::cos(phi), theta); }, 0.0,
                                        kPi / 4.0, {1e-15, 1e-13, 200})
                         .value;
  return 8.0 * std::pow(a, -theta) / theta * ang;
}

}  // namespace

KernelEvaluator::KernelEvaluator(FracParams params, int quadrature_resolution, double box_extent)
    : params_(params), resolution_(quadrature_resolution), box_extent_(box_extent),
      table_(std::make_shared<LazyTable>()) {
  params_.validate();
  if (quadrature_resolution < 256) throw InvalidArgument("quadrature_resolution must be at least 256");
  if (!(box_extent > 0.0)) throw InvalidArgument("box_extent must be positive");
  const double th = params_.theta, n = params_.n_dim;
  if (!params_.classical()) {
    // Asymptotic expansion Γ(r,1) ~ Σ a_k r^{−N−kθ}; keep terms while they shrink at r = 40.
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 12; ++k) {
      double sine = std::sin(0.5 * k * kPi * th);
      if (std::abs(sine) < 1e-12) sine = 0.0;
      const double a = std::pow(kPi, -0.5 * n - 1.0) * (k % 2 == 1 ? 1.0 : -1.0) / std::tgamma(k + 1.0) *
                       std::tgamma(0.5 * k * th + 1.0) * std::tgamma(0.5 * k * th + 0.5 * n) * sine *
                       std::pow(2.0, k * th);
      const double size = std::abs(a) * std::pow(kKernelTableRadius, -k * th);
      if (size > prev) break;
      if (size != 0.0) prev = size;
      tail_coeffs_.push_back(a);
    }
  }
}

double KernelEvaluator::closed_form(double r, double t) const {
  const int n = params_.n_dim;
  if (params_.theta == 2.0) return std::pow(4.0 * kPi * t, -0.5 * n) * std::exp(-r * r / (4.0 * t));
  const double cn = std::tgamma(0.5 * (n + 1)) / std::pow(kPi, 0.5 * (n + 1));
  return cn * t / std::pow(t * t + r * r, 0.5 * (n + 1));
}

double KernelEvaluator::invert(double r, double t) const {
  if (!(t > 0.0)) throw InvalidArgument("kernel time must be positive");
  const double th = params_.theta;
  const int n = params_.n_dim;
  const double xi_max = std::pow(40.0 / t, 1.0 / th);
  double width = 0.5 * std::pow(t, -1.0 / th);
  if (r > 0.0) width = std::min(width, 2.0 * kPi / r);
  const auto& gl = GaussLegendre::rule(20);

  auto integrand = [&](double xi) {
    const double damp = std::exp(-t * std::pow(xi, th));
    return n == 1 ? std::cos(r * xi) * damp : std::cyl_bessel_j(0.0, r * xi) * xi * damp;
  };
  auto panel = [&](double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * integrand(c + h * gl.nodes[i]);
    return s * h;
  };

  // Geometric grading into ξ = 0, where ξ^θ is not smooth.
  double sum = 0.0;
  double hi = width;
  for (int k = 0; k < 40; ++k) {
    sum += panel(0.5 * hi, hi);
    hi *= 0.5;
  }
  sum += panel(0.0, hi);
  const int panels = static_cast<int>(std::ceil((xi_max - width) / width));
  for (int k = 0; k < panels; ++k) sum += panel(width * (k + 1), width * (k + 2));
  return n == 1 ? sum / kPi : sum / (2.0 * kPi);
}

double KernelEvaluator::eval_gamma(const Point& x, double t) const {
  if (!(t > 0.0)) throw InvalidArgument("kernel time must be positive");
  const double r = norm(x, params_.n_dim);
  if (params_.theta == 2.0 || params_.theta == 1.0) return closed_form(r, t);
  return invert(r, t);
}

double KernelEvaluator::tail(double r, double t) const {
  const double th = params_.theta;
  double s = 0.0;
  for (std::size_t k = 0; k < tail_coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    s += tail_coeffs_[k] * std::pow(t, kk) * std::pow(r, -params_.n_dim - kk * th);
  }
  return s;
}

const std::vector<double>& KernelEvaluator::table() const {
  std::call_once(table_->once, [this] {
    auto& v = table_->values;
    v.resize(static_cast<std::size_t>(resolution_));
    const double dr = kKernelTableRadius / (resolution_ - 1);
    for (int i = 0; i < resolution_; ++i) v[i] = invert(i * dr, 1.0);
  });
  return table_->values;
}

double KernelEvaluator::profile(double r) const {
  if (r >= kKernelTableRadius) return tail(r, 1.0);
  const auto& v = table();
  const int m = static_cast<int>(v.size());
  const double dr = kKernelTableRadius / (m - 1);
  const double u = r / dr;
  int i = static_cast<int>(std::floor(u));
  i = std::clamp(i, 0, m - 2);
  const int i0 = std::clamp(i - 1, -1, m - 4);
  const double s = u - i0;
  // Cubic Lagrange on nodes i0..i0+3; node −1 mirrors node 1 (Γ is even in r).
  auto node = [&](int k) { return v[static_cast<std::size_t>(std::abs(k))]; };
  const double f0 = node(i0), f1 = node(i0 + 1), f2 = node(i0 + 2), f3 = node(i0 + 3);
  return f0 * (s - 1) * (s - 2) * (s - 3) / -6.0 + f1 * s * (s - 2) * (s - 3) / 2.0 +
         f2 * s * (s - 1) * (s - 3) / -2.0 + f3 * s * (s - 1) * (s - 2) / 6.0;
}

double KernelEvaluator::eval_fast(const Point& x, double t) const {
  if (!(t > 0.0)) throw InvalidArgument("kernel time must be positive");
  const int n = params_.n_dim;
  const double r = norm(x, n);
  if (params_.theta == 2.0 || params_.theta == 1.0) return closed_form(r, t);
  const double s = std::pow(t, -1.0 / params_.theta);
  return std::pow(s, n) * profile(r * s);
}

double KernelEvaluator::eval_periodic(const Point& x, double t, double half_width) const {
  const int n = params_.n_dim;
  const double period = 2.0 * half_width;
  Point y = x;
  for (int a = 0; a < n; ++a) y[a] -= period * std::round(y[a] / period);
  if (n == 1 && params_.theta == 1.0) {
    const double k = kPi / half_width;
    return std::sinh(k * t) / (period * (std::cosh(k * t) - std::cos(k * y[0])));
  }
  const int images = params_.classical() ? 3 : 6;
  double sum = 0.0;
  for (int i = -images; i <= images; ++i) {
    for (int j = (n == 2 ? -images : 0); j <= (n == 2 ? images : 0); ++j) {
      const Point shift{period * i, period * j};
      sum += eval_fast(y + shift, t);
    }
  }
  if (!params_.classical() && !tail_coeffs_.empty()) {
    const double th = params_.theta;
    const double a = images + 0.5;
    const double lattice = n == 1 ? 2.0 * std::pow(a, -th) / th : square_complement(a, th);
    sum += tail_coeffs_[0] * t * std::pow(period, -n - th) * lattice;
  }
  return sum;
}

double KernelEvaluator::check_scaling(const std::vector<std::pair<Point, double>>& samples) const {
  const int n = params_.n_dim;
  double worst = 0.0;
  for (const auto& [x, t] : samples) {
    const double lhs = eval_gamma(x, t);
    const double s = std::pow(t, -1.0 / params_.theta);
    const double rhs = std::pow(s, n) * eval_gamma(s * x, 1.0);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300));
  }
  return worst;
}

DecayReport KernelEvaluator::check_decay(const std::vector<double>& radii) const {
  if (params_.classical()) throw InvalidArgument("tail exponent check does not apply to theta = 2");
  if (radii.size() < 2) throw InvalidArgument("check_decay needs at least two radii");
  const double expo = params_.n_dim + params_.theta;
  DecayReport rep;
  rep.target = -expo;
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double r : radii) {
    const double g = eval_gamma({r, 0.0}, 1.0);
    const double lx = std::log1p(r), ly = std::log(g);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    const double ratio = g * std::pow(1.0 + r, expo);
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
  }
  const double m = static_cast<double>(radii.size());
  rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return rep;
}

MonotoneReport KernelEvaluator::check_radial_monotone(const std::vector<std::pair<Point, Point>>& pairs) const {
  MonotoneReport rep;
  for (const auto& [x, y] : pairs) {
    const double excess = eval_gamma(x, 1.0) - eval_gamma(y, 1.0);
    if (excess > rep.worst_violation) rep.worst_violation = excess;
  }
  rep.ok = rep.worst_violation <= 1e-10;
  return rep;
}

double KernelEvaluator::kernel_mass(double t) const {
  if (!(t > 0.0)) throw InvalidArgument("kernel time must be positive");
  const int n = params_.n_dim;
  const double th = params_.theta;
  const double scale = std::pow(t, 1.0 / th);
  const double radius = box_extent_ * scale;
  std::vector<double> cuts;
  for (double r = 0.25 * scale; r < radius; r *= 2.0) cuts.push_back(r);
  auto radial = [&](double r) { return eval_gamma({r, 0.0}, t) * (n == 1 ? 1.0 : r); };
  const QuadResult body = integrate_adaptive(radial, 0.0, radius, {1e-14, 1e-12, 2000}, cuts);
  double mass = unit_sphere_area(n) * body.value;
  for (std::size_t k = 0; k < tail_coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    mass += tail_coeffs_[k] * std::pow(t, kk) * unit_sphere_area(n) * std::pow(radius, -kk * th) / (kk * th);
  }
  return mass;
}

std::vector<std::pair<double, double>> KernelEvaluator::radial_table() const {
  const auto& v = table();
  const double dr = kKernelTableRadius / (v.size() - 1);
  std::vector<std::pair<double, double>> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(i * dr, v[i]);
  return out;
}

void KernelEvaluator::write_radial_table_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out << "radius,density\r\n" << std::setprecision(17);
  for (const auto& [r, g] : radial_table()) out << r << ',' << g << "\r\n";
}

const KernelEvaluator& shared_kernel(const FracParams& params) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, std::unique_ptr<KernelEvaluator>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{params.theta, params.n_dim}];
  if (!slot) slot = std::make_unique<KernelEvaluator>(params);
  return *slot;
}

}  // namespace fracheat
