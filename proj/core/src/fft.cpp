#include "fracheat/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "fracheat/error.hpp"

namespace fracheat {
namespace {

// FFTW planning is not thread-safe; execution on a plan's own buffers is.
// Each thread keeps its own plans, created under a global lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(int dim, int n) : dim_(dim), n_(n) {
    const std::size_t real_size = dim == 1 ? n : static_cast<std::size_t>(n) * n;
    const std::size_t half = static_cast<std::size_t>(n / 2 + 1);
    complex_size_ = dim == 1 ? half : static_cast<std::size_t>(n) * half;
    real_ = fftw_alloc_real(real_size);
    spec_ = fftw_alloc_complex(complex_size_);
    if (!real_ || !spec_) throw NumericalError("fftw allocation failed");
    std::lock_guard lock(planner_mutex());
    if (dim == 1) {
      forward_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
    } else {
      forward_ = fftw_plan_dft_r2c_2d(n, n, real_, spec_, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_2d(n, n, spec_, real_, FFTW_ESTIMATE);
    }
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void apply(std::span<double> values, std::span<const double> multiplier) {
    if (multiplier.size() != complex_size_) throw InvalidArgument("multiplier size mismatch");
    std::copy(values.begin(), values.end(), real_);
    fftw_execute(forward_);
    const double scale = 1.0 / static_cast<double>(values.size());
    for (std::size_t k = 0; k < complex_size_; ++k) {
      const double m = multiplier[k] * scale;
      spec_[k][0] *= m;
      spec_[k][1] *= m;
    }
    fftw_execute(backward_);
    std::copy(real_, real_ + values.size(), values.begin());
  }

 private:
  int dim_;
  int n_;
  std::size_t complex_size_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

Plan& plan_for(const Grid& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<Plan>> cache;
  auto& slot = cache[{grid.dim(), grid.points_per_axis()}];
  if (!slot) slot = std::make_unique<Plan>(grid.dim(), grid.points_per_axis());
  return *slot;
}

}  // namespace

std::vector<double> wave_magnitudes(const Grid& grid) {
  const int n = grid.points_per_axis();
  const double k0 = std::numbers::pi / grid.extent();
  const int half = n / 2 + 1;
  if (grid.dim() == 1) {
    std::vector<double> out(half);
    for (int k = 0; k < half; ++k) out[k] = k0 * k;
    return out;
  }
  std::vector<double> out(static_cast<std::size_t>(n) * half);
  for (int i = 0; i < n; ++i) {
    const int ki = i <= n / 2 ? i : i - n;
    for (int j = 0; j < half; ++j) out[static_cast<std::size_t>(i) * half + j] = k0 * std::hypot(ki, j);
  }
  return out;
}

void apply_multiplier(Field& f, std::span<const double> multiplier) {
  plan_for(f.grid()).apply(f.values(), multiplier);
}

void apply_radial_multiplier(Field& f, const std::function<double(double)>& m) {
  auto xi = wave_magnitudes(f.grid());
  for (double& v : xi) v = m(v);
  apply_multiplier(f, xi);
}

}  // namespace fracheat
