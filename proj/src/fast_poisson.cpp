#include "fast_poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "orthlip/error.hpp"

namespace orthlip::detail {

namespace {
// Only fftw_execute is thread safe; planning must be serialized.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FastPoisson::Impl {
  std::size_t dim = 0;
  std::array<std::size_t, 3> n{1, 1, 1};  // interior counts per axis
  std::array<std::size_t, 3> stride{0, 0, 0};
  std::array<std::vector<double>, 3> mode;  // 4 sin^2(pi k / 2(m+1)) / h^2
  std::array<double, 3> h2{1.0, 1.0, 1.0};
  std::vector<double> inv_eig;
  double* buf = nullptr;
  fftw_plan plan = nullptr;
  double scale = 1.0;
  std::size_t count = 0;
};

FastPoisson::FastPoisson(const Grid& g) : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.dim = g.dim();
  s.count = 1;
  for (std::size_t d = 0; d < s.dim; ++d) {
    const std::size_t m = g.nodes(d) - 2;
    s.n[d] = m;
    s.stride[d] = g.stride(d);
    s.count *= m;
    s.scale *= 2.0 * static_cast<double>(m + 1);
    const double h = g.h(d);
    s.h2[d] = h * h;
    s.mode[d].resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double sn = std::sin(std::numbers::pi * static_cast<double>(k + 1) / (2.0 * static_cast<double>(m + 1)));
      s.mode[d][k] = 4.0 * sn * sn / (h * h);
    }
  }
  s.inv_eig.assign(s.count, 0.0);
  s.buf = fftw_alloc_real(s.count);
  if (!s.buf) throw Error("FFTW allocation failed");
  // FFTW is row-major: the last listed dimension varies fastest, which is our axis 0.
  int dims[3];
  fftw_r2r_kind kinds[3];
  for (std::size_t d = 0; d < s.dim; ++d) {
    dims[s.dim - 1 - d] = static_cast<int>(s.n[d]);
    kinds[d] = FFTW_RODFT00;
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    s.plan = fftw_plan_r2r(static_cast<int>(s.dim), dims, s.buf, s.buf, kinds, FFTW_ESTIMATE);
  }
  if (!s.plan) throw Error("FFTW planning failed");
  set_coefficients({1.0, 1.0, 1.0});
}

FastPoisson::~FastPoisson() {
  if (!impl_) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (impl_->plan) fftw_destroy_plan(impl_->plan);
  if (impl_->buf) fftw_free(impl_->buf);
}

void FastPoisson::set_coefficients(const std::array<double, 3>& a) {
  Impl& s = *impl_;
  diag_ = 0.0;
  for (std::size_t d = 0; d < s.dim; ++d) {
    if (!(a[d] > 0.0) || !std::isfinite(a[d])) throw InvalidArgument("Poisson coefficients must be positive");
    diag_ += 2.0 * a[d] / s.h2[d];
  }
  const std::size_t n1 = s.dim > 1 ? s.n[1] : 1, n2 = s.dim > 2 ? s.n[2] : 1;
  std::size_t idx = 0;
  for (std::size_t k2 = 0; k2 < n2; ++k2) {
    const double e2 = s.dim > 2 ? a[2] * s.mode[2][k2] : 0.0;
    for (std::size_t k1 = 0; k1 < n1; ++k1) {
      const double e1 = e2 + a[1] * s.mode[1][k1];
      for (std::size_t k0 = 0; k0 < s.n[0]; ++k0) s.inv_eig[idx++] = 1.0 / ((e1 + a[0] * s.mode[0][k0]) * s.scale);
    }
  }
}

void FastPoisson::solve(const std::vector<double>& rhs, std::vector<double>& out) {
  Impl& s = *impl_;
  const std::size_t n1 = s.dim > 1 ? s.n[1] : 1, n2 = s.dim > 2 ? s.n[2] : 1;
  auto walk = [&](auto&& fn) {
    std::size_t idx = 0;
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      for (std::size_t i1 = 0; i1 < n1; ++i1) {
        std::size_t node = (s.dim > 2 ? (i2 + 1) * s.stride[2] : 0) + (i1 + 1) * s.stride[1] + 1;
        for (std::size_t i0 = 0; i0 < s.n[0]; ++i0, ++idx, ++node) fn(idx, node);
      }
    }
  };
  walk([&](std::size_t idx, std::size_t node) { s.buf[idx] = rhs[node]; });
  fftw_execute(s.plan);
  for (std::size_t k = 0; k < s.count; ++k) s.buf[k] *= s.inv_eig[k];
  fftw_execute(s.plan);
  if (&out != &rhs) out.assign(rhs.size(), 0.0);
  else std::fill(out.begin(), out.end(), 0.0);
  walk([&](std::size_t idx, std::size_t node) { out[node] = s.buf[idx]; });
}

}  // namespace orthlip::detail
