#include "curvelab/kernels.hpp"

#include <cstddef>

namespace curvelab::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double sqnorm(std::span<const double> a) noexcept {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

void axpy(std::span<double> dst, std::span<const double> x, double a,
          std::span<const double> d) noexcept {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = x[i] + a * d[i];
}

void rk4_combine(std::span<double> x, double h, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4) noexcept {
  const double c1 = h / 6.0;
  const double c2 = h / 3.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = x[i] + c1 * k1[i] + c2 * k2[i] + c2 * k3[i] + c1 * k4[i];
  }
}

void symv(std::span<const double> a_rowmajor, std::span<const double> x,
          std::span<double> y) noexcept {
  const std::size_t n = x.size();
  for (std::size_t r = 0; r < n; ++r) {
    y[r] = dot(a_rowmajor.subspan(r * n, n), x);
  }
}

}  // namespace curvelab::kernels::scalar
