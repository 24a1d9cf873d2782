#include "curvelab/kernels.hpp"

#if defined(CURVELAB_HAVE_AVX2)

#include <immintrin.h>

#include <cstddef>

namespace curvelab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a.data() + i);
    __m256d vb = _mm256_loadu_pd(b.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
  }
  double sum = (n >= 4) ? hsum(acc) : 0.0;
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double sqnorm(std::span<const double> a) noexcept {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(va, va));
  }
  double sum = (n >= 4) ? hsum(acc) : 0.0;
  for (; i < n; ++i) sum += a[i] * a[i];
  return sum;
}

void axpy(std::span<double> dst, std::span<const double> x, double a,
          std::span<const double> d) noexcept {
  const std::size_t n = dst.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x.data() + i);
    __m256d vd = _mm256_loadu_pd(d.data() + i);
    _mm256_storeu_pd(dst.data() + i, _mm256_add_pd(vx, _mm256_mul_pd(va, vd)));
  }
  for (; i < n; ++i) dst[i] = x[i] + a * d[i];
}

void rk4_combine(std::span<double> x, double h, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4) noexcept {
  const double c1 = h / 6.0;
  const double c2 = h / 3.0;
  const __m256d vc1 = _mm256_set1_pd(c1);
  const __m256d vc2 = _mm256_set1_pd(c2);
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x.data() + i);
    vx = _mm256_add_pd(vx, _mm256_mul_pd(vc1, _mm256_loadu_pd(k1.data() + i)));
    vx = _mm256_add_pd(vx, _mm256_mul_pd(vc2, _mm256_loadu_pd(k2.data() + i)));
    vx = _mm256_add_pd(vx, _mm256_mul_pd(vc2, _mm256_loadu_pd(k3.data() + i)));
    vx = _mm256_add_pd(vx, _mm256_mul_pd(vc1, _mm256_loadu_pd(k4.data() + i)));
    _mm256_storeu_pd(x.data() + i, vx);
  }
  for (; i < n; ++i) {
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

}  // namespace curvelab::kernels::avx2

#endif  // CURVELAB_HAVE_AVX2
