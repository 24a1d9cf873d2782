#pragma once

#include <span>

// Vector arithmetic kernels behind the trajectory generators and analyzers.
// A scalar reference lane always exists; an AVX2 lane is compiled when the
// toolchain supports it and selected at runtime (or via CURVELAB_SIMD=scalar|avx2).
// Elementwise kernels (axpy, rk4_combine) are bit-identical across lanes;
// reductions (dot, sqnorm, symv) may differ by summation order only.

namespace curvelab::kernels {

enum class Backend { Scalar, Avx2 };

bool avx2_available() noexcept;
Backend active_backend() noexcept;
const char* backend_name() noexcept;
/// Throws std::runtime_error if the requested lane is unavailable.
void set_backend(Backend b);

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double sqnorm(std::span<const double> a) noexcept;
double norm(std::span<const double> a) noexcept;

/// dst = x + a * d (aliasing dst == x is allowed).
void axpy(std::span<double> dst, std::span<const double> x, double a,
          std::span<const double> d) noexcept;

/// x += (h/6) k1 + (h/3) k2 + (h/3) k3 + (h/6) k4.
void rk4_combine(std::span<double> x, double h, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4) noexcept;

/// y = A x for row-major square A (n = x.size(), A.size() = n*n).
void symv(std::span<const double> a_rowmajor, std::span<const double> x,
          std::span<double> y) noexcept;

// Reference lane, exposed for equivalence tests.
namespace scalar {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double sqnorm(std::span<const double> a) noexcept;
void axpy(std::span<double> dst, std::span<const double> x, double a,
          std::span<const double> d) noexcept;
void rk4_combine(std::span<double> x, double h, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4) noexcept;
void symv(std::span<const double> a_rowmajor, std::span<const double> x,
          std::span<double> y) noexcept;
}  // namespace scalar

#if defined(CURVELAB_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double sqnorm(std::span<const double> a) noexcept;
void axpy(std::span<double> dst, std::span<const double> x, double a,
          std::span<const double> d) noexcept;
void rk4_combine(std::span<double> x, double h, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4) noexcept;
void symv(std::span<const double> a_rowmajor, std::span<const double> x,
          std::span<double> y) noexcept;
}  // namespace avx2
#endif

}  // namespace curvelab::kernels
