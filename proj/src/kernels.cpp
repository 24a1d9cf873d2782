#include "curvelab/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace curvelab::kernels {

namespace {

struct Table {
  double (*dot)(std::span<const double>, std::span<const double>) noexcept;
  double (*sqnorm)(std::span<const double>) noexcept;
  void (*axpy)(std::span<double>, std::span<const double>, double,
               std::span<const double>) noexcept;
  void (*rk4_combine)(std::span<double>, double, std::span<const double>,
                      std::span<const double>, std::span<const double>,
                      std::span<const double>) noexcept;
  void (*symv)(std::span<const double>, std::span<const double>,
               std::span<double>) noexcept;
};

constexpr Table kScalarTable{scalar::dot, scalar::sqnorm, scalar::axpy,
                             scalar::rk4_combine, scalar::symv};

#if defined(CURVELAB_HAVE_AVX2)
constexpr Table kAvx2Table{avx2::dot, avx2::sqnorm, avx2::axpy,
                           avx2::rk4_combine, avx2::symv};
#endif

Backend pick_initial_backend() {
  const char* env = std::getenv("CURVELAB_SIMD");
  if (env != nullptr) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && avx2_available()) return Backend::Avx2;
    if (want == "avx2") return Backend::Scalar;  // requested lane missing
  }
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

struct State {
  Backend backend;
  const Table* table;
  State() : backend(pick_initial_backend()), table(&kScalarTable) {
#if defined(CURVELAB_HAVE_AVX2)
    if (backend == Backend::Avx2) table = &kAvx2Table;
#endif
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

bool avx2_available() noexcept {
#if defined(CURVELAB_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend active_backend() noexcept { return state().backend; }

const char* backend_name() noexcept {
  return state().backend == Backend::Avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
  State& s = state();
  if (b == Backend::Avx2) {
#if defined(CURVELAB_HAVE_AVX2)
    if (!avx2_available()) throw std::runtime_error("avx2 lane unavailable");
    s.backend = Backend::Avx2;
    s.table = &kAvx2Table;
    return;
#else
    throw std::runtime_error("avx2 lane not compiled in");
#endif
  }
  s.backend = Backend::Scalar;
  s.table = &kScalarTable;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return state().table->dot(a, b);
}

double sqnorm(std::span<const double> a) noexcept {
  return state().table->sqnorm(a);
}

double norm(std::span<const double> a) noexcept { return std::sqrt(sqnorm(a)); }

void axpy(std::span<double> dst, std::span<const double> x, double a,
          std::span<const double> d) noexcept {
  state().table->axpy(dst, x, a, d);
}

void rk4_combine(std::span<double> x, double h, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4) noexcept {
  state().table->rk4_combine(x, h, k1, k2, k3, k4);
}

void symv(std::span<const double> a_rowmajor, std::span<const double> x,
          std::span<double> y) noexcept {
  state().table->symv(a_rowmajor, x, y);
}

}  // namespace curvelab::kernels
