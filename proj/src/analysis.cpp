#include "curvelab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvelab/descent.hpp"
#include "curvelab/kernels.hpp"

namespace curvelab::analysis {

namespace {

constexpr double kNoiseFactor = 1e3 * std::numeric_limits<double>::epsilon();

/// Index of the first per-step difference that has sunk into round-off
/// noise; second differences from there on are not judged.
std::size_t noise_cutoff(std::span<const double> a) {
  for (std::size_t n = 0; n + 1 < a.size(); ++n) {
    if (std::abs(a[n] - a[n + 1]) < kNoiseFactor * (1.0 + std::abs(a[n]))) {
      return n;
    }
  }
  return a.size();
}

}  // namespace

double scaled_tolerance(std::span<const double> a, double tol0) {
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  return tol0 * (1.0 + amax);
}

double interpolate_sequence(std::span<const double> a, double t) {
  if (a.empty()) throw std::invalid_argument("empty sequence");
  const double last = static_cast<double>(a.size() - 1);
  if (t < 0.0 || t > last) {
    throw std::out_of_range("interpolation index out of range");
  }
  const std::size_t i = static_cast<std::size_t>(std::floor(t));
  if (i >= a.size() - 1) return a.back();
  const double r = t - static_cast<double>(i);
  return a[i] + r * (a[i + 1] - a[i]);
}

CurveReport is_convex_sequence(std::span<const double> a, double tol) {
  if (tol < 0.0) throw std::invalid_argument("tolerance must be non-negative");
  CurveReport report;
  report.tolerance_used = tol;
  if (a.size() < 3) return report;  // vacuously convex

  const std::size_t cutoff = noise_cutoff(a);
  std::vector<std::size_t> violating;
  for (std::size_t n = 0; n + 2 < a.size(); ++n) {
    if (n + 1 >= cutoff) break;
    const double second = a[n] - 2.0 * a[n + 1] + a[n + 2];
    if (second < -tol) {
      violating.push_back(n);
      report.violation_magnitudes.push_back(second);
    }
  }
  report.convex = violating.empty();
  if (!violating.empty()) {
    report.first_convexity_violation = violating.front();
    std::size_t run_start = violating.front();
    std::size_t run_len = 1;
    for (std::size_t i = 1; i < violating.size(); ++i) {
      if (violating[i] == violating[i - 1] + 1) {
        ++run_len;
      } else {
        report.consecutive_violation_runs.emplace_back(run_start, run_len);
        run_start = violating[i];
        run_len = 1;
      }
    }
    report.consecutive_violation_runs.emplace_back(run_start, run_len);
  }
  return report;
}

bool characterization_equivalence(std::span<const double> a, int samples,
                                  std::uint64_t seed) {
  if (a.size() < 3) throw std::invalid_argument("need at least 3 entries");
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  const double tol = scaled_tolerance(a, 1e-10);
  const bool direct = is_convex_sequence(a, tol).convex;

  Rng rng(seed);
  const double last = static_cast<double>(a.size() - 1);
  bool chord_violation = false;
  for (int k = 0; k < samples && !chord_violation; ++k) {
    double s = rng.uniform(0.0, last);
    double u = rng.uniform(0.0, last);
    double t = rng.uniform(0.0, last);
    if (s > u) std::swap(s, u);
    if (u > t) std::swap(u, t);
    if (s > u) std::swap(s, u);
    if (u - s < 1e-9 || t - u < 1e-9) {
      --k;  // degenerate triple, redraw
      continue;
    }
    const double gs = interpolate_sequence(a, s);
    const double gu = interpolate_sequence(a, u);
    const double gt = interpolate_sequence(a, t);
    const double chord = gs + (u - s) / (t - s) * (gt - gs);
    if (gu > chord + tol) chord_violation = true;
  }
  return direct == !chord_violation;
}

bool gradient_norm_monotone(const descent::Trajectory& traj, double tol) {
  if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
  for (std::size_t n = 0; n + 1 < traj.grad_norms.size(); ++n) {
    if (traj.grad_norms[n + 1] > traj.grad_norms[n] + tol) return false;
  }
  return true;
}

std::pair<double, double> certificate_gap(const ObjectiveFunction& f,
                                          const Vec& x0, double eta) {
  if (!f.has_finite_smoothness()) {
    throw std::domain_error("certificate requires finite smoothness");
  }
  if (!f.is_convex) throw std::domain_error("certificate requires convexity");
  const double l = f.smoothness_L;

  const Vec x1 = descent::gd_step(f, x0, eta);
  const Vec x2 = descent::gd_step(f, x1, eta);
  const double f0 = f.value(x0);
  const double f1 = f.value(x1);
  const double f2 = f.value(x2);
  const Vec g0 = f.gradient(x0);
  const Vec g1 = f.gradient(x1);
  const Vec g2 = f.gradient(x2);

  const double lhs = (f2 - f1) - (f1 - f0);
  Vec d01(g0.size());
  kernels::axpy(d01, g1, -1.0, g0);
  Vec mix(g0.size());
  kernels::axpy(mix, g2, -0.5, g1);
  kernels::axpy(mix, mix, -0.5, g0);
  const double rhs = (7.0 / (8.0 * l) - 0.5 * eta) * kernels::sqnorm(d01) +
                     kernels::sqnorm(mix) / (2.0 * l);
  return {lhs, rhs};
}

bool continuous_curve_convexity(std::span<const double> times,
                                std::span<const double> values, double tol) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("times and values must have equal length");
  }
  if (times.size() < 3) throw std::invalid_argument("need at least 3 samples");
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (times[i + 1] <= times[i]) {
      throw std::invalid_argument("times must be strictly increasing");
    }
  }
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double slope = (values[i + 1] - values[i]) / (times[i + 1] - times[i]);
    if (slope < prev_slope - tol) return false;
    prev_slope = slope;
  }
  return true;
}

CurveReport analyze_trajectory(const descent::Trajectory& traj, double tol0) {
  const double tol = scaled_tolerance(traj.values, tol0);
  CurveReport report = is_convex_sequence(traj.values, tol);
  report.monotone_decreasing = true;
  for (std::size_t n = 0; n + 1 < traj.values.size(); ++n) {
    if (traj.values[n + 1] > traj.values[n] + tol) {
      report.monotone_decreasing = false;
      break;
    }
  }
  const double grad_tol = tol0 * (1.0 + (traj.grad_norms.empty()
                                             ? 0.0
                                             : traj.grad_norms.front()));
  report.grad_norm_monotone = gradient_norm_monotone(traj, grad_tol);
  return report;
}

}  // namespace curvelab::analysis
