#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "curvelab/descent.hpp"
#include "curvelab/function.hpp"

namespace curvelab::analysis {

/// Verdicts on an optimization curve. Convexity is judged through second
/// differences a_n - 2 a_{n+1} + a_{n+2}: the curve is convex iff none
/// falls below -tolerance.
struct CurveReport {
  bool monotone_decreasing = true;
  bool convex = true;
  bool grad_norm_monotone = true;
  std::optional<std::size_t> first_convexity_violation;
  Vec violation_magnitudes;  // the offending second differences
  std::vector<std::pair<std::size_t, std::size_t>> consecutive_violation_runs;
  double tolerance_used = 0.0;
};

/// Absolute tolerance scaled by the sequence magnitude: tol0 * (1 + max |a|).
double scaled_tolerance(std::span<const double> a, double tol0 = 1e-10);

/// Linear interpolation of (n, a_n) at fractional index t in [0, len-1].
double interpolate_sequence(std::span<const double> a, double t);

/// Convexity verdict of the interpolated sequence. Sequences shorter than 3
/// are vacuously convex. Second differences past the point where per-step
/// progress |a_n - a_{n+1}| sinks into round-off noise are not judged.
CurveReport is_convex_sequence(std::span<const double> a, double tol);

/// Cross-checks the second-difference verdict against midpoint convexity of
/// the interpolated curve on random index triples s < u < t.
bool characterization_equivalence(std::span<const double> a, int samples,
                                  std::uint64_t seed = 0x5EEDULL);

bool gradient_norm_monotone(const descent::Trajectory& traj, double tol);

/// Two-step curvature certificate. Returns (lhs, rhs) with
///   lhs = f(x2) - 2 f(x1) + f(x0)
///   rhs = (7/(8L) - eta/2) |g1 - g0|^2 + (1/(2L)) |g2 - g1/2 - g0/2|^2.
/// lhs >= rhs for every convex L-smooth objective; rhs >= 0 for eta <= 1.75/L.
std::pair<double, double> certificate_gap(const ObjectiveFunction& f,
                                          const Vec& x0, double eta);

/// True iff divided differences of (t_i, v_i) are non-decreasing within tol.
bool continuous_curve_convexity(std::span<const double> times,
                                std::span<const double> values, double tol);

/// Full report for a trajectory: monotone decrease, sequence convexity and
/// gradient-norm monotonicity, all at tol0 * (1 + max |value|) style scaling.
CurveReport analyze_trajectory(const descent::Trajectory& traj,
                               double tol0 = 1e-10);

}  // namespace curvelab::analysis
