#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "curvelab/common.hpp"

namespace curvelab {

/// Closed-form iterates for objectives that admit them. Used as oracles.
struct AnalyticSolution {
  /// (x0, eta, n) -> n-th gradient-descent iterate.
  std::function<Vec(const Vec&, double, long)> gd_iterate;
  /// (x0, t) -> gradient-flow state at time t.
  std::function<Vec(const Vec&, double)> flow_state;
  std::optional<double> min_value;

  bool has_gd() const { return static_cast<bool>(gd_iterate); }
  bool has_flow() const { return static_cast<bool>(flow_state); }
};

inline constexpr double kUnboundedSmoothness =
    std::numeric_limits<double>::infinity();

/// An evaluable objective with a hand-coded gradient. smoothness_L is the
/// Lipschitz constant of the gradient, or kUnboundedSmoothness for
/// nonsmooth members.
struct ObjectiveFunction {
  std::string name;
  int dimension = 1;
  std::function<double(std::span<const double>)> value;
  std::function<Vec(std::span<const double>)> gradient;
  double smoothness_L = kUnboundedSmoothness;
  bool is_convex = true;
  /// (x, v) -> H_f(x) v; empty when the objective is not C^2.
  std::function<Vec(std::span<const double>, std::span<const double>)>
      hessian_action;
  AnalyticSolution analytic;
  std::map<std::string, Vec> params;
  /// 1-d points where the gradient is discontinuous (finite-difference
  /// checks skip a neighborhood of these).
  Vec kinks;

  bool has_finite_smoothness() const { return std::isfinite(smoothness_L); }
  bool has_hessian_action() const { return static_cast<bool>(hessian_action); }
  double operator()(std::span<const double> x) const { return value(x); }
};

}  // namespace curvelab
