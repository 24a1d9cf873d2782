#include "curvelab/descent.hpp"

#include <cmath>

#include "curvelab/kernels.hpp"

namespace curvelab::descent {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void require_point(const ObjectiveFunction& f, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(f.dimension)) {
    throw std::invalid_argument("point dimension mismatch for " + f.name);
  }
}

}  // namespace

const char* source_name(TrajectorySource s) {
  return s == TrajectorySource::GradientDescent ? "GradientDescent"
                                                : "EulerFlow";
}

Vec gd_step(const ObjectiveFunction& f, std::span<const double> x, double eta) {
  require_point(f, x);
  if (eta <= 0.0) throw std::invalid_argument("step size must be positive");
  const Vec g = f.gradient(x);
  Vec next(x.size());
  kernels::axpy(next, x, -eta, g);
  return next;
}

RunRecord gd_run_recorded(const ObjectiveFunction& f, const Vec& x0, double eta,
                          long steps, TrajectorySource source) {
  require_point(f, x0);
  if (eta <= 0.0) throw std::invalid_argument("step size must be positive");
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");

  RunRecord rec;
  Trajectory& traj = rec.trajectory;
  traj.step_size = eta;
  traj.source = source;
  traj.function_id = f.name;
  traj.points.reserve(steps + 1);
  traj.values.reserve(steps + 1);
  traj.grad_norms.reserve(steps + 1);
  rec.gradients.reserve(steps + 1);

  Vec x = x0;
  for (long n = 0; n <= steps; ++n) {
    const double v = all_finite(x) ? f.value(x)
                                   : std::numeric_limits<double>::quiet_NaN();
    Vec g;
    double gn = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(v)) {
      g = f.gradient(x);
      gn = kernels::norm(g);
    }
    if (!std::isfinite(v) || !std::isfinite(gn)) {
      throw DivergenceError(
          "non-finite value or gradient at iterate " + std::to_string(n) +
              " of " + f.name,
          static_cast<long>(traj.size()) - 1, traj);
    }
    traj.points.push_back(x);
    traj.values.push_back(v);
    traj.grad_norms.push_back(gn);
    rec.gradients.push_back(g);
    if (n < steps) kernels::axpy(x, x, -eta, g);
  }
  return rec;
}

Trajectory gd_run(const ObjectiveFunction& f, const Vec& x0, double eta,
                  long steps) {
  return gd_run_recorded(f, x0, eta, steps).trajectory;
}

}  // namespace curvelab::descent
