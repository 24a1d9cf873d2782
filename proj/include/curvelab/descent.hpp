#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvelab/function.hpp"

namespace curvelab::descent {

enum class TrajectorySource { GradientDescent, EulerFlow };

const char* source_name(TrajectorySource s);

/// Iterates with telemetry recorded at generation time; analyzers never
/// re-evaluate the objective.
struct Trajectory {
  std::vector<Vec> points;  // x_0 .. x_N
  Vec values;               // f(x_n)
  Vec grad_norms;           // |grad f(x_n)|
  double step_size = 0.0;
  TrajectorySource source = TrajectorySource::GradientDescent;
  std::string function_id;

  std::size_t size() const { return points.size(); }
};

/// A non-finite value, gradient, or point aborted a run. Carries the valid
/// prefix and the index of its last entry (-1 when nothing was valid).
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& msg, long last_valid, Trajectory prefix)
      : std::runtime_error(msg),
        last_valid_index(last_valid),
        partial(std::move(prefix)) {}
  long last_valid_index;
  Trajectory partial;
};

/// x - eta * grad f(x).
Vec gd_step(const ObjectiveFunction& f, std::span<const double> x, double eta);

/// Runs `steps` gradient-descent updates from x0; the trajectory holds
/// steps + 1 entries.
Trajectory gd_run(const ObjectiveFunction& f, const Vec& x0, double eta,
                  long steps);

/// Same run, additionally keeping the gradient vector at every node.
struct RunRecord {
  Trajectory trajectory;
  std::vector<Vec> gradients;
};
RunRecord gd_run_recorded(const ObjectiveFunction& f, const Vec& x0, double eta,
                          long steps,
                          TrajectorySource source = TrajectorySource::GradientDescent);

}  // namespace curvelab::descent
