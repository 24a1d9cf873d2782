#include "curvelab/flow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvelab/kernels.hpp"

namespace curvelab::flow {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

long ceil_steps(double horizon, double step) {
  long n = static_cast<long>(std::ceil(horizon / step));
  if (n < 1) n = 1;
  while (static_cast<double>(n) * step < horizon) ++n;
  return n;
}

}  // namespace

EulerPath euler_path(const ObjectiveFunction& f, const Vec& x0, double eta,
                     double horizon) {
  if (eta <= 0.0) throw std::invalid_argument("step size must be positive");
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  const long steps = ceil_steps(horizon, eta);
  descent::RunRecord rec = descent::gd_run_recorded(
      f, x0, eta, steps, descent::TrajectorySource::EulerFlow);
  EulerPath path;
  path.base = std::move(rec.trajectory);
  path.node_gradients = std::move(rec.gradients);
  path.eta = eta;
  return path;
}

Vec euler_evaluate(const EulerPath& path, double t) {
  if (t < 0.0) throw std::out_of_range("time must be non-negative");
  const long last = static_cast<long>(path.base.size()) - 1;
  const double eta = path.eta;
  long n = static_cast<long>(std::floor(t / eta));
  // floor(t/eta) can land one off from the containing segment after the
  // division rounds; nudge so that n*eta <= t < (n+1)*eta.
  if (n > 0 && static_cast<double>(n) * eta > t) --n;
  if (static_cast<double>(n + 1) * eta <= t) ++n;
  if (n > last) n = last;
  if (n < 0) n = 0;
  const double remainder = t - static_cast<double>(n) * eta;
  if (n == last && remainder > 0.0) {
    throw std::out_of_range("time beyond the generated horizon");
  }
  Vec out(path.base.points[n].size());
  kernels::axpy(out, path.base.points[n], -remainder, path.node_gradients[n]);
  return out;
}

FlowSolution reference_flow(const ObjectiveFunction& f, const Vec& x0,
                            double step_h, double horizon) {
  if (x0.size() != static_cast<std::size_t>(f.dimension)) {
    throw std::invalid_argument("point dimension mismatch for " + f.name);
  }
  if (!f.has_finite_smoothness()) {
    throw std::domain_error("reference flow requires finite smoothness");
  }
  if (step_h <= 0.0) throw std::invalid_argument("step must be positive");
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  if (step_h > 0.1 / f.smoothness_L * (1.0 + 1e-12)) {
    throw std::invalid_argument("step exceeds the stability margin 0.1/L");
  }

  const long steps = ceil_steps(horizon, step_h);
  FlowSolution sol;
  sol.step_h = step_h;
  sol.function_id = f.name;
  sol.times.reserve(steps + 1);
  sol.states.reserve(steps + 1);
  sol.values.reserve(steps + 1);
  sol.grad_norms.reserve(steps + 1);

  Vec x = x0;
  const std::size_t n = x.size();
  Vec stage(n);
  for (long k = 0; k <= steps; ++k) {
    const double v = all_finite(x) ? f.value(x)
                                   : std::numeric_limits<double>::quiet_NaN();
    Vec g1;
    double gn = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(v)) {
      g1 = f.gradient(x);
      gn = kernels::norm(g1);
    }
    if (!std::isfinite(v) || !std::isfinite(gn)) {
      descent::Trajectory prefix;
      prefix.step_size = step_h;
      prefix.source = descent::TrajectorySource::EulerFlow;
      prefix.function_id = f.name;
      prefix.points = sol.states;
      prefix.values = sol.values;
      prefix.grad_norms = sol.grad_norms;
      throw descent::DivergenceError(
          "non-finite flow state at node " + std::to_string(k) + " of " +
              f.name,
          static_cast<long>(sol.states.size()) - 1, prefix);
    }
    sol.times.push_back(static_cast<double>(k) * step_h);
    sol.states.push_back(x);
    sol.values.push_back(v);
    sol.grad_norms.push_back(gn);
    if (k == steps) break;

    kernels::axpy(stage, x, -0.5 * step_h, g1);
    const Vec g2 = f.gradient(stage);
    kernels::axpy(stage, x, -0.5 * step_h, g2);
    const Vec g3 = f.gradient(stage);
    kernels::axpy(stage, x, -step_h, g3);
    const Vec g4 = f.gradient(stage);
    kernels::rk4_combine(x, -step_h, g1, g2, g3, g4);
  }
  return sol;
}

double euler_error_bound(double k_lipschitz, double smoothness, double eta,
                         double r_horizon) {
  if (k_lipschitz <= 0.0 || smoothness <= 0.0 || r_horizon <= 0.0) {
    throw std::invalid_argument("bound arguments must be positive");
  }
  if (eta <= 0.0 || eta >= 1.0) {
    throw std::invalid_argument("the bound requires 0 < eta < 1");
  }
  return 0.5 * k_lipschitz * eta * std::exp(smoothness * (r_horizon + 1.0));
}

Vec hessian_curvature(const ObjectiveFunction& f, const FlowSolution& sol) {
  if (!f.has_hessian_action()) {
    throw std::domain_error(f.name + " does not provide a Hessian action");
  }
  Vec out;
  out.reserve(sol.states.size());
  for (const Vec& x : sol.states) {
    const Vec g = f.gradient(x);
    const Vec hg = f.hessian_action(x, g);
    out.push_back(2.0 * kernels::dot(g, hg));
  }
  return out;
}

double euler_sup_error(const ObjectiveFunction& f, const Vec& x0, double eta,
                       double r_horizon, int substeps) {
  if (substeps < 1) throw std::invalid_argument("substeps must be positive");
  if (!f.has_finite_smoothness()) {
    throw std::domain_error("sup error requires finite smoothness");
  }
  const double half = 0.5 * eta;
  long m = substeps;
  // Raise the substep count until the reference step respects 0.1/L.
  while (half / static_cast<double>(m) > 0.1 / f.smoothness_L) m *= 2;
  const double h = half / static_cast<double>(m);

  const EulerPath path = euler_path(f, x0, eta, r_horizon);
  const FlowSolution ref = reference_flow(f, x0, h, r_horizon);

  double sup = 0.0;
  Vec diff(x0.size());
  for (long j = 0;; ++j) {
    const double t = static_cast<double>(j) * half;
    if (t > r_horizon) break;
    const std::size_t ref_index = static_cast<std::size_t>(j) * m;
    if (ref_index >= ref.states.size()) break;
    const Vec euler_x = euler_evaluate(path, t);
    kernels::axpy(diff, euler_x, -1.0, ref.states[ref_index]);
    sup = std::max(sup, kernels::norm(diff));
  }
  return sup;
}

}  // namespace curvelab::flow
