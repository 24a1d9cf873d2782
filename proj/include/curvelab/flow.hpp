#pragma once

#include "curvelab/descent.hpp"
#include "curvelab/function.hpp"

namespace curvelab::flow {

/// Piecewise-linear curve through gradient-descent nodes:
/// x(t) = x_n - (t - n eta) grad f(x_n) with n = floor(t / eta).
struct EulerPath {
  descent::Trajectory base;         // source == EulerFlow
  std::vector<Vec> node_gradients;  // grad f at each node
  double eta = 0.0;

  /// Largest evaluable time, N * eta (>= the requested horizon).
  double horizon() const {
    return static_cast<double>(base.size() - 1) * eta;
  }
};

EulerPath euler_path(const ObjectiveFunction& f, const Vec& x0, double eta,
                     double horizon);

/// Exact piecewise evaluation; grid times t = n eta reproduce the node
/// bit for bit. Throws std::out_of_range beyond the generated horizon.
Vec euler_evaluate(const EulerPath& path, double t);

/// Dense high-accuracy gradient-flow path (classical RK4, fixed step).
struct FlowSolution {
  Vec times;  // 0, h, 2h, ...
  std::vector<Vec> states;
  Vec values;      // f at each state, recorded during integration
  Vec grad_norms;  // |grad f| at each state
  double step_h = 0.0;
  std::string function_id;
};

/// Requires step_h <= 0.1 / L (stability margin) and finite L.
FlowSolution reference_flow(const ObjectiveFunction& f, const Vec& x0,
                            double step_h, double horizon);

/// (K eta / 2) exp(L (R + 1)); requires 0 < eta < 1.
double euler_error_bound(double k_lipschitz, double smoothness, double eta,
                         double r_horizon);

/// 2 <grad f(x), H_f(x) grad f(x)> at each solution state.
Vec hessian_curvature(const ObjectiveFunction& f, const FlowSolution& sol);

/// sup over the Euler grid {n eta/2 : n eta/2 <= R} of the distance to a
/// reference flow integrated with step (eta/2) / substeps (raised as needed
/// to respect the stability margin).
double euler_sup_error(const ObjectiveFunction& f, const Vec& x0, double eta,
                       double r_horizon, int substeps = 64);

}  // namespace curvelab::flow
