#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "curvelab/flow.hpp"
#include "curvelab/kernels.hpp"
#include "curvelab/zoo.hpp"

using curvelab::ObjectiveFunction;
using curvelab::Rng;
using curvelab::Vec;
namespace flow = curvelab::flow;
namespace zoo = curvelab::zoo;
namespace kernels = curvelab::kernels;

namespace {

ObjectiveFunction half_square() { return zoo::quadratic_diag({1.0}, {0.0}); }

}  // namespace

TEST_CASE("euler path evaluates the piecewise rule") {
  const ObjectiveFunction f = half_square();
  const flow::EulerPath path = flow::euler_path(f, {1.0}, 0.1, 1.0);
  CHECK(path.base.source == curvelab::descent::TrajectorySource::EulerFlow);

  CHECK(flow::euler_evaluate(path, 0.0)[0] == 1.0);
  // Half-step linear interpolation: 1 - 0.05 * 1.
  CHECK(flow::euler_evaluate(path, 0.05)[0] == doctest::Approx(0.95).epsilon(1e-15));
  // Grid point t = 1 is the 10th node, (1 - 0.1)^10.
  double expect = 1.0;
  for (int i = 0; i < 10; ++i) expect *= 0.9;
  CHECK(flow::euler_evaluate(path, 1.0)[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(flow::euler_evaluate(path, 1.0)[0] ==
        doctest::Approx(0.3486784401).epsilon(1e-10));
}

TEST_CASE("euler evaluation at grid times reproduces nodes exactly") {
  const ObjectiveFunction f = zoo::log_sum_exp();
  const flow::EulerPath path = flow::euler_path(f, {1.0, -2.0}, 0.07, 1.4);
  for (std::size_t n = 0; n < path.base.size(); ++n) {
    const double t = static_cast<double>(n) * 0.07;
    const Vec at = flow::euler_evaluate(path, t);
    CHECK(at == path.base.points[n]);  // bitwise
  }
}

TEST_CASE("euler evaluation rejects times beyond the horizon") {
  const flow::EulerPath path = flow::euler_path(half_square(), {1.0}, 0.1, 1.0);
  CHECK_THROWS_AS(flow::euler_evaluate(path, 1.0 + 1e-9), std::out_of_range);
  CHECK_THROWS_AS(flow::euler_evaluate(path, -0.1), std::out_of_range);
  CHECK_THROWS_AS(flow::euler_path(half_square(), {1.0}, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(flow::euler_path(half_square(), {1.0}, 0.1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("euler path is continuous across segment joints") {
  const flow::EulerPath path = flow::euler_path(zoo::square(), {2.0}, 0.25, 2.0);
  for (double t : {0.25, 0.5, 1.0, 1.75}) {
    const double before = flow::euler_evaluate(path, t - 1e-10)[0];
    const double at = flow::euler_evaluate(path, t)[0];
    CHECK(std::abs(before - at) < 1e-8);
  }
}

TEST_CASE("reference flow matches the exponential closed form") {
  const flow::FlowSolution sol = flow::reference_flow(half_square(), {1.0}, 1e-3, 1.0);
  const double at1 = sol.states.back()[0];
  CHECK(sol.times.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(at1 == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));

  // Curvature 2 decays twice as fast: x(t) = 3 exp(-2t).
  const flow::FlowSolution sq = flow::reference_flow(zoo::square(), {3.0}, 1e-3, 0.5);
  CHECK(std::abs(sq.states.back()[0] - 3.0 * std::exp(-1.0)) < 1e-8);
}

TEST_CASE("reference flow from a stationary point stays put") {
  const ObjectiveFunction f = zoo::quadratic_diag({1.0, 2.0}, {0.0, 0.0});
  const flow::FlowSolution sol = flow::reference_flow(f, {0.0, 0.0}, 0.01, 1.0);
  for (const Vec& x : sol.states) CHECK(x == Vec{0.0, 0.0});
}

TEST_CASE("reference flow enforces the stability margin") {
  CHECK_THROWS_AS(flow::reference_flow(zoo::square(), {1.0}, 0.06, 1.0),
                  std::invalid_argument);  // 0.06 > 0.1/2
  CHECK_THROWS_AS(flow::reference_flow(zoo::abs_plus_relu(), {1.0}, 1e-3, 1.0),
                  std::domain_error);
}

TEST_CASE("discretization bound evaluates its formula") {
  CHECK(flow::euler_error_bound(1.0, 1.0, 0.1, 1.0) ==
        doctest::Approx(0.05 * std::exp(2.0)).epsilon(1e-15));
  CHECK(flow::euler_error_bound(1.0, 1.0, 0.1, 1.0) ==
        doctest::Approx(0.3694528049).epsilon(1e-10));
  CHECK(flow::euler_error_bound(2.0, 0.5, 0.2, 3.0) ==
        doctest::Approx(0.2 * std::exp(2.0)).epsilon(1e-15));
  CHECK(flow::euler_error_bound(1.0, 1.0, 1e-9, 1.0) < 1e-8);
  CHECK_THROWS_AS(flow::euler_error_bound(1.0, 1.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(flow::euler_error_bound(1.0, 1.0, 1.5, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(flow::euler_error_bound(-1.0, 1.0, 0.1, 1.0),
                  std::invalid_argument);
}

TEST_CASE("hessian curvature along flows") {
  flow::FlowSolution sol;
  sol.states = {{1.0}};
  sol.times = {0.0};
  const Vec c = flow::hessian_curvature(half_square(), sol);
  CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-14));

  flow::FlowSolution sq;
  sq.states = {{3.0}, {0.0}};
  sq.times = {0.0, 1.0};
  const Vec c2 = flow::hessian_curvature(zoo::square(), sq);
  CHECK(c2[0] == doctest::Approx(144.0).epsilon(1e-12));
  CHECK(c2[1] == 0.0);

  CHECK_THROWS_AS(flow::hessian_curvature(zoo::huber_counterexample(), sol),
                  std::domain_error);
}

TEST_CASE("sup error stays below the discretization bound") {
  Rng rng(21);
  const ObjectiveFunction members[] = {
      half_square(), zoo::square(), zoo::huber_counterexample(),
      zoo::log_sum_exp(), zoo::random_convex_1d(13, 7)};
  for (const ObjectiveFunction& f : members) {
    CAPTURE(f.name);
    const double l = f.smoothness_L;
    for (int trial = 0; trial < 5; ++trial) {
      Vec x0(static_cast<std::size_t>(f.dimension));
      for (double& v : x0) v = rng.uniform(-3.0, 3.0);
      const double eta = std::min(0.5 / l, 0.9) * rng.uniform(0.2, 1.0);
      const double r = std::min(2.0 / l, 2.0);
      const double sup = flow::euler_sup_error(f, x0, eta, r);
      const double k_lip = kernels::norm(f.gradient(x0));
      if (k_lip == 0.0) {
        CHECK(sup <= 1e-12);
      } else {
        CHECK(sup <= flow::euler_error_bound(k_lip, l, eta, r) + 1e-12);
      }
    }
  }
}

TEST_CASE("halving the step roughly halves the sup error for quadratics") {
  const ObjectiveFunction f = half_square();
  double prev = flow::euler_sup_error(f, {1.0}, 0.1, 1.0);
  CHECK(prev == doctest::Approx(std::abs(std::exp(-1.0) - 0.3486784401)).epsilon(1e-4));
  for (const double eta : {0.05, 0.025, 0.0125}) {
    const double cur = flow::euler_sup_error(f, {1.0}, eta, 1.0);
    const double ratio = cur / prev;
    CHECK(ratio >= 0.3);
    CHECK(ratio <= 0.7);
    prev = cur;
  }
}

TEST_CASE("flow value slope equals minus the squared gradient norm") {
  const ObjectiveFunction members[] = {zoo::square(), zoo::log_sum_exp(),
                                       zoo::quadratic_diag({1.0, 3.0}, {0.5, 0.0})};
  for (const ObjectiveFunction& f : members) {
    CAPTURE(f.name);
    Vec x0(static_cast<std::size_t>(f.dimension), 1.5);
    const double h = 0.01 / f.smoothness_L;
    const flow::FlowSolution sol = flow::reference_flow(f, x0, h, 1.0 / f.smoothness_L);
    for (std::size_t k = 1; k + 1 < sol.times.size(); ++k) {
      const double slope = (sol.values[k + 1] - sol.values[k - 1]) / (2.0 * h);
      const double expect = -sol.grad_norms[k] * sol.grad_norms[k];
      if (std::abs(expect) < 1e-6) continue;
      CHECK(slope == doctest::Approx(expect).epsilon(1e-4));
    }
  }
}

TEST_CASE("euler values converge pointwise to the flow values") {
  const ObjectiveFunction f = half_square();
  const flow::FlowSolution ref = flow::reference_flow(f, {1.0}, 1e-3, 1.0);
  const double etas[] = {0.1, 0.05, 0.025, 0.0125};
  for (int k = 1; k <= 10; ++k) {
    const double t = 0.1 * k;
    const std::size_t ref_idx = static_cast<std::size_t>(std::llround(t / 1e-3));
    const double flow_value = ref.values[ref_idx];
    double prev_err = 1e300;
    for (const double eta : etas) {
      const flow::EulerPath path = flow::euler_path(f, {1.0}, eta, 1.0);
      const double v = f.value(flow::euler_evaluate(path, t));
      const double err = std::abs(v - flow_value);
      CHECK(err <= prev_err + 1e-15);
      prev_err = err;
    }
  }
}
