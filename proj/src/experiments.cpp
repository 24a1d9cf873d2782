#include "curvelab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvelab/flow.hpp"
#include "curvelab/kernels.hpp"
#include "curvelab/zoo.hpp"

namespace curvelab::experiments {

namespace {

constexpr long kFuzzSteps = 100;
constexpr long kSweepSteps = 200;

double value_tolerance(const descent::Trajectory& traj) {
  return 1e-10 * (1.0 + std::abs(traj.values.front()));
}

bool monotone_decreasing(const descent::Trajectory& traj, double tol) {
  for (std::size_t n = 0; n + 1 < traj.values.size(); ++n) {
    if (traj.values[n + 1] > traj.values[n] + tol) return false;
  }
  return true;
}

Vec random_point(Rng& rng, int dimension, double radius = 5.0) {
  Vec x(static_cast<std::size_t>(dimension));
  for (double& v : x) v = rng.uniform(-radius, radius);
  return x;
}

ObjectiveFunction random_psd_quadratic(Rng& rng) {
  const int n = 2 + static_cast<int>(rng.uniform_int(3));  // 2..4
  std::vector<double> b_mat(static_cast<std::size_t>(n) * n);
  for (double& v : b_mat) v = rng.uniform(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += b_mat[k * n + r] * b_mat[k * n + c];
      a[r * n + c] = acc;
    }
  }
  Vec lin(static_cast<std::size_t>(n));
  for (double& v : lin) v = rng.uniform(-1.0, 1.0);
  return zoo::quadratic(a, lin);
}

ObjectiveFunction random_lse(Rng& rng) {
  const int n = 2 + static_cast<int>(rng.uniform_int(2));  // 2..3
  const int m = 3 + static_cast<int>(rng.uniform_int(4));  // 3..6
  std::vector<Vec> rows(static_cast<std::size_t>(m));
  for (Vec& r : rows) {
    r.resize(static_cast<std::size_t>(n));
    for (double& v : r) v = rng.uniform(-1.0, 1.0);
  }
  Vec offsets(static_cast<std::size_t>(m));
  for (double& v : offsets) v = rng.uniform(-0.5, 0.5);
  return zoo::log_sum_exp(rows, offsets);
}

constexpr double kCounterexampleScales[] = {0.25, 1.0, 4.0, 16.0};

}  // namespace

CounterexampleRecord reproduce_counterexample(double eta) {
  if (!(eta > 1.75 && eta < 2.0)) {
    throw std::invalid_argument("eta must lie in (1.75, 2)");
  }
  const ObjectiveFunction f = zoo::huber_counterexample();
  const descent::Trajectory traj = descent::gd_run(f, {-1.8}, eta, 2);

  CounterexampleRecord rec;
  for (int i = 0; i < 3; ++i) {
    rec.x[i] = traj.points[i][0];
    rec.f[i] = traj.values[i];
  }
  rec.violated = (rec.f[0] - rec.f[1]) < (rec.f[1] - rec.f[2]);
  rec.quadratic_lhs = eta * eta - 15.75 * eta + 24.5;
  if (rec.violated != (rec.quadratic_lhs < 0.0)) {
    throw std::logic_error("violation verdict disagrees with its certificate");
  }
  return rec;
}

namespace {

RegimeScanResult eta_scan_impl(const ObjectiveFunction& f, const Vec& x0,
                               int grid_size, long steps, double eta_min,
                               double eta_max) {
  if (!f.has_finite_smoothness()) {
    throw std::domain_error("scan requires finite smoothness");
  }
  if (!f.is_convex) throw std::invalid_argument("scan requires convexity");
  if (grid_size < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (steps < 2) throw std::invalid_argument("need at least 2 steps");

  const double l = f.smoothness_L;
  constexpr double kEps = 1e-3;
  const bool explicit_range = eta_min > 0.0;
  RegimeScanResult scan;
  scan.function_id = f.name;
  scan.x0 = x0;
  scan.steps = steps;
  scan.theoretical_threshold = 1.75 / l;

  auto probe_convex = [&f, &x0](double eta, long probe_steps) {
    try {
      const descent::Trajectory traj = descent::gd_run(f, x0, eta, probe_steps);
      return analysis::is_convex_sequence(traj.values, value_tolerance(traj))
          .convex;
    } catch (const descent::DivergenceError&) {
      return false;
    }
  };

  for (int i = 0; i < grid_size; ++i) {
    const double frac =
        static_cast<double>(i) / static_cast<double>(grid_size - 1);
    // The derived grid is computed as (base values)/L so that rescaled
    // problems land on exactly corresponding step sizes.
    const double eta = explicit_range
                           ? eta_min + (eta_max - eta_min) * frac
                           : (kEps + (2.0 - 2.0 * kEps) * frac) / l;
    scan.eta_grid.push_back(eta);
    EtaVerdict verdict;
    verdict.eta = eta;
    try {
      const descent::Trajectory traj = descent::gd_run(f, x0, eta, steps);
      const double tol = value_tolerance(traj);
      const analysis::CurveReport rep =
          analysis::is_convex_sequence(traj.values, tol);
      verdict.convex = rep.convex;
      verdict.monotone = monotone_decreasing(traj, tol);
      verdict.grad_monotone = analysis::gradient_norm_monotone(
          traj, 1e-10 * (1.0 + traj.grad_norms.front()));
      verdict.first_violation_step = rep.first_convexity_violation;
    } catch (const descent::DivergenceError&) {
      verdict.divergent = true;
    }
    scan.verdicts.push_back(verdict);
  }

  double lo = 0.0;
  bool have_lo = false;
  double hi = 0.0;
  bool have_hi = false;
  for (const EtaVerdict& v : scan.verdicts) {
    if (v.divergent) continue;
    if (v.convex) {
      lo = std::max(lo, v.eta);
      have_lo = true;
    } else if (!have_hi || v.eta < hi) {
      hi = v.eta;
      have_hi = true;
    }
  }
  if (!have_hi) {
    scan.empirical_threshold = 2.0 / l;
  } else if (!have_lo || lo > hi) {
    scan.empirical_threshold = scan.eta_grid.front();
  } else {
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (probe_convex(mid, 10)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    scan.empirical_threshold = 0.5 * (lo + hi);
  }
  return scan;
}

}  // namespace

RegimeScanResult eta_scan(const ObjectiveFunction& f, const Vec& x0,
                          int grid_size, long steps) {
  return eta_scan_impl(f, x0, grid_size, steps, 0.0, 0.0);
}

RegimeScanResult eta_scan(const ObjectiveFunction& f, const Vec& x0,
                          int grid_size, long steps, double eta_min,
                          double eta_max) {
  if (!f.has_finite_smoothness()) {
    throw std::domain_error("scan requires finite smoothness");
  }
  if (!(eta_min > 0.0 && eta_min < eta_max &&
        eta_max < 2.0 / f.smoothness_L)) {
    throw std::invalid_argument(
        "scan range must satisfy 0 < eta_min < eta_max < 2/L");
  }
  return eta_scan_impl(f, x0, grid_size, steps, eta_min, eta_max);
}

VerifySummary verify_theorem_suite(std::uint64_t seed, long trials) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  VerifySummary summary;
  summary.seed = seed;
  summary.trials = trials;
  const char* kChecks[] = {"T3.1", "T3.3", "T4.3", "T4.5", "TA.2", "TA.4"};
  for (const char* c : kChecks) summary.passes[c] = 0;

  for (long trial = 0; trial < trials; ++trial) {
    const std::uint64_t tseed = Rng::derive(seed, static_cast<std::uint64_t>(trial));
    Rng rng(tseed);

    ObjectiveFunction f;
    bool quadratic_family = false;
    switch (rng.uniform_int(5)) {
      case 0:
        f = zoo::square();
        quadratic_family = true;
        break;
      case 1:
        f = zoo::make_counterexample(
            kCounterexampleScales[rng.uniform_int(4)]);
        break;
      case 2:
        f = random_psd_quadratic(rng);
        quadratic_family = true;
        break;
      case 3:
        f = random_lse(rng);
        break;
      default:
        f = zoo::random_convex_1d(rng.next_u64(), 3 + static_cast<int>(rng.uniform_int(10)));
        break;
    }
    const double l = f.smoothness_L;
    const Vec x0 = random_point(rng, f.dimension);

    auto record = [&](const char* check, bool pass, double eta,
                      const std::string& detail) {
      if (pass) {
        ++summary.passes[check];
      } else {
        summary.failures.push_back({check, f.name, eta, tseed, detail});
      }
    };

    // T3.1: descent curve convexity for eta in (0, 1.75/L].
    {
      const double eta = 1.75 / l * rng.uniform_pos();
      try {
        const descent::Trajectory traj = descent::gd_run(f, x0, eta, kSweepSteps);
        const analysis::CurveReport rep =
            analysis::is_convex_sequence(traj.values, value_tolerance(traj));
        record("T3.1", rep.convex, eta,
               rep.convex ? ""
                          : "convexity violation at step " +
                                std::to_string(*rep.first_convexity_violation));
      } catch (const descent::DivergenceError& e) {
        record("T3.1", false, eta, e.what());
      }
    }

    // T3.3: gradient-norm monotonicity for eta in (0, 2/L].
    {
      const double eta = 2.0 / l * rng.uniform_pos();
      try {
        const descent::Trajectory traj = descent::gd_run(f, x0, eta, kSweepSteps);
        const bool pass = analysis::gradient_norm_monotone(
            traj, 1e-10 * (1.0 + traj.grad_norms.front()));
        record("T3.3", pass, eta, pass ? "" : "gradient norm increased");
      } catch (const descent::DivergenceError& e) {
        record("T3.3", false, eta, e.what());
      }
    }

    // T4.3 / T4.5: flow curve convexity and flow gradient-norm decay.
    {
      const double horizon = 5.0 / l;
      const int samples = 200;
      const double dt = horizon / samples;
      const int refine = 32;
      const flow::FlowSolution sol =
          flow::reference_flow(f, x0, dt / refine, horizon);
      Vec ts, vs;
      double vmax = 0.0;
      for (int k = 0; k <= samples; ++k) {
        const std::size_t idx = static_cast<std::size_t>(k) * refine;
        ts.push_back(sol.times[idx]);
        vs.push_back(sol.values[idx]);
        vmax = std::max(vmax, std::abs(sol.values[idx]));
      }
      const bool convex_curve =
          analysis::continuous_curve_convexity(ts, vs, 1e-9 * (1.0 + vmax));
      record("T4.3", convex_curve, 0.0,
             convex_curve ? "" : "flow curve not convex");

      bool norms_ok = true;
      const double gtol = 1e-9 * (1.0 + sol.grad_norms.front());
      for (std::size_t k = 0; k + 1 < sol.grad_norms.size(); ++k) {
        if (sol.grad_norms[k + 1] > sol.grad_norms[k] + gtol) norms_ok = false;
      }
      record("T4.5", norms_ok, 0.0,
             norms_ok ? "" : "flow gradient norm increased");
    }

    // TA.2: Euler path converges to the flow within the discretization bound.
    {
      const double eta = std::min(0.5 / l, 0.9);
      const double r = std::min(2.0 / l, 2.0);
      const double sup1 = flow::euler_sup_error(f, x0, eta, r);
      const double k_lip = kernels::norm(f.gradient(x0));
      bool pass = true;
      std::string detail;
      if (k_lip == 0.0) {
        pass = sup1 <= 1e-12;
        if (!pass) detail = "stationary start drifted";
      } else {
        const double bound = flow::euler_error_bound(k_lip, l, eta, r);
        pass = sup1 <= bound * (1.0 + 1e-9) + 1e-12;
        if (!pass) detail = "sup error above bound";
        if (pass && quadratic_family && sup1 > 1e-13) {
          const double sup2 = flow::euler_sup_error(f, x0, 0.5 * eta, r);
          const double ratio = sup2 / sup1;
          pass = ratio >= 0.3 && ratio <= 0.7;
          if (!pass) detail = "halving ratio outside [0.3, 0.7]";
        }
      }
      record("TA.2", pass, eta, detail);
    }

    // TA.4: Euler optimization curve is convex for eta = 1/L.
    {
      const double eta = 1.0 / l;
      const double horizon = 5.0 / l;
      const flow::EulerPath path = flow::euler_path(f, x0, eta, horizon);
      Vec ts, vs;
      double vmax = 0.0;
      for (long j = 0;; ++j) {
        const double t = static_cast<double>(j) * 0.5 * eta;
        if (t > path.horizon()) break;
        const Vec state = flow::euler_evaluate(path, t);
        const double v = f.value(state);
        ts.push_back(t);
        vs.push_back(v);
        vmax = std::max(vmax, std::abs(v));
      }
      const bool pass =
          analysis::continuous_curve_convexity(ts, vs, 1e-10 * (1.0 + vmax));
      record("TA.4", pass, eta, pass ? "" : "Euler curve not convex");
    }
  }
  return summary;
}

std::vector<ViolationRecord> fuzz_convexity(std::uint64_t seed, long trials,
                                            EtaMode mode) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  std::vector<ViolationRecord> violations;

  for (long trial = 0; trial < trials; ++trial) {
    const std::uint64_t tseed = Rng::derive(seed, static_cast<std::uint64_t>(trial));
    Rng rng(tseed);

    ObjectiveFunction f;
    Vec x0;
    const int family = static_cast<int>(trial % 5);
    switch (family) {
      case 0:
      case 1:
        f = zoo::random_convex_1d(rng.next_u64(),
                                  3 + static_cast<int>(rng.uniform_int(10)));
        x0 = random_point(rng, 1);
        break;
      case 2:
        f = random_psd_quadratic(rng);
        x0 = random_point(rng, f.dimension);
        break;
      case 3: {
        // Canonical junction-crossing start for the piecewise member.
        const double l = kCounterexampleScales[rng.uniform_int(4)];
        f = zoo::make_counterexample(l);
        x0 = {-1.8 / std::sqrt(l)};
        break;
      }
      default: {
        const double l = kCounterexampleScales[rng.uniform_int(4)];
        f = zoo::make_counterexample(l);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        x0 = {sign * rng.uniform(1.0, 3.0) / std::sqrt(l)};
        break;
      }
    }

    const double l = f.smoothness_L;
    double eta = 0.0;
    if (mode == EtaMode::SafeRegime) {
      eta = 1.75 / l * rng.uniform_pos();
    } else {
      double u = rng.uniform();
      while (u == 0.0) u = rng.uniform();
      eta = (1.75 + 0.25 * u) / l;
    }

    descent::Trajectory traj;
    try {
      traj = descent::gd_run(f, x0, eta, kFuzzSteps);
    } catch (const descent::DivergenceError& e) {
      ViolationRecord rec;
      rec.function_id = f.name;
      rec.eta = eta;
      rec.x0 = x0;
      rec.trial_seed = tseed;
      rec.first_violation = static_cast<std::size_t>(
          std::max<long>(e.last_valid_index, 0));
      rec.monotone = false;
      violations.push_back(std::move(rec));
      continue;
    }
    const double tol = value_tolerance(traj);
    const analysis::CurveReport rep =
        analysis::is_convex_sequence(traj.values, tol);
    if (!rep.convex) {
      ViolationRecord rec;
      rec.function_id = f.name;
      rec.eta = eta;
      rec.x0 = x0;
      rec.trial_seed = tseed;
      rec.first_violation = *rep.first_convexity_violation;
      rec.violation_magnitudes = rep.violation_magnitudes;
      rec.runs = rep.consecutive_violation_runs;
      rec.monotone = monotone_decreasing(traj, tol);
      violations.push_back(std::move(rec));
    }
  }
  return violations;
}

}  // namespace curvelab::experiments
