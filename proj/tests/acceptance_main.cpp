// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "curvelab/analysis.hpp"
#include "curvelab/cli.hpp"
#include "curvelab/descent.hpp"
#include "curvelab/experiments.hpp"
#include "curvelab/flow.hpp"
#include "curvelab/io.hpp"
#include "curvelab/zoo.hpp"

using curvelab::ObjectiveFunction;
using curvelab::Rng;
using curvelab::Vec;
namespace analysis = curvelab::analysis;
namespace cli = curvelab::cli;
namespace descent = curvelab::descent;
namespace experiments = curvelab::experiments;
namespace flow = curvelab::flow;
namespace zoo = curvelab::zoo;

namespace {

int g_failures = 0;

void criterion(int num, const char* label, bool pass, const std::string& note) {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", num,
              label, note.empty() ? "" : " -- ", note.c_str());
  if (!pass) ++g_failures;
}

struct Member {
  ObjectiveFunction fn;
  Vec flow_x0;
};

std::vector<Member> convex_smooth_members() {
  std::vector<Member> members;
  members.push_back({zoo::square(), {3.0}});
  members.push_back({zoo::huber_counterexample(), {2.5}});
  members.push_back({zoo::log_sum_exp(), {2.0, -1.0}});
  members.push_back({zoo::quadratic_diag({0.5, 2.0}, {0.0, 1.0}), {3.0, -2.0}});
  members.push_back({zoo::random_convex_1d(2026, 9), {4.0}});
  return members;
}

Vec random_start(Rng& rng, int dim) {
  Vec x(static_cast<std::size_t>(dim));
  for (double& v : x) v = rng.uniform(-5.0, 5.0);
  return x;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 1. Two-step counterexample values and the quadratic certificate, driven
//    through the CLI.
void criterion_1() {
  bool pass = true;
  std::string note;

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "curvelab_acceptance_cx";
  fs::remove_all(dir);
  cli::ExperimentConfig cfg;
  cfg.command = "counterexample";
  cfg.eta = 1.9;
  cfg.output_dir = dir.string();
  std::ostringstream out, err;
  if (cli::dispatch(cfg, out, err) != 0) {
    pass = false;
    note = "cli exit nonzero";
  }
  const std::string json_text = slurp(dir / "counterexample.json");
  fs::remove_all(dir);
  if (pass && json_text.find("\"violated\": true") == std::string::npos) {
    pass = false;
    note = "cli record not violated";
  }

  const auto rec = experiments::reproduce_counterexample(1.9);
  if (std::abs(rec.f[0] - 1.62) > 1e-12 || std::abs(rec.f[1] - 1.12) > 1e-12 ||
      std::abs(rec.f[2] - 0.0392) > 1e-12 || !rec.violated) {
    pass = false;
    note = "eta=1.9 record off";
  }
  for (int i = 1; i <= 20 && pass; ++i) {
    const double eta = 1.75 + 0.25 * static_cast<double>(i) / 21.0;
    const auto r = experiments::reproduce_counterexample(eta);
    if (!(r.violated && r.quadratic_lhs < 0.0)) {
      pass = false;
      note = "grid eta=" + curvelab::io::format_double(eta);
    }
  }
  criterion(1, "counterexample reproduction at eta in (1.75, 2)", pass, note);
}

// 2. Zero convexity violations for eta <= 1.75/L, plus 1e4 safe fuzz trials.
void criterion_2() {
  bool pass = true;
  std::string note;
  Rng rng(1001);
  for (const Member& m : convex_smooth_members()) {
    for (int trial = 0; trial < 50 && pass; ++trial) {
      const Vec x0 = random_start(rng, m.fn.dimension);
      const double eta = 1.75 / m.fn.smoothness_L * rng.uniform_pos();
      const descent::Trajectory traj = descent::gd_run(m.fn, x0, eta, 200);
      const double tol = 1e-10 * (1.0 + std::abs(traj.values.front()));
      if (!analysis::is_convex_sequence(traj.values, tol).convex) {
        pass = false;
        note = m.fn.name + " violated at eta=" + curvelab::io::format_double(eta);
      }
    }
  }
  if (pass) {
    const auto violations = experiments::fuzz_convexity(
        4242, 10000, experiments::EtaMode::SafeRegime);
    if (!violations.empty()) {
      pass = false;
      note = std::to_string(violations.size()) + " fuzz violations";
    }
  }
  criterion(2, "safe-regime convexity, 250 sweeps + 10^4 fuzz trials", pass, note);
}

// 3. Bisected convexity threshold within 1e-6 of 1.75.
void criterion_3() {
  const auto scan =
      experiments::eta_scan(zoo::huber_counterexample(), {-1.8}, 50, 10);
  const double err = std::abs(scan.empirical_threshold - 1.75);
  criterion(3, "regime boundary bisected to 1.75 within 1e-6", err <= 1e-6,
            "threshold=" + curvelab::io::format_double(scan.empirical_threshold));
}

// 4. Gradient norms never increase for eta <= 2/L, equality at the boundary.
void criterion_4() {
  bool pass = true;
  std::string note;
  Rng rng(1004);
  for (const Member& m : convex_smooth_members()) {
    for (int trial = 0; trial < 50 && pass; ++trial) {
      const Vec x0 = random_start(rng, m.fn.dimension);
      const double eta = (trial == 0 ? 1.0 : rng.uniform_pos()) *
                         2.0 / m.fn.smoothness_L;
      const descent::Trajectory traj = descent::gd_run(m.fn, x0, eta, 200);
      if (!analysis::gradient_norm_monotone(
              traj, 1e-10 * (1.0 + traj.grad_norms.front()))) {
        pass = false;
        note = m.fn.name + " at eta=" + curvelab::io::format_double(eta);
      }
    }
  }
  if (pass) {
    const descent::Trajectory edge =
        descent::gd_run(zoo::quadratic_diag({1.0}, {0.0}), {1.0}, 2.0, 50);
    for (std::size_t n = 0; n + 1 < edge.size(); ++n) {
      if (std::abs(edge.grad_norms[n + 1] - edge.grad_norms[n]) > 1e-12) {
        pass = false;
        note = "boundary case norms not constant";
      }
    }
  }
  criterion(4, "gradient-norm monotonicity up to eta = 2/L", pass, note);
}

// 5. Certificate inequality on 10^3 random triples, equality for 1-d
//    quadratics whose curvature equals L.
void criterion_5() {
  bool pass = true;
  std::string note;
  Rng rng(1005);
  const auto members = convex_smooth_members();
  for (int trial = 0; trial < 1000 && pass; ++trial) {
    const ObjectiveFunction& f = members[trial % members.size()].fn;
    const Vec x0 = random_start(rng, f.dimension);
    const double eta = rng.uniform(1e-3, 2.2) / f.smoothness_L;
    const auto [lhs, rhs] = analysis::certificate_gap(f, x0, eta);
    const double scale =
        1.0 + std::abs(f.value(x0)) + std::abs(lhs) + std::abs(rhs);
    if (lhs < rhs - 1e-10 * scale) {
      pass = false;
      note = f.name + " gap " + curvelab::io::format_double(lhs - rhs);
    }
  }
  if (pass) {
    const auto [lhs, rhs] =
        analysis::certificate_gap(zoo::quadratic_diag({1.0}, {0.0}), {1.0}, 1.0);
    if (std::abs(lhs - 0.5) > 1e-12 || std::abs(rhs - 0.5) > 1e-12) {
      pass = false;
      note = "half-square equality case off";
    }
  }
  for (int trial = 0; trial < 200 && pass; ++trial) {
    const double curvature = rng.uniform(0.2, 8.0);
    const ObjectiveFunction f =
        zoo::quadratic_diag({curvature}, {rng.uniform(-2.0, 2.0)});
    const Vec x0 = random_start(rng, 1);
    const double eta = rng.uniform(1e-3, 2.0) / curvature;
    const auto [lhs, rhs] = analysis::certificate_gap(f, x0, eta);
    const double scale =
        1.0 + std::abs(f.value(x0)) + std::abs(lhs) + std::abs(rhs);
    if (std::abs(lhs - rhs) > 1e-10 * scale) {
      pass = false;
      note = "equality case violated at curvature " +
             curvelab::io::format_double(curvature);
    }
  }
  criterion(5, "curvature certificate: lhs >= rhs, equality for tight quadratics",
            pass, note);
}

// 6. Euler sup error value, bound, and halving ratios on half-square.
void criterion_6() {
  const ObjectiveFunction f = zoo::quadratic_diag({1.0}, {0.0});
  bool pass = true;
  std::string note;
  const double sup01 = flow::euler_sup_error(f, {1.0}, 0.1, 1.0);
  double euler_at_1 = 1.0;
  for (int i = 0; i < 10; ++i) euler_at_1 *= 0.9;
  const double expected = std::abs(euler_at_1 - std::exp(-1.0));
  if (std::abs(sup01 - expected) > 1e-6) {
    pass = false;
    note = "sup=" + curvelab::io::format_double(sup01);
  }
  const double bound = flow::euler_error_bound(1.0, 1.0, 0.1, 1.0);
  if (pass && sup01 > bound) {
    pass = false;
    note = "sup above bound";
  }
  double prev = sup01;
  for (const double eta : {0.05, 0.025, 0.0125}) {
    const double cur = flow::euler_sup_error(f, {1.0}, eta, 1.0);
    const double ratio = cur / prev;
    if (ratio < 0.3 || ratio > 0.7) {
      pass = false;
      note = "ratio " + curvelab::io::format_double(ratio) + " at eta=" +
             curvelab::io::format_double(eta);
    }
    prev = cur;
  }
  criterion(6, "Euler discretization error and its bound", pass, note);
}

// 7. Flow curves convex with decaying gradient norms; Euler curves convex
//    at eta in {1/L, 1/(2L)}; Hessian curvature non-negative.
void criterion_7() {
  bool pass = true;
  std::string note;
  for (const Member& m : convex_smooth_members()) {
    const double l = m.fn.smoothness_L;
    const double horizon = 5.0 / l;
    const int samples = 500;
    const double dt = horizon / samples;
    const int refine = 128;
    const flow::FlowSolution sol =
        flow::reference_flow(m.fn, m.flow_x0, dt / refine, horizon);
    Vec ts, vs;
    for (int k = 0; k <= samples; ++k) {
      const std::size_t idx = static_cast<std::size_t>(k) * refine;
      ts.push_back(sol.times[idx]);
      vs.push_back(sol.values[idx]);
    }
    if (!analysis::continuous_curve_convexity(ts, vs, 1e-9)) {
      pass = false;
      note = m.fn.name + " flow curve not convex";
      break;
    }
    for (std::size_t k = 0; k + 1 < sol.grad_norms.size(); ++k) {
      if (sol.grad_norms[k + 1] > sol.grad_norms[k] + 1e-9) {
        pass = false;
        note = m.fn.name + " flow gradient norm increased";
      }
    }
    if (!pass) break;
    for (const double eta : {1.0 / l, 0.5 / l}) {
      const flow::EulerPath path = flow::euler_path(m.fn, m.flow_x0, eta, horizon);
      Vec ets, evs;
      for (long j = 0;; ++j) {
        const double t = static_cast<double>(j) * 0.5 * eta;
        if (t > path.horizon()) break;
        ets.push_back(t);
        evs.push_back(m.fn.value(flow::euler_evaluate(path, t)));
      }
      if (!analysis::continuous_curve_convexity(ets, evs, 1e-9)) {
        pass = false;
        note = m.fn.name + " Euler curve not convex at eta=" +
               curvelab::io::format_double(eta);
      }
    }
    if (!pass) break;
    if (m.fn.has_hessian_action()) {
      const Vec curv = flow::hessian_curvature(m.fn, sol);
      for (double c : curv) {
        if (c < -1e-12) {
          pass = false;
          note = m.fn.name + " negative curvature";
        }
      }
    }
    if (!pass) break;
  }
  criterion(7, "flow and Euler optimization curves convex, norms decaying",
            pass, note);
}

// 8. Rescaling reduction: iterates scale by 1/sqrt(L), values agree, scan
//    verdict patterns are invariant.
void criterion_8() {
  bool pass = true;
  std::string note;
  Rng rng(1008);
  const ObjectiveFunction base = zoo::huber_counterexample();
  for (const double l : {0.25, 1.0, 4.0, 16.0}) {
    const ObjectiveFunction g = zoo::make_counterexample(l);
    const double scale = std::sqrt(l);
    for (int trial = 0; trial < 10 && pass; ++trial) {
      const double x0 = rng.uniform(-3.0, 3.0);
      const double eta = rng.uniform(0.05, 1.95);
      const descent::Trajectory a = descent::gd_run(base, {x0}, eta, 30);
      const descent::Trajectory b =
          descent::gd_run(g, {x0 / scale}, eta / l, 30);
      for (std::size_t n = 0; n < a.size(); ++n) {
        const double ref_x = a.points[n][0] / scale;
        if (std::abs(b.points[n][0] - ref_x) >
            1e-10 * (1.0 + std::abs(ref_x))) {
          pass = false;
          note = "iterate mismatch at L=" + curvelab::io::format_double(l);
        }
        if (std::abs(b.values[n] - a.values[n]) >
            1e-10 * (1.0 + std::abs(a.values[n]))) {
          pass = false;
          note = "value mismatch at L=" + curvelab::io::format_double(l);
        }
      }
    }
  }
  if (pass) {
    const auto ref = experiments::eta_scan(base, {-1.8}, 30, 10);
    for (const double l : {0.25, 4.0, 16.0}) {
      const auto scan = experiments::eta_scan(zoo::make_counterexample(l),
                                              {-1.8 / std::sqrt(l)}, 30, 10);
      for (std::size_t i = 0; i < ref.verdicts.size(); ++i) {
        if (scan.verdicts[i].convex != ref.verdicts[i].convex) {
          pass = false;
          note = "verdict pattern changed at L=" + curvelab::io::format_double(l);
        }
      }
    }
  }
  criterion(8, "rescaling invariance across L in {0.25, 1, 4, 16}", pass, note);
}

// 9. The nonsmooth member rises then falls: [eta/4, 3 eta/2, 5 eta/4].
void criterion_9() {
  const descent::Trajectory traj =
      descent::gd_run(zoo::abs_plus_relu(), {-0.25}, 1.0, 2);
  const analysis::CurveReport rep = analysis::analyze_trajectory(traj);
  const bool pass = traj.values[0] == 0.25 && traj.values[1] == 1.5 &&
                    traj.values[2] == 1.25 && !rep.monotone_decreasing &&
                    !rep.convex;
  criterion(9, "nonsmooth example is neither monotone nor convex", pass, "");
}

// 10. Byte-identical artifacts for repeated verify runs.
void criterion_10() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "curvelab_acceptance_verify";
  fs::remove_all(dir);
  cli::ExperimentConfig cfg;
  cfg.command = "verify";
  cfg.seed = 42;
  cfg.trials = 100;
  cfg.output_dir = dir.string();

  std::ostringstream out1, err1;
  const int code1 = cli::dispatch(cfg, out1, err1);
  const std::string verify1 = slurp(dir / "verify.json");
  const std::string meta1 = slurp(dir / "run_meta.json");
  std::ostringstream out2, err2;
  const int code2 = cli::dispatch(cfg, out2, err2);
  const std::string verify2 = slurp(dir / "verify.json");
  const std::string meta2 = slurp(dir / "run_meta.json");
  fs::remove_all(dir);

  bool pass = code1 == 0 && code2 == 0;
  std::string note;
  if (!pass) note = "exit codes " + std::to_string(code1) + "/" + std::to_string(code2);
  if (pass && (verify1 != verify2 || meta1 != meta2 ||
               out1.str() != out2.str())) {
    pass = false;
    note = "artifacts differ between runs";
  }
  if (pass && out1.str().find("6/6 theorem checks passed") == std::string::npos) {
    pass = false;
    note = "unexpected summary: " + out1.str();
  }
  criterion(10, "verify --seed 42 --trials 100 is byte-reproducible", pass, note);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
