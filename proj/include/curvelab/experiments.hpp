#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvelab/analysis.hpp"
#include "curvelab/function.hpp"

namespace curvelab::experiments {

/// Two descent steps on the 1-smooth counterexample from x0 = -1.8.
/// For eta in (1.75, 2) the curve always violates convexity, and the
/// violation sign matches the sign of eta^2 - 15.75 eta + 24.5.
struct CounterexampleRecord {
  std::array<double, 3> x{};
  std::array<double, 3> f{};
  bool violated = false;
  double quadratic_lhs = 0.0;
};
CounterexampleRecord reproduce_counterexample(double eta);

struct EtaVerdict {
  double eta = 0.0;
  bool divergent = false;
  bool convex = false;
  bool monotone = false;
  bool grad_monotone = false;
  std::optional<std::size_t> first_violation_step;
};

struct RegimeScanResult {
  Vec eta_grid;
  std::vector<EtaVerdict> verdicts;
  /// Bisected boundary between convex and violating step sizes
  /// (2/L when the whole grid is convex).
  double empirical_threshold = 0.0;
  double theoretical_threshold = 0.0;  // 1.75 / L
  std::string function_id;
  Vec x0;
  long steps = 0;
};

/// Verdicts over a step-size grid spanning (eps/L, (2-eps)/L), eps = 1e-3,
/// plus threshold bisection (40 iterations, 10-step probe trajectories).
RegimeScanResult eta_scan(const ObjectiveFunction& f, const Vec& x0,
                          int grid_size, long steps);

/// Same scan over an explicit grid range; requires 0 < eta_min < eta_max < 2/L.
RegimeScanResult eta_scan(const ObjectiveFunction& f, const Vec& x0,
                          int grid_size, long steps, double eta_min,
                          double eta_max);

struct TheoremCheckFailure {
  std::string check;
  std::string function_id;
  double eta = 0.0;
  std::uint64_t trial_seed = 0;
  std::string detail;
};

struct VerifySummary {
  std::uint64_t seed = 0;
  long trials = 0;
  /// check id -> pass count; the six ids are T3.1, T3.3, T4.3, T4.5,
  /// TA.2, TA.4.
  std::map<std::string, long> passes;
  std::vector<TheoremCheckFailure> failures;
  bool all_passed() const { return failures.empty(); }
};

/// Randomized re-verification of the six curve theorems over zoo draws.
VerifySummary verify_theorem_suite(std::uint64_t seed, long trials);

enum class EtaMode { SafeRegime, DangerRegime };

struct ViolationRecord {
  std::string function_id;
  double eta = 0.0;
  Vec x0;
  std::uint64_t trial_seed = 0;
  std::size_t first_violation = 0;
  Vec violation_magnitudes;
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  bool monotone = false;
};

/// Random search for convexity violations. SafeRegime draws eta in
/// (0, 1.75/L] and is expected to return nothing; DangerRegime draws eta
/// in (1.75/L, 2/L) and records every violation found.
std::vector<ViolationRecord> fuzz_convexity(std::uint64_t seed, long trials,
                                            EtaMode mode);

}  // namespace curvelab::experiments
