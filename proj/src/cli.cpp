#include "curvelab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "curvelab/analysis.hpp"
#include "curvelab/descent.hpp"
#include "curvelab/experiments.hpp"
#include "curvelab/flow.hpp"
#include "curvelab/io.hpp"
#include "curvelab/zoo.hpp"

namespace curvelab::cli {

namespace {

using nlohmann::json;

const char* kCommands[] = {"run-gd", "run-flow",      "scan",
                           "verify", "counterexample", "fuzz"};

bool known_command(const std::string& c) {
  for (const char* k : kCommands) {
    if (c == k) return true;
  }
  return false;
}

double parse_double(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end == nullptr || *end != '\0') {
    throw std::invalid_argument("malformed number '" + text + "'");
  }
  return v;
}

long parse_long(const std::string& text) {
  std::size_t pos = 0;
  const long v = std::stol(text, &pos);
  if (pos != text.size()) {
    throw std::invalid_argument("malformed integer '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  std::size_t pos = 0;
  const std::uint64_t v = std::stoull(text, &pos);
  if (pos != text.size()) {
    throw std::invalid_argument("malformed seed '" + text + "'");
  }
  return v;
}

Vec parse_vec(const std::string& text) {
  Vec out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = (comma == std::string::npos) ? text.size() : comma;
    out.push_back(parse_double(text.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join_vec(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += io::format_double(v[i]);
  }
  return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
  if (key == "command") {
    cfg.command = value;
  } else if (key == "fn") {
    cfg.function_id = value;
  } else if (key == "x0") {
    cfg.x0 = value.empty() ? Vec{} : parse_vec(value);
  } else if (key == "eta") {
    cfg.eta = parse_double(value);
  } else if (key == "eta_min") {
    cfg.eta_min = parse_double(value);
  } else if (key == "eta_max") {
    cfg.eta_max = parse_double(value);
  } else if (key == "grid") {
    cfg.grid = static_cast<int>(parse_long(value));
  } else if (key == "steps") {
    cfg.steps = parse_long(value);
  } else if (key == "horizon") {
    cfg.horizon = parse_double(value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(value);
  } else if (key == "trials") {
    cfg.trials = parse_long(value);
  } else if (key == "out") {
    cfg.output_dir = value;
  } else if (key == "tol") {
    cfg.tol = parse_double(value);
  } else if (key == "mode") {
    cfg.mode = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

json config_json(const ExperimentConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["fn"] = cfg.function_id;
  j["x0"] = cfg.x0;
  j["eta"] = cfg.eta;
  j["eta_min"] = cfg.eta_min;
  j["eta_max"] = cfg.eta_max;
  j["grid"] = cfg.grid;
  j["steps"] = cfg.steps;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["out"] = cfg.output_dir;
  j["tol"] = cfg.tol;
  j["mode"] = cfg.mode;
  return j;
}

void write_run_meta(const ExperimentConfig& cfg) {
  json j;
  j["version"] = kVersion;
  j["config"] = config_json(cfg);
  j["tolerances"] = {{"tol0", cfg.tol},
                     {"flow_tol", 1e-9},
                     {"value_exact_tol", 1e-12}};
  io::write_file(std::filesystem::path(cfg.output_dir) / "run_meta.json",
                 j.dump(2) + "\n");
}

const Vec& require_x0(const ExperimentConfig& cfg) {
  if (cfg.x0.empty()) {
    throw std::invalid_argument("this command requires --x0");
  }
  return cfg.x0;
}

int run_gd(const ExperimentConfig& cfg, std::ostream& out) {
  const ObjectiveFunction f = zoo::from_id(cfg.function_id);
  const Vec& x0 = require_x0(cfg);
  const std::filesystem::path dir(cfg.output_dir);

  descent::Trajectory traj;
  bool diverged = false;
  long last_valid = -1;
  try {
    traj = descent::gd_run(f, x0, cfg.eta, cfg.steps);
  } catch (const descent::DivergenceError& e) {
    traj = e.partial;
    diverged = true;
    last_valid = e.last_valid_index;
  }
  io::write_file(dir / "trajectory.csv", io::trajectory_csv(traj));
  io::write_file(dir / "trajectory.meta.json", io::trajectory_meta_json(traj));
  io::write_file(dir / "function.json", zoo::describe(f) + "\n");
  if (diverged) {
    out << "run-gd " << f.name << ": diverged; last finite iterate at step "
        << last_valid << " of " << cfg.steps << ". Partial trajectory written to "
        << (dir / "trajectory.csv").string() << ".\n";
    return kExitPass;
  }
  const analysis::CurveReport report =
      analysis::analyze_trajectory(traj, cfg.tol);
  io::write_file(dir / "report.json", io::curve_report_json(report));
  out << "run-gd " << f.name << ": eta=" << io::format_double(cfg.eta)
      << ", steps=" << cfg.steps << ", final f="
      << io::format_double(traj.values.back())
      << ". Curve monotone=" << (report.monotone_decreasing ? "yes" : "no")
      << ", convex=" << (report.convex ? "yes" : "no")
      << ", grad-norm monotone=" << (report.grad_norm_monotone ? "yes" : "no")
      << ".\n";
  return kExitPass;
}

int run_flow(const ExperimentConfig& cfg, std::ostream& out) {
  const ObjectiveFunction f = zoo::from_id(cfg.function_id);
  const Vec& x0 = require_x0(cfg);
  if (!f.has_finite_smoothness()) {
    throw std::invalid_argument("run-flow requires a finitely smooth objective");
  }
  const double h = std::min(0.01 / f.smoothness_L, cfg.horizon / 100.0);
  const flow::FlowSolution sol = flow::reference_flow(f, x0, h, cfg.horizon);
  const std::filesystem::path dir(cfg.output_dir);
  io::write_file(dir / "flow.csv", io::flow_csv(sol, f.dimension));
  io::write_file(dir / "function.json", zoo::describe(f) + "\n");

  double vmax = 0.0;
  for (double v : sol.values) vmax = std::max(vmax, std::abs(v));
  const bool convex = analysis::continuous_curve_convexity(
      sol.times, sol.values, 1e-9 * (1.0 + vmax));
  bool norms_ok = true;
  const double gtol = 1e-9 * (1.0 + sol.grad_norms.front());
  for (std::size_t k = 0; k + 1 < sol.grad_norms.size(); ++k) {
    if (sol.grad_norms[k + 1] > sol.grad_norms[k] + gtol) norms_ok = false;
  }
  json verdict = {{"curve_convex", convex},
                  {"grad_norm_monotone", norms_ok},
                  {"step_h", h},
                  {"horizon", cfg.horizon}};
  io::write_file(dir / "report.json", verdict.dump(2) + "\n");
  out << "run-flow " << f.name << ": horizon=" << io::format_double(cfg.horizon)
      << ", step=" << io::format_double(h) << ", final f="
      << io::format_double(sol.values.back())
      << ". Curve convex=" << (convex ? "yes" : "no")
      << ", grad-norm monotone=" << (norms_ok ? "yes" : "no") << ".\n";
  return kExitPass;
}

int run_scan(const ExperimentConfig& cfg, std::ostream& out) {
  const ObjectiveFunction f = zoo::from_id(cfg.function_id);
  const Vec& x0 = require_x0(cfg);
  const bool explicit_range = cfg.eta_min != 0.0 || cfg.eta_max != 0.0;
  const experiments::RegimeScanResult scan =
      explicit_range
          ? experiments::eta_scan(f, x0, cfg.grid, cfg.steps, cfg.eta_min,
                                  cfg.eta_max)
          : experiments::eta_scan(f, x0, cfg.grid, cfg.steps);
  const std::filesystem::path dir(cfg.output_dir);
  io::write_file(dir / "scan.csv", io::scan_csv(scan));
  io::write_file(dir / "scan.json", io::scan_summary_json(scan));
  io::write_file(dir / "function.json", zoo::describe(f) + "\n");
  long violating = 0;
  for (const auto& v : scan.verdicts) {
    if (!v.divergent && !v.convex) ++violating;
  }
  out << "scan " << f.name << ": " << scan.eta_grid.size()
      << " step sizes in (" << io::format_double(scan.eta_grid.front()) << ", "
      << io::format_double(scan.eta_grid.back()) << "), " << violating
      << " non-convex verdicts. Empirical convexity threshold "
      << io::format_double(scan.empirical_threshold) << " (safe bound "
      << io::format_double(scan.theoretical_threshold) << ").\n";
  return kExitPass;
}

int run_counterexample(const ExperimentConfig& cfg, std::ostream& out) {
  const experiments::CounterexampleRecord rec =
      experiments::reproduce_counterexample(cfg.eta);
  io::write_file(std::filesystem::path(cfg.output_dir) / "counterexample.json",
                 io::counterexample_json(rec));
  out << "counterexample eta=" << io::format_double(cfg.eta) << ": f = ["
      << io::format_double(rec.f[0]) << ", " << io::format_double(rec.f[1])
      << ", " << io::format_double(rec.f[2]) << "], convexity violated="
      << (rec.violated ? "yes" : "no")
      << " (certificate " << io::format_double(rec.quadratic_lhs) << " < 0).\n";
  return kExitPass;
}

int run_verify(const ExperimentConfig& cfg, std::ostream& out) {
  const experiments::VerifySummary summary =
      experiments::verify_theorem_suite(cfg.seed, cfg.trials);
  io::write_file(std::filesystem::path(cfg.output_dir) / "verify.json",
                 io::verify_summary_json(summary));
  long passed_checks = 0;
  for (const auto& [check, count] : summary.passes) {
    if (count == summary.trials) ++passed_checks;
  }
  out << passed_checks << "/" << summary.passes.size()
      << " theorem checks passed (" << summary.trials
      << " randomized trials each, seed " << cfg.seed << ").";
  if (!summary.all_passed()) {
    out << " " << summary.failures.size()
        << " failures recorded in verify.json.";
  }
  out << "\n";
  return summary.all_passed() ? kExitPass : kExitCheckFailed;
}

int run_fuzz(const ExperimentConfig& cfg, std::ostream& out) {
  experiments::EtaMode mode;
  if (cfg.mode == "safe") {
    mode = experiments::EtaMode::SafeRegime;
  } else if (cfg.mode == "danger") {
    mode = experiments::EtaMode::DangerRegime;
  } else {
    throw std::invalid_argument("mode must be 'safe' or 'danger'");
  }
  const std::vector<experiments::ViolationRecord> violations =
      experiments::fuzz_convexity(cfg.seed, cfg.trials, mode);
  std::string lines;
  std::size_t longest_run = 0;
  for (const auto& rec : violations) {
    lines += io::violation_json(rec);
    lines += '\n';
    for (const auto& [start, len] : rec.runs) {
      longest_run = std::max(longest_run, len);
    }
  }
  const std::filesystem::path dir(cfg.output_dir);
  io::write_file(dir / "fuzz_violations.jsonl", lines);
  json summary = {{"mode", cfg.mode},
                  {"trials", cfg.trials},
                  {"violations", violations.size()},
                  {"longest_violation_run", longest_run}};
  io::write_file(dir / "fuzz_summary.json", summary.dump(2) + "\n");
  out << "fuzz mode=" << cfg.mode << ": " << cfg.trials << " trials, "
      << violations.size() << " convexity violations";
  if (!violations.empty()) {
    out << " (longest consecutive run " << longest_run << ")";
  }
  out << ".\n";
  if (mode == experiments::EtaMode::SafeRegime && !violations.empty()) {
    return kExitCheckFailed;
  }
  return kExitPass;
}

}  // namespace

std::string ExperimentConfig::to_kv() const {
  std::string out;
  out += "command=" + command + "\n";
  out += "fn=" + function_id + "\n";
  if (!x0.empty()) out += "x0=" + join_vec(x0) + "\n";
  out += "eta=" + io::format_double(eta) + "\n";
  out += "eta_min=" + io::format_double(eta_min) + "\n";
  out += "eta_max=" + io::format_double(eta_max) + "\n";
  out += "grid=" + std::to_string(grid) + "\n";
  out += "steps=" + std::to_string(steps) + "\n";
  out += "horizon=" + io::format_double(horizon) + "\n";
  out += "seed=" + std::to_string(seed) + "\n";
  out += "trials=" + std::to_string(trials) + "\n";
  out += "out=" + output_dir + "\n";
  out += "tol=" + io::format_double(tol) + "\n";
  out += "mode=" + mode + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::from_kv(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(start, nl - start));
    start = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed config line '" + line + "'");
    }
    apply_key(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

std::string usage_text() {
  std::ostringstream out;
  out << "curvelab " << kVersion
      << " - optimization-curve laboratory for gradient descent and gradient flow\n"
      << "\n"
      << "usage: curvelab <command> [flags]\n"
      << "\n"
      << "commands:\n"
      << "  run-gd          gradient-descent trajectory with curve report\n"
      << "  run-flow        high-accuracy gradient-flow path with curve report\n"
      << "  scan            step-size grid scan with threshold bisection\n"
      << "  counterexample  two-step convexity violation at eta in (1.75, 2)\n"
      << "  verify          randomized re-verification of the six curve checks\n"
      << "  fuzz            random search for convexity violations\n"
      << "\n"
      << "flags:\n"
      << "  --fn ID         objective id (square, huber_l=1, absrelu, lse,\n"
      << "                  quad_d=1,2_b=0,0, random1d_seed=7_pieces=8)\n"
      << "  --x0 LIST       start point, comma-separated\n"
      << "  --eta V         step size\n"
      << "  --eta-min V / --eta-max V   scan range overrides\n"
      << "  --steps N       iteration count\n"
      << "  --horizon T     flow horizon\n"
      << "  --seed S        base seed for randomized commands\n"
      << "  --trials N      trial count for verify/fuzz\n"
      << "  --grid N        scan grid size\n"
      << "  --mode M        fuzz regime: safe | danger\n"
      << "  --out DIR       output directory (default: out)\n"
      << "  --tol V         base tolerance for curve verdicts\n"
      << "  --config FILE   flat key=value config; flags override file entries\n";
  return out.str();
}

ParseResult parse_args(const std::vector<std::string>& args, std::ostream& err) {
  ParseResult result;
  std::vector<std::string> positional;
  std::vector<std::pair<std::string, std::string>> flags;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& tok = args[i];
    if (tok == "--help" || tok == "-h") {
      result.help_requested = true;
      result.ok = true;
      return result;
    }
    if (tok.rfind("--", 0) == 0) {
      if (i + 1 >= args.size()) {
        err << "usage error: flag " << tok << " needs a value\n";
        return result;
      }
      flags.emplace_back(tok.substr(2), args[++i]);
    } else {
      positional.push_back(tok);
    }
  }
  if (positional.size() != 1) {
    err << "usage error: expected exactly one command\n";
    return result;
  }

  try {
    ExperimentConfig cfg;
    for (const auto& [key, value] : flags) {
      if (key == "config") {
        std::ifstream in(value, std::ios::binary);
        if (!in) throw std::invalid_argument("cannot read config file " + value);
        std::ostringstream buf;
        buf << in.rdbuf();
        cfg = ExperimentConfig::from_kv(buf.str());
      }
    }
    cfg.command = positional[0];
    for (const auto& [key, value] : flags) {
      if (key == "config") continue;
      std::string kv_key = key;
      if (kv_key == "eta-min") kv_key = "eta_min";
      if (kv_key == "eta-max") kv_key = "eta_max";
      apply_key(cfg, kv_key, value);
    }
    if (!known_command(cfg.command)) {
      throw std::invalid_argument("unknown command '" + cfg.command + "'");
    }
    result.config = cfg;
    result.ok = true;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    result.ok = false;
  }
  return result;
}

int dispatch(const ExperimentConfig& config, std::ostream& out,
             std::ostream& err) {
  try {
    if (!known_command(config.command)) {
      throw std::invalid_argument("unknown command '" + config.command + "'");
    }
    write_run_meta(config);
    if (config.command == "run-gd") return run_gd(config, out);
    if (config.command == "run-flow") return run_flow(config, out);
    if (config.command == "scan") return run_scan(config, out);
    if (config.command == "counterexample") return run_counterexample(config, out);
    if (config.command == "verify") return run_verify(config, out);
    return run_fuzz(config, out);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const descent::DivergenceError& e) {
    err << "divergence: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::logic_error& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace curvelab::cli
