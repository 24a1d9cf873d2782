#include "curvelab/io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include <json.hpp>

namespace curvelab::io {

namespace {

using nlohmann::json;

json report_to_json(const analysis::CurveReport& report) {
  json j;
  j["monotone_decreasing"] = report.monotone_decreasing;
  j["convex"] = report.convex;
  j["grad_norm_monotone"] = report.grad_norm_monotone;
  if (report.first_convexity_violation) {
    j["first_convexity_violation"] = *report.first_convexity_violation;
  } else {
    j["first_convexity_violation"] = nullptr;
  }
  j["violation_magnitudes"] = report.violation_magnitudes;
  json runs = json::array();
  for (const auto& [start, len] : report.consecutive_violation_runs) {
    runs.push_back({start, len});
  }
  j["consecutive_violation_runs"] = runs;
  j["tolerance_used"] = report.tolerance_used;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const descent::Trajectory& traj) {
  std::string out = "n,f,grad_norm\n";
  for (std::size_t n = 0; n < traj.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(traj.values[n]);
    out += ',';
    out += format_double(traj.grad_norms[n]);
    out += '\n';
  }
  return out;
}

std::string trajectory_meta_json(const descent::Trajectory& traj) {
  json j;
  j["function_id"] = traj.function_id;
  j["eta"] = traj.step_size;
  j["x0"] = traj.points.empty() ? Vec{} : traj.points.front();
  j["source"] = descent::source_name(traj.source);
  return j.dump(2) + "\n";
}

std::string flow_csv(const flow::FlowSolution& sol, int dimension) {
  std::string out = "t,f,grad_norm";
  const bool coords = dimension <= 8;
  if (coords) {
    for (int i = 0; i < dimension; ++i) out += ",x" + std::to_string(i);
  }
  out += '\n';
  for (std::size_t k = 0; k < sol.times.size(); ++k) {
    out += format_double(sol.times[k]);
    out += ',';
    out += format_double(sol.values[k]);
    out += ',';
    out += format_double(sol.grad_norms[k]);
    if (coords) {
      for (double c : sol.states[k]) {
        out += ',';
        out += format_double(c);
      }
    }
    out += '\n';
  }
  return out;
}

std::string curve_report_json(const analysis::CurveReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

std::string scan_csv(const experiments::RegimeScanResult& scan) {
  std::string out = "eta,convex,monotone,grad_monotone,first_violation\n";
  for (const experiments::EtaVerdict& v : scan.verdicts) {
    out += format_double(v.eta);
    out += v.convex ? ",1" : ",0";
    out += v.monotone ? ",1" : ",0";
    out += v.grad_monotone ? ",1" : ",0";
    out += ',';
    if (v.first_violation_step) out += std::to_string(*v.first_violation_step);
    out += '\n';
  }
  return out;
}

std::string scan_summary_json(const experiments::RegimeScanResult& scan) {
  json j;
  j["function_id"] = scan.function_id;
  j["x0"] = scan.x0;
  j["steps"] = scan.steps;
  j["grid_size"] = scan.eta_grid.size();
  j["eta_min"] = scan.eta_grid.front();
  j["eta_max"] = scan.eta_grid.back();
  j["empirical_threshold"] = scan.empirical_threshold;
  j["theoretical_threshold"] = scan.theoretical_threshold;
  long convex = 0;
  long violating = 0;
  json divergent = json::array();
  for (const experiments::EtaVerdict& v : scan.verdicts) {
    if (v.divergent) {
      divergent.push_back(v.eta);
    } else if (v.convex) {
      ++convex;
    } else {
      ++violating;
    }
  }
  j["convex_count"] = convex;
  j["violating_count"] = violating;
  j["divergent_etas"] = divergent;
  return j.dump(2) + "\n";
}

std::string counterexample_json(const experiments::CounterexampleRecord& rec) {
  json j;
  j["x"] = rec.x;
  j["f"] = rec.f;
  j["violated"] = rec.violated;
  j["quadratic_lhs"] = rec.quadratic_lhs;
  return j.dump(2) + "\n";
}

std::string violation_json(const experiments::ViolationRecord& rec) {
  json j;
  j["function_id"] = rec.function_id;
  j["eta"] = rec.eta;
  j["x0"] = rec.x0;
  j["trial_seed"] = rec.trial_seed;
  j["first_violation"] = rec.first_violation;
  j["violation_magnitudes"] = rec.violation_magnitudes;
  json runs = json::array();
  for (const auto& [start, len] : rec.runs) runs.push_back({start, len});
  j["runs"] = runs;
  j["monotone"] = rec.monotone;
  return j.dump();
}

std::string verify_summary_json(const experiments::VerifySummary& summary) {
  json j;
  j["seed"] = summary.seed;
  j["trials"] = summary.trials;
  json checks = json::object();
  for (const auto& [check, passed] : summary.passes) {
    long failed = 0;
    for (const auto& f : summary.failures) {
      if (f.check == check) ++failed;
    }
    checks[check] = {{"passed", passed}, {"failed", failed}};
  }
  j["checks"] = checks;
  json failures = json::array();
  for (const auto& f : summary.failures) {
    failures.push_back({{"check", f.check},
                        {"function_id", f.function_id},
                        {"eta", f.eta},
                        {"trial_seed", f.trial_seed},
                        {"detail", f.detail}});
  }
  j["failures"] = failures;
  j["all_passed"] = summary.all_passed();
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace curvelab::io
