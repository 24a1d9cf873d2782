#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "curvelab/analysis.hpp"
#include "curvelab/descent.hpp"
#include "curvelab/experiments.hpp"
#include "curvelab/flow.hpp"

namespace curvelab::io {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

/// CSV with header n,f,grad_norm.
std::string trajectory_csv(const descent::Trajectory& traj);

/// Sidecar metadata: function_id, eta, x0, source.
std::string trajectory_meta_json(const descent::Trajectory& traj);

/// CSV with header t,f,grad_norm plus x0..x{d-1} columns when d <= 8.
std::string flow_csv(const flow::FlowSolution& sol, int dimension);

std::string curve_report_json(const analysis::CurveReport& report);

/// CSV with header eta,convex,monotone,grad_monotone,first_violation.
std::string scan_csv(const experiments::RegimeScanResult& scan);
std::string scan_summary_json(const experiments::RegimeScanResult& scan);

std::string counterexample_json(const experiments::CounterexampleRecord& rec);

/// One JSON object per violation (for JSON-lines emission).
std::string violation_json(const experiments::ViolationRecord& rec);

std::string verify_summary_json(const experiments::VerifySummary& summary);

void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace curvelab::io
