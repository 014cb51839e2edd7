#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "invsched/invariant.hpp"
#include "invsched/polytope.hpp"
#include "invsched/safetime.hpp"
#include "invsched/scheduler.hpp"
#include "invsched/simulator.hpp"
#include "invsched/system.hpp"

// JSON and CSV formats. Matrices are row-major arrays of arrays; doubles are
// written in shortest round-trip form.
namespace invsched::io {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const json& j, const char* what);
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j, const char* what);

/// {"H": [[...]], "h": [...], "dim": d}; "dim" is optional on input unless H has no rows.
json to_json(const HPolytope& P);
HPolytope polytope_from_json(const json& j);

/// {"A","B","E","C","X","U","W"} plus optional "sample_minutes".
json to_json(const LinearSystem& sys);
LinearSystem system_from_json(const json& j);

json to_json(const InvariantResult& result);
/// Reads back the set, iteration count and convergence flag.
InvariantResult invariant_from_json(const json& j);

json to_json(const SafeTimeResult& result, bool include_sets);

/// {"instants": [...], "alpha": k}
json to_json(const Schedule& schedule);
/// Validates the schedule against its alpha.
Schedule schedule_from_json(const json& j);

json to_json(const Trajectory& traj);

/// Header t,x1..xn,y,u,w,transmitted (indexed names when a signal has more
/// than one component); one row per step t = 0..T-1.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace invsched::io
