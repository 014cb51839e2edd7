#include "invsched/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace invsched::io {

namespace {

std::string signal_header(const char* name, Eigen::Index count) {
  if (count == 1) return name;
  std::string out;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (i > 0) out += ',';
    out += name + std::to_string(i + 1);
  }
  return out;
}

void write_values(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_double(v[i]);
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw std::runtime_error("failed to format a double");
  return std::string(buffer, end);
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument(std::string(what) + " must be a rectangular array of rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return M;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json to_json(const HPolytope& P) {
  return json{{"H", matrix_to_json(P.H())}, {"h", vector_to_json(P.h())}, {"dim", P.dim()}};
}

HPolytope polytope_from_json(const json& j) {
  if (!j.is_object() || !j.contains("H") || !j.contains("h")) {
    throw std::invalid_argument("polytope JSON needs fields \"H\" and \"h\"");
  }
  Eigen::MatrixXd H = matrix_from_json(j.at("H"), "H");
  Eigen::VectorXd h = vector_from_json(j.at("h"), "h");
  if (H.rows() == 0) {
    if (!j.contains("dim")) throw std::invalid_argument("polytope without rows needs \"dim\"");
    H.resize(0, j.at("dim").get<int>());
  } else if (j.contains("dim") && j.at("dim").get<int>() != H.cols()) {
    throw std::invalid_argument("polytope \"dim\" disagrees with the width of H");
  }
  return HPolytope(std::move(H), std::move(h));
}

json to_json(const LinearSystem& sys) {
  return json{{"A", matrix_to_json(sys.A())},
              {"B", matrix_to_json(sys.B())},
              {"E", matrix_to_json(sys.E())},
              {"C", matrix_to_json(sys.C())},
              {"X", to_json(sys.X())},
              {"U", to_json(sys.U())},
              {"W", to_json(sys.W())},
              {"sample_minutes", sys.sample_minutes()}};
}

LinearSystem system_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("system JSON must be an object");
  for (const char* key : {"A", "B", "E", "C", "X", "U", "W"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("system JSON lacks \"") + key + "\"");
  }
  return LinearSystem(matrix_from_json(j.at("A"), "A"), matrix_from_json(j.at("B"), "B"),
                      matrix_from_json(j.at("E"), "E"), matrix_from_json(j.at("C"), "C"),
                      polytope_from_json(j.at("X")), polytope_from_json(j.at("U")),
                      polytope_from_json(j.at("W")), j.value("sample_minutes", 5.0));
}

json to_json(const InvariantResult& result) {
  return json{{"set", to_json(result.set)},
              {"iterations", result.iterations},
              {"converged", result.converged},
              {"facets", result.set.rows()}};
}

InvariantResult invariant_from_json(const json& j) {
  if (!j.is_object() || !j.contains("set")) {
    throw std::invalid_argument("invariant JSON needs a \"set\" field");
  }
  return InvariantResult{polytope_from_json(j.at("set")), j.value("iterations", 0),
                         j.value("converged", false), {}};
}

json to_json(const SafeTimeResult& result, bool include_sets) {
  json out{{"alpha", result.alpha},
           {"hit_cap", result.hit_cap},
           {"horizons_checked", result.feasible_sets.size()}};
  if (include_sets) {
    json sets = json::array();
    for (std::size_t k = 0; k < result.feasible_sets.size(); ++k) {
      json entry = to_json(result.feasible_sets[k]);
      entry["j"] = k + 1;
      entry["empty"] = is_empty(result.feasible_sets[k]);
      sets.push_back(std::move(entry));
    }
    out["feasible_sets"] = std::move(sets);
  }
  return out;
}

json to_json(const Schedule& schedule) {
  return json{{"instants", schedule.instants()}, {"alpha", schedule.alpha()}};
}

Schedule schedule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("instants") || !j.contains("alpha")) {
    throw std::invalid_argument("schedule JSON needs \"instants\" and \"alpha\"");
  }
  return Schedule::make(j.at("instants").get<std::vector<std::int64_t>>(), j.at("alpha").get<int>());
}

json to_json(const Trajectory& traj) {
  auto rows = [](const std::vector<Eigen::VectorXd>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back(vector_to_json(v));
    return out;
  };
  json transmitted = json::array();
  for (bool b : traj.transmitted) transmitted.push_back(b);
  return json{{"states", rows(traj.states)},
              {"outputs", rows(traj.outputs)},
              {"inputs", rows(traj.inputs)},
              {"disturbances", rows(traj.disturbances)},
              {"transmitted", std::move(transmitted)}};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.states.empty()) throw std::invalid_argument("trajectory has no states");
  out << "t," << signal_header("x", traj.states.front().size()) << ','
      << signal_header("y", traj.outputs.front().size()) << ',';
  const Eigen::Index nu = traj.inputs.empty() ? 1 : traj.inputs.front().size();
  const Eigen::Index nw = traj.disturbances.empty() ? 1 : traj.disturbances.front().size();
  out << signal_header("u", nu) << ',' << signal_header("w", nw) << ",transmitted\n";
  for (std::size_t t = 0; t < traj.horizon(); ++t) {
    out << t;
    write_values(out, traj.states[t]);
    write_values(out, traj.outputs[t]);
    write_values(out, traj.inputs[t]);
    write_values(out, traj.disturbances[t]);
    out << ',' << (traj.transmitted[t] ? 1 : 0) << '\n';
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace invsched::io
