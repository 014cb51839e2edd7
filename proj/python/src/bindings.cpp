#include <pybind11/eigen.h>
#include <pybind11/iostream.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "invsched/cli.hpp"
#include "invsched/errors.hpp"
#include "invsched/invariant.hpp"
#include "invsched/io.hpp"
#include "invsched/lp.hpp"
#include "invsched/polytope.hpp"
#include "invsched/safetime.hpp"
#include "invsched/sampling.hpp"
#include "invsched/scheduler.hpp"
#include "invsched/simulator.hpp"
#include "invsched/system.hpp"

namespace py = pybind11;
using namespace invsched;

namespace {

std::string polytope_repr(const HPolytope& P) {
  std::ostringstream os;
  os << "HPolytope(dim=" << P.dim() << ", rows=" << P.rows() << ")";
  return os.str();
}

py::dict trajectory_dict(const Trajectory& t) {
  py::dict d;
  d["states"] = t.states;
  d["outputs"] = t.outputs;
  d["inputs"] = t.inputs;
  d["disturbances"] = t.disturbances;
  d["transmitted"] = t.transmitted;
  return d;
}

}  // namespace

PYBIND11_MODULE(_invsched, m) {
  m.doc() = "Robust invariant sets, safe time intervals and self-triggered scheduling";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", error);
  py::register_exception<EmptySet>(m, "EmptySet", error);
  py::register_exception<InvalidSystem>(m, "InvalidSystem", error);
  py::register_exception<EmptyInvariant>(m, "EmptyInvariant", error);
  py::register_exception<InvalidInvariant>(m, "InvalidInvariant", error);
  py::register_exception<MalformedSequence>(m, "MalformedSequence", error);
  py::register_exception<InfeasibleSchedule>(m, "InfeasibleSchedule", error);
  py::register_exception<Infeasible>(m, "Infeasible", error);
  py::register_exception<SafetyViolation>(m, "SafetyViolation", error);

  // LP
  py::enum_<lp::Status>(m, "LPStatus")
      .value("Optimal", lp::Status::Optimal)
      .value("Infeasible", lp::Status::Infeasible)
      .value("Unbounded", lp::Status::Unbounded);
  py::class_<lp::Solution>(m, "LPSolution")
      .def_readonly("status", &lp::Solution::status)
      .def_readonly("value", &lp::Solution::value)
      .def_readonly("point", &lp::Solution::point);
  m.def(
      "lp_solve",
      [](Eigen::VectorXd c, Eigen::MatrixXd A, Eigen::VectorXd b) {
        return lp::solve(lp::Problem{std::move(c), std::move(A), std::move(b)});
      },
      py::arg("c"), py::arg("A"), py::arg("b"), "maximize c.x subject to A x <= b");

  // Polytopes
  py::class_<HPolytope>(m, "HPolytope")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("H"), py::arg("h"))
      .def_static("universe", &HPolytope::universe)
      .def_static("empty", &HPolytope::empty)
      .def_static("box", py::overload_cast<const Eigen::VectorXd&, const Eigen::VectorXd&>(
                             &HPolytope::box),
                  py::arg("lo"), py::arg("hi"))
      .def_property_readonly("dim", &HPolytope::dim)
      .def_property_readonly("rows", &HPolytope::rows)
      .def_property_readonly("H", &HPolytope::H)
      .def_property_readonly("h", &HPolytope::h)
      .def("__repr__", &polytope_repr);

  m.def("contains", &contains, py::arg("P"), py::arg("x"), py::arg("tol") = kInclusionTol);
  m.def("is_empty", &is_empty);
  m.def("is_bounded", &is_bounded);
  m.def("intersect", &intersect);
  m.def("support", &support);
  m.def("project", [](const HPolytope& P, std::vector<int> keep) { return project(P, keep); },
        py::arg("P"), py::arg("keep"), "project onto the listed 0-based coordinates");
  m.def("remove_redundancies", &remove_redundancies);
  m.def("pontryagin_diff", &pontryagin_diff);
  m.def("is_subset", &is_subset, py::arg("P"), py::arg("Q"), py::arg("tol") = kInclusionTol);
  m.def("equals", &equals, py::arg("P"), py::arg("Q"), py::arg("tol") = kInclusionTol);
  m.def(
      "chebyshev_ball",
      [](const HPolytope& P, double cap) -> py::object {
        auto ball = chebyshev_ball(P, cap);
        if (!ball) return py::none();
        return py::make_tuple(ball->center, ball->radius);
      },
      py::arg("P"), py::arg("radius_cap") = 1.0);
  m.def(
      "hit_and_run",
      [](const HPolytope& P, int count, std::uint64_t seed) {
        return HitAndRunSampler(P, seed).draw(count);
      },
      py::arg("P"), py::arg("count"), py::arg("seed") = 0);

  // Systems
  py::enum_<ApsVariant>(m, "ApsVariant")
      .value("Printed", ApsVariant::Printed)
      .value("Companion", ApsVariant::Companion);
  py::class_<LinearSystem>(m, "LinearSystem")
      .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::MatrixXd, Eigen::MatrixXd, HPolytope,
                    HPolytope, HPolytope, double>(),
           py::arg("A"), py::arg("B"), py::arg("E"), py::arg("C"), py::arg("X"), py::arg("U"),
           py::arg("W"), py::arg("sample_minutes") = 5.0)
      .def_property_readonly("A", &LinearSystem::A)
      .def_property_readonly("B", &LinearSystem::B)
      .def_property_readonly("E", &LinearSystem::E)
      .def_property_readonly("C", &LinearSystem::C)
      .def_property_readonly("X", &LinearSystem::X)
      .def_property_readonly("U", &LinearSystem::U)
      .def_property_readonly("W", &LinearSystem::W)
      .def("step", &LinearSystem::step)
      .def("output", &LinearSystem::output);
  m.def("aps_model", &aps_model, py::arg("variant") = ApsVariant::Printed);
  m.def("scalar_demo_model", &scalar_demo_model);

  // Invariant set and safe time
  py::class_<InvariantResult>(m, "InvariantResult")
      .def_readonly("set", &InvariantResult::set)
      .def_readonly("iterations", &InvariantResult::iterations)
      .def_readonly("converged", &InvariantResult::converged);
  m.def("pre_robust", &pre_robust);
  m.def("max_invariant", py::overload_cast<const LinearSystem&, int>(&max_invariant),
        py::arg("sys"), py::arg("max_iter") = 50);

  py::class_<SafeTimeResult>(m, "SafeTimeResult")
      .def_readonly("alpha", &SafeTimeResult::alpha)
      .def_readonly("hit_cap", &SafeTimeResult::hit_cap)
      .def_readonly("feasible_sets", &SafeTimeResult::feasible_sets);
  m.def("feasible_set", &feasible_set, py::arg("sys"), py::arg("c_inf"), py::arg("j"));
  m.def("safe_time", &safe_time, py::arg("sys"), py::arg("c_inf"), py::arg("j_max") = 10);

  // Scheduling
  py::class_<Schedule>(m, "Schedule")
      .def(py::init(&Schedule::make), py::arg("instants"), py::arg("alpha"))
      .def_static("unchecked", &Schedule::unchecked, py::arg("instants"), py::arg("alpha"))
      .def_property_readonly("instants", &Schedule::instants)
      .def_property_readonly("alpha", &Schedule::alpha)
      .def_property_readonly("certified", &Schedule::certified)
      .def("__len__", &Schedule::size);
  m.def("is_feasible", [](std::vector<std::int64_t> instants, int alpha) {
    return is_feasible(instants, alpha);
  });
  m.def("periodic_schedule", &periodic_schedule, py::arg("alpha"), py::arg("horizon"),
        py::arg("period") = 0);
  m.def("random_schedule", &random_schedule, py::arg("alpha"), py::arg("horizon"),
        py::arg("seed"));
  m.def("savings", &savings);

  // Simulation
  py::class_<DisturbanceGenerator>(m, "DisturbanceGenerator")
      .def_static("zero", &DisturbanceGenerator::zero)
      .def_static("uniform", &DisturbanceGenerator::uniform, py::arg("seed"))
      .def_static("worst_case", &DisturbanceGenerator::worst_case)
      .def_static("meal_pulses", &DisturbanceGenerator::meal_pulses, py::arg("times"),
                  py::arg("magnitudes"))
      .def_property_readonly("name", &DisturbanceGenerator::name);
  m.def("plan_inputs", &plan_inputs, py::arg("sys"), py::arg("c_inf"), py::arg("x0"),
        py::arg("j"));
  m.def(
      "simulate",
      [](const LinearSystem& sys, const HPolytope& c_inf, const Schedule& schedule,
         const DisturbanceGenerator& generator, std::int64_t horizon, const Eigen::VectorXd& x0) {
        return trajectory_dict(run(sys, c_inf, schedule, generator, horizon, x0));
      },
      py::arg("sys"), py::arg("c_inf"), py::arg("schedule"), py::arg("generator"),
      py::arg("horizon"), py::arg("x0"));

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "run the command-line front end; returns (exit_code, stdout, stderr)");
}
