#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "invsched/cli.hpp"
#include "invsched/errors.hpp"
#include "invsched/invariant.hpp"
#include "invsched/io.hpp"
#include "invsched/sampling.hpp"
#include "invsched/simulator.hpp"

using namespace invsched;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "invsched_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("invariant writes the set and reports convergence") {
    const fs::path dir = scratch("invariant");
    const Result r = invoke({"invariant", "--system", "aps", "--out", dir.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("converged = true") != std::string::npos);
    const io::json j = io::read_json_file((dir / "c_inf.json").string());
    CHECK(j.at("converged").get<bool>());
    CHECK(j.at("facets").get<int>() == io::polytope_from_json(j.at("set")).rows());
  }

  TEST_CASE("an empty state constraint is a config error naming the problem") {
    const fs::path dir = scratch("bad_system");
    io::json sys = io::to_json(aps_model());
    sys["X"] = {{"H", {{1, 0, 0}, {-1, 0, 0}}}, {"h", {-1, -1}}};
    io::write_json_file((dir / "bad.json").string(), sys);
    const Result r = invoke({"invariant", "--system", (dir / "bad.json").string(), "--out",
                             dir.string()});
    CHECK(r.code == cli::kConfigError);
    CHECK(r.err.find("X is empty") != std::string::npos);
  }

  TEST_CASE("iteration cap exits with 3") {
    const fs::path dir = scratch("cap");
    const Result r =
        invoke({"invariant", "--system", "aps", "--max-iter", "1", "--out", dir.string()});
    CHECK(r.code == cli::kCapReached);
    CHECK(r.out.find("converged = false") != std::string::npos);
    CHECK(fs::exists(dir / "c_inf.json"));
  }

  TEST_CASE("empty invariant exits with 2") {
    const fs::path dir = scratch("empty_inv");
    io::json sys = io::to_json(scalar_demo_model());
    sys["W"] = {{"H", {{1}, {-1}}}, {"h", {4, -3}}};
    sys["B"] = {{0}};
    sys["A"] = {{1}};
    io::write_json_file((dir / "sys.json").string(), sys);
    const Result r = invoke({"invariant", "--system", (dir / "sys.json").string(), "--out",
                             dir.string()});
    CHECK(r.code == cli::kEmptyInvariant);
  }

  TEST_CASE("safe time for both APS variants") {
    const fs::path dir = scratch("safetime");
    const Result printed = invoke({"safetime", "--system", "aps", "--out", dir.string()});
    CHECK(printed.code == cli::kOk);
    CHECK(printed.out.rfind("alpha = 1\n", 0) == 0);

    const Result companion = invoke({"safetime", "--system", "aps", "--a32-zero",
                                     "--dump-feasible-sets", "--out", dir.string()});
    CHECK(companion.code == cli::kOk);
    CHECK(companion.out.rfind("alpha = 3\n", 0) == 0);
    const io::json j = io::read_json_file((dir / "safetime.json").string());
    CHECK(j.at("alpha") == 3);
    CHECK(j.at("feasible_sets").size() == 4);
    CHECK(j.at("feasible_sets")[3].at("j") == 4);
  }

  TEST_CASE("safe time cap messages") {
    const fs::path dir = scratch("safetime_cap");
    const Result capped = invoke(
        {"safetime", "--system", "aps", "--a32-zero", "--j-max", "2", "--out", dir.string()});
    CHECK(capped.code == cli::kCapReached);
    CHECK(capped.out.rfind("alpha ≥ 2 (cap reached)", 0) == 0);

    const Result scalar = invoke({"safetime", "--system", "scalar", "--out", dir.string()});
    CHECK(scalar.code == cli::kCapReached);
    CHECK(scalar.out.rfind("alpha ≥ 10 (cap reached)", 0) == 0);
  }

  TEST_CASE("simulate writes the trajectory and the savings report") {
    const fs::path dir = scratch("simulate");
    const Result r = invoke({"simulate", "--system", "aps", "--a32-zero", "--horizon", "300",
                             "--disturbance", "worst", "--gnuplot-script", "--out",
                             dir.string()});
    REQUIRE(r.code == cli::kOk);
    const io::json report = io::read_json_file((dir / "report.json").string());
    CHECK(report.at("transmissions") == 100);
    CHECK(report.at("savings").get<double>() == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(report.at("paper_claim").get<double>() == 0.6767);
    CHECK(report.at("min_glucose_deviation").get<double>() >= -30.0 - 1e-6);
    CHECK(report.at("max_glucose_deviation").get<double>() <= 30.0 + 1e-6);
    const std::string csv = slurp(dir / "trajectory.csv");
    CHECK(csv.rfind("t,x1,x2,x3,y,u,w,transmitted\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 301);
    CHECK(fs::exists(dir / "trajectory.json"));
    CHECK(fs::exists(dir / "plot.gp"));
  }

  TEST_CASE("single-step horizon") {
    const fs::path dir = scratch("horizon1");
    const Result r = invoke({"simulate", "--system", "aps", "--a32-zero", "--horizon", "1",
                             "--out", dir.string()});
    REQUIRE(r.code == cli::kOk);
    const std::string csv = slurp(dir / "trajectory.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(io::read_json_file((dir / "report.json").string()).at("transmissions") == 1);
  }

  TEST_CASE("infeasible explicit schedule is rejected before simulating") {
    const fs::path dir = scratch("bad_schedule");
    io::write_json_file((dir / "s.json").string(), io::json{{"instants", {0, 5, 8}}, {"alpha", 3}});
    const Result r = invoke({"simulate", "--system", "aps", "--a32-zero", "--horizon", "10",
                             "--schedule", "@" + (dir / "s.json").string(), "--out",
                             dir.string()});
    CHECK(r.code == cli::kConfigError);
    CHECK_FALSE(fs::exists(dir / "trajectory.csv"));
  }

  TEST_CASE("an overstated alpha cannot be certified") {
    const LinearSystem sys = aps_model(ApsVariant::Companion);
    const HPolytope c_inf = max_invariant(sys).set;
    Eigen::VectorXd witness;
    for (const auto& x0 : boundary_samples(c_inf, 200, 3)) {
      try {
        plan_inputs(sys, c_inf, x0, 4);
      } catch (const Infeasible&) {
        witness = x0;
        break;
      }
    }
    REQUIRE(witness.size() == 3);
    std::string x0 = io::format_double(witness[0]) + "," + io::format_double(witness[1]) + "," +
                     io::format_double(witness[2]);
    const fs::path dir = scratch("overstated");
    const Result r = invoke({"simulate", "--system", "aps", "--a32-zero", "--alpha", "4",
                             "--horizon", "20", "--x0", x0, "--out", dir.string()});
    CHECK(r.code == cli::kSafetyViolation);
  }

  TEST_CASE("config file with flag overrides and a reused invariant set") {
    const fs::path dir = scratch("config");
    REQUIRE(invoke({"invariant", "--a32-zero", "--out", dir.string()}).code == cli::kOk);
    io::write_json_file((dir / "run.json").string(),
                        io::json{{"system", "aps"},
                                 {"a32_zero", true},
                                 {"c_inf", "c_inf.json"},
                                 {"horizon", 30},
                                 {"disturbance", "zero"},
                                 {"output_dir", (dir / "from_config").string()}});
    const Result r = invoke({"simulate", "--config", (dir / "run.json").string(), "--horizon",
                             "12"});
    REQUIRE(r.code == cli::kOk);
    const io::json report = io::read_json_file((dir / "from_config" / "report.json").string());
    CHECK(report.at("horizon") == 12);
    CHECK(report.at("disturbance") == "zero");
    CHECK(report.at("transmissions") == 4);
  }

  TEST_CASE("meal disturbances from a file") {
    const fs::path dir = scratch("meals");
    io::write_json_file((dir / "meals.json").string(),
                        io::json{{"times", {3, 20}}, {"magnitudes", {10, 6}}});
    const Result r = invoke({"simulate", "--a32-zero", "--horizon", "30", "--disturbance",
                             "meals@" + (dir / "meals.json").string(), "--out", dir.string()});
    REQUIRE(r.code == cli::kOk);
    const io::json t = io::read_json_file((dir / "trajectory.json").string());
    CHECK(t.at("disturbances")[3][0] == 10.0);
    CHECK(t.at("disturbances")[20][0] == 6.0);
    CHECK(t.at("disturbances")[4][0] == 0.0);
  }

  TEST_CASE("paths inside a config resolve against the config's directory") {
    const fs::path dir = scratch("relative");
    fs::create_directories(dir / "cfg");
    io::write_json_file((dir / "cfg" / "meals.json").string(),
                        io::json{{"times", {2}}, {"magnitudes", {7}}});
    io::write_json_file((dir / "cfg" / "run.json").string(),
                        io::json{{"system", "aps"},
                                 {"a32_zero", true},
                                 {"horizon", 9},
                                 {"alpha", 3},
                                 {"disturbance", "meals@meals.json"},
                                 {"output_dir", "../results"}});
    REQUIRE(invoke({"simulate", "--config", (dir / "cfg" / "run.json").string()}).code ==
            cli::kOk);
    const io::json t = io::read_json_file((dir / "results" / "trajectory.json").string());
    CHECK(t.at("disturbances")[2][0] == 7.0);
  }

  TEST_CASE("usage errors") {
    CHECK(invoke({}).code == cli::kConfigError);
    CHECK(invoke({"bogus"}).code == cli::kConfigError);
    CHECK(invoke({"safetime", "--j-max", "0"}).code == cli::kConfigError);
    CHECK(invoke({"simulate", "--disturbance", "storm", "--a32-zero", "--out",
                  scratch("storm").string()})
              .code == cli::kConfigError);
    CHECK(invoke({"invariant", "--system", "/nonexistent/system.json"}).code ==
          cli::kConfigError);
    CHECK(invoke({"--help"}).code == cli::kOk);
  }

  TEST_CASE("demo artifacts are reproducible") {
    const fs::path a = scratch("demo_a");
    const fs::path b = scratch("demo_b");
    REQUIRE(invoke({"demo", "--a32-zero", "--seed", "42", "--out", a.string()}).code == cli::kOk);
    REQUIRE(invoke({"demo", "--a32-zero", "--seed", "42", "--out", b.string()}).code == cli::kOk);
    for (const char* name : {"c_inf.json", "safetime.json", "schedule.json", "trajectory.csv",
                             "trajectory.json", "report.json"}) {
      CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name);
    }
  }
}
