#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sp1kepler/cli.hpp"

using namespace sp1kepler;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify-algebra") {
  const auto r2 = run({"verify-algebra", "--n", "2", "--seed", "7", "--samples", "200"});
  REQUIRE(r2.code == exit_code::ok);
  const auto j = json::parse(r2.out);
  CHECK(j["schema"] == "1");
  CHECK(j["dimension"]["dim"] == 28);
  CHECK(j["pass"] == true);

  CHECK(run({"verify-algebra", "--n", "1"}).code == exit_code::ok);
  CHECK(run({"verify-algebra", "--n", "0"}).code == exit_code::usage);
}

TEST_CASE("usage errors") {
  CHECK(run({"verify-realization", "--n", "2", "--tol", "abc"}).code == exit_code::usage);
  CHECK(run({"verify-realization", "--n", "1"}).code == exit_code::usage);
  CHECK(run({"verify-pullback", "--bogus"}).code == exit_code::usage);
  CHECK(run({"simulate", "--method", "euler", "--t-end", "0"}).code == exit_code::usage);
  CHECK(run({"simulate", "--start", "radial", "--mu", "1"}).code == exit_code::usage);
  CHECK(run({"frobnicate"}).code == exit_code::usage);
  CHECK(run({}).code == exit_code::usage);
}

TEST_CASE("verify-realization") {
  const auto r = run({"verify-realization", "--n", "2"});
  REQUIRE(r.code == exit_code::ok);
  const auto j = json::parse(r.out);
  for (const auto& c : j["checks"]) CHECK(c["max_residual"].get<double>() < 1e-12);
  CHECK(j["checks"].size() == 8);
  REQUIRE(j["alternate_forms"].size() == 1);
  CHECK(j["alternate_forms"][0]["pass"] == false);
}

TEST_CASE("verify-quadratic lists eight identities") {
  const auto r = run({"verify-quadratic", "--n", "2", "--mu", "1", "--samples", "1000", "--seed", "7"});
  REQUIRE(r.code == exit_code::ok);
  const auto j = json::parse(r.out);
  const std::vector<std::string> names = {"primary",      "secondary_i", "secondary_ii", "secondary_iii",
                                          "secondary_iv", "secondary_v", "secondary_vi", "energy_formula"};
  REQUIRE(j["checks"].size() == names.size());
  for (std::size_t k = 0; k < names.size(); ++k) CHECK(j["checks"][k]["name"] == names[k]);

  CHECK(run({"verify-quadratic", "--n", "3", "--mu", "0", "--samples", "200"}).code == exit_code::ok);
  CHECK(run({"verify-quadratic", "--n", "2", "--zero-w", "--samples", "50"}).code == exit_code::ok);
  // an unreachable tolerance is a verification failure, not a usage error
  CHECK(run({"verify-quadratic", "--n", "2", "--mu", "1", "--samples", "50", "--tol", "1e-300"}).code ==
        exit_code::failure);
}

TEST_CASE("verify-pullback") {
  for (const char* n : {"2", "3", "4"}) CHECK(run({"verify-pullback", "--n", n, "--samples", "200"}).code == 0);
  CHECK(run({"verify-pullback", "--n", "2", "--zero-w", "--samples", "20"}).code == 0);
  const auto csv = run({"verify-pullback", "--n", "2", "--samples", "20", "--format", "csv"});
  CHECK(csv.out.rfind("check,count,max_residual,tol,pass\n", 0) == 0);
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::string> args = {"verify-quadratic", "--n", "3", "--mu", "0.5", "--samples", "300",
                                         "--seed", "11"};
  const auto a = run(args), b = run(args);
  CHECK(a.out == b.out);
  const auto c = run({"verify-quadratic", "--n", "3", "--mu", "0.5", "--samples", "300", "--seed", "12"});
  CHECK(a.out != c.out);

  const std::vector<std::string> sim = {"simulate", "--n", "2", "--mu", "1", "--t-end", "0.5", "--seed", "3"};
  CHECK(run(sim).out == run(sim).out);
}

TEST_CASE("simulate") {
  const auto r = run({"simulate", "--n", "2", "--mu", "1", "--seed", "7", "--dt", "1e-4", "--t-end", "1"});
  REQUIRE(r.code == exit_code::ok);
  const auto j = json::parse(r.out);
  CHECK(j["status"] == "completed");
  CHECK(j["initial"].contains("H"));
  CHECK(j["initial"]["H"].get<double>() < 0);

  const auto zero = run({"simulate", "--t-end", "0", "--format", "csv"});
  REQUIRE(zero.code == exit_code::ok);
  CHECK(std::count(zero.out.begin(), zero.out.end(), '\n') == 2);

  const auto crash = run({"simulate", "--start", "radial", "--t-end", "5"});
  CHECK(crash.code == exit_code::abort);
  CHECK(json::parse(crash.out)["status"] == "near_collision");
  CHECK(crash.err.find("diagnostic") != std::string::npos);
}

TEST_CASE("output files are written whole") {
  const auto dir = std::filesystem::temp_directory_path() / "sp1kepler_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  const auto prefix = (dir / "orbit").string();
  const auto r = run({"simulate", "--t-end", "0.1", "--output", prefix});
  REQUIRE(r.code == exit_code::ok);
  CHECK(r.out.empty());
  CHECK(json::parse(slurp(prefix + ".json"))["schema"] == "1");
  CHECK(slurp(prefix + ".csv").rfind("t,Z_0w", 0) == 0);
  CHECK(!std::filesystem::exists(prefix + ".json.tmp"));

  const auto report = (dir / "alg.json").string();
  CHECK(run({"verify-algebra", "--n", "2", "--samples", "10", "--output", report}).code == 0);
  CHECK(json::parse(slurp(report))["command"] == "verify-algebra");

  // partial output survives an abort
  const auto crash = (dir / "crash").string();
  CHECK(run({"simulate", "--start", "radial", "--t-end", "5", "--output", crash}).code == exit_code::abort);
  CHECK(std::filesystem::exists(crash + ".csv"));
  std::filesystem::remove_all(dir);
}
