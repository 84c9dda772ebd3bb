#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "maxpart/cli.hpp"
#include "maxpart/json_io.hpp"

using namespace maxpart;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("estimate reports the Hardy-Ramanujan constants") {
  const auto r = run_cli({"estimate", "-J", "1", "-a", "1", "-n", "100"});
  REQUIRE(r.status == cli::kOk);
  const auto j = Json::parse(r.out);
  CHECK(j["M"].get<double>() == doctest::Approx(2.5650996).epsilon(1e-7));
  CHECK(j["b"].get<double>() == 1.0);
  CHECK(j["b_exact"] == "1");
  CHECK(j["c"].get<double>() == doctest::Approx(0.1443376).epsilon(1e-6));
  CHECK(j.contains("leading"));
  CHECK(j.contains("refined"));
  const auto leading_only =
      Json::parse(run_cli({"estimate", "-J", "1", "-a", "1", "-n", "100", "--mode", "leading"}).out);
  CHECK(leading_only["leading"] == j["leading"]);
  CHECK_FALSE(leading_only.contains("refined"));
}

TEST_CASE("count reports the parity obstruction") {
  const auto r = run_cli({"count", "-J", "1,2", "-N", "3,4"});
  CHECK(r.status == cli::kInfeasible);
  const auto j = Json::parse(r.out);
  CHECK(j["count"] == "0");
  CHECK(j["feasible"] == false);
  const auto ok = Json::parse(run_cli({"count", "-J", "1", "-N", "100"}).out);
  CHECK(ok["count"] == "190569292");
}

TEST_CASE("shape CSV integrates to the first moment") {
  const auto r = run_cli({"shape", "-J", "1,2,3", "-b", "4.0,-8.5,4.6", "--grid", "0.01:5:500"});
  REQUIRE(r.status == cli::kOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,phi");
  std::vector<double> t, phi;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    t.push_back(std::stod(line.substr(0, comma)));
    phi.push_back(std::stod(line.substr(comma + 1)));
  }
  REQUIRE(t.size() == 500);
  CHECK(t.front() == 0.01);
  CHECK(t.back() == 5.0);
  for (std::size_t i = 1; i < phi.size(); ++i) CHECK(phi[i] <= phi[i - 1]);
  // int_0^inf phi = int_0^inf x f*(x) dx = alpha_1 = 4.31168; the piece on
  // [0, 0.01] is about 0.01 phi(0.01) and phi(5) is negligible.
  double area = 0.01 * phi.front();
  for (std::size_t i = 1; i < t.size(); ++i) area += 0.5 * (t[i] - t[i - 1]) * (phi[i] + phi[i - 1]);
  CHECK(area == doctest::Approx(4.31168).epsilon(2e-3));
}

TEST_CASE("solve and forward roundtrip through JSON") {
  const auto f = Json::parse(run_cli({"forward", "-J", "1,2", "-b", "1.5,0.25"}).out);
  const std::string a = std::to_string(f["alpha"]["1"].get<double>()) + "," +
                        std::to_string(f["alpha"]["2"].get<double>());
  const auto s = run_cli({"solve", "-J", "1,2", "-a", a});
  REQUIRE(s.status == cli::kOk);
  const auto j = Json::parse(s.out);
  CHECK(j["converged"] == true);
  CHECK(j["beta"]["1"].get<double>() == doctest::Approx(1.5).epsilon(1e-5));
  CHECK(j["beta"]["2"].get<double>() == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("qj listing") {
  const auto j = Json::parse(run_cli({"qj", "-J", "1,2"}).out);
  CHECK(j["cardinality"] == 2);
  CHECK(j["polynomials"][1]["1"] == "1/2");
}

TEST_CASE("exit statuses") {
  CHECK(run_cli({"solve", "-J", "0,1,2", "-a", "1,1,3"}).status == cli::kNoConvergence);
  CHECK(run_cli({"forward", "-J", "1", "-b", "-1"}).status == cli::kInfeasible);
  CHECK(run_cli({"estimate", "-J", "1", "-a", "0.001", "-n", "1"}).status == cli::kInfeasible);
  CHECK(run_cli({"sample", "-J", "1,2", "-N", "3,4", "-n", "3", "--uniform"}).status ==
        cli::kInfeasible);
  const auto bad = run_cli({"solve", "-J", "2,1", "-a", "1,1"});
  CHECK(bad.status == cli::kUsage);
  CHECK_FALSE(bad.err.empty());
  CHECK(run_cli({"solve", "-J", "1"}).status == cli::kUsage);
  CHECK(run_cli({"nonsense"}).status == cli::kUsage);
  CHECK(run_cli({"count", "-J", "1", "-N", "-4"}).status == cli::kUsage);
  CHECK(run_cli({"shape", "-J", "1", "-b", "1", "--grid", "0:1"}).status == cli::kUsage);
  CHECK(run_cli({"--help"}).status == cli::kOk);
}

TEST_CASE("identical configuration gives identical bytes") {
  const std::vector<std::string> args = {"sample", "-J", "1", "-N", "8", "-n", "8",
                                         "--uniform", "--samples", "5", "--seed", "42"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.status == cli::kOk);
  CHECK(a.out == b.out);
  auto other = args;
  other.back() = "43";
  CHECK(run_cli(other).out != a.out);
  const auto defaulted = run_cli({"sample", "-J", "1", "-a", "1", "-n", "50"});
  const auto zero = run_cli({"sample", "-J", "1", "-a", "1", "-n", "50", "--seed", "0"});
  CHECK(defaulted.out == zero.out);
}

TEST_CASE("reports go to --out") {
  const auto path = std::filesystem::temp_directory_path() / "maxpart_cli_out.json";
  const auto r = run_cli({"qj", "-J", "1", "--out", path.string()});
  CHECK(r.status == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(Json::parse(buf.str())["cardinality"] == 1);
  std::filesystem::remove(path);
}

TEST_CASE("the installed binary maps errors to exit statuses") {
  const std::string bin = MAXPART_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("count -J 1,2 -N 4,10") == 0);
  CHECK(status("count -J 1,2 -N 3,4") == 3);
  CHECK(status("solve -J 0,1,2 -a 1,1,3") == 2);
  CHECK(status("solve") == 64);
}
