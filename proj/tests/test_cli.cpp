#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string& bin_path() {
  static const std::string path = [] {
    const char* env = std::getenv("NCT_BIN");
    return std::string(env ? env : "./nct");
  }();
  return path;
}

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("nct-cli-" + std::to_string(static_cast<long long>(::getpid())));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path so = scratch_dir() / ("stdout" + std::to_string(counter) + ".txt");
  const fs::path se = scratch_dir() / ("stderr" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd =
      bin_path() + " " + args + " >" + so.string() + " 2>" + se.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

}  // namespace

TEST_CASE("verify subcommand passes and reports all checks") {
  const RunResult r = run_cli("verify");
  INFO(r.err);
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("artifact") == "verify");
  CHECK(j.at("result").at("all_pass") == true);
  CHECK(j.contains("config_hash"));
}

TEST_CASE("classify agrees with the theorem at a commutative point") {
  const RunResult r = run_cli("classify --lattice D --point \"chi=(0,0,0)\"");
  INFO(r.err);
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("result").at("all_agree") == true);
  const auto& pt = j.at("result").at("points").at(0);
  CHECK(pt.at("agree") == true);
  CHECK(pt.at("predicted_class") == "commutative");
  CHECK(pt.at("observed") == "commutative");
}

TEST_CASE("floating point angles are rejected as config errors") {
  const RunResult r = run_cli("classify --lattice D --point \"chi=(0.5,0,0)\"");
  CHECK(r.code == 2);
  CHECK(r.err.find("exact rational") != std::string::npos);
}

TEST_CASE("unknown lattices are rejected at parse time") {
  const RunResult r = run_cli("bloch scan --lattice Q --grid 16");
  CHECK(r.code == 2);
}

TEST_CASE("inconsistent q values are rejected") {
  const RunResult r =
      run_cli("classify --lattice D --point \"chi=(1/4,0,0),q=(1,1,1)\"");
  CHECK(r.code == 2);
  CHECK(r.err.find("q1") != std::string::npos);
}

TEST_CASE("a forced theorem mismatch exits with the verification code") {
  const RunResult r =
      run_cli("classify --lattice D --point \"chi=(1/16,1/16,1/4)\" --tol 0.9");
  CHECK(r.code == 4);
}

TEST_CASE("scan artifacts are deterministic and round-trip through --config") {
  const fs::path out = scratch_dir() / "scan";
  const std::string args =
      "bloch scan --lattice D --grid 16 --tol 1e-6 --no-timestamp --out " + out.string();
  REQUIRE(run_cli(args).code == 0);
  const std::string csv1 = slurp(out / "bloch_scan.csv");
  const std::string json1 = slurp(out / "bloch_scan.json");
  const std::string cfg1 = slurp(out / "config.json");
  REQUIRE_FALSE(csv1.empty());

  // Re-running the identical invocation reproduces every byte.
  REQUIRE(run_cli(args).code == 0);
  CHECK(slurp(out / "bloch_scan.csv") == csv1);
  CHECK(slurp(out / "bloch_scan.json") == json1);
  CHECK(slurp(out / "config.json") == cfg1);

  // Replaying through the recorded config file reproduces every byte too.
  REQUIRE(run_cli("bloch scan --config " + (out / "config.json").string()).code == 0);
  CHECK(slurp(out / "bloch_scan.csv") == csv1);
  CHECK(slurp(out / "bloch_scan.json") == json1);
  CHECK(slurp(out / "config.json") == cfg1);

  // Every flagged point sits within two grid spacings of the degeneracy locus.
  const double spacing = 2.0 * M_PI / 16.0;
  std::istringstream rows(csv1);
  std::string line;
  int dataRows = 0;
  while (std::getline(rows, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("phi1", 0) == 0) continue;
    const auto lastComma = line.rfind(',');
    REQUIRE(lastComma != std::string::npos);
    const double dist = std::stod(line.substr(lastComma + 1));
    CHECK(dist < 2.0 * spacing);
    ++dataRows;
  }
  CHECK(dataRows > 0);
}

TEST_CASE("lattice specs round-trip through files") {
  const fs::path out1 = scratch_dir() / "lat1";
  REQUIRE(run_cli("lattice show --lattice G --no-timestamp --out " + out1.string()).code == 0);
  const nlohmann::json env1 = nlohmann::json::parse(slurp(out1 / "lattice.json"));

  const fs::path specPath = scratch_dir() / "g_spec.json";
  {
    std::ofstream f(specPath);
    f << env1.at("result").dump(2) << "\n";
  }
  const fs::path out2 = scratch_dir() / "lat2";
  REQUIRE(run_cli("lattice show --spec " + specPath.string() + " --no-timestamp --out " +
                  out2.string())
              .code == 0);
  const nlohmann::json env2 = nlohmann::json::parse(slurp(out2 / "lattice.json"));
  CHECK(env1.at("result") == env2.at("result"));
}

TEST_CASE("butterfly and band sweeps produce artifacts") {
  const fs::path out = scratch_dir() / "bf";
  const RunResult r = run_cli("butterfly --lattice P --flux 1/3 --twists 2 --no-timestamp --out " +
                              out.string());
  INFO(r.err);
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out / "butterfly.json"));
  CHECK(j.at("result").at("flux_count") == 1);
  CHECK(j.at("result").at("fluxes").at(0).at("dim") == 3);
  CHECK_FALSE(slurp(out / "butterfly.csv").empty());

  const fs::path bands = scratch_dir() / "bands";
  REQUIRE(run_cli("bloch bands --lattice P --grid 8 --no-timestamp --out " + bands.string())
              .code == 0);
  CHECK_FALSE(slurp(bands / "bloch_bands.csv").empty());
}
