#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "scp/kv_config.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result scp_run(std::vector<std::string> args) {
  args.insert(args.begin(), "scp");
  std::ostringstream out, err;
  const int code = scp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "scp_unit_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SeedEnvGuard {
  SeedEnvGuard() { ::unsetenv(scp::kSeedEnv); }
  ~SeedEnvGuard() { ::unsetenv(scp::kSeedEnv); }
};

const std::vector<std::pair<std::string, std::vector<std::string>>>& small_invocations() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
      {"simulate", {"--set", "sides=50", "--set", "lambda=4", "--set", "p=0.9", "--set", "initial=product(0.5,0,0,0)",
                    "--horizon", "5", "--replicas", "3"}},
      {"sweep", {"--set", "lambdas=1,4", "--set", "ps=0.5,1", "--set", "sides=30", "--horizon", "5", "--replicas", "3",
                 "--lambda-c", "3.3"}},
      {"meanfield", {"--set", "lambda=4", "--set", "p=0.9", "--horizon", "20"}},
      {"branching", {"--d", "1", "--p", "0.2", "--replicas", "2000", "--set", "max_n=10"}},
      {"couple", {"--set", "sides=50", "--horizon", "5"}},
      {"percolate", {"--graph", "L2", "--d", "1", "--eps", "0.1", "--window", "10", "--samples", "20"}},
      {"compete", {"--set", "sides=50", "--set", "lambda1=5", "--set", "lambda2=50", "--set", "p2=0.2",
                   "--set", "lambda_c_proxy=3.3", "--horizon", "10", "--replicas", "2"}},
      {"snapshot", {"--set", "sides=10,10", "--set", "lambda=4", "--set", "p=0.9", "--horizon", "5"}},
      {"estimate-lambda-c", {"--set", "sides=50", "--horizon", "20", "--replicas", "4", "--set", "iterations=3"}},
      {"decay", {"--replicas", "200", "--set", "max_n=5"}},
      {"block", {"--replicas", "20", "--set", "L=3"}},
      {"collections", {"--set", "max_rings=20000"}},
  };
  return cases;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("every subcommand runs and is byte-for-byte reproducible") {
  SeedEnvGuard guard;
  for (const auto& [name, flags] : small_invocations()) {
    CAPTURE(name);
    const fs::path a = fresh_dir(name + "_a");
    const fs::path b = fresh_dir(name + "_b");
    auto args = flags;
    args.insert(args.begin(), name);
    auto first = args;
    first.insert(first.end(), {"--seed", "11", "--out", a.string()});
    auto second = args;
    second.insert(second.end(), {"--seed", "11", "--out", b.string()});
    const auto ra = scp_run(first);
    const auto rb = scp_run(second);
    CHECK_MESSAGE(ra.code == 0, ra.err);
    CHECK(rb.code == 0);
    const auto ta = read_tree(a);
    CHECK_FALSE(ta.empty());
    CHECK(ta == read_tree(b));
  }
}

TEST_CASE("output formats") {
  SeedEnvGuard guard;
  const fs::path dir = fresh_dir("formats");
  REQUIRE(scp_run({"simulate", "--set", "sides=40", "--set", "lambda=4", "--set", "p=0.9", "--horizon", "3",
                   "--replicas", "2", "--out", dir.string()})
              .code == 0);
  std::istringstream nd(read_file(dir / "runs.ndjson"));
  std::string line;
  int records = 0;
  while (std::getline(nd, line)) {
    const auto rec = nlohmann::json::parse(line);
    CHECK(rec.contains("seed"));
    CHECK(rec.contains("censored"));
    if (!rec["censored"].get<bool>()) CHECK(rec["extinction_time"].get<double>() <= 3.0);
    ++records;
  }
  CHECK(records == 2);

  const fs::path snap = fresh_dir("formats_snap");
  REQUIRE(scp_run({"snapshot", "--set", "sides=8,6", "--horizon", "1", "--out", snap.string()}).code == 0);
  const auto pgm = read_file(snap / "snapshot.pgm");
  CHECK(pgm.rfind("P2\n#", 0) == 0);
  CHECK(pgm.find("\n6 8\n255\n") != std::string::npos);

  const fs::path sw = fresh_dir("formats_sweep");
  REQUIRE(scp_run({"sweep", "--set", "lambdas=2", "--set", "ps=1", "--set", "sides=20", "--horizon", "2",
                   "--replicas", "2", "--out", sw.string()})
              .code == 0);
  CHECK(read_file(sw / "sweep.csv").rfind("lambda1,p1,", 0) == 0);
}

TEST_CASE("invalid configurations exit with code 2") {
  SeedEnvGuard guard;
  const fs::path dir = fresh_dir("invalid");
  CHECK(scp_run({}).code == scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"bogus"}).code == scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"simulate", "--set", "colour=red", "--out", dir.string()}).code == scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"simulate", "--set", "p=1.5", "--out", dir.string()}).code == scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"simulate", "--set", "lambda=2", "--set", "lambda1=3", "--out", dir.string()}).code ==
        scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"simulate", "--horizon", "-1", "--out", dir.string()}).code == scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"simulate", "--seed", "abc"}).code == scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"percolate", "--graph", "L3"}).code == scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"decay", "--set", "p=0.3", "--out", dir.string()}).code == scp::cli::kExitInvalidConfig);
  CHECK(scp_run({"simulate", "--config", "/nonexistent/run.cfg"}).code == scp::cli::kExitInvalidConfig);

  const fs::path cfg = fresh_dir("invalid_cfg");
  fs::create_directories(cfg);
  std::ofstream(cfg / "dup.cfg") << "lambda = 1\nlambda = 2\n";
  CHECK(scp_run({"simulate", "--config", (cfg / "dup.cfg").string(), "--out", dir.string()}).code ==
        scp::cli::kExitInvalidConfig);
}

TEST_CASE("an inadmissible coupled start is an invariant violation") {
  SeedEnvGuard guard;
  const fs::path dir = fresh_dir("invariant");
  const auto r = scp_run({"couple", "--set", "sides=3", "--set", "initial=+1 0 0", "--set", "eta_initial=0 0 0",
                          "--horizon", "1", "--out", dir.string()});
  CHECK(r.code == scp::cli::kExitInvariant);
  CHECK(r.err.find("not admissible") != std::string::npos);
  CHECK(scp_run({"couple", "--set", "sides=3", "--set", "initial=+1 0 0", "--set", "eta_initial=+1 0 +1",
                 "--horizon", "1", "--out", dir.string()})
            .code == scp::cli::kExitOk);
}

TEST_CASE("help exits cleanly") {
  const auto r = scp_run({"--help"});
  CHECK(r.code == scp::cli::kExitOk);
  CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("settings file, flags and the seed variable") {
  SeedEnvGuard guard;
  const fs::path cfgdir = fresh_dir("precedence_cfg");
  fs::create_directories(cfgdir);
  std::ofstream(cfgdir / "run.cfg") << "# small run\nsides = 40\nlambda = 4\np = 0.9\nhorizon = 50\nreplicas = 1\n"
                                       "initial = product(0.5,0,0,0)\nseed = 3\n";
  const std::string cfg = (cfgdir / "run.cfg").string();
  auto runs = [&](const std::string& tag, std::vector<std::string> extra) {
    const fs::path dir = fresh_dir("precedence_" + tag);
    std::vector<std::string> args{"simulate", "--config", cfg, "--out", dir.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    REQUIRE(scp_run(args).code == 0);
    return read_file(dir / "runs.ndjson");
  };
  const auto from_file = runs("file", {});
  CHECK(nlohmann::json::parse(from_file)["seed"] == 3);
  CHECK(nlohmann::json::parse(from_file)["horizon"] == 50.0);
  const auto flag = runs("flag", {"--seed", "9", "--horizon", "2"});
  CHECK(nlohmann::json::parse(flag)["seed"] == 9);
  CHECK(nlohmann::json::parse(flag)["horizon"] == 2.0);

  ::setenv(scp::kSeedEnv, "9", 1);
  const auto env = runs("env", {"--horizon", "2"});
  const auto env_over_flag = runs("env_flag", {"--seed", "1234", "--horizon", "2"});
  ::unsetenv(scp::kSeedEnv);
  CHECK(env == flag);
  CHECK(env_over_flag == flag);

  ::setenv(scp::kSeedEnv, "nope", 1);
  const fs::path bad = fresh_dir("precedence_bad");
  CHECK(scp_run({"simulate", "--config", cfg, "--out", bad.string()}).code == scp::cli::kExitInvalidConfig);
}

}
