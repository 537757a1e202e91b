#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <sys/wait.h>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "reeb/cli/config.hpp"
#include "reeb/util/errors.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("reeb_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args) {
  const std::string cmd = std::string(REEB_CERT_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[512];
  while (fgets(buf, sizeof buf, p)) out += buf;
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto f = dir / "config.json";
  std::ofstream(f) << body;
  return f;
}

std::string slurp(const fs::path& f) {
  std::ifstream in(f, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("round sphere pinching certifies") {
  const auto d = scratch("round");
  const auto f = write_config(d, R"({"family":"revolution","c":1.0,"criteria":["pinching"]})");
  const auto r = run("certify --config " + f.string() + " --out " + (d / "out").string());
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(d / "out" / "pinching.json"));
  CHECK(j["verdict"] == "certified");
  CHECK(j["config_hash"].get<std::string>().size() == 16);
  CHECK(j["tool_version"] == "reeb_cert 1.0.0");
  CHECK(j["error_budget"].contains("total"));
}

TEST_CASE("long ellipsoid fails the convex criterion") {
  const auto d = scratch("ell");
  const auto f = write_config(d, R"({"family":"ellipsoid","a":[1,2.5],"criteria":["convex"]})");
  const auto r = run("certify --config " + f.string() + " --out " + (d / "out").string());
  CHECK(r.code == 2);
  const auto j = nlohmann::json::parse(slurp(d / "out" / "convex.json"));
  CHECK(j["verdict"] == "not-certified");
  CHECK(j["measured"]["value"].get<double>() == doctest::Approx(2 * M_PI / 2.5).epsilon(1e-6));
}

TEST_CASE("malformed and unknown configs exit 1") {
  const auto d = scratch("bad");
  auto f = write_config(d, R"({"family":)");
  CHECK(run("certify --config " + f.string()).code == 1);
  f = write_config(d, R"({"family":"hopf","criteria":["convex"],"colour":"red"})");
  CHECK(run("certify --config " + f.string()).code == 1);
  f = write_config(d, R"({"family":"cube","criteria":["convex"]})");
  CHECK(run("certify --config " + f.string()).code == 1);
  CHECK(run("certify --config " + (d / "missing.json").string()).code == 1);
  CHECK(run("certify").code == 1);
}

TEST_CASE("sampling criteria require a seed") {
  const auto d = scratch("seed");
  const auto f = write_config(d, R"({"family":"hopf","criteria":["kappa"],"budget":8})");
  CHECK(run("certify --config " + f.string() + " --out " + (d / "o").string()).code == 1);
}

TEST_CASE("delta-star output") {
  const auto r = run("delta-star");
  CHECK(r.code == 0);
  const auto p = r.out.find("delta* = ");
  REQUIRE(p != std::string::npos);
  const double v = std::stod(r.out.substr(p + 9));
  // bisection on 4x^3 - 2x^2 - 1, delta = x^2
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    ((4 * m - 2) * m * m - 1 > 0 ? hi : lo) = m;
  }
  CHECK(v == doctest::Approx(lo * lo).epsilon(1e-14));
  CHECK(v == doctest::Approx(0.7188).epsilon(1e-4));
}

TEST_CASE("runs are byte-identical and flags override") {
  const auto d = scratch("repro");
  const auto f = write_config(d, R"({"family":"hopf","seed":5,"budget":16,"T_grid":[20,40,80]})");
  const auto a = run("kappa --config " + f.string() + " --out " + (d / "a").string());
  const auto b = run("kappa --config " + f.string() + " --out " + (d / "b").string());
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  CHECK(slurp(d / "a" / "kappa.json") == slurp(d / "b" / "kappa.json"));
  CHECK(slurp(d / "a" / "kappa_T.csv") == slurp(d / "b" / "kappa_T.csv"));

  run("kappa --config " + f.string() + " --seed 6 --out " + (d / "c").string());
  const auto ja = nlohmann::json::parse(slurp(d / "a" / "kappa.json"));
  const auto jc = nlohmann::json::parse(slurp(d / "c" / "kappa.json"));
  CHECK(ja["config_hash"] != jc["config_hash"]);
  CHECK(jc["config"]["seed"] == 6);
}

TEST_CASE("thread count does not change results") {
  const auto d = scratch("threads");
  const auto f = write_config(d, R"({"family":"ellipsoid","a":[1,1.3],"seed":2,"budget":12,"T_grid":[20,40]})");
  setenv("REEB_THREADS", "1", 1);
  run("kappa --config " + f.string() + " --out " + (d / "one").string());
  setenv("REEB_THREADS", "4", 1);
  run("kappa --config " + f.string() + " --out " + (d / "four").string());
  unsetenv("REEB_THREADS");
  CHECK(slurp(d / "one" / "kappa.json") == slurp(d / "four" / "kappa.json"));
}

TEST_CASE("config hash ignores key order") {
  const auto a = nlohmann::ordered_json::parse(R"({"family":"hopf","seed":1})");
  const auto b = nlohmann::ordered_json::parse(R"({"seed":1,"family":"hopf"})");
  CHECK(reeb::cli::config_hash(a) == reeb::cli::config_hash(b));
  CHECK_THROWS_AS(reeb::cli::parse_config(nlohmann::ordered_json::parse(R"({"family":"ellipsoid","a":[1]})")),
                  reeb::ConfigError);
}
