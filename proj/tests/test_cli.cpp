// Runs the command line tool as a subprocess and checks exit codes and output.
#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("gfluct_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result run(const std::string& args) {
  const fs::path out = workdir() / "stdout.txt", err = workdir() / "stderr.txt";
  const std::string cmd = std::string(GFLUCT_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  Result r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("catalog prints totals and classes") {
  const auto r = run("catalog --class T1 --k 4 --h 4 --format text");
  CHECK(r.status == 0);
  CHECK(r.out.find("total: 32") != std::string::npos);
  CHECK(r.out.find("iso_classes: 2") != std::string::npos);
  const auto j = run("catalog --class T1 --k 4 --h 4");
  const Json doc = Json::parse(j.out);
  CHECK(doc["entries"].size() == 2);
  CHECK(doc["entries"][0]["multiplicity"] == 16);
}

TEST_CASE("exit codes and single-line errors") {
  auto r = run("theory --regime warp --ks 2");
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error: REGIME_UNKNOWN: ", 0) == 0);
  CHECK(r.err.find('\n') == r.err.size() - 1);
  CHECK(r.out.empty());

  r = run("theory --regime poly-m --m 3 --ks 3");
  CHECK(r.status == 3);
  CHECK(r.err.rfind("error: REGIME_DIVERGENT: ", 0) == 0);
  r = run("theory --regime critical-m --m 4 --c 1 --ks 2,6");
  CHECK(r.status == 3);
  r = run("theory --regime poly-m --m 3 --ks 2,5");
  CHECK(r.status == 0);

  r = run("oracle --mode all-graphs --n 7 --p 0.5 --ks 2");
  CHECK(r.status == 2);
  CHECK(r.err.rfind("error: RESOURCE_GUARD: ", 0) == 0);

  r = run("theory --regime dense --p 0.5");
  CHECK(r.status == 1);
  r = run("theory --regime dense --p 0.5 --ks 2,x");
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error: VALIDATION: ", 0) == 0);
  r = run("frobnicate");
  CHECK(r.status == 1);
  r = run("theory --graphon /nonexistent.json --regime dense --p 0.5 --ks 2");
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error: IO: ", 0) == 0);
}

TEST_CASE("theory reads graphon files; flags override config files") {
  const fs::path g = workdir() / "const1.json";
  write(g, R"({"blocks": [[1.0]]})");
  auto r = run("theory --regime dense --p 0.5 --graphon " + g.string() + " --ks 2,3 --format csv");
  CHECK(r.status == 0);
  CHECK(r.out.find("2,2,1\n") != std::string::npos);
  CHECK(r.out.find("3,3,9\n") != std::string::npos);

  const fs::path cfg = workdir() / "cfg.json";
  write(cfg, R"({"regime": "dense", "p": 0.5, "ks": [2, 3]})");
  r = run("theory --config " + cfg.string() + " --p 0.25 --format json");
  CHECK(r.status == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["regime"]["p"] == 0.25);
  CHECK(doc["manifest"]["config"]["p"] == 0.25);
}

TEST_CASE("manifests replay the run") {
  const fs::path g = workdir() / "two.json";
  write(g, R"({"blocks": [[0.2, 0.9], [0.9, 0.4]], "measures": [0.25, 0.75]})");
  const fs::path out = workdir() / "theory.json";
  auto r = run("theory --regime poly-half --statistic X --graphon " + g.string() + " --ks 2,4 --out " + out.string());
  REQUIRE(r.status == 0);
  const Json first = Json::parse(slurp(out));
  CHECK(first["manifest"]["outputs"][0] == out.string());
  // The graphon file was inlined, so deleting it does not break the replay.
  fs::remove(g);
  r = run("theory --config " + out.string());
  REQUIRE(r.status == 0);
  const Json second = Json::parse(r.out);
  CHECK(second["manifest"]["hash"] == first["manifest"]["hash"]);
  CHECK(second["matrix"] == first["matrix"]);
  r = run("simulate --config " + out.string());
  CHECK(r.status == 1);
}

TEST_CASE("simulate, compare and sample export") {
  const fs::path rep = workdir() / "sim.json", table = workdir() / "sim.csv", edges = workdir() / "edges.txt";
  auto r = run("simulate --regime dense --p 0.5 --statistic L --ks 2,3 --n 40 --replicates 120 --seed 3 "
               "--workers 2 --wick 2,2,3,3 --bootstrap 30 --out " + rep.string() + " --table " + table.string() +
               " --export-sample " + edges.string());
  REQUIRE(r.status == 0);
  const Json sim = Json::parse(slurp(rep));
  const std::string csv = slurp(table);
  CHECK(csv.find("# manifest " + sim["manifest"]["hash"].get<std::string>()) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  std::istringstream es(slurp(edges));
  int u, v, lines = 0;
  while (es >> u >> v) {
    CHECK(u < v);
    CHECK(v < 40);
    ++lines;
  }
  CHECK(lines > 0);

  r = run("compare --report " + rep.string());
  REQUIRE(r.status == 0);
  const Json cmp = Json::parse(r.out);
  CHECK(cmp["z"] == sim["z"]);
  CHECK(cmp["table"] == sim["table"]);

  r = run("compare --report " + rep.string() + " --format text");
  CHECK(r.out.find("wick [2,2,3,3]") != std::string::npos);

  // Same seed, different worker count: identical samples.
  r = run("simulate --regime dense --p 0.5 --statistic L --ks 2,3 --n 40 --replicates 120 --seed 3 --workers 1 "
          "--wick 2,2,3,3 --bootstrap 30");
  REQUIRE(r.status == 0);
  CHECK(Json::parse(r.out)["samples"] == sim["samples"]);
}

TEST_CASE("oracle subcommand") {
  const fs::path prof = workdir() / "profile.txt";
  write(prof, "# 3 x 3 grid\n0 1 0.5\n1 0 0.25\n0.5 0.25 0\n");
  auto r = run("oracle --mode walks --n 3 --p 0.8 --profile " + prof.string() + " --ks 2 --centered false");
  REQUIRE(r.status == 0);
  const Json o = Json::parse(r.out);
  // tr(A^2) = 2 (a01 + a02 + a12); variances q(1-q) with q = 0.8, 0.4, 0.2.
  CHECK(o["matrix"][0][0].get<double>() == doctest::Approx(4 * (0.16 + 0.24 + 0.16)));
  const fs::path blocks = workdir() / "blocks.json";
  write(blocks, R"({"blocks": [[1, 0.5], [0.5, 1]], "sizes": [2, 1]})");
  r = run("oracle --mode all-graphs --n 3 --p 0.8 --profile " + blocks.string() + " --ks 2,3");
  CHECK(r.status == 0);
  r = run("oracle --mode drift --regime bounded --c 2 --statistic X --k 2 --h 2 --ns 20,40,80 --format csv");
  CHECK(r.status == 0);
  CHECK(r.out.find("n,p,scaled_cov,theory,abs_error") != std::string::npos);
}
