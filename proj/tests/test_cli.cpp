#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "krontrace/json_io.hpp"

using namespace kt;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + KT_CLI_PATH + "\" " + args;
  int st = std::system(cmd.c_str());
  if (st == -1) return -1;
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path fresh_dir(const char* leaf) {
  fs::path dir = fs::temp_directory_path() / "kron_cli_test" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen writes the artifact trio deterministically") {
  fs::path a = fresh_dir("gen_a");
  fs::path b = fresh_dir("gen_b");
  std::string out_a = (a / "star.json").string();
  std::string out_b = (b / "star.json").string();

  CHECK(run_cli("gen star --rays 6 -o " + out_a) == 0);
  CHECK(run_cli("gen star --rays 6 -o " + out_b) == 0);

  REQUIRE(fs::exists(a / "star.json"));
  REQUIRE(fs::exists(a / "star.geom.json"));
  REQUIRE(fs::exists(a / "star.manifest.json"));

  ResistanceNetwork net = network_from_json(read_file(out_a));
  CHECK(net.n == 7);
  CHECK(net.boundary_count() == 6);

  // timings live in the manifest and nowhere else
  CHECK(read_file(out_a) == read_file(out_b));
  CHECK(read_file((a / "star.geom.json").string()) ==
        read_file((b / "star.geom.json").string()));
}

TEST_CASE("trace subcommand reduces a stored network") {
  fs::path dir = fresh_dir("trace");
  std::string net_path = (dir / "sg.json").string();
  REQUIRE(run_cli("gen sg-slit --level 2 -o " + net_path) == 0);

  std::string tr = (dir / "tr.json").string();
  CHECK(run_cli("trace " + net_path + " -o " + tr + " --measure harmonic") ==
        0);
  TraceForm tf = trace_from_json(read_file(tr));
  CHECK(tf.b == 8);
  REQUIRE((int)tf.measure.mass.size() == 8);
  double total = 0;
  for (double m : tf.measure.mass) {
    CHECK(m > 0);
    total += m;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  std::string tr2 = (dir / "tr2.json").string();
  CHECK(run_cli("trace " + net_path + " -o " + tr2 + " --measure uniform") ==
        0);
  TraceForm tu = trace_from_json(read_file(tr2));
  for (double m : tu.measure.mass)
    CHECK(m == doctest::Approx(0.125).epsilon(1e-15));

  std::string tr3 = (dir / "tr3.json").string();
  CHECK(run_cli("trace " + net_path + " -o " + tr3 + " --measure harmonic") ==
        0);
  CHECK(read_file(tr) == read_file(tr3));
}

TEST_CASE("report verbs emit json plus csv") {
  fs::path dir = fresh_dir("report");
  std::string out = (dir / "rep.json").string();
  CHECK(run_cli("report jump sg-slit --level 3 -o " + out) == 0);
  REQUIRE(fs::exists(dir / "rep.json"));
  REQUIRE(fs::exists(dir / "rep.csv"));
  REQUIRE(fs::exists(dir / "rep.manifest.json"));

  std::string body = read_file(out);
  CHECK(body.find("\"name\": \"jump\"") != std::string::npos);
  std::string csv = read_file((dir / "rep.csv").string());
  CHECK(csv.rfind("name,label,x,lhs,rhs,value\r\n", 0) == 0);
}

TEST_CASE("bad invocations exit with the usage code") {
  fs::path dir = fresh_dir("bad");
  std::string sink = (dir / "x.json").string();
  CHECK(run_cli("frobnicate 2>/dev/null") == 2);
  CHECK(run_cli("report bogus sg-slit -o " + sink + " 2>/dev/null") == 2);
  CHECK(run_cli("trace " + (dir / "missing.json").string() + " -o " + sink +
                " 2>/dev/null") == 2);
  CHECK(run_cli("gen sg-slit --level 99 -o " + sink + " 2>/dev/null") == 2);
  CHECK(run_cli("gen star 2>/dev/null") == 2);
}

TEST_CASE("suite reports every criterion and exits clean") {
  fs::path dir = fresh_dir("suite");
  CHECK(run_cli("suite -o " + dir.string() + " >/dev/null") == 0);
  std::string manifest = read_file((dir / "manifest.json").string());
  CHECK(manifest.find("\"criteria\"") != std::string::npos);
  CHECK(manifest.find("\"id\": 15") != std::string::npos);
  CHECK(manifest.find("\"pass\": false") == std::string::npos);
}

TEST_CASE("export bundles network, geometry, trace, and cover") {
  fs::path dir = fresh_dir("export");
  CHECK(run_cli("export sg-slit --level 3 -o " + dir.string()) == 0);
  for (const char* name :
       {"network.json", "geometry.json", "trace.json", "cover.json",
        "manifest.json"})
    CHECK(fs::exists(dir / name));
  CHECK(read_file((dir / "cover.json").string()).find("\"epsilon\"") !=
        std::string::npos);
}
