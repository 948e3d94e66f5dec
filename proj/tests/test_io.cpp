#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>

#include "krontrace/json_io.hpp"

using namespace kt;

namespace {
ResistanceNetwork sample_net() {
  std::vector<std::string> ids = {"a", "b", "c"};
  std::vector<Edge> edges = {{0, 1, 2.0}, {1, 2, 1.0 / 3.0}};
  std::vector<double> m0 = {0.0, 1.5, 0.0};
  std::vector<char> bnd = {1, 0, 1};
  std::vector<double> ghost = {0.0, 0.25, 0.0};
  ResistanceNetwork net = build_network(ids, edges, m0, bnd, ghost);
  net.coords = {{0.0, 0.0}, {0.5, 1.0 / 7.0}, {1.0, 0.0}};
  return net;
}
}  // namespace

TEST_CASE("number formatting survives a strtod round trip") {
  CHECK(json_num(3.141592653589793) == "3.1415926535897931");
  CHECK(json_num(std::numeric_limits<double>::infinity()) == "null");
  CHECK(json_num(-std::numeric_limits<double>::infinity()) == "null");
  CHECK(json_num(std::nan("")) == "null");
  for (double v : {1.0 / 3.0, 1e-300, -6.25e17, 0.1 + 0.2}) {
    double back = std::strtod(json_num(v).c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK(json_escape("a\"b\\c\nd") == "a\\\"b\\\\c\\nd");
}

TEST_CASE("network json round trips byte for byte") {
  ResistanceNetwork net = sample_net();
  std::string once = network_to_json(net);
  ResistanceNetwork back = network_from_json(once);
  std::string twice = network_to_json(back);
  CHECK(once == twice);

  REQUIRE(back.n == 3);
  CHECK(back.ids == net.ids);
  CHECK(back.m0[1] == 1.5);
  CHECK(back.ghost_c[1] == 0.25);
  CHECK(back.is_boundary[0]);
  CHECK_FALSE(back.is_boundary[1]);
  REQUIRE(back.edges.size() == 2);
  CHECK(back.edges[1].c == 1.0 / 3.0);
  REQUIRE(back.coords.size() == 3);
  CHECK(back.coords[1][1] == 1.0 / 7.0);
}

TEST_CASE("readers reject what the writers never emit") {
  ResistanceNetwork net = sample_net();
  std::string good = network_to_json(net);

  std::string unknown_top = good;
  unknown_top.insert(unknown_top.rfind('}'), ",\"extra\":1");
  CHECK_THROWS_AS(network_from_json(unknown_top), DataError);

  std::string unknown_vertex = good;
  size_t pos = unknown_vertex.find("\"m0\"");
  unknown_vertex.insert(pos, "\"color\":3,");
  CHECK_THROWS_AS(network_from_json(unknown_vertex), DataError);

  std::string dup = good;
  size_t p = dup.find("\"b\"");
  dup.replace(p, 3, "\"a\"");
  CHECK_THROWS_AS(network_from_json(dup), DataError);

  CHECK_THROWS_AS(network_from_json("not json"), DataError);
}

TEST_CASE("trace form round trip keeps couplings and killing") {
  GeneratedDomain dom = gen_half_strip(8, 8, FarMode::absorbing);
  TraceForm tf = schur_trace(dom.net);
  std::string text = trace_to_json(tf);
  TraceForm back = trace_from_json(text);
  REQUIRE(back.b == tf.b);
  CHECK(back.ids == tf.ids);
  for (int i = 0; i < tf.b; ++i) {
    CHECK(back.kappa[i] == doctest::Approx(tf.kappa[i]).epsilon(1e-15));
    for (int j = 0; j < tf.b; ++j)
      CHECK(back.chat(i, j) == doctest::Approx(tf.chat(i, j)).epsilon(1e-15));
  }
  CHECK(trace_to_json(back) == text);

  std::string bad = text;
  bad.replace(bad.find("\"0_0\""), 5, "\"zz\"");
  CHECK_THROWS_AS(trace_from_json(bad), DataError);
}

TEST_CASE("report serializers quote and terminate correctly") {
  Report rep;
  rep.name = "demo";
  ReportSample s1;
  s1.label = "plain";
  s1.x = 1.0;
  s1.value = 2.0;
  ReportSample s2;
  s2.label = "needs,\"quoting\"";
  s2.x = 2.0;
  s2.value = std::numeric_limits<double>::quiet_NaN();
  rep.samples = {s1, s2};
  rep.has_fit = true;
  rep.fit.exponent = -2.0;
  rep.fit.constant = 0.5;
  rep.note = "a note";
  finalize(rep);

  std::string j = report_to_json(rep);
  CHECK(j.find("\"name\": \"demo\"") != std::string::npos);
  CHECK(j.find("null") != std::string::npos);
  CHECK(j.find("\"exponent\": -2") != std::string::npos);

  std::string csv = report_to_csv(rep);
  CHECK(csv.find("\"needs,\"\"quoting\"\"\"") != std::string::npos);
  size_t lines = 0;
  for (size_t p = 0; (p = csv.find("\r\n", p)) != std::string::npos; ++p)
    ++lines;
  CHECK(lines >= 3);
  CHECK(csv.substr(csv.size() - 2) == "\r\n");
}

TEST_CASE("atomic writes create directories and leave no temp files") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "kron_io_test";
  fs::remove_all(dir);
  std::string path = (dir / "nested" / "deep" / "out.json").string();
  write_file_atomic(path, "payload 123\n");
  CHECK(read_file(path) == "payload 123\n");

  size_t leftovers = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "out.json") ++leftovers;
  CHECK(leftovers == 0);

  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  fs::remove_all(dir);

  CHECK_THROWS_AS(read_file((dir / "missing.json").string()), DataError);
}
