#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cfw/report.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cfw;

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("format_double round-trips exactly") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 1.7976931348623157e308, 0.0,
                   -0.0, 3.141592653589793}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
    CHECK(format_double(x) == s);  // deterministic
  }
}

TEST_CASE("field CSV schema and determinism") {
  Grid g = Grid::make_uniform(2, 1.0, 9);
  GridField f = make_field(g, 1, ValueSpace::None);
  for (long fl = 0; fl < g.num_nodes(); ++fl) {
    auto c = g.coords(fl);
    f.v[fl](0, 0) = Cplx(c[0] + 2 * c[1], c[0] * c[1]);
  }
  const std::string csv = csv_of_field(f);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x1,x2,re_0_0,im_0_0");
  long rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    double x1, x2, re, im;
    CHECK(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x1, &x2, &re, &im) ==
          4);
    CHECK(re == doctest::Approx(x1 + 2 * x2));
    CHECK(im == doctest::Approx(x1 * x2));
  }
  CHECK(rows == g.num_nodes());
  CHECK(csv_of_field(f) == csv);
}

TEST_CASE("time-series CSV headers") {
  Grid g = Grid::make_uniform(2, 1.0, 9);
  std::vector<GridField> fs(2, make_field(g, 1, ValueSpace::None));
  std::string csv = csv_of_time_fields(fs, {0.0, 0.5});
  CHECK(csv.rfind("x1,x2,t,", 0) == 0);
  std::string s = csv_of_series({0.0, 0.5}, {1.0, 2.0});
  CHECK(s.rfind("t,value", 0) == 0);
}

TEST_CASE("output writer manifest lists files with matching hashes") {
  const std::string dir = "test_report_out";
  OutputWriter w(dir);
  const std::string content = "x1,x2\n0,0\n";
  w.write("demo.csv", content);
  w.write_manifest();
  std::ifstream in(dir + "/manifest.json");
  REQUIRE(in.good());
  nlohmann::json m = nlohmann::json::parse(in);
  bool found = false;
  for (const auto& e : m["files"]) {
    if (e["name"] == "demo.csv") {
      found = true;
      CHECK(e["bytes"].get<std::size_t>() == content.size());
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(fnv1a(content)));
      CHECK(e["fnv1a"].get<std::string>() == buf);
    }
  }
  CHECK(found);
}
