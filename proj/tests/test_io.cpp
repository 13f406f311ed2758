// Serialization: lossless float rendering, JSON report emission against the
// shipped schema, CSV column contracts, and file round trips.
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigenbound/bounds.hpp"
#include "eigenbound/io.hpp"
#include "eigenbound/spectrum.hpp"
#include "schema_check.hpp"

using eigenbound::IndexSet;
using eigenbound::Spectrum;
namespace io = eigenbound::io;
namespace lb = eigenbound::lb;
using nlohmann::json;

#ifndef EIGENBOUND_SOURCE_DIR
#error "tests must be compiled with EIGENBOUND_SOURCE_DIR"
#endif

namespace {

json load_schema(const char* name) {
  const std::string path =
      std::string(EIGENBOUND_SOURCE_DIR) + "/schemas/" + name;
  return json::parse(io::read_file(path));
}

}  // namespace

TEST_CASE("17-digit rendering round-trips doubles bit-exactly") {
  const double cases[] = {0.0,
                          1.0 / 3.0,
                          M_PI,
                          -6.75e-9,
                          0.1,
                          123456789.123456789,
                          1e-300,
                          std::numeric_limits<double>::max(),
                          std::numeric_limits<double>::denorm_min(),
                          2.151292546497023};
  for (double v : cases) {
    const std::string s = io::format_g17(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
  }
  // Negative zero keeps its sign through the round trip.
  const double nz = std::strtod(io::format_g17(-0.0).c_str(), nullptr);
  CHECK(std::signbit(nz));
}

TEST_CASE("JSON number tokens of non-finite values are quoted strings") {
  CHECK(io::json_number(std::numeric_limits<double>::infinity()) == "\"inf\"");
  CHECK(io::json_number(-std::numeric_limits<double>::infinity()) ==
        "\"-inf\"");
  CHECK(io::json_number(std::numeric_limits<double>::quiet_NaN()) ==
        "\"nan\"");
  CHECK(io::json_number(0.25) == "0.25");
}

TEST_CASE("JSON string escaping") {
  CHECK(io::json_escape("plain") == "plain");
  CHECK(io::json_escape("a\"b") == "a\\\"b");
  CHECK(io::json_escape("a\\b") == "a\\\\b");
  CHECK(io::json_escape("a\nb\tc") == "a\\nb\\tc");
  CHECK(io::json_escape(std::string(1, '\x01')) == "\\u0001");
}

TEST_CASE("bound report serialization validates against the shipped schema") {
  const json schema = load_schema("bound_report.schema.json");

  // Witness as an index set (search-based bound).
  const lb::BoundReport searched = lb::theorem_main_bound(
      Spectrum::from_values({2.0, 2.0, 1.0, 1.0}), IndexSet::leading(2), 100);
  const json a = json::parse(io::bound_report_json(searched));
  std::string err;
  CHECK_MESSAGE(testkit::schema_validate(a, schema, &err), err);
  CHECK(a.at("value").get<double>() == doctest::Approx(0.08).epsilon(1e-14));
  CHECK(a.at("witness").at("type") == "index_set");
  CHECK(a.at("witness").at("members") == json::array({1, 2, 3, 4}));
  CHECK(a.at("per_pair_terms").size() == 4);
  CHECK(a.at("truncation").at("truncated") == false);

  // Witness as tuning parameters (closed-form bound).
  const lb::BoundReport tuned =
      lb::bayes_bound(Spectrum::from_values({2.0, 1.0}), 1, 10, 1.0);
  const json b = json::parse(io::bound_report_json(tuned));
  CHECK_MESSAGE(testkit::schema_validate(b, schema, &err), err);
  CHECK(b.at("witness").at("type") == "tuning");
  CHECK(b.at("witness").at("params").at("cap").get<double>() ==
        doctest::Approx(0.5));

  // No witness at all.
  lb::BoundReport bare;
  const json c = json::parse(io::bound_report_json(bare));
  CHECK_MESSAGE(testkit::schema_validate(c, schema, &err), err);
  CHECK(c.at("witness").is_null());

  // Non-finite values appear as the documented quoted strings.
  lb::BoundReport nf;
  nf.value = std::numeric_limits<double>::infinity();
  const json d = json::parse(io::bound_report_json(nf));
  CHECK_MESSAGE(testkit::schema_validate(d, schema, &err), err);
  CHECK(d.at("value") == "inf");
}

TEST_CASE("CSV emitters follow their fixed column contracts") {
  const std::vector<lb::PairTermEntry> terms = {{1, 2, 0.25}, {1, 3, 0.0625}};
  CHECK(io::per_pair_csv(terms) == "i,j,term\n1,2,0.25\n1,3,0.0625\n");

  const std::vector<io::RiskGridRow> rows = {{500, 0.027, 0.001},
                                             {2000, 0.00675, 0.0002}};
  const std::string grid = io::risk_grid_csv(rows);
  CHECK(grid.rfind("n,mean,se,n_times_mean\n", 0) == 0);
  // The scaled column is the product of the first two.
  std::istringstream is(grid);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    double n, mean, se, scaled;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &n, &mean, &se,
                        &scaled) == 4);
    CHECK(scaled == n * mean);
  }

  CHECK(io::losses_csv({0.5, 0.125}) == "replicate,loss\n0,0.5\n1,0.125\n");

  eigenbound::prior::ChainDiagnostics diag;
  diag.trace_series = {1.5, 1.75};
  diag.acceptance_series = {0.5, 0.4375};
  CHECK(io::chain_diagnostics_csv(diag) ==
        "sample,tr_u,acceptance_rate\n0,1.5,0.5\n1,1.75,0.4375\n");
}

TEST_CASE("file write and read round trip") {
  const std::string dir = []() {
    const char* t = std::getenv("TMPDIR");
    return std::string(t ? t : "/tmp");
  }();
  const std::string path = dir + "/eigenbound_io_test.txt";
  const std::string content = "line one\nline two\n\x01 binary-ish \\\" chars";
  io::write_file(path, content);
  CHECK(io::read_file(path) == content);
  std::remove(path.c_str());

  CHECK_THROWS_AS(io::read_file(dir + "/eigenbound_does_not_exist.txt"),
                  std::runtime_error);
  CHECK_THROWS_AS(io::write_file(dir + "/no_such_dir_xyz/out.txt", "x"),
                  std::runtime_error);
}
