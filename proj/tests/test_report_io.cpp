#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "solitonlab/report_io.hpp"

using namespace soliton;

namespace {

ResidualReport sample_report() {
  ResidualReport r;
  r.identity = "lemma1.d";
  r.model = "cigar";
  r.point = ChartPoint(0.5, -0.25);
  r.lhs = {4.0};
  r.rhs = {4.0};
  r.abs_residual = 0.1 + 0.2;  // prints with all 17 digits
  r.rel_residual = 3.125e-14;
  r.fd_step = 1e-3;
  r.status = "ok";
  r.tolerance = 1e-8;
  r.passed = true;
  return r;
}

}  // namespace

TEST_CASE("JSON round trip keeps every field") {
  ResidualReport r = sample_report();
  r.sigma = 2.0;
  r.order_estimate = 1.97;
  const ConfigEcho cfg = {{"command", "verify"}, {"seed", "7"}};
  const std::string doc = reports_to_json({r}, cfg);
  CHECK(doc.find("\"format_version\": \"1\"") != std::string::npos);
  CHECK(doc.find("\"command\": \"verify\"") != std::string::npos);

  std::istringstream in(doc);
  const auto back = read_reports_json(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].identity == r.identity);
  CHECK(back[0].model == r.model);
  CHECK(back[0].point.dim == 2);
  CHECK(back[0].point.x[0] == r.point.x[0]);
  CHECK(back[0].sigma.has_value());
  CHECK(*back[0].sigma == 2.0);
  CHECK(back[0].lhs == r.lhs);
  CHECK(back[0].rhs == r.rhs);
  CHECK(back[0].abs_residual == r.abs_residual);
  CHECK(back[0].rel_residual == r.rel_residual);
  CHECK(*back[0].fd_step == 1e-3);
  CHECK(*back[0].order_estimate == 1.97);
  CHECK(back[0].passed == r.passed);
}

TEST_CASE("nulls survive the round trip") {
  const ResidualReport r = sample_report();  // no sigma, no order
  const std::string doc = reports_to_json({r}, {});
  std::istringstream in(doc);
  const auto back = read_reports_json(in);
  REQUIRE(back.size() == 1);
  CHECK_FALSE(back[0].sigma.has_value());
  CHECK_FALSE(back[0].order_estimate.has_value());
}

TEST_CASE("serialization is byte-deterministic") {
  const ResidualReport r = sample_report();
  const ConfigEcho cfg = {{"a", "1"}, {"b", "2"}};
  CHECK(reports_to_json({r, r}, cfg) == reports_to_json({r, r}, cfg));
}

TEST_CASE("CSV carries the config header and 17-digit reals") {
  const ResidualReport r = sample_report();
  std::ostringstream os;
  write_reports_csv(os, {r}, {{"seed", "7"}});
  const std::string text = os.str();
  CHECK(text.find("# seed = 7") != std::string::npos);
  CHECK(text.find("identity,model,point_x") != std::string::npos);
  CHECK(text.find("0.30000000000000004") != std::string::npos);
}

TEST_CASE("decay fits serialize to JSON and CSV") {
  DecayFit f;
  f.quantity = "R";
  f.model = "bryant";
  f.r_min = 100.0;
  f.r_max = 10000.0;
  f.n = 32;
  f.exponent = -1.002;
  f.constant = 1.87;
  f.r2 = 0.99997;
  f.residual_spread = 0.004;
  f.verdict = "power-law";
  const std::string doc = fits_to_json({f}, {{"command", "decay"}});
  CHECK(doc.find("\"quantity\": \"R\"") != std::string::npos);
  CHECK(doc.find("\"verdict\": \"power-law\"") != std::string::npos);
  std::ostringstream os;
  write_fits_csv(os, {f}, {});
  CHECK(os.str().find("quantity,model,r_min") != std::string::npos);
  CHECK(os.str().find("power-law") != std::string::npos);
}
