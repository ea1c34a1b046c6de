#include <doctest.h>

#include <sstream>
#include <string>

#include "cli_helpers.hpp"
#include "ppr/bundle_io.hpp"
#include "ppr/errors.hpp"

using namespace ppr;

namespace {

template <class F>
void expect_parse_error(F&& f, std::size_t row, std::size_t col) {
  try {
    f();
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == row);
    CHECK(e.column() == col);
    const std::string prefix = "row " + std::to_string(row) + ", column " + std::to_string(col);
    CHECK(std::string(e.what()).rfind(prefix, 0) == 0);
  }
}

}  // namespace

TEST_CASE("parse_double") {
  CHECK(parse_double("1.5") == 1.5);
  CHECK(parse_double("+2") == 2.0);
  CHECK(parse_double("-1e-3") == -0.001);
  CHECK_THROWS_AS(parse_double(""), InvalidArgument);
  CHECK_THROWS_AS(parse_double("1,5"), InvalidArgument);
  CHECK_THROWS_AS(parse_double("abc"), InvalidArgument);
  CHECK_THROWS_AS(parse_double("1.0x"), InvalidArgument);
  CHECK_THROWS_AS(parse_double("inf"), InvalidArgument);
  CHECK_THROWS_AS(parse_double("nan"), InvalidArgument);
}

TEST_CASE("effects CSV") {
  std::istringstream ok("t,delta\n0,0\n0.5, 0.25\n\n1,1.5\r\n");
  const auto e = parse_effects_csv(ok);
  CHECK(e.t == std::vector{0.0, 0.5, 1.0});
  CHECK(e.delta == std::vector{0.0, 0.25, 1.5});

  expect_parse_error([] { std::istringstream s("time,delta\n0,0\n"); parse_effects_csv(s); }, 1, 1);
  expect_parse_error([] { std::istringstream s("t,delta\n0,0\n1,oops\n"); parse_effects_csv(s); },
                     3, 2);
  expect_parse_error([] { std::istringstream s("t,delta\n0,0,0\n"); parse_effects_csv(s); }, 2, 1);
  expect_parse_error([] { std::istringstream s(""); parse_effects_csv(s); }, 1, 1);
}

TEST_CASE("covariance CSV") {
  std::istringstream ok("1,0.5\n0.5,2\n");
  const auto m = parse_covariance_csv(ok);
  CHECK(m.size() == 2);
  CHECK(m(1, 1) == 2.0);
  expect_parse_error([] { std::istringstream s("1,0.5\n0.5,x\n"); parse_covariance_csv(s); }, 2, 2);
  expect_parse_error([] { std::istringstream s("1,0.5\n0.5\n"); parse_covariance_csv(s); }, 2, 1);
  expect_parse_error([] { std::istringstream s("1,0.5\n"); parse_covariance_csv(s); }, 1, 2);
  expect_parse_error([] { std::istringstream s("\n"); parse_covariance_csv(s); }, 1, 1);
}

TEST_CASE("load_bundle") {
  testing::ScratchDir dir;
  const auto eff = dir.write("e.csv", "t,delta\n0,0\n0.5,0.4\n1,1\n");
  const auto cov = dir.write("c.csv", "1,0.5,0.5\n0.5,1,0.5\n0.5,0.5,1\n");
  const auto b = load_bundle(eff, cov);
  CHECK(b.grid().size() == 3);
  CHECK(b.delta_hat()[1] == 0.4);
  CHECK(b.sigma_hat()(0, 1) == 0.5);

  const auto cov2 = dir.write("c2.csv", "1,0\n0,1\n");
  try {
    load_bundle(eff, cov2);
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    const std::string msg = e.what();
    CHECK(msg.find('3') != std::string::npos);
    CHECK(msg.find("2x2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_bundle(dir.file("missing.csv"), cov), IoError);
  const auto bad_grid = dir.write("g.csv", "t,delta\n0,0\n0.7,0\n0.5,0\n");
  CHECK_THROWS_AS(load_bundle(bad_grid, cov), InvalidArgument);
  const auto not_pd = dir.write("np.csv", "1,2,0\n2,1,0\n0,0,1\n");
  CHECK_THROWS_AS(load_bundle(eff, not_pd), ModelError);
}
