#include <doctest.h>

#include "oracles.hpp"
#include "ztower/errors.hpp"
#include "ztower/growth.hpp"
#include "ztower/jacobian.hpp"

using namespace ztower;

namespace {

GrowthSeries series(std::uint64_t p, std::size_t d, std::vector<std::int64_t> v) {
  GrowthSeries s;
  s.p = p;
  s.d = d;
  s.values = std::move(v);
  return s;
}

TowerSpec spec_of(const std::string& name) { return oracle::fixture(name).spec.spec; }

}  // namespace

TEST_CASE("fit_d1 examples") {
  CHECK(fit_d1(series(3, 1, {2, 6, 18, 54})) == std::optional(D1Fit{2, 0, 0, 0}));
  CHECK(fit_d1(series(2, 1, {0, 1, 2, 3})) == std::optional(D1Fit{0, 1, 0, 0}));
  CHECK(fit_d1(series(5, 1, {4, 4, 4, 4})) == std::optional(D1Fit{0, 0, 4, 0}));
  CHECK(fit_d1(series(5, 1, {1, 5, 25, 125})) == std::optional(D1Fit{1, 0, 0, 0}));
  // irregular start, exact from n = 1
  CHECK(fit_d1(series(2, 1, {7, 3, 6, 11})) == std::optional(D1Fit{1, 1, 0, 1}));
  // negative lambda has no natural-number fit
  CHECK_FALSE(fit_d1(series(2, 1, {0, -1, -2, -3})));
  CHECK_THROWS_AS(fit_d1(series(2, 1, {0, 1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(fit_d1(series(3, 2, {0, 1, 2, 3})), std::invalid_argument);
}

TEST_CASE("fit_d1 recovers planted parameters") {
  for (std::uint64_t p : {2u, 3u, 5u})
    for (std::int64_t mu = 0; mu <= 3; ++mu)
      for (std::int64_t lambda = 0; lambda <= 4; ++lambda)
        for (std::int64_t nu = -3; nu <= 3; ++nu) {
          std::vector<std::int64_t> v;
          for (int n = 0; n <= 5; ++n) v.push_back(mu * oracle::ipow(p, n) + lambda * n + nu);
          const auto fit = fit_d1(series(p, 1, v));
          REQUIRE(fit);
          CHECK(*fit == D1Fit{mu, lambda, nu, 0});
        }
}

TEST_CASE("ord_series on the corpus") {
  const GrowthSeries c9 = ord_series(spec_of("cycle_c9"), 3);
  CHECK(c9.values == std::vector<std::int64_t>{2, 6, 18, 54});
  const GrowthSeries tri = ord_series(spec_of("unramified_triangle"), 3);
  CHECK(tri.values == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(tri.vertices == std::vector<std::size_t>{3, 6, 12, 24});
  for (std::size_t n = 0; n < tri.kappas.size(); ++n) CHECK(ord_p(tri.kappas[n], 2) == tri.values[n]);
  CHECK_THROWS_AS(ord_series(spec_of("unramified_triangle"), 3, 10), GuardrailError);
}

TEST_CASE("ord_series reports the disconnected level") {
  TowerSpec s = spec_of("unramified_triangle");
  s.voltage[0] = {2};
  s.voltage[1] = {-2};
  try {
    ord_series(s, 2);
    FAIL("expected DisconnectedError");
  } catch (const DisconnectedError& e) {
    CHECK(e.level() == 1);
  }
}

TEST_CASE("projected_vertex_count") {
  CHECK(projected_vertex_count(spec_of("ramified_triangle"), 2) == 4 + 1 + 1);
  CHECK(projected_vertex_count(spec_of("flower_p3"), 1) == 1 + 3);
  CHECK(projected_vertex_count(spec_of("z3sq_flower_full"), 1) == 1 + 9);
}

TEST_CASE("check_growth") {
  const GrowthSeries c9 = series(3, 1, {2, 6, 18, 54});
  CHECK(check_growth(c9, 2, 0, 0).pass);
  CHECK_FALSE(check_growth(c9, 1, 0, 0).pass);
  const GrowthCheck off = check_growth(c9, 1, 0, 0);
  CHECK(off.residuals == std::vector<BigInt>{1, 3, 9, 27});
  CHECK(check_growth(series(2, 1, {5, 6, 7, 8}), 0, 1, 0).pass);
  // d = 2: bounded by C p^n
  const GrowthSeries d2 = series(3, 2, {0, 2, 4, 6});
  CHECK(check_growth(d2, 0, 0, 2).pass);
  CHECK_FALSE(check_growth(series(3, 2, {0, 2, 40, 400}), 0, 0, 2).pass);
  CHECK(default_slack(series(3, 2, {0, 5, 7}), 0, 0) == 5);
  CHECK(default_slack(series(3, 2, {0, 0, 7}), 0, 0) == 1);
}

TEST_CASE("consistency on the corpus") {
  CHECK(consistency(spec_of("cycle_c9"), 3).consistent);
  CHECK(consistency(spec_of("cycle_c5_p5"), 3).consistent);
  CHECK(consistency(spec_of("unramified_triangle"), 3).consistent);
  CHECK(consistency(spec_of("flower_p3"), 3).consistent);
  CHECK(consistency(spec_of("z3sq_flower_full"), 1).consistent);
  CHECK_THROWS_AS(consistency(spec_of("cycle_c9"), 2), std::invalid_argument);
}

TEST_CASE("consistency detects a wrong mu") {
  const Consistency c = consistency(spec_of("cycle_c9"), 3);
  REQUIRE(c.fit);
  CHECK(c.fit->mu == 2);
  CHECK(c.char_pic.mu == 2);
  CHECK_FALSE(check_growth(c.series, 1, 0, 0).pass);
}
