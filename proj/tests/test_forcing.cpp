#include "doctest.h"
#include "fixtures.hpp"

using namespace gsheaf;
using fixtures::formula;

namespace {

constexpr PointSet P = 1u, X = 3u;
constexpr int p = 0, q = 1;

}  // namespace

TEST_CASE("worked example: pointwise verdicts") {
  const GPresheaf m = fixtures::sierpinski_worked();
  const Section s0{X, {0}};
  auto at = forces_at(m, p, formula(m, "R(v0)"), s0);
  CHECK(at.verdict);
  REQUIRE(at.trail.size() == 1);
  CHECK(at.trail[0].open == P);
  CHECK_FALSE(forces_at(m, q, formula(m, "R(v0)"), s0).verdict);
  CHECK_FALSE(forces_at(m, q, formula(m, "!R(v0)"), s0).verdict);
  auto dn = forces_at(m, q, formula(m, "!!R(v0)"), s0);
  CHECK(dn.verdict);
  CHECK(dn.trail.back().open == X);
  for (int x : {p, q}) CHECK(forces_at(m, x, formula(m, "forall v0 (v0 = v0)"), Section{X, {}}).verdict);
}

TEST_CASE("worked example: open forcing and forcing sets") {
  const GPresheaf m = fixtures::sierpinski_worked();
  const Section s0{X, {0}};
  CHECK(forces_on(m, X, formula(m, "!!R(v0)"), s0).verdict);
  auto r = forces_on(m, X, formula(m, "R(v0)"), s0);
  CHECK_FALSE(r.verdict);
  CHECK(r.failed_point == q);
  CHECK(forcing_set(m, X, formula(m, "R(v0)"), s0) == P);
  CHECK(forcing_set(m, X, formula(m, "!!R(v0)"), s0) == X);
  CHECK(forcing_set(m, X, formula(m, "!(v0 = v0)"), s0) == 0);
  for (PointSet u : {P, X}) CHECK(forces_on(m, u, formula(m, "forall v0 (v0 = v0)"), Section{X, {}}).verdict);
}

TEST_CASE("tables agree with direct evaluation on the worked example") {
  const GPresheaf m = fixtures::sierpinski_worked();
  const auto phis = enumerate_formulas(m.signature(), {2, 1, 1});
  for (SemanticsMode mode : {SemanticsMode::Local, SemanticsMode::Literal}) {
    ForcingOptions opts{mode};
    ForcingTables tables(m, 3, opts);
    for (const auto& phi : phis) {
      for (PointSet u : m.opens()) {
        for (int a = 0; a < m.at(u).size(); ++a) {
          const Section s{u, {a}};
          CHECK(tables.forcing_set(phi, u, {a}) == forcing_set(m, u, phi, s, opts));
        }
      }
    }
  }
}

TEST_CASE("witness steps replay") {
  const GPresheaf m = fixtures::sierpinski_worked();
  for (const auto& phi : enumerate_formulas(m.signature(), {2, 1, 1})) {
    for (int x : {p, q}) {
      for (int a = 0; a < 2; ++a) {
        auto v = forces_at(m, x, phi, Section{X, {a}});
        for (const auto& step : v.trail) CHECK(replay_step(m, step, {}));
      }
    }
  }
}

TEST_CASE("unassigned variables and foreign points are rejected") {
  const GPresheaf m = fixtures::sierpinski_worked();
  CHECK_THROWS_AS(forces_at(m, p, formula(m, "R(v0)"), Section{X, {}}), Error);
  CHECK_THROWS_AS(forces_at(m, q, formula(m, "R(v0)"), Section{P, {0}}), Error);
}
