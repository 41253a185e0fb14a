#include "doctest.h"
#include "fixtures.hpp"
#include "gsheaf/generic.hpp"

using namespace gsheaf;
using fixtures::formula;

namespace {

constexpr PointSet P = 1u, X = 3u;

Filter filter_of(std::vector<PointSet> members) { return Filter{std::move(members)}; }

}  // namespace

TEST_CASE("genericity on the worked example") {
  const GPresheaf m = fixtures::sierpinski_worked();
  const auto maximal = maximal_filters(m.space());
  REQUIRE(maximal.size() == 1);
  CHECK(maximal[0] == filter_of({P, X}));
  for (bool quotient : {false, true}) {
    auto g = is_generic_filter(m, maximal[0], {2, 1, 1}, {}, quotient);
    CHECK(g.generic());
    auto top = is_generic_filter(m, filter_of({X}), {2, 1, 1}, {}, quotient);
    CHECK_FALSE(top.generic());
  }
  auto top = is_generic_filter(m, filter_of({X}), {0, 1, 1});
  bool r0 = false;
  for (const auto& v : top.report.violations) {
    r0 = r0 || (v.kind == "undecided" && v.witness["formula"] == "R(v0)" && v.witness["tuple"][0] == "0");
  }
  CHECK(r0);
  CHECK_THROWS_AS(is_generic_filter(m, filter_of({0u, P, X}), {1, 1, 1}), Error);
}

TEST_CASE("generic models of principal filters") {
  const GPresheaf m = fixtures::sierpinski_worked();
  CHECK(find_isomorphism(generic_model(m, filter_of({X})).structure(), m.at(X)));
  CHECK(find_isomorphism(generic_model(m, filter_of({P, X})).structure(), m.at(P)));
  CHECK_THROWS_AS(generic_model(m, filter_of({0u, P, X})), Error);
}

TEST_CASE("theorem statements on the worked example") {
  const GPresheaf m = fixtures::sierpinski_worked();
  TheoremEvaluator ev(m, filter_of({P, X}), 2);
  auto yes = ev.evaluate(formula(m, "R(v0)"), X, 0);
  CHECK(yes.satisfied);
  CHECK(yes.forced_on_member);
  CHECK(yes.deciding == P);
  CHECK(yes.forcing_set == X);
  CHECK(yes.set_in_filter);
  auto no = ev.evaluate(formula(m, "!R(v0)"), X, 0);
  CHECK_FALSE(no.satisfied);
  CHECK_FALSE(no.forced_on_member);
  CHECK_FALSE(no.set_in_filter);
  for (bool quotient : {false, true}) {
    TheoremOptions opts;
    opts.bound = {quotient ? 3 : 2, 1, 1};
    opts.quotient = quotient;
    auto r = check_generic_model_theorem(m, filter_of({P, X}), opts);
    CHECK_MESSAGE(r.ok(), r.to_text());
    CHECK(r.bounds["formulas"] == count_formulas(m.signature(), opts.bound.limits()));
  }
}

TEST_CASE("maximum principle on the worked example") {
  const GPresheaf m = fixtures::sierpinski_worked();
  auto w = maximum_principle_witness(m, X, formula(m, "R(v1)"), 1, Section{X, {0}});
  CHECK(w.open == X);
  CHECK(w.element == 1);
  auto small = maximum_principle_witness(m, P, formula(m, "R(v1)"), 1, Section{X, {0}});
  CHECK(small.open == P);
  CHECK(small.element == 0);

  auto s = fixtures::sig("rel R/1");
  auto g = fixtures::trivial_group();
  std::map<PointSet, GStructure> empty;
  empty.emplace(X, fixtures::unary(s, g, 2, {}));
  empty.emplace(P, fixtures::unary(s, g, 1, {}));
  const GPresheaf none(FiniteSpace::sierpinski(), std::move(empty), {{{X, P}, {0, 0}}});
  CHECK_THROWS_AS(maximum_principle_witness(none, X, formula(none, "R(v0)"), 0, Section{X, {}}), Error);
}

TEST_CASE("double negation against dense opens") {
  const GPresheaf m = fixtures::sierpinski_worked();
  CHECK(check_double_negation(m, X, formula(m, "R(v0)"), Section{X, {0}}).ok());
  CHECK_THROWS_AS(check_double_negation(m, X, formula(m, "!R(v0)"), Section{X, {0}}), Error);
}
