#include "doctest.h"
#include "fixtures.hpp"

using namespace gsheaf;

namespace {

constexpr PointSet P = 1u, Q = 2u, X = 3u;

bool has(const CheckReport& r, const std::string& kind) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

// Discrete two-point space, M_X = {0}, M_p = M_q = {0,1}, 0 -> 0.
GPresheaf discrete_gap() {
  auto s = fixtures::sig("rel R/1");
  auto g = fixtures::trivial_group();
  std::map<PointSet, GStructure> objects;
  objects.emplace(X, fixtures::unary(s, g, 1, {}, {"0"}));
  objects.emplace(P, fixtures::unary(s, g, 2, {}, {"0", "1"}));
  objects.emplace(Q, fixtures::unary(s, g, 2, {}, {"0", "1"}));
  return GPresheaf(FiniteSpace::discrete(2), std::move(objects), {{{X, P}, {0}}, {{X, Q}, {0}}});
}

}  // namespace

TEST_CASE("constant presheaves") {
  auto s = fixtures::sig("rel R/1");
  const GStructure m = fixtures::unary(s, fixtures::trivial_group(), 2, {1});
  for (const auto& space : {FiniteSpace::sierpinski(), FiniteSpace::discrete(2), FiniteSpace::one_point()}) {
    const GPresheaf c = GPresheaf::constant(space, m);
    CHECK(validate_presheaf(c).ok());
    for (PointSet u : c.opens())
      for (const auto& cover : irredundant_covers(space, u)) CHECK(check_coherence(c, u, cover).ok());
  }
  // Every cover of an open in these spaces contains the open itself.
  CHECK(is_sheaf(GPresheaf::constant(FiniteSpace::sierpinski(), m)).ok());
  CHECK(is_sheaf(GPresheaf::constant(FiniteSpace::one_point(), m)).ok());
  // On a disconnected space a constant presheaf with two elements does not glue (0 on p, 1 on q).
  const GPresheaf split = GPresheaf::constant(FiniteSpace::discrete(2), m);
  CHECK(has(check_exactness(split, X, {P, Q}), "exactness"));
  CHECK_FALSE(is_sheaf(split).ok());
  const GStructure one = fixtures::unary(s, fixtures::trivial_group(), 1, {0});
  CHECK(is_sheaf(GPresheaf::constant(FiniteSpace::discrete(2), one)).ok());
}

TEST_CASE("functoriality and equivariance of restrictions") {
  // Points a, b, c; opens A, AB, AC, X. Paths X > AB > A and X > AC > A disagree on element 0.
  auto s = fixtures::sig("rel R/1");
  auto g = fixtures::trivial_group();
  const FiniteSpace space({"a", "b", "c"}, {0u, 1u, 3u, 5u, 7u}, {{1u, "A"}, {3u, "AB"}, {5u, "AC"}, {7u, "X"}});
  std::map<PointSet, GStructure> objects;
  for (PointSet u : {1u, 3u, 5u, 7u}) objects.emplace(u, fixtures::unary(s, g, 2, {}));
  const GPresheaf bad(space, std::move(objects),
                      {{{7u, 3u}, {0, 1}}, {{7u, 5u}, {1, 0}}, {{3u, 1u}, {0, 1}}, {{5u, 1u}, {0, 1}}});
  const auto r = validate_presheaf(bad);
  REQUIRE(has(r, "functoriality"));
  for (const auto& v : r.violations)
    if (v.kind == "functoriality") CHECK(v.witness.contains("element"));

  auto z2 = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(2));
  GStructure swap = GStructure::blank(s, z2, 2);
  swap.action = {0, 1, 1, 0};
  std::map<PointSet, GStructure> objs;
  objs.emplace(X, swap);
  objs.emplace(P, swap);
  const GPresheaf squash(FiniteSpace::sierpinski(), std::move(objs), {{{X, P}, {0, 0}}});
  CHECK(has(validate_presheaf(squash), "equivariance"));
}

TEST_CASE("coherence and exactness") {
  auto s = fixtures::sig("rel R/1");
  auto g = fixtures::trivial_group();
  std::map<PointSet, GStructure> objects;
  objects.emplace(X, fixtures::unary(s, g, 2, {}, {"s", "t"}));
  objects.emplace(P, fixtures::unary(s, g, 1, {}, {"*"}));
  objects.emplace(Q, fixtures::unary(s, g, 1, {}, {"*"}));
  const GPresheaf twins(FiniteSpace::discrete(2), std::move(objects), {{{X, P}, {0, 0}}, {{X, Q}, {0, 0}}});
  const auto coh = check_coherence(twins, X, {P, Q});
  REQUIRE(has(coh, "coherence"));
  CHECK(coh.violations.front().witness["elements"] == Json::array({"s", "t"}));
  CHECK(check_coherence(twins, X, {X}).ok());
  CHECK_THROWS_AS(check_coherence(twins, X, {P}), Error);

  const GPresheaf gap = discrete_gap();
  const auto ex = check_exactness(gap, X, {P, Q});
  REQUIRE(has(ex, "exactness"));
  // Families (0,0) glue; (0,1), (1,0) and (1,1) do not.
  CHECK(ex.violations.size() == 3);
  CHECK(check_exactness(gap, X, {X}).ok());
  const auto sheaf = is_sheaf(gap);
  REQUIRE(has(sheaf, "exactness"));
  bool located = false;
  for (const auto& v : sheaf.violations)
    located = located || (v.kind == "exactness" && v.witness["open"] == gap.space().open_name(X) && v.witness["cover"].size() == 2);
  CHECK(located);
  CHECK_FALSE(is_exact(gap).ok());

  CHECK(is_sheaf(fixtures::sierpinski_worked()).ok());
}

TEST_CASE("stalks") {
  auto s = fixtures::sig("rel R/1");
  const GStructure m = fixtures::unary(s, fixtures::trivial_group(), 2, {1});
  const GPresheaf single = GPresheaf::constant(FiniteSpace::one_point(), m);
  CHECK(find_isomorphism(stalk(single, 0).colimit.structure, m));

  const GPresheaf w = fixtures::sierpinski_worked();
  CHECK(find_isomorphism(stalk(w, 1).colimit.structure, w.at(X)));
  CHECK(find_isomorphism(stalk(w, 0).colimit.structure, w.at(P)));

  const auto germs = germ_at(w, 0, Section{X, {0}});
  const auto star = germ_at(w, 0, Section{P, {0}});
  REQUIRE(germs.size() == 1);
  CHECK(germs[0] == star[0]);
  CHECK(germ_at(w, 1, Section{X, {0}})[0] != germ_at(w, 1, Section{X, {1}})[0]);
}
