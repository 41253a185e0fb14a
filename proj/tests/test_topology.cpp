#include "doctest.h"
#include "gsheaf/topology.hpp"

using namespace gsheaf;

namespace {
constexpr PointSet p = 1u, q = 2u, pq = 3u;

Filter up(std::vector<PointSet> members) { return Filter{std::move(members)}; }
}  // namespace

TEST_CASE("space validation") {
  CHECK(validate_space(FiniteSpace::sierpinski()).ok());
  CHECK(validate_space(FiniteSpace::discrete(2)).ok());
  const auto r = validate_space(FiniteSpace({"p", "q"}, {0u, p, q}));
  bool union_missing = false;
  for (const auto& v : r.violations) union_missing = union_missing || v.kind == "union" || v.kind == "whole-space";
  CHECK(union_missing);
  CHECK_FALSE(r.ok());
}

TEST_CASE("neighbourhoods, closure and density") {
  const auto s = FiniteSpace::sierpinski();
  CHECK(min_open_nbhd(s, 0) == p);
  CHECK(min_open_nbhd(s, 1) == pq);
  const auto d = FiniteSpace::discrete(2);
  CHECK(min_open_nbhd(d, 0) == p);
  CHECK(min_open_nbhd(d, 1) == q);

  CHECK(closure(s, q) == q);
  CHECK(closure(s, p) == pq);
  CHECK(is_dense(s, p, pq));
  CHECK(is_dense(s, pq, pq));
  CHECK_FALSE(is_dense(d, p, pq));
  CHECK_THROWS_AS(is_dense(d, p, q), Error);
}

TEST_CASE("filters") {
  const auto one = FiniteSpace::one_point();
  CHECK(enumerate_filters(one, true) == std::vector<Filter>{up({1u})});
  CHECK(maximal_filters(one) == std::vector<Filter>{up({1u})});

  const auto s = FiniteSpace::sierpinski();
  const auto fs = enumerate_filters(s, true);
  CHECK(fs.size() == 2);
  CHECK(std::find(fs.begin(), fs.end(), up({pq})) != fs.end());
  CHECK(std::find(fs.begin(), fs.end(), up({p, pq})) != fs.end());
  CHECK(maximal_filters(s) == std::vector<Filter>{up({p, pq})});
  // The trivial filter is every open.
  CHECK(enumerate_filters(s, false).size() == 3);

  const auto d = FiniteSpace::discrete(2);
  CHECK(enumerate_filters(d, true).size() == 3);
  CHECK(maximal_filters(d) == std::vector<Filter>{up({p, pq}), up({q, pq})});

  CHECK(validate_filter(s, up({p, pq})).ok());
  CHECK_FALSE(validate_filter(d, up({p, q, pq})).ok());
}

TEST_CASE("labelled topology counts") {
  // 1, 4, 29, 355 topologies on 1..4 labelled points.
  const std::size_t expected[] = {1, 4, 29, 355};
  for (int n = 1; n <= 4; ++n) {
    const auto all = all_topologies(n);
    CHECK(all.size() == expected[n - 1]);
    for (const auto& s : all) CHECK(validate_space(s).ok());
  }
}

TEST_CASE("dense opens belong to maximal filters") {
  for (int n = 1; n <= 3; ++n)
    for (const auto& s : all_topologies(n)) CHECK(check_dense_membership(s).ok());
}
