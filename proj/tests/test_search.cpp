#include "doctest.h"
#include "fixtures.hpp"
#include "gsheaf/classes.hpp"
#include "gsheaf/document.hpp"
#include "gsheaf/search.hpp"

using namespace gsheaf;

namespace {

GPresheaf mutated_worked() {
  auto s = fixtures::sig("rel R/1");
  auto g = fixtures::trivial_group();
  std::map<PointSet, GStructure> objects;
  objects.emplace(3u, fixtures::unary(s, g, 2, {1}, {"0", "1"}));
  objects.emplace(1u, fixtures::unary(s, g, 1, {}, {"*"}));
  return GPresheaf(FiniteSpace::sierpinski(), std::move(objects), {{{3u, 1u}, {0, 0}}});
}

bool has_kind(const CheckReport& r, const std::string& kind) {
  for (const auto& v : r.violations)
    if (v.kind == kind) return true;
  return false;
}

}  // namespace

TEST_CASE("every lemma holds on the worked example") {
  const GPresheaf p = fixtures::sierpinski_worked();
  LemmaOptions o;
  o.bound = {2, 1, 1};
  for (const auto& l : lemma_catalog()) {
    CAPTURE(l.id);
    const auto r = check_lemma(l.id, p, o);
    CHECK(r.ok());
    // The Sierpinski space has no cover with two members.
    if (!r.bounds.contains("skipped") && l.id != "covering") CHECK(r.cases > 0);
  }
  CHECK_THROWS_AS(check_lemma("no-such-lemma", p, o), Error);
}

TEST_CASE("a broken restriction is caught by morphism preservation") {
  const GPresheaf bad = mutated_worked();
  LemmaOptions o;
  o.bound = {1, 1, 1};
  const auto r = check_lemma("morphism-preservation", bad, o);
  REQUIRE(has_kind(r, "positive-preservation"));
  const auto& w = r.violations.front().witness;
  CHECK(w["query"]["theorem"] == "morphism-preservation");
  CHECK(w["from"] == bad.space().open_name(3u));

  Json full = w;
  full["document"] = document_to_json(bad, SemanticsMode::Local);
  CHECK(replays(full));
}

TEST_CASE("shrinking keeps the predicate and reaches a minimal instance") {
  GeneratorLimits lim;
  lim.signatures = {"rel R/1"};
  int tried = 0;
  for (int i = 0; i < 30; ++i) {
    const GPresheaf p = generate_random_presheaf(Rng(11).derive(i).next(), lim);
    auto holds_r = [](const GPresheaf& q) {
      for (PointSet u : q.opens())
        for (int x = 0; x < q.at(u).size(); ++x)
          if (q.at(u).holds(0, std::vector<int>{x})) return true;
      return false;
    };
    if (!holds_r(p)) continue;
    ++tried;
    const GPresheaf small = shrink_presheaf(p, holds_r);
    CHECK(holds_r(small));
    CHECK(validate_presheaf(small).ok());
    CHECK(small.space().num_points() == 1);
    CHECK(small.opens().size() == 1);
    // One orbit survives.
    const GStructure& m = small.at(small.opens().front());
    for (int x = 0; x < m.size(); ++x) {
      bool reached = false;
      for (int g = 0; g < small.group().order(); ++g) reached = reached || m.act(g, 0) == x;
      CHECK(reached);
    }
  }
  CHECK(tried > 10);
}

TEST_CASE("class counts match the formula counts") {
  for (const char* text : {"rel R/1", "rel R/1 rel S/2", "rel R/1 fun f/1", "rel R/1 const c", "rel R/2"}) {
    CAPTURE(text);
    GeneratorLimits lim;
    lim.signatures = {text};
    lim.max_universe = 2;
    const GPresheaf p = generate_random_presheaf(7, lim);
    for (int fv : {0, 1}) {
      ForcingTables t(p, fv + 2, {});
      SatisfactionTables s(p.at(p.space().whole()), fv + 2);
      TableClasses classes({&t}, {&s}, p.signature(), 1);
      for (int d : {0, 1, 2}) {
        if (fv == 1 && d == 2 && std::string(text) == "rel R/1 fun f/1") continue;
        std::uint64_t total = 0;
        for (const auto& c : classes.at(fv, d)) total += c.count;
        CHECK(total == count_formulas(p.signature(), {d, fv, 1}));
      }
    }
  }
}

TEST_CASE("search finds nothing on true lemmas and replays literal findings") {
  SearchOptions o;
  o.budget = 6;
  o.seed = 3;
  o.threads = 2;
  o.lemma.bound = {1, 1, 1};
  o.targets = {"fast-path", "restriction", "germ-invariance", "covering", "germ-invariance-literal"};
  const auto r = counterexample_search(o);
  CHECK(r.violations.empty());
  CHECK(r.bounds["per_target"]["fast-path"]["cases"].get<long long>() > 0);
  REQUIRE_FALSE(r.findings.empty());
  for (const auto& f : r.findings) {
    CHECK(f.kind == "germ-invariance-literal");
    CHECK(f.witness.contains("document"));
    CHECK(f.witness["verdicts"].size() == 2);
    CHECK(replays(f.witness));
  }
  const auto again = counterexample_search(o);
  CHECK(again.to_json() == r.to_json());
}
