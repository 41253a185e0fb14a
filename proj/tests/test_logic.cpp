#include "doctest.h"
#include "gsheaf/logic.hpp"
#include "gsheaf/report.hpp"

using namespace gsheaf;

namespace {

// Independent count of the enumeration by its defining recursion, for a
// relational signature with unary and binary relations only.
std::uint64_t atoms(int scope, int unary, int binary) {
  const std::uint64_t s = scope;
  return s * s + unary * s + binary * s * s;
}

std::uint64_t by_recursion(int scope, int d, int unary, int binary) {
  std::uint64_t n = atoms(scope, unary, binary);
  if (d == 0) return n;
  const std::uint64_t prev = by_recursion(scope, d - 1, unary, binary);
  const std::uint64_t inner = by_recursion(scope + 1, d - 1, unary, binary);
  return n + prev + 3 * prev * prev + 2 * inner;
}

}  // namespace

TEST_CASE("signatures") {
  const Signature one = parse_signature("rel R/1");
  CHECK(one.relations() == std::vector<Symbol>{{"R", 1}});
  CHECK(one.functions().empty());

  const Signature mixed = parse_signature("fun f/2 rel R/1 const c");
  CHECK(mixed.functions() == std::vector<Symbol>{{"f", 2}});
  CHECK(mixed.relations() == std::vector<Symbol>{{"R", 1}});
  CHECK(mixed.constants() == std::vector<std::string>{"c"});
  CHECK(parse_signature(mixed.to_text()) == mixed);

  CHECK_THROWS_AS(parse_signature("rel R/0"), Error);
  CHECK_THROWS_AS(parse_signature("rel R/1 fun R/1"), Error);
}

TEST_CASE("formula parsing") {
  const Signature sig = parse_signature("rel R/1 rel S/2");
  CHECK(parse_formula("forall v0 (v0 = v0)", sig) == Formula::forall(0, Formula::eq(Term::var(0), Term::var(0))));
  CHECK(parse_formula("exists v1 R(v1)", sig) == Formula::exists(1, Formula::rel(0, {Term::var(1)})));
  CHECK_THROWS_AS(parse_formula("R(v0, v1)", sig), Error);
  CHECK_THROWS_AS(parse_formula("T(v0)", sig), Error);
  CHECK_THROWS_AS(parse_formula("R(v0) &", sig), ParseError);

  for (const char* text : {"!!R(v0)", "R(v0) -> v0 = v0", "exists v1 (S(v0, v1) | !R(v1))", "R(v0) & R(v0) | R(v0)"}) {
    const Formula phi = parse_formula(text, sig);
    CHECK(parse_formula(to_string(phi, sig), sig) == phi);
  }
}

TEST_CASE("free variables") {
  CHECK(free_variables(Formula::forall(0, Formula::eq(Term::var(0), Term::var(0)))).empty());
  CHECK(free_variables(Formula::rel(0, {Term::var(2)})) == std::set<int>{2});
  CHECK(free_variables(Formula::exists(1, Formula::rel(1, {Term::var(0), Term::var(1)}))) == std::set<int>{0});
}

TEST_CASE("double negation translation") {
  const Signature sig = parse_signature("rel R/1");
  const Formula r0 = parse_formula("R(v0)", sig);
  const Formula r1 = parse_formula("R(v1)", sig);
  CHECK(godel_translate(r0) == Formula::neg(Formula::neg(r0)));

  const Formula a = godel_translate(r0), b = godel_translate(r1);
  CHECK(godel_translate(Formula::disj(r0, r1)) == Formula::neg(Formula::conj(Formula::neg(a), Formula::neg(b))));
  CHECK(godel_translate(Formula::exists(0, r0)) == Formula::neg(Formula::forall(0, Formula::neg(a))));
  CHECK(godel_translate(Formula::implies(r0, r1)) == Formula::implies(a, b));

  for (const auto& phi : enumerate_formulas(sig, {2, 2, 1}))
    CHECK(free_variables(godel_translate(phi)) == free_variables(phi));
}

TEST_CASE("syntactic classes") {
  const Signature sig = parse_signature("rel R/1");
  CHECK(is_positive(parse_formula("exists v0 R(v0)", sig)));
  CHECK_FALSE(is_positive(parse_formula("!R(v0)", sig)));
  CHECK_FALSE(is_positive(parse_formula("R(v0) -> v0 = v0", sig)));
  CHECK_FALSE(is_positive(parse_formula("forall v0 R(v0)", sig)));
  CHECK(is_negation_free(parse_formula("forall v0 R(v0)", sig)));
  CHECK(is_quantifier_free(parse_formula("!R(v0) & v0 = v0", sig)));
}

TEST_CASE("formula enumeration") {
  const Signature sig = parse_signature("rel R/1");
  const auto d0 = enumerate_formulas(sig, {0, 1, 1});
  CHECK(d0.size() == 2);
  CHECK(std::find(d0.begin(), d0.end(), parse_formula("R(v0)", sig)) != d0.end());
  CHECK(std::find(d0.begin(), d0.end(), parse_formula("v0 = v0", sig)) != d0.end());

  const auto d1 = enumerate_formulas(sig, {1, 1, 1});
  CHECK(d1.size() == 28);
  for (const char* text : {"!R(v0)", "R(v0) & R(v0)", "exists v1 R(v1)"})
    CHECK(std::find(d1.begin(), d1.end(), parse_formula(text, sig)) != d1.end());

  CHECK(count_formulas(sig, {0, 0, 1}) == 0);
  const auto sentences = enumerate_formulas(sig, {1, 0, 1});
  CHECK_FALSE(sentences.empty());
  for (const auto& phi : sentences) {
    CHECK(free_variables(phi).empty());
    CHECK((phi.op() == Op::Exists || phi.op() == Op::Forall));
  }

  for (const char* text : {"rel R/1", "rel R/2", "rel R/1 rel S/2"}) {
    const Signature s = parse_signature(text);
    int unary = 0, binary = 0;
    for (const auto& r : s.relations()) (r.arity == 1 ? unary : binary)++;
    for (int fv = 0; fv <= 2; ++fv)
      for (int d = 0; d <= 2; ++d) {
        CAPTURE(text);
        CAPTURE(fv);
        CAPTURE(d);
        CHECK(count_formulas(s, {d, fv, 1}) == by_recursion(fv, d, unary, binary));
      }
  }
  CHECK(count_formulas(sig, {2, 1, 1}) == 2670);
  CHECK(enumerate_formulas(sig, {2, 1, 1}).size() == 2670);
}

TEST_CASE("term enumeration") {
  const Signature sig = parse_signature("fun f/1 rel R/1");
  // No variables and no constants: nothing to apply f to.
  CHECK(enumerate_terms(sig, 0, 3).empty());
  CHECK(enumerate_terms(sig, 1, 0).size() == 1);
  CHECK(enumerate_terms(sig, 1, 2).size() == 3);  // v0, f(v0), f(f(v0))
  const Signature with_c = parse_signature("fun f/1 const c");
  CHECK(enumerate_terms(with_c, 0, 1).size() == 2);  // c, f(c)
}
