#include "doctest.h"
#include "fixtures.hpp"
#include "gsheaf/colimit.hpp"

using namespace gsheaf;

namespace {

auto z2() { return std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(2)); }

// Z/2 acting by the swap of 0 and 1 on a two element universe.
GStructure swap_pair(std::shared_ptr<const Signature> sig) {
  GStructure m = GStructure::blank(std::move(sig), z2(), 2);
  m.action = {0, 1, 1, 0};
  return m;
}

bool has(const CheckReport& r, const std::string& kind) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

// Proper nonempty subsets of {0,1,2} as masks 1..6, S3 acting elementwise,
// R the strict inclusion.
GStructure simplex_boundary(InvarianceMode mode) {
  auto sig = fixtures::sig("rel R/2");
  auto s3 = std::make_shared<const FiniteGroup>(FiniteGroup::symmetric(3));
  GStructure m = GStructure::blank(sig, s3, 6, mode);
  for (int i = 0; i < 6; ++i) m.names[i] = std::to_string(i + 1);
  for (int g = 0; g < 6; ++g) {
    const auto perm = symmetric_permutation(3, g);
    for (int mask = 1; mask <= 6; ++mask) {
      int image = 0;
      for (int b = 0; b < 3; ++b)
        if (mask >> b & 1) image |= 1 << perm[b];
      m.action[g * 6 + (mask - 1)] = image - 1;
    }
  }
  for (int a = 1; a <= 6; ++a)
    for (int b = 1; b <= 6; ++b)
      if (a != b && (a & ~b) == 0) m.set_relation(0, std::vector<int>{a - 1, b - 1}, true);
  return m;
}

}  // namespace

TEST_CASE("group validation") {
  CHECK(validate_group(FiniteGroup::cyclic(2)).ok());
  CHECK(validate_group(FiniteGroup::trivial()).ok());
  CHECK(validate_group(FiniteGroup::symmetric(3)).ok());
  // Z/3 with a*a changed from b to e.
  const FiniteGroup broken({"e", "a", "b"}, 0, {0, 1, 2, 1, 0, 0, 2, 0, 1});
  const auto r = validate_group(broken);
  bool triple = false;
  for (const auto& v : r.violations)
    triple = triple || (v.kind == "associativity" && v.witness == Json{{"a", "a"}, {"b", "a"}, {"c", "b"}});
  CHECK(triple);
}

TEST_CASE("invariance modes on the simplex boundary") {
  CHECK(validate_structure(simplex_boundary(InvarianceMode::Diagonal)).ok());
  const auto r = validate_structure(simplex_boundary(InvarianceMode::Componentwise));
  CHECK(has(r, "relation-invariance"));

  auto sig = fixtures::sig("const c");
  GStructure m = swap_pair(sig);
  m.constants = {0};
  CHECK(has(validate_structure(m), "constants-invariance"));
}

TEST_CASE("terms and satisfaction") {
  auto sig = fixtures::sig("fun f/1 rel R/1 const c");
  GStructure m = GStructure::blank(sig, fixtures::trivial_group(), 3);
  m.constants = {2};
  m.functions[0] = {0, 1, 2};
  m.set_relation(0, std::vector<int>{1}, true);
  CHECK(eval_term(m, Term::constant(0), {}) == 2);
  CHECK(eval_term(m, Term::apply(0, {Term::var(0)}), {1}) == 1);
  CHECK(satisfies(m, parse_formula("exists v0 R(v0)", *sig), {}));
  CHECK_FALSE(satisfies(m, parse_formula("forall v0 R(v0)", *sig), {}));
  CHECK(satisfies(m, parse_formula("R(f(v0)) -> !(v0 = c)", *sig), {1}));
}

TEST_CASE("morphism validation and classification") {
  auto sig = fixtures::sig("rel R/1");
  auto triv = fixtures::trivial_group();
  const GStructure full2 = fixtures::unary(sig, triv, 2, {0, 1}, {"a", "b"});
  const GStructure full1 = fixtures::unary(sig, triv, 1, {0}, {"c"});
  const GMorphism collapse{full2, full1, {0, 0}};
  CHECK(validate_morphism(GMorphism::identity(full2)).ok());
  CHECK(validate_morphism(collapse).ok());

  const GStructure z = swap_pair(sig);
  CHECK(has(validate_morphism(GMorphism{z, z, {0, 0}}), "equivariance"));

  for (int depth = 0; depth <= 2; ++depth) {
    const auto c = classify_morphism(GMorphism::identity(full2), depth);
    CHECK(c.embedding);
    CHECK(c.submersion);
    CHECK(c.elementary_up_to_depth);
  }

  const GStructure empty2 = fixtures::unary(sig, triv, 2, {}, {"a", "b"});
  const GMorphism lossy{empty2, full1, {0, 0}};
  const auto c = classify_morphism(lossy, 0);
  CHECK_FALSE(c.saturated);
  CHECK(c.surjective);
  CHECK(preserves_formula(lossy, parse_formula("exists v0 R(v0) | R(v0)", *sig)));
  CHECK_FALSE(preserves_formula(lossy, parse_formula("!R(v0)", *sig)));
  CHECK(preserves_formula(collapse, parse_formula("forall v0 R(v0)", *sig)));
  CHECK_THROWS_AS(image_substructure(lossy), Error);
}

TEST_CASE("image and quotient") {
  auto sig = fixtures::sig("rel R/1");
  auto triv = fixtures::trivial_group();
  const GStructure ab = fixtures::unary(sig, triv, 2, {0, 1}, {"a", "b"});
  const GStructure cd = fixtures::unary(sig, triv, 2, {0}, {"c", "d"});
  const GMorphism hit_c{ab, cd, {0, 0}};
  const auto img = image_substructure(hit_c);
  CHECK(img.image.names == std::vector<std::string>{"c"});
  CHECK(img.image.holds(0, std::vector<int>{0}));
  CHECK(classify_morphism(img.inclusion, 0).embedding);

  const auto id = image_substructure(GMorphism::identity(ab));
  CHECK(find_isomorphism(id.image, ab));

  const auto q = quotient_structure(ab, hit_c);
  CHECK(q.quotient.size() == 1);
  CHECK(classify_morphism(q.projection, 0).submersion);
  CHECK(classify_morphism(q.induced_iso, 0).isomorphism);
  const auto inj = quotient_structure(ab, GMorphism::identity(ab));
  CHECK(find_isomorphism(inj.quotient, ab));
}

TEST_CASE("strong structures and orbits") {
  GStructure rel_only = swap_pair(fixtures::sig("rel R/1"));
  CHECK(check_strong(rel_only).ok());
  CHECK(orbit_structure(rel_only).size() == 1);

  GStructure unary_f = swap_pair(fixtures::sig("fun f/1"));
  unary_f.functions[0] = {0, 1};
  CHECK(check_strong(unary_f).ok());
  const GStructure o = orbit_structure(unary_f);
  CHECK(o.size() == 1);
  CHECK(o.functions[0] == std::vector<int>{0});

  // f(x, y) = x is equivariant but not coordinatewise.
  GStructure binary = swap_pair(fixtures::sig("fun f/2"));
  binary.functions[0] = {0, 1, 0, 1};
  CHECK(validate_structure(binary).ok());
  CHECK(has(check_strong(binary), "coordinatewise-equivariance"));
  CHECK_THROWS_AS(orbit_structure(binary), Error);
}

TEST_CASE("colimits of small systems") {
  auto sig = fixtures::sig("rel R/1");
  auto triv = fixtures::trivial_group();
  const GStructure m = fixtures::unary(sig, triv, 2, {1}, {"a", "b"});

  DirectedSystem one{{"0"}, {m}, {{true}}, {}};
  const Colimit c1 = colimit(one);
  CHECK(find_isomorphism(c1.structure, m));
  CHECK(c1.cocone[0].map == std::vector<int>{0, 1});

  // 0 <= 1, the arrow M_1 -> M_0 collapses both elements.
  const GStructure c = fixtures::unary(sig, triv, 1, {0}, {"c"});
  DirectedSystem chain{{"0", "1"}, {c, m}, {{true, true}, {false, true}}, {{{1, 0}, {0, 0}}}};
  CHECK(validate_system(chain).ok());
  CHECK(colimit(chain).structure.size() == 1);

  DirectedSystem ids{{"0", "1", "2"},
                     {m, m, m},
                     {{true, true, true}, {false, true, true}, {false, false, true}},
                     {{{1, 0}, {0, 1}}, {{2, 1}, {0, 1}}}};
  const Colimit c3 = colimit(ids);
  CHECK(validate_structure(c3.structure).ok());
  CHECK(find_isomorphism(c3.structure, m));
}
