#include "doctest.h"
#include "gsheaf/document.hpp"
#include "gsheaf/generator.hpp"

using namespace gsheaf;

namespace {

GeneratorLimits sample_limits() {
  GeneratorLimits l;
  l.max_points = 4;
  l.max_opens = 5;
  l.max_universe = 4;
  l.max_group_order = 6;
  return l;
}

}  // namespace

TEST_CASE("same seed gives the same document") {
  const auto l = sample_limits();
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    CHECK(dump_document(generate_random_presheaf(seed, l)) == dump_document(generate_random_presheaf(seed, l)));
  }
  CHECK(dump_document(generate_random_presheaf(1, l)) != dump_document(generate_random_presheaf(2, l)));
}

TEST_CASE("derived streams are independent of draw order") {
  Rng a(5), b(5);
  a.next();
  CHECK(a.derive(3).next() == b.derive(3).next());
  CHECK(a.derive(3).next() != a.derive(4).next());
}

TEST_CASE("group library") {
  const auto groups = group_library(6);
  CHECK(groups.size() == 8);
  for (const auto& g : groups) CHECK(validate_group(g).ok());
  CHECK(group_library(1).size() == 1);
}

TEST_CASE("generated presheaves are valid") {
  const auto l = sample_limits();
  int failures = 0, sheaves = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const GPresheaf p = generate_random_presheaf(seed, l);
    if (!validate_presheaf(p).ok()) ++failures;
    CHECK(p.space().num_points() <= 4);
    CHECK(p.space().opens().size() <= 5);
    for (PointSet u : p.opens()) CHECK(p.at(u).size() <= 4);
    if (is_sheaf(p).ok()) ++sheaves;
  }
  CHECK(failures == 0);
  MESSAGE("sheaves among samples: " << sheaves);
  CHECK(sheaves < 1000);
}

TEST_CASE("forced sheaves are sheaves and round-trip") {
  auto l = sample_limits();
  l.force_sheaf = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GPresheaf p = generate_random_presheaf(seed, l);
    CHECK(is_sheaf(p).ok());
    const std::string text = dump_document(p);
    CHECK(dump_document(parse_document(text).presheaf) == text);
  }
}

TEST_CASE("directed systems are valid and directed") {
  GeneratorLimits l;
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto shape = i % 2 ? SystemShape::Vee : SystemShape::Chain;
    const DirectedSystem sys = random_directed_system(rng, shape, 1 + i % 3, l);
    CHECK(validate_system(sys).ok());
    CHECK(sys.size() == (shape == SystemShape::Vee ? 3 : 1 + i % 3));
    CHECK(validate_structure(colimit(sys).structure).ok());
  }
}

TEST_CASE("morphisms of each kind") {
  GeneratorLimits l;
  Rng rng(3);
  int made[4] = {0, 0, 0, 0};
  for (int i = 0; i < 400; ++i) {
    const auto kind = static_cast<MorphismKind>(i % 4);
    auto m = random_morphism(rng, kind, l);
    if (!m) continue;
    ++made[i % 4];
    CHECK(validate_morphism(*m).ok());
    CHECK(validate_structure(m->source).ok());
    const MorphismClass c = classify_morphism(*m, 0);
    if (kind == MorphismKind::Submersion) CHECK(c.submersion);
    if (kind == MorphismKind::Embedding) CHECK(c.embedding);
    if (kind == MorphismKind::Isomorphism) CHECK(c.isomorphism);
  }
  for (int k : made) CHECK(k > 50);
}
