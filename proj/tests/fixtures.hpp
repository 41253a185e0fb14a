#pragma once

#include <memory>

#include "gsheaf/forcing.hpp"
#include "gsheaf/presheaf.hpp"

namespace fixtures {

using namespace gsheaf;

inline std::shared_ptr<const Signature> sig(const char* text) {
  return std::make_shared<const Signature>(parse_signature(text));
}

inline std::shared_ptr<const FiniteGroup> trivial_group() {
  return std::make_shared<const FiniteGroup>(FiniteGroup::trivial());
}

// Structure with one unary relation R holding exactly on `r`.
inline GStructure unary(std::shared_ptr<const Signature> s, std::shared_ptr<const FiniteGroup> g, int size,
                        std::vector<int> r, std::vector<std::string> names = {}) {
  GStructure m = GStructure::blank(std::move(s), std::move(g), size);
  if (!names.empty()) m.names = std::move(names);
  for (int x : r) m.set_relation(0, std::vector<int>{x}, true);
  return m;
}

// M_X = {0,1}, R = {1}; M_P = {*}, R = {*}; both elements restrict to *.
inline GPresheaf sierpinski_worked() {
  auto s = sig("rel R/1");
  auto g = trivial_group();
  const FiniteSpace space = FiniteSpace::sierpinski();
  std::map<PointSet, GStructure> objects;
  objects.emplace(3u, unary(s, g, 2, {1}, {"0", "1"}));
  objects.emplace(1u, unary(s, g, 1, {0}, {"*"}));
  return GPresheaf(space, std::move(objects), {{{3u, 1u}, {0, 0}}});
}

inline Formula formula(const GPresheaf& p, const char* text) { return parse_formula(text, p.signature()); }

}  // namespace fixtures
