#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "gsheaf/structure.hpp"

namespace gsheaf {

namespace {

std::vector<std::string> names_of(const GStructure& m, std::span<const int> xs) {
  std::vector<std::string> out;
  for (int x : xs) out.push_back(m.names.at(x));
  return out;
}

// Calls fn on every assignment of the given variables into a universe of size n.
template <typename Fn>
bool all_assignments(const std::set<int>& vars, int span, int n, Fn&& fn) {
  std::vector<int> vs(vars.begin(), vars.end());
  Assignment a(span, -1);
  std::vector<int> digits(vs.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < vs.size(); ++i) a[vs[i]] = digits[i];
    if (!fn(a)) return false;
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == n) digits[i++] = 0;
    if (i == digits.size()) return true;
  }
}

Assignment push(const GMorphism& a, const Assignment& s) {
  Assignment t = s;
  for (int& x : t) {
    if (x >= 0) x = a.map[x];
  }
  return t;
}

bool relation_preimage_contained(const GMorphism& a) {
  const GStructure& M = a.source;
  const GStructure& N = a.target;
  for (std::size_t ri = 0; ri < M.relations.size(); ++ri) {
    const int arity = M.sig->relations()[ri].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < M.relations[ri].size(); ++code) {
      decode_tuple(code, M.size(), xs);
      for (int i = 0; i < arity; ++i) ys[i] = a.map[xs[i]];
      if (N.holds(static_cast<int>(ri), ys) && !M.relations[ri][code]) return false;
    }
  }
  return true;
}

}  // namespace

GMorphism GMorphism::identity(const GStructure& m) {
  std::vector<int> map(m.size());
  std::iota(map.begin(), map.end(), 0);
  return {m, m, std::move(map)};
}

GMorphism compose(const GMorphism& g, const GMorphism& f) {
  if (f.target.size() != g.source.size()) throw Error("cannot compose morphisms with mismatched universes");
  std::vector<int> map(f.map.size());
  for (std::size_t x = 0; x < map.size(); ++x) map[x] = g.map[f.map[x]];
  return {f.source, g.target, std::move(map)};
}

CheckReport validate_morphism(const GMorphism& a) {
  CheckReport r;
  r.check = "morphism";
  const GStructure& M = a.source;
  const GStructure& N = a.target;
  if (!(*M.sig == *N.sig) || !(*M.group == *N.group)) {
    r.add("signature", "source and target differ in signature or group");
    return r;
  }
  if (static_cast<int>(a.map.size()) != M.size() ||
      std::any_of(a.map.begin(), a.map.end(), [&](int y) { return y < 0 || y >= N.size(); })) {
    r.add("totality", "map is not a total function between the universes");
    return r;
  }
  const Signature& sig = *M.sig;
  for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
    const int arity = sig.functions()[fi].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < M.functions[fi].size(); ++code) {
      ++r.cases;
      decode_tuple(code, M.size(), xs);
      for (int i = 0; i < arity; ++i) ys[i] = a.map[xs[i]];
      if (a.map[M.apply(static_cast<int>(fi), xs)] != N.apply(static_cast<int>(fi), ys)) {
        r.add("functions", "a(f(x)) != f(a(x)) for " + sig.functions()[fi].name,
              {{"function", sig.functions()[fi].name}, {"args", names_of(M, xs)}});
      }
    }
  }
  for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
    const int arity = sig.relations()[ri].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < M.relations[ri].size(); ++code) {
      if (!M.relations[ri][code]) continue;
      ++r.cases;
      decode_tuple(code, M.size(), xs);
      for (int i = 0; i < arity; ++i) ys[i] = a.map[xs[i]];
      if (!N.holds(static_cast<int>(ri), ys)) {
        r.add("relations", "image of a tuple of " + sig.relations()[ri].name + " is not in the target relation",
              {{"relation", sig.relations()[ri].name}, {"tuple", names_of(M, xs)}});
      }
    }
  }
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    ++r.cases;
    if (a.map[M.constants[c]] != N.constants[c]) {
      r.add("constants", "constant " + sig.constants()[c] + " not preserved", {{"constant", sig.constants()[c]}});
    }
  }
  const FiniteGroup& G = *M.group;
  for (int g = 0; g < G.order(); ++g) {
    for (int x = 0; x < M.size(); ++x) {
      ++r.cases;
      if (a.map[M.act(g, x)] != N.act(g, a.map[x])) {
        r.add("equivariance", "a(g.x) != g.a(x)", {{"g", G.name(g)}, {"x", M.names[x]}});
      }
    }
  }
  return r;
}

bool preserves_formula(const GMorphism& a, const Formula& phi) {
  return all_assignments(free_variables(phi), phi.variable_span(), a.source.size(), [&](const Assignment& s) {
    return !satisfies(a.source, phi, s) || satisfies(a.target, phi, push(a, s));
  });
}

bool reflects_and_preserves(const GMorphism& a, const Formula& phi) {
  return all_assignments(free_variables(phi), phi.variable_span(), a.source.size(), [&](const Assignment& s) {
    return satisfies(a.source, phi, s) == satisfies(a.target, phi, push(a, s));
  });
}

MorphismClass classify_morphism(const GMorphism& a, int depth) {
  MorphismClass c;
  const int m = a.source.size();
  const int n = a.target.size();
  std::vector<int> hits(n, 0);
  for (int y : a.map) ++hits[y];
  c.injective = std::all_of(hits.begin(), hits.end(), [](int h) { return h <= 1; });
  c.surjective = std::all_of(hits.begin(), hits.end(), [](int h) { return h >= 1; });
  c.saturated = relation_preimage_contained(a);
  c.embedding = c.injective && c.saturated;
  c.submersion = c.surjective && c.saturated;
  // A bijective morphism whose inverse preserves relations; functions and
  // constants are then automatic.
  c.isomorphism = c.injective && c.surjective && c.saturated && m == n;
  c.elementary_depth = depth;
  if (c.embedding && depth >= 0) {
    c.elementary_up_to_depth = true;
    const EnumerationLimits limits{depth, 2, 1};
    for (const auto& phi : enumerate_formulas(*a.source.sig, limits)) {
      if (!reflects_and_preserves(a, phi)) {
        c.elementary_up_to_depth = false;
        break;
      }
    }
  }
  return c;
}

ImageResult image_substructure(const GMorphism& a) {
  if (!relation_preimage_contained(a)) throw Error("image substructure requires a saturated morphism");
  const GStructure& N = a.target;
  std::vector<int> members(a.map.begin(), a.map.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<int> slot(N.size(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) slot[members[i]] = static_cast<int>(i);

  const int k = static_cast<int>(members.size());
  GStructure J = GStructure::blank(N.sig, N.group, k, N.mode);
  for (int i = 0; i < k; ++i) J.names[i] = N.names[members[i]];
  for (std::size_t fi = 0; fi < J.functions.size(); ++fi) {
    const int arity = N.sig->functions()[fi].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < J.functions[fi].size(); ++code) {
      decode_tuple(code, k, xs);
      for (int i = 0; i < arity; ++i) ys[i] = members[xs[i]];
      J.functions[fi][code] = slot[N.apply(static_cast<int>(fi), ys)];
    }
  }
  for (std::size_t ri = 0; ri < J.relations.size(); ++ri) {
    const int arity = N.sig->relations()[ri].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < J.relations[ri].size(); ++code) {
      decode_tuple(code, k, xs);
      for (int i = 0; i < arity; ++i) ys[i] = members[xs[i]];
      J.relations[ri][code] = N.holds(static_cast<int>(ri), ys);
    }
  }
  for (std::size_t c = 0; c < J.constants.size(); ++c) J.constants[c] = slot[N.constants[c]];
  for (int g = 0; g < N.group->order(); ++g) {
    for (int i = 0; i < k; ++i) J.action[g * k + i] = slot[N.act(g, members[i])];
  }
  std::vector<int> co(a.map.size());
  for (std::size_t x = 0; x < co.size(); ++x) co[x] = slot[a.map[x]];
  GMorphism corestriction{a.source, J, std::move(co)};
  GMorphism inclusion{J, N, members};
  return {std::move(J), std::move(corestriction), std::move(inclusion)};
}

QuotientResult quotient_structure(const GStructure& m, const GMorphism& a) {
  if (a.source.size() != m.size()) throw Error("morphism does not start at the given structure");
  ImageResult img = image_substructure(a);
  // Classes numbered by first occurrence.
  std::map<int, int> class_of_image;
  std::vector<int> cls(m.size());
  std::vector<int> rep;
  for (int x = 0; x < m.size(); ++x) {
    auto [it, fresh] = class_of_image.emplace(a.map[x], static_cast<int>(rep.size()));
    if (fresh) rep.push_back(x);
    cls[x] = it->second;
  }
  const int k = static_cast<int>(rep.size());
  GStructure Q = GStructure::blank(m.sig, m.group, k, m.mode);
  for (int i = 0; i < k; ++i) Q.names[i] = "[" + m.names[rep[i]] + "]";
  for (std::size_t fi = 0; fi < Q.functions.size(); ++fi) {
    const int arity = m.sig->functions()[fi].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < Q.functions[fi].size(); ++code) {
      decode_tuple(code, k, xs);
      for (int i = 0; i < arity; ++i) ys[i] = rep[xs[i]];
      Q.functions[fi][code] = cls[m.apply(static_cast<int>(fi), ys)];
    }
  }
  for (std::size_t ri = 0; ri < Q.relations.size(); ++ri) {
    const int arity = m.sig->relations()[ri].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < m.relations[ri].size(); ++code) {
      if (!m.relations[ri][code]) continue;
      decode_tuple(code, m.size(), xs);
      for (int i = 0; i < arity; ++i) ys[i] = cls[xs[i]];
      Q.set_relation(static_cast<int>(ri), ys, true);
    }
  }
  for (std::size_t c = 0; c < Q.constants.size(); ++c) Q.constants[c] = cls[m.constants[c]];
  for (int g = 0; g < m.group->order(); ++g) {
    for (int i = 0; i < k; ++i) Q.action[g * k + i] = cls[m.act(g, rep[i])];
  }
  std::vector<int> induced(k);
  for (int i = 0; i < k; ++i) induced[i] = img.corestriction.map[rep[i]];
  GMorphism projection{m, Q, cls};
  GMorphism iso{Q, img.image, std::move(induced)};
  return {std::move(Q), std::move(projection), std::move(iso)};
}

CheckReport check_strong(const GStructure& m) {
  CheckReport r;
  r.check = "strong-structure";
  const FiniteGroup& G = *m.group;
  for (std::size_t fi = 0; fi < m.functions.size(); ++fi) {
    const int arity = m.sig->functions()[fi].arity;
    std::vector<int> xs(arity), gs(arity), ys(arity);
    const std::size_t gcount = power(G.order(), arity);
    for (std::size_t code = 0; code < m.functions[fi].size(); ++code) {
      decode_tuple(code, m.size(), xs);
      for (std::size_t gc = 0; gc < gcount; ++gc) {
        ++r.cases;
        decode_tuple(gc, G.order(), gs);
        int prod = G.identity();
        for (int i = 0; i < arity; ++i) {
          ys[i] = m.act(gs[i], xs[i]);
          prod = G.mul(prod, gs[i]);
        }
        if (m.apply(static_cast<int>(fi), ys) != m.act(prod, m.apply(static_cast<int>(fi), xs))) {
          std::vector<std::string> gnames;
          for (int g : gs) gnames.push_back(G.name(g));
          r.add("coordinatewise-equivariance", "f(g1x1,...,gnxn) != g1...gn f(x1,...,xn)",
                {{"function", m.sig->functions()[fi].name}, {"g", gnames}, {"x", names_of(m, xs)}});
          if (r.violations.size() > 16) return r;
        }
      }
    }
  }
  return r;
}

std::vector<int> orbit_index(const GStructure& m) {
  std::vector<int> orbit(m.size(), -1);
  int next = 0;
  for (int x = 0; x < m.size(); ++x) {
    if (orbit[x] >= 0) continue;
    for (int g = 0; g < m.group->order(); ++g) orbit[m.act(g, x)] = next;
    ++next;
  }
  return orbit;
}

GStructure orbit_structure(const GStructure& m) {
  CheckReport strong = check_strong(m);
  if (!strong.ok()) {
    throw Error("structure is not strong: " + strong.violations.front().witness.dump());
  }
  const auto orbit = orbit_index(m);
  const int k = *std::max_element(orbit.begin(), orbit.end()) + 1;
  std::vector<int> rep(k, -1);
  for (int x = 0; x < m.size(); ++x) {
    if (rep[orbit[x]] < 0) rep[orbit[x]] = x;
  }
  auto trivial = std::make_shared<const FiniteGroup>(FiniteGroup::trivial());
  GStructure O = GStructure::blank(m.sig, trivial, k, m.mode);
  for (int i = 0; i < k; ++i) {
    std::string s = "<";
    for (int x = 0; x < m.size(); ++x) {
      if (orbit[x] == i) s += (s.size() > 1 ? "," : "") + m.names[x];
    }
    O.names[i] = s + ">";
  }
  for (std::size_t fi = 0; fi < O.functions.size(); ++fi) {
    const int arity = m.sig->functions()[fi].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < O.functions[fi].size(); ++code) {
      decode_tuple(code, k, xs);
      for (int i = 0; i < arity; ++i) ys[i] = rep[xs[i]];
      O.functions[fi][code] = orbit[m.apply(static_cast<int>(fi), ys)];
    }
  }
  for (std::size_t ri = 0; ri < O.relations.size(); ++ri) {
    const int arity = m.sig->relations()[ri].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < m.relations[ri].size(); ++code) {
      if (!m.relations[ri][code]) continue;
      decode_tuple(code, m.size(), xs);
      for (int i = 0; i < arity; ++i) ys[i] = orbit[xs[i]];
      O.set_relation(static_cast<int>(ri), ys, true);
    }
  }
  for (std::size_t c = 0; c < O.constants.size(); ++c) O.constants[c] = orbit[m.constants[c]];
  return O;
}

namespace {

// Isomorphism-invariant fingerprint of an element, used to prune the search.
std::vector<int> color(const GStructure& m, int x, bool equivariant) {
  std::vector<int> c;
  for (std::size_t ri = 0; ri < m.relations.size(); ++ri) {
    const int arity = m.sig->relations()[ri].arity;
    std::vector<int> xs(arity, x);
    c.push_back(m.holds(static_cast<int>(ri), xs));
    int count = 0;
    std::vector<int> ys(arity);
    for (std::size_t code = 0; code < m.relations[ri].size(); ++code) {
      if (!m.relations[ri][code]) continue;
      decode_tuple(code, m.size(), ys);
      count += static_cast<int>(std::count(ys.begin(), ys.end(), x));
    }
    c.push_back(count);
  }
  for (int k : m.constants) c.push_back(k == x);
  if (equivariant) {
    for (int g = 0; g < m.group->order(); ++g) c.push_back(m.act(g, x) == x);
  }
  return c;
}

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const GStructure& a, const GStructure& b, bool equivariant) {
  if (a.size() != b.size() || !(*a.sig == *b.sig)) return std::nullopt;
  if (equivariant && !(*a.group == *b.group)) return std::nullopt;
  const int n = a.size();
  std::vector<std::vector<int>> ca(n), cb(n);
  for (int x = 0; x < n; ++x) {
    ca[x] = color(a, x, equivariant);
    cb[x] = color(b, x, equivariant);
  }
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  auto check = [&]() {
    GMorphism f{a, b, map};
    if (equivariant) {
      if (!validate_morphism(f).ok()) return false;
    } else {
      GStructure a0 = a, b0 = b;
      auto trivial = std::make_shared<const FiniteGroup>(FiniteGroup::trivial());
      a0.group = b0.group = trivial;
      a0.action.assign(n, 0);
      b0.action.assign(n, 0);
      std::iota(a0.action.begin(), a0.action.end(), 0);
      std::iota(b0.action.begin(), b0.action.end(), 0);
      f = {a0, b0, map};
      if (!validate_morphism(f).ok()) return false;
    }
    return classify_morphism(f, -1).isomorphism;
  };
  std::function<bool(int)> go = [&](int x) {
    if (x == n) return check();
    for (int y = 0; y < n; ++y) {
      if (used[y] || ca[x] != cb[y]) continue;
      used[y] = true;
      map[x] = y;
      if (go(x + 1)) return true;
      used[y] = false;
    }
    map[x] = -1;
    return false;
  };
  if (go(0)) return map;
  return std::nullopt;
}

}  // namespace gsheaf
