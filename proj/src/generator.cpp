#include "gsheaf/generator.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace gsheaf {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Mask = std::uint32_t;

Mask stabilizer(const GStructure& m, int x) {
  Mask s = 0;
  for (int g = 0; g < m.group->order(); ++g)
    if (m.act(g, x) == x) s |= 1u << g;
  return s;
}

std::vector<std::vector<int>> orbits(const GStructure& m) {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(m.size(), false);
  for (int x = 0; x < m.size(); ++x) {
    if (seen[x]) continue;
    std::vector<int> o;
    for (int g = 0; g < m.group->order(); ++g) {
      const int y = m.act(g, x);
      if (!seen[y]) {
        seen[y] = true;
        o.push_back(y);
      }
    }
    std::sort(o.begin(), o.end());
    out.push_back(std::move(o));
  }
  return out;
}

void number_names(GStructure& m) {
  for (int i = 0; i < m.size(); ++i) m.names[i] = std::to_string(i);
}

}  // namespace

GStructure induced_substructure(const GStructure& b, const std::vector<int>& elems) {
  GStructure a = GStructure::blank(b.sig, b.group, static_cast<int>(elems.size()), b.mode);
  std::vector<int> inv(b.size(), -1);
  for (int i = 0; i < a.size(); ++i) {
    inv[elems[i]] = i;
    a.names[i] = b.names[elems[i]];
  }
  for (int g = 0; g < b.group->order(); ++g)
    for (int i = 0; i < a.size(); ++i) a.action[g * a.size() + i] = inv.at(b.act(g, elems[i]));
  auto lift_tuple = [&](std::size_t code, int k) {
    std::vector<int> t(k);
    decode_tuple(code, a.size(), t);
    for (auto& x : t) x = elems[x];
    return t;
  };
  const auto& sig = *b.sig;
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const int k = sig.functions()[f].arity;
    for (std::size_t code = 0; code < a.functions[f].size(); ++code)
      a.functions[f][code] = inv.at(b.apply(static_cast<int>(f), lift_tuple(code, k)));
  }
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const int k = sig.relations()[r].arity;
    for (std::size_t code = 0; code < a.relations[r].size(); ++code)
      a.relations[r][code] = b.holds(static_cast<int>(r), lift_tuple(code, k)) ? 1 : 0;
  }
  for (std::size_t c = 0; c < a.constants.size(); ++c) a.constants[c] = inv.at(b.constants[c]);
  return a;
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix(seed)) {}

std::uint64_t Rng::next() { return engine_(); }

int Rng::below(int n) {
  if (n <= 0) throw Error("Rng::below needs a positive bound");
  return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
}

bool Rng::coin(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

Rng Rng::derive(std::uint64_t index) const { return Rng(splitmix(seed_ ^ splitmix(index + 1))); }

std::vector<FiniteGroup> group_library(int max_order) {
  std::vector<FiniteGroup> all{FiniteGroup::trivial()};
  for (int n = 2; n <= 6; ++n) all.push_back(FiniteGroup::cyclic(n));
  all.push_back(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
  all.push_back(FiniteGroup::symmetric(3));
  std::vector<FiniteGroup> out;
  for (auto& g : all)
    if (g.order() <= max_order) out.push_back(std::move(g));
  return out;
}

FiniteSpace random_space(Rng& rng, int max_points, int max_opens) {
  static const char* names[] = {"p", "q", "r", "s"};
  for (;;) {
    const int n = 1 + rng.below(max_points);
    std::vector<std::string> points;
    for (int i = 0; i < n; ++i) points.push_back(i < 4 ? names[i] : "x" + std::to_string(i));
    const PointSet whole = (1u << n) - 1;
    std::vector<PointSet> family;
    const int k = rng.below(n + 1);
    for (int i = 0; i < k && whole > 1; ++i) family.push_back(1 + rng.below(static_cast<int>(whole)));
    FiniteSpace s = FiniteSpace::completed(points, family);
    if (static_cast<int>(s.opens().size()) <= max_opens) return s;
  }
}

std::optional<Lift> build_over(Rng& rng, const GStructure& base, int max_size, bool cover) {
  const FiniteGroup& g = *base.group;
  const Mask all = g.order() == 32 ? ~0u : (1u << g.order()) - 1;
  std::vector<Mask> subgroups;
  for (const auto& h : g.subgroups()) {
    Mask m = 0;
    for (int x : h) m |= 1u << x;
    subgroups.push_back(m);
  }
  std::vector<Mask> base_stab(base.size());
  for (int y = 0; y < base.size(); ++y) base_stab[y] = stabilizer(base, y);

  struct Orbit {
    Mask h;
    int over;
  };
  std::vector<Orbit> plan;
  int total = 0;
  auto orbit_size = [&](Mask h) { return g.order() / popcount(h); };
  auto random_subgroup = [&](int y, int budget) -> std::optional<Mask> {
    std::vector<Mask> fits;
    for (Mask h : subgroups)
      if (subset(h, base_stab[y]) && orbit_size(h) <= budget) fits.push_back(h);
    if (fits.empty()) return std::nullopt;
    return rng.pick(fits);
  };
  auto has_fixed_over = [&](int y) {
    return std::any_of(plan.begin(), plan.end(), [&](const Orbit& o) { return o.h == all && o.over == y; });
  };

  for (int c : base.constants) {
    if (has_fixed_over(c)) continue;
    plan.push_back({all, c});
    total += 1;
  }
  if (cover) {
    for (const auto& o : orbits(base)) {
      const int y = o.front();
      bool covered = false;
      for (const auto& p : plan)
        for (int z : o) covered = covered || p.over == z;
      if (covered) continue;
      auto h = random_subgroup(y, max_size - total);
      if (!h) return std::nullopt;
      plan.push_back({*h, y});
      total += orbit_size(*h);
    }
  }
  const int extra = rng.below(max_size + 1);
  for (int i = 0; i < extra && total < max_size; ++i) {
    const int y = rng.below(base.size());
    auto h = random_subgroup(y, max_size - total);
    if (!h) continue;
    plan.push_back({*h, y});
    total += orbit_size(*h);
  }
  if (plan.empty()) {
    for (int y = 0; y < base.size() && plan.empty(); ++y)
      if (orbit_size(base_stab[y]) <= max_size) {
        plan.push_back({base_stab[y], y});
        total += orbit_size(base_stab[y]);
      }
  }
  if (plan.empty() || total > max_size) return std::nullopt;

  // Elements are cosets aH, one block per planned orbit.
  std::vector<int> orbit_of, rep;
  std::vector<Mask> coset;
  std::vector<int> start;
  for (std::size_t o = 0; o < plan.size(); ++o) {
    start.push_back(static_cast<int>(rep.size()));
    std::vector<Mask> seen;
    for (int a = 0; a < g.order(); ++a) {
      Mask c = 0;
      for (int h = 0; h < g.order(); ++h)
        if (plan[o].h >> h & 1u) c |= 1u << g.mul(a, h);
      if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
      seen.push_back(c);
      orbit_of.push_back(static_cast<int>(o));
      rep.push_back(a);
      coset.push_back(c);
    }
  }
  const int n = static_cast<int>(rep.size());
  Lift out{GStructure::blank(base.sig, base.group, n, base.mode), std::vector<int>(n)};
  GStructure& a = out.structure;
  number_names(a);
  for (int x = 0; x < n; ++x) out.projection[x] = base.act(rep[x], plan[orbit_of[x]].over);
  for (int h = 0; h < g.order(); ++h)
    for (int x = 0; x < n; ++x) {
      const int target = g.mul(h, rep[x]);
      int y = start[orbit_of[x]];
      while (!(coset[y] >> target & 1u)) ++y;
      a.action[h * n + x] = y;
    }
  std::vector<Mask> stab(n);
  for (int x = 0; x < n; ++x) stab[x] = stabilizer(a, x);

  const auto& sig = *base.sig;
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const int k = sig.functions()[f].arity;
    auto& table = a.functions[f];
    std::vector<bool> done(table.size(), false);
    std::vector<int> t(k), below(k), moved(k);
    for (std::size_t code = 0; code < table.size(); ++code) {
      if (done[code]) continue;
      decode_tuple(code, n, t);
      Mask s = all;
      for (int i = 0; i < k; ++i) {
        s &= stab[t[i]];
        below[i] = out.projection[t[i]];
      }
      const int y = base.apply(static_cast<int>(f), below);
      std::vector<int> candidates;
      for (int z = 0; z < n; ++z)
        if (out.projection[z] == y && subset(s, stab[z])) candidates.push_back(z);
      if (candidates.empty()) return std::nullopt;
      const int value = rng.pick(candidates);
      for (int h = 0; h < g.order(); ++h) {
        for (int i = 0; i < k; ++i) moved[i] = a.act(h, t[i]);
        const std::size_t mc = encode_tuple(moved, n);
        table[mc] = a.act(h, value);
        done[mc] = true;
      }
    }
  }
  for (std::size_t c = 0; c < a.constants.size(); ++c) {
    int x = 0;
    while (!(stab[x] == all && out.projection[x] == base.constants[c])) ++x;
    a.constants[c] = x;
  }
  return out;
}

void assign_relations(Rng& rng, GStructure& m, const std::vector<std::vector<std::uint8_t>>& allowed,
                      double density) {
  const int n = m.size();
  const int order = m.group->order();
  const auto orbs = orbits(m);
  std::vector<int> orbit_id(n);
  for (std::size_t o = 0; o < orbs.size(); ++o)
    for (int x : orbs[o]) orbit_id[x] = static_cast<int>(o);

  for (std::size_t r = 0; r < m.relations.size(); ++r) {
    const int k = m.sig->relations()[r].arity;
    auto& table = m.relations[r];
    std::fill(table.begin(), table.end(), 0);
    std::vector<bool> seen(table.size(), false);
    std::vector<int> t(k), u(k);
    for (std::size_t code = 0; code < table.size(); ++code) {
      if (seen[code] || !allowed[r][code]) continue;
      decode_tuple(code, n, t);
      std::vector<std::size_t> block;
      if (m.mode == InvarianceMode::Diagonal) {
        for (int g = 0; g < order; ++g) {
          for (int i = 0; i < k; ++i) u[i] = m.act(g, t[i]);
          block.push_back(encode_tuple(u, n));
        }
      } else {
        std::vector<int> pos(k, 0);
        for (;;) {
          for (int i = 0; i < k; ++i) u[i] = orbs[orbit_id[t[i]]][pos[i]];
          block.push_back(encode_tuple(u, n));
          int i = 0;
          while (i < k && ++pos[i] == static_cast<int>(orbs[orbit_id[t[i]]].size())) pos[i++] = 0;
          if (i == k) break;
        }
      }
      bool ok = true;
      for (auto b : block) {
        seen[b] = true;
        ok = ok && allowed[r][b];
      }
      if (ok && rng.coin(density))
        for (auto b : block) table[b] = 1;
    }
  }
}

std::optional<GStructure> random_structure(Rng& rng, std::shared_ptr<const Signature> sig,
                                           std::shared_ptr<const FiniteGroup> group, InvarianceMode mode,
                                           int max_size, double density) {
  const GStructure terminal = GStructure::blank(sig, group, 1, mode);
  auto lift = build_over(rng, terminal, max_size);
  if (!lift) return std::nullopt;
  std::vector<std::vector<std::uint8_t>> allowed;
  for (const auto& r : lift->structure.relations) allowed.emplace_back(r.size(), 1);
  assign_relations(rng, lift->structure, allowed, density);
  return std::move(lift->structure);
}

std::optional<GPresheaf> random_sheaf(Rng& rng, std::shared_ptr<const Signature> sig,
                                      std::shared_ptr<const FiniteGroup> group, const FiniteSpace& space,
                                      InvarianceMode mode, int max_universe, double density) {
  // Point classes share a minimal neighbourhood; ordered so lower classes come first.
  std::vector<PointSet> nbhd;
  for (int x = 0; x < space.num_points(); ++x) {
    const PointSet u = min_open_nbhd(space, x);
    if (std::find(nbhd.begin(), nbhd.end(), u) == nbhd.end()) nbhd.push_back(u);
  }
  std::sort(nbhd.begin(), nbhd.end(), [](PointSet a, PointSet b) {
    return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
  });
  const int nc = static_cast<int>(nbhd.size());
  std::vector<GStructure> cls;
  std::vector<std::vector<std::vector<int>>> fam;  // fam[c][x][d]

  using Family = std::vector<int>;
  auto families = [&](PointSet u) {
    std::vector<Family> out;
    Family cur(nc, -1);
    auto rec = [&](auto&& self, int c) -> void {
      if (c == static_cast<int>(cls.size())) {
        out.push_back(cur);
        return;
      }
      if (!subset(nbhd[c], u)) return self(self, c + 1);
      for (int x = 0; x < cls[c].size(); ++x) {
        bool ok = true;
        for (int d = 0; d < c && ok; ++d)
          if (fam[c][x][d] >= 0) ok = cur[d] == fam[c][x][d];
        if (!ok) continue;
        cur[c] = x;
        self(self, c + 1);
      }
      cur[c] = -1;
    };
    rec(rec, 0);
    return out;
  };
  auto family_structure = [&](const std::vector<Family>& fams) {
    const int n = static_cast<int>(fams.size());
    GStructure m = GStructure::blank(sig, group, n, mode);
    number_names(m);
    std::map<Family, int> index;
    for (int i = 0; i < n; ++i) index[fams[i]] = i;
    for (int g = 0; g < group->order(); ++g)
      for (int i = 0; i < n; ++i) {
        Family f = fams[i];
        for (int c = 0; c < nc; ++c)
          if (f[c] >= 0) f[c] = cls[c].act(g, f[c]);
        m.action[g * n + i] = index.at(f);
      }
    for (std::size_t f = 0; f < sig->functions().size(); ++f) {
      const int k = sig->functions()[f].arity;
      std::vector<int> t(k), comp(k);
      for (std::size_t code = 0; code < m.functions[f].size(); ++code) {
        decode_tuple(code, n, t);
        Family v(nc, -1);
        for (int c = 0; c < nc; ++c) {
          if (fams[t.empty() ? 0 : t[0]][c] < 0) continue;
          for (int i = 0; i < k; ++i) comp[i] = fams[t[i]][c];
          v[c] = cls[c].apply(static_cast<int>(f), comp);
        }
        m.functions[f][code] = index.at(v);
      }
    }
    for (std::size_t k = 0; k < m.constants.size(); ++k) {
      Family v(nc, -1);
      for (int c = 0; c < nc; ++c)
        if (!fams.empty() && fams[0][c] >= 0) v[c] = cls[c].constants[k];
      m.constants[k] = index.at(v);
    }
    return m;
  };

  for (int c = 0; c < nc; ++c) {
    PointSet own = 0;
    for (int x = 0; x < space.num_points(); ++x)
      if (min_open_nbhd(space, x) == nbhd[c]) own |= 1u << x;
    const auto lower = families(nbhd[c] & ~own);
    const GStructure base = family_structure(lower);
    auto lift = build_over(rng, base, max_universe);
    if (!lift) return std::nullopt;
    std::vector<std::vector<int>> f(lift->structure.size());
    for (int x = 0; x < lift->structure.size(); ++x) {
      f[x] = lower[lift->projection[x]];
      f[x][c] = x;
    }
    cls.push_back(std::move(lift->structure));
    fam.push_back(std::move(f));
  }

  const auto opens = space.nonempty_opens();
  std::map<PointSet, std::vector<Family>> fams;
  std::map<PointSet, GStructure> objects;
  for (PointSet u : opens) {
    auto fs = families(u);
    if (fs.empty() || static_cast<int>(fs.size()) > max_universe) return std::nullopt;
    objects.emplace(u, family_structure(fs));
    fams.emplace(u, std::move(fs));
  }

  std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges;
  std::map<PointSet, std::vector<PointSet>> covered;
  for (PointSet u : opens)
    for (PointSet v : opens) {
      if (v == u || !subset(v, u)) continue;
      bool between = false;
      for (PointSet w : opens) between = between || (w != u && w != v && subset(v, w) && subset(w, u));
      if (between) continue;
      covered[u].push_back(v);
      std::map<Family, int> index;
      const auto& fv = fams.at(v);
      for (int i = 0; i < static_cast<int>(fv.size()); ++i) index[fv[i]] = i;
      std::vector<int> map;
      for (Family f : fams.at(u)) {
        for (int c = 0; c < nc; ++c)
          if (!subset(nbhd[c], v)) f[c] = -1;
        map.push_back(index.at(f));
      }
      edges[{u, v}] = std::move(map);
    }

  for (PointSet u : opens) {
    GStructure& m = objects.at(u);
    std::vector<std::vector<std::uint8_t>> allowed;
    for (std::size_t r = 0; r < sig->relations().size(); ++r) {
      const int k = sig->relations()[r].arity;
      std::vector<std::uint8_t> ok(m.relations[r].size(), 1);
      std::vector<int> t(k), s(k);
      for (std::size_t code = 0; code < ok.size(); ++code) {
        decode_tuple(code, m.size(), t);
        for (PointSet v : covered[u]) {
          const auto& map = edges.at({u, v});
          for (int i = 0; i < k; ++i) s[i] = map[t[i]];
          if (!objects.at(v).holds(static_cast<int>(r), s)) ok[code] = 0;
        }
      }
      allowed.push_back(std::move(ok));
    }
    assign_relations(rng, m, allowed, density);
  }
  return GPresheaf(space, std::move(objects), std::move(edges));
}

namespace {

struct Parts {
  std::map<PointSet, GStructure> objects;
  std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges;
};

Parts parts_of(const GPresheaf& p) {
  Parts out;
  for (PointSet u : p.opens()) out.objects.emplace(u, p.at(u));
  out.edges = p.edges();
  return out;
}

}  // namespace

std::optional<GPresheaf> duplicate_orbit(Rng& rng, const GPresheaf& p, int max_universe) {
  std::vector<std::pair<PointSet, std::vector<int>>> options;
  for (PointSet u : p.opens())
    for (auto& o : orbits(p.at(u)))
      if (p.at(u).size() + static_cast<int>(o.size()) <= max_universe) options.emplace_back(u, o);
  if (options.empty()) return std::nullopt;
  const auto& [u, orbit] = rng.pick(options);
  Parts parts = parts_of(p);
  const GStructure& old = p.at(u);
  const int n = old.size();
  const int k = static_cast<int>(orbit.size());
  std::vector<int> q(n + k);
  std::iota(q.begin(), q.begin() + n, 0);
  for (int i = 0; i < k; ++i) q[n + i] = orbit[i];

  GStructure m = GStructure::blank(old.sig, old.group, n + k, old.mode);
  for (int x = 0; x < n + k; ++x) m.names[x] = x < n ? old.names[x] : old.names[q[x]] + "'";
  for (int g = 0; g < old.group->order(); ++g)
    for (int x = 0; x < n + k; ++x) {
      const int y = old.act(g, q[x]);
      m.action[g * (n + k) + x] =
          x < n ? y : n + static_cast<int>(std::find(orbit.begin(), orbit.end(), y) - orbit.begin());
    }
  auto collapse = [&](std::size_t code, int arity) {
    std::vector<int> t(arity);
    decode_tuple(code, n + k, t);
    for (auto& x : t) x = q[x];
    return t;
  };
  for (std::size_t f = 0; f < m.functions.size(); ++f)
    for (std::size_t code = 0; code < m.functions[f].size(); ++code)
      m.functions[f][code] = old.apply(static_cast<int>(f), collapse(code, old.sig->functions()[f].arity));
  for (std::size_t r = 0; r < m.relations.size(); ++r)
    for (std::size_t code = 0; code < m.relations[r].size(); ++code)
      m.relations[r][code] = old.holds(static_cast<int>(r), collapse(code, old.sig->relations()[r].arity));
  m.constants = old.constants;
  parts.objects.at(u) = std::move(m);
  for (auto& [key, map] : parts.edges)
    if (key.first == u)
      for (int i = 0; i < k; ++i) map.push_back(map[orbit[i]]);
  return GPresheaf(p.space(), std::move(parts.objects), std::move(parts.edges));
}

std::optional<GPresheaf> remove_orbit(Rng& rng, const GPresheaf& p) {
  std::vector<std::pair<PointSet, std::vector<int>>> options;
  for (PointSet u : p.opens()) {
    const GStructure& m = p.at(u);
    for (auto& o : orbits(m)) {
      if (static_cast<int>(o.size()) == m.size()) continue;
      std::vector<bool> gone(m.size(), false);
      for (int x : o) gone[x] = true;
      bool ok = true;
      for (int c : m.constants) ok = ok && !gone[c];
      for (const auto& [key, map] : p.edges())
        if (key.second == u)
          for (int x : map) ok = ok && !gone[x];
      for (std::size_t f = 0; f < m.functions.size() && ok; ++f) {
        std::vector<int> t(m.sig->functions()[f].arity);
        for (std::size_t code = 0; code < m.functions[f].size() && ok; ++code) {
          decode_tuple(code, m.size(), t);
          if (std::none_of(t.begin(), t.end(), [&](int x) { return gone[x]; })) ok = !gone[m.functions[f][code]];
        }
      }
      if (ok) options.emplace_back(u, o);
    }
  }
  if (options.empty()) return std::nullopt;
  const auto& [u, orbit] = rng.pick(options);
  const GStructure& old = p.at(u);
  std::vector<int> keep, index(old.size(), -1);
  for (int x = 0; x < old.size(); ++x)
    if (std::find(orbit.begin(), orbit.end(), x) == orbit.end()) {
      index[x] = static_cast<int>(keep.size());
      keep.push_back(x);
    }
  Parts parts = parts_of(p);
  parts.objects.at(u) = induced_substructure(old, keep);
  for (auto& [key, map] : parts.edges) {
    if (key.first == u) {
      std::vector<int> next;
      for (int x : keep) next.push_back(map[x]);
      map = std::move(next);
    } else if (key.second == u) {
      for (auto& x : map) x = index[x];
    }
  }
  return GPresheaf(p.space(), std::move(parts.objects), std::move(parts.edges));
}

namespace {

struct Draw {
  std::shared_ptr<const Signature> sig;
  std::shared_ptr<const FiniteGroup> group;
  InvarianceMode mode;
};

Draw draw_setting(Rng& rng, const GeneratorLimits& limits) {
  static thread_local std::map<int, std::vector<FiniteGroup>> groups;
  auto it = groups.find(limits.max_group_order);
  if (it == groups.end()) it = groups.emplace(limits.max_group_order, group_library(limits.max_group_order)).first;
  Draw d;
  d.sig = std::make_shared<const Signature>(parse_signature(rng.pick(limits.signatures)));
  d.group = std::make_shared<const FiniteGroup>(rng.pick(it->second));
  d.mode = limits.both_modes ? (rng.coin() ? InvarianceMode::Componentwise : InvarianceMode::Diagonal) : limits.mode;
  return d;
}

}  // namespace

GPresheaf generate_random_presheaf(std::uint64_t seed, const GeneratorLimits& limits) {
  Rng rng(seed);
  for (int attempt = 0; attempt < limits.max_attempts; ++attempt) {
    const Draw d = draw_setting(rng, limits);
    const FiniteSpace space = random_space(rng, limits.max_points, limits.max_opens);
    auto p = random_sheaf(rng, d.sig, d.group, space, d.mode, limits.max_universe, limits.relation_density);
    if (!p) continue;
    if (limits.force_sheaf) {
      if (is_sheaf(*p).ok()) return *p;
      continue;
    }
    const int steps = rng.below(limits.max_perturbations + 1);
    for (int i = 0; i < steps; ++i) {
      auto next = rng.coin() ? duplicate_orbit(rng, *p, limits.max_universe) : remove_orbit(rng, *p);
      if (next) p = std::move(next);
    }
    return *p;
  }
  throw Error("generator gave up after " + std::to_string(limits.max_attempts) + " attempts");
}

std::vector<GPresheaf> sierpinski_unary_presheaves(int max_universe) {
  auto sig = std::make_shared<const Signature>(parse_signature("rel R/1"));
  auto group = std::make_shared<const FiniteGroup>(FiniteGroup::trivial());
  const FiniteSpace space = FiniteSpace::sierpinski();
  std::vector<GPresheaf> out;
  for (int nx = 1; nx <= max_universe; ++nx)
    for (int np = 1; np <= max_universe; ++np)
      for (std::size_t map_code = 0; map_code < power(np, nx); ++map_code)
        for (int rx = 0; rx < (1 << nx); ++rx)
          for (int rp = 0; rp < (1 << np); ++rp) {
            std::vector<int> map(nx);
            decode_tuple(map_code, np, map);
            bool ok = true;
            for (int x = 0; x < nx; ++x) ok = ok && (!(rx >> x & 1) || (rp >> map[x] & 1));
            if (!ok) continue;
            GStructure mx = GStructure::blank(sig, group, nx), mp = GStructure::blank(sig, group, np);
            number_names(mx);
            number_names(mp);
            for (int x = 0; x < nx; ++x) mx.relations[0][x] = rx >> x & 1;
            for (int y = 0; y < np; ++y) mp.relations[0][y] = rp >> y & 1;
            std::map<PointSet, GStructure> objects;
            objects.emplace(3u, std::move(mx));
            objects.emplace(1u, std::move(mp));
            out.emplace_back(space, std::move(objects), std::map<std::pair<PointSet, PointSet>, std::vector<int>>{{{3u, 1u}, map}});
          }
  return out;
}

DirectedSystem random_directed_system(Rng& rng, SystemShape shape, int size, const GeneratorLimits& limits) {
  FiniteSpace space;
  std::vector<PointSet> family;
  if (shape == SystemShape::Chain) {
    if (size < 1 || size > 8) throw Error("chain length out of range");
    std::vector<std::string> points;
    for (int i = 0; i < size; ++i) {
      points.push_back("x" + std::to_string(i));
      family.push_back((1u << (i + 1)) - 1);
    }
    space = FiniteSpace::completed(points, family);
  } else {
    family = {1u, 3u, 5u};
    space = FiniteSpace::completed({"a", "b", "c"}, family);
  }
  for (int attempt = 0; attempt < limits.max_attempts; ++attempt) {
    const Draw d = draw_setting(rng, limits);
    auto p = random_sheaf(rng, d.sig, d.group, space, d.mode, limits.max_universe, limits.relation_density);
    if (p) return restriction_diagram(*p, family);
  }
  throw Error("directed system generator gave up");
}

std::optional<GMorphism> random_morphism(Rng& rng, MorphismKind kind, const GeneratorLimits& limits) {
  const Draw d = draw_setting(rng, limits);
  auto target = random_structure(rng, d.sig, d.group, d.mode, limits.max_universe, limits.relation_density);
  if (!target) return std::nullopt;
  const GStructure& b = *target;

  switch (kind) {
    case MorphismKind::General:
    case MorphismKind::Submersion: {
      const bool onto = kind == MorphismKind::Submersion;
      auto lift = build_over(rng, b, limits.max_universe, onto);
      if (!lift) return std::nullopt;
      GStructure& a = lift->structure;
      std::vector<std::vector<std::uint8_t>> allowed;
      for (std::size_t r = 0; r < a.relations.size(); ++r) {
        std::vector<int> t(d.sig->relations()[r].arity), s(t.size());
        std::vector<std::uint8_t> ok(a.relations[r].size());
        for (std::size_t code = 0; code < ok.size(); ++code) {
          decode_tuple(code, a.size(), t);
          for (std::size_t i = 0; i < t.size(); ++i) s[i] = lift->projection[t[i]];
          ok[code] = b.holds(static_cast<int>(r), s) ? 1 : 0;
        }
        allowed.push_back(std::move(ok));
      }
      assign_relations(rng, a, allowed, onto ? 1.0 : limits.relation_density);
      return GMorphism{std::move(a), b, std::move(lift->projection)};
    }
    case MorphismKind::Embedding: {
      const auto orbs = orbits(b);
      std::vector<bool> in(b.size(), false);
      auto add_orbit_of = [&](int x) {
        for (int g = 0; g < b.group->order(); ++g) in[b.act(g, x)] = true;
      };
      add_orbit_of(rng.pick(orbs).front());
      for (const auto& o : orbs)
        if (rng.coin(0.3)) add_orbit_of(o.front());
      for (int c : b.constants) add_orbit_of(c);
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t f = 0; f < b.functions.size(); ++f) {
          std::vector<int> t(d.sig->functions()[f].arity);
          for (std::size_t code = 0; code < b.functions[f].size(); ++code) {
            decode_tuple(code, b.size(), t);
            if (!std::all_of(t.begin(), t.end(), [&](int x) { return in[x]; })) continue;
            const int v = b.functions[f][code];
            if (!in[v]) {
              add_orbit_of(v);
              changed = true;
            }
          }
        }
      }
      std::vector<int> elems;
      for (int x = 0; x < b.size(); ++x)
        if (in[x]) elems.push_back(x);
      return GMorphism{induced_substructure(b, elems), b, elems};
    }
    case MorphismKind::Isomorphism: {
      std::vector<int> perm(b.size());
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = b.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      GStructure a = induced_substructure(b, perm);
      number_names(a);
      return GMorphism{std::move(a), b, perm};
    }
  }
  return std::nullopt;
}

}  // namespace gsheaf
