#include "gsheaf/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace gsheaf {

GPresheaf::GPresheaf(FiniteSpace space, std::map<PointSet, GStructure> objects,
                     std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges)
    : space_(std::move(space)), edges_(std::move(edges)) {
  opens_ = space_.nonempty_opens();
  if (opens_.empty()) throw Error("space has no nonempty open");
  for (PointSet u : opens_) {
    auto it = objects.find(u);
    if (it == objects.end()) throw Error("no structure for open " + space_.open_name(u));
    objects_.push_back(std::move(it->second));
  }
  const auto& first = objects_.front();
  for (const auto& m : objects_) {
    if (!m.sig || !m.group) throw Error("structure lacks a signature or group");
    if (!(*m.sig == *first.sig) || !(*m.group == *first.group)) {
      throw Error("structures disagree on signature or group");
    }
  }
  const int n = static_cast<int>(opens_.size());
  ArrowData data;
  data.leq.assign(n, std::vector<bool>(n, false));
  for (int k = 0; k < n; ++k) {
    data.sizes.push_back(objects_[k].size());
    for (int i = 0; i < n; ++i) data.leq[k][i] = subset(opens_[k], opens_[i]);
  }
  for (const auto& [key, map] : edges_) {
    if (!space_.is_open(key.first) || !space_.is_open(key.second) || !key.second) {
      throw Error("restriction between sets that are not nonempty opens");
    }
    if (!subset(key.second, key.first) || key.first == key.second) {
      throw Error("restriction " + space_.open_name(key.first) + " -> " + space_.open_name(key.second) +
                  " is not along a strict inclusion");
    }
    const int from = open_id(key.first);
    const int to = open_id(key.second);
    if (static_cast<int>(map.size()) != objects_[from].size() ||
        std::any_of(map.begin(), map.end(), [&](int y) { return y < 0 || y >= objects_[to].size(); })) {
      throw Error("restriction " + space_.open_name(key.first) + " -> " + space_.open_name(key.second) +
                  " is not a total map between the universes");
    }
    data.edges[{from, to}] = map;
  }
  std::vector<std::string> labels;
  for (PointSet u : opens_) labels.push_back(space_.open_name(u));
  composition_.check = "functoriality";
  auto comp = compose_arrows(data, composition_, labels);
  composite_.assign(n, std::vector<std::vector<int>>(n));
  for (auto& [key, map] : comp) composite_[key.first][key.second] = std::move(map);
}

GPresheaf GPresheaf::constant(const FiniteSpace& space, const GStructure& m) {
  std::map<PointSet, GStructure> objects;
  for (PointSet u : space.nonempty_opens()) objects.emplace(u, m);
  std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges;
  std::vector<int> id(m.size());
  std::iota(id.begin(), id.end(), 0);
  const auto opens = space.nonempty_opens();
  std::vector<std::vector<bool>> leq(opens.size(), std::vector<bool>(opens.size()));
  for (std::size_t k = 0; k < opens.size(); ++k) {
    for (std::size_t i = 0; i < opens.size(); ++i) leq[k][i] = subset(opens[k], opens[i]);
  }
  for (const auto& [i, k] : covering_pairs(leq)) edges[{opens[i], opens[k]}] = id;
  return GPresheaf(space, std::move(objects), std::move(edges));
}

int GPresheaf::open_id(PointSet u) const {
  for (std::size_t i = 0; i < opens_.size(); ++i) {
    if (opens_[i] == u) return static_cast<int>(i);
  }
  throw Error("not a nonempty open: " + space_.describe(u));
}

const std::vector<int>& GPresheaf::restriction(PointSet from, PointSet to) const {
  const auto& m = composite_[open_id(from)][open_id(to)];
  if (m.empty()) {
    throw Error("no restriction " + space_.open_name(from) + " -> " + space_.open_name(to));
  }
  return m;
}

Section restrict_section(const GPresheaf& p, const Section& s, PointSet to) {
  if (!subset(to, s.domain)) throw Error("cannot restrict a section outside its domain");
  Section r{to, s.values};
  if (to == s.domain) return r;
  const auto& rho = p.restriction(s.domain, to);
  for (int& x : r.values) {
    if (x >= 0) x = rho[x];
  }
  return r;
}

CheckReport validate_presheaf(const GPresheaf& p) {
  CheckReport r;
  r.check = "presheaf";
  r.bounds["mode"] = to_string(p.mode());
  r.merge(validate_space(p.space()));
  for (PointSet u : p.opens()) {
    CheckReport sub = validate_structure(p.at(u));
    for (auto& v : sub.violations) {
      v.witness["open"] = p.space().open_name(u);
      r.violations.push_back(std::move(v));
    }
    r.cases += sub.cases;
  }
  for (const auto& [key, map] : p.edges()) {
    CheckReport sub = validate_morphism({p.at(key.first), p.at(key.second), map});
    for (auto& v : sub.violations) {
      v.witness["restriction"] = {p.space().open_name(key.first), p.space().open_name(key.second)};
      r.violations.push_back(std::move(v));
    }
    r.cases += sub.cases;
  }
  r.merge(p.composition_report());
  return r;
}

namespace {

void require_cover(const GPresheaf& p, PointSet u, const std::vector<PointSet>& cover) {
  PointSet un = 0;
  for (PointSet c : cover) {
    if (!c || !p.space().is_open(c) || !subset(c, u)) {
      throw Error("cover member " + p.space().describe(c) + " is not a nonempty open inside " +
                  p.space().describe(u));
    }
    un |= c;
  }
  if (un != u) throw Error("cover does not union to " + p.space().describe(u));
}

Json names(const GPresheaf& p, const std::vector<PointSet>& opens) {
  Json j = Json::array();
  for (PointSet v : opens) j.push_back(p.space().open_name(v));
  return j;
}

}  // namespace

CheckReport check_coherence(const GPresheaf& p, PointSet u, const std::vector<PointSet>& cover) {
  require_cover(p, u, cover);
  CheckReport r;
  r.check = "coherence";
  const GStructure& M = p.at(u);
  for (int s = 0; s < M.size(); ++s) {
    for (int t = s + 1; t < M.size(); ++t) {
      ++r.cases;
      bool agree = true;
      for (PointSet c : cover) agree = agree && p.restrict_element(u, c, s) == p.restrict_element(u, c, t);
      if (agree) {
        r.add("coherence", "distinct elements agree on every cover member",
              {{"open", p.space().open_name(u)}, {"cover", names(p, cover)}, {"elements", {M.names[s], M.names[t]}}});
      }
    }
  }
  return r;
}

CheckReport check_exactness(const GPresheaf& p, PointSet u, const std::vector<PointSet>& cover) {
  require_cover(p, u, cover);
  CheckReport r;
  r.check = "exactness";
  const int k = static_cast<int>(cover.size());
  std::vector<int> family(k, 0);
  const GStructure& M = p.at(u);
  while (true) {
    bool compatible = true;
    for (int i = 0; i < k && compatible; ++i) {
      for (int j = i + 1; j < k && compatible; ++j) {
        const PointSet w = cover[i] & cover[j];
        if (!w) continue;
        compatible = p.restrict_element(cover[i], w, family[i]) == p.restrict_element(cover[j], w, family[j]);
      }
    }
    if (compatible) {
      ++r.cases;
      bool glued = false;
      for (int s = 0; s < M.size() && !glued; ++s) {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i) ok = p.restrict_element(u, cover[i], s) == family[i];
        glued = ok;
      }
      if (!glued) {
        Json fam = Json::array();
        for (int i = 0; i < k; ++i) fam.push_back(p.at(cover[i]).names[family[i]]);
        r.add("exactness", "compatible family has no amalgam",
              {{"open", p.space().open_name(u)}, {"cover", names(p, cover)}, {"family", fam}});
      }
    }
    int i = 0;
    while (i < k && ++family[i] == p.at(cover[i]).size()) family[i++] = 0;
    if (i == k) break;
  }
  return r;
}

std::vector<std::vector<PointSet>> irredundant_covers(const FiniteSpace& s, PointSet u) {
  std::vector<PointSet> inside;
  for (PointSet v : s.nonempty_opens()) {
    if (subset(v, u) && v != u) inside.push_back(v);
  }
  std::vector<std::vector<PointSet>> out{{u}};
  const int n = static_cast<int>(inside.size());
  if (n > 20) throw Error("cover enumeration limited to 20 sub-opens");
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<PointSet> cover;
    PointSet un = 0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        cover.push_back(inside[i]);
        un |= inside[i];
      }
    }
    if (un != u || cover.size() < 2) continue;
    bool irredundant = true;
    for (std::size_t i = 0; i < cover.size() && irredundant; ++i) {
      PointSet others = 0;
      for (std::size_t j = 0; j < cover.size(); ++j) {
        if (j != i) others |= cover[j];
      }
      irredundant = !subset(cover[i], others);
    }
    if (irredundant) out.push_back(std::move(cover));
  }
  return out;
}

namespace {

CheckReport scan_covers(const GPresheaf& p, bool coherence, const char* name) {
  CheckReport r;
  r.check = name;
  for (PointSet u : p.opens()) {
    for (const auto& cover : irredundant_covers(p.space(), u)) {
      if (coherence) r.merge(check_coherence(p, u, cover));
      r.merge(check_exactness(p, u, cover));
    }
  }
  return r;
}

}  // namespace

CheckReport is_sheaf(const GPresheaf& p) { return scan_covers(p, true, "sheaf"); }
CheckReport is_exact(const GPresheaf& p) { return scan_covers(p, false, "exact"); }

DirectedSystem restriction_diagram(const GPresheaf& p, const std::vector<PointSet>& family) {
  DirectedSystem sys;
  std::vector<PointSet> opens;
  for (PointSet u : family) {
    if (u) opens.push_back(u);
  }
  const int n = static_cast<int>(opens.size());
  sys.leq.assign(n, std::vector<bool>(n, false));
  for (int k = 0; k < n; ++k) {
    sys.labels.push_back(p.space().open_name(opens[k]));
    sys.objects.push_back(p.at(opens[k]));
    for (int i = 0; i < n; ++i) sys.leq[k][i] = subset(opens[k], opens[i]);
  }
  for (const auto& [i, k] : covering_pairs(sys.leq)) sys.arrows[{i, k}] = p.restriction(opens[i], opens[k]);
  return sys;
}

Germ Stalk::germ(PointSet u, int x) const {
  for (std::size_t i = 0; i < opens.size(); ++i) {
    if (opens[i] == u) return colimit.germ(static_cast<int>(i), x);
  }
  throw Error("open does not contain the stalk point");
}

Stalk stalk(const GPresheaf& p, int x) {
  if (x < 0 || x >= p.space().num_points()) throw Error("unknown point index " + std::to_string(x));
  Stalk st;
  st.point = x;
  for (PointSet u : p.opens()) {
    if (u >> x & 1u) st.opens.push_back(u);
  }
  st.colimit = colimit(restriction_diagram(p, st.opens));
  return st;
}

std::vector<Germ> germ_at(const GPresheaf& p, int x, const Section& s) {
  if (!(s.domain >> x & 1u)) throw Error("point lies outside the section domain");
  const Stalk st = stalk(p, x);
  std::vector<Germ> out;
  for (int v : s.values) out.push_back(v < 0 ? Germ{} : st.germ(s.domain, v));
  return out;
}

GPresheaf orbit_presheaf(const GPresheaf& p) {
  std::map<PointSet, GStructure> objects;
  std::map<PointSet, std::vector<int>> orbit;
  for (PointSet u : p.opens()) {
    objects.emplace(u, orbit_structure(p.at(u)));
    orbit.emplace(u, orbit_index(p.at(u)));
  }
  std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges;
  for (const auto& [key, map] : p.edges()) {
    const auto& src = orbit.at(key.first);
    const auto& dst = orbit.at(key.second);
    std::vector<int> induced(objects.at(key.first).size(), -1);
    for (std::size_t x = 0; x < map.size(); ++x) induced[src[x]] = dst[map[x]];
    edges[key] = std::move(induced);
  }
  return GPresheaf(p.space(), std::move(objects), std::move(edges));
}

}  // namespace gsheaf
