#include "gsheaf/topology.hpp"

#include <algorithm>
#include <set>

namespace gsheaf {

namespace {

void canonical(std::vector<PointSet>& opens) {
  std::sort(opens.begin(), opens.end(), [](PointSet a, PointSet b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    return a < b;
  });
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<std::string> points, std::vector<PointSet> opens,
                         std::map<PointSet, std::string> open_names)
    : points_(std::move(points)), opens_(std::move(opens)), open_names_(std::move(open_names)) {
  if (points_.empty()) throw Error("space must have at least one point");
  if (points_.size() > 32) throw Error("spaces are limited to 32 points");
  std::set<std::string> seen(points_.begin(), points_.end());
  if (seen.size() != points_.size()) throw Error("duplicate point name");
  for (PointSet u : opens_) {
    if (!subset(u, whole())) throw Error("open set mentions an unknown point");
  }
  canonical(opens_);
}

FiniteSpace FiniteSpace::one_point() { return FiniteSpace({"x"}, {0, 1}, {{0, "E"}, {1, "X"}}); }

FiniteSpace FiniteSpace::sierpinski() {
  return FiniteSpace({"p", "q"}, {0, 1, 3}, {{0, "E"}, {1, "P"}, {3, "X"}});
}

FiniteSpace FiniteSpace::discrete(int n) {
  std::vector<std::string> points;
  for (int i = 0; i < n; ++i) points.push_back(n == 2 ? std::string(1, "pq"[i]) : "x" + std::to_string(i));
  std::vector<PointSet> opens;
  for (PointSet s = 0; s < (1u << n); ++s) opens.push_back(s);
  return FiniteSpace(std::move(points), std::move(opens));
}

FiniteSpace FiniteSpace::completed(std::vector<std::string> points, std::vector<PointSet> family) {
  const PointSet all = points.size() == 32 ? ~0u : (1u << points.size()) - 1;
  std::set<PointSet> opens(family.begin(), family.end());
  opens.insert(0);
  opens.insert(all);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<PointSet> cur(opens.begin(), opens.end());
    for (PointSet a : cur) {
      for (PointSet b : cur) {
        grew |= opens.insert(a | b).second;
        grew |= opens.insert(a & b).second;
      }
    }
  }
  return FiniteSpace(std::move(points), std::vector<PointSet>(opens.begin(), opens.end()));
}

int FiniteSpace::point_index(const std::string& name) const {
  auto it = std::find(points_.begin(), points_.end(), name);
  if (it == points_.end()) throw Error("unknown point '" + name + "'");
  return static_cast<int>(it - points_.begin());
}

std::vector<PointSet> FiniteSpace::nonempty_opens() const {
  std::vector<PointSet> out;
  for (PointSet u : opens_) {
    if (u) out.push_back(u);
  }
  return out;
}

bool FiniteSpace::is_open(PointSet s) const { return std::binary_search(opens_.begin(), opens_.end(), s, [](PointSet a, PointSet b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    return a < b;
  });
}

std::string FiniteSpace::describe(PointSet s) const {
  std::string out = "{";
  for (int x = 0; x < num_points(); ++x) {
    if (!(s >> x & 1u)) continue;
    if (out.size() > 1) out += ",";
    out += points_[x];
  }
  return out + "}";
}

std::string FiniteSpace::open_name(PointSet s) const {
  if (auto it = open_names_.find(s); it != open_names_.end()) return it->second;
  return describe(s);
}

PointSet FiniteSpace::open_by_name(const std::string& name) const {
  for (const auto& [set, n] : open_names_) {
    if (n == name) return set;
  }
  for (PointSet u : opens_) {
    if (describe(u) == name) return u;
  }
  throw Error("unknown open '" + name + "'");
}

CheckReport validate_space(const FiniteSpace& s) {
  CheckReport r;
  r.check = "space";
  if (!s.is_open(0)) r.add("empty-set", "the empty set is not open");
  if (!s.is_open(s.whole())) r.add("whole-space", "the whole space is not open");
  const auto& opens = s.opens();
  for (std::size_t i = 0; i < opens.size(); ++i) {
    for (std::size_t j = i + 1; j < opens.size(); ++j) {
      ++r.cases;
      if (!s.is_open(opens[i] | opens[j])) {
        r.add("union", "union of two opens is not open",
              {{"a", s.describe(opens[i])}, {"b", s.describe(opens[j])}, {"union", s.describe(opens[i] | opens[j])}});
      }
      if (!s.is_open(opens[i] & opens[j])) {
        r.add("intersection", "intersection of two opens is not open",
              {{"a", s.describe(opens[i])}, {"b", s.describe(opens[j])},
               {"intersection", s.describe(opens[i] & opens[j])}});
      }
    }
  }
  return r;
}

PointSet min_open_nbhd(const FiniteSpace& s, int x) {
  if (x < 0 || x >= s.num_points()) throw Error("unknown point index " + std::to_string(x));
  PointSet m = s.whole();
  for (PointSet u : s.opens()) {
    if (u >> x & 1u) m &= u;
  }
  return m;
}

PointSet closure(const FiniteSpace& s, PointSet a) {
  PointSet largest_disjoint = 0;
  for (PointSet u : s.opens()) {
    if ((u & a) == 0) largest_disjoint |= u;
  }
  return s.whole() & ~largest_disjoint;
}

bool is_dense(const FiniteSpace& s, PointSet v, PointSet u) {
  if (!subset(v, u)) throw Error("dense test needs " + s.describe(v) + " inside " + s.describe(u));
  return subset(u, closure(s, v));
}

bool Filter::contains(PointSet u) const { return std::find(members.begin(), members.end(), u) != members.end(); }

PointSet Filter::core() const {
  PointSet c = ~0u;
  for (PointSet u : members) c &= u;
  return c;
}

Filter principal_filter(const FiniteSpace& s, PointSet u) {
  Filter f;
  for (PointSet v : s.opens()) {
    if (subset(u, v)) f.members.push_back(v);
  }
  return f;
}

CheckReport validate_filter(const FiniteSpace& s, const Filter& f) {
  CheckReport r;
  r.check = "filter";
  if (!f.contains(s.whole())) r.add("whole-space", "filter does not contain the whole space");
  for (PointSet a : f.members) {
    if (!s.is_open(a)) r.add("not-open", "member is not open", {{"member", s.describe(a)}});
    for (PointSet b : f.members) {
      ++r.cases;
      if (!f.contains(a & b)) {
        r.add("intersection", "missing intersection", {{"a", s.describe(a)}, {"b", s.describe(b)}});
      }
    }
    for (PointSet v : s.opens()) {
      if (subset(a, v) && !f.contains(v)) {
        r.add("superset", "missing open superset", {{"member", s.describe(a)}, {"superset", s.describe(v)}});
      }
    }
  }
  return r;
}

std::vector<Filter> enumerate_filters(const FiniteSpace& s, bool nontrivial_only) {
  const auto& opens = s.opens();
  const int n = static_cast<int>(opens.size());
  if (n > 24) throw Error("filter enumeration limited to 24 opens");
  std::vector<Filter> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Filter f;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) f.members.push_back(opens[i]);
    }
    if (nontrivial_only && f.trivial()) continue;
    bool ok = true;
    for (PointSet a : f.members) {
      for (PointSet b : f.members) ok = ok && f.contains(a & b);
      for (PointSet v : opens) ok = ok && (!subset(a, v) || f.contains(v));
      if (!ok) break;
    }
    if (ok) out.push_back(std::move(f));
  }
  return out;
}

std::vector<Filter> maximal_filters(const FiniteSpace& s) {
  std::vector<Filter> out;
  const auto opens = s.nonempty_opens();
  for (PointSet u : opens) {
    bool minimal = std::none_of(opens.begin(), opens.end(), [&](PointSet v) { return v != u && subset(v, u); });
    if (minimal) out.push_back(principal_filter(s, u));
  }
  return out;
}

std::vector<FiniteSpace> all_topologies(int n) {
  if (n < 1 || n > 4) throw Error("topology enumeration supports 1..4 points");
  std::vector<std::string> points;
  for (int i = 0; i < n; ++i) points.push_back(std::string(1, static_cast<char>('a' + i)));
  const PointSet all = (1u << n) - 1;
  std::vector<PointSet> middle;
  for (PointSet u = 1; u < all; ++u) middle.push_back(u);
  std::vector<FiniteSpace> out;
  for (std::uint32_t mask = 0; mask < (1u << middle.size()); ++mask) {
    std::vector<PointSet> opens{0, all};
    for (std::size_t i = 0; i < middle.size(); ++i) {
      if (mask >> i & 1u) opens.push_back(middle[i]);
    }
    std::set<PointSet> family(opens.begin(), opens.end());
    bool closed = true;
    for (PointSet a : opens) {
      for (PointSet b : opens) closed = closed && family.count(a | b) && family.count(a & b);
      if (!closed) break;
    }
    if (closed) out.emplace_back(points, opens);
  }
  return out;
}

CheckReport check_dense_membership(const FiniteSpace& s) {
  CheckReport r;
  r.check = "dense-membership";
  for (const Filter& f : maximal_filters(s)) {
    for (PointSet u : f.members) {
      for (PointSet v : s.nonempty_opens()) {
        if (!subset(v, u) || !is_dense(s, v, u)) continue;
        ++r.cases;
        if (!f.contains(v)) {
          r.add("dense-open-outside-maximal-filter", "dense open subset missing from a maximal filter",
                {{"filter_core", s.describe(f.core())}, {"U", s.describe(u)}, {"V", s.describe(v)}});
        }
      }
    }
  }
  return r;
}

}  // namespace gsheaf
