#include "gsheaf/group.hpp"

#include <algorithm>
#include <numeric>

namespace gsheaf {

FiniteGroup::FiniteGroup(std::vector<std::string> names, int identity, std::vector<int> table)
    : names_(std::move(names)), identity_(identity), table_(std::move(table)) {
  if (names_.empty()) throw Error("group must have at least one element");
  if (table_.size() != names_.size() * names_.size()) throw Error("group product table is not total");
  if (identity_ < 0 || identity_ >= order()) throw Error("group identity is not an element");
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup({"e"}, 0, {0}); }

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw Error("cyclic group order must be positive");
  std::vector<std::string> names;
  std::vector<int> table(n * n);
  for (int i = 0; i < n; ++i) {
    names.push_back(i == 0 ? "e" : "r" + std::to_string(i));
    for (int j = 0; j < n; ++j) table[i * n + j] = (i + j) % n;
  }
  return FiniteGroup(std::move(names), 0, std::move(table));
}

std::vector<int> symmetric_permutation(int n, int g) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = 0; i < g; ++i) std::next_permutation(p.begin(), p.end());
  return p;
}

FiniteGroup FiniteGroup::symmetric(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  const int m = static_cast<int>(perms.size());
  std::vector<std::string> names;
  for (const auto& q : perms) {
    std::string s = "p";
    for (int x : q) s += std::to_string(x);
    names.push_back(s);
  }
  std::vector<int> table(m * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      // (ab)(x) = a(b(x)): b acts first.
      std::vector<int> c(n);
      for (int x = 0; x < n; ++x) c[x] = perms[a][perms[b][x]];
      table[a * m + b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  }
  return FiniteGroup(std::move(names), 0, std::move(table));
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  const int n = a.order() * b.order();
  std::vector<std::string> names;
  for (int i = 0; i < a.order(); ++i) {
    for (int j = 0; j < b.order(); ++j) names.push_back(a.name(i) + "." + b.name(j));
  }
  std::vector<int> table(n * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const int i = a.mul(x / b.order(), y / b.order());
      const int j = b.mul(x % b.order(), y % b.order());
      table[x * n + y] = i * b.order() + j;
    }
  }
  return FiniteGroup(std::move(names), a.identity() * b.order() + b.identity(), std::move(table));
}

int FiniteGroup::inverse(int a) const {
  for (int b = 0; b < order(); ++b) {
    if (mul(a, b) == identity_) return b;
  }
  throw Error("element '" + name(a) + "' has no inverse");
}

int FiniteGroup::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error("unknown group element '" + name + "'");
  return static_cast<int>(it - names_.begin());
}

std::vector<std::vector<int>> FiniteGroup::subgroups() const {
  std::vector<std::vector<int>> out;
  const int n = order();
  if (n > 20) throw Error("subgroup enumeration limited to order <= 20");
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (!(mask >> identity_ & 1u)) continue;
    bool closed = true;
    for (int a = 0; a < n && closed; ++a) {
      if (!(mask >> a & 1u)) continue;
      for (int b = 0; b < n && closed; ++b) {
        if ((mask >> b & 1u) && !(mask >> mul(a, b) & 1u)) closed = false;
      }
    }
    if (!closed) continue;
    std::vector<int> h;
    for (int a = 0; a < n; ++a) {
      if (mask >> a & 1u) h.push_back(a);
    }
    out.push_back(std::move(h));
  }
  return out;
}

CheckReport validate_group(const FiniteGroup& g) {
  CheckReport r;
  r.check = "group";
  const int n = g.order();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int c = g.mul(a, b);
      if (c < 0 || c >= n) {
        r.add("closure", "product leaves the group", {{"a", g.name(a)}, {"b", g.name(b)}});
        return r;
      }
    }
  }
  const int e = g.identity();
  for (int a = 0; a < n; ++a) {
    ++r.cases;
    if (g.mul(e, a) != a || g.mul(a, e) != a) {
      r.add("identity", "identity law fails", {{"element", g.name(a)}});
    }
    bool has_inverse = false;
    for (int b = 0; b < n && !has_inverse; ++b) has_inverse = g.mul(a, b) == e && g.mul(b, a) == e;
    if (!has_inverse) r.add("inverse", "no two-sided inverse", {{"element", g.name(a)}});
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        ++r.cases;
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
          r.add("associativity", "(ab)c != a(bc)", {{"a", g.name(a)}, {"b", g.name(b)}, {"c", g.name(c)}});
        }
      }
    }
  }
  return r;
}

}  // namespace gsheaf
