#include "gsheaf/colimit.hpp"

#include <functional>
#include <optional>
#include <numeric>

namespace gsheaf {

std::vector<std::pair<int, int>> covering_pairs(const std::vector<std::vector<bool>>& leq) {
  const int n = static_cast<int>(leq.size());
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k == i || !leq[k][i]) continue;
      bool covers = true;
      for (int j = 0; j < n && covers; ++j) {
        if (j != i && j != k && leq[k][j] && leq[j][i]) covers = false;
      }
      if (covers) out.emplace_back(i, k);
    }
  }
  return out;
}

std::map<std::pair<int, int>, std::vector<int>> compose_arrows(const ArrowData& data, CheckReport& report,
                                                               const std::vector<std::string>& labels) {
  const int n = static_cast<int>(data.sizes.size());
  auto label = [&](int i) { return i < static_cast<int>(labels.size()) ? labels[i] : std::to_string(i); };
  std::map<std::pair<int, int>, std::vector<int>> comp;
  for (int i = 0; i < n; ++i) {
    std::vector<int> id(data.sizes[i]);
    std::iota(id.begin(), id.end(), 0);
    comp[{i, i}] = std::move(id);
  }
  std::vector<std::vector<int>> down(n);  // covering pairs out of i
  for (const auto& [i, k] : covering_pairs(data.leq)) {
    if (!data.edges.count({i, k})) {
      report.add("missing-arrow", "no arrow " + label(i) + " -> " + label(k),
                 {{"from", label(i)}, {"to", label(k)}});
      continue;
    }
    down[i].push_back(k);
  }
  std::function<const std::vector<int>*(int, int)> get = [&](int i, int k) -> const std::vector<int>* {
    if (auto it = comp.find({i, k}); it != comp.end()) return &it->second;
    std::optional<std::vector<int>> first;
    int first_via = -1;
    for (int j : down[i]) {
      if (!data.leq[k][j]) continue;
      const std::vector<int>* rest = get(j, k);
      if (!rest) continue;
      const auto& edge = data.edges.at({i, j});
      std::vector<int> c(edge.size());
      for (std::size_t x = 0; x < edge.size(); ++x) c[x] = (*rest)[edge[x]];
      if (!first) {
        first = std::move(c);
        first_via = j;
        continue;
      }
      for (std::size_t x = 0; x < c.size(); ++x) {
        ++report.cases;
        if (c[x] != (*first)[x]) {
          report.add("functoriality", "composites " + label(i) + " -> " + label(k) + " via " + label(first_via) +
                                          " and via " + label(j) + " disagree",
                     {{"from", label(i)}, {"to", label(k)}, {"via", {label(first_via), label(j)}}, {"element", x}});
          break;
        }
      }
    }
    if (!first) return nullptr;
    return &comp.emplace(std::make_pair(i, k), std::move(*first)).first->second;
  };
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k != i && data.leq[k][i]) get(i, k);
    }
  }
  return comp;
}

namespace {

ArrowData arrow_data(const DirectedSystem& sys) {
  ArrowData d;
  for (const auto& m : sys.objects) d.sizes.push_back(m.size());
  d.leq = sys.leq;
  d.edges = sys.arrows;
  return d;
}

void check_order(const DirectedSystem& sys) {
  const int n = sys.size();
  if (n == 0) throw Error("directed system has no indices");
  if (static_cast<int>(sys.leq.size()) != n) throw Error("order relation has the wrong shape");
  for (int i = 0; i < n; ++i) {
    if (!sys.leq[i][i]) throw Error("order relation is not reflexive");
    for (int j = 0; j < n; ++j) {
      if (i != j && sys.leq[i][j] && sys.leq[j][i]) throw Error("order relation is not antisymmetric");
      for (int k = 0; k < n; ++k) {
        if (sys.leq[i][j] && sys.leq[j][k] && !sys.leq[i][k]) throw Error("order relation is not transitive");
      }
      bool bound = false;
      for (int k = 0; k < n && !bound; ++k) bound = sys.leq[k][i] && sys.leq[k][j];
      if (!bound) throw Error("index set is not directed: no common lower bound");
    }
  }
}

std::vector<std::string> labels_of(const DirectedSystem& sys) {
  std::vector<std::string> labels = sys.labels;
  for (int i = static_cast<int>(labels.size()); i < sys.size(); ++i) labels.push_back(std::to_string(i));
  return labels;
}

int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

CheckReport validate_system(const DirectedSystem& sys) {
  CheckReport r;
  r.check = "directed-system";
  check_order(sys);
  const auto labels = labels_of(sys);
  for (const auto& [edge, map] : sys.arrows) {
    GMorphism m{sys.objects.at(edge.first), sys.objects.at(edge.second), map};
    CheckReport sub = validate_morphism(m);
    for (auto& v : sub.violations) {
      v.witness["arrow"] = {labels.at(edge.first), labels.at(edge.second)};
      r.violations.push_back(v);
    }
    r.cases += sub.cases;
  }
  compose_arrows(arrow_data(sys), r, labels);
  return r;
}

Colimit colimit(const DirectedSystem& sys) {
  check_order(sys);
  const int n = sys.size();
  const auto labels = labels_of(sys);
  const GStructure& first = sys.objects.front();
  for (const auto& m : sys.objects) {
    if (!(*m.sig == *first.sig) || !(*m.group == *first.group)) {
      throw Error("directed system mixes signatures or groups");
    }
  }
  CheckReport coherence;
  auto comp = compose_arrows(arrow_data(sys), coherence, labels);
  if (!coherence.ok()) throw Error("directed system arrows are not coherent: " + coherence.to_text());

  // Disjoint union, offset per index.
  std::vector<int> offset(n + 1, 0);
  for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + sys.objects[i].size();
  std::vector<int> parent(offset[n]);
  std::iota(parent.begin(), parent.end(), 0);
  // Merge rule: elements meeting in a common object(k) below both are
  // identified. Bucketing by (k, image) visits every such pair.
  for (int k = 0; k < n; ++k) {
    std::vector<int> bucket(sys.objects[k].size(), -1);
    for (int i = 0; i < n; ++i) {
      if (!sys.leq[k][i]) continue;
      const auto& rho = comp.at({i, k});
      for (int x = 0; x < sys.objects[i].size(); ++x) {
        const int node = offset[i] + x;
        int& b = bucket[rho[x]];
        if (b < 0) {
          b = node;
        } else {
          parent[find(parent, node)] = find(parent, b);
        }
      }
    }
  }
  std::vector<int> cls(offset[n], -1);
  std::vector<Germ> reps;
  for (int i = 0; i < n; ++i) {
    for (int x = 0; x < sys.objects[i].size(); ++x) {
      const int root = find(parent, offset[i] + x);
      if (cls[root] < 0) {
        cls[root] = static_cast<int>(reps.size());
        reps.push_back({cls[root], i, x});
      }
      cls[offset[i] + x] = cls[root];
    }
  }
  auto class_of = [&](int i, int x) { return cls[offset[i] + x]; };

  const int N = static_cast<int>(reps.size());
  GStructure M = GStructure::blank(first.sig, first.group, N, first.mode);
  for (int c = 0; c < N; ++c) {
    const Germ& g = reps[c];
    M.names[c] = "[" + sys.objects[g.index].names[g.element] + "@" + labels[g.index] + "]";
  }
  auto lower_bound_of = [&](const std::vector<int>& idx) {
    for (int k = 0; k < n; ++k) {
      bool ok = true;
      for (int i : idx) ok = ok && sys.leq[k][i];
      if (ok) return k;
    }
    throw Error("no common lower bound for a finite set of indices");
  };

  const Signature& sig = *first.sig;
  for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
    const int arity = sig.functions()[fi].arity;
    std::vector<int> xs(arity), idx(arity), args(arity);
    for (std::size_t code = 0; code < M.functions[fi].size(); ++code) {
      decode_tuple(code, N, xs);
      for (int j = 0; j < arity; ++j) idx[j] = reps[xs[j]].index;
      const int k = lower_bound_of(idx);
      for (int j = 0; j < arity; ++j) args[j] = comp.at({idx[j], k})[reps[xs[j]].element];
      M.functions[fi][code] = class_of(k, sys.objects[k].apply(static_cast<int>(fi), args));
    }
  }
  for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
    const int arity = sig.relations()[ri].arity;
    std::vector<int> xs(arity), ys(arity);
    for (int i = 0; i < n; ++i) {
      const auto& R = sys.objects[i].relations[ri];
      for (std::size_t code = 0; code < R.size(); ++code) {
        if (!R[code]) continue;
        decode_tuple(code, sys.objects[i].size(), xs);
        for (int j = 0; j < arity; ++j) ys[j] = class_of(i, xs[j]);
        M.set_relation(static_cast<int>(ri), ys, true);
      }
    }
  }
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    M.constants[c] = class_of(0, first.constants[c]);
    for (int i = 1; i < n; ++i) {
      if (class_of(i, sys.objects[i].constants[c]) != M.constants[c]) {
        throw Error("constant " + sig.constants()[c] + " has inconsistent germs");
      }
    }
  }
  const FiniteGroup& G = *first.group;
  for (int g = 0; g < G.order(); ++g) {
    for (int c = 0; c < N; ++c) {
      const Germ& r = reps[c];
      M.action[g * N + c] = class_of(r.index, sys.objects[r.index].act(g, r.element));
    }
  }

  Colimit out;
  for (int i = 0; i < n; ++i) {
    std::vector<int> q(sys.objects[i].size());
    for (int x = 0; x < sys.objects[i].size(); ++x) q[x] = class_of(i, x);
    out.cocone.push_back({sys.objects[i], M, std::move(q)});
  }
  out.structure = std::move(M);
  for (auto& m : out.cocone) m.target = out.structure;
  out.representatives = std::move(reps);
  out.composites_ = std::move(comp);
  return out;
}

}  // namespace gsheaf
