#include "gsheaf/structure.hpp"

#include <algorithm>
#include <set>

namespace gsheaf {

const char* to_string(InvarianceMode mode) {
  return mode == InvarianceMode::Diagonal ? "diagonal" : "componentwise";
}

InvarianceMode parse_invariance_mode(const std::string& text) {
  if (text == "componentwise") return InvarianceMode::Componentwise;
  if (text == "diagonal") return InvarianceMode::Diagonal;
  throw Error("unknown invariance mode '" + text + "'");
}

GStructure GStructure::blank(std::shared_ptr<const Signature> sig, std::shared_ptr<const FiniteGroup> group,
                             int size, InvarianceMode mode) {
  if (size < 1) throw Error("structure universe must be nonempty");
  GStructure m;
  m.mode = mode;
  for (int x = 0; x < size; ++x) m.names.push_back(std::to_string(x));
  for (const auto& f : sig->functions()) m.functions.emplace_back(power(size, f.arity), 0);
  for (const auto& r : sig->relations()) m.relations.emplace_back(power(size, r.arity), 0);
  m.constants.assign(sig->constants().size(), 0);
  m.action.resize(static_cast<std::size_t>(group->order()) * size);
  for (int g = 0; g < group->order(); ++g) {
    for (int x = 0; x < size; ++x) m.action[g * size + x] = x;
  }
  m.sig = std::move(sig);
  m.group = std::move(group);
  return m;
}

int GStructure::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error("unknown element '" + name + "'");
  return static_cast<int>(it - names.begin());
}

int eval_term(const GStructure& m, const Term& t, const Assignment& a) {
  switch (t.kind) {
    case Term::Kind::Var:
      if (t.index >= static_cast<int>(a.size()) || a[t.index] < 0) {
        throw Error("unassigned variable v" + std::to_string(t.index));
      }
      return a[t.index];
    case Term::Kind::Const:
      return m.constants.at(t.index);
    case Term::Kind::Apply: {
      int args[8];
      const int n = static_cast<int>(t.args.size());
      if (n > 8) throw Error("function arity above 8 is not supported");
      for (int i = 0; i < n; ++i) args[i] = eval_term(m, t.args[i], a);
      return m.apply(t.index, std::span<const int>(args, n));
    }
  }
  return -1;
}

namespace {

bool sat(const GStructure& m, const Formula& phi, Assignment& a) {
  switch (phi.op()) {
    case Op::Eq:
      return eval_term(m, phi.terms()[0], a) == eval_term(m, phi.terms()[1], a);
    case Op::Rel: {
      int args[8];
      const int n = static_cast<int>(phi.terms().size());
      for (int i = 0; i < n; ++i) args[i] = eval_term(m, phi.terms()[i], a);
      return m.holds(phi.index(), std::span<const int>(args, n));
    }
    case Op::And:
      return sat(m, phi.left(), a) && sat(m, phi.right(), a);
    case Op::Or:
      return sat(m, phi.left(), a) || sat(m, phi.right(), a);
    case Op::Implies:
      return !sat(m, phi.left(), a) || sat(m, phi.right(), a);
    case Op::Not:
      return !sat(m, phi.body(), a);
    case Op::Exists:
    case Op::Forall: {
      const int v = phi.index();
      if (v >= static_cast<int>(a.size())) a.resize(v + 1, -1);
      const int saved = a[v];
      const bool want = phi.op() == Op::Exists;
      bool result = !want;
      for (int x = 0; x < m.size(); ++x) {
        a[v] = x;
        if (sat(m, phi.body(), a) == want) {
          result = want;
          break;
        }
      }
      a[v] = saved;
      return result;
    }
  }
  return false;
}

std::vector<std::string> tuple_names(const GStructure& m, std::span<const int> xs) {
  std::vector<std::string> out;
  for (int x : xs) out.push_back(m.names.at(x));
  return out;
}

}  // namespace

bool satisfies(const GStructure& m, const Formula& phi, const Assignment& a) {
  Assignment scratch = a;
  if (static_cast<int>(scratch.size()) < phi.variable_span()) scratch.resize(phi.variable_span(), -1);
  return sat(m, phi, scratch);
}

CheckReport validate_structure(const GStructure& m) {
  CheckReport r;
  r.check = "structure";
  r.bounds["mode"] = to_string(m.mode);
  if (!m.sig || !m.group) {
    r.add("shape", "structure lacks a signature or group");
    return r;
  }
  const Signature& sig = *m.sig;
  const FiniteGroup& G = *m.group;
  const int n = m.size();
  if (n == 0) {
    r.add("universe", "universe is empty");
    return r;
  }
  // Totality and ranges first; later checks index tables blindly.
  bool shape_ok = m.functions.size() == sig.functions().size() && m.relations.size() == sig.relations().size() &&
                  m.constants.size() == sig.constants().size() &&
                  m.action.size() == static_cast<std::size_t>(G.order()) * n;
  for (std::size_t f = 0; shape_ok && f < m.functions.size(); ++f) {
    shape_ok = m.functions[f].size() == power(n, sig.functions()[f].arity);
    for (int v : m.functions[f]) shape_ok = shape_ok && v >= 0 && v < n;
  }
  for (std::size_t i = 0; shape_ok && i < m.relations.size(); ++i) {
    shape_ok = m.relations[i].size() == power(n, sig.relations()[i].arity);
  }
  for (int c : m.constants) shape_ok = shape_ok && c >= 0 && c < n;
  for (int v : m.action) shape_ok = shape_ok && v >= 0 && v < n;
  if (!shape_ok) {
    r.add("totality", "a table is missing, partial, or leaves the universe");
    return r;
  }

  for (int x = 0; x < n; ++x) {
    ++r.cases;
    if (m.act(G.identity(), x) != x) r.add("action-identity", "e.x != x", {{"x", m.names[x]}});
    for (int g = 0; g < G.order(); ++g) {
      for (int h = 0; h < G.order(); ++h) {
        ++r.cases;
        if (m.act(G.mul(g, h), x) != m.act(g, m.act(h, x))) {
          r.add("action-composition", "(gh).x != g.(h.x)",
                {{"g", G.name(g)}, {"h", G.name(h)}, {"x", m.names[x]}});
        }
      }
    }
  }
  if (!r.ok()) return r;

  // Constants: the set of interpreted constants is invariant.
  std::set<int> cset(m.constants.begin(), m.constants.end());
  for (int c : cset) {
    for (int g = 0; g < G.order(); ++g) {
      ++r.cases;
      if (!cset.count(m.act(g, c))) {
        r.add("constants-invariance", "g moves a constant outside the constant set",
              {{"g", G.name(g)}, {"constant", m.names[c]}, {"image", m.names[m.act(g, c)]}});
      }
    }
  }

  for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
    const int arity = sig.relations()[ri].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < m.relations[ri].size(); ++code) {
      if (!m.relations[ri][code]) continue;
      decode_tuple(code, n, xs);
      for (int g = 0; g < G.order(); ++g) {
        if (m.mode == InvarianceMode::Diagonal) {
          ++r.cases;
          for (int i = 0; i < arity; ++i) ys[i] = m.act(g, xs[i]);
          if (!m.holds(static_cast<int>(ri), ys)) {
            r.add("relation-invariance", "g.x leaves relation " + sig.relations()[ri].name,
                  {{"relation", sig.relations()[ri].name}, {"tuple", tuple_names(m, xs)}, {"g", G.name(g)}});
          }
          continue;
        }
        // Independent elements per coordinate are generated by moving one
        // coordinate at a time, so single-coordinate moves are a complete test.
        for (int i = 0; i < arity; ++i) {
          ++r.cases;
          ys = xs;
          ys[i] = m.act(g, xs[i]);
          if (!m.holds(static_cast<int>(ri), ys)) {
            std::vector<std::string> gs(arity, G.name(G.identity()));
            gs[i] = G.name(g);
            r.add("relation-invariance", "(g1 x1,...,gn xn) leaves relation " + sig.relations()[ri].name,
                  {{"relation", sig.relations()[ri].name}, {"tuple", tuple_names(m, xs)}, {"g", gs}});
          }
        }
      }
    }
  }

  for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
    const int arity = sig.functions()[fi].arity;
    std::vector<int> xs(arity), ys(arity);
    for (std::size_t code = 0; code < m.functions[fi].size(); ++code) {
      decode_tuple(code, n, xs);
      for (int g = 0; g < G.order(); ++g) {
        ++r.cases;
        for (int i = 0; i < arity; ++i) ys[i] = m.act(g, xs[i]);
        if (m.apply(static_cast<int>(fi), ys) != m.act(g, m.apply(static_cast<int>(fi), xs))) {
          r.add("function-equivariance", "f(g.x) != g.f(x) for " + sig.functions()[fi].name,
                {{"function", sig.functions()[fi].name}, {"args", tuple_names(m, xs)}, {"g", G.name(g)}});
        }
      }
    }
  }
  return r;
}

Json structure_to_json(const GStructure& m) {
  Json j;
  j["universe"] = m.names;
  const FiniteGroup& G = *m.group;
  Json action = Json::object();
  for (int g = 0; g < G.order(); ++g) {
    Json row = Json::object();
    for (int x = 0; x < m.size(); ++x) row[m.names[x]] = m.names[m.act(g, x)];
    action[G.name(g)] = std::move(row);
  }
  j["action"] = std::move(action);
  Json funs = Json::object();
  for (std::size_t fi = 0; fi < m.functions.size(); ++fi) {
    std::vector<int> xs(m.sig->functions()[fi].arity);
    Json table = Json::object();
    for (std::size_t code = 0; code < m.functions[fi].size(); ++code) {
      decode_tuple(code, m.size(), xs);
      std::string key;
      for (std::size_t i = 0; i < xs.size(); ++i) key += (i ? "," : "") + m.names[xs[i]];
      table[key] = m.names[m.functions[fi][code]];
    }
    funs[m.sig->functions()[fi].name] = std::move(table);
  }
  j["functions"] = std::move(funs);
  Json rels = Json::object();
  for (std::size_t ri = 0; ri < m.relations.size(); ++ri) {
    const int arity = m.sig->relations()[ri].arity;
    std::vector<int> xs(arity);
    Json tuples = Json::array();
    for (std::size_t code = 0; code < m.relations[ri].size(); ++code) {
      if (!m.relations[ri][code]) continue;
      decode_tuple(code, m.size(), xs);
      tuples.push_back(tuple_names(m, xs));
    }
    rels[m.sig->relations()[ri].name] = tuples;
  }
  j["relations"] = std::move(rels);
  Json consts = Json::object();
  for (std::size_t c = 0; c < m.constants.size(); ++c) consts[m.sig->constants()[c]] = m.names[m.constants[c]];
  j["constants"] = std::move(consts);
  return j;
}

}  // namespace gsheaf
