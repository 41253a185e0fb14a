#include "gsheaf/generic.hpp"

#include <algorithm>
#include <tuple>

namespace gsheaf {

Json FormulaBound::to_json() const {
  return {{"depth", depth}, {"free_vars", free_vars}, {"term_depth", term_depth}};
}

namespace {

Json filter_json(const FiniteSpace& s, const Filter& f) {
  Json j = Json::array();
  for (PointSet u : f.members) j.push_back(s.open_name(u));
  return j;
}

Json tuple_json(const GStructure& m, std::size_t code, int k) {
  Json j = Json::array();
  for (int i = 0; i < k; ++i) {
    j.push_back(m.names[code % m.size()]);
    code /= m.size();
  }
  return j;
}

void require_nontrivial(const Filter& f) {
  if (f.trivial()) throw Error("filter contains the empty open");
  if (f.members.empty()) throw Error("filter has no members");
}

// Codes over M_U^slots whose slots at or above k are 0.
std::vector<std::size_t> leading_codes(int size, int k) {
  std::vector<std::size_t> out(power(size, k));
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = c;
  return out;
}

struct GenericityScan {
  const GPresheaf& p;
  ForcingTables& t;
  const std::vector<int>& members;
  GenericityReport& out;
  int k;

  void decide(const ForcingTables::Table& phi, const ForcingTables::Table& neg, const Formula& rep,
              std::uint64_t weight) {
    for (int u : members) {
      for (std::size_t c : leading_codes(t.size(u), k)) {
        ++out.report.cases;
        bool ok = false;
        for (int v : members) {
          if (!subset(t.open(v), t.open(u))) continue;
          const std::size_t cell = t.offset(v) + t.restrict_code(u, v, c);
          if (phi[cell] == t.open(v) || neg[cell] == t.open(v)) {
            ok = true;
            break;
          }
        }
        if (ok) {
          out.decided += static_cast<long long>(weight);
        } else {
          out.report.add("undecided", "no member inside U decides the formula",
                         {{"formula", to_string(rep, p.signature())},
                          {"U", p.space().open_name(t.open(u))},
                          {"tuple", tuple_json(p.object(u), c, k)}});
        }
      }
    }
  }

  void witness(const ForcingTables::Table& ex, const ForcingTables::Table& body, int var, const Formula& rep,
               std::uint64_t weight) {
    for (int u : members) {
      for (std::size_t c : leading_codes(t.size(u), k)) {
        if (ex[t.offset(u) + c] != t.open(u)) continue;
        ++out.report.cases;
        bool ok = false;
        for (int v : members) {
          if (!subset(t.open(v), t.open(u))) continue;
          const std::size_t cv = t.restrict_code(u, v, c);
          for (int b = 0; b < t.size(v) && !ok; ++b) ok = body[t.offset(v) + t.with_slot(v, cv, var, b)] == t.open(v);
          if (ok) break;
        }
        if (ok) {
          out.witnessed += static_cast<long long>(weight);
        } else {
          out.report.add("unwitnessed", "forced existential has no witness on a member inside U",
                         {{"formula", to_string(Formula::exists(var, rep), p.signature())},
                          {"U", p.space().open_name(t.open(u))},
                          {"tuple", tuple_json(p.object(u), c, k)}});
        }
      }
    }
  }
};

std::vector<int> member_ids(const GPresheaf& p, const Filter& f) {
  std::vector<int> ids;
  for (PointSet u : f.members) ids.push_back(p.open_id(u));
  return ids;
}

}  // namespace

// {{{ Generic model

Germ GenericModel::germ(PointSet u, int x) const {
  for (std::size_t i = 0; i < opens.size(); ++i) {
    if (opens[i] == u) return colimit.germ(static_cast<int>(i), x);
  }
  throw Error("open is not a member of the filter");
}

GenericModel generic_model(const GPresheaf& p, const Filter& f) {
  require_nontrivial(f);
  for (PointSet u : f.members) {
    if (!p.space().is_open(u)) throw Error("filter member is not open");
  }
  GenericModel g;
  g.opens = f.members;
  g.colimit = colimit(restriction_diagram(p, g.opens));
  return g;
}

TheoremEvaluator::TheoremEvaluator(const GPresheaf& p, const Filter& f, int slots, const ForcingOptions& opts)
    : p_(&p),
      filter_(f),
      model_(generic_model(p, f)),
      tables_(p, slots, opts),
      gen_(model_.structure(), slots),
      members_(member_ids(p, f)) {
  germ_code_.resize(p.opens().size());
  std::vector<int> xs(slots);
  for (int u : members_) {
    auto& gc = germ_code_[u];
    gc.resize(tables_.cells(u));
    for (std::size_t c = 0; c < gc.size(); ++c) {
      decode_tuple(c, tables_.size(u), xs);
      for (int& x : xs) x = model_.germ(p.opens()[u], x).id;
      gc[c] = encode_tuple(xs, model_.structure().size());
    }
  }
}

TheoremCase TheoremEvaluator::evaluate(const ForcingTables::Table& godel, const SatisfactionTables::Table& gen, int u,
                                       std::size_t code) const {
  TheoremCase tc;
  tc.satisfied = gen[germ_code_[u][code]] != 0;
  for (int v : members_) {
    if (!subset(tables_.open(v), tables_.open(u))) continue;
    if (godel[tables_.offset(v) + tables_.restrict_code(u, v, code)] == tables_.open(v)) {
      tc.forced_on_member = true;
      tc.deciding = tables_.open(v);
      break;
    }
  }
  tc.forcing_set = godel[tables_.offset(u) + code];
  tc.set_in_filter = filter_.contains(tc.forcing_set);
  return tc;
}

TheoremCase TheoremEvaluator::evaluate(const Formula& phi, PointSet u, std::size_t code) {
  const auto& godel = tables_.table(godel_translate(phi));
  const auto& gen = gen_.table(phi);
  return evaluate(godel, gen, p_->open_id(u), code);
}

// }}}
// {{{ Formula classes

FormulaClasses::FormulaClasses(TheoremEvaluator& eval, const Signature& sig, const FormulaBound& bound)
    : eval_(&eval), sig_(&sig), bound_(bound) {}

std::size_t FormulaClasses::intern(std::vector<ForcingTables::Table>& pool,
                                   std::map<ForcingTables::Table, std::size_t>& index, ForcingTables::Table t) {
  auto [it, fresh] = index.emplace(std::move(t), pool.size());
  if (fresh) pool.push_back(it->first);
  return it->second;
}

std::size_t FormulaClasses::intern_gen(SatisfactionTables::Table t) {
  auto [it, fresh] = gen_index_.emplace(std::move(t), gen_.size());
  if (fresh) gen_.push_back(it->first);
  return it->second;
}

const std::vector<FormulaClasses::Class>& FormulaClasses::at(int scope, int d) {
  const auto key = std::make_pair(scope, d);
  if (auto it = levels_.find(key); it != levels_.end()) return it->second;
  ForcingTables& t = eval_->tables();
  SatisfactionTables& s = eval_->generic_tables();
  if (scope + d > t.slots()) throw Error("formula classes need more variable slots");

  std::vector<Class> out;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> index;
  auto add = [&](const Formula& rep, std::uint64_t count, ForcingTables::Table plain, ForcingTables::Table godel,
                 SatisfactionTables::Table gen) {
    const auto k = std::make_tuple(intern(plain_, plain_index_, std::move(plain)),
                                   intern(godel_, godel_index_, std::move(godel)), intern_gen(std::move(gen)));
    auto [it, fresh] = index.emplace(k, out.size());
    if (fresh) {
      out.push_back({rep, count, std::get<0>(k), std::get<1>(k), std::get<2>(k)});
    } else {
      out[it->second].count += count;
    }
  };

  for (const auto& atom : enumerate_formulas(*sig_, {0, scope, bound_.term_depth})) {
    const auto plain = t.satisfaction(atom);
    add(atom, 1, plain, t.neg(t.neg(plain)), s.atom(atom));
  }
  if (d > 0) {
    const std::vector<Class> prev = at(scope, d - 1);
    const std::vector<Class> inner = at(scope + 1, d - 1);
    for (const auto& a : prev) {
      add(Formula::neg(a.representative), a.count, t.neg(plain_[a.plain]), t.neg(godel_[a.godel]),
          s.neg(gen_[a.gen]));
    }
    for (const auto& a : prev) {
      for (const auto& b : prev) {
        const std::uint64_t n = a.count * b.count;
        add(Formula::conj(a.representative, b.representative), n, t.conj(plain_[a.plain], plain_[b.plain]),
            t.conj(godel_[a.godel], godel_[b.godel]), s.conj(gen_[a.gen], gen_[b.gen]));
        add(Formula::disj(a.representative, b.representative), n, t.disj(plain_[a.plain], plain_[b.plain]),
            t.neg(t.conj(t.neg(godel_[a.godel]), t.neg(godel_[b.godel]))), s.disj(gen_[a.gen], gen_[b.gen]));
        add(Formula::implies(a.representative, b.representative), n, t.implies(plain_[a.plain], plain_[b.plain]),
            t.implies(godel_[a.godel], godel_[b.godel]), s.implies(gen_[a.gen], gen_[b.gen]));
      }
    }
    for (const auto& a : inner) {
      add(Formula::exists(scope, a.representative), a.count, t.exists(scope, plain_[a.plain]),
          t.neg(t.forall(scope, t.neg(godel_[a.godel]))), s.exists(scope, gen_[a.gen]));
      add(Formula::forall(scope, a.representative), a.count, t.forall(scope, plain_[a.plain]),
          t.forall(scope, godel_[a.godel]), s.forall(scope, gen_[a.gen]));
    }
  }
  return levels_.emplace(key, std::move(out)).first->second;
}

// }}}
// {{{ Genericity

GenericityReport is_generic_filter(const GPresheaf& p, const Filter& f, const FormulaBound& bound,
                                   const ForcingOptions& opts, bool quotient) {
  require_nontrivial(f);
  GenericityReport out;
  out.filter = f;
  out.bound = bound;
  out.report.check = "generic-filter";
  out.report.bounds = bound.to_json();
  out.report.bounds["mode"] = to_string(opts.mode);
  out.report.bounds["filter"] = filter_json(p.space(), f);
  out.report.bounds["method"] = quotient ? "classes" : "formulas";
  const int k = bound.free_vars;
  if (quotient) {
    TheoremEvaluator ev(p, f, bound.slots(), opts);
    ForcingTables& t = ev.tables();
    FormulaClasses classes(ev, p.signature(), bound);
    GenericityScan scan{p, t, ev.members(), out, k};
    for (const auto& c : classes.at(k, bound.depth)) {
      const auto& plain = classes.plain(c.plain);
      scan.decide(plain, t.neg(plain), c.representative, c.count);
    }
    if (bound.depth > 0) {
      for (const auto& c : classes.at(k + 1, bound.depth - 1)) {
        const auto& body = classes.plain(c.plain);
        scan.witness(t.exists(k, body), body, k, c.representative, c.count);
      }
    }
    return out;
  }
  ForcingTables t(p, bound.slots(), opts);
  const auto ids = member_ids(p, f);
  GenericityScan scan{p, t, ids, out, k};
  for (const auto& phi : enumerate_formulas(p.signature(), bound.limits())) {
    scan.decide(t.table(phi), t.table(Formula::neg(phi)), phi, 1);
    if (phi.op() == Op::Exists) scan.witness(t.table(phi), t.table(phi.body()), phi.index(), phi.body(), 1);
  }
  return out;
}

// }}}
// {{{ Theorem

CheckReport check_generic_model_theorem(const GPresheaf& p, const Filter& f, const TheoremOptions& opts) {
  require_nontrivial(f);
  CheckReport r;
  r.check = "generic-model-theorem";
  r.bounds = opts.bound.to_json();
  r.bounds["mode"] = to_string(opts.forcing.mode);
  r.bounds["filter"] = filter_json(p.space(), f);
  r.bounds["method"] = opts.quotient ? "classes" : "formulas";
  if (!opts.assume_preconditions) {
    const CheckReport sheaf = is_sheaf(p);
    if (!sheaf.ok()) {
      r.add("precondition", "presheaf is not a sheaf", sheaf.violations.front().witness);
      return r;
    }
    const GenericityReport g = is_generic_filter(p, f, opts.bound, opts.forcing, opts.quotient);
    if (!g.generic()) {
      Json w = g.report.violations.front().witness;
      w["condition"] = g.report.violations.front().kind;
      r.add("precondition", "filter is not generic up to the bound", w);
      return r;
    }
  }
  TheoremEvaluator ev(p, f, opts.bound.slots(), opts.forcing);
  for (auto& v : validate_structure(ev.model().structure()).violations) {
    v.kind = "colimit-invalid:" + v.kind;
    r.violations.push_back(std::move(v));
  }
  const int k = opts.bound.free_vars;
  long long divergences = 0;
  auto scan = [&](const ForcingTables::Table& godel, const SatisfactionTables::Table& gen, const Formula& rep,
                  std::uint64_t weight) {
    for (int u : ev.members()) {
      for (std::size_t c : leading_codes(ev.tables().size(u), k)) {
        r.cases += static_cast<long long>(weight);
        const TheoremCase tc = ev.evaluate(godel, gen, u, c);
        if (tc.agree()) continue;
        ++divergences;
        Json w{{"formula", to_string(rep, p.signature())},
               {"U", p.space().open_name(p.opens()[u])},
               {"tuple", tuple_json(p.object(u), c, k)},
               {"generic_satisfies", tc.satisfied},
               {"forced_on_member", tc.forced_on_member},
               {"forcing_set", p.space().describe(tc.forcing_set)},
               {"forcing_set_in_filter", tc.set_in_filter}};
        if (tc.forced_on_member) w["deciding_member"] = p.space().open_name(tc.deciding);
        r.add("divergence", "the three statements disagree", std::move(w));
      }
    }
  };
  if (opts.quotient) {
    FormulaClasses classes(ev, p.signature(), opts.bound);
    std::uint64_t formulas = 0;
    const auto& all = classes.at(k, opts.bound.depth);
    for (const auto& c : all) {
      formulas += c.count;
      scan(classes.godel(c.godel), classes.gen(c.gen), c.representative, c.count);
    }
    r.bounds["formulas"] = formulas;
    r.bounds["classes"] = all.size();
  } else {
    const auto phis = enumerate_formulas(p.signature(), opts.bound.limits());
    for (const auto& phi : phis) {
      scan(ev.tables().table(godel_translate(phi)), ev.generic_tables().table(phi), phi, 1);
    }
    r.bounds["formulas"] = phis.size();
  }
  r.bounds["divergences"] = divergences;
  return r;
}

// }}}
// {{{ Maximum principle and double negation

MaximumWitness maximum_principle_witness(const GPresheaf& p, PointSet u, const Formula& phi, int var,
                                         const Section& s, const ForcingOptions& opts) {
  if (!is_exact(p).ok()) throw Error("presheaf is not exact");
  if (!u || !p.space().is_open(u) || !subset(u, s.domain)) throw Error("open is not inside the section domain");
  const int slots = std::max({phi.variable_span(), var + 1, static_cast<int>(s.values.size())});
  ForcingTables t(p, slots, opts);
  const Section r = restrict_section(p, s, u);
  const int uid = p.open_id(u);
  return maximum_principle_witness(t, uid, t.table(phi), var, t.encode(uid, r.values));
}

MaximumWitness maximum_principle_witness(const ForcingTables& t, int uid, const ForcingTables::Table& body, int var,
                                         std::size_t code) {
  const GPresheaf& p = t.presheaf();
  const PointSet u = t.open(uid);
  if (t.exists(var, body)[t.offset(uid) + code] != u) throw Error("the existential is not forced on the open");

  auto forces = [&](int v, int b) {
    return body[t.offset(v) + t.with_slot(v, t.restrict_code(uid, v, code), var, b)] == t.open(v);
  };
  MaximumWitness w;
  int wid = -1;
  for (int v : t.subopens(uid)) {
    for (int b = 0; b < t.size(v) && wid < 0; ++b) {
      if (forces(v, b)) {
        wid = v;
        w.element = b;
      }
    }
    if (wid >= 0) break;
  }
  if (wid < 0) throw Error("no local witness for the forced existential");
  // Extend (V, b) to (W, b') with V strictly inside W and b' restricting to b.
  for (bool grew = true; grew;) {
    grew = false;
    for (int v : t.subopens(uid)) {
      if (v == wid || !subset(t.open(wid), t.open(v))) continue;
      const auto& rho = p.restriction(t.open(v), t.open(wid));
      for (int b = 0; b < t.size(v); ++b) {
        if (rho[b] == w.element && forces(v, b)) {
          wid = v;
          w.element = b;
          grew = true;
          break;
        }
      }
      if (grew) break;
    }
  }
  w.open = t.open(wid);
  return w;
}

CheckReport check_double_negation(const GPresheaf& p, PointSet u, const Formula& phi, const Section& s,
                                  const ForcingOptions& opts) {
  if (!is_positive(phi)) throw Error("double-negation check needs a positive formula");
  if (!u || !p.space().is_open(u) || !subset(u, s.domain)) throw Error("open is not inside the section domain");
  CheckReport r;
  r.check = "double-negation";
  r.bounds["mode"] = to_string(opts.mode);
  const int slots = std::max(phi.variable_span(), static_cast<int>(s.values.size()));
  ForcingTables t(p, slots, opts);
  const Section sec = restrict_section(p, s, u);
  const int uid = p.open_id(u);
  const std::size_t code = t.encode(uid, sec.values);
  const bool lhs = t.table(Formula::neg(Formula::neg(phi)))[t.offset(uid) + code] == u;
  PointSet dense = 0;
  const auto& plain = t.table(phi);
  for (int v : t.subopens(uid)) {
    if (is_dense(p.space(), t.open(v), u) && plain[t.offset(v) + t.restrict_code(uid, v, code)] == t.open(v)) {
      dense = t.open(v);
      break;
    }
  }
  ++r.cases;
  if (lhs != (dense != 0)) {
    r.add("double-negation", "double negation and dense-open forcing disagree",
          {{"formula", to_string(phi, p.signature())},
           {"U", p.space().open_name(u)},
           {"tuple", tuple_json(p.at(u), code, static_cast<int>(sec.values.size()))},
           {"forces_double_negation", lhs},
           {"dense_open", dense ? Json(p.space().open_name(dense)) : Json(nullptr)}});
  }
  return r;
}

// }}}

}  // namespace gsheaf
