#include "gsheaf/search.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "gsheaf/classes.hpp"
#include "gsheaf/document.hpp"

namespace gsheaf {

const std::vector<LemmaInfo>& lemma_catalog() {
  static const std::vector<LemmaInfo> catalog = {
      {"term-commutation", "restrictions commute with term evaluation"},
      {"morphism-preservation", "restrictions preserve positive formulas; submersions, isomorphisms, embeddings"},
      {"colimit-positive", "positive satisfaction in stalks and generic models is decided at some lower index"},
      {"colimit-valid", "stalks and generic models are valid G-structures"},
      {"local-semantics", "a point forces phi iff some open around it forces phi"},
      {"classical-semantics", "at an isolated point forcing is satisfaction in the stalk"},
      {"germ-invariance", "forcing at x does not depend on the open the section lives on"},
      {"restriction", "forcing on an open implies forcing on every smaller open"},
      {"covering", "forcing on every member of a cover implies forcing on the union"},
      {"existential-cover", "an existential is forced iff a cover carries local witnesses"},
      {"positive-collapse", "positive formulas: neighbourhood satisfaction, clauses and stalks agree"},
      {"fast-path", "minimal neighbourhood evaluation agrees with the full open search"},
      {"forcing-set-open", "forcing sets are open"},
      {"maximum-principle", "forced existentials have a witness on a dense open (exact presheaves)"},
      {"maximal-generic", "maximal filters are generic (exact presheaves)"},
      {"double-negation", "not-not phi is forced iff phi is forced on a dense open (positive phi)"},
      {"dense-membership", "maximal filters contain every open dense in a member"},
      {"gmt", "generic model theorem (sheaves, maximal filters)"},
      {"orbit-generic", "orbits of the generic model match the generic model of the orbits (strong sheaves)"},
      {"germ-invariance-literal", "literal quantifier mode: germ invariance of formulas with a universal", true},
  };
  return catalog;
}

bool is_lemma(const std::string& id) {
  const auto& c = lemma_catalog();
  return std::any_of(c.begin(), c.end(), [&](const LemmaInfo& l) { return l.id == id; });
}

namespace {

bool is_finding_lemma(const std::string& id) {
  for (const auto& l : lemma_catalog())
    if (l.id == id) return l.finding;
  return false;
}

Json names_of(const GStructure& m, const std::vector<int>& t) {
  Json out = Json::array();
  for (int x : t) out.push_back(m.names.at(x));
  return out;
}

std::vector<int> decode_prefix(std::size_t code, int n, int k) {
  std::vector<int> t(k);
  decode_tuple(code, n, t);
  return t;
}

Json filter_names(const FiniteSpace& s, const Filter& f) {
  Json out = Json::array();
  for (PointSet u : f.members) out.push_back(s.open_name(u));
  return out;
}

std::vector<Term> commutation_terms(const Signature& sig, int vars) { return enumerate_terms(sig, vars, 3); }

void check_terms(CheckReport& r, const GMorphism& m, int vars) {
  const auto& sig = *m.source.sig;
  const auto terms = commutation_terms(sig, vars);
  for (std::size_t code = 0; code < power(m.source.size(), vars); ++code) {
    const auto a = decode_prefix(code, m.source.size(), vars);
    std::vector<int> b(vars);
    for (int i = 0; i < vars; ++i) b[i] = m.map[a[i]];
    for (const auto& t : terms) {
      ++r.cases;
      const int lhs = m.map[eval_term(m.source, t, a)];
      const int rhs = eval_term(m.target, t, b);
      if (lhs != rhs)
        r.add("term-commutation", "the image of a term value differs from the term at the image",
              {{"term", to_string(t, sig)}, {"tuple", names_of(m.source, a)}, {"image", m.target.names[lhs]},
               {"term_at_image", m.target.names[rhs]}});
    }
  }
}

struct Item {
  Formula phi;
  std::uint8_t flags = 0;
  std::vector<const ForcingTables::Table*> f;
  std::vector<const SatisfactionTables::Table*> s;
};

// Every class at (scope, depth), or the single formula `only`.
template <class Fn>
void for_each_item(const Signature& sig, int term_depth, std::vector<ForcingTables*> fl,
                   std::vector<SatisfactionTables*> sl, int scope, int depth, const std::optional<Formula>& only,
                   Fn fn) {
  if (only) {
    Item it{*only, formula_flags(*only), {}, {}};
    for (auto* t : fl) it.f.push_back(&t->table(*only));
    for (auto* t : sl) it.s.push_back(&t->table(*only));
    fn(it);
    return;
  }
  if (depth < 0) return;
  TableClasses classes(fl, sl, sig, term_depth);
  for (const auto& k : classes.at(scope, depth)) {
    Item it{k.representative, k.flags, {}, {}};
    for (std::size_t l = 0; l < fl.size(); ++l) it.f.push_back(&classes.forcing(static_cast<int>(l), k.forcing[l]));
    for (std::size_t l = 0; l < sl.size(); ++l)
      it.s.push_back(&classes.satisfaction(static_cast<int>(l), k.satisfaction[l]));
    fn(it);
  }
}

class Checker {
 public:
  Checker(std::string id, const GPresheaf& p, const LemmaOptions& o)
      : id_(std::move(id)), p_(p), o_(o), sig_(p.signature()), space_(p.space()) {
    r_.check = id_;
    r_.bounds = o.bound.to_json();
    r_.bounds["mode"] = to_string(o.mode);
    if (o.formula) only_ = parse_formula(*o.formula, sig_);
    fv_ = o.bound.free_vars;
    depth_ = o.bound.depth;
  }

  CheckReport run();

 private:
  ForcingOptions lane(SemanticsMode mode, bool fast = false, bool by_clauses = true) const {
    ForcingOptions f;
    f.mode = mode;
    f.fast_path = fast;
    f.positive_by_clauses = by_clauses;
    return f;
  }
  bool want_open(PointSet u) const { return !o_.open || *o_.open == u; }
  bool want_point(int x) const { return !o_.point || *o_.point == x; }
  int slots() const { return std::max(1, fv_ + depth_); }

  Json query(const std::optional<std::string>& formula, std::optional<PointSet> u, std::optional<int> x) const {
    Json q = o_.bound.to_json();
    q["theorem"] = id_;
    q["mode"] = to_string(id_ == "germ-invariance-literal" ? SemanticsMode::Literal : o_.mode);
    if (formula) q["formula"] = *formula;
    if (u) q["open"] = space_.open_name(*u);
    if (x) q["point"] = space_.point_name(*x);
    return q;
  }
  std::string text(const Formula& phi) const { return to_string(phi, sig_); }

  void add(const std::string& kind, const std::string& detail, Json w, const std::optional<std::string>& formula,
           std::optional<PointSet> u, std::optional<int> x) {
    w["lemma"] = id_;
    w["query"] = query(formula, u, x);
    r_.add(kind, detail, std::move(w));
  }
  void absorb(const CheckReport& sub, const Json& extra, std::optional<PointSet> u = std::nullopt,
              std::optional<int> x = std::nullopt) {
    r_.cases += sub.cases;
    for (const auto& v : sub.violations) {
      Json w = v.witness;
      for (auto it = extra.begin(); it != extra.end(); ++it) w[it.key()] = it.value();
      std::optional<std::string> f;
      if (w.contains("formula") && w["formula"].is_string()) f = w["formula"].get<std::string>();
      add(v.kind, v.detail, std::move(w), f, u, x);
    }
  }
  void skip(const std::string& why) { r_.bounds["skipped"] = why; }

  Json tuple_json(int uid, std::size_t code, int k) const {
    return names_of(p_.object(uid), decode_prefix(code, p_.object(uid).size(), k));
  }
  Section section(int uid, std::size_t code, int k) const {
    return Section{p_.opens()[uid], decode_prefix(code, p_.object(uid).size(), k)};
  }

  void term_commutation();
  void morphism_preservation();
  void colimit_positive();
  void colimit_valid();
  void local_semantics();
  void classical_semantics();
  void restriction_family();
  void covering();
  void existential_cover();
  void positive_collapse();
  void fast_path();
  void forcing_set_open();
  void maximum_principle();
  void maximal_generic();
  void double_negation();
  void dense_membership();
  void gmt();
  void orbit_generic();

  std::string id_;
  const GPresheaf& p_;
  const LemmaOptions& o_;
  const Signature& sig_;
  const FiniteSpace& space_;
  std::optional<Formula> only_;
  int fv_ = 1, depth_ = 2;
  CheckReport r_;
};

CheckReport Checker::run() {
  if (id_ == "term-commutation") term_commutation();
  else if (id_ == "morphism-preservation") morphism_preservation();
  else if (id_ == "colimit-positive") colimit_positive();
  else if (id_ == "colimit-valid") colimit_valid();
  else if (id_ == "local-semantics") local_semantics();
  else if (id_ == "classical-semantics") classical_semantics();
  else if (id_ == "germ-invariance" || id_ == "restriction" || id_ == "germ-invariance-literal") restriction_family();
  else if (id_ == "covering") covering();
  else if (id_ == "existential-cover") existential_cover();
  else if (id_ == "positive-collapse") positive_collapse();
  else if (id_ == "fast-path") fast_path();
  else if (id_ == "forcing-set-open") forcing_set_open();
  else if (id_ == "maximum-principle") maximum_principle();
  else if (id_ == "maximal-generic") maximal_generic();
  else if (id_ == "double-negation") double_negation();
  else if (id_ == "dense-membership") dense_membership();
  else if (id_ == "gmt") gmt();
  else if (id_ == "orbit-generic") orbit_generic();
  else throw Error("unknown lemma '" + id_ + "'");
  return std::move(r_);
}

void Checker::term_commutation() {
  for (PointSet u : p_.opens()) {
    if (!want_open(u)) continue;
    for (PointSet v : p_.opens()) {
      if (v == u || !subset(v, u)) continue;
      CheckReport sub;
      check_terms(sub, GMorphism{p_.at(u), p_.at(v), p_.restriction(u, v)}, std::max(1, fv_));
      absorb(sub, {{"from", space_.open_name(u)}, {"to", space_.open_name(v)}}, u);
    }
  }
}

void Checker::morphism_preservation() {
  for (PointSet u : p_.opens()) {
    if (!want_open(u)) continue;
    for (PointSet v : p_.opens()) {
      if (v == u || !subset(v, u)) continue;
      const auto sub = check_morphism_lemmas(GMorphism{p_.at(u), p_.at(v), p_.restriction(u, v)}, o_.bound, only_);
      absorb(sub, {{"from", space_.open_name(u)}, {"to", space_.open_name(v)}}, u);
    }
  }
}

void Checker::colimit_positive() {
  for (int x = 0; x < space_.num_points(); ++x) {
    if (!want_point(x)) continue;
    std::vector<PointSet> family;
    for (PointSet u : p_.opens())
      if (u >> x & 1u) family.push_back(u);
    absorb(check_colimit_positive(restriction_diagram(p_, family), o_.bound, only_),
           {{"point", space_.point_name(x)}}, std::nullopt, x);
  }
  if (o_.point) return;
  for (const auto& f : maximal_filters(space_))
    absorb(check_colimit_positive(restriction_diagram(p_, f.members), o_.bound, only_),
           {{"filter", filter_names(space_, f)}});
}

void Checker::colimit_valid() {
  auto one = [&](const GStructure& m, Json where) {
    ++r_.cases;
    for (const auto& v : validate_structure(m).violations) {
      Json w = v.witness;
      w["at"] = where;
      add("colimit-invalid:" + v.kind, v.detail, std::move(w), std::nullopt, std::nullopt, std::nullopt);
    }
  };
  for (int x = 0; x < space_.num_points(); ++x)
    if (want_point(x)) one(stalk(p_, x).colimit.structure, {{"point", space_.point_name(x)}});
  for (const auto& f : maximal_filters(space_))
    one(generic_model(p_, f).structure(), {{"filter", filter_names(space_, f)}});
}

void Checker::local_semantics() {
  ForcingTables t(p_, slots(), lane(o_.mode));
  for_each_item(sig_, o_.bound.term_depth, {&t}, {}, fv_, depth_, only_, [&](const Item& it) {
    const auto& tbl = *it.f[0];
    for (int u = 0; u < t.num_opens(); ++u) {
      if (!want_open(t.open(u))) continue;
      for (std::size_t c = 0; c < power(t.size(u), fv_); ++c) {
        PointSet local = 0;
        for (int v : t.subopens(u))
          if (tbl[t.offset(v) + t.restrict_code(u, v, c)] == t.open(v)) local |= t.open(v);
        PointSet forced = tbl[t.offset(u) + c];
        if (o_.point) {
          const PointSet bit = 1u << *o_.point;
          forced &= bit;
          local &= bit;
        }
        ++r_.cases;
        if (forced != local)
          add("local-semantics", "forcing at a point differs from forcing on some open around it",
              {{"formula", text(it.phi)}, {"open", space_.open_name(t.open(u))}, {"tuple", tuple_json(u, c, fv_)},
               {"forcing_set", space_.describe(forced)}, {"local", space_.describe(local)}},
              text(it.phi), t.open(u), o_.point);
      }
    }
  });
}

void Checker::classical_semantics() {
  ForcingTables t(p_, slots(), lane(o_.mode));
  for (int x = 0; x < space_.num_points(); ++x) {
    if (!want_point(x) || !space_.is_open(1u << x)) continue;
    const Stalk st = stalk(p_, x);
    SatisfactionTables s(st.colimit.structure, slots());
    for_each_item(sig_, o_.bound.term_depth, {&t}, {&s}, fv_, depth_, only_, [&](const Item& it) {
      for (int u = 0; u < t.num_opens(); ++u) {
        if (!(t.open(u) >> x & 1u) || !want_open(t.open(u))) continue;
        for (std::size_t c = 0; c < power(t.size(u), fv_); ++c) {
          const auto a = decode_prefix(c, t.size(u), fv_);
          std::vector<int> germs;
          for (int e : a) germs.push_back(st.germ(t.open(u), e).id);
          const bool forced = (*it.f[0])[t.offset(u) + c] >> x & 1u;
          const bool sat = (*it.s[0])[s.encode(germs)] != 0;
          ++r_.cases;
          if (forced != sat)
            add("classical-semantics", "forcing at an isolated point differs from stalk satisfaction",
                {{"formula", text(it.phi)}, {"point", space_.point_name(x)}, {"open", space_.open_name(t.open(u))},
                 {"tuple", tuple_json(u, c, fv_)}, {"forced", forced}, {"stalk", sat}},
                text(it.phi), t.open(u), x);
        }
      }
    });
  }
}

// restriction, germ-invariance and the literal germ-invariance sweep.
void Checker::restriction_family() {
  const bool literal = id_ == "germ-invariance-literal";
  const SemanticsMode mode = literal ? SemanticsMode::Literal : o_.mode;
  if (literal) r_.bounds["mode"] = to_string(mode);
  ForcingTables t(p_, slots(), lane(mode));
  long long divergences = 0;
  for_each_item(sig_, o_.bound.term_depth, {&t}, {}, fv_, depth_, only_, [&](const Item& it) {
    const bool has_forall = it.flags & kHasForall;
    if (literal && !has_forall) return;
    const auto& tbl = *it.f[0];
    for (int u = 0; u < t.num_opens(); ++u) {
      if (!want_open(t.open(u))) continue;
      for (std::size_t c = 0; c < power(t.size(u), fv_); ++c) {
        const PointSet fu = tbl[t.offset(u) + c];
        for (int v : t.subopens(u)) {
          if (v == u) continue;
          const PointSet vset = t.open(v);
          const PointSet fv = tbl[t.offset(v) + t.restrict_code(u, v, c)];
          ++r_.cases;
          Json w = {{"formula", text(it.phi)},     {"open", space_.open_name(t.open(u))},
                    {"sub", space_.open_name(vset)}, {"tuple", tuple_json(u, c, fv_)},
                    {"forcing_set", space_.describe(fu)}, {"sub_forcing_set", space_.describe(fv)}};
          if (id_ == "restriction") {
            if (fu == t.open(u) && fv != vset)
              add("restriction", "forced on an open but not on a smaller open", std::move(w), text(it.phi),
                  t.open(u), std::nullopt);
            continue;
          }
          PointSet diff = (fu & vset) ^ fv;
          if (o_.point) diff &= 1u << *o_.point;
          if (!diff) continue;
          const int x = __builtin_ctz(diff);
          if (!literal) {
            if (mode == SemanticsMode::Local || !has_forall)
              add("germ-invariance", "forcing at a point changes when the section is restricted", std::move(w),
                  text(it.phi), t.open(u), x);
            continue;
          }
          ++divergences;
          if (static_cast<int>(r_.findings.size()) >= o_.max_findings) continue;
          ForcingOptions fo = lane(mode, false, false);
          const Section big = section(u, c, fv_);
          const Section small = restrict_section(p_, big, vset);
          const auto v1 = forces_at(p_, x, it.phi, big, fo);
          const auto v2 = forces_at(p_, x, it.phi, small, fo);
          w["point"] = space_.point_name(x);
          w["verdicts"] = Json::array({v1.to_json(p_), v2.to_json(p_)});
          w["lemma"] = id_;
          w["query"] = query(text(it.phi), t.open(u), x);
          if (v1.verdict != bool(fu >> x & 1u) || v2.verdict != bool(fv >> x & 1u)) {
            add("engine-disagreement", "direct and table engines disagree", w, text(it.phi), t.open(u), x);
          }
          r_.findings.push_back({"germ-invariance-literal",
                                 "literal mode: forcing at a point depends on the open of the section", std::move(w)});
        }
      }
    }
  });
  if (literal) r_.bounds["divergences"] = divergences;
}

void Checker::covering() {
  ForcingTables t(p_, slots(), lane(o_.mode));
  std::vector<std::vector<std::vector<PointSet>>> covers(t.num_opens());
  for (int u = 0; u < t.num_opens(); ++u)
    for (auto& cv : irredundant_covers(space_, t.open(u)))
      if (cv.size() >= 2) covers[u].push_back(std::move(cv));
  for_each_item(sig_, o_.bound.term_depth, {&t}, {}, fv_, depth_, only_, [&](const Item& it) {
    const auto& tbl = *it.f[0];
    for (int u = 0; u < t.num_opens(); ++u) {
      if (!want_open(t.open(u))) continue;
      for (std::size_t c = 0; c < power(t.size(u), fv_); ++c) {
        for (const auto& cover : covers[u]) {
          ++r_.cases;
          bool all = true;
          for (PointSet w : cover) {
            const int wid = p_.open_id(w);
            all = all && tbl[t.offset(wid) + t.restrict_code(u, wid, c)] == w;
          }
          if (all && tbl[t.offset(u) + c] != t.open(u)) {
            Json names = Json::array();
            for (PointSet w : cover) names.push_back(space_.open_name(w));
            add("covering", "forced on every member of a cover but not on the union",
                {{"formula", text(it.phi)}, {"open", space_.open_name(t.open(u))}, {"cover", names},
                 {"tuple", tuple_json(u, c, fv_)}},
                text(it.phi), t.open(u), std::nullopt);
          }
        }
      }
    }
  });
}

void Checker::existential_cover() {
  ForcingTables t(p_, std::max(slots(), fv_ + 1), lane(o_.mode));
  std::optional<Formula> body;
  if (only_) {
    if (only_->op() != Op::Exists || only_->index() != fv_) return;
    body = only_->body();
  }
  for_each_item(sig_, o_.bound.term_depth, {&t}, {}, fv_ + 1, depth_ - 1, body, [&](const Item& it) {
    const auto& psi = *it.f[0];
    const Formula phi = Formula::exists(fv_, it.phi);
    const auto ex = t.exists(fv_, psi);
    for (int u = 0; u < t.num_opens(); ++u) {
      if (!want_open(t.open(u))) continue;
      for (std::size_t c = 0; c < power(t.size(u), fv_); ++c) {
        PointSet covered = 0;
        for (int w : t.subopens(u)) {
          const std::size_t cw = t.restrict_code(u, w, c);
          for (int b = 0; b < t.size(w); ++b)
            if (psi[t.offset(w) + t.with_slot(w, cw, fv_, b)] == t.open(w)) {
              covered |= t.open(w);
              break;
            }
        }
        const bool lhs = ex[t.offset(u) + c] == t.open(u);
        const bool rhs = covered == t.open(u);
        ++r_.cases;
        if (lhs != rhs)
          add("existential-cover", "forcing of an existential differs from the existence of local witnesses",
              {{"formula", text(phi)}, {"open", space_.open_name(t.open(u))}, {"tuple", tuple_json(u, c, fv_)},
               {"forced", lhs}, {"witnessed_cover", space_.describe(covered)}},
              text(phi), t.open(u), std::nullopt);
      }
    }
  });
}

void Checker::positive_collapse() {
  std::vector<Formula> formulas;
  if (only_) {
    if (is_positive(*only_)) formulas.push_back(*only_);
  } else {
    for (auto& phi : enumerate_formulas(sig_, o_.bound.limits()))
      if (is_positive(phi)) formulas.push_back(std::move(phi));
  }
  ForcingTables by_sat(p_, slots(), lane(o_.mode, false, false));
  ForcingTables by_clauses(p_, slots(), lane(o_.mode, false, true));
  std::vector<Stalk> stalks;
  std::vector<SatisfactionTables> stalk_tables;
  for (int x = 0; x < space_.num_points(); ++x) stalks.push_back(stalk(p_, x));
  for (int x = 0; x < space_.num_points(); ++x) stalk_tables.emplace_back(stalks[x].colimit.structure, slots());
  const std::size_t stride =
      o_.direct_sample > 0 ? std::max<std::size_t>(1, formulas.size() / o_.direct_sample) : formulas.size() + 1;

  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const Formula& phi = formulas[i];
    const auto& a = by_sat.table(phi);
    const auto& b = by_clauses.table(phi);
    for (int u = 0; u < by_sat.num_opens(); ++u) {
      const PointSet uset = by_sat.open(u);
      if (!want_open(uset)) continue;
      for (std::size_t c = 0; c < power(by_sat.size(u), fv_); ++c) {
        const std::size_t k = by_sat.offset(u) + c;
        Json w = {{"formula", text(phi)}, {"open", space_.open_name(uset)}, {"tuple", tuple_json(u, c, fv_)}};
        ++r_.cases;
        if (a[k] != b[k]) {
          w["by_satisfaction"] = space_.describe(a[k]);
          w["by_clauses"] = space_.describe(b[k]);
          add("positive-collapse", "neighbourhood satisfaction and the clauses give different forcing sets", w,
              text(phi), uset, std::nullopt);
        }
        const auto tuple = decode_prefix(c, by_sat.size(u), fv_);
        for (int x = 0; x < space_.num_points(); ++x) {
          if (!(uset >> x & 1u) || !want_point(x)) continue;
          std::vector<int> germs;
          for (int e : tuple) germs.push_back(stalks[x].germ(uset, e).id);
          const bool sat = stalk_tables[x].table(phi)[stalk_tables[x].encode(germs)] != 0;
          const bool forced = a[k] >> x & 1u;
          if (sat != forced) {
            Json wx = w;
            wx["point"] = space_.point_name(x);
            wx["forced"] = forced;
            wx["stalk"] = sat;
            add("stalk-collapse", "forcing of a positive formula differs from stalk satisfaction", std::move(wx),
                text(phi), uset, x);
          }
          if (i % stride != 0) continue;
          for (bool clauses : {false, true}) {
            const bool direct = forces_at(p_, x, phi, Section{uset, tuple}, lane(o_.mode, false, clauses)).verdict;
            if (direct != forced) {
              Json wx = w;
              wx["point"] = space_.point_name(x);
              wx["by_clauses"] = clauses;
              wx["direct"] = direct;
              wx["table"] = forced;
              add("direct-collapse", "direct evaluation differs from the forcing table", std::move(wx), text(phi),
                  uset, x);
            }
          }
        }
      }
    }
  }
}

void Checker::fast_path() {
  ForcingTables full(p_, slots(), lane(o_.mode, false));
  ForcingTables fast(p_, slots(), lane(o_.mode, true));
  std::size_t index = 0;
  for_each_item(sig_, o_.bound.term_depth, {&full, &fast}, {}, fv_, depth_, only_, [&](const Item& it) {
    const bool sample = only_ || (o_.direct_sample > 0 && index++ % 7 == 0 &&
                                  static_cast<int>(index / 7) <= o_.direct_sample);
    for (int u = 0; u < full.num_opens(); ++u) {
      const PointSet uset = full.open(u);
      if (!want_open(uset)) continue;
      for (std::size_t c = 0; c < power(full.size(u), fv_); ++c) {
        const std::size_t k = full.offset(u) + c;
        ++r_.cases;
        if ((*it.f[0])[k] != (*it.f[1])[k])
          add("fast-path", "minimal neighbourhood evaluation differs from the full search",
              {{"formula", text(it.phi)}, {"open", space_.open_name(uset)}, {"tuple", tuple_json(u, c, fv_)},
               {"full", space_.describe((*it.f[0])[k])}, {"fast", space_.describe((*it.f[1])[k])}},
              text(it.phi), uset, std::nullopt);
        if (!sample) continue;
        const Section s = section(u, c, fv_);
        for (int x = 0; x < space_.num_points(); ++x) {
          if (!(uset >> x & 1u) || !want_point(x)) continue;
          const bool full_v = forces_at(p_, x, it.phi, s, lane(o_.mode, false, false)).verdict;
          const bool fast_v = forces_at(p_, x, it.phi, s, lane(o_.mode, true, false)).verdict;
          const bool table_v = (*it.f[0])[k] >> x & 1u;
          if (full_v != fast_v || full_v != table_v)
            add("fast-path-direct", "direct fast path, direct full search and tables disagree",
                {{"formula", text(it.phi)}, {"open", space_.open_name(uset)}, {"point", space_.point_name(x)},
                 {"tuple", tuple_json(u, c, fv_)}, {"full", full_v}, {"fast", fast_v}, {"table", table_v}},
                text(it.phi), uset, x);
        }
      }
    }
  });
}

void Checker::forcing_set_open() {
  ForcingTables t(p_, slots(), lane(o_.mode));
  std::size_t index = 0;
  for_each_item(sig_, o_.bound.term_depth, {&t}, {}, fv_, depth_, only_, [&](const Item& it) {
    const bool sample = only_ || (o_.direct_sample > 0 && index++ % 7 == 0 &&
                                  static_cast<int>(index / 7) <= o_.direct_sample);
    for (int u = 0; u < t.num_opens(); ++u) {
      const PointSet uset = t.open(u);
      if (!want_open(uset)) continue;
      for (std::size_t c = 0; c < power(t.size(u), fv_); ++c) {
        const PointSet f = (*it.f[0])[t.offset(u) + c];
        ++r_.cases;
        Json w = {{"formula", text(it.phi)}, {"open", space_.open_name(uset)}, {"tuple", tuple_json(u, c, fv_)},
                  {"forcing_set", space_.describe(f)}};
        if (!space_.is_open(f) || !subset(f, uset))
          add("forcing-set-open", "a forcing set is not an open inside the domain", w, text(it.phi), uset,
              std::nullopt);
        if (!sample) continue;
        const PointSet direct = forcing_set(p_, uset, it.phi, section(u, c, fv_), lane(o_.mode, false, false));
        if (direct != f || !space_.is_open(direct)) {
          w["direct"] = space_.describe(direct);
          add("forcing-set-direct", "direct forcing set differs from the table or is not open", std::move(w),
              text(it.phi), uset, std::nullopt);
        }
      }
    }
  });
}

void Checker::maximum_principle() {
  if (!is_exact(p_).ok()) return skip("not exact");
  const int var = fv_;
  ForcingTables t(p_, fv_ + 1 + std::max(0, depth_), lane(o_.mode));
  for_each_item(sig_, o_.bound.term_depth, {&t}, {}, fv_ + 1, depth_, only_, [&](const Item& it) {
    const auto& body = *it.f[0];
    const auto ex = t.exists(var, body);
    const std::string phi_text = text(Formula::exists(var, it.phi));
    for (int u = 0; u < t.num_opens(); ++u) {
      const PointSet uset = t.open(u);
      if (!want_open(uset)) continue;
      for (std::size_t c = 0; c < power(t.size(u), fv_); ++c) {
        if (ex[t.offset(u) + c] != uset) continue;
        ++r_.cases;
        Json w = {{"formula", text(it.phi)}, {"open", space_.open_name(uset)}, {"tuple", tuple_json(u, c, fv_)}};
        MaximumWitness mw;
        try {
          mw = maximum_principle_witness(t, u, body, var, c);
        } catch (const Error& e) {
          w["error"] = e.what();
          add("no-witness", "forced existential without a witness", std::move(w), text(it.phi), uset, std::nullopt);
          continue;
        }
        Section s = restrict_section(p_, section(u, c, fv_), mw.open);
        s.values.resize(var + 1, -1);
        s.values[var] = mw.element;
        w["witness_open"] = space_.open_name(mw.open);
        w["witness"] = p_.at(mw.open).names[mw.element];
        if (!is_dense(space_, mw.open, uset))
          add("not-dense", "the maximal witness open is not dense in the open", w, text(it.phi), uset, std::nullopt);
        const auto v = forces_on(p_, mw.open, it.phi, s, lane(o_.mode, false, false));
        if (!v.verdict) {
          w["failed_point"] = v.failed_point >= 0 ? Json(space_.point_name(v.failed_point)) : Json();
          add("not-forced", "the witness does not force the formula on its open", std::move(w), text(it.phi), uset,
              std::nullopt);
        }
      }
    }
  });
  r_.bounds["existential"] = "v" + std::to_string(var);
}

void Checker::maximal_generic() {
  if (!is_exact(p_).ok()) return skip("not exact");
  ForcingOptions fo = lane(o_.mode, false, false);
  for (const auto& f : maximal_filters(space_)) {
    const auto g = is_generic_filter(p_, f, o_.bound, fo, o_.quotient);
    CheckReport sub = g.report;
    sub.cases = g.decided + g.witnessed + static_cast<long long>(g.report.violations.size());
    absorb(sub, {{"filter", filter_names(space_, f)}});
  }
}

void Checker::double_negation() {
  ForcingTables t(p_, slots(), lane(o_.mode));
  std::vector<std::vector<std::uint8_t>> dense(t.num_opens(), std::vector<std::uint8_t>(t.num_opens(), 0));
  for (int u = 0; u < t.num_opens(); ++u)
    for (int v : t.subopens(u)) dense[u][v] = is_dense(space_, t.open(v), t.open(u));
  for_each_item(sig_, o_.bound.term_depth, {&t}, {}, fv_, depth_, only_, [&](const Item& it) {
    if (!(it.flags & kPositive)) return;
    const auto& tbl = *it.f[0];
    const auto nn = t.neg(t.neg(tbl));
    for (int u = 0; u < t.num_opens(); ++u) {
      if (!want_open(t.open(u))) continue;
      for (std::size_t c = 0; c < power(t.size(u), fv_); ++c) {
        const bool lhs = nn[t.offset(u) + c] == t.open(u);
        PointSet found = 0;
        for (int v : t.subopens(u))
          if (dense[u][v] && tbl[t.offset(v) + t.restrict_code(u, v, c)] == t.open(v)) {
            found = t.open(v);
            break;
          }
        ++r_.cases;
        if (lhs != (found != 0))
          add("double-negation", "double negation and forcing on a dense open disagree",
              {{"formula", text(it.phi)}, {"open", space_.open_name(t.open(u))}, {"tuple", tuple_json(u, c, fv_)},
               {"double_negation", lhs}, {"dense_open", found ? Json(space_.open_name(found)) : Json()}},
              text(it.phi), t.open(u), std::nullopt);
      }
    }
  });
}

void Checker::dense_membership() {
  auto sub = check_dense_membership(space_);
  if (sub.cases == 0) sub.cases = 1;
  absorb(sub, Json::object());
}

void Checker::gmt() {
  if (!is_sheaf(p_).ok()) return skip("not a sheaf");
  TheoremOptions t;
  t.bound = o_.bound;
  t.forcing = lane(o_.mode, false, false);
  t.quotient = o_.quotient;
  for (const auto& f : maximal_filters(space_))
    absorb(check_generic_model_theorem(p_, f, t), {{"filter", filter_names(space_, f)}});
}

void Checker::orbit_generic() {
  for (PointSet u : p_.opens())
    if (!check_strong(p_.at(u)).ok()) return skip("not strong");
  for (const auto& f : maximal_filters(space_))
    absorb(check_orbit_generic(p_, f), {{"filter", filter_names(space_, f)}});
}

}  // namespace

CheckReport check_lemma(const std::string& id, const GPresheaf& p, const LemmaOptions& opts) {
  return Checker(id, p, opts).run();
}

CheckReport check_morphism_lemmas(const GMorphism& m, const FormulaBound& bound, const std::optional<Formula>& only) {
  CheckReport r;
  r.check = "morphism-lemmas";
  r.bounds = bound.to_json();
  const auto& sig = *m.source.sig;
  const MorphismClass cls = classify_morphism(m, 0);
  r.bounds["submersion"] = cls.submersion;
  r.bounds["embedding"] = cls.embedding;
  r.bounds["isomorphism"] = cls.isomorphism;
  const int fv = bound.free_vars;
  if (!only) check_terms(r, m, std::max(1, fv));

  const int slots = std::max(1, fv + bound.depth);
  SatisfactionTables src(m.source, slots), tgt(m.target, slots);
  for_each_item(sig, bound.term_depth, {}, {&src, &tgt}, fv, bound.depth, only, [&](const Item& it) {
    const bool pos = it.flags & kPositive;
    const bool sub = cls.submersion && (it.flags & kNegationFree);
    const bool iso = cls.isomorphism;
    const bool emb = cls.embedding && (it.flags & kQuantifierFree);
    if (!pos && !sub && !iso && !emb) return;
    for (std::size_t code = 0; code < power(m.source.size(), fv); ++code) {
      const auto a = decode_prefix(code, m.source.size(), fv);
      std::vector<int> b(fv);
      for (int i = 0; i < fv; ++i) b[i] = m.map[a[i]];
      const bool sa = (*it.s[0])[src.encode(a)] != 0;
      const bool sb = (*it.s[1])[tgt.encode(b)] != 0;
      ++r.cases;
      Json w = {{"formula", to_string(it.phi, sig)}, {"tuple", names_of(m.source, a)},
                {"image", names_of(m.target, b)}, {"source", sa}, {"target", sb}};
      if (pos && sa && !sb) r.add("positive-preservation", "a positive formula is not preserved", w);
      if (sub && sa && !sb) r.add("submersion-preservation", "a submersion does not preserve a negation-free formula", w);
      if (iso && sa != sb) r.add("isomorphism-equivalence", "an isomorphism changes satisfaction", w);
      if (emb && sa != sb) r.add("embedding-equivalence", "an embedding changes a quantifier-free formula", w);
    }
  });
  return r;
}

CheckReport check_colimit_positive(const DirectedSystem& sys, const FormulaBound& bound,
                                   const std::optional<Formula>& only) {
  CheckReport r;
  r.check = "colimit-positive";
  r.bounds = bound.to_json();
  const Colimit c = colimit(sys);
  ++r.cases;
  for (const auto& v : validate_structure(c.structure).violations)
    r.add("colimit-invalid:" + v.kind, v.detail, v.witness);
  const auto& sig = *c.structure.sig;
  const int fv = bound.free_vars;
  const int slots = std::max(1, fv + bound.depth);
  std::vector<SatisfactionTables> tables;
  tables.reserve(sys.size() + 1);
  tables.emplace_back(c.structure, slots);
  for (const auto& m : sys.objects) tables.emplace_back(m, slots);
  std::vector<SatisfactionTables*> lanes;
  for (auto& t : tables) lanes.push_back(&t);

  for_each_item(sig, bound.term_depth, {}, lanes, fv, bound.depth, only, [&](const Item& it) {
    if (!(it.flags & kPositive)) return;
    for (int i = 0; i < sys.size(); ++i) {
      const GStructure& mi = sys.objects[i];
      for (std::size_t code = 0; code < power(mi.size(), fv); ++code) {
        const auto a = decode_prefix(code, mi.size(), fv);
        std::vector<int> germs;
        for (int e : a) germs.push_back(c.cocone[i].map[e]);
        const bool lhs = (*it.s[0])[tables[0].encode(germs)] != 0;
        bool rhs = false;
        std::string at;
        for (int k = 0; k < sys.size() && !rhs; ++k) {
          if (!sys.leq[k][i]) continue;
          const auto& arrow = c.arrow(i, k);
          std::vector<int> b;
          for (int e : a) b.push_back(arrow[e]);
          if ((*it.s[k + 1])[tables[k + 1].encode(b)]) {
            rhs = true;
            at = sys.labels.empty() ? std::to_string(k) : sys.labels[k];
          }
        }
        ++r.cases;
        if (lhs != rhs)
          r.add("colimit-positive", "colimit satisfaction differs from satisfaction at a lower index",
                {{"formula", to_string(it.phi, sig)},
                 {"index", sys.labels.empty() ? std::to_string(i) : sys.labels[i]},
                 {"tuple", names_of(mi, a)},
                 {"colimit", lhs}});
      }
    }
  });
  return r;
}

CheckReport check_orbit_generic(const GPresheaf& p, const Filter& f) {
  CheckReport r;
  r.check = "orbit-generic";
  const GenericModel gen = generic_model(p, f);
  const GPresheaf orbits = orbit_presheaf(p);
  const GenericModel orbit_gen = generic_model(orbits, f);
  for (const auto* m : {&gen.structure(), &orbit_gen.structure()})
    for (const auto& v : validate_structure(*m).violations) r.add("colimit-invalid:" + v.kind, v.detail, v.witness);
  const GStructure lhs = orbit_structure(gen.structure());
  ++r.cases;
  if (!find_isomorphism(lhs, orbit_gen.structure(), false))
    r.add("orbit-generic", "the orbit structure of the generic model is not isomorphic to the orbit generic model",
          {{"orbits_of_generic", structure_to_json(lhs)}, {"generic_of_orbits", structure_to_json(orbit_gen.structure())}});
  return r;
}

// {{{ Shrinking

namespace {

struct Parts {
  FiniteSpace space;
  std::map<PointSet, GStructure> objects;
};

// Covering edges of the family, with maps read off p's composites.
GPresheaf assemble(const GPresheaf& p, const FiniteSpace& space, std::map<PointSet, GStructure> objects,
                   const std::function<PointSet(PointSet)>& source_of) {
  const auto opens = space.nonempty_opens();
  std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges;
  for (PointSet u : opens)
    for (PointSet v : opens) {
      if (v == u || !subset(v, u)) continue;
      bool between = false;
      for (PointSet w : opens) between = between || (w != u && w != v && subset(v, w) && subset(w, u));
      if (!between) edges[{u, v}] = p.restriction(source_of(u), source_of(v));
    }
  return GPresheaf(space, std::move(objects), std::move(edges));
}

std::optional<GPresheaf> drop_point(const GPresheaf& p, int x) {
  const FiniteSpace& s = p.space();
  if (s.num_points() <= 1) return std::nullopt;
  auto squeeze = [&](PointSet u) {
    const PointSet low = u & ((1u << x) - 1);
    return low | ((u >> (x + 1)) << x);
  };
  // Each trace on the remaining points takes the smallest open with that trace.
  std::map<PointSet, PointSet> source;
  for (PointSet u : s.nonempty_opens()) {
    const PointSet trace = squeeze(u & ~(1u << x));
    if (!trace) continue;
    auto it = source.find(trace);
    if (it == source.end() || subset(u, it->second)) source[trace] = u;
  }
  std::vector<std::string> points;
  for (int i = 0; i < s.num_points(); ++i)
    if (i != x) points.push_back(s.point_name(i));
  std::vector<PointSet> opens{0};
  std::map<PointSet, std::string> names;
  std::map<PointSet, GStructure> objects;
  for (const auto& [trace, u] : source) {
    opens.push_back(trace);
    objects.emplace(trace, p.at(u));
    if (s.open_name(u) != s.describe(u)) names[trace] = s.open_name(u);
  }
  std::sort(opens.begin(), opens.end(),
            [](PointSet a, PointSet b) { return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b; });
  const FiniteSpace space(points, opens, names);
  if (!validate_space(space).ok()) return std::nullopt;
  return assemble(p, space, std::move(objects), [&](PointSet t) { return source.at(t); });
}

std::optional<GPresheaf> drop_open(const GPresheaf& p, PointSet drop) {
  const FiniteSpace& s = p.space();
  if (drop == s.whole() || drop == 0) return std::nullopt;
  std::vector<PointSet> opens;
  for (PointSet u : s.opens())
    if (u != drop) opens.push_back(u);
  std::map<PointSet, std::string> names;
  for (PointSet u : opens)
    if (u && s.open_name(u) != s.describe(u)) names[u] = s.open_name(u);
  const FiniteSpace space(s.points(), opens, names);
  if (!validate_space(space).ok()) return std::nullopt;
  std::map<PointSet, GStructure> objects;
  for (PointSet u : space.nonempty_opens()) objects.emplace(u, p.at(u));
  return assemble(p, space, std::move(objects), [](PointSet u) { return u; });
}

// Removes an orbit of M_u together with everything above restricting into it.
std::optional<GPresheaf> drop_orbit(const GPresheaf& p, PointSet u, int seed) {
  const auto& opens = p.opens();
  std::map<PointSet, std::vector<bool>> gone;
  for (PointSet w : opens) gone[w].assign(p.at(w).size(), false);
  const GStructure& m = p.at(u);
  for (int g = 0; g < m.group->order(); ++g) gone[u][m.act(g, seed)] = true;
  for (PointSet w : opens) {  // canonical order: smaller opens first
    if (w == u || !subset(u, w)) continue;
    for (PointSet v : opens) {
      if (v == w || !subset(v, w)) continue;
      const auto& rho = p.restriction(w, v);
      for (int x = 0; x < p.at(w).size(); ++x)
        if (gone[v][rho[x]]) gone[w][x] = true;
    }
  }
  std::map<PointSet, GStructure> objects;
  for (PointSet w : opens) {
    const GStructure& mw = p.at(w);
    std::vector<int> keep;
    for (int x = 0; x < mw.size(); ++x)
      if (!gone[w][x]) keep.push_back(x);
    if (keep.empty()) return std::nullopt;
    if (static_cast<int>(keep.size()) == mw.size()) {
      objects.emplace(w, mw);
      continue;
    }
    for (int c : mw.constants)
      if (gone[w][c]) return std::nullopt;
    for (std::size_t f = 0; f < mw.functions.size(); ++f) {
      std::vector<int> t(mw.sig->functions()[f].arity);
      for (std::size_t code = 0; code < mw.functions[f].size(); ++code) {
        decode_tuple(code, mw.size(), t);
        if (std::any_of(t.begin(), t.end(), [&](int x) { return gone[w][x]; })) continue;
        if (gone[w][mw.functions[f][code]]) return std::nullopt;
      }
    }
    objects.emplace(w, induced_substructure(mw, keep));
  }
  std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges;
  for (const auto& [key, map] : p.edges()) {
    std::vector<int> index(p.at(key.second).size(), -1);
    int next = 0;
    for (int x = 0; x < static_cast<int>(index.size()); ++x)
      if (!gone[key.second][x]) index[x] = next++;
    std::vector<int> out;
    for (int x = 0; x < static_cast<int>(map.size()); ++x)
      if (!gone[key.first][x]) out.push_back(index[map[x]]);
    edges[key] = std::move(out);
  }
  return GPresheaf(p.space(), std::move(objects), std::move(edges));
}

}  // namespace

GPresheaf shrink_presheaf(const GPresheaf& p, const std::function<bool(const GPresheaf&)>& still_fails,
                          int max_steps) {
  GPresheaf cur = p;
  auto accept = [&](std::optional<GPresheaf> q) {
    if (!q) return false;
    try {
      if (!validate_presheaf(*q).ok() || !still_fails(*q)) return false;
    } catch (const Error&) {
      return false;
    }
    cur = std::move(*q);
    return true;
  };
  for (int step = 0; step < max_steps; ++step) {
    bool moved = false;
    for (int x = 0; x < cur.space().num_points() && !moved; ++x) moved = accept(drop_point(cur, x));
    for (std::size_t i = 0; i < cur.space().opens().size() && !moved; ++i)
      moved = accept(drop_open(cur, cur.space().opens()[i]));
    for (std::size_t i = 0; i < cur.opens().size() && !moved; ++i) {
      const PointSet u = cur.opens()[i];
      std::vector<bool> seen(cur.at(u).size(), false);
      for (int x = 0; x < cur.at(u).size() && !moved; ++x) {
        if (seen[x]) continue;
        for (int g = 0; g < cur.group().order(); ++g) seen[cur.at(u).act(g, x)] = true;
        moved = accept(drop_orbit(cur, u, x));
      }
    }
    if (!moved) break;
  }
  return cur;
}

// }}}
// {{{ Search

namespace {

struct Instance {
  std::string label;
  Json origin;
  GPresheaf presheaf;
};

std::vector<Instance> search_corpus(const SearchOptions& o) {
  std::vector<Instance> out;
  if (o.exhaustive) {
    int i = 0;
    for (auto& p : sierpinski_unary_presheaves(2)) {
      out.push_back({"sierpinski-" + std::to_string(i), {{"corpus", "sierpinski"}, {"index", i}}, std::move(p)});
      ++i;
    }
  }
  const Rng root(o.seed);
  for (int i = 0; i < o.budget; ++i) {
    const std::uint64_t seed = root.derive(static_cast<std::uint64_t>(i)).next();
    out.push_back({"random-" + std::to_string(i),
                   {{"corpus", "random"}, {"index", i}, {"seed", seed}},
                   generate_random_presheaf(seed, o.limits)});
  }
  return out;
}

}  // namespace

CheckReport counterexample_search(const SearchOptions& o) {
  std::vector<std::string> targets = o.targets;
  if (targets.empty())
    for (const auto& l : lemma_catalog()) targets.push_back(l.id);
  for (const auto& t : targets)
    if (!is_lemma(t)) throw Error("unknown lemma '" + t + "'");

  const auto corpus = search_corpus(o);
  const std::size_t tasks = corpus.size() * targets.size();
  std::vector<CheckReport> results(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < tasks;) {
      const auto& target = targets[k / corpus.size()];
      const auto& inst = corpus[k % corpus.size()];
      try {
        results[k] = check_lemma(target, inst.presheaf, o.lemma);
      } catch (const Error& e) {
        results[k].check = target;
        results[k].add("error", e.what(), {{"lemma", target}});
      }
    }
  };
  const unsigned n = o.threads > 0 ? o.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CheckReport out;
  out.check = "counterexample-search";
  out.bounds = o.lemma.bound.to_json();
  out.bounds["mode"] = to_string(o.lemma.mode);
  out.bounds["seed"] = o.seed;
  out.bounds["budget"] = o.budget;
  out.bounds["instances"] = corpus.size();
  out.bounds["targets"] = targets;
  Json per = Json::object();
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const std::string& target = targets[ti];
    const bool finding = is_finding_lemma(target);
    long long cases = 0, violations = 0, findings = 0, skipped = 0, reported = 0, divergences = 0;
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
      const CheckReport& r = results[ti * corpus.size() + ci];
      cases += r.cases;
      violations += static_cast<long long>(r.violations.size());
      findings += static_cast<long long>(r.findings.size());
      if (r.bounds.contains("skipped")) ++skipped;
      divergences += r.bounds.value("divergences", 0LL);
      const bool failing = !r.violations.empty() || (finding && !r.findings.empty());
      if (!failing) continue;
      if (reported >= o.max_reported) {
        // Unshrunk, but still counted and replayable on the original document.
        continue;
      }
      ++reported;
      const bool use_violation = !r.violations.empty();
      const std::string kind = use_violation ? r.violations.front().kind : r.findings.front().kind;
      auto still = [&](const GPresheaf& q) {
        const auto rq = check_lemma(target, q, o.lemma);
        if (use_violation)
          return std::any_of(rq.violations.begin(), rq.violations.end(),
                             [&](const Violation& v) { return v.kind == kind; });
        return !rq.findings.empty();
      };
      GPresheaf shrunk = corpus[ci].presheaf;
      if (r.violations.empty() || r.violations.front().kind != "error") shrunk = shrink_presheaf(shrunk, still);
      CheckReport again = check_lemma(target, shrunk, o.lemma);
      const auto& list = use_violation ? again.violations : again.findings;
      auto it = std::find_if(list.begin(), list.end(), [&](const Violation& v) { return v.kind == kind; });
      Violation v = it != list.end() ? *it : (use_violation ? r.violations.front() : r.findings.front());
      if (it == list.end()) shrunk = corpus[ci].presheaf;
      v.witness["document"] = document_to_json(shrunk, o.lemma.mode);
      v.witness["instance"] = corpus[ci].origin;
      v.detail = target + ": " + v.detail;
      if (use_violation) {
        out.violations.push_back(std::move(v));
      } else {
        out.findings.push_back(std::move(v));
      }
    }
    out.cases += cases;
    per[target] = {{"cases", cases}, {"violations", violations}, {"findings", findings}, {"skipped", skipped}};
    if (finding) per[target]["divergences"] = divergences;
  }
  out.bounds["per_target"] = per;
  return out;
}

CheckReport replay_query(const Json& witness) {
  if (!witness.contains("document") || !witness.contains("query")) throw Error("witness has no document or query");
  LoadOptions lo;
  lo.validate = false;
  const Document doc = parse_document(witness["document"].dump(), lo);
  const Json& q = witness["query"];
  LemmaOptions o;
  o.bound.depth = q.value("depth", o.bound.depth);
  o.bound.free_vars = q.value("free_vars", o.bound.free_vars);
  o.bound.term_depth = q.value("term_depth", o.bound.term_depth);
  o.mode = parse_semantics_mode(q.value("mode", std::string("local")));
  if (q.contains("formula")) o.formula = q["formula"].get<std::string>();
  if (q.contains("open")) o.open = doc.presheaf.space().open_by_name(q["open"].get<std::string>());
  if (q.contains("point")) o.point = doc.presheaf.space().point_index(q["point"].get<std::string>());
  o.max_findings = 1 << 20;
  return check_lemma(q.at("theorem").get<std::string>(), doc.presheaf, o);
}

bool replays(const Json& witness) {
  Json core = witness;
  core.erase("document");
  core.erase("instance");
  const CheckReport r = replay_query(witness);
  for (const auto* list : {&r.violations, &r.findings})
    for (const auto& v : *list)
      if (v.witness == core) return true;
  return false;
}

// }}}

}  // namespace gsheaf
