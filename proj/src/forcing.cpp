#include "gsheaf/forcing.hpp"

#include <algorithm>

namespace gsheaf {

const char* to_string(SemanticsMode mode) { return mode == SemanticsMode::Literal ? "literal" : "local"; }

SemanticsMode parse_semantics_mode(const std::string& text) {
  if (text == "literal") return SemanticsMode::Literal;
  if (text == "local") return SemanticsMode::Local;
  throw Error("unknown semantics mode '" + text + "' (expected literal or local)");
}

// {{{ Direct evaluation

namespace {

class Direct {
 public:
  Direct(const GPresheaf& p, const ForcingOptions& opts) : p_(p), opts_(opts) {}

  // Opens V with x in V inside u, largest first.
  std::vector<PointSet> neighbourhoods(int x, PointSet u) const {
    std::vector<PointSet> out;
    const auto& opens = p_.opens();
    for (auto it = opens.rbegin(); it != opens.rend(); ++it) {
      if ((*it >> x & 1u) && subset(*it, u)) out.push_back(*it);
    }
    return out;
  }

  std::vector<PointSet> candidates(int x, PointSet u, bool antitone) const {
    if (antitone && opts_.fast_path) return {min_open_nbhd(p_.space(), x) & u};
    return neighbourhoods(x, u);
  }

  bool by_satisfaction(const Formula& phi) const {
    return phi.is_atomic() || (!opts_.positive_by_clauses && is_positive(phi));
  }

  static Section with(const Section& s, int var, int value) {
    Section r = s;
    if (static_cast<int>(r.values.size()) <= var) r.values.resize(var + 1, -1);
    r.values[var] = value;
    return r;
  }

  // The clause condition of phi at a fixed open v (and element b for the
  // quantifier clauses). x is the evaluation point.
  bool clause(int x, const Formula& phi, const Section& s, PointSet v, int b) const {
    const Section r = restrict_section(p_, s, v);
    if (by_satisfaction(phi)) return satisfies(p_.at(v), phi, r.values);
    switch (phi.op()) {
      case Op::Exists:
        return force(x, phi.body(), with(r, phi.index(), b), nullptr);
      case Op::Not:
        for (int y = 0; y < p_.space().num_points(); ++y) {
          if ((v >> y & 1u) && force(y, phi.body(), r, nullptr)) return false;
        }
        return true;
      case Op::Implies:
        for (int y = 0; y < p_.space().num_points(); ++y) {
          if ((v >> y & 1u) && force(y, phi.left(), r, nullptr) && !force(y, phi.right(), r, nullptr)) return false;
        }
        return true;
      case Op::Forall: {
        std::vector<PointSet> ws{v};
        if (opts_.mode == SemanticsMode::Local) {
          ws.clear();
          for (PointSet w : p_.opens()) {
            if (subset(w, v)) ws.push_back(w);
          }
        }
        for (PointSet w : ws) {
          const Section rw = restrict_section(p_, r, w);
          for (int y = 0; y < p_.space().num_points(); ++y) {
            if (!(w >> y & 1u)) continue;
            for (int e = 0; e < p_.at(w).size(); ++e) {
              if (!force(y, phi.body(), with(rw, phi.index(), e), nullptr)) return false;
            }
          }
        }
        return true;
      }
      default:
        throw Error("no clause at a fixed open for this connective");
    }
  }

  bool force(int x, const Formula& phi, const Section& s, std::vector<WitnessStep>* trail) const {
    if (by_satisfaction(phi)) return search(x, phi, s, true, "satisfaction", trail);
    switch (phi.op()) {
      case Op::And: {
        const std::size_t mark = trail ? trail->size() : 0;
        if (force(x, phi.left(), s, trail) && force(x, phi.right(), s, trail)) return true;
        if (trail) trail->resize(mark);
        return false;
      }
      case Op::Or:
        return force(x, phi.left(), s, trail) || force(x, phi.right(), s, trail);
      case Op::Not:
        return search(x, phi, s, true, "not", trail);
      case Op::Implies:
        return search(x, phi, s, true, "implies", trail);
      case Op::Forall:
        return search(x, phi, s, opts_.mode == SemanticsMode::Local, "forall", trail);
      case Op::Exists:
        for (PointSet v : candidates(x, s.domain, false)) {
          const Section r = restrict_section(p_, s, v);
          for (int b = 0; b < p_.at(v).size(); ++b) {
            const std::size_t mark = trail ? trail->size() : 0;
            if (trail) trail->push_back({"exists", x, phi, s, v, b});
            if (force(x, phi.body(), with(r, phi.index(), b), trail)) return true;
            if (trail) trail->resize(mark);
          }
        }
        return false;
      default:
        break;
    }
    return false;
  }

 private:
  bool search(int x, const Formula& phi, const Section& s, bool antitone, const char* name,
              std::vector<WitnessStep>* trail) const {
    for (PointSet v : candidates(x, s.domain, antitone)) {
      if (clause(x, phi, s, v, -1)) {
        if (trail) trail->push_back({name, x, phi, s, v, -1});
        return true;
      }
    }
    return false;
  }

  const GPresheaf& p_;
  ForcingOptions opts_;
};

void check_section(const GPresheaf& p, const Formula& phi, const Section& s) {
  if (!s.domain || !p.space().is_open(s.domain)) throw Error("section domain is not a nonempty open");
  const GStructure& m = p.at(s.domain);
  for (int v : free_variables(phi)) {
    if (v >= static_cast<int>(s.values.size()) || s.values[v] < 0) {
      throw Error("free variable v" + std::to_string(v) + " is unassigned");
    }
  }
  for (int e : s.values) {
    if (e >= m.size()) throw Error("section value outside the universe of " + p.space().open_name(s.domain));
  }
}

Section padded(const Formula& phi, Section s) {
  if (static_cast<int>(s.values.size()) < phi.variable_span()) s.values.resize(phi.variable_span(), -1);
  return s;
}

Json section_json(const GPresheaf& p, const Section& s) {
  Json vals = Json::array();
  for (int e : s.values) vals.push_back(e < 0 ? Json(nullptr) : Json(p.at(s.domain).names[e]));
  return {{"open", p.space().open_name(s.domain)}, {"values", vals}};
}

}  // namespace

ForcingVerdict forces_at(const GPresheaf& p, int x, const Formula& phi, const Section& s,
                         const ForcingOptions& opts) {
  check_section(p, phi, s);
  if (x < 0 || x >= p.space().num_points()) throw Error("unknown point index " + std::to_string(x));
  if (!(s.domain >> x & 1u)) throw Error("point lies outside the section domain");
  ForcingVerdict out;
  out.point = x;
  out.formula = phi;
  out.section = padded(phi, s);
  out.mode = opts.mode;
  out.verdict = Direct(p, opts).force(x, phi, out.section, &out.trail);
  return out;
}

ForcingVerdict forces_on(const GPresheaf& p, PointSet u, const Formula& phi, const Section& s,
                         const ForcingOptions& opts) {
  check_section(p, phi, s);
  if (!u || !p.space().is_open(u) || !subset(u, s.domain)) throw Error("open is not inside the section domain");
  ForcingVerdict out;
  out.open = u;
  out.formula = phi;
  out.section = padded(phi, restrict_section(p, s, u));
  out.mode = opts.mode;
  out.verdict = true;
  Direct d(p, opts);
  for (int x = 0; x < p.space().num_points() && out.verdict; ++x) {
    if (!(u >> x & 1u)) continue;
    if (!d.force(x, phi, out.section, &out.trail)) {
      out.verdict = false;
      out.failed_point = x;
    }
  }
  if (!out.verdict) out.trail.clear();
  return out;
}

PointSet forcing_set(const GPresheaf& p, PointSet u, const Formula& phi, const Section& s,
                     const ForcingOptions& opts) {
  check_section(p, phi, s);
  if (!subset(u, s.domain)) throw Error("open is not inside the section domain");
  if (!u) return 0;
  const Section r = padded(phi, restrict_section(p, s, u));
  Direct d(p, opts);
  PointSet out = 0;
  for (int x = 0; x < p.space().num_points(); ++x) {
    if ((u >> x & 1u) && d.force(x, phi, r, nullptr)) out |= 1u << x;
  }
  return out;
}

bool replay_step(const GPresheaf& p, const WitnessStep& step, const ForcingOptions& opts) {
  if (!(step.open >> step.point & 1u) || !subset(step.open, step.section.domain)) return false;
  return Direct(p, opts).clause(step.point, step.formula, step.section, step.open, step.element);
}

Json ForcingVerdict::to_json(const GPresheaf& p) const {
  Json j;
  if (point >= 0) j["point"] = p.space().point_name(point);
  if (open) j["open"] = p.space().open_name(open);
  j["formula"] = to_string(formula, p.signature());
  j["section"] = section_json(p, section);
  j["mode"] = to_string(mode);
  j["verdict"] = verdict;
  if (failed_point >= 0) j["fails_at"] = p.space().point_name(failed_point);
  Json steps = Json::array();
  for (const auto& s : trail) {
    Json e;
    e["clause"] = s.clause;
    e["point"] = p.space().point_name(s.point);
    e["formula"] = to_string(s.formula, p.signature());
    e["open"] = p.space().open_name(s.open);
    if (s.element >= 0) {
      e["variable"] = "v" + std::to_string(s.formula.index());
      e["element"] = p.at(s.open).names[s.element];
    }
    steps.push_back(std::move(e));
  }
  j["witnesses"] = std::move(steps);
  return j;
}

// }}}
// {{{ Tables

ForcingTables::ForcingTables(const GPresheaf& p, int slots, const ForcingOptions& opts)
    : p_(&p), slots_(slots), opts_(opts), opens_(p.opens()) {
  const int n = static_cast<int>(opens_.size());
  offset_.push_back(0);
  for (int u = 0; u < n; ++u) {
    sizes_.push_back(p.object(u).size());
    count_.push_back(power(sizes_[u], slots));
    offset_.push_back(offset_[u] + count_[u]);
    std::vector<std::size_t> st(slots + 1, 1);
    for (int v = 1; v <= slots; ++v) st[v] = st[v - 1] * sizes_[u];
    stride_.push_back(std::move(st));
  }
  sub_.resize(n);
  restrict_.assign(n, std::vector<std::vector<std::size_t>>(n));
  std::vector<int> xs(slots);
  for (int u = 0; u < n; ++u) {
    for (int v = n - 1; v >= 0; --v) {
      if (!subset(opens_[v], opens_[u])) continue;
      sub_[u].push_back(v);
      const auto& rho = p.restriction(opens_[u], opens_[v]);
      auto& rc = restrict_[u][v];
      rc.resize(count_[u]);
      for (std::size_t c = 0; c < count_[u]; ++c) {
        decode_tuple(c, sizes_[u], xs);
        for (int& x : xs) x = rho[x];
        rc[c] = encode_tuple(xs, sizes_[v]);
      }
    }
  }
  nbhd_.assign(n, std::vector<int>(p.space().num_points(), -1));
  for (int u = 0; u < n; ++u)
    for (int x = 0; x < p.space().num_points(); ++x)
      if (opens_[u] >> x & 1u) nbhd_[u][x] = p.open_id(min_open_nbhd(p.space(), x) & opens_[u]);
}

template <class Good>
ForcingTables::Table ForcingTables::gather(Good good, bool fast) const {
  Table out(total(), 0);
  for (int u = 0; u < num_opens(); ++u) {
    for (std::size_t c = 0; c < count_[u]; ++c) {
      PointSet r = 0;
      if (fast) {
        for (int x = 0; x < static_cast<int>(nbhd_[u].size()); ++x) {
          const int v = nbhd_[u][x];
          if (v >= 0 && good(v, restrict_[u][v][c])) r |= 1u << x;
        }
      } else {
        for (int v : sub_[u])
          if (!subset(opens_[v], r) && good(v, restrict_[u][v][c])) r |= opens_[v];
      }
      out[offset_[u] + c] = r;
    }
  }
  return out;
}

std::size_t ForcingTables::encode(int u, const std::vector<int>& tuple) const {
  std::vector<int> xs(slots_, 0);
  for (std::size_t i = 0; i < tuple.size() && static_cast<int>(i) < slots_; ++i) xs[i] = std::max(tuple[i], 0);
  return encode_tuple(xs, sizes_[u]);
}

std::size_t ForcingTables::with_slot(int v, std::size_t code, int var, int value) const {
  const std::size_t st = stride_[v][var];
  const int digit = static_cast<int>(code / st % sizes_[v]);
  return code + (static_cast<std::size_t>(value) - digit) * st;
}

ForcingTables::Table ForcingTables::satisfaction(const Formula& phi) const {
  std::vector<std::vector<std::uint8_t>> sat(num_opens());
  std::vector<int> xs(slots_);
  for (int v = 0; v < num_opens(); ++v) {
    sat[v].resize(count_[v]);
    for (std::size_t c = 0; c < count_[v]; ++c) {
      decode_tuple(c, sizes_[v], xs);
      sat[v][c] = satisfies(p_->object(v), phi, xs);
    }
  }
  return gather([&](int v, std::size_t c) { return sat[v][c] != 0; }, opts_.fast_path);
}

ForcingTables::Table ForcingTables::neg(const Table& a) const {
  return gather([&](int v, std::size_t c) { return a[offset_[v] + c] == 0; }, opts_.fast_path);
}

ForcingTables::Table ForcingTables::implies(const Table& a, const Table& b) const {
  return gather([&](int v, std::size_t c) { return subset(a[offset_[v] + c], b[offset_[v] + c]); },
                opts_.fast_path);
}

ForcingTables::Table ForcingTables::conj(const Table& a, const Table& b) const {
  Table out(total());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] & b[i];
  return out;
}

ForcingTables::Table ForcingTables::disj(const Table& a, const Table& b) const {
  Table out(total());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] | b[i];
  return out;
}

ForcingTables::Table ForcingTables::exists(int var, const Table& a) const {
  Table out(total(), 0);
  for (int u = 0; u < num_opens(); ++u) {
    for (std::size_t c = 0; c < count_[u]; ++c) {
      PointSet r = 0;
      for (int v : sub_[u]) {
        const std::size_t cv = restrict_[u][v][c];
        for (int b = 0; b < sizes_[v]; ++b) r |= a[offset_[v] + with_slot(v, cv, var, b)];
      }
      out[offset_[u] + c] = r;
    }
  }
  return out;
}

ForcingTables::Table ForcingTables::forall(int var, const Table& a) const {
  // good[v][c]: the clause condition holds at v for the tuple c.
  std::vector<std::vector<std::uint8_t>> good(num_opens());
  for (int v = 0; v < num_opens(); ++v) {
    good[v].resize(count_[v]);
    for (std::size_t c = 0; c < count_[v]; ++c) {
      bool ok = true;
      for (int b = 0; b < sizes_[v] && ok; ++b) ok = a[offset_[v] + with_slot(v, c, var, b)] == opens_[v];
      good[v][c] = ok;
    }
  }
  if (opts_.mode == SemanticsMode::Local) {
    auto lit = good;
    for (int v = 0; v < num_opens(); ++v) {
      for (std::size_t c = 0; c < count_[v]; ++c) {
        bool ok = true;
        for (int w : sub_[v]) ok = ok && lit[w][restrict_[v][w][c]];
        good[v][c] = ok;
      }
    }
  }
  auto is_good = [&](int v, std::size_t c) { return good[v][c] != 0; };
  // The literal clause is not antitone in V, so the fast path does not apply.
  return gather(is_good, opts_.fast_path && opts_.mode == SemanticsMode::Local);
}

const ForcingTables::Table& ForcingTables::table(const Formula& phi) {
  if (auto it = memo_.find(phi); it != memo_.end()) return it->second;
  if (phi.variable_span() > slots_) throw Error("formula uses more variables than the table has slots");
  Table t;
  if (phi.is_atomic() || (!opts_.positive_by_clauses && is_positive(phi))) {
    t = satisfaction(phi);
  } else {
    switch (phi.op()) {
      case Op::And:
        t = conj(table(phi.left()), table(phi.right()));
        break;
      case Op::Or:
        t = disj(table(phi.left()), table(phi.right()));
        break;
      case Op::Implies:
        t = implies(table(phi.left()), table(phi.right()));
        break;
      case Op::Not:
        t = neg(table(phi.body()));
        break;
      case Op::Exists:
        t = exists(phi.index(), table(phi.body()));
        break;
      case Op::Forall:
        t = forall(phi.index(), table(phi.body()));
        break;
      default:
        break;
    }
  }
  return memo_.emplace(phi, std::move(t)).first->second;
}

PointSet ForcingTables::forcing_set(const Formula& phi, PointSet u, const std::vector<int>& tuple) {
  const int id = p_->open_id(u);
  return table(phi)[offset_[id] + encode(id, tuple)];
}

SatisfactionTables::SatisfactionTables(const GStructure& m, int slots) : m_(&m), slots_(slots) {
  stride_.assign(slots + 1, 1);
  for (int v = 1; v <= slots; ++v) stride_[v] = stride_[v - 1] * m.size();
  total_ = stride_[slots];
}

std::size_t SatisfactionTables::encode(const std::vector<int>& tuple) const {
  std::vector<int> xs(slots_, 0);
  for (std::size_t i = 0; i < tuple.size() && static_cast<int>(i) < slots_; ++i) xs[i] = std::max(tuple[i], 0);
  return encode_tuple(xs, m_->size());
}

SatisfactionTables::Table SatisfactionTables::atom(const Formula& phi) const {
  Table out(total_);
  std::vector<int> xs(slots_);
  for (std::size_t c = 0; c < total_; ++c) {
    decode_tuple(c, m_->size(), xs);
    out[c] = satisfies(*m_, phi, xs);
  }
  return out;
}

SatisfactionTables::Table SatisfactionTables::neg(const Table& a) const {
  Table out(total_);
  for (std::size_t c = 0; c < total_; ++c) out[c] = !a[c];
  return out;
}

SatisfactionTables::Table SatisfactionTables::conj(const Table& a, const Table& b) const {
  Table out(total_);
  for (std::size_t c = 0; c < total_; ++c) out[c] = a[c] && b[c];
  return out;
}

SatisfactionTables::Table SatisfactionTables::disj(const Table& a, const Table& b) const {
  Table out(total_);
  for (std::size_t c = 0; c < total_; ++c) out[c] = a[c] || b[c];
  return out;
}

SatisfactionTables::Table SatisfactionTables::implies(const Table& a, const Table& b) const {
  Table out(total_);
  for (std::size_t c = 0; c < total_; ++c) out[c] = !a[c] || b[c];
  return out;
}

SatisfactionTables::Table SatisfactionTables::exists(int var, const Table& a) const {
  Table out(total_);
  const int n = m_->size();
  for (std::size_t c = 0; c < total_; ++c) {
    const std::size_t base = c - (c / stride_[var] % n) * stride_[var];
    bool any = false;
    for (int b = 0; b < n && !any; ++b) any = a[base + b * stride_[var]];
    out[c] = any;
  }
  return out;
}

SatisfactionTables::Table SatisfactionTables::forall(int var, const Table& a) const {
  Table out(total_);
  const int n = m_->size();
  for (std::size_t c = 0; c < total_; ++c) {
    const std::size_t base = c - (c / stride_[var] % n) * stride_[var];
    bool all = true;
    for (int b = 0; b < n && all; ++b) all = a[base + b * stride_[var]];
    out[c] = all;
  }
  return out;
}

const SatisfactionTables::Table& SatisfactionTables::table(const Formula& phi) {
  if (auto it = memo_.find(phi); it != memo_.end()) return it->second;
  if (phi.variable_span() > slots_) throw Error("formula uses more variables than the table has slots");
  Table t;
  switch (phi.op()) {
    case Op::Eq:
    case Op::Rel:
      t = atom(phi);
      break;
    case Op::And:
      t = conj(table(phi.left()), table(phi.right()));
      break;
    case Op::Or:
      t = disj(table(phi.left()), table(phi.right()));
      break;
    case Op::Implies:
      t = implies(table(phi.left()), table(phi.right()));
      break;
    case Op::Not:
      t = neg(table(phi.body()));
      break;
    case Op::Exists:
      t = exists(phi.index(), table(phi.body()));
      break;
    case Op::Forall:
      t = forall(phi.index(), table(phi.body()));
      break;
  }
  return memo_.emplace(phi, std::move(t)).first->second;
}

// }}}

}  // namespace gsheaf
