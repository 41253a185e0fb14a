#include "gsheaf/logic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "gsheaf/report.hpp"

namespace gsheaf {

// {{{ Signature

void Signature::check_fresh(const std::string& name) const {
  if (name.empty()) throw Error("empty symbol name");
  if (function_index(name) || relation_index(name) || constant_index(name)) {
    throw Error("duplicate symbol name '" + name + "'");
  }
}

void Signature::add_function(std::string name, int arity) {
  check_fresh(name);
  if (arity < 1) throw Error("function '" + name + "' must have positive arity");
  functions_.push_back({std::move(name), arity});
}

void Signature::add_relation(std::string name, int arity) {
  check_fresh(name);
  if (arity < 1) throw Error("relation '" + name + "' must have positive arity");
  relations_.push_back({std::move(name), arity});
}

void Signature::add_constant(std::string name) {
  check_fresh(name);
  constants_.push_back(std::move(name));
}

namespace {

std::optional<int> find_symbol(const std::vector<Symbol>& symbols, std::string_view name) {
  for (size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> Signature::function_index(std::string_view name) const {
  return find_symbol(functions_, name);
}

std::optional<int> Signature::relation_index(std::string_view name) const {
  return find_symbol(relations_, name);
}

std::optional<int> Signature::constant_index(std::string_view name) const {
  for (size_t i = 0; i < constants_.size(); ++i) {
    if (constants_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::string Signature::to_text() const {
  std::ostringstream os;
  const char* sep = "";
  for (const auto& f : functions_) {
    os << sep << "fun " << f.name << "/" << f.arity;
    sep = " ";
  }
  for (const auto& r : relations_) {
    os << sep << "rel " << r.name << "/" << r.arity;
    sep = " ";
  }
  for (const auto& c : constants_) {
    os << sep << "const " << c;
    sep = " ";
  }
  return os.str();
}

// }}}
// {{{ Term / Formula

int Term::depth() const {
  int d = 0;
  for (const auto& a : args) d = std::max(d, a.depth() + 1);
  return d;
}

namespace {

int term_span(const Term& t) {
  if (t.kind == Term::Kind::Var) return t.index + 1;
  int s = 0;
  for (const auto& a : t.args) s = std::max(s, term_span(a));
  return s;
}

}  // namespace

Formula Formula::eq(Term lhs, Term rhs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Eq;
  n->span = std::max(term_span(lhs), term_span(rhs));
  n->terms = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

Formula Formula::rel(int relation, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->op = Op::Rel;
  n->index = relation;
  for (const auto& a : args) n->span = std::max(n->span, term_span(a));
  n->terms = std::move(args);
  return Formula(std::move(n));
}

namespace {

std::shared_ptr<Formula::Node> binary(Op op, Formula a, Formula b) {
  auto n = std::make_shared<Formula::Node>();
  n->op = op;
  n->depth = 1 + std::max(a.depth(), b.depth());
  n->span = std::max(a.variable_span(), b.variable_span());
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

std::shared_ptr<Formula::Node> unary(Op op, int index, Formula a) {
  auto n = std::make_shared<Formula::Node>();
  n->op = op;
  n->index = index;
  n->depth = 1 + a.depth();
  n->span = a.variable_span();
  if (op == Op::Exists || op == Op::Forall) n->span = std::max(n->span, index + 1);
  n->lhs = std::move(a);
  return n;
}

}  // namespace

Formula Formula::conj(Formula a, Formula b) { return Formula(binary(Op::And, std::move(a), std::move(b))); }
Formula Formula::disj(Formula a, Formula b) { return Formula(binary(Op::Or, std::move(a), std::move(b))); }
Formula Formula::implies(Formula a, Formula b) {
  return Formula(binary(Op::Implies, std::move(a), std::move(b)));
}
Formula Formula::neg(Formula a) { return Formula(unary(Op::Not, 0, std::move(a))); }
Formula Formula::exists(int var, Formula body) { return Formula(unary(Op::Exists, var, std::move(body))); }
Formula Formula::forall(int var, Formula body) { return Formula(unary(Op::Forall, var, std::move(body))); }

Op Formula::op() const { return node_->op; }
int Formula::index() const { return node_->index; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const Formula& Formula::left() const { return node_->lhs; }
const Formula& Formula::right() const { return node_->rhs; }
int Formula::depth() const { return node_->depth; }
int Formula::variable_span() const { return node_->span; }

bool Term::operator<(const Term& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (index != o.index) return index < o.index;
  return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(), o.args.end());
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.op == b.op && a.index == b.index && a.terms == b.terms && a.lhs == b.lhs && a.rhs == b.rhs;
}

bool Formula::operator<(const Formula& other) const {
  if (node_ == other.node_) return false;
  if (!node_ || !other.node_) return !node_;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.op != b.op) return a.op < b.op;
  if (a.index != b.index) return a.index < b.index;
  if (a.terms != b.terms) return std::lexicographical_compare(a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end());
  if (!(a.lhs == b.lhs)) return a.lhs < b.lhs;
  return a.rhs < b.rhs;
}

// }}}
// {{{ Printing

std::string to_string(const Term& t, const Signature& sig) {
  switch (t.kind) {
    case Term::Kind::Var:
      return "v" + std::to_string(t.index);
    case Term::Kind::Const:
      return sig.constants().at(t.index);
    case Term::Kind::Apply: {
      std::string s = sig.functions().at(t.index).name + "(";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += to_string(t.args[i], sig);
      }
      return s + ")";
    }
  }
  return {};
}

std::string to_string(const Formula& phi, const Signature& sig) {
  switch (phi.op()) {
    case Op::Eq:
      return to_string(phi.terms()[0], sig) + " = " + to_string(phi.terms()[1], sig);
    case Op::Rel: {
      std::string s = sig.relations().at(phi.index()).name + "(";
      for (size_t i = 0; i < phi.terms().size(); ++i) {
        if (i) s += ", ";
        s += to_string(phi.terms()[i], sig);
      }
      return s + ")";
    }
    case Op::And:
      return "(" + to_string(phi.left(), sig) + " & " + to_string(phi.right(), sig) + ")";
    case Op::Or:
      return "(" + to_string(phi.left(), sig) + " | " + to_string(phi.right(), sig) + ")";
    case Op::Implies:
      return "(" + to_string(phi.left(), sig) + " -> " + to_string(phi.right(), sig) + ")";
    case Op::Not: {
      const Formula& b = phi.body();
      if (b.op() == Op::Eq) return "!(" + to_string(b, sig) + ")";
      return "!" + to_string(b, sig);
    }
    case Op::Exists:
    case Op::Forall: {
      std::string q = phi.op() == Op::Exists ? "exists v" : "forall v";
      const Formula& b = phi.body();
      std::string body = to_string(b, sig);
      if (b.op() == Op::Eq) body = "(" + body + ")";
      return q + std::to_string(phi.index()) + " " + body;
    }
  }
  return {};
}

// }}}
// {{{ Syntactic queries

std::set<int> free_variables(const Term& t) {
  std::set<int> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.kind == Term::Kind::Var) out.insert(u.index);
    for (const auto& a : u.args) walk(a);
  };
  walk(t);
  return out;
}

std::set<int> free_variables(const Formula& phi) {
  switch (phi.op()) {
    case Op::Eq:
    case Op::Rel: {
      std::set<int> out;
      for (const auto& t : phi.terms()) {
        auto fv = free_variables(t);
        out.insert(fv.begin(), fv.end());
      }
      return out;
    }
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto out = free_variables(phi.left());
      auto r = free_variables(phi.right());
      out.insert(r.begin(), r.end());
      return out;
    }
    case Op::Not:
      return free_variables(phi.body());
    case Op::Exists:
    case Op::Forall: {
      auto out = free_variables(phi.body());
      out.erase(phi.index());
      return out;
    }
  }
  return {};
}

Formula godel_translate(const Formula& phi) {
  switch (phi.op()) {
    case Op::Eq:
    case Op::Rel:
      return Formula::neg(Formula::neg(phi));
    case Op::And:
      return Formula::conj(godel_translate(phi.left()), godel_translate(phi.right()));
    case Op::Or:
      return Formula::neg(Formula::conj(Formula::neg(godel_translate(phi.left())),
                                        Formula::neg(godel_translate(phi.right()))));
    case Op::Implies:
      return Formula::implies(godel_translate(phi.left()), godel_translate(phi.right()));
    case Op::Not:
      return Formula::neg(godel_translate(phi.body()));
    case Op::Forall:
      return Formula::forall(phi.index(), godel_translate(phi.body()));
    case Op::Exists:
      return Formula::neg(Formula::forall(phi.index(), Formula::neg(godel_translate(phi.body()))));
  }
  return phi;
}

namespace {

bool avoids(const Formula& phi, std::initializer_list<Op> banned) {
  if (std::find(banned.begin(), banned.end(), phi.op()) != banned.end()) return false;
  switch (phi.op()) {
    case Op::Eq:
    case Op::Rel:
      return true;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return avoids(phi.left(), banned) && avoids(phi.right(), banned);
    default:
      return avoids(phi.body(), banned);
  }
}

}  // namespace

bool is_positive(const Formula& phi) { return avoids(phi, {Op::Not, Op::Forall, Op::Implies}); }
bool is_negation_free(const Formula& phi) { return avoids(phi, {Op::Not, Op::Implies}); }
bool is_quantifier_free(const Formula& phi) { return avoids(phi, {Op::Exists, Op::Forall}); }

// }}}
// {{{ Enumeration

std::vector<Term> enumerate_terms(const Signature& sig, int vars, int max_depth) {
  std::vector<Term> out;
  for (int v = 0; v < vars; ++v) out.push_back(Term::var(v));
  for (size_t c = 0; c < sig.constants().size(); ++c) out.push_back(Term::constant(static_cast<int>(c)));
  std::vector<Term> previous = out;
  for (int d = 1; d <= max_depth && !previous.empty(); ++d) {
    std::vector<Term> fresh;
    for (size_t f = 0; f < sig.functions().size(); ++f) {
      const int arity = sig.functions()[f].arity;
      // Every argument tuple over `previous` with at least one argument of depth d-1.
      std::vector<size_t> idx(arity, 0);
      while (true) {
        std::vector<Term> args;
        bool deep = false;
        for (int i = 0; i < arity; ++i) {
          args.push_back(previous[idx[i]]);
          deep = deep || previous[idx[i]].depth() == d - 1;
        }
        if (deep) fresh.push_back(Term::apply(static_cast<int>(f), std::move(args)));
        int i = 0;
        while (i < arity && ++idx[i] == previous.size()) idx[i++] = 0;
        if (i == arity) break;
      }
    }
    out.insert(out.end(), fresh.begin(), fresh.end());
    previous = out;
  }
  return out;
}

namespace {

std::vector<Formula> atoms(const Signature& sig, int vars, int term_depth) {
  std::vector<Formula> out;
  const auto terms = enumerate_terms(sig, vars, term_depth);
  for (size_t r = 0; r < sig.relations().size(); ++r) {
    const int arity = sig.relations()[r].arity;
    if (terms.empty()) break;
    std::vector<size_t> idx(arity, 0);
    while (true) {
      std::vector<Term> args;
      for (int i = 0; i < arity; ++i) args.push_back(terms[idx[i]]);
      out.push_back(Formula::rel(static_cast<int>(r), std::move(args)));
      int i = 0;
      while (i < arity && ++idx[i] == terms.size()) idx[i++] = 0;
      if (i == arity) break;
    }
  }
  for (const auto& a : terms) {
    for (const auto& b : terms) out.push_back(Formula::eq(a, b));
  }
  return out;
}

class Enumerator {
 public:
  Enumerator(const Signature& sig, int term_depth) : sig_(sig), term_depth_(term_depth) {}

  // Formulas of depth <= depth with variables in scope v0..v(scope-1).
  const std::vector<Formula>& upto(int scope, int depth) {
    auto key = std::make_pair(scope, depth);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<Formula> out;
    if (depth == 0) {
      out = atoms(sig_, scope, term_depth_);
    } else {
      const auto smaller = upto(scope, depth - 1);
      const auto inner = upto(scope + 1, depth - 1);
      out = smaller;
      const int d = depth - 1;
      // New formulas are exactly those with at least one child of depth d.
      for (const auto& a : smaller) {
        if (a.depth() == d) out.push_back(Formula::neg(a));
      }
      for (Op op : {Op::And, Op::Or, Op::Implies}) {
        for (const auto& a : smaller) {
          for (const auto& b : smaller) {
            if (a.depth() != d && b.depth() != d) continue;
            out.push_back(op == Op::And ? Formula::conj(a, b)
                          : op == Op::Or ? Formula::disj(a, b)
                                         : Formula::implies(a, b));
          }
        }
      }
      for (Op op : {Op::Exists, Op::Forall}) {
        for (const auto& a : inner) {
          if (a.depth() != d) continue;
          out.push_back(op == Op::Exists ? Formula::exists(scope, a) : Formula::forall(scope, a));
        }
      }
    }
    return cache_.emplace(key, std::move(out)).first->second;
  }

 private:
  const Signature& sig_;
  int term_depth_;
  std::map<std::pair<int, int>, std::vector<Formula>> cache_;
};

}  // namespace

std::vector<Formula> enumerate_formulas(const Signature& sig, const EnumerationLimits& limits) {
  if (limits.max_depth < 0 || limits.max_free_vars < 0) throw Error("negative enumeration bound");
  Enumerator e(sig, limits.max_term_depth);
  return e.upto(limits.max_free_vars, limits.max_depth);
}

std::uint64_t count_formulas(const Signature& sig, const EnumerationLimits& limits) {
  // exact[s][d]: formulas of depth exactly d over scope s.
  const int D = limits.max_depth;
  const int S = limits.max_free_vars + D + 1;
  std::vector<std::vector<std::uint64_t>> exact(S + 1, std::vector<std::uint64_t>(D + 1, 0));
  std::vector<std::vector<std::uint64_t>> upto(S + 1, std::vector<std::uint64_t>(D + 1, 0));
  for (int s = 0; s <= S; ++s) {
    exact[s][0] = upto[s][0] = atoms(sig, s, limits.max_term_depth).size();
  }
  for (int d = 1; d <= D; ++d) {
    for (int s = 0; s + d <= S; ++s) {
      const std::uint64_t prev = upto[s][d - 1];
      const std::uint64_t below = d >= 2 ? upto[s][d - 2] : 0;
      const std::uint64_t e = exact[s][d - 1];
      exact[s][d] = e + 3 * (prev * prev - below * below) + 2 * exact[s + 1][d - 1];
      upto[s][d] = upto[s][d - 1] + exact[s][d];
    }
  }
  return upto[limits.max_free_vars][D];
}

// }}}

Json CheckReport::to_json() const {
  auto encode = [](const std::vector<Violation>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) arr.push_back({{"kind", v.kind}, {"detail", v.detail}, {"witness", v.witness}});
    return arr;
  };
  Json j;
  j["check"] = check;
  j["verdict"] = ok();
  j["bound"] = bounds;
  j["cases"] = cases;
  j["violations"] = encode(violations);
  if (!findings.empty()) j["findings"] = encode(findings);
  return j;
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  os << check << ": " << (ok() ? "ok" : "FAILED") << " (" << cases << " cases";
  if (!bounds.empty()) os << ", bound " << bounds.dump();
  os << ")\n";
  for (const auto& v : violations) {
    os << "  violation [" << v.kind << "] " << v.detail;
    if (!v.witness.empty()) os << " " << v.witness.dump();
    os << "\n";
  }
  for (const auto& v : findings) {
    os << "  finding [" << v.kind << "] " << v.detail;
    if (!v.witness.empty()) os << " " << v.witness.dump();
    os << "\n";
  }
  return os.str();
}

}  // namespace gsheaf
