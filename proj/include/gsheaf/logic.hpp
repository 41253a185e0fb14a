#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gsheaf {

struct Symbol {
  std::string name;
  int arity = 1;

  bool operator==(const Symbol&) const = default;
};

/// A finite first-order signature: function, relation and constant symbols.
/// Names are unique across all three name spaces and arities are positive.
class Signature {
 public:
  Signature() = default;

  /// Throws Error on a duplicate name or a non-positive arity.
  void add_function(std::string name, int arity);
  void add_relation(std::string name, int arity);
  void add_constant(std::string name);

  const std::vector<Symbol>& functions() const { return functions_; }
  const std::vector<Symbol>& relations() const { return relations_; }
  const std::vector<std::string>& constants() const { return constants_; }

  std::optional<int> function_index(std::string_view name) const;
  std::optional<int> relation_index(std::string_view name) const;
  std::optional<int> constant_index(std::string_view name) const;

  /// Declaration text accepted by parse_signature.
  std::string to_text() const;

  bool operator==(const Signature&) const = default;

 private:
  void check_fresh(const std::string& name) const;

  std::vector<Symbol> functions_;
  std::vector<Symbol> relations_;
  std::vector<std::string> constants_;
};

/// Terms reference symbols by their index in the owning Signature.
struct Term {
  enum class Kind : std::uint8_t { Var, Const, Apply };

  Kind kind = Kind::Var;
  int index = 0;  // variable index, constant index or function index
  std::vector<Term> args;

  static Term var(int v) { return {Kind::Var, v, {}}; }
  static Term constant(int c) { return {Kind::Const, c, {}}; }
  static Term apply(int f, std::vector<Term> args) { return {Kind::Apply, f, std::move(args)}; }

  int depth() const;
  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const;
};

enum class Op : std::uint8_t { Eq, Rel, And, Or, Not, Implies, Exists, Forall };

/// Immutable formula AST with shared subtrees. Copies are cheap.
class Formula {
 public:
  struct Node;

  Formula() = default;

  static Formula eq(Term lhs, Term rhs);
  static Formula rel(int relation, std::vector<Term> args);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula neg(Formula a);
  static Formula implies(Formula a, Formula b);
  static Formula exists(int var, Formula body);
  static Formula forall(int var, Formula body);

  bool valid() const { return node_ != nullptr; }
  Op op() const;
  /// Relation index for Rel, bound variable for quantifiers.
  int index() const;
  const std::vector<Term>& terms() const;
  const Formula& left() const;
  const Formula& right() const;
  /// Sole child of Not and quantifiers.
  const Formula& body() const { return left(); }

  bool is_atomic() const { return op() == Op::Eq || op() == Op::Rel; }
  int depth() const;
  /// One past the largest variable index occurring anywhere (free or bound).
  int variable_span() const;

  bool operator==(const Formula& other) const;
  bool operator<(const Formula& other) const;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  int index = 0;
  std::vector<Term> terms;
  Formula lhs;
  Formula rhs;
  int depth = 0;
  int span = 0;
};

Signature parse_signature(std::string_view text);
Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);

std::string to_string(const Term& t, const Signature& sig);
/// Fully parenthesized ASCII rendering; parse_formula reads it back.
std::string to_string(const Formula& phi, const Signature& sig);

std::set<int> free_variables(const Term& t);
std::set<int> free_variables(const Formula& phi);

/// Double-negation translation. Implications translate componentwise.
Formula godel_translate(const Formula& phi);

/// No Not, Forall or Implies anywhere in the formula.
bool is_positive(const Formula& phi);
/// No Not and no Implies anywhere in the formula.
bool is_negation_free(const Formula& phi);
bool is_quantifier_free(const Formula& phi);

/// All terms over variables v0..v(vars-1) with function nesting <= max_depth.
std::vector<Term> enumerate_terms(const Signature& sig, int vars, int max_depth);

struct EnumerationLimits {
  int max_depth = 0;
  int max_free_vars = 0;
  int max_term_depth = 1;
};

/// Every formula up to the given AST depth whose free variables lie in
/// v0..v(max_free_vars-1), each exactly once. A quantifier always binds the
/// first variable not in scope, so alpha-variants are never repeated.
std::vector<Formula> enumerate_formulas(const Signature& sig, const EnumerationLimits& limits);

/// Same enumeration, counting only.
std::uint64_t count_formulas(const Signature& sig, const EnumerationLimits& limits);

}  // namespace gsheaf
