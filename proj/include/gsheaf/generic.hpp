#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gsheaf/forcing.hpp"

namespace gsheaf {

/// Formula bound shared by the genericity and theorem checks.
struct FormulaBound {
  int depth = 2;
  int free_vars = 1;
  int term_depth = 1;

  EnumerationLimits limits() const { return {depth, free_vars, term_depth}; }
  /// Variable slots needed by every formula within the bound.
  int slots() const { return free_vars + depth; }
  Json to_json() const;
};

struct GenericityReport {
  Filter filter;
  FormulaBound bound;
  long long decided = 0;    // condition (1) instances that passed
  long long witnessed = 0;  // condition (2) instances that passed
  CheckReport report;

  /// Generic up to the bound.
  bool generic() const { return report.ok(); }
};

/// Condition (1): every formula is decided by some member inside U.
/// Condition (2): every forced existential over U has a witness on some
/// member inside U. Checked for every formula within the bound, every
/// member U and every tuple over M_U. Throws Error on a trivial filter.
/// With `quotient`, formulas are replaced by their semantic classes.
GenericityReport is_generic_filter(const GPresheaf& p, const Filter& f, const FormulaBound& bound,
                                   const ForcingOptions& opts = {}, bool quotient = false);

struct GenericModel {
  std::vector<PointSet> opens;  // the filter's members, canonical order
  Colimit colimit;

  const GStructure& structure() const { return colimit.structure; }
  Germ germ(PointSet u, int x) const;
};

/// Colimit of the restriction diagram over the members of f.
GenericModel generic_model(const GPresheaf& p, const Filter& f);

/// The three statements of the generic model theorem for one formula, one
/// member U and one tuple over M_U.
struct TheoremCase {
  bool satisfied = false;      // M^gen |= phi([a])
  PointSet deciding = 0;       // smallest member inside U forcing phi_G, if any
  bool forced_on_member = false;
  PointSet forcing_set = 0;    // points of U forcing phi_G
  bool set_in_filter = false;

  bool agree() const { return satisfied == forced_on_member && satisfied == set_in_filter; }
};

/// Evaluates the theorem statements for formulas through shared tables.
class TheoremEvaluator {
 public:
  TheoremEvaluator(const GPresheaf& p, const Filter& f, int slots, const ForcingOptions& opts = {});
  TheoremEvaluator(const TheoremEvaluator&) = delete;
  TheoremEvaluator& operator=(const TheoremEvaluator&) = delete;

  const Filter& filter() const { return filter_; }

  const GenericModel& model() const { return model_; }
  ForcingTables& tables() { return tables_; }
  SatisfactionTables& generic_tables() { return gen_; }
  /// Member ids (open ids of the presheaf) in canonical order.
  const std::vector<int>& members() const { return members_; }

  TheoremCase evaluate(const Formula& phi, PointSet u, std::size_t code);
  /// Same, from a forcing table of phi_G and a satisfaction table of phi on M^gen.
  TheoremCase evaluate(const ForcingTables::Table& godel, const SatisfactionTables::Table& gen, int u,
                       std::size_t code) const;

 private:
  const GPresheaf* p_;
  Filter filter_;
  GenericModel model_;
  ForcingTables tables_;
  SatisfactionTables gen_;
  std::vector<int> members_;
  std::vector<std::vector<std::size_t>> germ_code_;  // per open id, code over M_U -> code over M^gen
};

struct TheoremOptions {
  FormulaBound bound;
  ForcingOptions forcing;
  /// Enumerate semantic classes of formulas instead of formulas.
  bool quotient = false;
  /// Skip the sheaf and genericity preconditions (used when the caller has
  /// already established them).
  bool assume_preconditions = false;
};

/// Every formula within the bound, every member U of f and every tuple over
/// M_U: the three statements must agree. Precondition failures (not a sheaf,
/// not generic up to the bound) are reported as violations.
CheckReport check_generic_model_theorem(const GPresheaf& p, const Filter& f, const TheoremOptions& opts);

struct MaximumWitness {
  PointSet open = 0;
  int element = -1;
};

/// Greedy maximal extension of a witness for the forced existential
/// ∃v phi over u. The variable v is phi's extra slot `var`. Throws Error if
/// the presheaf is not exact or u does not force the existential.
MaximumWitness maximum_principle_witness(const GPresheaf& p, PointSet u, const Formula& phi, int var,
                                         const Section& s, const ForcingOptions& opts = {});
/// Same search on precomputed tables: `body` is phi's table, `code` the
/// parameter tuple over open `uid`. Exactness is the caller's concern.
MaximumWitness maximum_principle_witness(const ForcingTables& t, int uid, const ForcingTables::Table& body, int var,
                                         std::size_t code);

/// Forcing of the double negation over u against positive forcing on some
/// open dense in u. Throws Error on a non-positive formula.
CheckReport check_double_negation(const GPresheaf& p, PointSet u, const Formula& phi, const Section& s,
                                  const ForcingOptions& opts = {});

/// Semantic classes of formulas, built level by level. Two formulas share a
/// class when they have the same forcing table, the same forcing table for
/// their Gödel translations, and the same satisfaction table on M^gen. Each
/// connective acts on classes, so the classes of depth <= d are computed
/// from those of depth <= d-1 without listing formulas.
class FormulaClasses {
 public:
  struct Class {
    Formula representative;
    std::uint64_t count = 0;  // formulas in the class at this depth
    std::size_t plain = 0, godel = 0, gen = 0;  // ids into the table pools
  };

  FormulaClasses(TheoremEvaluator& eval, const Signature& sig, const FormulaBound& bound);

  /// Classes of formulas with depth <= d and free variables below `scope`.
  const std::vector<Class>& at(int scope, int d);
  const ForcingTables::Table& plain(std::size_t id) const { return plain_[id]; }
  const ForcingTables::Table& godel(std::size_t id) const { return godel_[id]; }
  const SatisfactionTables::Table& gen(std::size_t id) const { return gen_[id]; }

 private:
  std::size_t intern(std::vector<ForcingTables::Table>& pool, std::map<ForcingTables::Table, std::size_t>& index,
                     ForcingTables::Table t);
  std::size_t intern_gen(SatisfactionTables::Table t);

  TheoremEvaluator* eval_;
  const Signature* sig_;
  FormulaBound bound_;
  std::vector<ForcingTables::Table> plain_, godel_;
  std::vector<SatisfactionTables::Table> gen_;
  std::map<ForcingTables::Table, std::size_t> plain_index_, godel_index_;
  std::map<SatisfactionTables::Table, std::size_t> gen_index_;
  std::map<std::pair<int, int>, std::vector<Class>> levels_;
};

}  // namespace gsheaf
