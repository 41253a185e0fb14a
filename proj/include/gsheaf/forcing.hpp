#pragma once

#include <map>
#include <string>
#include <vector>

#include "gsheaf/presheaf.hpp"

namespace gsheaf {

enum class SemanticsMode { Literal, Local };

const char* to_string(SemanticsMode mode);
SemanticsMode parse_semantics_mode(const std::string& text);

struct ForcingOptions {
  SemanticsMode mode = SemanticsMode::Local;
  /// Antitone clauses look only at the minimal neighbourhood of the point.
  bool fast_path = false;
  /// Positive formulas through the connective clauses instead of
  /// satisfaction on some neighbourhood.
  bool positive_by_clauses = false;
};

/// One satisfied existential choice: the clause, the point it was evaluated
/// at, the formula and section at that node, the chosen open, and for
/// quantifier clauses the chosen element of M_open.
struct WitnessStep {
  std::string clause;
  int point = -1;
  Formula formula;
  Section section;
  PointSet open = 0;
  int element = -1;
};

struct ForcingVerdict {
  int point = -1;     // set by forces_at
  PointSet open = 0;  // set by forces_on
  Formula formula;
  Section section;
  bool verdict = false;
  SemanticsMode mode = SemanticsMode::Local;
  std::vector<WitnessStep> trail;
  int failed_point = -1;  // forces_on: first point that does not force

  Json to_json(const GPresheaf& p) const;
};

/// Pointwise forcing by direct recursion over the clauses. Opens are tried
/// largest first; the first witness is recorded.
ForcingVerdict forces_at(const GPresheaf& p, int x, const Formula& phi, const Section& s,
                         const ForcingOptions& opts = {});
/// Forcing at every point of u. The section is restricted to u first.
ForcingVerdict forces_on(const GPresheaf& p, PointSet u, const Formula& phi, const Section& s,
                         const ForcingOptions& opts = {});
PointSet forcing_set(const GPresheaf& p, PointSet u, const Formula& phi, const Section& s,
                     const ForcingOptions& opts = {});

/// Re-evaluates the clause condition of a recorded step at its chosen open.
bool replay_step(const GPresheaf& p, const WitnessStep& step, const ForcingOptions& opts);

/// Forcing sets for every open U and every tuple over M_U, computed
/// bottom-up one connective at a time. Tuples have a fixed number of slots;
/// slot v holds variable v.
class ForcingTables {
 public:
  using Table = std::vector<PointSet>;  // indexed by offset(U) + code

  ForcingTables(const GPresheaf& p, int slots, const ForcingOptions& opts = {});

  const GPresheaf& presheaf() const { return *p_; }
  int slots() const { return slots_; }
  const ForcingOptions& options() const { return opts_; }
  int num_opens() const { return static_cast<int>(sizes_.size()); }
  std::size_t cells(int u) const { return count_[u]; }
  std::size_t offset(int u) const { return offset_[u]; }
  std::size_t total() const { return offset_.back(); }
  /// Code in M_v^slots of the restriction of code c in M_u^slots.
  std::size_t restrict_code(int u, int v, std::size_t c) const { return restrict_[u][v][c]; }
  const std::vector<int>& subopens(int u) const { return sub_[u]; }
  std::size_t encode(int u, const std::vector<int>& tuple) const;
  /// Code c over M_v with slot `var` replaced by `value`.
  std::size_t with_slot(int v, std::size_t c, int var, int value) const;
  PointSet open(int u) const { return opens_[u]; }
  int size(int u) const { return sizes_[u]; }

  /// Memoized table for phi; variables of phi must lie below slots().
  const Table& table(const Formula& phi);
  /// Points of open u forcing phi at the tuple (unassigned slots read as 0).
  PointSet forcing_set(const Formula& phi, PointSet u, const std::vector<int>& tuple);

  Table satisfaction(const Formula& phi) const;  // union of opens V with M_V |= phi
  Table neg(const Table& a) const;
  Table conj(const Table& a, const Table& b) const;
  Table disj(const Table& a, const Table& b) const;
  Table implies(const Table& a, const Table& b) const;
  Table exists(int var, const Table& a) const;
  Table forall(int var, const Table& a) const;

 private:
  /// Union of the opens V inside each U whose clause condition holds; with
  /// the fast path, points x whose neighbourhood min(x) ∩ U qualifies.
  template <class Good>
  Table gather(Good good, bool fast) const;

  const GPresheaf* p_;
  int slots_;
  ForcingOptions opts_;
  std::vector<int> sizes_;
  std::vector<PointSet> opens_;
  std::vector<std::size_t> count_, offset_;
  std::vector<std::vector<int>> sub_;  // opens inside u, largest first
  std::vector<std::vector<std::vector<std::size_t>>> restrict_;
  std::vector<std::vector<std::size_t>> stride_;  // per open, n^var
  std::vector<std::vector<int>> nbhd_;            // [u][x]: id of min(x) ∩ u, or -1
  std::map<Formula, Table> memo_;
};

/// Classical satisfaction of every tuple over a structure, with the same
/// slot convention as ForcingTables.
class SatisfactionTables {
 public:
  using Table = std::vector<std::uint8_t>;

  SatisfactionTables(const GStructure& m, int slots);

  const GStructure& structure() const { return *m_; }
  std::size_t encode(const std::vector<int>& tuple) const;

  const Table& table(const Formula& phi);
  Table atom(const Formula& phi) const;
  Table neg(const Table& a) const;
  Table conj(const Table& a, const Table& b) const;
  Table disj(const Table& a, const Table& b) const;
  Table implies(const Table& a, const Table& b) const;
  Table exists(int var, const Table& a) const;
  Table forall(int var, const Table& a) const;

 private:
  const GStructure* m_;
  int slots_;
  std::size_t total_;
  std::vector<std::size_t> stride_;
  std::map<Formula, Table> memo_;
};

}  // namespace gsheaf
