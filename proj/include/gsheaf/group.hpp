#pragma once

#include <string>
#include <vector>

#include "gsheaf/report.hpp"

namespace gsheaf {

/// A finite group given by its multiplication table. Elements are the
/// indices 0..order()-1; names are for documents and reports only.
class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(trivial()) {}
  FiniteGroup(std::vector<std::string> names, int identity, std::vector<int> table);

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  /// Elements are the permutations of {0..n-1} in lexicographic order.
  static FiniteGroup symmetric(int n);
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);

  int order() const { return static_cast<int>(names_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a * order() + b]; }
  /// Only meaningful on a validated group.
  int inverse(int a) const;
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int g) const { return names_.at(g); }
  int index_of(const std::string& name) const;

  /// Subgroups by brute-force closure check; each sorted ascending.
  std::vector<std::vector<int>> subgroups() const;

  bool operator==(const FiniteGroup&) const = default;

 private:
  std::vector<std::string> names_;
  int identity_ = 0;
  std::vector<int> table_;
};

/// Permutation of {0..n-1} realised by element g of FiniteGroup::symmetric(n).
std::vector<int> symmetric_permutation(int n, int g);

/// Every violated axiom with its witnesses: closure, identity, inverses and
/// associativity. Empty iff the table is a group.
CheckReport validate_group(const FiniteGroup& g);

}  // namespace gsheaf
