#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gsheaf/forcing.hpp"

namespace gsheaf {

/// Syntactic flags carried by a formula class.
enum ClassFlag : std::uint8_t {
  kHasForall = 1,
  kPositive = 2,
  kNegationFree = 4,
  kQuantifierFree = 8,
};

std::uint8_t formula_flags(const Formula& phi);

/// Formulas grouped by their tables in every lane (forcing tables under
/// several options, satisfaction tables over several structures) and by
/// their syntactic flags. Classes of depth <= d come from those of depth
/// <= d-1 through the connectives, so every formula within the bound is
/// covered without listing it. All lanes must share one slot count.
class TableClasses {
 public:
  struct Class {
    Formula representative;
    std::uint64_t count = 0;
    std::uint8_t flags = 0;
    std::vector<std::size_t> forcing;      // id per forcing lane
    std::vector<std::size_t> satisfaction;  // id per satisfaction lane
  };

  TableClasses(std::vector<ForcingTables*> forcing, std::vector<SatisfactionTables*> satisfaction,
               const Signature& sig, int term_depth);

  /// Classes of formulas with depth <= d and free variables below `scope`.
  const std::vector<Class>& at(int scope, int d);

  const ForcingTables::Table& forcing(int lane, std::size_t id) const { return forcing_pool_[lane][id]; }
  const SatisfactionTables::Table& satisfaction(int lane, std::size_t id) const { return sat_pool_[lane][id]; }

 private:
  std::vector<ForcingTables*> forcing_lanes_;
  std::vector<SatisfactionTables*> sat_lanes_;
  const Signature* sig_;
  int term_depth_;
  std::vector<std::vector<ForcingTables::Table>> forcing_pool_;
  std::vector<std::map<ForcingTables::Table, std::size_t>> forcing_index_;
  std::vector<std::vector<SatisfactionTables::Table>> sat_pool_;
  std::vector<std::map<SatisfactionTables::Table, std::size_t>> sat_index_;
  std::map<std::pair<int, int>, std::vector<Class>> levels_;
};

}  // namespace gsheaf
