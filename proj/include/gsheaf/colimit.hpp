#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gsheaf/structure.hpp"

namespace gsheaf {

/// Arrow maps of a diagram over a finite partial order, stored on covering
/// pairs only. Arrows point downward: for k below i, a map object(i) -> object(k).
struct ArrowData {
  std::vector<int> sizes;                                 // universe size per index
  std::vector<std::vector<bool>> leq;                     // leq[k][i]: k <= i
  std::map<std::pair<int, int>, std::vector<int>> edges;  // (i, k) for covering pairs k < i
};

/// Covering pairs (i, k): k < i with nothing strictly between.
std::vector<std::pair<int, int>> covering_pairs(const std::vector<std::vector<bool>>& leq);

/// Every composite arrow (i, k) with k <= i, identity on the diagonal.
/// Functoriality failures (two paths disagreeing) go to `report` with the
/// witnessing element; the first path found is kept.
std::map<std::pair<int, int>, std::vector<int>> compose_arrows(const ArrowData& data, CheckReport& report,
                                                               const std::vector<std::string>& labels = {});

/// A directed system of G-structures: any two indices have a common lower
/// bound. Arrows live on covering pairs; composites are derived.
struct DirectedSystem {
  std::vector<std::string> labels;
  std::vector<GStructure> objects;
  std::vector<std::vector<bool>> leq;
  std::map<std::pair<int, int>, std::vector<int>> arrows;

  int size() const { return static_cast<int>(objects.size()); }
};

struct Germ {
  int id = -1;        // element of the colimit universe
  int index = -1;     // designated representative
  int element = -1;

  bool operator==(const Germ& o) const { return id == o.id; }
};

class Colimit {
 public:
  GStructure structure;
  std::vector<GMorphism> cocone;  // object(i) -> structure, per index
  std::vector<Germ> representatives;

  /// Class of element x of object(i).
  Germ germ(int index, int x) const {
    const int id = cocone.at(index).map.at(x);
    return representatives.at(id);
  }
  /// Composite arrow (i, k) for k <= i.
  const std::vector<int>& arrow(int i, int k) const { return composites_.at({i, k}); }

 private:
  friend Colimit colimit(const DirectedSystem& sys);
  std::map<std::pair<int, int>, std::vector<int>> composites_;
};

/// Quotient of the disjoint union: (i,x) ~ (j,y) iff some k <= i,j has
/// rho_ki(x) = rho_kj(y). Relations are the union of cocone images; the
/// group acts on representatives. Throws Error on mismatched signatures or
/// groups, a non-directed index set, or incoherent arrows.
Colimit colimit(const DirectedSystem& sys);

/// Validates the arrows (morphism clauses, equivariance, functoriality).
CheckReport validate_system(const DirectedSystem& sys);

}  // namespace gsheaf
