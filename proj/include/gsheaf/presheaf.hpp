#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "gsheaf/colimit.hpp"
#include "gsheaf/structure.hpp"
#include "gsheaf/topology.hpp"

namespace gsheaf {

/// A presheaf of G-structures on the nonempty opens of a finite space.
/// Restrictions are supplied on covering inclusions U < V only (a map
/// M_V -> M_U); all other restrictions are derived composites.
class GPresheaf {
 public:
  GPresheaf() = default;
  /// `objects` is keyed by open set; `edges` by (V, U) with U covered by V.
  GPresheaf(FiniteSpace space, std::map<PointSet, GStructure> objects,
            std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges);

  /// Every open sent to `m`, identity restrictions.
  static GPresheaf constant(const FiniteSpace& space, const GStructure& m);

  const FiniteSpace& space() const { return space_; }
  const Signature& signature() const { return *objects_.front().sig; }
  const FiniteGroup& group() const { return *objects_.front().group; }
  InvarianceMode mode() const { return objects_.front().mode; }

  /// Nonempty opens in canonical order; positions are open ids.
  const std::vector<PointSet>& opens() const { return opens_; }
  int open_id(PointSet u) const;
  const GStructure& at(PointSet u) const { return objects_[open_id(u)]; }
  const GStructure& object(int id) const { return objects_[id]; }
  const std::map<std::pair<PointSet, PointSet>, std::vector<int>>& edges() const { return edges_; }

  /// Restriction M_from -> M_to for to inside from.
  const std::vector<int>& restriction(PointSet from, PointSet to) const;
  int restrict_element(PointSet from, PointSet to, int x) const { return restriction(from, to)[x]; }

  /// Functoriality problems found while deriving composites.
  const CheckReport& composition_report() const { return composition_; }

 private:
  FiniteSpace space_;
  std::vector<PointSet> opens_;
  std::vector<GStructure> objects_;
  std::map<std::pair<PointSet, PointSet>, std::vector<int>> edges_;
  std::vector<std::vector<std::vector<int>>> composite_;  // [from id][to id]
  CheckReport composition_;
};

/// Elements of M_U assigned to variables; -1 marks an unassigned slot.
struct Section {
  PointSet domain = 0;
  std::vector<int> values;
};

Section restrict_section(const GPresheaf& p, const Section& s, PointSet to);

/// Space, structures, restriction morphisms (including equivariance) and
/// functoriality of every derived composite.
CheckReport validate_presheaf(const GPresheaf& p);

/// Two distinct elements of M_u with equal restrictions to every member of
/// the cover are reported. Throws Error if the cover does not union to u.
CheckReport check_coherence(const GPresheaf& p, PointSet u, const std::vector<PointSet>& cover);
/// Every family compatible on nonempty pairwise intersections has an amalgam.
CheckReport check_exactness(const GPresheaf& p, PointSet u, const std::vector<PointSet>& cover);

/// Covers of u by nonempty opens inside u with no member contained in the
/// union of the others, plus the trivial cover {u}.
std::vector<std::vector<PointSet>> irredundant_covers(const FiniteSpace& s, PointSet u);

CheckReport is_sheaf(const GPresheaf& p);
CheckReport is_exact(const GPresheaf& p);

/// Directed system of the restriction diagram over a family of nonempty
/// opens, ordered by inclusion. The family must be closed under
/// intersection for the system to be directed.
DirectedSystem restriction_diagram(const GPresheaf& p, const std::vector<PointSet>& family);

struct Stalk {
  int point = -1;
  std::vector<PointSet> opens;  // index set of the colimit, canonical order
  Colimit colimit;

  Germ germ(PointSet u, int x) const;
};

Stalk stalk(const GPresheaf& p, int x);
std::vector<Germ> germ_at(const GPresheaf& p, int x, const Section& s);

/// Orbit structure on every open with the induced restrictions. Requires
/// every structure to be strong.
GPresheaf orbit_presheaf(const GPresheaf& p);

}  // namespace gsheaf
