#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gsheaf/report.hpp"

namespace gsheaf {

/// Set of points as a bit mask (at most 32 points).
using PointSet = std::uint32_t;

inline int popcount(PointSet s) { return __builtin_popcount(s); }
inline bool subset(PointSet a, PointSet b) { return (a & ~b) == 0; }

/// A finite topological space given by its explicit family of opens.
/// Opens are kept in a canonical order: by size, then by mask.
class FiniteSpace {
 public:
  FiniteSpace() = default;
  FiniteSpace(std::vector<std::string> points, std::vector<PointSet> opens,
              std::map<PointSet, std::string> open_names = {});

  static FiniteSpace one_point();
  /// Points p, q; opens {}, {p}, {p,q}.
  static FiniteSpace sierpinski();
  static FiniteSpace discrete(int n);
  /// Closes a family under pairwise union and intersection and adds {} and X.
  static FiniteSpace completed(std::vector<std::string> points, std::vector<PointSet> family);

  int num_points() const { return static_cast<int>(points_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& point_name(int x) const { return points_.at(x); }
  int point_index(const std::string& name) const;

  PointSet whole() const { return num_points() == 32 ? ~0u : (1u << num_points()) - 1; }
  const std::vector<PointSet>& opens() const { return opens_; }
  /// Nonempty opens only, in canonical order.
  std::vector<PointSet> nonempty_opens() const;
  bool is_open(PointSet s) const;
  std::string open_name(PointSet s) const;
  PointSet open_by_name(const std::string& name) const;
  std::string describe(PointSet s) const;  // "{p,q}"

 private:
  std::vector<std::string> points_;
  std::vector<PointSet> opens_;
  std::map<PointSet, std::string> open_names_;
};

CheckReport validate_space(const FiniteSpace& s);

/// Intersection of all opens containing x.
PointSet min_open_nbhd(const FiniteSpace& s, int x);
PointSet closure(const FiniteSpace& s, PointSet a);
/// Throws Error unless v is a subset of u.
bool is_dense(const FiniteSpace& s, PointSet v, PointSet u);

/// A family of opens closed under pairwise intersection and open supersets.
struct Filter {
  std::vector<PointSet> members;  // canonical order

  bool contains(PointSet u) const;
  bool trivial() const { return contains(0); }
  /// Intersection of all members.
  PointSet core() const;
  bool operator==(const Filter&) const = default;
};

/// Up-set of an open.
Filter principal_filter(const FiniteSpace& s, PointSet u);
/// Checks the two closure conditions (and that the whole space is a member).
CheckReport validate_filter(const FiniteSpace& s, const Filter& f);

/// Every nonempty family of opens closed under the filter conditions, by
/// exhaustive search over families; optionally only those omitting {}.
std::vector<Filter> enumerate_filters(const FiniteSpace& s, bool nontrivial_only);
/// Up-sets of the minimal nonempty opens.
std::vector<Filter> maximal_filters(const FiniteSpace& s);

/// Every topology on n labelled points (n <= 4), in canonical order.
std::vector<FiniteSpace> all_topologies(int n);

/// For every maximal filter F, U in F and open V dense in U: V in F.
CheckReport check_dense_membership(const FiniteSpace& s);

}  // namespace gsheaf
