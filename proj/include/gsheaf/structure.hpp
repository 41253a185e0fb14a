#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsheaf/group.hpp"
#include "gsheaf/logic.hpp"
#include "gsheaf/report.hpp"

namespace gsheaf {

/// How relation invariance is read: independent group elements per
/// coordinate, or one element acting on every coordinate at once.
enum class InvarianceMode : std::uint8_t { Componentwise, Diagonal };

const char* to_string(InvarianceMode mode);
InvarianceMode parse_invariance_mode(const std::string& text);

/// Index of a tuple over a universe of size n (little-endian, base n).
inline std::size_t encode_tuple(std::span<const int> xs, int n) {
  std::size_t code = 0;
  for (std::size_t i = xs.size(); i-- > 0;) code = code * n + xs[i];
  return code;
}

inline void decode_tuple(std::size_t code, int n, std::span<int> out) {
  for (auto& x : out) {
    x = static_cast<int>(code % n);
    code /= n;
  }
}

inline std::size_t power(int n, int k) {
  std::size_t p = 1;
  for (int i = 0; i < k; ++i) p *= n;
  return p;
}

/// A finite structure whose universe carries a group action. Elements are
/// 0..size()-1. Function and relation tables are indexed by encode_tuple.
struct GStructure {
  std::shared_ptr<const Signature> sig;
  std::shared_ptr<const FiniteGroup> group;
  std::vector<std::string> names;
  std::vector<std::vector<int>> functions;
  std::vector<std::vector<std::uint8_t>> relations;
  std::vector<int> constants;
  std::vector<int> action;  // action[g * size() + x] = g.x
  InvarianceMode mode = InvarianceMode::Componentwise;

  /// Discrete universe of the given size: identity action, empty relations,
  /// every function and constant sent to element 0.
  static GStructure blank(std::shared_ptr<const Signature> sig, std::shared_ptr<const FiniteGroup> group, int size,
                          InvarianceMode mode = InvarianceMode::Componentwise);

  int size() const { return static_cast<int>(names.size()); }
  int act(int g, int x) const { return action[static_cast<std::size_t>(g) * names.size() + x]; }
  int apply(int f, std::span<const int> args) const { return functions[f][encode_tuple(args, size())]; }
  bool holds(int r, std::span<const int> args) const { return relations[r][encode_tuple(args, size())] != 0; }
  void set_relation(int r, std::span<const int> args, bool value) {
    relations[r][encode_tuple(args, size())] = value ? 1 : 0;
  }
  int index_of(const std::string& name) const;
};

/// Variable assignment: slot v holds the element for variable v, or -1.
using Assignment = std::vector<int>;

int eval_term(const GStructure& m, const Term& t, const Assignment& a);
/// Classical satisfaction; quantifiers range over the universe.
bool satisfies(const GStructure& m, const Formula& phi, const Assignment& a);

/// Table totality, action axioms, and the three invariance clauses
/// (constants, relations under m.mode, function equivariance).
CheckReport validate_structure(const GStructure& m);

struct GMorphism {
  GStructure source;
  GStructure target;
  std::vector<int> map;

  static GMorphism identity(const GStructure& m);
  int operator()(int x) const { return map[x]; }
};

/// g∘f; throws when the middle structures differ in size.
GMorphism compose(const GMorphism& g, const GMorphism& f);

/// Homomorphism clauses plus G-equivariance, each with witnesses.
CheckReport validate_morphism(const GMorphism& a);

struct MorphismClass {
  bool saturated = false;
  bool injective = false;
  bool surjective = false;
  bool embedding = false;
  bool submersion = false;
  bool isomorphism = false;
  /// Equivalence of satisfaction checked only over enumerated formulas of
  /// depth <= elementary_depth; never a claim about all formulas.
  bool elementary_up_to_depth = false;
  int elementary_depth = 0;
};

MorphismClass classify_morphism(const GMorphism& a, int depth);

/// Brute force: every assignment of phi's free variables into the source.
bool preserves_formula(const GMorphism& a, const Formula& phi);
/// Same, but checks the biconditional.
bool reflects_and_preserves(const GMorphism& a, const Formula& phi);

struct ImageResult {
  GStructure image;
  GMorphism corestriction;  // source -> image
  GMorphism inclusion;      // image -> target, an embedding
};

/// Substructure of the target on the image set. Requires saturation.
ImageResult image_substructure(const GMorphism& a);

struct QuotientResult {
  GStructure quotient;
  GMorphism projection;    // m -> m/~
  GMorphism induced_iso;   // m/~ -> image substructure
};

/// Quotient by the kernel of a saturated morphism out of m.
QuotientResult quotient_structure(const GStructure& m, const GMorphism& a);

/// Coordinatewise equivariance f(g1x1,...,gnxn) = g1...gn f(x1,...,xn).
CheckReport check_strong(const GStructure& m);

/// Orbit of every element: orbit index per element, orbits in order of
/// their least element.
std::vector<int> orbit_index(const GStructure& m);

/// Structure on the orbit set over the trivial group. Throws Error with the
/// witnessing tuple when m is not strong.
GStructure orbit_structure(const GStructure& m);

/// Search for an isomorphism a -> b (equivariant when `equivariant`).
std::optional<std::vector<int>> find_isomorphism(const GStructure& a, const GStructure& b, bool equivariant = true);

Json structure_to_json(const GStructure& m);

}  // namespace gsheaf
