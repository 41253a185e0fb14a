#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gsheaf/colimit.hpp"
#include "gsheaf/presheaf.hpp"

namespace gsheaf {

/// Seeded generator with a platform-independent bounded draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, n).
  int below(int n);
  bool coin(double p = 0.5);
  /// Independent stream for task `index`; the parent is not advanced.
  Rng derive(std::uint64_t index) const;

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs.at(below(static_cast<int>(xs.size())));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct GeneratorLimits {
  int max_points = 4;
  int max_opens = 6;  // counting the empty open
  int max_universe = 3;
  int max_group_order = 6;
  /// Draw the invariance mode per instance instead of using `mode`.
  bool both_modes = true;
  InvarianceMode mode = InvarianceMode::Componentwise;
  /// Signature declarations to draw from.
  std::vector<std::string> signatures = {"rel R/1", "rel R/1 rel S/2", "rel R/1 fun f/1", "rel R/2",
                                         "rel R/1 const c"};
  double relation_density = 0.5;
  bool force_sheaf = false;
  /// Orbit duplications or removals applied when not forcing a sheaf.
  int max_perturbations = 2;
  int max_attempts = 10000;
};

/// Trivial, cyclic of order 2..6, Klein four and S3, up to the given order.
std::vector<FiniteGroup> group_library(int max_order);
FiniteSpace random_space(Rng& rng, int max_points, int max_opens);

/// A G-structure A with an equivariant map pi : A -> base commuting with
/// functions and constants. Relations of A are left empty. With `cover`,
/// pi is onto. Returns nothing when the draw cannot be completed.
struct Lift {
  GStructure structure;
  std::vector<int> projection;
};
std::optional<Lift> build_over(Rng& rng, const GStructure& base, int max_size, bool cover = false);

/// Substructure on a list of distinct elements closed under the action and
/// the functions and holding the constants, in the listed order.
GStructure induced_substructure(const GStructure& b, const std::vector<int>& elems);

/// Each invariance block of allowed tuples is added with probability `density`.
void assign_relations(Rng& rng, GStructure& m, const std::vector<std::vector<std::uint8_t>>& allowed, double density);

/// Random structure of at most max_size elements.
std::optional<GStructure> random_structure(Rng& rng, std::shared_ptr<const Signature> sig,
                                           std::shared_ptr<const FiniteGroup> group, InvarianceMode mode,
                                           int max_size, double density = 0.5);

/// A sheaf built class by class over the minimal neighbourhoods: each class
/// gets a G-set lifted over the compatible families below it, M_U is the
/// set of compatible families over U, and relations are drawn inside the
/// preimages of the relations on smaller opens.
std::optional<GPresheaf> random_sheaf(Rng& rng, std::shared_ptr<const Signature> sig,
                                      std::shared_ptr<const FiniteGroup> group, const FiniteSpace& space,
                                      InvarianceMode mode, int max_universe, double density = 0.5);

/// Adds a copy of an orbit of some M_U whose copy restricts like the original.
std::optional<GPresheaf> duplicate_orbit(Rng& rng, const GPresheaf& p, int max_universe);
/// Removes an orbit of some M_U that no restriction hits, no function of the
/// remaining elements reaches, and that holds no constant.
std::optional<GPresheaf> remove_orbit(Rng& rng, const GPresheaf& p);

/// Seeded-deterministic valid presheaf within the limits.
GPresheaf generate_random_presheaf(std::uint64_t seed, const GeneratorLimits& limits);

/// Every presheaf on the Sierpinski space with one unary relation, trivial
/// group and universes of size <= max_universe (labelled, not up to iso).
std::vector<GPresheaf> sierpinski_unary_presheaves(int max_universe);

enum class SystemShape { Chain, Vee };
/// Restriction diagram of a random sheaf on a chain (up to `size` indices)
/// or on a V-shaped family of three opens.
DirectedSystem random_directed_system(Rng& rng, SystemShape shape, int size, const GeneratorLimits& limits);

enum class MorphismKind { General, Submersion, Embedding, Isomorphism };
std::optional<GMorphism> random_morphism(Rng& rng, MorphismKind kind, const GeneratorLimits& limits);

}  // namespace gsheaf
