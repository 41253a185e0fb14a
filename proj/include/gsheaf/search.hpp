#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsheaf/generator.hpp"
#include "gsheaf/generic.hpp"

namespace gsheaf {

struct LemmaInfo {
  std::string id;
  std::string summary;
  /// Divergences are findings, never failures.
  bool finding = false;
};

const std::vector<LemmaInfo>& lemma_catalog();
bool is_lemma(const std::string& id);

struct LemmaOptions {
  FormulaBound bound;
  SemanticsMode mode = SemanticsMode::Local;
  /// Restrict a check to one formula, open or point (used by replays).
  std::optional<std::string> formula;
  std::optional<PointSet> open;
  std::optional<int> point;
  /// Formulas per instance also run through the direct engine.
  int direct_sample = 24;
  /// Semantic classes for the genericity and theorem checks.
  bool quotient = true;
  /// Findings kept per instance; the total is counted regardless.
  int max_findings = 8;
};

/// One lemma on one presheaf. Every violation and finding carries a
/// `query` object naming the lemma and the narrowing that reproduces it.
/// Checks whose hypothesis fails (not exact, not a sheaf, not strong) run
/// no cases and say so in bounds["skipped"].
CheckReport check_lemma(const std::string& id, const GPresheaf& p, const LemmaOptions& opts = {});

/// Term commutation, positive preservation, submersion preservation of
/// negation-free formulas, isomorphism and embedding equivalences.
CheckReport check_morphism_lemmas(const GMorphism& m, const FormulaBound& bound,
                                  const std::optional<Formula>& only = std::nullopt);

/// Positive formulas: the colimit satisfies phi at germs iff some lower
/// index satisfies it at the restricted tuple. Also validates the colimit.
CheckReport check_colimit_positive(const DirectedSystem& sys, const FormulaBound& bound,
                                   const std::optional<Formula>& only = std::nullopt);

/// Orbit structure of the generic model against the generic model of the
/// orbit presheaf, by isomorphism search.
CheckReport check_orbit_generic(const GPresheaf& p, const Filter& f);

/// Greedy deletion of points, opens and orbits while `still_fails` holds.
GPresheaf shrink_presheaf(const GPresheaf& p, const std::function<bool(const GPresheaf&)>& still_fails,
                          int max_steps = 200);

struct SearchOptions {
  std::vector<std::string> targets;  // empty: every lemma
  int budget = 40;                   // random instances per run
  std::uint64_t seed = 1;
  GeneratorLimits limits;
  LemmaOptions lemma;
  /// Also sweep every small unary presheaf on the Sierpinski space.
  bool exhaustive = true;
  /// Shrunk counterexamples emitted per target.
  int max_reported = 3;
  int threads = 0;  // 0: hardware concurrency
};

/// Random plus exhaustive sweep. Violations and findings are shrunk and
/// carry the shrunk document under witness["document"].
CheckReport counterexample_search(const SearchOptions& opts);

/// Reruns the query of a witness on its document. The witness replays when
/// the rerun reports a violation or finding with the same witness.
CheckReport replay_query(const Json& witness);
bool replays(const Json& witness);

}  // namespace gsheaf
