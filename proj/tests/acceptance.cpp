// Acceptance run: one PASS/FAIL line per criterion. The literal-mode
// findings report is written to the path in argv[1] (default
// acceptance_findings.json).

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>

#include "gsheaf/classes.hpp"
#include "gsheaf/document.hpp"
#include "gsheaf/search.hpp"

using namespace gsheaf;
using Clock = std::chrono::steady_clock;

namespace {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) body(i);
  };
  const unsigned k = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Tally {
  long long cases = 0, failures = 0, instances = 0, skipped = 0;
  std::string first;  // first failure, for the log line
  std::mutex mu;

  void take(const CheckReport& r) {
    std::lock_guard<std::mutex> lock(mu);
    ++instances;
    cases += r.cases;
    failures += static_cast<long long>(r.violations.size());
    if (r.bounds.contains("skipped")) ++skipped;
    if (first.empty() && !r.violations.empty())
      first = r.violations.front().kind + " " + r.violations.front().witness.dump().substr(0, 300);
  }
};

int failed_criteria = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++failed_criteria;
  std::printf("[%s] criterion %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string describe(const Tally& t, double secs) {
  std::string s = std::to_string(t.instances) + " instances, " + std::to_string(t.cases) + " cases, " +
                  std::to_string(t.failures) + " failures";
  if (t.skipped) s += ", " + std::to_string(t.skipped) + " outside the hypothesis";
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.1fs", secs);
  s += buf;
  if (!t.first.empty()) s += "; first: " + t.first;
  return s;
}

LemmaOptions lemma_options(int depth, int free_vars = 1) {
  LemmaOptions o;
  o.bound = {depth, free_vars, 1};
  return o;
}

std::vector<GPresheaf> generate(std::uint64_t stream, int count, const GeneratorLimits& lim) {
  std::vector<GPresheaf> out(count);
  const Rng root(stream);
  parallel_for(count, [&](std::size_t i) { out[i] = generate_random_presheaf(root.derive(i).next(), lim); });
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string findings_path = argc > 1 ? argv[1] : "acceptance_findings.json";
  std::vector<const GPresheaf*> colimit_sources;  // presheaves whose stalks and generic models feed criterion 9
  std::vector<DirectedSystem> systems;

  // 1. Exhaustive generic model theorem on the Sierpinski space.
  const auto sierpinski = sierpinski_unary_presheaves(2);
  {
    const auto t0 = Clock::now();
    Tally t;
    long long sheaves = 0;
    for (const auto& p : sierpinski) {
      if (!is_sheaf(p).ok()) continue;
      ++sheaves;
      t.take(check_lemma("gmt", p, lemma_options(3)));
      // Explicit enumeration, no formula classes, as a cross-check of the quotient.
      LemmaOptions explicit_run = lemma_options(2);
      explicit_run.quotient = false;
      t.take(check_lemma("gmt", p, explicit_run));
    }
    const double secs = seconds_since(t0);
    report(1, "generic model theorem, exhaustive Sierpinski", t.failures == 0 && sheaves > 0 && secs < 120,
           std::to_string(sierpinski.size()) + " presheaves; depth 3 by classes and depth 2 explicit: " +
               describe(t, secs));
    for (const auto& p : sierpinski) colimit_sources.push_back(&p);
  }

  // 2. Generic model theorem on 500 random sheaves.
  GeneratorLimits sheaf_limits;
  sheaf_limits.force_sheaf = true;
  const auto corpus = generate(2, 500, sheaf_limits);
  {
    const auto t0 = Clock::now();
    Tally t;
    parallel_for(corpus.size(), [&](std::size_t i) { t.take(check_lemma("gmt", corpus[i], lemma_options(2))); });
    const double secs = seconds_since(t0);
    int diagonal = 0, nontrivial = 0;
    for (const auto& p : corpus) {
      diagonal += p.mode() == InvarianceMode::Diagonal;
      nontrivial += p.group().order() > 1;
    }
    report(2, "generic model theorem, 500 random sheaves", t.failures == 0 && t.skipped == 0 && secs < 900,
           describe(t, secs) + " (" + std::to_string(diagonal) + " diagonal, " + std::to_string(nontrivial) +
               " nontrivial groups)");
    for (const auto& p : corpus) colimit_sources.push_back(&p);
  }

  // 3. Positive formulas in colimits of directed systems.
  {
    const auto t0 = Clock::now();
    Tally t;
    GeneratorLimits lim;
    std::vector<DirectedSystem> drawn(200);
    const Rng root(3);
    parallel_for(drawn.size(), [&](std::size_t i) {
      Rng rng = root.derive(i);
      const SystemShape shape = i % 2 ? SystemShape::Vee : SystemShape::Chain;
      drawn[i] = random_directed_system(rng, shape, 1 + static_cast<int>(i % 3), lim);
    });
    parallel_for(drawn.size(), [&](std::size_t i) {
      for (int d = 0; d <= 2; ++d) t.take(check_colimit_positive(drawn[i], {d, 1, 1}));
    });
    t.instances = static_cast<long long>(drawn.size());
    report(3, "positive colimit equivalence, 200 directed systems", t.failures == 0, describe(t, seconds_since(t0)));
    systems = std::move(drawn);
  }

  // 4. Morphism lemmas.
  {
    const auto t0 = Clock::now();
    Tally t;
    const MorphismKind kinds[] = {MorphismKind::General, MorphismKind::Submersion, MorphismKind::Embedding,
                                  MorphismKind::Isomorphism};
    std::vector<GMorphism> drawn;
    const Rng root(4);
    for (std::uint64_t i = 0; drawn.size() < 200 && i < 100000; ++i) {
      Rng rng = root.derive(i);
      if (auto m = random_morphism(rng, kinds[drawn.size() % 4], GeneratorLimits{})) drawn.push_back(std::move(*m));
    }
    parallel_for(drawn.size(), [&](std::size_t i) { t.take(check_morphism_lemmas(drawn[i], {2, 1, 1})); });
    report(4, "morphism lemmas, 200 morphisms", t.failures == 0 && drawn.size() == 200,
           describe(t, seconds_since(t0)));
  }

  // Exact presheaves for criteria 5 and 6: unforced random presheaves plus the Sierpinski sweep.
  const auto loose = generate(5, 500, GeneratorLimits{});
  std::vector<const GPresheaf*> exact_pool;
  for (const auto& p : loose) exact_pool.push_back(&p);
  for (const auto& p : sierpinski) exact_pool.push_back(&p);
  for (const auto& p : loose) colimit_sources.push_back(&p);

  // 5. Maximal filters are generic on exact presheaves.
  {
    const auto t0 = Clock::now();
    Tally t;
    parallel_for(exact_pool.size(),
                 [&](std::size_t i) { t.take(check_lemma("maximal-generic", *exact_pool[i], lemma_options(2))); });
    const long long exact = t.instances - t.skipped;
    report(5, "maximal filters generic on exact presheaves", t.failures == 0 && exact > 0,
           std::to_string(exact) + " exact; " + describe(t, seconds_since(t0)));
  }

  // 6. Maximum principle.
  {
    const auto t0 = Clock::now();
    Tally t;
    parallel_for(exact_pool.size(),
                 [&](std::size_t i) { t.take(check_lemma("maximum-principle", *exact_pool[i], lemma_options(2))); });
    report(6, "maximum principle", t.failures == 0 && t.cases > 0, describe(t, seconds_since(t0)));
  }

  // 7. Double negation and dense membership on every space with at most three points.
  std::vector<GPresheaf> small_spaces;
  {
    const auto t0 = Clock::now();
    std::vector<FiniteSpace> spaces;
    for (int n = 1; n <= 3; ++n)
      for (auto& s : all_topologies(n)) spaces.push_back(std::move(s));
    // Six presheaves per space: sheaves over the library signatures and groups, some perturbed.
    const int per_space = 6;
    std::vector<std::optional<GPresheaf>> drawn(spaces.size() * per_space);
    const auto groups = group_library(6);
    GeneratorLimits lim;
    parallel_for(drawn.size(), [&](std::size_t k) {
      const FiniteSpace& s = spaces[k / per_space];
      Rng rng = Rng(7).derive(k);
      for (int attempt = 0; attempt < 200 && !drawn[k]; ++attempt) {
        auto sig = std::make_shared<const Signature>(parse_signature(rng.pick(lim.signatures)));
        auto group = std::make_shared<const FiniteGroup>(rng.pick(groups));
        const InvarianceMode mode = rng.coin() ? InvarianceMode::Componentwise : InvarianceMode::Diagonal;
        auto p = random_sheaf(rng, sig, group, s, mode, 3);
        if (!p) continue;
        if (k % 2) {
          auto q = rng.coin() ? duplicate_orbit(rng, *p, 3) : remove_orbit(rng, *p);
          if (q && validate_presheaf(*q).ok()) p = std::move(q);
        }
        drawn[k] = std::move(p);
      }
    });
    for (auto& p : drawn)
      if (p) small_spaces.push_back(std::move(*p));
    Tally dn, dm;
    parallel_for(small_spaces.size(),
                 [&](std::size_t i) { dn.take(check_lemma("double-negation", small_spaces[i], lemma_options(2))); });
    parallel_for(spaces.size(), [&](std::size_t i) { dm.take(check_dense_membership(spaces[i])); });
    const bool covered = small_spaces.size() == drawn.size();
    report(7, "double negation and dense membership, spaces <= 3 points",
           dn.failures == 0 && dm.failures == 0 && covered,
           std::to_string(spaces.size()) + " spaces; double negation: " + describe(dn, seconds_since(t0)) +
               "; dense membership: " + std::to_string(dm.cases) + " cases, " + std::to_string(dm.failures) +
               " failures");
  }
  for (const auto& p : small_spaces) colimit_sources.push_back(&p);

  // 8. Forcing consistency over the criterion-2 corpus.
  {
    const auto t0 = Clock::now();
    const std::vector<std::string> ids = {"positive-collapse", "fast-path",   "forcing-set-open",
                                          "local-semantics",   "restriction", "covering",
                                          "existential-cover", "germ-invariance", "classical-semantics"};
    std::vector<Tally> tallies(ids.size());
    parallel_for(corpus.size() * ids.size(), [&](std::size_t k) {
      const std::size_t which = k % ids.size();
      tallies[which].take(check_lemma(ids[which], corpus[k / ids.size()], lemma_options(2)));
    });
    long long failures = 0;
    std::string detail;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      failures += tallies[i].failures;
      detail += (i ? "; " : "") + ids[i] + " " + std::to_string(tallies[i].cases) + "/" +
                std::to_string(tallies[i].failures);
      if (!tallies[i].first.empty()) detail += " first: " + tallies[i].first;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, " (cases/failures, %.1fs)", seconds_since(t0));
    report(8, "forcing consistency over the criterion-2 corpus", failures == 0, detail + buf);
  }

  // 9. Every stalk, generic model and system colimit above is a valid G-structure.
  {
    const auto t0 = Clock::now();
    Tally t;
    parallel_for(colimit_sources.size(),
                 [&](std::size_t i) { t.take(check_lemma("colimit-valid", *colimit_sources[i], lemma_options(0))); });
    parallel_for(systems.size(), [&](std::size_t i) {
      CheckReport r;
      r.check = "system-colimit";
      ++r.cases;
      for (const auto& v : validate_structure(colimit(systems[i]).structure).violations) r.add(v.kind, v.detail);
      t.take(r);
    });
    report(9, "colimit validity", t.failures == 0, describe(t, seconds_since(t0)));
  }

  // 10. Orbits of generic models on strong sheaves.
  {
    const auto t0 = Clock::now();
    GeneratorLimits lim;
    lim.force_sheaf = true;
    lim.max_universe = 4;
    lim.signatures = {"rel R/1", "rel R/2", "rel R/1 rel S/2", "rel R/1 fun f/1"};
    std::vector<GPresheaf> strong;
    const Rng root(10);
    for (std::uint64_t i = 0; strong.size() < 50 && i < 5000; ++i) {
      GPresheaf p = generate_random_presheaf(root.derive(i).next(), lim);
      if (p.group().order() == 1) continue;
      bool ok = true;
      for (PointSet u : p.opens()) ok = ok && check_strong(p.at(u)).ok();
      if (ok) strong.push_back(std::move(p));
    }
    Tally t;
    parallel_for(strong.size(), [&](std::size_t i) { t.take(check_lemma("orbit-generic", strong[i], {})); });
    report(10, "orbit generic models, 50 strong sheaves", t.failures == 0 && t.skipped == 0 && strong.size() == 50,
           describe(t, seconds_since(t0)) + " (nontrivial groups only)");
  }

  // 11. Literal-mode germ invariance sweep: completes and every finding replays.
  {
    const auto t0 = Clock::now();
    SearchOptions o;
    o.targets = {"germ-invariance-literal"};
    o.budget = 200;
    o.seed = 11;
    o.lemma = lemma_options(2);
    o.lemma.max_findings = 4;
    o.max_reported = 25;
    o.limits.force_sheaf = true;
    const CheckReport r = counterexample_search(o);
    int replayed = 0;
    for (const auto& f : r.findings) replayed += replays(f.witness);
    std::ofstream(findings_path) << r.to_json().dump(2) << "\n";
    const Json& per = r.bounds["per_target"]["germ-invariance-literal"];
    char buf[64];
    std::snprintf(buf, sizeof buf, ", %.1fs", seconds_since(t0));
    report(11, "literal-mode germ invariance sweep",
           r.ok() && replayed == static_cast<int>(r.findings.size()),
           std::to_string(r.bounds["instances"].get<long long>()) + " instances, " +
               std::to_string(per["cases"].get<long long>()) + " cases, " +
               std::to_string(per["divergences"].get<long long>()) + " divergences, " +
               std::to_string(r.findings.size()) + " reported and " + std::to_string(replayed) + " replayed" + buf +
               "; report in " + findings_path);
  }

  std::printf("%d of 11 criteria failed\n", failed_criteria);
  return failed_criteria == 0 ? 0 : 1;
}
