#include "gsheaf/classes.hpp"

namespace gsheaf {

namespace {

bool has_forall(const Formula& phi) {
  switch (phi.op()) {
    case Op::Forall:
      return true;
    case Op::Eq:
    case Op::Rel:
      return false;
    case Op::Not:
    case Op::Exists:
      return has_forall(phi.body());
    default:
      return has_forall(phi.left()) || has_forall(phi.right());
  }
}

}  // namespace

std::uint8_t formula_flags(const Formula& phi) {
  std::uint8_t f = 0;
  if (has_forall(phi)) f |= kHasForall;
  if (is_positive(phi)) f |= kPositive;
  if (is_negation_free(phi)) f |= kNegationFree;
  if (is_quantifier_free(phi)) f |= kQuantifierFree;
  return f;
}

namespace {

template <class T>
std::size_t intern(std::vector<T>& pool, std::map<T, std::size_t>& index, T t) {
  auto [it, fresh] = index.emplace(std::move(t), pool.size());
  if (fresh) pool.push_back(it->first);
  return it->second;
}

constexpr std::uint8_t kNoNegation = kPositive | kNegationFree;

}  // namespace

TableClasses::TableClasses(std::vector<ForcingTables*> forcing, std::vector<SatisfactionTables*> satisfaction,
                           const Signature& sig, int term_depth)
    : forcing_lanes_(std::move(forcing)),
      sat_lanes_(std::move(satisfaction)),
      sig_(&sig),
      term_depth_(term_depth),
      forcing_pool_(forcing_lanes_.size()),
      forcing_index_(forcing_lanes_.size()),
      sat_pool_(sat_lanes_.size()),
      sat_index_(sat_lanes_.size()) {}

const std::vector<TableClasses::Class>& TableClasses::at(int scope, int d) {
  const auto key = std::make_pair(scope, d);
  if (auto it = levels_.find(key); it != levels_.end()) return it->second;
  for (auto* t : forcing_lanes_)
    if (scope + d > t->slots()) throw Error("table classes need more variable slots");

  const std::size_t nf = forcing_lanes_.size(), ns = sat_lanes_.size();
  std::vector<Class> out;
  std::map<std::tuple<std::uint8_t, std::vector<std::size_t>, std::vector<std::size_t>>, std::size_t> index;
  auto add = [&](const Formula& rep, std::uint64_t count, std::uint8_t flags, auto&& make_forcing,
                 auto&& make_sat) {
    Class c{rep, count, flags, std::vector<std::size_t>(nf), std::vector<std::size_t>(ns)};
    for (std::size_t l = 0; l < nf; ++l) c.forcing[l] = intern(forcing_pool_[l], forcing_index_[l], make_forcing(l));
    for (std::size_t l = 0; l < ns; ++l) c.satisfaction[l] = intern(sat_pool_[l], sat_index_[l], make_sat(l));
    auto [it, fresh] = index.emplace(std::make_tuple(flags, c.forcing, c.satisfaction), out.size());
    if (fresh) {
      out.push_back(std::move(c));
    } else {
      out[it->second].count += count;
    }
  };
  auto ft = [&](std::size_t l, const Class& c) -> const ForcingTables::Table& {
    return forcing_pool_[l][c.forcing[l]];
  };
  auto st = [&](std::size_t l, const Class& c) -> const SatisfactionTables::Table& {
    return sat_pool_[l][c.satisfaction[l]];
  };

  for (const auto& atom : enumerate_formulas(*sig_, {0, scope, term_depth_})) {
    add(
        atom, 1, formula_flags(atom), [&](std::size_t l) { return forcing_lanes_[l]->satisfaction(atom); },
        [&](std::size_t l) { return sat_lanes_[l]->atom(atom); });
  }
  if (d > 0) {
    const std::vector<Class> prev = at(scope, d - 1);
    const std::vector<Class> inner = at(scope + 1, d - 1);
    for (const auto& a : prev) {
      add(
          Formula::neg(a.representative), a.count, a.flags & ~kNoNegation,
          [&](std::size_t l) { return forcing_lanes_[l]->neg(ft(l, a)); },
          [&](std::size_t l) { return sat_lanes_[l]->neg(st(l, a)); });
    }
    for (const auto& a : prev) {
      for (const auto& b : prev) {
        const std::uint64_t n = a.count * b.count;
        const std::uint8_t both = (a.flags & b.flags & ~kHasForall) | ((a.flags | b.flags) & kHasForall);
        add(
            Formula::conj(a.representative, b.representative), n, both,
            [&](std::size_t l) { return forcing_lanes_[l]->conj(ft(l, a), ft(l, b)); },
            [&](std::size_t l) { return sat_lanes_[l]->conj(st(l, a), st(l, b)); });
        add(
            Formula::disj(a.representative, b.representative), n, both,
            [&](std::size_t l) { return forcing_lanes_[l]->disj(ft(l, a), ft(l, b)); },
            [&](std::size_t l) { return sat_lanes_[l]->disj(st(l, a), st(l, b)); });
        add(
            Formula::implies(a.representative, b.representative), n, both & ~kNoNegation,
            [&](std::size_t l) { return forcing_lanes_[l]->implies(ft(l, a), ft(l, b)); },
            [&](std::size_t l) { return sat_lanes_[l]->implies(st(l, a), st(l, b)); });
      }
    }
    for (const auto& a : inner) {
      const std::uint8_t q = a.flags & ~kQuantifierFree;
      add(
          Formula::exists(scope, a.representative), a.count, q,
          [&](std::size_t l) { return forcing_lanes_[l]->exists(scope, ft(l, a)); },
          [&](std::size_t l) { return sat_lanes_[l]->exists(scope, st(l, a)); });
      add(
          Formula::forall(scope, a.representative), a.count, (q & ~kPositive) | kHasForall,
          [&](std::size_t l) { return forcing_lanes_[l]->forall(scope, ft(l, a)); },
          [&](std::size_t l) { return sat_lanes_[l]->forall(scope, st(l, a)); });
    }
  }
  return levels_.emplace(key, std::move(out)).first->second;
}

}  // namespace gsheaf
