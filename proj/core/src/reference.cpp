#include "slfr/reference.hpp"

#include <algorithm>
#include <set>

namespace slfr::reference {

namespace {

Monomial a(int k, int j) { return Monomial::variable(CoeffId{k, IndexSet{j}}); }

CoeffId id(int k, int j) { return CoeffId{k, IndexSet{j}}; }

const Monomial kMinus = Monomial::sign_of(1);

// -α_{b,{a}}/α_{a,{b}} solved for α_{b,{a}} via the first link of the chain.
SolvedForm pair_form(int a_, int b_) {
  return {"component {" + std::to_string(a_) + "," + std::to_string(b_) + "}: leader-1 cycle", id(b_, a_),
          kMinus * a(b_, 1) * a(a_, b_) * a(1, a_) / (a(a_, 1) * a(1, b_))};
}

// α_{2,{j}} solved through the leader-1/leader-2 cycle.
SolvedForm leader_form(int j) {
  return {"leader 2 towards user " + std::to_string(j), id(2, j),
          kMinus * a(2, 1) * a(j, 2) * a(1, j) / (a(j, 1) * a(1, 2))};
}

}  // namespace

std::vector<SolvedForm> four_user_solved_forms() {
  return {
      {"vertex c{1}", id(3, 1), kMinus * a(1, 3) * a(4, 1) / a(1, 4) * a(3, 4) / a(4, 3)},
      {"vertex c{2}", id(3, 2), kMinus * a(2, 3) * a(4, 2) / a(2, 4) * a(3, 4) / a(4, 3)},
      {"vertex b{1,2}", id(2, 1), kMinus * a(4, 1) / a(1, 4) * a(2, 4) / a(4, 2) * a(1, 2)},
  };
}

SolvedForm four_user_b12_inverted() {
  return {"vertex b{1,2} (inverted ratio)", id(2, 1), kMinus * a(4, 1) / a(1, 4) * a(4, 2) / a(2, 4) * a(1, 2)};
}

std::vector<Identity> ratio_chain(int x, int y) {
  const Monomial head = kMinus * a(y, x) / a(x, y);
  const Monomial via1 = a(y, 1) / a(1, y) * a(1, x) / a(x, 1);
  const Monomial via2 = a(y, 2) / a(2, y) * a(2, x) / a(x, 2);
  const Monomial both = kMinus * a(2, x) * a(y, 1) * a(1, 2) / (a(x, 2) * a(1, y) * a(2, 1));
  const std::string tag = "chain {" + std::to_string(x) + "," + std::to_string(y) + "}";
  return {{tag + " via leader 1", head / via1}, {tag + " via leader 2", head / via2}, {tag + " via both", head / both}};
}

std::vector<SolvedForm> five_user_solved_forms() {
  return {pair_form(3, 4), pair_form(3, 5), pair_form(4, 5), leader_form(3), leader_form(4), leader_form(5)};
}

std::vector<Identity> five_user_chains() {
  std::vector<Identity> out;
  for (auto [x, y] : {std::pair{3, 4}, std::pair{3, 5}, std::pair{4, 5}}) {
    auto c = ratio_chain(x, y);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

EncodingCoefficients apply(const std::vector<SolvedForm>& forms, const EncodingCoefficients& free_values) {
  EncodingCoefficients out = free_values;
  for (const auto& f : forms) out.set(f.id, f.value.evaluate(free_values));
  return out;
}

EquivalenceReport check_equivalence(const std::vector<CycleConstraint>& ours, const std::vector<SolvedForm>& theirs,
                                    const std::vector<Identity>& identities, const std::vector<CoeffId>& universe,
                                    const FieldSpec& field, std::size_t trials, std::mt19937_64& rng) {
  std::set<CoeffId> ours_solved;
  for (const auto& c : ours) ours_solved.insert(c.id);
  std::set<CoeffId> theirs_solved;
  for (const auto& f : theirs) theirs_solved.insert(f.id);
  std::uniform_int_distribution<std::uint32_t> pick(1, field.q() - 1);

  auto draw = [&](const std::set<CoeffId>& skip) {
    EncodingCoefficients v(field);
    for (const CoeffId& c : universe) {
      if (!skip.contains(c)) v.set(c, FieldElement(field, pick(rng)));
    }
    return v;
  };
  auto all_identities = [&](const EncodingCoefficients& v) {
    return std::all_of(identities.begin(), identities.end(), [&](const Identity& i) { return i.holds(v); });
  };

  EquivalenceReport rep;
  for (std::size_t n = 0; n < trials; ++n) {
    ++rep.trials;
    const EncodingCoefficients base = draw(ours_solved);
    EncodingCoefficients mine = base;
    for (const auto& c : ours) mine.set(c.id, c.value.evaluate(base));
    const bool theirs_ok =
        std::all_of(theirs.begin(), theirs.end(), [&](const SolvedForm& f) { return f.holds(mine); });
    if (!theirs_ok || !all_identities(mine)) ++rep.forward_mismatches;

    const EncodingCoefficients other = reference::apply(theirs, draw(theirs_solved));
    const bool ours_ok =
        std::all_of(ours.begin(), ours.end(), [&](const CycleConstraint& c) { return c.holds(other); });
    if (!ours_ok || !all_identities(other)) ++rep.backward_mismatches;
  }
  return rep;
}

}  // namespace slfr::reference
