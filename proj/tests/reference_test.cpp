#include <gtest/gtest.h>

#include <random>

#include "slfr/graph.hpp"
#include "slfr/harness.hpp"
#include "slfr/reference.hpp"

using namespace slfr;

namespace {

EncodingCoefficients random_all(const FieldSpec& f, int K, int t, std::mt19937_64& rng) {
  EncodingCoefficients a(f);
  for (const auto& id : all_coefficient_ids(K, t)) a.set(id, random_nonzero(f, rng));
  return a;
}

std::vector<CycleConstraint> constraints_of(const CoefficientStatus& status) {
  std::vector<CycleConstraint> out;
  for (const CoeffId& id : status.constrained_ids()) out.push_back(*status.at(id).constraint);
  return out;
}

}  // namespace

TEST(Reference, FourUserFormsHoldForSignRule) {
  const auto& f = FieldSpec::get(7);
  const auto alpha = wan_alpha(SchemeParams::make(4, 2, 1, f), {1, 2});
  for (const auto& form : reference::four_user_solved_forms()) EXPECT_TRUE(form.holds(alpha)) << form.to_string();
  for (const auto& id : reference::ratio_chain(3, 4)) EXPECT_TRUE(id.holds(alpha)) << id.name;
}

TEST(Reference, FiveUserFormsHoldForSignRule) {
  const auto& f = FieldSpec::get(11);
  const auto alpha = wan_alpha(SchemeParams::make(5, 2, 1, f), {1, 2});
  for (const auto& form : reference::five_user_solved_forms()) EXPECT_TRUE(form.holds(alpha)) << form.to_string();
  for (const auto& id : reference::five_user_chains()) EXPECT_TRUE(id.holds(alpha)) << id.name;
}

TEST(Reference, ApplySolvesEveryForm) {
  const auto& f = FieldSpec::get(13);
  std::mt19937_64 rng(2);
  const auto forms = reference::five_user_solved_forms();
  for (int trial = 0; trial < 20; ++trial) {
    const auto alpha = reference::apply(forms, random_all(f, 5, 1, rng));
    for (const auto& form : forms) ASSERT_TRUE(form.holds(alpha));
    for (const auto& id : reference::five_user_chains()) ASSERT_TRUE(id.holds(alpha)) << id.name;
    // Completed coefficients close every cycle of the graph.
    for (const auto& c : cycle_constraints(build_graph(5, 1, {1, 2}))) ASSERT_TRUE(c.holds(alpha)) << c.to_string();
  }
}

TEST(Reference, GreedyEquivalentToFiveUserForms) {
  const auto& f = FieldSpec::get(10007);
  std::mt19937_64 rng(3);
  const auto status = greedy_free_coefficients(build_graph(5, 1, {1, 2}));
  const auto rep = reference::check_equivalence(constraints_of(status), reference::five_user_solved_forms(),
                                                reference::five_user_chains(), all_coefficient_ids(5, 1), f, 100, rng);
  EXPECT_EQ(rep.trials, 100u);
  EXPECT_TRUE(rep.equivalent());
}

TEST(Reference, GreedyEquivalentToFourUserForms) {
  const auto& f = FieldSpec::get(10007);
  std::mt19937_64 rng(4);
  const auto g = build_graph(4, 1, {1, 2});
  const auto status = greedy_free_coefficients(g);
  const auto universe = all_coefficient_ids(4, 1);
  EXPECT_TRUE(reference::check_equivalence(constraints_of(status), reference::four_user_solved_forms(), {}, universe, f,
                                           100, rng)
                  .equivalent());
  EXPECT_TRUE(
      reference::check_equivalence(cycle_constraints(g), reference::four_user_solved_forms(), {}, universe, f, 100, rng)
          .equivalent());
}

TEST(Reference, InvertedB12IsNotEquivalent) {
  const auto& f = FieldSpec::get(10007);
  std::mt19937_64 rng(5);
  auto forms = reference::four_user_solved_forms();
  const auto inverted = reference::four_user_b12_inverted();
  for (auto& form : forms)
    if (form.id == inverted.id) form = inverted;
  const auto status = greedy_free_coefficients(build_graph(4, 1, {1, 2}));
  const auto rep =
      reference::check_equivalence(constraints_of(status), forms, {}, all_coefficient_ids(4, 1), f, 50, rng);
  EXPECT_FALSE(rep.equivalent());
  EXPECT_GT(rep.forward_mismatches + rep.backward_mismatches, 0u);
}

TEST(Reference, EquivalenceDetectsMissingRelation) {
  const auto& f = FieldSpec::get(101);
  std::mt19937_64 rng(6);
  auto forms = reference::five_user_solved_forms();
  forms.pop_back();
  const auto status = greedy_free_coefficients(build_graph(5, 1, {1, 2}));
  const auto rep = reference::check_equivalence(constraints_of(status), forms, {}, all_coefficient_ids(5, 1), f, 30, rng);
  EXPECT_GT(rep.backward_mismatches, 0u);
  EXPECT_EQ(rep.forward_mismatches, 0u);
}
