#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "slfr/codec.hpp"
#include "slfr/graph.hpp"

namespace slfr::reference {

/// α_{id} = value.
struct SolvedForm {
  std::string name;
  CoeffId id;
  Monomial value;

  bool holds(const EncodingCoefficients& alpha) const { return alpha.at(id) == value.evaluate(alpha); }
  std::string to_string() const { return id.label() + " = " + value.to_string(); }
};

/// ratio == 1.
struct Identity {
  std::string name;
  Monomial ratio;

  bool holds(const EncodingCoefficients& alpha) const { return ratio.evaluate(alpha).is_one(); }
};

/// Leaders {1, 2}, one unsent message W_{3,4}: the three relations obtained
/// by breaking the cycles at c{1}, c{2} and β̃{1,2}.
std::vector<SolvedForm> four_user_solved_forms();

/// A variant of the β̃{1,2} relation,
///   α_{2,{1}} = -(α_{4,{1}}/α_{1,{4}}) (α_{4,{2}}/α_{2,{4}}) α_{1,{2}},
/// which is not implied by the graph (α_{4,{2}}/α_{2,{4}} is inverted).
SolvedForm four_user_b12_inverted();

/// The ratio chain for component A = {a, b} with leaders {1, 2}:
///   -α_{b,{a}}/α_{a,{b}} = (α_{b,{1}}/α_{1,{b}})(α_{1,{a}}/α_{a,{1}})
///                        = (α_{b,{2}}/α_{2,{b}})(α_{2,{a}}/α_{a,{2}})
///                        = -α_{2,{a}} α_{b,{1}} α_{1,{2}} / (α_{a,{2}} α_{1,{b}} α_{2,{1}})
std::vector<Identity> ratio_chain(int a, int b);

/// Leaders {1, 2}, K = 5: the six relations solving the dotted-edge
/// coefficients α_{4,{3}}, α_{5,{3}}, α_{5,{4}}, α_{2,{3}}, α_{2,{4}}, α_{2,{5}}.
std::vector<SolvedForm> five_user_solved_forms();

/// The ratio chains of the three components {3,4}, {3,5}, {4,5}.
std::vector<Identity> five_user_chains();

/// Fills `free_values` and then every solved id. Solved forms may only
/// reference ids that are not themselves solved.
EncodingCoefficients apply(const std::vector<SolvedForm>& forms, const EncodingCoefficients& free_values);

struct EquivalenceReport {
  std::size_t trials = 0;
  std::size_t forward_mismatches = 0;   // ours hold, theirs fail
  std::size_t backward_mismatches = 0;  // theirs hold, ours fail
  bool equivalent() const { return forward_mismatches == 0 && backward_mismatches == 0; }
};

/// Randomised two-way check that the constraint sets cut out the same
/// coefficient assignments: draw the free ids of one side uniformly from
/// F_q^*, solve that side, and test the other side (plus `identities`).
EquivalenceReport check_equivalence(const std::vector<CycleConstraint>& ours, const std::vector<SolvedForm>& theirs,
                                    const std::vector<Identity>& identities, const std::vector<CoeffId>& universe,
                                    const FieldSpec& field, std::size_t trials, std::mt19937_64& rng);

}  // namespace slfr::reference
