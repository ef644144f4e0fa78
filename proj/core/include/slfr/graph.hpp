#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slfr/codec.hpp"
#include "slfr/combinat.hpp"
#include "slfr/field.hpp"
#include "slfr/scheme.hpp"

namespace slfr {

/// Edge between β̃_S and c_T with S = {k} ∪ T, labeled (-1)^phi α_{k,T}.
/// Vertex numbering inside a component: c-vertices first, then β̃-vertices.
struct GraphEdge {
  CoeffId id;
  int phi = 0;
  std::size_t c_vertex = 0;
  std::size_t beta_vertex = 0;
};

/// The graph of one reduced system A ∪ L.
struct Component {
  IndexSet A;
  IndexSet leaders;
  std::vector<IndexSet> c_sets;     // Ω_{A∪L}^t, lexicographic
  std::vector<IndexSet> beta_sets;  // Ω_{A∪L}^{t+1}, lexicographic
  std::vector<GraphEdge> edges;     // sorted by coefficient id
  std::map<CoeffId, std::size_t> edge_index;

  std::size_t vertex_count() const { return c_sets.size() + beta_sets.size(); }
  bool is_c(std::size_t v) const { return v < c_sets.size(); }
  const IndexSet& vertex_set(std::size_t v) const {
    return is_c(v) ? c_sets[v] : beta_sets[v - c_sets.size()];
  }
  std::size_t root() const;  // β̃_A
  std::size_t c_vertex(const IndexSet& T) const;
  std::size_t beta_vertex(const IndexSet& S) const;
  std::optional<std::size_t> find_edge(const CoeffId& id) const;
  /// "c{3}" or "b{1,3}".
  std::string vertex_name(std::size_t v) const;
  /// Incident edge indices ordered by the neighbor's set.
  std::vector<std::size_t> incident(std::size_t v) const;

 private:
  friend Component build_component(const IndexSet& A, const IndexSet& leaders);
  std::vector<std::vector<std::size_t>> adjacency_;
};

struct ConstraintGraph {
  int K = 0;
  int t = 0;
  IndexSet leaders;
  std::vector<Component> components;  // by A, lexicographic

  bool empty() const { return components.empty(); }
  /// Distinct coefficient ids labelling some edge, in (k, T) order.
  std::vector<CoeffId> coefficient_ids() const;
  nlohmann::json to_json() const;
};

Component build_component(const IndexSet& A, const IndexSet& leaders);

/// One component per A ∈ Ω_{[K]\L}^{t+1}; empty when K - |L| < t + 1.
ConstraintGraph build_graph(int K, int t, const IndexSet& leaders);
inline ConstraintGraph build_graph(const SchemeParams& params, const IndexSet& leaders) {
  return build_graph(params.K, params.t, leaders);
}

bool is_connected(const Component& comp);
/// Two-colours the vertices by BFS; false on an odd cycle.
bool is_bipartite(const Component& comp);

/// BFS from β̃_A visiting neighbours in lexicographic order; returns the
/// |V| - 1 tree edge indices, ascending.
std::vector<std::size_t> spanning_tree(const Component& comp);

/// ± ∏ α_{k,T}^{e_{k,T}} with integer exponents.
class Monomial {
 public:
  Monomial() = default;
  static Monomial variable(const CoeffId& id, int power = 1);
  static Monomial sign_of(int e);

  bool negative() const noexcept { return negative_; }
  const std::map<CoeffId, int>& exponents() const noexcept { return exponents_; }
  int exponent(const CoeffId& id) const;
  bool is_constant() const noexcept { return exponents_.empty(); }

  Monomial operator*(const Monomial& o) const;
  Monomial operator/(const Monomial& o) const;
  Monomial inv() const;
  Monomial operator-() const;

  /// Throws IncompleteCoefficients if a referenced coefficient is missing.
  FieldElement evaluate(const EncodingCoefficients& alpha) const;

  /// "-α_{1,{3}} α_{4,{1}} / (α_{1,{4}} α_{4,{3}})"
  std::string to_string() const;
  nlohmann::json to_json() const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  bool negative_ = false;
  std::map<CoeffId, int> exponents_;
};

/// α_{id} = value, read off one cycle of component A.
struct CycleConstraint {
  IndexSet A;
  CoeffId id;
  Monomial value;

  bool holds(const EncodingCoefficients& alpha) const { return alpha.at(id) == value.evaluate(alpha); }
  std::string to_string() const;
  nlohmann::json to_json() const;
};

/// Vertex values along the tree: root 1, β̃ -> c multiplies by (-1)^φ α,
/// c -> β̃ divides by it.
std::vector<Monomial> tree_potentials(const Component& comp, const std::vector<std::size_t>& tree);

/// Closes the tree path between the endpoints of a non-tree edge:
///   α_{k,T} = (-1)^φ M(c_T) / M(β̃_{{k}∪T}).
/// Throws InvalidArguments if the edge is in the tree.
CycleConstraint extract_cycle_constraint(const Component& comp, const std::vector<std::size_t>& tree,
                                         std::size_t edge);

/// One constraint per non-tree edge of the BFS spanning tree.
std::vector<CycleConstraint> cycle_constraints(const Component& comp);

/// Every extracted constraint over all components.
std::vector<CycleConstraint> cycle_constraints(const ConstraintGraph& graph);

inline int priority_score(const CoeffId& id, const IndexSet& leaders) {
  return (leaders.contains(id.k) ? 1 : 0) + 2 * (id.T & leaders).size();
}

struct CoefficientEntry {
  CoeffId id;
  int score = 0;
  bool free = true;
  std::optional<CycleConstraint> constraint;  // set for constrained ids
};

struct CoefficientStatus {
  IndexSet leaders;
  std::vector<CoefficientEntry> entries;  // processing order
  std::map<CoeffId, std::size_t> index;

  const CoefficientEntry& at(const CoeffId& id) const;
  bool is_free(const CoeffId& id) const { return at(id).free; }
  std::vector<CoeffId> free_ids() const;
  std::vector<CoeffId> constrained_ids() const;
  nlohmann::json to_json() const;
};

/// Visits coefficient ids by decreasing priority score (ties by (k, T), or
/// shuffled within a score class when `tie_shuffle` is given) and keeps an id
/// free iff its edges close no cycle among earlier free edges in any
/// component. Constrained ids get their relation in terms of free ids from
/// the first component where they close a cycle; every other component
/// must agree or InconsistentConstraints is thrown (skipped when `verify` is
/// false).
CoefficientStatus greedy_free_coefficients(const ConstraintGraph& graph, std::mt19937_64* tie_shuffle = nullptr,
                                           bool verify = true);

/// True when the free edges of `status` form a spanning tree of each component.
bool free_edges_span(const ConstraintGraph& graph, const CoefficientStatus& status);

/// Copies `free_values` and fills in every constrained id from its relation.
/// Ids outside the graph are taken from `free_values` as well.
EncodingCoefficients complete_alpha(const CoefficientStatus& status, const EncodingCoefficients& free_values);

/// Uniform nonzero values for every non-constrained id of the (K, t) scheme,
/// then complete_alpha.
EncodingCoefficients random_feasible_alpha(const CoefficientStatus& status, const SchemeParams& params,
                                           std::mt19937_64& rng);

struct Propagation {
  std::map<IndexSet, FieldElement> beta_tilde;
  std::map<IndexSet, FieldElement> c;
  std::vector<CoeffId> violations;  // non-tree edges whose relation fails
};

/// Assigns the root β̃_A = root (default -1) and walks the spanning tree,
/// then checks every non-tree edge. Throws ZeroCoefficient on a zero α.
Propagation propagate_values(const Component& comp, const EncodingCoefficients& alpha,
                             std::optional<FieldElement> root = std::nullopt);

/// Graphviz rendering of one component with the given tree edges solid and
/// the rest dashed.
std::string to_dot(const Component& comp, const std::vector<std::size_t>& tree);

}  // namespace slfr
