#include "slfr/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace slfr {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

std::size_t lookup(const std::vector<IndexSet>& sorted, const IndexSet& s, const char* what) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), s);
  if (it == sorted.end() || *it != s) {
    throw Error(ErrorCode::InvalidSubset, std::string(what) + " " + s.to_string() + " not in component");
  }
  return static_cast<std::size_t>(it - sorted.begin());
}

// Edge weight w with the convention M(c) = w M(β̃) along the edge.
Monomial edge_weight(const GraphEdge& e) { return Monomial::sign_of(e.phi) * Monomial::variable(e.id); }

// BFS over the chosen edges from `start`, filling potentials of unvisited
// vertices; `weight(e)` gives M(c)/M(β̃) on edge e.
template <typename Weight>
void spread(const Component& comp, const std::vector<char>& usable, std::size_t start, Weight weight,
            std::vector<std::optional<Monomial>>& pot) {
  pot[start] = Monomial{};
  std::deque<std::size_t> queue{start};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t ei : comp.incident(v)) {
      if (!usable[ei]) continue;
      const GraphEdge& e = comp.edges[ei];
      const std::size_t u = comp.is_c(v) ? e.beta_vertex : e.c_vertex;
      if (pot[u]) continue;
      const Monomial w = weight(ei);
      pot[u] = comp.is_c(v) ? *pot[v] / w : *pot[v] * w;
      queue.push_back(u);
    }
  }
}

CycleConstraint relation_from(const Component& comp, std::size_t ei, const std::vector<std::optional<Monomial>>& pot) {
  const GraphEdge& e = comp.edges[ei];
  return {comp.A, e.id, Monomial::sign_of(e.phi) * *pot[e.c_vertex] / *pot[e.beta_vertex]};
}

}  // namespace

std::size_t Component::root() const { return beta_vertex(A); }

std::size_t Component::c_vertex(const IndexSet& T) const { return lookup(c_sets, T, "c-vertex"); }

std::size_t Component::beta_vertex(const IndexSet& S) const {
  return c_sets.size() + lookup(beta_sets, S, "beta-vertex");
}

std::optional<std::size_t> Component::find_edge(const CoeffId& id) const {
  auto it = edge_index.find(id);
  if (it == edge_index.end()) return std::nullopt;
  return it->second;
}

std::string Component::vertex_name(std::size_t v) const {
  return (is_c(v) ? "c" : "b") + vertex_set(v).to_string();
}

std::vector<std::size_t> Component::incident(std::size_t v) const { return adjacency_.at(v); }

Component build_component(const IndexSet& A, const IndexSet& leaders) {
  if (A.empty() || !(A & leaders).empty()) {
    throw Error(ErrorCode::InvalidArguments, "A must be a non-empty set of non-leaders");
  }
  const IndexSet U = A | leaders;
  const int t = A.size() - 1;
  Component comp;
  comp.A = A;
  comp.leaders = leaders;
  comp.c_sets = enumerate_subsets(U, t);
  comp.beta_sets = enumerate_subsets(U, t + 1);
  for (const IndexSet& T : comp.c_sets) {
    for (int k : U - T) {
      comp.edges.push_back({CoeffId{k, T}, phi_sign(A, k, T, leaders), comp.c_vertex(T), comp.beta_vertex(T.with(k))});
    }
  }
  std::sort(comp.edges.begin(), comp.edges.end(), [](const GraphEdge& a, const GraphEdge& b) { return a.id < b.id; });
  comp.adjacency_.resize(comp.vertex_count());
  for (std::size_t i = 0; i < comp.edges.size(); ++i) {
    comp.edge_index.emplace(comp.edges[i].id, i);
    comp.adjacency_[comp.edges[i].c_vertex].push_back(i);
    comp.adjacency_[comp.edges[i].beta_vertex].push_back(i);
  }
  // neighbour order: by the other endpoint's set
  for (std::size_t v = 0; v < comp.adjacency_.size(); ++v) {
    auto& adj = comp.adjacency_[v];
    auto other = [&](std::size_t ei) {
      const GraphEdge& e = comp.edges[ei];
      return comp.vertex_set(comp.is_c(v) ? e.beta_vertex : e.c_vertex);
    };
    std::sort(adj.begin(), adj.end(), [&](std::size_t a, std::size_t b) { return other(a) < other(b); });
  }
  return comp;
}

ConstraintGraph build_graph(int K, int t, const IndexSet& leaders) {
  ConstraintGraph g{K, t, leaders, {}};
  const IndexSet rest = IndexSet::range(1, K) - leaders;
  if (t < 0 || rest.size() < t + 1) return g;
  for (const IndexSet& A : enumerate_subsets(rest, t + 1)) g.components.push_back(build_component(A, leaders));
  return g;
}

std::vector<CoeffId> ConstraintGraph::coefficient_ids() const {
  std::vector<CoeffId> ids;
  for (const auto& comp : components) {
    for (const auto& e : comp.edges) ids.push_back(e.id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

nlohmann::json ConstraintGraph::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& comp : components) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : comp.edges) {
      edges.push_back({{"coeff", e.id.key()},
                       {"phi", e.phi},
                       {"c", comp.vertex_set(e.c_vertex).to_json()},
                       {"beta_tilde", comp.vertex_set(e.beta_vertex).to_json()}});
    }
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& T : comp.c_sets) cs.push_back(T.to_json());
    nlohmann::json bs = nlohmann::json::array();
    for (const auto& S : comp.beta_sets) bs.push_back(S.to_json());
    comps.push_back({{"A", comp.A.to_json()}, {"c_vertices", cs}, {"beta_vertices", bs}, {"edges", edges}});
  }
  return {{"K", K}, {"t", t}, {"leaders", leaders.to_json()}, {"components", comps}};
}

bool is_connected(const Component& comp) {
  if (comp.vertex_count() == 0) return true;
  std::vector<char> usable(comp.edges.size(), 1);
  std::vector<std::optional<Monomial>> pot(comp.vertex_count());
  spread(comp, usable, 0, [](std::size_t) { return Monomial{}; }, pot);
  return std::all_of(pot.begin(), pot.end(), [](const auto& p) { return p.has_value(); });
}

bool is_bipartite(const Component& comp) {
  std::vector<int> colour(comp.vertex_count(), -1);
  for (std::size_t s = 0; s < colour.size(); ++s) {
    if (colour[s] != -1) continue;
    colour[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t ei : comp.incident(v)) {
        const GraphEdge& e = comp.edges[ei];
        const std::size_t u = e.c_vertex == v ? e.beta_vertex : e.c_vertex;
        if (colour[u] == -1) {
          colour[u] = 1 - colour[v];
          queue.push_back(u);
        } else if (colour[u] == colour[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<std::size_t> spanning_tree(const Component& comp) {
  std::vector<std::size_t> tree;
  if (comp.vertex_count() == 0) return tree;
  std::vector<char> seen(comp.vertex_count(), 0);
  const std::size_t root = comp.root();
  seen[root] = 1;
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t ei : comp.incident(v)) {
      const GraphEdge& e = comp.edges[ei];
      const std::size_t u = comp.is_c(v) ? e.beta_vertex : e.c_vertex;
      if (seen[u]) continue;
      seen[u] = 1;
      tree.push_back(ei);
      queue.push_back(u);
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

Monomial Monomial::variable(const CoeffId& id, int power) {
  Monomial m;
  if (power != 0) m.exponents_.emplace(id, power);
  return m;
}

Monomial Monomial::sign_of(int e) {
  Monomial m;
  m.negative_ = (e % 2) != 0;
  return m;
}

int Monomial::exponent(const CoeffId& id) const {
  auto it = exponents_.find(id);
  return it == exponents_.end() ? 0 : it->second;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial out = *this;
  out.negative_ = negative_ != o.negative_;
  for (const auto& [id, e] : o.exponents_) {
    const int v = (out.exponents_[id] += e);
    if (v == 0) out.exponents_.erase(id);
  }
  return out;
}

Monomial Monomial::inv() const {
  Monomial out = *this;
  for (auto& [id, e] : out.exponents_) e = -e;
  return out;
}

Monomial Monomial::operator/(const Monomial& o) const { return *this * o.inv(); }

Monomial Monomial::operator-() const {
  Monomial out = *this;
  out.negative_ = !negative_;
  return out;
}

FieldElement Monomial::evaluate(const EncodingCoefficients& alpha) const {
  const FieldSpec& f = alpha.field();
  FieldElement v = negative_ ? f.minus_one() : f.one();
  for (const auto& [id, e] : exponents_) v *= alpha.at(id).pow(e);
  return v;
}

std::string Monomial::to_string() const {
  auto product = [](const std::vector<std::pair<CoeffId, int>>& factors) {
    std::string s;
    for (const auto& [id, e] : factors) {
      if (!s.empty()) s += ' ';
      s += id.label();
      if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
  };
  std::vector<std::pair<CoeffId, int>> num;
  std::vector<std::pair<CoeffId, int>> den;
  for (const auto& [id, e] : exponents_) (e > 0 ? num : den).emplace_back(id, std::abs(e));
  std::string out = negative_ ? "-" : "";
  out += num.empty() ? "1" : product(num);
  if (!den.empty()) out += den.size() == 1 && den[0].second == 1 ? " / " + product(den) : " / (" + product(den) + ")";
  return out;
}

nlohmann::json Monomial::to_json() const {
  nlohmann::json ex = nlohmann::json::object();
  for (const auto& [id, e] : exponents_) ex[id.key()] = e;
  return {{"sign", negative_ ? -1 : 1}, {"exponents", ex}};
}

std::string CycleConstraint::to_string() const { return id.label() + " = " + value.to_string(); }

nlohmann::json CycleConstraint::to_json() const {
  return {{"A", A.to_json()}, {"coeff", id.key()}, {"expr", to_string()}, {"value", value.to_json()}};
}

std::vector<Monomial> tree_potentials(const Component& comp, const std::vector<std::size_t>& tree) {
  std::vector<char> usable(comp.edges.size(), 0);
  for (std::size_t ei : tree) usable.at(ei) = 1;
  std::vector<std::optional<Monomial>> pot(comp.vertex_count());
  spread(comp, usable, comp.root(), [&](std::size_t ei) { return edge_weight(comp.edges[ei]); }, pot);
  std::vector<Monomial> out;
  out.reserve(pot.size());
  for (std::size_t v = 0; v < pot.size(); ++v) {
    if (!pot[v]) throw Error(ErrorCode::InvalidArguments, "tree does not reach " + comp.vertex_name(v));
    out.push_back(*pot[v]);
  }
  return out;
}

CycleConstraint extract_cycle_constraint(const Component& comp, const std::vector<std::size_t>& tree,
                                         std::size_t edge) {
  if (std::find(tree.begin(), tree.end(), edge) != tree.end()) {
    throw Error(ErrorCode::InvalidArguments, comp.edges.at(edge).id.label() + " is a tree edge");
  }
  const auto pot = tree_potentials(comp, tree);
  const GraphEdge& e = comp.edges.at(edge);
  return {comp.A, e.id, Monomial::sign_of(e.phi) * pot[e.c_vertex] / pot[e.beta_vertex]};
}

std::vector<CycleConstraint> cycle_constraints(const Component& comp) {
  const auto tree = spanning_tree(comp);
  const auto pot = tree_potentials(comp, tree);
  std::vector<CycleConstraint> out;
  std::size_t next = 0;
  for (std::size_t ei = 0; ei < comp.edges.size(); ++ei) {
    if (next < tree.size() && tree[next] == ei) {
      ++next;
      continue;
    }
    const GraphEdge& e = comp.edges[ei];
    out.push_back({comp.A, e.id, Monomial::sign_of(e.phi) * pot[e.c_vertex] / pot[e.beta_vertex]});
  }
  return out;
}

std::vector<CycleConstraint> cycle_constraints(const ConstraintGraph& graph) {
  std::vector<CycleConstraint> out;
  for (const auto& comp : graph.components) {
    auto part = cycle_constraints(comp);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

const CoefficientEntry& CoefficientStatus::at(const CoeffId& id) const {
  auto it = index.find(id);
  if (it == index.end()) throw Error(ErrorCode::InvalidArguments, id.label() + " is not in the graph");
  return entries[it->second];
}

std::vector<CoeffId> CoefficientStatus::free_ids() const {
  std::vector<CoeffId> out;
  for (const auto& e : entries) {
    if (e.free) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CoeffId> CoefficientStatus::constrained_ids() const {
  std::vector<CoeffId> out;
  for (const auto& e : entries) {
    if (!e.free) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json CoefficientStatus::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j = {{"coeff", e.id.key()}, {"score", e.score}, {"status", e.free ? "free" : "constrained"}};
    if (e.constraint) j["constraint"] = e.constraint->to_json();
    list.push_back(std::move(j));
  }
  return {{"leaders", leaders.to_json()},
          {"free_count", free_ids().size()},
          {"constrained_count", constrained_ids().size()},
          {"coefficients", std::move(list)}};
}

CoefficientStatus greedy_free_coefficients(const ConstraintGraph& graph, std::mt19937_64* tie_shuffle,
                                           bool verify) {
  CoefficientStatus status;
  status.leaders = graph.leaders;
  std::vector<CoeffId> ids = graph.coefficient_ids();
  std::stable_sort(ids.begin(), ids.end(), [&](const CoeffId& a, const CoeffId& b) {
    return priority_score(a, graph.leaders) > priority_score(b, graph.leaders);
  });
  if (tie_shuffle != nullptr) {
    for (auto lo = ids.begin(); lo != ids.end();) {
      const int s = priority_score(*lo, graph.leaders);
      auto hi = std::find_if(lo, ids.end(), [&](const CoeffId& id) { return priority_score(id, graph.leaders) != s; });
      std::shuffle(lo, hi, *tie_shuffle);
      lo = hi;
    }
  }

  const std::size_t nc = graph.components.size();
  std::vector<UnionFind> forests;
  std::vector<std::vector<char>> free_edge(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    forests.emplace_back(graph.components[c].vertex_count());
    free_edge[c].assign(graph.components[c].edges.size(), 0);
  }

  for (const CoeffId& id : ids) {
    std::vector<std::pair<std::size_t, std::size_t>> where;
    bool closes_cycle = false;
    for (std::size_t c = 0; c < nc; ++c) {
      const auto ei = graph.components[c].find_edge(id);
      if (!ei) continue;
      where.emplace_back(c, *ei);
      const GraphEdge& e = graph.components[c].edges[*ei];
      if (forests[c].find(e.c_vertex) == forests[c].find(e.beta_vertex)) closes_cycle = true;
    }
    if (!closes_cycle) {
      for (auto [c, ei] : where) {
        const GraphEdge& e = graph.components[c].edges[ei];
        forests[c].unite(e.c_vertex, e.beta_vertex);
        free_edge[c][ei] = 1;
      }
    }
    status.index.emplace(id, status.entries.size());
    status.entries.push_back({id, priority_score(id, graph.leaders), !closes_cycle, std::nullopt});
  }

  // potentials over the free forest of each component, one root per tree
  std::vector<std::vector<std::optional<Monomial>>> pot(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const Component& comp = graph.components[c];
    pot[c].resize(comp.vertex_count());
    auto weight = [&](std::size_t ei) { return edge_weight(comp.edges[ei]); };
    spread(comp, free_edge[c], comp.root(), weight, pot[c]);
    for (std::size_t v = 0; v < comp.vertex_count(); ++v) {
      if (!pot[c][v]) spread(comp, free_edge[c], v, weight, pot[c]);
    }
  }

  for (auto& entry : status.entries) {
    if (entry.free) continue;
    for (std::size_t c = 0; c < nc && !entry.constraint; ++c) {
      const Component& comp = graph.components[c];
      const auto ei = comp.find_edge(entry.id);
      if (!ei) continue;
      const GraphEdge& e = comp.edges[*ei];
      if (forests[c].find(e.c_vertex) == forests[c].find(e.beta_vertex)) {
        entry.constraint = relation_from(comp, *ei, pot[c]);
      }
    }
  }

  if (!verify) return status;
  // every component must be consistent with the derived relations
  auto known = [&](const CoeffId& id) {
    const auto& entry = status.at(id);
    return entry.free ? Monomial::variable(id) : entry.constraint->value;
  };
  for (std::size_t c = 0; c < nc; ++c) {
    const Component& comp = graph.components[c];
    std::vector<char> all(comp.edges.size(), 1);
    std::vector<std::optional<Monomial>> full(comp.vertex_count());
    auto weight = [&](std::size_t ei) { return Monomial::sign_of(comp.edges[ei].phi) * known(comp.edges[ei].id); };
    spread(comp, all, comp.root(), weight, full);
    for (std::size_t ei = 0; ei < comp.edges.size(); ++ei) {
      const GraphEdge& e = comp.edges[ei];
      if (!full[e.c_vertex] || !full[e.beta_vertex]) continue;
      if (*full[e.c_vertex] != *full[e.beta_vertex] * weight(ei)) {
        throw Error(ErrorCode::InconsistentConstraints,
                    e.id.label() + " gets conflicting values in component A = " + comp.A.to_string());
      }
    }
  }
  return status;
}

bool free_edges_span(const ConstraintGraph& graph, const CoefficientStatus& status) {
  for (const auto& comp : graph.components) {
    UnionFind uf(comp.vertex_count());
    std::size_t n = 0;
    for (const auto& e : comp.edges) {
      if (!status.is_free(e.id)) continue;
      if (uf.find(e.c_vertex) == uf.find(e.beta_vertex)) return false;
      uf.unite(e.c_vertex, e.beta_vertex);
      ++n;
    }
    if (n + 1 != comp.vertex_count()) return false;
  }
  return true;
}

EncodingCoefficients complete_alpha(const CoefficientStatus& status, const EncodingCoefficients& free_values) {
  EncodingCoefficients out(free_values.field());
  for (const auto& [id, v] : free_values.values()) {
    auto it = status.index.find(id);
    if (it == status.index.end() || status.entries[it->second].free) out.set(id, v);
  }
  for (const auto& entry : status.entries) {
    if (entry.free) continue;
    out.set(entry.id, entry.constraint->value.evaluate(free_values));
  }
  return out;
}

EncodingCoefficients random_feasible_alpha(const CoefficientStatus& status, const SchemeParams& params,
                                           std::mt19937_64& rng) {
  const FieldSpec& f = *params.field;
  std::uniform_int_distribution<std::uint32_t> pick(1, f.q() - 1);
  EncodingCoefficients free_values(f);
  for (const CoeffId& id : all_coefficient_ids(params.K, params.t)) {
    auto it = status.index.find(id);
    if (it != status.index.end() && !status.entries[it->second].free) continue;
    free_values.set(id, FieldElement(f, pick(rng)));
  }
  return complete_alpha(status, free_values);
}

Propagation propagate_values(const Component& comp, const EncodingCoefficients& alpha,
                             std::optional<FieldElement> root) {
  const FieldSpec& f = alpha.field();
  for (const auto& e : comp.edges) {
    if (alpha.at(e.id).is_zero()) throw Error(ErrorCode::ZeroCoefficient, e.id.label() + " is zero");
  }
  const FieldElement start = root.value_or(f.minus_one());
  if (start.is_zero()) throw Error(ErrorCode::ZeroCoefficient, "root value must be nonzero");

  const auto tree = spanning_tree(comp);
  std::vector<char> in_tree(comp.edges.size(), 0);
  for (std::size_t ei : tree) in_tree[ei] = 1;

  std::vector<std::optional<FieldElement>> val(comp.vertex_count());
  val[comp.root()] = start;
  std::deque<std::size_t> queue{comp.root()};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t ei : comp.incident(v)) {
      if (!in_tree[ei]) continue;
      const GraphEdge& e = comp.edges[ei];
      const FieldElement w = f.sign(e.phi) * alpha.at(e.id);
      const std::size_t u = comp.is_c(v) ? e.beta_vertex : e.c_vertex;
      if (val[u]) continue;
      val[u] = comp.is_c(v) ? *val[v] / w : *val[v] * w;
      queue.push_back(u);
    }
  }

  Propagation out;
  for (std::size_t v = 0; v < comp.vertex_count(); ++v) {
    (comp.is_c(v) ? out.c : out.beta_tilde).emplace(comp.vertex_set(v), *val[v]);
  }
  for (std::size_t ei = 0; ei < comp.edges.size(); ++ei) {
    if (in_tree[ei]) continue;
    const GraphEdge& e = comp.edges[ei];
    if (*val[e.beta_vertex] * f.sign(e.phi) * alpha.at(e.id) != *val[e.c_vertex]) out.violations.push_back(e.id);
  }
  return out;
}

std::string to_dot(const Component& comp, const std::vector<std::size_t>& tree) {
  std::vector<char> in_tree(comp.edges.size(), 0);
  for (std::size_t ei : tree) in_tree.at(ei) = 1;
  std::ostringstream os;
  os << "graph \"A=" << comp.A.key() << "\" {\n";
  os << "  label=\"component for W" << comp.A.to_string() << "\";\n";
  for (std::size_t v = 0; v < comp.vertex_count(); ++v) {
    const bool c = comp.is_c(v);
    os << "  \"" << comp.vertex_name(v) << "\" [shape=" << (c ? "box" : "ellipse") << ", label=\""
       << (c ? "c_" : "β̃_") << comp.vertex_set(v).to_string() << "\"";
    if (v == comp.root()) os << ", penwidth=2";
    os << "];\n";
  }
  for (std::size_t ei = 0; ei < comp.edges.size(); ++ei) {
    const GraphEdge& e = comp.edges[ei];
    os << "  \"" << comp.vertex_name(e.beta_vertex) << "\" -- \"" << comp.vertex_name(e.c_vertex) << "\" [label=\"(-1)^"
       << e.phi << " " << e.id.label() << "\", style=" << (in_tree[ei] ? "solid" : "dashed") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace slfr
