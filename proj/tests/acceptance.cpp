// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "slfr/graph.hpp"
#include "slfr/harness.hpp"
#include "slfr/reference.hpp"

using namespace slfr;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (ok) detail << "first failure: " << why << "; ";
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

std::vector<CycleConstraint> constraints_of(const CoefficientStatus& status) {
  std::vector<CycleConstraint> out;
  for (const CoeffId& id : status.constrained_ids()) out.push_back(*status.at(id).constraint);
  return out;
}

std::string fmt(const Rational& r) { return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()); }

std::string shape(int K, int r, int t, const FieldSpec& f) {
  return "K=" + std::to_string(K) + " r=" + std::to_string(r) + " t=" + std::to_string(t) + " " + f.name();
}

// Full-rank worst case: measured symbols / B equals the counted load.
void load_reproduction(Outcome& o) {
  std::size_t runs = 0;
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const auto& f = FieldSpec::get(q);
    for (int K = 1; K <= 6; ++K)
      for (int t = 0; t <= K; ++t)
        for (int N = 1; N <= 4; ++N) {
          const int r = std::min(K, N);
          std::mt19937_64 rng(1000 * K + 100 * t + 10 * N + q);
          const auto p = SchemeParams::make(K, N, t, f);
          const Rational want = oracle::load_by_counting(K, t, r);
          for (int rep = 0; rep < 2; ++rep) {
            const auto D = random_demand_of_rank(f, K, N, r, rng);
            const auto report = simulate(p, D, AlphaChoice::wan(), rng());
            ++runs;
            const std::string tag = shape(K, r, t, f) + " N=" + std::to_string(N);
            o.expect(report.success(), tag + " did not decode");
            o.expect(report.measured_load == want, tag + " measured " + fmt(report.measured_load));
            o.expect(report.theoretical_load == want, tag + " formula " + fmt(report.theoretical_load));
          }
        }
  }
  o.detail << runs << " simulations, all loads exact";
}

void four_user_golden(Outcome& o) {
  const auto g = build_graph(4, 1, {1, 2});
  o.expect(g.components.size() == 1, "component count");
  if (g.components.size() != 1) return;
  const Component& comp = g.components.front();
  o.expect(comp.vertex_count() == 10, "vertex count");
  o.expect(comp.edges.size() == 12, "edge count");
  const auto tree = cycle_constraints(g);
  o.expect(tree.size() == 3, "tree constraint count");
  const auto greedy = constraints_of(greedy_free_coefficients(g));
  o.expect(greedy.size() == 3, "greedy constraint count");

  const auto& f = FieldSpec::get(10007);
  std::mt19937_64 rng(26);
  const auto universe = all_coefficient_ids(4, 1);
  const auto chain = reference::ratio_chain(3, 4);
  const std::vector<reference::Identity> combined{chain.front()};
  for (const auto* ours : {&tree, &greedy}) {
    const auto rep = reference::check_equivalence(*ours, reference::four_user_solved_forms(), combined, universe, f,
                                                  50, rng);
    o.expect(rep.trials == 50 && rep.equivalent(),
             std::to_string(rep.forward_mismatches + rep.backward_mismatches) + " mismatches");
  }
  o.detail << "1 component, 10 vertices, 12 edges, 3 constraints, equivalent in 50/50 trials over GF(10007)";

  auto inverted = reference::four_user_solved_forms();
  inverted.back() = reference::four_user_b12_inverted();
  const auto rep = reference::check_equivalence(tree, inverted, combined, universe, f, 50, rng);
  std::cout << "info: b{1,2} relation with the inverted ratio: " << rep.forward_mismatches << "/" << rep.trials
            << " forward and " << rep.backward_mismatches << "/" << rep.trials
            << " backward mismatches (corrected form used above)\n";
}

void five_user_golden(Outcome& o) {
  const auto g = build_graph(5, 1, {1, 2});
  o.expect(g.components.size() == 3, "component count");
  CoefficientStatus status;
  try {
    status = greedy_free_coefficients(g);
  } catch (const Error& e) {
    o.fail(std::string("greedy raised ") + e.what());
    return;
  }
  const auto constrained = status.constrained_ids();
  o.expect(constrained.size() == 6, "constrained count " + std::to_string(constrained.size()));
  std::set<CoeffId> expected;
  for (const auto& form : reference::five_user_solved_forms()) expected.insert(form.id);
  o.expect(std::set<CoeffId>(constrained.begin(), constrained.end()) == expected, "constrained set differs");
  std::mt19937_64 rng(31);
  const auto rep =
      reference::check_equivalence(constraints_of(status), reference::five_user_solved_forms(),
                                   reference::five_user_chains(), all_coefficient_ids(5, 1), FieldSpec::get(10007),
                                   50, rng);
  o.expect(rep.equivalent(), std::to_string(rep.forward_mismatches + rep.backward_mismatches) + " mismatches");
  o.detail << "3 components, 6 constrained, no conflict, equivalent in " << rep.trials << " trials";
}

struct Instance {
  TransformedDemand td;
  bool nondegenerate = true;
};

// Nondegenerate demand when one can be found, plain rank-r otherwise.
Instance draw_instance(const FieldSpec& f, int K, int r, int t, std::mt19937_64& rng, bool& impossible) {
  if (!impossible) {
    if (auto D = random_nondegenerate_demand(f, K, r, r, t, rng, 5000)) return {select_leaders(*D), true};
    impossible = true;
  }
  return {select_leaders(random_demand_of_rank(f, K, r, r, rng)), false};
}

void closed_form_vs_oracle(Outcome& o) {
  std::size_t instances = 0, systems = 0, unique = 0, fallback = 0;
  std::vector<std::string> fallback_shapes;
  for (std::uint32_t q : {3u, 5u, 7u}) {
    const auto& f = FieldSpec::get(q);
    for (int K = 2; K <= 6; ++K)
      for (int r = 1; r <= 3; ++r)
        for (int t = 0; t <= 2; ++t) {
          if (K - r < t + 1) continue;
          const auto p = SchemeParams::make(K, r, t, f);
          std::mt19937_64 rng(7919 * K + 131 * r + 17 * t + q);
          bool impossible = false;
          for (int n = 0; n < 500; ++n) {
            const Instance inst = draw_instance(f, K, r, t, rng, impossible);
            if (!inst.nondegenerate) ++fallback;
            const TransformedDemand& td = inst.td;
            const auto alpha = choose_alpha(n % 2 || r < t ? AlphaChoice::wan() : AlphaChoice::random_free(), p,
                                            td.leaders, rng);
            ++instances;
            for (const IndexSet& A : enumerate_subsets(IndexSet::range(1, K) - td.leaders, t + 1)) {
              ++systems;
              const auto beta = closed_form_decoding(A, td, alpha).beta;
              const std::string tag = shape(K, r, t, f) + " A=" + A.to_string();
              o.expect(oracle::satisfies_reconstruction(A, td, alpha, beta), tag + " closed form off the identity");
              const auto res = oracle_beta(A, td, alpha);
              o.expect(res.status != OracleStatus::Infeasible, tag + " oracle infeasible");
              o.expect(in_solution_set(A, td, alpha, beta), tag + " not in solution set");
              if (res.status == OracleStatus::Unique) {
                ++unique;
                o.expect(res.beta == beta, tag + " differs from unique solution");
              }
            }
          }
          if (impossible) fallback_shapes.push_back(shape(K, r, t, f));
        }
  }
  o.detail << instances << " instances, " << systems << " systems, " << unique << " unique; " << fallback
           << " plain rank-r demands where no nondegenerate one exists (" << fallback_shapes.size() << " shapes)";
}

void sign_rule_correctness(Outcome& o) {
  for (std::uint32_t q : {2u, 3u}) {
    SweepConfig cfg{SchemeParams::make(4, 2, 1, FieldSpec::get(q)), AlphaChoice::wan(), true};
    const auto s = sweep(cfg);
    o.expect(s.ok(), "sweep over GF(" + std::to_string(q) + ")");
    o.detail << "GF(" << q << "): " << s.passed << "/" << s.trials << "; ";
  }
  std::size_t checked = 0;
  for (std::uint32_t q : {3u, 7u, 8u})
    for (int K = 2; K <= 6; ++K)
      for (int r = 1; r <= 3; ++r)
        for (int t = 0; t <= 2; ++t) {
          if (K - r < t + 1) continue;
          const auto& f = FieldSpec::of_order(q);
          const IndexSet L = IndexSet::range(1, r);
          const auto alpha = wan_alpha(SchemeParams::make(K, r, t, f), L);
          for (const auto& c : cycle_constraints(build_graph(K, t, L))) {
            ++checked;
            o.expect(c.holds(alpha), shape(K, r, t, f) + " " + c.to_string());
          }
        }
  o.detail << checked << " cycle constraints hold for the sign rule";
}

void general_feasibility(Outcome& o) {
  struct Shape {
    int K, N, t;
    std::uint32_t q;
  };
  const std::vector<Shape> shapes{{4, 2, 1, 3}, {5, 2, 1, 5}, {6, 3, 2, 7}, {6, 3, 1, 7}, {5, 2, 2, 7}, {6, 2, 1, 5}};
  std::mt19937_64 rng(6);
  std::size_t passed = 0, caught = 0, degenerate = 0;
  for (int n = 0; n < 200; ++n) {
    const Shape& s = shapes[n % shapes.size()];
    const auto& f = FieldSpec::get(s.q);
    const auto p = SchemeParams::make(s.K, s.N, s.t, f);
    const DemandMatrix D = random_demand_of_rank(f, s.K, s.N, s.N, rng);
    const auto td = select_leaders(D);
    const auto graph = build_graph(p, td.leaders);
    const auto status = greedy_free_coefficients(graph);
    const auto alpha = random_feasible_alpha(status, p, rng);
    const auto tag = shape(s.K, s.N, s.t, f) + " trial " + std::to_string(n);

    bool ok = true;
    for (const IndexSet& A : enumerate_subsets(IndexSet::range(1, s.K) - td.leaders, s.t + 1)) {
      ok &= oracle_beta(A, td, alpha).status != OracleStatus::Infeasible;
      ok &= oracle::satisfies_reconstruction(A, td, alpha, closed_form_decoding(A, td, alpha).beta);
    }
    ok &= simulate(p, D, AlphaChoice::from(alpha), rng()).success();
    o.expect(ok, tag + " random free coefficients failed");
    passed += ok;
  }

  for (int n = 0; n < 200; ++n) {
    const Shape& s = shapes[n % shapes.size()];
    const auto& f = FieldSpec::get(s.q);
    const auto p = SchemeParams::make(s.K, s.N, s.t, f);
    bool impossible = false;
    const Instance inst = draw_instance(f, s.K, s.N, s.t, rng, impossible);
    degenerate += !inst.nondegenerate;
    const auto status = greedy_free_coefficients(build_graph(p, inst.td.leaders));
    auto alpha = random_feasible_alpha(status, p, rng);
    const auto constrained = status.constrained_ids();
    const CoeffId id = constrained[rng() % constrained.size()];
    FieldElement scale = random_nonzero(f, rng);
    while (scale.is_one()) scale = random_nonzero(f, rng);
    alpha.set(id, alpha.at(id) * scale);

    bool violated = false;
    for (const IndexSet& A : enumerate_subsets(IndexSet::range(1, s.K) - inst.td.leaders, s.t + 1))
      violated |= oracle_beta(A, inst.td, alpha).status == OracleStatus::Infeasible;
    o.expect(violated, shape(s.K, s.N, s.t, f) + " perturbing " + id.label() + " went unnoticed");
    caught += violated;
  }
  o.detail << passed << "/200 random assignments pass, " << caught << "/200 perturbations infeasible";
  if (degenerate) o.detail << " (" << degenerate << " on plain demands)";
}

void hierarchy_equivalence(Outcome& o) {
  struct Shape {
    int K, r, t;
    std::uint32_t q;
  };
  const std::vector<Shape> shapes{{4, 2, 1, 5}, {5, 2, 1, 7}, {5, 3, 1, 7}, {6, 3, 2, 7}, {6, 2, 2, 11}, {5, 2, 2, 7}};
  std::mt19937_64 rng(7);
  std::size_t compared = 0;
  for (int n = 0; n < 100; ++n) {
    const Shape& s = shapes[n % shapes.size()];
    const auto& f = FieldSpec::get(s.q);
    const auto D = random_nondegenerate_demand(f, s.K, s.r, s.r, s.t, rng);
    if (!D) {
      o.fail(shape(s.K, s.r, s.t, f) + " no nondegenerate demand");
      continue;
    }
    const auto td = select_leaders(*D);
    const auto alpha = choose_alpha(n % 2 ? AlphaChoice::wan() : AlphaChoice::random_free(),
                                    SchemeParams::make(s.K, s.r, s.t, f), td.leaders, rng);
    for (const IndexSet& A : enumerate_subsets(IndexSet::range(1, s.K) - td.leaders, s.t + 1)) {
      const auto closed = closed_form_decoding(A, td, alpha).beta;
      o.expect(hierarchy_recursion_beta(A, td, alpha) == closed, shape(s.K, s.r, s.t, f) + " A=" + A.to_string());
      compared += closed.size();
    }
  }
  o.detail << "100 instances, " << compared << " coefficients equal";
}

void property_suites(Outcome& o) {
  std::size_t fields = 0;
  for (std::uint32_t q : oracle::prime_powers_up_to(64)) {
    const auto& f = FieldSpec::of_order(q);
    ++fields;
    bool ok = true;
    for (std::uint32_t a = 0; a < q; ++a) {
      if (a) ok &= f.mul(a, f.inv(a)) == 1;
      ok &= f.add(a, f.neg(a)) == 0;
      for (std::uint32_t b = 0; b < q; ++b) {
        ok &= f.add(a, b) == oracle::poly_add(f, a, b) && f.mul(a, b) == oracle::poly_mul(f, a, b);
        for (std::uint32_t c = 0; c < q; ++c) {
          ok &= f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
          ok &= f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
          ok &= f.add(f.add(a, b), c) == f.add(a, f.add(b, c));
        }
      }
    }
    o.expect(ok, "field axioms " + f.name());
  }

  std::mt19937_64 rng(8);
  std::size_t matrices = 0;
  for (std::uint32_t q : {2u, 3u, 4u, 7u, 9u}) {
    const auto& f = FieldSpec::of_order(q);
    for (std::size_t n = 1; n <= 5; ++n)
      for (int i = 0; i < 20; ++i) {
        const FqMatrix a = random_matrix(f, n, n, rng), b = random_matrix(f, n, n, rng);
        ++matrices;
        o.expect(det(a * b) == det(a) * det(b), "det multiplicativity " + f.name());
        o.expect(det(a) == oracle::det_by_laplace(a), "Laplace expansion " + f.name());
      }
  }

  std::size_t params = 0;
  for (int K = 1; K <= 7; ++K)
    for (int t = 0; t <= K; ++t)
      for (std::size_t mult : {1u, 2u}) {
        const std::size_t B = oracle::pascal(K, t) * mult;
        const auto p = SchemeParams::make(K, 3, t, FieldSpec::get(2), B);
        const Placement pl = make_placement(p);
        std::vector<int> hits(B, 0);
        for (const auto& [T, br] : pl.partition)
          for (std::size_t i = 0; i < br.length; ++i) ++hits.at(br.offset + i);
        o.expect(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }), "partition coverage");
        const std::size_t expected = 3 * B * oracle::pascal(K - 1, t - 1) / oracle::pascal(K, t);
        for (int k = 1; k <= K; ++k) o.expect(pl.cache_symbols(k) == expected, "cache size");
        ++params;
      }

  std::size_t graphs = 0;
  for (int K = 1; K <= 7; ++K)
    for (int t = 0; t <= K; ++t)
      for (int r = 0; r <= K; ++r) {
        for (const Component& comp : build_graph(K, t, IndexSet::range(1, r)).components) {
          ++graphs;
          o.expect(is_bipartite(comp), "bipartite");
          o.expect(is_connected(comp), "connected");
          o.expect(spanning_tree(comp).size() + 1 == comp.vertex_count(), "tree edge count");
          for (const GraphEdge& e : comp.edges)
            o.expect(comp.is_c(e.c_vertex) && !comp.is_c(e.beta_vertex), "edge joins c and b vertices");
        }
      }
  o.detail << fields << " fields, " << matrices << " matrices, " << params << " parameter sets, " << graphs
           << " components";
}

struct Criterion {
  const char* name;
  double limit_s;  // 0: none
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1 load reproduction", 10, load_reproduction},
      {"AC2 four-user graph", 0, four_user_golden},
      {"AC3 five-user graph", 0, five_user_golden},
      {"AC4 closed form vs oracle", 60, closed_form_vs_oracle},
      {"AC5 sign-rule correctness", 120, sign_rule_correctness},
      {"AC6 general feasibility", 0, general_feasibility},
      {"AC7 hierarchy recursion", 0, hierarchy_equivalence},
      {"AC8 property suites", 0, property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) o.fail("took " + std::to_string(secs) + " s");
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (o.ok ? "PASS " : "FAIL ") << c.name << " [" << timing;
    if (c.limit_s > 0) std::cout << " / " << c.limit_s << " s";
    std::cout << "] " << o.detail.str() << std::endl;
    failed += !o.ok;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << '\n';
  return failed ? 1 : 0;
}
