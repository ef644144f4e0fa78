#include "slfr/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "slfr/codec.hpp"
#include "slfr/error.hpp"
#include "slfr/graph.hpp"
#include "slfr/harness.hpp"
#include "slfr/log.hpp"
#include "slfr/reference.hpp"
#include "slfr/scheme.hpp"

namespace slfr::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams:
    case ErrorCode::IndivisibleFileLength:
    case ErrorCode::InvalidFieldSpec:
    case ErrorCode::ParseError:
    case ErrorCode::BudgetExceeded:
    case ErrorCode::OutOfRange:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::MismatchedField:
    case ErrorCode::InvalidDemand:
      return true;
    default:
      return false;
  }
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_usage_error(e.code()) ? kUsage : kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

void check_format(const std::string& format, std::initializer_list<std::string_view> allowed) {
  if (std::find(allowed.begin(), allowed.end(), format) == allowed.end()) {
    throw UsageError("format '" + format + "' is not supported by this command");
  }
}

std::optional<std::string> file_source(std::string_view spec) {
  constexpr std::string_view prefix = "file:";
  if (!spec.starts_with(prefix)) return std::nullopt;
  return std::string(spec.substr(prefix.size()));
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  log_info("wrote " + path.string());
}

SchemeParams make_params(const RunConfig& c) {
  return SchemeParams::make(c.K, c.N, c.t, FieldSpec::parse(c.q), c.B);
}

// {"D": [[...]]} or {"demands": [{"D": ...}, ...]}
std::vector<DemandMatrix> load_demands(const SchemeParams& p, const std::string& path) {
  const json j = read_json(path);
  std::vector<DemandMatrix> out;
  if (j.is_object() && j.contains("demands")) {
    for (const auto& d : j.at("demands")) out.push_back(DemandMatrix::from_json(*p.field, d));
  } else {
    out.push_back(DemandMatrix::from_json(*p.field, j));
  }
  for (const auto& d : out) {
    if (d.users() != p.K || d.files() != p.N) {
      throw UsageError(path + ": demand matrix is " + std::to_string(d.users()) + "x" + std::to_string(d.files()) +
                       ", expected " + std::to_string(p.K) + "x" + std::to_string(p.N));
    }
  }
  if (out.empty()) throw UsageError(path + ": no demand matrices");
  return out;
}

AlphaChoice load_alpha(const RunConfig& c, const SchemeParams& p) {
  if (c.alpha == "wan") return AlphaChoice::wan();
  if (c.alpha == "random-free") return AlphaChoice::random_free();
  std::string path;
  if (auto f = file_source(c.alpha)) {
    path = *f;
  } else if (c.alpha == "from-file") {
    if (c.alpha_path.empty()) throw UsageError("--alpha from-file needs a path");
    path = c.alpha_path;
  } else {
    throw UsageError("unknown --alpha '" + c.alpha + "' (wan | random-free | file:PATH)");
  }
  json j = read_json(path);
  if (!j.contains("field")) j["field"] = p.field->to_json();
  return AlphaChoice::from(EncodingCoefficients::from_json(j));
}

std::string matrix_string(const FqMatrix& m) { return json(m.to_ints()).dump(); }

std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

std::string failure_reason(const TrialReport& r) {
  if (!r.errors.empty()) return r.errors.front();
  std::string users;
  for (std::size_t k = 0; k < r.decoded.size(); ++k) {
    if (!r.decoded[k]) users += (users.empty() ? "" : ",") + std::to_string(k + 1);
  }
  if (!users.empty()) return "users " + users + " failed to decode";
  if (r.identity_violations) return std::to_string(r.identity_violations) + " reconstruction identity violations";
  return "closed form disagrees with the oracle";
}

std::string params_text(const SchemeParams& p) {
  return "K=" + std::to_string(p.K) + " N=" + std::to_string(p.N) + " t=" + std::to_string(p.t) + " " +
         p.field->name() + " B=" + std::to_string(p.B);
}

// Spanning tree made of the edges whose coefficient the greedy kept free.
std::vector<std::size_t> free_tree(const Component& comp, const CoefficientStatus& status) {
  std::vector<std::size_t> tree;
  for (std::size_t i = 0; i < comp.edges.size(); ++i) {
    if (status.is_free(comp.edges[i].id)) tree.push_back(i);
  }
  return tree;
}

std::string component_file(const Component& comp) {
  std::string name = "component_";
  for (int k : comp.A) name += std::to_string(k) + (k == comp.A.back() ? "" : "-");
  return name + ".dot";
}

}  // namespace

int cmd_graph(const RunConfig& c) {
  return guarded([&] {
    check_format(c.format, {"text", "json", "dot"});
    const SchemeParams p = make_params(c);
    IndexSet leaders = IndexSet::range(1, std::min(c.K, c.N));
    if (auto path = file_source(c.demands)) {
      const auto demands = load_demands(p, *path);
      if (demands.size() != 1) throw UsageError("graph takes a single demand matrix");
      leaders = select_leaders(demands.front()).leaders;
    } else if (c.demands != "random") {
      throw UsageError("graph accepts --demands file:PATH only");
    }
    const int r = leaders.size();
    log_debug(params_text(p) + " leaders " + leaders.to_string());

    const ConstraintGraph graph = build_graph(p, leaders);
    if (graph.empty()) {
      std::cout << "nothing to reconstruct: K - r = " << c.K - r << " < t + 1 = " << c.t + 1 << '\n';
      return int{kPass};
    }
    const CoefficientStatus status = greedy_free_coefficients(graph);

    if (!c.out.empty()) {
      fs::create_directories(c.out);
      for (const auto& comp : graph.components) {
        write_file(fs::path(c.out) / component_file(comp), to_dot(comp, free_tree(comp, status)));
      }
      json j = status.to_json();
      j["graph"] = graph.to_json();
      write_file(fs::path(c.out) / "coefficients.json", j.dump(2) + "\n");
    }

    if (c.format == "dot") {
      for (const auto& comp : graph.components) std::cout << to_dot(comp, free_tree(comp, status));
    } else if (c.format == "json") {
      json j = status.to_json();
      j["graph"] = graph.to_json();
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << params_text(p) << ", leaders " << leaders.to_string() << " (r=" << r << ")\n";
      std::cout << "components: " << graph.components.size() << '\n';
      for (const auto& comp : graph.components) {
        const std::size_t cycles = comp.edges.size() + 1 - comp.vertex_count();
        std::cout << "  A=" << comp.A.to_string() << ": " << comp.vertex_count() << " vertices, " << comp.edges.size()
                  << " edges, " << cycles << " independent cycles\n";
      }
      const auto constrained = status.constrained_ids();
      std::cout << "coefficients: " << status.entries.size() << " (" << status.free_ids().size() << " free, "
                << constrained.size() << " constrained)\n";
      std::cout << "constraints: " << constrained.size() << '\n';
      for (const CoeffId& id : constrained) std::cout << "  " << status.at(id).constraint->to_string() << '\n';
    }
    return int{kPass};
  });
}

int cmd_verify(const RunConfig& c) {
  return guarded([&] {
    check_format(c.format, {"text", "json"});
    const SchemeParams p = make_params(c);
    const AlphaChoice alpha = load_alpha(c, p);

    std::ofstream trials_out;
    if (!c.out.empty()) {
      fs::create_directories(c.out);
      trials_out.open(fs::path(c.out) / "trials.jsonl");
      if (!trials_out) throw std::runtime_error("cannot write to " + c.out);
    }
    auto emit = [&](const TrialReport& r) {
      if (c.format == "json" || trials_out.is_open()) {
        const std::string line = r.to_json().dump();
        if (c.format == "json") std::cout << line << '\n';
        if (trials_out.is_open()) trials_out << line << '\n';
      }
      if (!r.success()) log_debug("trial seed " + std::to_string(r.seed) + ": " + failure_reason(r));
    };

    SweepSummary summary;
    if (auto path = file_source(c.demands)) {
      p.validate();
      for (const auto& D : load_demands(p, *path)) {
        TrialReport rep = simulate(p, D, alpha, c.seed + summary.trials);
        ++summary.trials;
        emit(rep);
        if (rep.success()) {
          ++summary.passed;
        } else if (summary.failures.size() < 20) {
          summary.failures.push_back(std::move(rep));
        }
      }
    } else if (c.exhaustive || c.demands == "exhaustive" || c.demands == "random") {
      SweepConfig cfg{p, alpha, c.exhaustive || c.demands == "exhaustive", c.samples, c.seed, c.rank};
      log_info(std::string("verify: ") + (cfg.exhaustive ? "exhaustive" : "random") + " sweep, " + params_text(p) +
               ", alpha " + alpha.name());
      summary = sweep(cfg, emit);
    } else {
      throw UsageError("unknown --demands '" + c.demands + "' (random | exhaustive | file:PATH)");
    }

    json sj = {{"summary",
                {{"params", p.to_json()},
                 {"alpha", alpha.name()},
                 {"trials", summary.trials},
                 {"passed", summary.passed},
                 {"ok", summary.ok()}}}};
    if (trials_out.is_open()) trials_out << sj.dump() << '\n';
    if (c.format == "json") {
      std::cout << sj.dump() << '\n';
    } else {
      for (const auto& f : summary.failures) {
        std::cout << "FAIL seed=" << f.seed << " D=" << json(f.demand).dump() << ": " << failure_reason(f) << '\n';
        for (std::size_t i = 1; i < f.errors.size(); ++i) std::cout << "    " << f.errors[i] << '\n';
      }
      std::cout << "verify: " << summary.passed << "/" << summary.trials << " trials passed (" << params_text(p)
                << ", alpha " << alpha.name() << ")\n";
      std::cout << (summary.ok() ? "PASS" : "FAIL") << '\n';
    }
    return int{summary.ok() ? kPass : kFailure};
  });
}

int cmd_simulate(const RunConfig& c) {
  return guarded([&] {
    check_format(c.format, {"text", "json"});
    const SchemeParams p = make_params(c);
    const AlphaChoice alpha = load_alpha(c, p);
    std::optional<DemandMatrix> D;
    if (auto path = file_source(c.demands)) {
      D = load_demands(p, *path).front();
    } else if (c.demands == "random") {
      std::mt19937_64 rng(c.seed);
      const int r = c.rank.value_or(std::min(c.K, c.N));
      if (r < 0 || r > std::min(c.K, c.N)) throw UsageError("--rank must lie in [0, min(K, N)]");
      D = random_demand_of_rank(*p.field, p.K, p.N, r, rng);
    } else {
      throw UsageError("simulate accepts --demands random or file:PATH");
    }
    const TrialReport rep = simulate(p, *D, alpha, c.seed);
    if (!c.out.empty()) {
      fs::create_directories(c.out);
      write_file(fs::path(c.out) / "report.json", rep.to_json().dump(2) + "\n");
    }
    if (c.format == "json") {
      std::cout << rep.to_json().dump() << '\n';
    } else {
      std::cout << params_text(p) << ", alpha " << alpha.name() << ", seed " << c.seed << '\n';
      std::cout << "D = " << matrix_string(D->D) << ", leaders " << rep.leaders.to_string() << '\n';
      std::cout << "load: measured " << rational_text(rep.measured_load) << ", for rank " << rep.leaders.size() << " "
                << rational_text(rep.rank_load) << ", worst case " << rational_text(rep.theoretical_load)
                << " (+" << rep.header_symbols << " header symbols)\n";
      std::cout << "reconstructed unsent messages: " << rep.reconstructed << '\n';
      std::cout << "decoded:";
      for (std::size_t k = 0; k < rep.decoded.size(); ++k) {
        std::cout << " " << k + 1 << (rep.decoded[k] ? "=ok" : "=FAIL");
      }
      std::cout << '\n';
      for (const auto& e : rep.errors) std::cout << "error: " << e << '\n';
      std::cout << (rep.success() ? "PASS" : "FAIL") << '\n';
    }
    return int{rep.success() ? kPass : kFailure};
  });
}

namespace {

struct DemoCase {
  std::string name;
  int K = 4;
  std::size_t components = 1;
  std::vector<reference::SolvedForm> forms;
  std::vector<reference::Identity> identities;
  std::set<CoeffId> expected_constrained;
};

DemoCase appendix_a() {
  // The greedy breaks the three cycles at different edges than the reference forms do.
  return {"appendix-a", 4, 1, reference::four_user_solved_forms(), reference::ratio_chain(3, 4),
          {{2, {3}}, {2, {4}}, {4, {3}}}};
}

DemoCase appendix_b() {
  DemoCase d{"appendix-b", 5, 3, reference::five_user_solved_forms(), reference::five_user_chains(), {}};
  for (const auto& f : d.forms) d.expected_constrained.insert(f.id);
  return d;
}

bool report(bool ok, const std::string& what) {
  std::cout << (ok ? "  [ok]   " : "  [FAIL] ") << what << '\n';
  return ok;
}

int run_demo(const RunConfig& c, const DemoCase& d) {
  const FieldSpec& f = FieldSpec::parse(c.q);
  const IndexSet L{1, 2};
  const SchemeParams p = SchemeParams::make(d.K, 2, 1, f);
  std::mt19937_64 rng(c.seed);
  bool ok = true;

  std::cout << "== " << d.name << ": K=" << d.K << ", r=2, t=1, leaders " << L.to_string() << '\n';
  const ConstraintGraph graph = build_graph(p, L);
  ok &= report(graph.components.size() == d.components,
               "components: " + std::to_string(graph.components.size()));
  std::vector<CycleConstraint> tree_constraints;
  for (const auto& comp : graph.components) {
    const std::size_t cycles = comp.edges.size() + 1 - comp.vertex_count();
    ok &= report(is_connected(comp) && is_bipartite(comp) && cycles == 3,
                 "A=" + comp.A.to_string() + ": " + std::to_string(comp.vertex_count()) + " vertices, " +
                     std::to_string(comp.edges.size()) + " edges, " + std::to_string(cycles) +
                     " independent cycles, bipartite");
    std::cout << "  cycle constraints from the BFS tree rooted at " << comp.vertex_name(comp.root()) << ":\n";
    for (const auto& cc : cycle_constraints(comp)) {
      std::cout << "    " << cc.to_string() << '\n';
      tree_constraints.push_back(cc);
    }
  }

  const CoefficientStatus status = greedy_free_coefficients(graph);
  std::vector<CycleConstraint> greedy;
  for (const CoeffId& id : status.constrained_ids()) greedy.push_back(*status.at(id).constraint);
  std::cout << "  greedy free-coefficient selection: " << status.free_ids().size() << " free, " << greedy.size()
            << " constrained\n";
  for (const auto& cc : greedy) std::cout << "    " << cc.to_string() << '\n';
  const auto constrained = status.constrained_ids();
  ok &= report(std::set<CoeffId>(constrained.begin(), constrained.end()) == d.expected_constrained,
               "constrained set matches the expected " + std::to_string(d.expected_constrained.size()) +
                   " coefficients");

  std::cout << "  reference solved forms:\n";
  for (const auto& form : d.forms) std::cout << "    " << form.to_string() << '\n';

  const auto universe = all_coefficient_ids(d.K, 1);
  auto equivalence = [&](const std::vector<CycleConstraint>& ours, const std::string& label) {
    const auto rep = reference::check_equivalence(ours, d.forms, d.identities, universe, f, c.trials, rng);
    return report(rep.equivalent(), label + " vs reference forms over " + f.name() + ": " +
                                         std::to_string(rep.forward_mismatches + rep.backward_mismatches) +
                                         " mismatches in " + std::to_string(rep.trials) + " trials");
  };
  if (graph.components.size() == 1) ok &= equivalence(tree_constraints, "tree constraints");
  ok &= equivalence(greedy, "greedy constraints");

  if (d.K == 4) {
    auto alt = d.forms;
    alt.back() = reference::four_user_b12_inverted();
    const auto rep = reference::check_equivalence(tree_constraints, alt, d.identities, universe, f, c.trials, rng);
    std::cout << "  note: alternative form " << alt.back().to_string() << " is "
              << (rep.equivalent() ? "equivalent" : "not equivalent") << " ("
              << rep.forward_mismatches + rep.backward_mismatches << " mismatches)\n";
  }

  const EncodingCoefficients wan = wan_alpha(p, L);
  const bool wan_ok =
      std::all_of(tree_constraints.begin(), tree_constraints.end(), [&](const auto& cc) { return cc.holds(wan); }) &&
      std::all_of(greedy.begin(), greedy.end(), [&](const auto& cc) { return cc.holds(wan); }) &&
      std::all_of(d.forms.begin(), d.forms.end(), [&](const auto& form) { return form.holds(wan); });
  ok &= report(wan_ok, "sign-rule coefficients satisfy every constraint over " + f.name());

  const FieldSpec& f3 = FieldSpec::of_order(3);
  const SchemeParams p3 = SchemeParams::make(d.K, 2, 1, f3);
  std::optional<DemandMatrix> D;
  for (int attempt = 0; attempt < 1000 && !D; ++attempt) {
    DemandMatrix cand = random_demand_of_rank(f3, d.K, 2, 2, rng);
    if (select_leaders(cand).leaders == L) D = cand;
  }
  if (!D) throw std::runtime_error("no demand with leaders {1,2} found");
  for (const AlphaChoice& choice : {AlphaChoice::wan(), AlphaChoice::random_free()}) {
    const TrialReport rep = simulate(p3, *D, choice, c.seed);
    ok &= report(rep.success(), "end-to-end over GF(3), alpha " + choice.name() + ", D=" + matrix_string(D->D) +
                                    ": load " + rational_text(rep.measured_load) + ", " +
                                    std::to_string(rep.reconstructed) + " unsent messages rebuilt" +
                                    (rep.success() ? "" : ", " + failure_reason(rep)));
  }

  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kPass : kFailure;
}

}  // namespace

int cmd_demo(const RunConfig& c) {
  return guarded([&] {
    check_format(c.format, {"text"});
    if (c.which == "appendix-a") return run_demo(c, appendix_a());
    if (c.which == "appendix-b") return run_demo(c, appendix_b());
    throw UsageError("unknown demo '" + c.which + "' (appendix-a | appendix-b)");
  });
}

}  // namespace slfr::cli
