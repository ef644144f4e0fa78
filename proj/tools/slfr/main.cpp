#include <CLI11.hpp>

#include "slfr/commands.hpp"

namespace {

using slfr::cli::RunConfig;

void add_scheme_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--K", c.K, "number of users")->check(CLI::Range(1, 64))->capture_default_str();
  sub->add_option("--N", c.N, "number of files")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--t", c.t, "cache parameter (each subfile cached by t users)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--q", c.q, "field order, as p or p^m")->capture_default_str();
  sub->add_option("--B", c.B, "file length in symbols (0: one symbol per subfile)")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--out", c.out, "output directory");
}

void add_alpha_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha", c.alpha, "encoding coefficients: wan | random-free | file:PATH | from-file PATH")
      ->capture_default_str();
  sub->add_option("alpha-file", c.alpha_path, "coefficient file for --alpha from-file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slfr: linear coded caching for scalar linear function retrieval"};
  app.require_subcommand(1);

  RunConfig graph_cfg;
  graph_cfg.q = "3";
  auto* graph = app.add_subcommand("graph", "export the constraint graph and the free/constrained coefficients");
  add_scheme_options(graph, graph_cfg);
  graph->add_option("--demands", graph_cfg.demands, "file:PATH fixes the leader set (default r = min(K, N))");
  graph->add_option("--format", graph_cfg.format, "text | json | dot")->capture_default_str();

  RunConfig verify_cfg;
  auto* verify = app.add_subcommand("verify", "sweep demand matrices and check every user decodes");
  add_scheme_options(verify, verify_cfg);
  add_alpha_options(verify, verify_cfg);
  verify->add_option("--demands", verify_cfg.demands, "random | exhaustive | file:PATH")->capture_default_str();
  verify->add_flag("--exhaustive", verify_cfg.exhaustive, "every demand matrix (q^(KN) <= 2^20)");
  verify->add_option("--samples", verify_cfg.samples, "random demands to draw")->capture_default_str();
  verify->add_option("--rank", verify_cfg.rank, "rank of the random demands");
  verify->add_option("--format", verify_cfg.format, "text | json")->capture_default_str();

  RunConfig sim_cfg;
  sim_cfg.q = "3";
  auto* sim = app.add_subcommand("simulate", "one placement/delivery/decode run");
  add_scheme_options(sim, sim_cfg);
  add_alpha_options(sim, sim_cfg);
  sim->add_option("--demands", sim_cfg.demands, "random | file:PATH")->capture_default_str();
  sim->add_option("--rank", sim_cfg.rank, "rank of the random demand (default min(K, N))");
  sim->add_option("--format", sim_cfg.format, "text | json")->capture_default_str();

  RunConfig demo_cfg;
  demo_cfg.q = "7";
  auto* demo = app.add_subcommand("demo", "worked examples with two leaders and t = 1");
  demo->add_option("which", demo_cfg.which, "appendix-a (K=4) | appendix-b (K=5)")
      ->required()
      ->check(CLI::IsMember({"appendix-a", "appendix-b"}));
  demo->add_option("--q", demo_cfg.q, "field for the equivalence checks")->capture_default_str();
  demo->add_option("--seed", demo_cfg.seed, "random seed")->capture_default_str();
  demo->add_option("--trials", demo_cfg.trials, "random evaluations per equivalence check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : slfr::cli::kUsage;
  }

  if (graph->parsed()) return slfr::cli::cmd_graph(graph_cfg);
  if (verify->parsed()) return slfr::cli::cmd_verify(verify_cfg);
  if (sim->parsed()) return slfr::cli::cmd_simulate(sim_cfg);
  if (demo->parsed()) return slfr::cli::cmd_demo(demo_cfg);
  return slfr::cli::kUsage;
}
