// Command-line front end: solve one game, run a batch of experiments, or
// aggregate per-seed traces into mean/standard-error curves.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "efg/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Extensive-form game solver with on-demand abstraction"};
  app.require_subcommand(1);

  efg::ExperimentConfig cfg;
  CLI::App* solve = app.add_subcommand("solve", "Run one solver on one game");
  solve->add_option("--domain", cfg.domain,
                    "Game: P<bets><raises><cards>, GS<n>, GP<rounds>, or a "
                    "built-in test game name")
      ->required();
  solve->add_option("--alg", cfg.algorithm, "fp | fpira | cfr_plus | cfr_ira")
      ->required();
  solve->add_option("--eps", cfg.epsilon, "Target exploitability sum");
  solve->add_option("--kb", cfg.k_b, "Tracked originals for the bound test");
  solve->add_option("--kh", cfg.k_h, "Sampled originals for the heuristic");
  solve->add_option("--delay", cfg.delay, "Averaging delay (CFR variants)");
  solve->add_option("--seed", cfg.seed, "Sampling seed");
  solve->add_option("--max-iters", cfg.max_iterations, "Iteration budget");
  solve->add_option("--check-interval", cfg.check_interval,
                    "Exploitability evaluation cadence");
  solve->add_option("--out", cfg.out, "Trace CSV path");
  solve->add_option("--graph", cfg.graph_file,
                    "Pursuit graph file (GP domains)");

  std::string batch_config;
  CLI::App* bench = app.add_subcommand("bench", "Run a batch of experiments");
  bench->add_option("--config", batch_config, "Batch JSON file")->required();

  std::vector<std::string> agg_inputs;
  std::string agg_out;
  CLI::App* agg = app.add_subcommand(
      "aggregate", "Align per-seed traces by exploitability");
  agg->add_option("inputs", agg_inputs, "Trace CSV files")->required();
  agg->add_option("--out", agg_out, "Aggregate CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      efg::RunResult r = efg::run_experiment(cfg);
      std::printf(
          "%s %s: %s after %lld iterations, exploitability %.6g, "
          "%lld abstract sets\n",
          cfg.domain.c_str(), cfg.algorithm.c_str(),
          r.converged ? "converged" : "budget exhausted", r.iterations,
          r.exploitability, r.trace.rows.back().abstract_infoset_count);
      return r.converged ? 0 : 2;
    }
    if (bench->parsed()) {
      nlohmann::json index = efg::run_batch(batch_config);
      bool all = true;
      for (const nlohmann::json& e : index["runs"]) {
        std::printf("%s: %s\n", e["file"].get<std::string>().c_str(),
                    e["converged"].get<bool>() ? "converged" : "not converged");
        all = all && e["converged"].get<bool>();
      }
      return all ? 0 : 2;
    }
    std::vector<efg::RunTrace> traces;
    for (const std::string& path : agg_inputs) {
      traces.push_back(efg::load_trace_csv(path));
    }
    efg::save_aggregate_csv(agg_out, efg::aggregate(traces));
    std::printf("wrote %s (%zu traces)\n", agg_out.c_str(), traces.size());
    return 0;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
}
