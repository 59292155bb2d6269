#ifndef EFG_BENCH_HPP
#define EFG_BENCH_HPP

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "efg/cfr.hpp"
#include "efg/domains/registry.hpp"
#include "efg/fpira.hpp"
#include "efg/trace.hpp"

namespace efg {

struct ExperimentConfig {
  std::string domain;
  std::string algorithm;  // fp | fpira | cfr_plus | cfr_ira
  double epsilon = 0.05;
  int k_b = 0;
  int k_h = 0;
  int delay = 100;
  std::uint64_t seed = 0;
  long long max_iterations = 1000000;
  long long check_interval = 1;
  std::string out;         // CSV path; empty writes nothing
  std::string graph_file;  // pursuit-graph override for GP domains

  void validate() const {
    if (algorithm != "fp" && algorithm != "fpira" && algorithm != "cfr_plus" &&
        algorithm != "cfr_ira") {
      throw std::invalid_argument("unknown algorithm: " + algorithm);
    }
    if (algorithm != "cfr_ira" && (k_b != 0 || k_h != 0)) {
      throw std::invalid_argument("k_b/k_h only apply to cfr_ira");
    }
    if (check_interval < 1) {
      throw std::invalid_argument("check_interval must be >= 1");
    }
    if (max_iterations < 0) {
      throw std::invalid_argument("max_iterations must be >= 0");
    }
  }
};

struct RunResult {
  RunTrace trace;
  Behavior average;         // final averages on the original game
  Abstraction abstraction;  // final mapping
  bool converged = false;
  long long iterations = 0;
  double exploitability = 0.0;
};

// Builds the domain, executes the named solver, and writes the trace CSV
// when an output path is configured.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Game g = domains::build_domain(cfg.domain, cfg.graph_file);
  RunResult out;
  if (cfg.algorithm == "fp" || cfg.algorithm == "fpira") {
    FpiraOptions opt;
    opt.epsilon = cfg.epsilon;
    opt.max_iterations = cfg.max_iterations;
    opt.check_interval = cfg.check_interval;
    opt.abstracted = cfg.algorithm == "fpira";
    FpiraResult r = fpira_solve(g, opt);
    out.trace = std::move(r.trace);
    out.average = std::move(r.average);
    out.abstraction = std::move(r.abstraction);
    out.converged = r.converged;
    out.iterations = r.iterations;
    out.exploitability = r.exploitability;
  } else {
    CfrOptions opt;
    opt.epsilon = cfg.epsilon;
    opt.max_iterations = cfg.max_iterations;
    opt.check_interval = cfg.check_interval;
    opt.k_b = cfg.k_b;
    opt.k_h = cfg.k_h;
    opt.delay = cfg.delay;
    opt.seed = cfg.seed;
    opt.abstracted = cfg.algorithm == "cfr_ira";
    CfrResult r = cfg.algorithm == "cfr_ira" ? cfr_ira_solve(g, opt)
                                             : cfr_plus_solve(g, opt);
    out.trace = std::move(r.trace);
    out.average = std::move(r.average);
    out.abstraction = std::move(r.abstraction);
    out.converged = r.converged;
    out.iterations = r.iterations;
    out.exploitability = r.exploitability;
  }
  // Deterministic algorithms leave sampling fields at zero; stamp the
  // requested parameters so every trace is self-describing.
  out.trace.seed = cfg.seed;
  if (!cfg.out.empty()) save_trace_csv(out.trace, cfg.out);
  return out;
}

// --- aggregation over seeds ------------------------------------------------

// One aligned point: column means and standard errors over the traces that
// reached the exploitability threshold.
struct AggregatePoint {
  double threshold = 0.0;
  int n = 0;
  std::vector<double> mean, stderr_;  // one entry per trace column
};

inline const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols = {
      "iteration",     "exploitability_sum",   "abstract_infoset_count",
      "mapping_words", "strategy_words",       "regret_words",
      "aux_words",     "cache_peak_words",     "br_strategy_peak_words",
      "wall_seconds"};
  return cols;
}

inline std::vector<double> row_values(const TraceRow& r) {
  return {static_cast<double>(r.iteration),
          r.exploitability_sum,
          static_cast<double>(r.abstract_infoset_count),
          static_cast<double>(r.mapping_words),
          static_cast<double>(r.strategy_words),
          static_cast<double>(r.regret_words),
          static_cast<double>(r.aux_words),
          static_cast<double>(r.cache_peak_words),
          static_cast<double>(r.br_strategy_peak_words),
          r.wall_seconds};
}

// Aligns traces of repeated runs by exploitability rather than iteration:
// the thresholds are the first trace's checkpoint values, and each other
// trace contributes its column values at the first moment its exploitability
// falls to the threshold, linearly interpolated between the two bracketing
// checkpoints. Traces must share every configuration field except the seed.
inline std::vector<AggregatePoint> aggregate(
    const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("no traces to aggregate");
  const RunTrace& ref = traces.front();
  for (const RunTrace& t : traces) {
    if (t.domain != ref.domain || t.algorithm != ref.algorithm ||
        t.epsilon != ref.epsilon || t.k_b != ref.k_b || t.k_h != ref.k_h ||
        t.delay != ref.delay) {
      throw std::invalid_argument(
          "aggregate: traces differ in more than the seed");
    }
    if (t.rows.empty()) throw std::invalid_argument("aggregate: empty trace");
  }
  std::size_t ncols = trace_columns().size();
  std::vector<AggregatePoint> out;
  for (const TraceRow& ref_row : ref.rows) {
    AggregatePoint pt;
    pt.threshold = ref_row.exploitability_sum;
    std::vector<std::vector<double>> samples;
    for (const RunTrace& t : traces) {
      std::size_t hit = t.rows.size();
      for (std::size_t m = 0; m < t.rows.size(); ++m) {
        if (t.rows[m].exploitability_sum <= pt.threshold) {
          hit = m;
          break;
        }
      }
      if (hit == t.rows.size()) continue;  // never reached this threshold
      std::vector<double> cur = row_values(t.rows[hit]);
      if (hit > 0) {
        std::vector<double> prev = row_values(t.rows[hit - 1]);
        double gap = prev[1] - cur[1];
        double alpha = gap > 0.0 ? (prev[1] - pt.threshold) / gap : 1.0;
        for (std::size_t c = 0; c < ncols; ++c) {
          cur[c] = (1.0 - alpha) * prev[c] + alpha * cur[c];
        }
      }
      samples.push_back(std::move(cur));
    }
    pt.n = static_cast<int>(samples.size());
    pt.mean.assign(ncols, 0.0);
    pt.stderr_.assign(ncols, 0.0);
    for (const std::vector<double>& s : samples) {
      for (std::size_t c = 0; c < ncols; ++c) pt.mean[c] += s[c];
    }
    for (std::size_t c = 0; c < ncols; ++c) pt.mean[c] /= pt.n;
    if (pt.n > 1) {
      for (const std::vector<double>& s : samples) {
        for (std::size_t c = 0; c < ncols; ++c) {
          double d = s[c] - pt.mean[c];
          pt.stderr_[c] += d * d;
        }
      }
      for (std::size_t c = 0; c < ncols; ++c) {
        pt.stderr_[c] = std::sqrt(pt.stderr_[c] / (pt.n - 1)) /
                        std::sqrt(static_cast<double>(pt.n));
      }
    }
    out.push_back(std::move(pt));
  }
  return out;
}

inline void save_aggregate_csv(const std::string& path,
                               const std::vector<AggregatePoint>& agg) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "threshold,n";
  for (const std::string& c : trace_columns()) {
    f << ",mean_" << c << ",se_" << c;
  }
  f << "\n";
  char buf[64];
  for (const AggregatePoint& pt : agg) {
    std::snprintf(buf, sizeof buf, "%.17g", pt.threshold);
    f << buf << "," << pt.n;
    for (std::size_t c = 0; c < pt.mean.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", pt.mean[c]);
      f << "," << buf;
      std::snprintf(buf, sizeof buf, "%.17g", pt.stderr_[c]);
      f << "," << buf;
    }
    f << "\n";
  }
}

// --- batch runner ------------------------------------------------------------

// Worker count for batch runs: the EFG_WORKERS environment variable, else 1.
// Solvers are single-threaded; parallelism is across runs only.
inline int worker_count() {
  const char* env = std::getenv("EFG_WORKERS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

// Expands a batch JSON file into per-seed runs, executes them on
// worker_count() threads, writes one trace CSV per run plus an index JSON.
//
// Schema: {"output_dir": str, "experiments": [{"domain": str,
// "algorithm": str, "epsilon": num, "k_b": int, "k_h": int, "delay": int,
// "seeds": [int...], "max_iterations": int, "check_interval": int,
// "graph_file": str}]} with every field except domain/algorithm optional
// (seeds defaults to [0]).
inline nlohmann::json run_batch(const std::string& config_path) {
  std::ifstream f(config_path);
  if (!f) throw std::runtime_error("cannot read " + config_path);
  nlohmann::json spec = nlohmann::json::parse(f);
  std::string out_dir = spec.value("output_dir", ".");
  std::vector<ExperimentConfig> runs;
  for (const nlohmann::json& e : spec.at("experiments")) {
    ExperimentConfig base;
    base.domain = e.at("domain").get<std::string>();
    base.algorithm = e.at("algorithm").get<std::string>();
    base.epsilon = e.value("epsilon", 0.05);
    base.k_b = e.value("k_b", 0);
    base.k_h = e.value("k_h", 0);
    base.delay = e.value("delay", 100);
    base.max_iterations = e.value("max_iterations", 1000000LL);
    base.check_interval = e.value("check_interval", 1LL);
    base.graph_file = e.value("graph_file", std::string());
    std::vector<std::uint64_t> seeds =
        e.value("seeds", std::vector<std::uint64_t>{0});
    for (std::uint64_t s : seeds) {
      ExperimentConfig cfg = base;
      cfg.seed = s;
      cfg.out = out_dir + "/" + cfg.domain + "_" + cfg.algorithm + "_s" +
                std::to_string(s) + ".csv";
      cfg.validate();
      runs.push_back(std::move(cfg));
    }
  }
  std::vector<nlohmann::json> entries(runs.size());
  std::atomic<std::size_t> next{0};
  std::mutex fail_mu;
  std::string failure;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      try {
        RunResult r = run_experiment(runs[i]);
        entries[i] = {{"file", runs[i].out},
                      {"domain", runs[i].domain},
                      {"algorithm", runs[i].algorithm},
                      {"epsilon", runs[i].epsilon},
                      {"k_b", runs[i].k_b},
                      {"k_h", runs[i].k_h},
                      {"delay", runs[i].delay},
                      {"seed", runs[i].seed},
                      {"converged", r.converged},
                      {"iterations", r.iterations},
                      {"final_exploitability", r.exploitability}};
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (failure.empty()) failure = ex.what();
      }
    }
  };
  int workers = std::min(
      worker_count(),
      static_cast<int>(std::max<std::size_t>(runs.size(), 1)));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();
  if (!failure.empty()) throw std::runtime_error(failure);
  nlohmann::json index = {{"runs", entries}};
  std::ofstream idx(out_dir + "/index.json");
  idx << index.dump(2) << "\n";
  return index;
}

}  // namespace efg

#endif  // EFG_BENCH_HPP
