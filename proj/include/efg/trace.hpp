#ifndef EFG_TRACE_HPP
#define EFG_TRACE_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace efg {

// One measured checkpoint of a solver run. Word counts follow the 32-bit
// accounting used throughout: every stored float/int of the relevant kind
// counts as one word; "peak" columns are maxima since the start of the run.
struct TraceRow {
  long long iteration = 0;
  double exploitability_sum = 0.0;
  long long abstract_infoset_count = 0;
  long long mapping_words = 0;
  long long strategy_words = 0;       // average-strategy storage
  long long regret_words = 0;         // regret-matching accumulators
  long long aux_words = 0;            // temporaries: r_h/r_b or strategy overlays
  long long cache_peak_words = 0;     // value caches (best response / sweeps)
  long long br_strategy_peak_words = 0;
  double wall_seconds = 0.0;
};

struct RunTrace {
  std::string domain;
  std::string algorithm;
  double epsilon = 0.0;
  int k_b = 0;
  int k_h = 0;
  int delay = 0;
  std::uint64_t seed = 0;
  long long max_iterations = 0;
  long long check_interval = 1;
  bool converged = false;
  std::vector<TraceRow> rows;

  static const char* csv_header() {
    return "iteration,exploitability_sum,abstract_infoset_count,"
           "mapping_words,strategy_words,regret_words,aux_words,"
           "cache_peak_words,br_strategy_peak_words,wall_seconds";
  }
};

inline std::string trace_row_csv(const TraceRow& r) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%lld,%.17g,%lld,%lld,%lld,%lld,%lld,%lld,%lld,%.6f",
                r.iteration, r.exploitability_sum, r.abstract_infoset_count,
                r.mapping_words, r.strategy_words, r.regret_words,
                r.aux_words, r.cache_peak_words, r.br_strategy_peak_words,
                r.wall_seconds);
  return buf;
}

inline void save_trace_csv(const RunTrace& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace: " + path);
  out << RunTrace::csv_header() << "\n";
  for (const TraceRow& r : t.rows) out << trace_row_csv(r) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline RunTrace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trace: " + path);
  RunTrace t;
  std::string line;
  if (!std::getline(in, line) || line != RunTrace::csv_header()) {
    throw std::runtime_error("bad trace header in " + path);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TraceRow r;
    char c;
    if (!(ls >> r.iteration >> c >> r.exploitability_sum >> c >>
          r.abstract_infoset_count >> c >> r.mapping_words >> c >>
          r.strategy_words >> c >> r.regret_words >> c >> r.aux_words >> c >>
          r.cache_peak_words >> c >> r.br_strategy_peak_words >> c >>
          r.wall_seconds)) {
      throw std::runtime_error("bad trace row in " + path + ": " + line);
    }
    t.rows.push_back(r);
  }
  return t;
}

}  // namespace efg

#endif  // EFG_TRACE_HPP
