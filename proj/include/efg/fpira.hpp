#ifndef EFG_FPIRA_HPP
#define EFG_FPIRA_HPP

#include <algorithm>
#include <chrono>
#include <map>
#include <vector>

#include "efg/abstraction.hpp"
#include "efg/best_response.hpp"
#include "efg/game.hpp"
#include "efg/strategy.hpp"
#include "efg/trace.hpp"

namespace efg {

struct FpiraOptions {
  double epsilon = 0.05;
  long long max_iterations = 1000000;
  long long check_interval = 1;  // exploitability / trace cadence
  bool abstracted = true;        // false: plain fictitious play
  BestResponseOptions br;
};

struct FpiraResult {
  Behavior average;         // final average profile on the original game
  Abstraction abstraction;  // final mapping (identity when !abstracted)
  RunTrace trace;
  bool converged = false;
  long long iterations = 0;  // update steps performed
  double exploitability = 0.0;
};

// Maximum absolute change the opponent of `i` can see between two of i's
// strategies: max over the opponent's pure strategies of
// |u_opp(b_tilde) − u_opp(b_hat)|, computed as two max sweeps over the
// per-leaf differences C(z)·[π_i^{b̃}(z) − π_i^{b̂}(z)]·u_opp(z).
inline double compute_delta(const Game& g, Player i, const Behavior& b_hat,
                            const Behavior& b_tilde) {
  std::vector<double> pi_hat = own_reach(g, i, b_hat);
  std::vector<double> pi_tilde = own_reach(g, i, b_tilde);
  std::vector<double> leaf(g.num_nodes(), 0.0);
  std::vector<double> chance(g.num_nodes(), 1.0);
  for (int v = 1; v < g.num_nodes(); ++v) {
    const Node& n = g.nodes[v];
    chance[v] = chance[n.parent] *
                (g.nodes[n.parent].is_chance() ? n.chance_prob : 1.0);
    if (n.is_terminal()) {
      double u_opp = i == kPlayer1 ? -n.utility : n.utility;
      leaf[v] = chance[v] * (pi_tilde[v] - pi_hat[v]) * u_opp;
    }
  }
  MaxSweepResult up = max_sweep(g, opponent(i), leaf);
  for (double& x : leaf) x = -x;
  MaxSweepResult down = max_sweep(g, opponent(i), leaf);
  return std::max(up.value, down.value);
}

namespace detail {

// Fictitious play where the averages live on a coarse abstraction that is
// refined on demand. Each iteration the acting player best-responds in the
// ORIGINAL game; the abstraction is first refined so the response is
// representable (grouping members by their chosen action index), the
// average is λ-combined with the response both in the abstraction (b̂) and,
// virtually, in the original game (b̃, a sparse overlay); when the two
// differ in value for the opponent (Δ > 0) the affected sets are split so
// the original-game average can be kept.
class FpiraSolver {
 public:
  FpiraSolver(const Game& g, const FpiraOptions& opt)
      : g_(g),
        opt_(opt),
        x_(opt.abstracted ? Abstraction::initial(g) : Abstraction::identity(g)),
        avg_(x_.lowest_action_pure()) {}

  FpiraResult run() {
    trace_.domain = g_.name;
    trace_.algorithm = opt_.abstracted ? "fpira" : "fp";
    trace_.epsilon = opt_.epsilon;
    trace_.max_iterations = opt_.max_iterations;
    trace_.check_interval = opt_.check_interval;
    start_ = std::chrono::steady_clock::now();
    double sum = measure();
    emit(0, sum);
    bool converged = sum <= opt_.epsilon;
    long long t = 0;
    while (!converged && t < opt_.max_iterations) {
      ++t;
      step(t);
      if (t % opt_.check_interval == 0 || t == opt_.max_iterations) {
        sum = measure();
        emit(t, sum);
        converged = sum <= opt_.epsilon;
      }
    }
    trace_.converged = converged;
    FpiraResult out;
    out.average = x_.lift(avg_);
    out.abstraction = x_;
    out.trace = std::move(trace_);
    out.converged = converged;
    out.iterations = t;
    out.exploitability = sum;
    return out;
  }

 private:
  using Clock = std::chrono::steady_clock;

  // One overlay entry: the original-game update of a single member of a
  // still-merged set (these are the only rows where b̃ can differ from the
  // lifted b̂).
  struct OverlaySet {
    int abs_id = -1;
    std::vector<double> old_row;               // pre-update distribution
    std::vector<std::vector<double>> rows;     // per member, b̃'s rows
  };

  void step(long long t) {
    Player i = t % 2 == 1 ? kPlayer1 : kPlayer2;
    Behavior lifted = x_.lift(avg_);
    BestResponse br = best_response(g_, i, lifted, opt_.br);
    note_br(br);
    double lambda2 = 1.0 / (n_[i] + 1);
    double lambda1 = 1.0 - lambda2;

    if (opt_.abstracted) refine_for_response(i, br);

    // Own reaches of the acting player's original sets under the pre-update
    // average (rows are unchanged by the refinement above).
    std::vector<double> reach_old(g_.num_infosets(), 0.0);
    for (const InfoSet& s : g_.infosets) {
      if (s.owner == i) reach_old[s.id] = infoset_own_reach(s, lifted);
    }

    // b̃ overlay: per-member λ-updates of every still-merged set the
    // response reaches. Built from pre-update rows.
    std::vector<OverlaySet> overlay;
    long long aux_now = 0;
    if (opt_.abstracted) {
      for (const AbstractSet& s : x_.sets()) {
        if (!s.alive || s.owner != i || !s.abstracted()) continue;
        bool reached = false;
        for (int m : s.members) reached = reached || br.prescribes(m);
        if (!reached) continue;
        OverlaySet o;
        o.abs_id = s.id;
        o.old_row.assign(avg_.begin() + s.first_action,
                         avg_.begin() + s.first_action + s.num_actions);
        for (int m : s.members) {
          std::vector<double> row = o.old_row;
          if (br.prescribes(m)) {
            double coef = lambda2 / (lambda1 * reach_old[m] + lambda2);
            for (int k = 0; k < s.num_actions; ++k) {
              double target = k == br.prescription[m] ? 1.0 : 0.0;
              row[k] += coef * (target - row[k]);
            }
          }
          o.rows.push_back(std::move(row));
          aux_now += s.num_actions;
        }
        overlay.push_back(std::move(o));
      }
    }
    aux_peak_ = std::max(aux_peak_, aux_now);

    // b̂: λ-update of the abstraction-level average. The response's reach of
    // an abstract set sums the member indicators; its prescribed action
    // index is shared by all prescribed members (the refinement above
    // guarantees it).
    for (const AbstractSet& s : x_.sets()) {
      if (!s.alive || s.owner != i) continue;
      int n_br = 0, idx = -1;
      double r_old = 0.0;
      for (int m : s.members) {
        r_old += reach_old[m];
        if (br.prescribes(m)) {
          ++n_br;
          idx = br.prescription[m];
        }
      }
      if (n_br == 0) continue;
      double coef =
          lambda2 * n_br / (lambda1 * r_old + lambda2 * n_br);
      for (int k = 0; k < s.num_actions; ++k) {
        double target = k == idx ? 1.0 : 0.0;
        avg_[s.first_action + k] += coef * (target - avg_[s.first_action + k]);
      }
    }

    // Δ: the most the opponent can gain (either way) from the averages
    // having been combined in the abstraction instead of the original game.
    // Only merged sets are in the overlay; elsewhere b̃ equals the lifted b̂.
    if (!overlay.empty() && compute_overlay_delta(i, overlay) > 0.0) {
      // Keep b̃: split every reached merged set into prescribed singletons
      // plus an unreached remainder, writing the overlay rows in.
      for (const OverlaySet& o : overlay) {
        const AbstractSet& s = x_.set(o.abs_id);
        std::vector<std::vector<int>> blocks;
        std::vector<const std::vector<double>*> block_rows;
        std::vector<int> resid;
        for (std::size_t m = 0; m < s.members.size(); ++m) {
          if (br.prescribes(s.members[m])) {
            blocks.push_back({s.members[m]});
            block_rows.push_back(&o.rows[m]);
          } else {
            resid.push_back(s.members[m]);
          }
        }
        if (!resid.empty()) {
          blocks.push_back(std::move(resid));
          block_rows.push_back(&o.old_row);
        }
        std::vector<int> fresh = x_.split(o.abs_id, blocks);
        avg_.resize(x_.num_slots(), 0.0);
        for (std::size_t b = 0; b < fresh.size(); ++b) {
          const AbstractSet& ns = x_.set(fresh[b]);
          std::copy(block_rows[b]->begin(), block_rows[b]->end(),
                    avg_.begin() + ns.first_action);
        }
      }
    }
    ++n_[i];
  }

  // Splits each merged set of the acting player whose members the response
  // prescribes different action indices for, grouping by index; members
  // without a prescription form a remainder block. A set where only one
  // index occurs is left whole. New sets inherit the old average row.
  void refine_for_response(Player i, const BestResponse& br) {
    std::vector<int> snapshot;
    for (const AbstractSet& s : x_.sets()) {
      if (s.alive && s.owner == i && s.abstracted()) snapshot.push_back(s.id);
    }
    for (int id : snapshot) {
      const AbstractSet& s = x_.set(id);
      std::map<int, std::vector<int>> by_idx;
      std::vector<int> resid;
      for (int m : s.members) {
        if (br.prescribes(m)) {
          by_idx[br.prescription[m]].push_back(m);
        } else {
          resid.push_back(m);
        }
      }
      if (by_idx.size() <= 1) continue;
      std::vector<std::vector<int>> blocks;
      for (auto& [idx, ms] : by_idx) blocks.push_back(std::move(ms));
      if (!resid.empty()) blocks.push_back(std::move(resid));
      std::vector<double> old_row(
          avg_.begin() + s.first_action,
          avg_.begin() + s.first_action + s.num_actions);
      std::vector<int> fresh = x_.split(id, blocks);
      avg_.resize(x_.num_slots(), 0.0);
      for (int nid : fresh) {
        const AbstractSet& ns = x_.set(nid);
        std::copy(old_row.begin(), old_row.end(),
                  avg_.begin() + ns.first_action);
      }
    }
  }

  // max over the opponent's pure strategies of |u_opp(b̃) − u_opp(b̂)|,
  // computed as two max sweeps over C(z)·[π_i^{b̃}(z) − π_i^{b̂}(z)]·u_opp(z).
  double compute_overlay_delta(Player i, const std::vector<OverlaySet>& ov) {
    Behavior hat = x_.lift(avg_);
    Behavior tilde = hat;
    for (const OverlaySet& o : ov) {
      const AbstractSet& s = x_.set(o.abs_id);
      for (std::size_t m = 0; m < s.members.size(); ++m) {
        const InfoSet& orig = g_.infosets[s.members[m]];
        std::copy(o.rows[m].begin(), o.rows[m].end(),
                  tilde.begin() + orig.first_action);
      }
    }
    std::vector<double> pi_hat = own_reach(g_, i, hat);
    std::vector<double> pi_tilde = own_reach(g_, i, tilde);
    std::vector<double> leaf(g_.num_nodes(), 0.0);
    std::vector<double> chance(g_.num_nodes(), 1.0);
    for (int v = 1; v < g_.num_nodes(); ++v) {
      const Node& n = g_.nodes[v];
      chance[v] = chance[n.parent] *
                  (g_.nodes[n.parent].is_chance() ? n.chance_prob : 1.0);
      if (n.is_terminal()) {
        double u_opp = i == kPlayer1 ? -n.utility : n.utility;
        leaf[v] = chance[v] * (pi_tilde[v] - pi_hat[v]) * u_opp;
      }
    }
    MaxSweepResult up = max_sweep(g_, opponent(i), leaf);
    for (double& x : leaf) x = -x;
    MaxSweepResult down = max_sweep(g_, opponent(i), leaf);
    cache_peak_ = std::max(cache_peak_,
                           static_cast<long long>(
                               std::max(up.cache_entries, down.cache_entries)));
    double delta = std::max(up.value, down.value);
    return delta <= 1e-12 * g_.max_abs_utility ? 0.0 : delta;
  }

  double measure() {
    Behavior lifted = x_.lift(avg_);
    BestResponse b1 = best_response(g_, kPlayer1, lifted, opt_.br);
    BestResponse b2 = best_response(g_, kPlayer2, lifted, opt_.br);
    note_br(b1);
    note_br(b2);
    return b1.value + b2.value;
  }

  void note_br(const BestResponse& br) {
    cache_peak_ = std::max(cache_peak_,
                           static_cast<long long>(br.cache_peak_entries));
    br_peak_ = std::max(br_peak_,
                        static_cast<long long>(br.prescription_peak));
  }

  void emit(long long iteration, double sum) {
    TraceRow r;
    r.iteration = iteration;
    r.exploitability_sum = sum;
    r.abstract_infoset_count = x_.alive_set_count();
    r.mapping_words = x_.mapping_word_count();
    r.strategy_words = x_.alive_slot_count();
    r.regret_words = 0;
    r.aux_words = aux_peak_;
    r.cache_peak_words = cache_peak_;
    r.br_strategy_peak_words = br_peak_;
    r.wall_seconds =
        std::chrono::duration<double>(Clock::now() - start_).count();
    trace_.rows.push_back(r);
  }

  const Game& g_;
  FpiraOptions opt_;
  Abstraction x_;
  Behavior avg_;  // abstraction-keyed average profile (both players)
  int n_[2] = {1, 1};  // strategies averaged so far, per player
  long long cache_peak_ = 0, br_peak_ = 0, aux_peak_ = 0;
  Clock::time_point start_;
  RunTrace trace_;
};

}  // namespace detail

inline FpiraResult fpira_solve(const Game& g, const FpiraOptions& opt = {}) {
  detail::FpiraSolver solver(g, opt);
  return solver.run();
}

// Plain fictitious play: the same loop on the identity abstraction (no
// grouping, no refinement, no overlay).
inline FpiraResult fp_solve(const Game& g, FpiraOptions opt = {}) {
  opt.abstracted = false;
  detail::FpiraSolver solver(g, opt);
  return solver.run();
}

}  // namespace efg

#endif  // EFG_FPIRA_HPP
