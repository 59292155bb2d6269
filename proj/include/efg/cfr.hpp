#ifndef EFG_CFR_HPP
#define EFG_CFR_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "efg/abstraction.hpp"
#include "efg/best_response.hpp"
#include "efg/game.hpp"
#include "efg/rng.hpp"
#include "efg/strategy.hpp"
#include "efg/trace.hpp"

namespace efg {

// Regret-matching+: a nonnegative regret vector normalized by its sum,
// uniform when the sum is zero. Throws on negative input (the accumulators
// are clamped after every sweep, so stored values are never negative
// between iterations).
inline std::vector<double> regret_matching_plus(const std::vector<double>& q) {
  double sum = 0.0;
  for (double v : q) {
    if (v < 0.0) throw std::logic_error("negative regret-matching+ input");
    sum += v;
  }
  std::vector<double> b(q.size());
  for (std::size_t a = 0; a < q.size(); ++a) {
    b[a] = sum > 0.0 ? q[a] / sum : 1.0 / q.size();
  }
  return b;
}

// Samples k originals from inside merged sets (`player_filter` is a player
// id, or -1 for both players' pools combined) by walking the merged sets in
// uniformly random order, taking whole sets while they fit and trimming the
// boundary set to a uniform random subset of the remaining budget. Keeping
// members of one set together is what gives the per-set regret comparisons
// something to compare; with equal set sizes every original is included
// with the same marginal probability k/N.
inline std::vector<int> sample_information_sets(const Abstraction& x,
                                                int player_filter, int k,
                                                Rng& rng) {
  if (k <= 0) return {};
  std::vector<int> set_ids;
  for (const AbstractSet& s : x.sets()) {
    if (!s.alive || !s.abstracted()) continue;
    if (player_filter >= 0 && s.owner != player_filter) continue;
    set_ids.push_back(s.id);
  }
  rng.shuffle(set_ids);
  std::vector<int> out;
  std::size_t budget = static_cast<std::size_t>(k);
  for (int id : set_ids) {
    const std::vector<int>& ms = x.set(id).members;
    if (out.size() + ms.size() <= budget) {
      out.insert(out.end(), ms.begin(), ms.end());
      if (out.size() == budget) break;
    } else {
      std::vector<int> part = rng.sample_subset(ms, budget - out.size());
      out.insert(out.end(), part.begin(), part.end());
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct CfrOptions {
  double epsilon = 0.05;
  long long max_iterations = 1000000;
  long long check_interval = 1;
  int k_b = 0;  // originals tracked for the regret-bound refinement
  int k_h = 0;  // originals re-sampled each iteration for the heuristic
  int delay = 100;  // iterations before average accumulation starts
  std::uint64_t seed = 0;
  bool abstracted = true;          // false: plain CFR+ on the original sets
  bool track_regret_bound = false; // record external-regret checkpoints
  // Scale each tracked member's preference band by the opponent-and-chance
  // weight it accumulated this iteration (equivalent to comparing
  // weight-normalized one-iteration regrets). Off by default: the bare
  // band compares the accumulated regrets directly.
  bool heuristic_weight_normalized = false;
  BestResponseOptions br;
};

struct RegretCheckpoint {
  long long t = 0;
  double regret1 = 0.0, regret2 = 0.0;  // external regret R_i^T
  double bound1 = 0.0, bound2 = 0.0;    // Δ·|I_i|·sqrt(A_max)·sqrt(T)
};

struct CfrResult {
  Behavior average;
  Abstraction abstraction;
  RunTrace trace;
  bool converged = false;
  long long iterations = 0;
  double exploitability = 0.0;
  std::vector<RegretCheckpoint> regret_checkpoints;
};

// CFR+ on a (possibly merged) information-set structure, refining it on the
// fly. Players alternate sweeps (player 1 on odd t). Each iteration samples
// k_h of the acting player's merged originals and tracks their exact
// one-iteration regrets (r_h) to split sets whose members favor visibly
// different actions; on a doubling schedule it samples k_b originals of
// both players and accumulates their regrets (r_b) across the window to
// split sets whose members' regret outgrows the admissible threshold.
// State is public: the solver doubles as the test bench for the individual
// update rules.
class CfrSolver {
 public:
  CfrSolver(const Game& g, const CfrOptions& opt)
      : g_(g),
        opt_(opt),
        x_(opt.abstracted ? Abstraction::initial(g) : Abstraction::identity(g)),
        q_(x_.num_slots(), 0.0),
        num_(x_.num_slots(), 0.0),
        rng_(opt.seed) {
    // One scratch frame per tree level, sized once: resizing mid-recursion
    // would invalidate the frames shallower calls still hold.
    int deepest = 0;
    std::vector<int> depth(g.num_nodes(), 0);
    for (int v = 1; v < g.num_nodes(); ++v) {
      depth[v] = depth[g.nodes[v].parent] + 1;
      deepest = std::max(deepest, depth[v]);
    }
    scratch_.resize(deepest + 1);
    epoch_.assign(x_.sets().size(), 0);
  }

  CfrResult run() {
    trace_.domain = g_.name;
    trace_.algorithm = opt_.abstracted ? "cfr_ira" : "cfr_plus";
    trace_.epsilon = opt_.epsilon;
    trace_.k_b = opt_.k_b;
    trace_.k_h = opt_.k_h;
    trace_.delay = opt_.delay;
    trace_.seed = opt_.seed;
    trace_.max_iterations = opt_.max_iterations;
    trace_.check_interval = opt_.check_interval;
    start_ = std::chrono::steady_clock::now();
    if (opt_.track_regret_bound) {
      unif_avg_ = uniform_behavior(g_);  // placeholder; replaced at t=1
    }
    double sum = measure();
    emit(0, sum);
    bool converged = sum <= opt_.epsilon;
    while (!converged && t_ <= opt_.max_iterations) {
      iterate();
      if ((t_ - 1) % opt_.check_interval == 0 ||
          t_ - 1 == opt_.max_iterations) {
        sum = measure();
        emit(t_ - 1, sum);
        converged = sum <= opt_.epsilon;
      }
    }
    trace_.converged = converged;
    CfrResult out;
    out.average = x_.lift(average_rows());
    out.abstraction = x_;
    out.trace = std::move(trace_);
    out.converged = converged;
    out.iterations = t_ - 1;
    out.exploitability = sum;
    out.regret_checkpoints = std::move(regret_checkpoints_);
    return out;
  }

  // --- one iteration -----------------------------------------------------

  void iterate() {
    Player i = t_ % 2 == 1 ? kPlayer1 : kPlayer2;
    sampled_h_ = sample_information_sets(x_, i, opt_.k_h, rng_);
    r_h_.clear();
    w_h_.assign(g_.num_infosets(), 0.0);
    for (int m : sampled_h_) {
      r_h_.emplace(m, std::vector<double>(g_.infosets[m].num_actions, 0.0));
    }
    if (t_ == t_next_) {
      sampled_b_ = sample_information_sets(x_, -1, opt_.k_b, rng_);
      r_b_.clear();
      for (int m : sampled_b_) {
        r_b_.emplace(m, std::vector<double>(g_.infosets[m].num_actions, 0.0));
      }
      t_last_ = t_;
      t_next_ = t_ + (1LL << j_);
      ++j_;
    }
    sweep(0, 0, i, 1.0);
    clamp_negative_regrets(i);
    if (t_ > opt_.delay) average_update(i);
    if (opt_.track_regret_bound) note_played_profile();
    heuristic_update(i);
    if (t_ != t_last_) bound_update();
    ++t_;
  }

  // Depth-first pass: returns the acting player's expected value of the
  // subtree under the current regret-matching+ policies (read per node, so
  // later nodes of a set already see this sweep's updates). pi_opp carries
  // chance-and-opponent reach (for regret weighting). Policy rows and action
  // values live in per-depth scratch buffers, reused across nodes.
  double sweep(int v, int depth, Player i, double pi_opp) {
    const Node& n = g_.nodes[v];
    if (n.is_terminal()) {
      return i == kPlayer1 ? n.utility : -n.utility;
    }
    if (n.is_chance()) {
      double val = 0.0;
      for (int a = 0; a < n.num_children; ++a) {
        int c = n.first_child + a;
        double p = g_.nodes[c].chance_prob;
        val += p * sweep(c, depth + 1, i, pi_opp * p);
      }
      return val;
    }
    const AbstractSet& s = x_.set(x_.phi(n.infoset));
    int base = s.first_action;
    int na = s.num_actions;
    std::vector<double>& b = scratch_[depth].policy;
    b.resize(na);
    double qsum = 0.0;
    for (int a = 0; a < na; ++a) {
      b[a] = q_[base + a] > 0.0 ? q_[base + a] : 0.0;
      qsum += b[a];
    }
    for (int a = 0; a < na; ++a) {
      b[a] = qsum > 0.0 ? b[a] / qsum : 1.0 / na;
    }
    if (n.owner != i) {
      double val = 0.0;
      for (int a = 0; a < na; ++a) {
        double p = b[a];  // b belongs to this depth; recursion won't touch it
        val += p * sweep(n.first_child + a, depth + 1, i, pi_opp * p);
      }
      return val;
    }
    // Acting player: counterfactual action values and regret updates.
    std::vector<double>& vals = scratch_[depth].values;
    vals.resize(na);
    double val = 0.0;
    for (int a = 0; a < na; ++a) {
      vals[a] = sweep(n.first_child + a, depth + 1, i, pi_opp);
      val += b[a] * vals[a];
    }
    auto h = r_h_.find(n.infoset);
    auto rb = r_b_.find(n.infoset);
    if (h != r_h_.end()) w_h_[n.infoset] += pi_opp;
    for (int a = 0; a < na; ++a) {
      double inc = pi_opp * (vals[a] - val);
      q_[base + a] += inc;
      if (h != r_h_.end()) h->second[a] += inc;
      if (rb != r_b_.end()) rb->second[a] += inc;
    }
    return val;
  }

  void clamp_negative_regrets(Player i) {
    for (const AbstractSet& s : x_.sets()) {
      if (!s.alive || s.owner != i) continue;
      for (int a = 0; a < s.num_actions; ++a) {
        double& q = q_[s.first_action + a];
        if (q < 0.0) q = 0.0;
      }
    }
  }

  // Accumulates the acting player's settled (post-sweep, post-clamp)
  // regret-matching+ strategy into the average numerators, weighted by the
  // iteration number so later strategies count more. Each set's weight also
  // carries its own-reach under that same strategy, summed over member
  // histories; a set whose averaging restarted at a split only accumulates
  // from the following iteration.
  void average_update(Player i) {
    avg_rows_ = current_rows();
    reach_avg_.assign(x_.sets().size(), 0.0);
    accumulate_reach(0, i, 1.0);
    double w = static_cast<double>(t_);
    for (const AbstractSet& s : x_.sets()) {
      if (!s.alive || s.owner != i) continue;
      if (t_ <= std::max<long long>(opt_.delay, epoch_[s.id])) continue;
      double reach = reach_avg_[s.id];
      if (reach <= 0.0) continue;
      for (int a = 0; a < s.num_actions; ++a) {
        num_[s.first_action + a] += w * reach * avg_rows_[s.first_action + a];
      }
    }
  }

  // Own-reach of player i's sets under avg_rows_: the product of i's own
  // action probabilities along the path, summed over each set's member
  // histories. Chance and opponent moves don't discount the reach.
  void accumulate_reach(int v, Player i, double pi_own) {
    const Node& n = g_.nodes[v];
    if (n.is_terminal()) return;
    if (n.owner == i) {
      const AbstractSet& s = x_.set(x_.phi(n.infoset));
      reach_avg_[s.id] += pi_own;
      for (int a = 0; a < s.num_actions; ++a) {
        double p = avg_rows_[s.first_action + a];
        if (p > 0.0) accumulate_reach(n.first_child + a, i, pi_own * p);
      }
      return;
    }
    for (int a = 0; a < n.num_children; ++a) {
      accumulate_reach(n.first_child + a, i, pi_own);
    }
  }

  // Splits the acting player's sets whose sampled members disagree on which
  // actions look best this iteration: members are partitioned by the set of
  // actions whose one-iteration regret is within 1/(5·sqrt(t)) of their
  // maximum; the largest partition block (ties to the block holding the
  // lowest member id) absorbs all unsampled members. A sampled member whose
  // histories all carried zero opponent-and-chance weight this iteration has
  // tracked nothing and is absorbed like an unsampled one. A single block
  // means no structural change at all.
  void heuristic_update(Player i) {
    if (sampled_h_.empty()) return;
    std::vector<int> snapshot;
    for (const AbstractSet& s : x_.sets()) {
      if (!s.alive || s.owner != i || !s.abstracted()) continue;
      for (int m : s.members) {
        if (r_h_.count(m)) {
          snapshot.push_back(s.id);
          break;
        }
      }
    }
    double band = 1.0 / (5.0 * std::sqrt(static_cast<double>(t_)));
    for (int sid : snapshot) {
      if (s_dead(sid)) continue;
      const AbstractSet& s = x_.set(sid);
      if (s.num_actions > 63) {
        throw std::logic_error("heuristic update supports <= 63 actions");
      }
      std::map<std::uint64_t, std::vector<int>> groups;
      std::vector<int> unsampled;
      for (int m : s.members) {
        auto it = r_h_.find(m);
        if (it == r_h_.end() || w_h_[m] <= 0.0) {
          unsampled.push_back(m);
          continue;
        }
        // With weight normalization the row is compared on its per-weight
        // scale: r[a]/w >= max/w - band  <=>  r[a] >= max - band*w.
        double spread = opt_.heuristic_weight_normalized ? band * w_h_[m] : band;
        double mx = *std::max_element(it->second.begin(), it->second.end());
        std::uint64_t mask = 0;
        for (int a = 0; a < s.num_actions; ++a) {
          if (it->second[a] >= mx - spread) mask |= 1ULL << a;
        }
        groups[mask].push_back(m);
      }
      if (groups.size() <= 1) continue;
      // Largest block; ties resolved toward the block with the lowest
      // member id (members were pushed in ascending order).
      const std::vector<int>* best = nullptr;
      for (const auto& [mask, ms] : groups) {
        if (!best || ms.size() > best->size() ||
            (ms.size() == best->size() && ms.front() < best->front())) {
          best = &ms;
        }
      }
      std::vector<std::vector<int>> blocks;
      for (const auto& [mask, ms] : groups) {
        if (&ms != best) blocks.push_back(ms);
      }
      std::sort(blocks.begin(), blocks.end(),
                [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.front() < b.front();
                });
      std::vector<int> absorber = *best;
      absorber.insert(absorber.end(), unsampled.begin(), unsampled.end());
      blocks.push_back(std::move(absorber));
      std::vector<int> all_members = s.members;
      apply_reset_split(sid, blocks);
      // Window regrets accumulated inside the old grouping no longer
      // describe an existing structure.
      for (int m : all_members) drop_from_bound_tracking(m);
    }
  }

  // Splits any tracked original whose window-accumulated regret outgrows
  // the admissible threshold into a singleton. Every tracked original is
  // examined exactly once per iteration, in ascending id order, against its
  // set as of that moment.
  void bound_update() {
    std::vector<int> snapshot = sampled_b_;
    for (int m : snapshot) {
      if (!std::binary_search(sampled_b_.begin(), sampled_b_.end(), m)) {
        continue;  // removed by an earlier split this iteration
      }
      const AbstractSet& s = x_.set(x_.phi(m));
      if (!s.abstracted()) {
        drop_from_bound_tracking(m);
        continue;
      }
      const std::vector<double>& r = r_b_.at(m);
      double mx = *std::max_element(r.begin(), r.end());
      double window = static_cast<double>(t_ - t_last_);
      if (mx / window <= bound_threshold(m)) continue;
      std::vector<int> rest;
      for (int o : s.members) {
        if (o != m) rest.push_back(o);
      }
      apply_reset_split(s.id, {{m}, rest});
      drop_from_bound_tracking(m);
    }
  }

  double bound_threshold(int original) const {
    const InfoSet& s = g_.infosets[original];
    return g_.infoset_delta[original] *
           std::sqrt(static_cast<double>(s.num_actions)) /
           (100.0 * std::sqrt(static_cast<double>(t_)));
  }

  // --- averages and measurement ------------------------------------------

  // Average strategy on the current abstraction: normalized accumulation,
  // uniform where nothing has been accumulated (pre-delay or post-split).
  Behavior average_rows() const {
    Behavior b(x_.num_slots(), 0.0);
    for (const AbstractSet& s : x_.sets()) {
      if (!s.alive) continue;
      double sum = 0.0;
      for (int a = 0; a < s.num_actions; ++a) sum += num_[s.first_action + a];
      for (int a = 0; a < s.num_actions; ++a) {
        b[s.first_action + a] =
            sum > 0.0 ? num_[s.first_action + a] / sum : 1.0 / s.num_actions;
      }
    }
    return b;
  }

  double measure() {
    Behavior lifted = x_.lift(average_rows());
    BestResponse b1 = best_response(g_, kPlayer1, lifted, opt_.br);
    BestResponse b2 = best_response(g_, kPlayer2, lifted, opt_.br);
    note_br(b1);
    note_br(b2);
    double sum = b1.value + b2.value;
    if (opt_.track_regret_bound && t_ > 1) {
      RegretCheckpoint cp;
      cp.t = t_ - 1;
      double T = static_cast<double>(cp.t);
      BestResponse u1 = best_response(g_, kPlayer1, unif_avg_, opt_.br);
      BestResponse u2 = best_response(g_, kPlayer2, unif_avg_, opt_.br);
      cp.regret1 = T * u1.value - played_value_sum_[0];
      cp.regret2 = T * u2.value - played_value_sum_[1];
      double range = g_.utility_range;
      double amax = std::sqrt(static_cast<double>(g_.max_actions));
      cp.bound1 = range * g_.infoset_count_by_player[0] * amax * std::sqrt(T);
      cp.bound2 = range * g_.infoset_count_by_player[1] * amax * std::sqrt(T);
      regret_checkpoints_.push_back(cp);
    }
    return sum;
  }

  // Uniform-over-time running average of the played profile (for the
  // external-regret report) plus the running sum of played values.
  void note_played_profile() {
    Behavior current = x_.lift(current_rows());
    double n = static_cast<double>(t_);
    for (Player p : {kPlayer1, kPlayer2}) {
      Behavior merged = t_ == 1 ? current
                                : average_combine(g_, p, unif_avg_, current,
                                                  (n - 1.0) / n, 1.0 / n);
      copy_player_rows(g_, p, merged, unif_avg_);
    }
    double u1 = expected_utility(g_, current);
    played_value_sum_[0] += u1;
    played_value_sum_[1] += -u1;
  }

  // Current (not averaged) regret-matching+ policy on the abstraction.
  Behavior current_rows() const {
    Behavior b(x_.num_slots(), 0.0);
    for (const AbstractSet& s : x_.sets()) {
      if (!s.alive) continue;
      double sum = 0.0;
      for (int a = 0; a < s.num_actions; ++a) {
        sum += std::max(q_[s.first_action + a], 0.0);
      }
      for (int a = 0; a < s.num_actions; ++a) {
        b[s.first_action + a] =
            sum > 0.0 ? std::max(q_[s.first_action + a], 0.0) / sum
                      : 1.0 / s.num_actions;
      }
    }
    return b;
  }

  // --- plumbing -----------------------------------------------------------

  bool s_dead(int sid) const { return !x_.set(sid).alive; }

  // Split with the regret/average restart shared by both refinements: every
  // resulting set starts from zero regrets and a discarded average.
  void apply_reset_split(int sid, const std::vector<std::vector<int>>& blocks) {
    std::vector<int> fresh = x_.split(sid, blocks);
    q_.resize(x_.num_slots(), 0.0);
    num_.resize(x_.num_slots(), 0.0);
    epoch_.resize(x_.sets().size(), 0);
    for (int id : fresh) {
      const AbstractSet& ns = x_.set(id);
      for (int a = 0; a < ns.num_actions; ++a) {
        q_[ns.first_action + a] = 0.0;
        num_[ns.first_action + a] = 0.0;
      }
      epoch_[id] = t_;  // averaging restarts after the split
    }
  }

  void drop_from_bound_tracking(int original) {
    r_b_.erase(original);
    auto it = std::lower_bound(sampled_b_.begin(), sampled_b_.end(), original);
    if (it != sampled_b_.end() && *it == original) sampled_b_.erase(it);
  }

  void note_br(const BestResponse& br) {
    cache_peak_ = std::max(cache_peak_,
                           static_cast<long long>(br.cache_peak_entries));
    br_peak_ =
        std::max(br_peak_, static_cast<long long>(br.prescription_peak));
  }

  long long aux_words() const {
    long long words = 0;
    for (const auto& [m, r] : r_h_) words += static_cast<long long>(r.size());
    for (const auto& [m, r] : r_b_) words += static_cast<long long>(r.size());
    return words;
  }

  void emit(long long iteration, double sum) {
    TraceRow r;
    r.iteration = iteration;
    r.exploitability_sum = sum;
    r.abstract_infoset_count = x_.alive_set_count();
    r.mapping_words = x_.mapping_word_count();
    r.strategy_words = 0;
    r.regret_words = 2LL * x_.alive_slot_count();
    r.aux_words = aux_words();
    r.cache_peak_words = cache_peak_;
    r.br_strategy_peak_words = br_peak_;
    r.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start_)
                         .count();
    trace_.rows.push_back(r);
  }

  const Game& g_;
  CfrOptions opt_;
  Abstraction x_;
  std::vector<double> q_;    // regret-matching+ accumulators, slot-indexed
  std::vector<double> num_;  // average-strategy numerators, slot-indexed
  std::vector<long long> epoch_;  // per-set averaging restart iteration
  Rng rng_;
  long long t_ = 1, t_next_ = 1, t_last_ = 0;
  int j_ = 0;
  std::vector<int> sampled_h_, sampled_b_;        // sorted original ids
  std::map<int, std::vector<double>> r_h_, r_b_;  // per-original regrets
  std::vector<double> w_h_;  // per-iteration opponent-and-chance weight
                             // accumulated by each tracked original
  struct Scratch {
    std::vector<double> policy, values;
  };
  std::vector<Scratch> scratch_;  // one frame per tree level
  Behavior avg_rows_;             // scratch: settled policy being averaged
  std::vector<double> reach_avg_; // scratch: per-set own-reach
  long long cache_peak_ = 0, br_peak_ = 0;
  Behavior unif_avg_;  // uniform-time average profile (regret tracking)
  double played_value_sum_[2] = {0.0, 0.0};
  std::vector<RegretCheckpoint> regret_checkpoints_;
  std::chrono::steady_clock::time_point start_;
  RunTrace trace_;
};

inline CfrResult cfr_ira_solve(const Game& g, const CfrOptions& opt = {}) {
  CfrSolver solver(g, opt);
  return solver.run();
}

inline CfrResult cfr_plus_solve(const Game& g, CfrOptions opt = {}) {
  opt.abstracted = false;
  opt.k_b = 0;
  opt.k_h = 0;
  CfrSolver solver(g, opt);
  return solver.run();
}

}  // namespace efg

#endif  // EFG_CFR_HPP
