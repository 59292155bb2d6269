#ifndef EFG_BEST_RESPONSE_HPP
#define EFG_BEST_RESPONSE_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "efg/game.hpp"
#include "efg/strategy.hpp"

namespace efg {

// A pure best response, stored as one action index per information set of
// the responder (-1 where none was kept). Sets pruned as unreachable under
// the response itself hold no prescription.
struct BestResponse {
  Player responder = kPlayer1;
  std::vector<int> prescription;  // infoset id -> action index or -1
  double value = 0.0;             // responder's expected utility
  // Peak bookkeeping for memory reporting: distinct node values memoized,
  // and prescriptions stored before the reachability cleanup.
  int cache_peak_entries = 0;
  int prescription_peak = 0;

  bool prescribes(int infoset) const { return prescription[infoset] >= 0; }
};

struct BestResponseOptions {
  // Skips evaluating actions whose optimistic bound cannot strictly beat the
  // best fully-evaluated action so far. Zero-reach subtrees are always
  // skipped regardless of this flag.
  bool bounds_pruning = true;
};

namespace detail {

class BestResponseSolver {
 public:
  BestResponseSolver(const Game& g, Player responder, const Behavior& opp,
                     const BestResponseOptions& opt)
      : g_(g),
        me_(responder),
        opt_(opt),
        w_(external_reach(g, responder, opp)),
        val_(g.nodes.size(), 0.0),
        memo_(g.nodes.size(), 0),
        presc_(g.infosets.size(), -1) {}

  BestResponse run() {
    if (opt_.bounds_pruning) compute_upper_bounds();
    // Decide the responder's sets deepest-own-sequence first: every set met
    // while evaluating a member's subtree has a strictly longer own
    // sequence, so its prescription already exists.
    std::vector<int> order;
    for (const InfoSet& s : g_.infosets) {
      if (s.owner == me_) order.push_back(s.id);
    }
    std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
      return g_.infosets[a].own_seq.size() > g_.infosets[b].own_seq.size();
    });
    for (int sid : order) decide(g_.infosets[sid]);
    BestResponse out;
    out.responder = me_;
    out.value = eval(0);
    out.cache_peak_entries = cache_entries_;
    out.prescription_peak = stored_;
    cleanup();
    out.prescription = std::move(presc_);
    return out;
  }

 private:
  double leaf_value(const Node& n) const {
    return me_ == kPlayer1 ? n.utility : -n.utility;
  }

  // hi_[v] bounds the realized value of v's subtree from above for any
  // choice of prescriptions: leaves are exact, own nodes take the best
  // child, external nodes sum (their branch weights are folded into w_).
  void compute_upper_bounds() {
    hi_.assign(g_.nodes.size(), 0.0);
    for (int v = g_.num_nodes() - 1; v >= 0; --v) {
      const Node& n = g_.nodes[v];
      if (n.is_terminal()) {
        hi_[v] = w_[v] * leaf_value(n);
      } else if (n.owner == me_) {
        double m = -std::numeric_limits<double>::infinity();
        for (int c = n.first_child; c < n.first_child + n.num_children; ++c) {
          m = std::max(m, hi_[c]);
        }
        hi_[v] = m;
      } else {
        double s = 0.0;
        for (int c = n.first_child; c < n.first_child + n.num_children; ++c) {
          s += hi_[c];
        }
        hi_[v] = s;
      }
    }
  }

  double eval(int v) {
    if (memo_[v]) return val_[v];
    const Node& n = g_.nodes[v];
    double r;
    if (n.is_terminal()) {
      r = w_[v] * leaf_value(n);
    } else if (n.owner == me_) {
      r = eval(g_.child(v, presc_[n.infoset]));
    } else {
      r = 0.0;
      for (int c = n.first_child; c < n.first_child + n.num_children; ++c) {
        if (w_[c] > 0.0) r += eval(c);
      }
    }
    val_[v] = r;
    memo_[v] = 1;
    ++cache_entries_;
    return r;
  }

  void decide(const InfoSet& s) {
    live_.clear();
    for (int m : s.members) {
      if (w_[m] > 0.0) live_.push_back(m);
    }
    if (live_.empty()) return;
    double best = -std::numeric_limits<double>::infinity();
    int best_a = -1;
    for (int a = 0; a < s.num_actions; ++a) {
      double sum = 0.0;
      bool abandoned = false;
      if (opt_.bounds_pruning && best_a >= 0) {
        // Optimistic suffix bounds, tightened member by member. An action
        // whose bound falls strictly below the incumbent cannot win (a tie
        // would also lose to the lower action index).
        double suffix = 0.0;
        for (int m : live_) suffix += hi_[g_.child(m, a)];
        if (suffix < best) continue;
        for (int m : live_) {
          int c = g_.child(m, a);
          suffix -= hi_[c];
          sum += eval(c);
          if (sum + suffix < best) {
            abandoned = true;
            break;
          }
        }
      } else {
        for (int m : live_) sum += eval(g_.child(m, a));
      }
      if (!abandoned && sum > best) {
        best = sum;
        best_a = a;
      }
    }
    presc_[s.id] = best_a;
    ++stored_;
  }

  // Drops prescriptions of sets no member of which is reachable when the
  // responder follows the response (walk everything elsewhere).
  void cleanup() {
    std::vector<char> seen(g_.nodes.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::vector<char> set_hit(g_.infosets.size(), 0);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      const Node& n = g_.nodes[v];
      if (n.is_terminal()) continue;
      if (n.owner == me_) set_hit[n.infoset] = 1;
      int only = -1;
      if (n.owner == me_ && presc_[n.infoset] >= 0) {
        only = g_.child(v, presc_[n.infoset]);
      }
      for (int c = n.first_child; c < n.first_child + n.num_children; ++c) {
        if (only >= 0 && c != only) continue;
        if (!seen[c]) {
          seen[c] = 1;
          stack.push_back(c);
        }
      }
    }
    for (const InfoSet& s : g_.infosets) {
      if (s.owner == me_ && !set_hit[s.id]) presc_[s.id] = -1;
    }
  }

  const Game& g_;
  Player me_;
  BestResponseOptions opt_;
  std::vector<double> w_;    // chance-and-opponent reach per node
  std::vector<double> hi_;   // optimistic subtree values (pruning only)
  std::vector<double> val_;  // memoized node values
  std::vector<char> memo_;
  std::vector<int> presc_;
  std::vector<int> live_;
  int cache_entries_ = 0;
  int stored_ = 0;
};

}  // namespace detail

inline BestResponse best_response(const Game& g, Player responder,
                                  const Behavior& opponent_strategy,
                                  const BestResponseOptions& opt = {}) {
  if (static_cast<int>(opponent_strategy.size()) != g.num_actions) {
    throw std::invalid_argument("strategy has wrong number of action rows");
  }
  return detail::BestResponseSolver(g, responder, opponent_strategy, opt)
      .run();
}

struct MaxSweepResult {
  double value = 0.0;
  int cache_entries = 0;
};

// Maximum of Σ_z leaf_values[z] over the maximizer's pure strategies. All
// other influences (chance, the other player's strategy, any reach terms)
// must already be folded into leaf_values: non-maximizer nodes sum their
// children, the maximizer's sets pick one action by argmax of member sums
// (lowest index on ties). Subtrees whose leaf values are identically zero
// are skipped.
inline MaxSweepResult max_sweep(const Game& g, Player maximizer,
                                const std::vector<double>& leaf_values) {
  std::vector<double> mass(g.nodes.size(), 0.0);
  for (int v = g.num_nodes() - 1; v >= 0; --v) {
    const Node& n = g.nodes[v];
    if (n.is_terminal()) {
      mass[v] = std::abs(leaf_values[v]);
    } else {
      for (int c = n.first_child; c < n.first_child + n.num_children; ++c) {
        mass[v] += mass[c];
      }
    }
  }
  std::vector<int> presc(g.infosets.size(), -1);
  std::vector<double> val(g.nodes.size(), 0.0);
  std::vector<char> memo(g.nodes.size(), 0);
  int entries = 0;
  // Iterative evaluation; children of a node always have larger ids.
  std::vector<int> stack;
  auto eval = [&](int root) -> double {
    if (memo[root]) return val[root];
    stack.push_back(root);
    while (!stack.empty()) {
      int v = stack.back();
      const Node& n = g.nodes[v];
      if (memo[v]) {
        stack.pop_back();
        continue;
      }
      bool ready = true;
      double sum = 0.0;
      if (n.is_terminal()) {
        sum = leaf_values[v];
      } else if (n.owner == maximizer) {
        int c = g.child(v, presc[n.infoset]);
        if (mass[c] == 0.0) {
          sum = 0.0;
        } else if (!memo[c]) {
          stack.push_back(c);
          ready = false;
        } else {
          sum = val[c];
        }
      } else {
        for (int c = n.first_child; c < n.first_child + n.num_children;
             ++c) {
          if (mass[c] == 0.0) continue;
          if (!memo[c]) {
            stack.push_back(c);
            ready = false;
          } else {
            sum += val[c];
          }
        }
      }
      if (ready) {
        val[v] = sum;
        memo[v] = 1;
        ++entries;
        stack.pop_back();
      }
    }
    return val[root];
  };
  std::vector<int> order;
  for (const InfoSet& s : g.infosets) {
    if (s.owner == maximizer) order.push_back(s.id);
  }
  std::stable_sort(order.begin(), order.end(), [&g](int a, int b) {
    return g.infosets[a].own_seq.size() > g.infosets[b].own_seq.size();
  });
  for (int sid : order) {
    const InfoSet& s = g.infosets[sid];
    double best = -std::numeric_limits<double>::infinity();
    int best_a = -1;
    bool any = false;
    for (int m : s.members) any = any || mass[m] > 0.0;
    if (!any) continue;
    for (int a = 0; a < s.num_actions; ++a) {
      double sum = 0.0;
      for (int m : s.members) {
        int c = g.child(m, a);
        if (mass[c] > 0.0) sum += eval(c);
      }
      if (sum > best) {
        best = sum;
        best_a = a;
      }
    }
    presc[sid] = best_a;
  }
  MaxSweepResult out;
  out.value = mass[0] > 0.0 ? eval(0) : 0.0;
  out.cache_entries = entries;
  return out;
}

// Copy of `b` with the responder's prescribed rows replaced by the pure
// response (unprescribed sets keep their rows from `b`).
inline Behavior apply_response(const Game& g, const BestResponse& br,
                               const Behavior& b) {
  Behavior out = b;
  for (const InfoSet& s : g.infosets) {
    if (s.owner != br.responder || !br.prescribes(s.id)) continue;
    for (int a = 0; a < s.num_actions; ++a) {
      out[s.first_action + a] = a == br.prescription[s.id] ? 1.0 : 0.0;
    }
  }
  return out;
}

struct ExploitabilityReport {
  double br1_value = 0.0;  // u1(BR1, b2)
  double br2_value = 0.0;  // u2(b1, BR2)
  double e1 = 0.0;         // midpoint-based exploitability of b1
  double e2 = 0.0;         // midpoint-based exploitability of b2
  double sum = 0.0;        // u1(BR1, b2) - u1(b1, BR2), always >= 0
};

// Exploitability of a strategy profile on the original game. The sum is
// exact; the per-player split uses the midpoint of the two one-sided values
// as the game-value estimate.
inline ExploitabilityReport exploitability(const Game& g, const Behavior& b,
                                           const BestResponseOptions& opt = {}) {
  ExploitabilityReport rep;
  rep.br1_value = best_response(g, kPlayer1, b, opt).value;
  rep.br2_value = best_response(g, kPlayer2, b, opt).value;
  rep.sum = rep.br1_value + rep.br2_value;
  double mid = (rep.br1_value - rep.br2_value) / 2.0;  // u1 scale
  rep.e1 = rep.br2_value + mid;  // what player 2's response gains against b1
  rep.e2 = rep.br1_value - mid;  // what player 1's response gains against b2
  return rep;
}

}  // namespace efg

#endif  // EFG_BEST_RESPONSE_HPP
