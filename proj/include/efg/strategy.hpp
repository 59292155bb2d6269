#ifndef EFG_STRATEGY_HPP
#define EFG_STRATEGY_HPP

#include <cmath>
#include <vector>

#include "efg/game.hpp"

namespace efg {

// A behavioral strategy profile: one probability per global action id.
// Rows belonging to one player's infosets each sum to 1. A single vector
// holds both players' strategies; helpers below slice by owner.
using Behavior = std::vector<double>;

// Uniform behavior over every infoset of both players.
inline Behavior uniform_behavior(const Game& g) {
  Behavior b(g.num_actions, 0.0);
  for (const InfoSet& s : g.infosets) {
    double p = 1.0 / s.num_actions;
    for (int a = 0; a < s.num_actions; ++a) b[s.first_action + a] = p;
  }
  return b;
}

// Pure behavior playing the lowest-id action everywhere.
inline Behavior lowest_action_behavior(const Game& g) {
  Behavior b(g.num_actions, 0.0);
  for (const InfoSet& s : g.infosets) b[s.first_action] = 1.0;
  return b;
}

// Copies `src` rows owned by `p` into `dst` (other rows untouched).
inline void copy_player_rows(const Game& g, Player p, const Behavior& src,
                             Behavior& dst) {
  for (const InfoSet& s : g.infosets) {
    if (s.owner != p) continue;
    for (int a = 0; a < s.num_actions; ++a) {
      dst[s.first_action + a] = src[s.first_action + a];
    }
  }
}

// Expected player-1 utility of the profile `b` (both players' rows).
inline double expected_utility(const Game& g, const Behavior& b) {
  // Children have larger ids than parents, so a reverse sweep folds values up.
  std::vector<double> val(g.nodes.size(), 0.0);
  for (int v = g.num_nodes() - 1; v >= 0; --v) {
    const Node& n = g.nodes[v];
    if (n.is_terminal()) {
      val[v] = n.utility;
    } else if (n.is_chance()) {
      double x = 0.0;
      for (int c = n.first_child; c < n.first_child + n.num_children; ++c) {
        x += g.nodes[c].chance_prob * val[c];
      }
      val[v] = x;
    } else {
      const InfoSet& s = g.infosets[n.infoset];
      double x = 0.0;
      for (int a = 0; a < n.num_children; ++a) {
        x += b[s.first_action + a] * val[n.first_child + a];
      }
      val[v] = x;
    }
  }
  return val[0];
}

// Probability of reaching each node when both players follow `b`
// (chance included).
inline std::vector<double> node_reach(const Game& g, const Behavior& b) {
  std::vector<double> r(g.nodes.size(), 0.0);
  r[0] = 1.0;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const Node& n = g.nodes[v];
    if (n.is_terminal()) continue;
    for (int a = 0; a < n.num_children; ++a) {
      int c = n.first_child + a;
      double p = n.is_chance() ? g.nodes[c].chance_prob
                               : b[g.infosets[n.infoset].first_action + a];
      r[c] = r[v] * p;
    }
  }
  return r;
}

// Realization weight each player's own actions contribute at each node:
// product over the path of the owner's action probabilities only.
inline std::vector<double> own_reach(const Game& g, Player p,
                                     const Behavior& b) {
  std::vector<double> r(g.nodes.size(), 0.0);
  r[0] = 1.0;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const Node& n = g.nodes[v];
    if (n.is_terminal()) continue;
    for (int a = 0; a < n.num_children; ++a) {
      int c = n.first_child + a;
      double f =
          n.owner == p ? b[g.infosets[n.infoset].first_action + a] : 1.0;
      r[c] = r[v] * f;
    }
  }
  return r;
}

// Reach weight excluding `p`: chance times the opponent's actions.
inline std::vector<double> external_reach(const Game& g, Player p,
                                          const Behavior& b) {
  std::vector<double> r(g.nodes.size(), 0.0);
  r[0] = 1.0;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const Node& n = g.nodes[v];
    if (n.is_terminal()) continue;
    for (int a = 0; a < n.num_children; ++a) {
      int c = n.first_child + a;
      double f = 1.0;
      if (n.is_chance()) {
        f = g.nodes[c].chance_prob;
      } else if (n.owner != p) {
        f = b[g.infosets[n.infoset].first_action + a];
      }
      r[c] = r[v] * f;
    }
  }
  return r;
}

// Probability that the owner plays every own action leading into set `s`
// under `b`. In a perfect-recall game this is the same for every member.
inline double infoset_own_reach(const InfoSet& s, const Behavior& b) {
  double r = 1.0;
  for (int a : s.own_seq) r *= b[a];
  return r;
}

// Convex combination of two strategies of `p` in the realization-plan sense:
// per set, b''(I) = b(I) + [λ2·π^{b'}(I) / (λ1·π^{b}(I) + λ2·π^{b'}(I))] ·
// (b'(I) − b(I)); a set unreachable under both keeps b's distribution. Rows
// of the other player are copied from `b`.
inline Behavior average_combine(const Game& g, Player p, const Behavior& b,
                                const Behavior& b_prime, double lambda1,
                                double lambda2) {
  Behavior out = b;
  for (const InfoSet& s : g.infosets) {
    if (s.owner != p) continue;
    double denom = lambda1 * infoset_own_reach(s, b) +
                   lambda2 * infoset_own_reach(s, b_prime);
    if (denom <= 0.0) continue;
    double coef = lambda2 * infoset_own_reach(s, b_prime) / denom;
    for (int a = s.first_action; a < s.first_action + s.num_actions; ++a) {
      out[a] = b[a] + coef * (b_prime[a] - b[a]);
    }
  }
  return out;
}

// Own-reach probability of `p` at every terminal node (0 for non-terminals).
inline std::vector<double> realization_plan(const Game& g, Player p,
                                            const Behavior& b) {
  std::vector<double> r = own_reach(g, p, b);
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (!g.nodes[v].is_terminal()) r[v] = 0.0;
  }
  return r;
}

}  // namespace efg

#endif  // EFG_STRATEGY_HPP
