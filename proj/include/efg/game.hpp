#ifndef EFG_GAME_HPP
#define EFG_GAME_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace efg {

using Player = int;
constexpr Player kPlayer1 = 0;
constexpr Player kPlayer2 = 1;
constexpr Player kChance = -1;
constexpr Player kTerminalOwner = -2;

inline Player opponent(Player p) { return 1 - p; }

// One node of the game tree. Children occupy the contiguous id range
// [first_child, first_child + num_children); ids are assigned in a
// deterministic depth-first order by GameBuilder.
struct Node {
  int parent = -1;
  int first_child = 0;
  int num_children = 0;
  Player owner = kTerminalOwner;
  int infoset = -1;         // decision nodes only
  int action_index = -1;    // index of the edge from the parent
  double chance_prob = 1.0; // edge probability when the parent is a chance node
  double utility = 0.0;     // player 1 utility at terminals (zero-sum)

  bool is_terminal() const { return owner == kTerminalOwner; }
  bool is_chance() const { return owner == kChance; }
  bool is_decision() const { return owner >= 0; }
};

// Information set. Actions get the global ids
// [first_action, first_action + num_actions); an action id therefore
// identifies its information set uniquely.
struct InfoSet {
  int id = -1;
  Player owner = kPlayer1;
  int num_actions = 0;
  int first_action = 0;
  std::vector<int> members;  // node ids, ascending
  // The owner's action ids on the path from the root, identical for every
  // member in a perfect-recall game (taken from the first member otherwise).
  std::vector<int> own_seq;
};

struct Game {
  std::string name;
  std::vector<Node> nodes;      // nodes[0] is the root
  std::vector<InfoSet> infosets;
  int num_actions = 0;
  std::vector<int> action_set;  // action id -> infoset id

  // Derived metrics.
  double max_abs_utility = 0.0;          // u_max
  double utility_range = 0.0;            // max - min over all terminals
  int max_actions = 0;                   // A_max
  std::vector<double> infoset_delta;     // utility range over Z_I, per infoset
  std::vector<int> infoset_count_by_player{0, 0};

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_infosets() const { return static_cast<int>(infosets.size()); }
  int child(int node, int a) const { return nodes[node].first_child + a; }
  const InfoSet& set_of_action(int action) const {
    return infosets[action_set[action]];
  }

  // Product of chance probabilities on the path from the root to `node`.
  double chance_reach(int node) const {
    double c = 1.0;
    for (int v = node; v != 0; v = nodes[v].parent) {
      if (nodes[nodes[v].parent].is_chance()) c *= nodes[v].chance_prob;
    }
    return c;
  }

  // Probability that `player` plays the actions leading to `node` under
  // `probs`, a vector indexed by global action id.
  double player_reach(int node, Player player,
                      const std::vector<double>& probs) const {
    double r = 1.0;
    for (int v = node; v != 0; v = nodes[v].parent) {
      const Node& par = nodes[nodes[v].parent];
      if (par.owner == player) {
        r *= probs[infosets[par.infoset].first_action + nodes[v].action_index];
      }
    }
    return r;
  }

  void compute_metrics();
};

inline void Game::compute_metrics() {
  max_abs_utility = 0.0;
  max_actions = 0;
  infoset_count_by_player = {0, 0};
  for (const Node& n : nodes) {
    if (n.is_terminal()) {
      max_abs_utility = std::max(max_abs_utility, std::abs(n.utility));
    }
  }
  for (const InfoSet& s : infosets) {
    max_actions = std::max(max_actions, s.num_actions);
    ++infoset_count_by_player[s.owner];
  }
  // Utility range over the terminals below each infoset, computed from
  // per-node subtree ranges (children have larger ids than their parent).
  std::vector<double> lo(nodes.size(), 1e300), hi(nodes.size(), -1e300);
  for (int v = num_nodes() - 1; v >= 0; --v) {
    const Node& n = nodes[v];
    if (n.is_terminal()) {
      lo[v] = hi[v] = n.utility;
    } else {
      for (int c = n.first_child; c < n.first_child + n.num_children; ++c) {
        lo[v] = std::min(lo[v], lo[c]);
        hi[v] = std::max(hi[v], hi[c]);
      }
    }
  }
  utility_range = nodes.empty() ? 0.0 : hi[0] - lo[0];
  infoset_delta.assign(infosets.size(), 0.0);
  for (const InfoSet& s : infosets) {
    double l = 1e300, h = -1e300;
    for (int m : s.members) {
      l = std::min(l, lo[m]);
      h = std::max(h, hi[m]);
    }
    infoset_delta[s.id] = h - l;
  }
}

struct PerfectRecallReport {
  bool ok = true;
  std::vector<int> violators;  // infoset ids whose members disagree on own_seq
};

// A game has perfect recall iff, for each information set, every member sees
// the same sequence of the owner's own actions from the root.
inline PerfectRecallReport check_perfect_recall(const Game& g) {
  PerfectRecallReport rep;
  for (const InfoSet& s : g.infosets) {
    std::vector<int> ref;
    bool first = true, bad = false;
    for (int m : s.members) {
      std::vector<int> seq;
      for (int v = m; v != 0; v = g.nodes[v].parent) {
        const Node& par = g.nodes[g.nodes[v].parent];
        if (par.owner == s.owner) {
          seq.push_back(g.infosets[par.infoset].first_action +
                        g.nodes[v].action_index);
        }
      }
      std::reverse(seq.begin(), seq.end());
      if (first) {
        ref = std::move(seq);
        first = false;
      } else if (seq != ref) {
        bad = true;
        break;
      }
    }
    if (bad) {
      rep.ok = false;
      rep.violators.push_back(s.id);
    }
  }
  return rep;
}

// Builds a Game from a temporary pointer tree. Decision nodes owning the same
// (player, key) pair share an information set; keys are domain-chosen strings
// encoding exactly what the player has observed.
class GameBuilder {
 public:
  struct Temp {
    Player owner = kTerminalOwner;
    std::string key;
    double utility = 0.0;
    double chance_prob = 1.0;  // edge probability from the parent
    std::vector<std::unique_ptr<Temp>> children;
  };

  static std::unique_ptr<Temp> terminal(double u1) {
    auto t = std::make_unique<Temp>();
    t->owner = kTerminalOwner;
    t->utility = u1;
    return t;
  }

  static std::unique_ptr<Temp> chance(
      std::vector<std::pair<double, std::unique_ptr<Temp>>> outcomes) {
    auto t = std::make_unique<Temp>();
    t->owner = kChance;
    for (auto& [p, child] : outcomes) {
      child->chance_prob = p;
      t->children.push_back(std::move(child));
    }
    return t;
  }

  static std::unique_ptr<Temp> decision(
      Player owner, std::string key,
      std::vector<std::unique_ptr<Temp>> children) {
    auto t = std::make_unique<Temp>();
    t->owner = owner;
    t->key = std::move(key);
    t->children = std::move(children);
    return t;
  }

  // Assigns node ids depth-first with contiguous sibling blocks, groups
  // decision nodes into information sets by (owner, key), allocates global
  // action ids, and validates chance probabilities.
  static Game finalize(std::string name, std::unique_ptr<Temp> root);
};

inline Game GameBuilder::finalize(std::string name,
                                  std::unique_ptr<Temp> root) {
  Game g;
  g.name = std::move(name);
  struct Frame {
    Temp* t;
    int id;
  };
  g.nodes.emplace_back();  // root placeholder
  std::vector<Frame> stack{{root.get(), 0}};
  std::map<std::pair<Player, std::string>, int> set_ids;
  std::vector<std::vector<int>> set_members;
  std::vector<Player> set_owner;
  std::vector<int> set_actions;
  std::vector<std::string> set_key;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const int nkids = static_cast<int>(f.t->children.size());
    const int base = static_cast<int>(g.nodes.size());
    {
      // Scoped: growing g.nodes below would invalidate this reference.
      Node& n = g.nodes[f.id];
      n.owner = f.t->owner;
      n.utility = f.t->utility;
      n.chance_prob = f.t->chance_prob;
      n.num_children = nkids;
      n.first_child = base;
    }
    if (f.t->owner == kTerminalOwner && nkids != 0) {
      throw std::logic_error("terminal with children");
    }
    if (f.t->owner >= 0) {
      auto key = std::make_pair(f.t->owner, f.t->key);
      auto it = set_ids.find(key);
      int sid;
      if (it == set_ids.end()) {
        sid = static_cast<int>(set_members.size());
        set_ids.emplace(key, sid);
        set_members.emplace_back();
        set_owner.push_back(f.t->owner);
        set_actions.push_back(nkids);
        set_key.push_back(f.t->key);
      } else {
        sid = it->second;
        if (set_actions[sid] != nkids) {
          throw std::logic_error("information set '" + f.t->key +
                                 "' has members with differing action counts");
        }
      }
      set_members[sid].push_back(f.id);
      g.nodes[f.id].infoset = sid;
    }
    if (f.t->owner == kChance) {
      double sum = 0.0;
      for (auto& c : f.t->children) sum += c->chance_prob;
      if (std::abs(sum - 1.0) > 1e-9) {
        throw std::logic_error("chance probabilities do not sum to 1");
      }
    }
    // Reserve contiguous ids for the children, then push them in reverse so
    // the first child's subtree is numbered first.
    for (int k = 0; k < nkids; ++k) {
      g.nodes.emplace_back();
      g.nodes.back().parent = f.id;
      g.nodes.back().action_index = k;
    }
    for (int k = nkids - 1; k >= 0; --k) {
      stack.push_back({f.t->children[k].get(), base + k});
    }
  }
  // Information sets ordered by first appearance in node order.
  g.infosets.resize(set_members.size());
  int action_base = 0;
  for (std::size_t sid = 0; sid < set_members.size(); ++sid) {
    InfoSet& s = g.infosets[sid];
    s.id = static_cast<int>(sid);
    s.owner = set_owner[sid];
    s.num_actions = set_actions[sid];
    s.first_action = action_base;
    s.members = set_members[sid];
    std::sort(s.members.begin(), s.members.end());
    action_base += s.num_actions;
  }
  g.num_actions = action_base;
  g.action_set.resize(action_base);
  for (const InfoSet& s : g.infosets) {
    for (int a = 0; a < s.num_actions; ++a) g.action_set[s.first_action + a] = s.id;
  }
  // Cache each set's own-action sequence from its first member.
  for (InfoSet& s : g.infosets) {
    std::vector<int> seq;
    for (int v = s.members.front(); v != 0; v = g.nodes[v].parent) {
      const Node& par = g.nodes[g.nodes[v].parent];
      if (par.owner == s.owner) {
        seq.push_back(g.infosets[par.infoset].first_action +
                      g.nodes[v].action_index);
      }
    }
    std::reverse(seq.begin(), seq.end());
    s.own_seq = std::move(seq);
  }
  g.compute_metrics();
  return g;
}

}  // namespace efg

#endif  // EFG_GAME_HPP
