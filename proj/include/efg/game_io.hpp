#ifndef EFG_GAME_IO_HPP
#define EFG_GAME_IO_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "efg/game.hpp"

namespace efg {

// JSON schema (documented in the README): {"name": str, "nodes": [[parent,
// owner, infoset, action_index, num_children, chance_prob, utility], ...]}
// with nodes in their id order. Owners: 0/1 players, -1 chance, -2 terminal;
// infoset is -1 except at decision nodes; chance_prob is the probability of
// the edge from the node's (chance) parent. Everything else — child ranges,
// information-set membership, action numbering, metrics — is reconstructed
// on load, so the format cannot encode an inconsistent derived structure.
inline nlohmann::json game_to_json(const Game& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& n : g.nodes) {
    nodes.push_back({n.parent, n.owner, n.infoset, n.action_index,
                     n.num_children, n.chance_prob, n.utility});
  }
  return {{"name", g.name}, {"nodes", nodes}};
}

inline Game game_from_json(const nlohmann::json& j) {
  Game g;
  g.name = j.at("name").get<std::string>();
  const nlohmann::json& nodes = j.at("nodes");
  if (nodes.empty()) throw std::invalid_argument("game has no nodes");
  int nn = static_cast<int>(nodes.size());
  g.nodes.resize(nn);
  int num_sets = 0;
  for (int v = 0; v < nn; ++v) {
    const nlohmann::json& e = nodes.at(v);
    Node& n = g.nodes[v];
    n.parent = e.at(0).get<int>();
    n.owner = e.at(1).get<int>();
    n.infoset = e.at(2).get<int>();
    n.action_index = e.at(3).get<int>();
    n.num_children = e.at(4).get<int>();
    n.chance_prob = e.at(5).get<double>();
    n.utility = e.at(6).get<double>();
    n.first_child = 0;
    if (v == 0) {
      if (n.parent != -1) throw std::invalid_argument("root must have parent -1");
    } else if (n.parent < 0 || n.parent >= v) {
      throw std::invalid_argument("node parents must precede their children");
    }
    if (n.is_decision()) {
      if (n.infoset < 0) throw std::invalid_argument("decision without infoset");
      num_sets = std::max(num_sets, n.infoset + 1);
    } else if (n.infoset != -1) {
      throw std::invalid_argument("infoset on a non-decision node");
    }
    if (n.is_terminal() != (n.num_children == 0)) {
      throw std::invalid_argument("child count disagrees with terminal owner");
    }
  }
  // Siblings are stored as one contiguous block in action order; recover
  // first_child from the parent links and check that layout.
  std::vector<int> seen(nn, 0);
  for (int v = 1; v < nn; ++v) {
    Node& n = g.nodes[v];
    if (g.nodes[n.parent].first_child == 0) g.nodes[n.parent].first_child = v;
    if (n.action_index != seen[n.parent]++) {
      throw std::invalid_argument("action indices must count siblings in order");
    }
    if (g.nodes[n.parent].first_child + n.action_index != v) {
      throw std::invalid_argument("children of a node must be contiguous");
    }
  }
  for (int v = 0; v < nn; ++v) {
    if (seen[v] != g.nodes[v].num_children) {
      throw std::invalid_argument("missing children");
    }
    if (g.nodes[v].is_chance()) {
      double sum = 0.0;
      for (int c = 0; c < g.nodes[v].num_children; ++c) {
        double p = g.nodes[g.nodes[v].first_child + c].chance_prob;
        if (p < 0.0) throw std::invalid_argument("negative chance probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("chance probabilities must sum to 1");
      }
    }
  }
  // Information sets, their global action blocks, and own-action histories.
  g.infosets.assign(num_sets, InfoSet{});
  for (int v = 0; v < nn; ++v) {
    const Node& n = g.nodes[v];
    if (!n.is_decision()) continue;
    InfoSet& s = g.infosets[n.infoset];
    if (s.members.empty()) {
      s.id = n.infoset;
      s.owner = n.owner;
      s.num_actions = n.num_children;
    } else if (s.owner != n.owner || s.num_actions != n.num_children) {
      throw std::invalid_argument("information set members disagree");
    }
    s.members.push_back(v);
  }
  g.num_actions = 0;
  for (InfoSet& s : g.infosets) {
    if (s.members.empty()) throw std::invalid_argument("empty information set");
    s.first_action = g.num_actions;
    g.num_actions += s.num_actions;
    for (int a = 0; a < s.num_actions; ++a) g.action_set.push_back(s.id);
  }
  for (InfoSet& s : g.infosets) {
    std::vector<int> seq;
    for (int v = s.members.front(); v != 0; v = g.nodes[v].parent) {
      const Node& par = g.nodes[g.nodes[v].parent];
      if (par.owner == s.owner) {
        seq.push_back(g.infosets[par.infoset].first_action +
                      g.nodes[v].action_index);
      }
    }
    s.own_seq.assign(seq.rbegin(), seq.rend());
  }
  g.compute_metrics();
  return g;
}

inline void save_game(const Game& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write game: " + path);
  out << game_to_json(g).dump() << "\n";
}

inline Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read game: " + path);
  return game_from_json(nlohmann::json::parse(in));
}

}  // namespace efg

#endif  // EFG_GAME_IO_HPP
