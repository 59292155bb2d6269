#ifndef EFG_DOMAINS_GRAPH_PURSUIT_HPP
#define EFG_DOMAINS_GRAPH_PURSUIT_HPP

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efg/game.hpp"

namespace efg {
namespace domains {

// Pursuit on an undirected graph. The attacker (player 1) starts on `start`
// and tries to reach `goal` within `rounds` rounds (+2); the defender
// (player 2) controls two distinguishable units and tries to capture the
// attacker (-1); running out the clock is worth 0. Each round the attacker
// commits a move to an adjacent node, then the defender commits a move for
// each unit (also to adjacent nodes) without seeing the attacker's choice;
// the moves resolve simultaneously. Capture happens when the attacker ends
// the round on a unit's node or swaps positions with a unit along an edge,
// and takes precedence over reaching the goal. Units must move every round;
// a degree-one node forces the move. After every round (and once initially)
// each side observes the opponent's position when it is within graph
// distance 2 of its own position (any own unit for the defender), otherwise
// it sees only '?'.
struct GraphPursuitConfig {
  std::vector<std::vector<int>> adj;  // sorted neighbor lists
  int start = 0;
  int goal = 0;
  std::array<int, 2> defenders{0, 0};
  int rounds = 3;

  static GraphPursuitConfig default_graph(int rounds);
};

namespace detail {

inline std::vector<std::vector<int>> all_pairs_distances(
    const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::deque<int> q{s};
    dist[s][s] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u]) {
        if (dist[s][v] < 0) {
          dist[s][v] = dist[s][u] + 1;
          q.push_back(v);
        }
      }
    }
  }
  return dist;
}

struct PursuitBuilder {
  const GraphPursuitConfig& cfg;
  std::vector<std::vector<int>> dist;

  explicit PursuitBuilder(const GraphPursuitConfig& c)
      : cfg(c), dist(all_pairs_distances(c.adj)) {}

  using Temp = GameBuilder::Temp;
  static constexpr int kVision = 2;

  bool visible(int from, int to) const {
    int d = dist[from][to];
    return d >= 0 && d <= kVision;
  }

  std::string attacker_obs(int att, int d1, int d2) const {
    std::string s = "o";
    s += visible(att, d1) ? std::to_string(d1) : std::string("?");
    s += ',';
    s += visible(att, d2) ? std::to_string(d2) : std::string("?");
    s += '.';
    return s;
  }

  std::string defender_obs(int att, int d1, int d2) const {
    bool seen = visible(d1, att) || visible(d2, att);
    return "o" + (seen ? std::to_string(att) : std::string("?")) + ".";
  }

  std::unique_ptr<Temp> build() {
    std::string akey = attacker_obs(cfg.start, cfg.defenders[0],
                                    cfg.defenders[1]);
    std::string dkey = defender_obs(cfg.start, cfg.defenders[0],
                                    cfg.defenders[1]);
    return attacker_node(cfg.start, cfg.defenders[0], cfg.defenders[1], 0,
                         std::move(akey), std::move(dkey));
  }

  std::unique_ptr<Temp> attacker_node(int att, int d1, int d2, int round,
                                      std::string akey, std::string dkey) {
    std::vector<std::unique_ptr<Temp>> kids;
    for (int to : cfg.adj[att]) {
      kids.push_back(defender_node(att, d1, d2, round, to, akey, dkey));
    }
    return GameBuilder::decision(kPlayer1, "A:" + akey, std::move(kids));
  }

  std::unique_ptr<Temp> defender_node(int att, int d1, int d2, int round,
                                      int att_to, const std::string& akey,
                                      const std::string& dkey) {
    std::vector<std::unique_ptr<Temp>> kids;
    for (int to1 : cfg.adj[d1]) {
      for (int to2 : cfg.adj[d2]) {
        kids.push_back(resolve(att, d1, d2, round, att_to, to1, to2, akey,
                               dkey));
      }
    }
    return GameBuilder::decision(kPlayer2, "D:" + dkey, std::move(kids));
  }

  std::unique_ptr<Temp> resolve(int att, int d1, int d2, int round,
                                int att_to, int to1, int to2,
                                const std::string& akey,
                                const std::string& dkey) {
    bool swap1 = to1 == att && d1 == att_to;
    bool swap2 = to2 == att && d2 == att_to;
    bool captured = att_to == to1 || att_to == to2 || swap1 || swap2;
    if (captured) return GameBuilder::terminal(-1.0);
    if (att_to == cfg.goal) return GameBuilder::terminal(2.0);
    if (round + 1 == cfg.rounds) return GameBuilder::terminal(0.0);
    std::string na = akey + "m" + std::to_string(att_to) + "." +
                     attacker_obs(att_to, to1, to2);
    std::string nd = dkey + "p" + std::to_string(to1) + "," +
                     std::to_string(to2) + "." +
                     defender_obs(att_to, to1, to2);
    return attacker_node(att_to, to1, to2, round + 1, std::move(na),
                         std::move(nd));
  }
};

}  // namespace detail

inline GraphPursuitConfig GraphPursuitConfig::default_graph(int rounds) {
  GraphPursuitConfig c;
  const int edges[][2] = {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 4},
                          {2, 5}, {3, 4}, {4, 5}, {3, 9}, {5, 9},
                          {4, 6}, {6, 7}, {7, 8}, {8, 9}};
  c.adj.assign(10, {});
  for (auto& e : edges) {
    c.adj[e[0]].push_back(e[1]);
    c.adj[e[1]].push_back(e[0]);
  }
  for (auto& nbrs : c.adj) std::sort(nbrs.begin(), nbrs.end());
  c.start = 0;
  c.goal = 9;
  c.defenders = {3, 5};
  c.rounds = rounds;
  return c;
}

inline void validate_pursuit_config(const GraphPursuitConfig& cfg) {
  int n = static_cast<int>(cfg.adj.size());
  auto in_range = [n](int v) { return v >= 0 && v < n; };
  if (!in_range(cfg.start) || !in_range(cfg.goal) ||
      !in_range(cfg.defenders[0]) || !in_range(cfg.defenders[1]))
    throw std::invalid_argument("pursuit: node id out of range");
  if (cfg.rounds < 1) throw std::invalid_argument("pursuit: rounds < 1");
  for (int u = 0; u < n; ++u) {
    for (int v : cfg.adj[u]) {
      if (!in_range(v) || v == u)
        throw std::invalid_argument("pursuit: bad edge");
    }
  }
  if (cfg.adj[cfg.start].empty() || cfg.adj[cfg.defenders[0]].empty() ||
      cfg.adj[cfg.defenders[1]].empty())
    throw std::invalid_argument("pursuit: a unit starts on an isolated node");
}

inline Game build_graph_pursuit(const GraphPursuitConfig& cfg) {
  validate_pursuit_config(cfg);
  detail::PursuitBuilder b(cfg);
  return GameBuilder::finalize("GP" + std::to_string(cfg.rounds), b.build());
}

// Graph description file: one directive per line. Supported lines are
// "start <node>", "goal <node>", "defenders <node> <node>", and
// "edge <u> <v>". Blank lines and lines starting with '#' are ignored.
inline GraphPursuitConfig parse_graph_file(const std::string& path,
                                           int rounds) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  GraphPursuitConfig cfg;
  cfg.rounds = rounds;
  std::vector<std::pair<int, int>> edges;
  bool have_start = false, have_goal = false, have_defenders = false;
  int max_node = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    auto bad = [&](const std::string& why) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               why);
    };
    if (word == "start") {
      if (!(ls >> cfg.start)) bad("expected: start <node>");
      have_start = true;
      max_node = std::max(max_node, cfg.start);
    } else if (word == "goal") {
      if (!(ls >> cfg.goal)) bad("expected: goal <node>");
      have_goal = true;
      max_node = std::max(max_node, cfg.goal);
    } else if (word == "defenders") {
      if (!(ls >> cfg.defenders[0] >> cfg.defenders[1]))
        bad("expected: defenders <node> <node>");
      have_defenders = true;
      max_node = std::max({max_node, cfg.defenders[0], cfg.defenders[1]});
    } else if (word == "edge") {
      int u, v;
      if (!(ls >> u >> v)) bad("expected: edge <u> <v>");
      if (u < 0 || v < 0 || u == v) bad("bad edge endpoints");
      edges.emplace_back(u, v);
      max_node = std::max({max_node, u, v});
    } else {
      bad("unknown directive '" + word + "'");
    }
  }
  if (!have_start || !have_goal || !have_defenders)
    throw std::runtime_error(path + ": missing start/goal/defenders");
  cfg.adj.assign(max_node + 1, {});
  for (auto [u, v] : edges) {
    cfg.adj[u].push_back(v);
    cfg.adj[v].push_back(u);
  }
  for (auto& nbrs : cfg.adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return cfg;
}

}  // namespace domains
}  // namespace efg

#endif  // EFG_DOMAINS_GRAPH_PURSUIT_HPP
