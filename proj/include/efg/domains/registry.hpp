#ifndef EFG_DOMAINS_REGISTRY_HPP
#define EFG_DOMAINS_REGISTRY_HPP

#include <cctype>
#include <stdexcept>
#include <string>

#include "efg/domains/goofspiel.hpp"
#include "efg/domains/graph_pursuit.hpp"
#include "efg/domains/poker.hpp"
#include "efg/domains/test_games.hpp"
#include "efg/game.hpp"

namespace efg {
namespace domains {

// Builds a game from its name:
//   P<b><r><c>  two-round poker with b bet sizes, r raise sizes, cap c
//   GS<n>       bidding game over an n-card deck
//   GP<x>       graph pursuit with x rounds (optionally on a graph file)
// plus the small named fixtures from test_games.hpp.
inline Game build_domain(const std::string& name,
                         const std::string& graph_file = "") {
  auto digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if (name.size() == 4 && name[0] == 'P' && digits(name.substr(1))) {
    PokerConfig cfg;
    cfg.num_bets = name[1] - '0';
    cfg.num_raises = name[2] - '0';
    cfg.max_consecutive_raises = name[3] - '0';
    return build_poker(cfg);
  }
  if (name.size() > 2 && name.rfind("GS", 0) == 0 && digits(name.substr(2))) {
    return build_goofspiel(GoofspielConfig::with_size(std::stoi(
        name.substr(2))));
  }
  if (name.size() > 2 && name.rfind("GP", 0) == 0 && digits(name.substr(2))) {
    int rounds = std::stoi(name.substr(2));
    GraphPursuitConfig cfg = graph_file.empty()
                                 ? GraphPursuitConfig::default_graph(rounds)
                                 : parse_graph_file(graph_file, rounds);
    return build_graph_pursuit(cfg);
  }
  return build_test_game(name);
}

}  // namespace domains
}  // namespace efg

#endif  // EFG_DOMAINS_REGISTRY_HPP
