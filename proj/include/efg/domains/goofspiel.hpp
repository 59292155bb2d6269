#ifndef EFG_DOMAINS_GOOFSPIEL_HPP
#define EFG_DOMAINS_GOOFSPIEL_HPP

#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efg/game.hpp"

namespace efg {
namespace domains {

// Bidding card game with three identical decks of n cards valued 1..n.
// One deck, in an order known to both players, supplies the prizes; every
// round both players secretly bid one of their remaining cards. The higher
// bid takes the prize value; equal bids discard the prize. Players observe
// only win/loss/tie, never the opponent's card. Utility is the difference of
// collected points. Simultaneous bids are modeled as P1 moving first with
// P2's information sets hiding P1's bid.
struct GoofspielConfig {
  int deck_size = 3;
  std::vector<int> middle_order;  // defaults to 1..n ascending

  static GoofspielConfig with_size(int n) {
    GoofspielConfig c;
    c.deck_size = n;
    c.middle_order.resize(n);
    std::iota(c.middle_order.begin(), c.middle_order.end(), 1);
    return c;
  }
};

namespace detail {

struct GoofspielBuilder {
  const GoofspielConfig& cfg;
  int n;

  explicit GoofspielBuilder(const GoofspielConfig& c)
      : cfg(c), n(c.deck_size) {}

  using Temp = GameBuilder::Temp;

  // hand bitmasks hold remaining card values (bit v-1 = card v available).
  std::unique_ptr<Temp> p1_node(int round, unsigned h1, unsigned h2,
                                int score, const std::string& key1,
                                const std::string& key2) {
    if (round == n) {
      return GameBuilder::terminal(static_cast<double>(score));
    }
    std::vector<std::unique_ptr<Temp>> kids;
    for (int c1 = 1; c1 <= n; ++c1) {
      if (!(h1 >> (c1 - 1) & 1u)) continue;
      kids.push_back(p2_node(round, h1, h2, score, c1, key1, key2));
    }
    return GameBuilder::decision(kPlayer1, "1:" + key1, std::move(kids));
  }

  std::unique_ptr<Temp> p2_node(int round, unsigned h1, unsigned h2,
                                int score, int c1, const std::string& key1,
                                const std::string& key2) {
    std::vector<std::unique_ptr<Temp>> kids;
    for (int c2 = 1; c2 <= n; ++c2) {
      if (!(h2 >> (c2 - 1) & 1u)) continue;
      int prize = cfg.middle_order[round];
      int next_score = score;
      char o1, o2;  // outcome as seen by each player
      if (c1 > c2) {
        next_score += prize;
        o1 = 'W';
        o2 = 'L';
      } else if (c1 < c2) {
        next_score -= prize;
        o1 = 'L';
        o2 = 'W';
      } else {
        o1 = o2 = 'T';
      }
      kids.push_back(p1_node(round + 1, h1 & ~(1u << (c1 - 1)),
                             h2 & ~(1u << (c2 - 1)), next_score,
                             key1 + static_cast<char>('0' + c1) + o1,
                             key2 + static_cast<char>('0' + c2) + o2));
    }
    return GameBuilder::decision(kPlayer2, "2:" + key2, std::move(kids));
  }
};

}  // namespace detail

inline Game build_goofspiel(const GoofspielConfig& cfg) {
  if (cfg.deck_size < 2) throw std::invalid_argument("deck size must be >= 2");
  GoofspielConfig c = cfg;
  if (c.middle_order.empty()) {
    c.middle_order.resize(c.deck_size);
    std::iota(c.middle_order.begin(), c.middle_order.end(), 1);
  }
  if (static_cast<int>(c.middle_order.size()) != c.deck_size) {
    throw std::invalid_argument("middle order length must equal deck size");
  }
  detail::GoofspielBuilder b(c);
  unsigned full = (1u << c.deck_size) - 1u;
  return GameBuilder::finalize("GS" + std::to_string(c.deck_size),
                               b.p1_node(0, full, full, 0, "", ""));
}

}  // namespace domains
}  // namespace efg

#endif  // EFG_DOMAINS_GOOFSPIEL_HPP
