#ifndef EFG_DOMAINS_POKER_HPP
#define EFG_DOMAINS_POKER_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efg/game.hpp"

namespace efg {
namespace domains {

// Two-round limit poker over a deck of 4 ranks with 3 copies each.
// Both players ante 1 chip and receive a private card. A betting round
// follows: the first player checks or bets; facing a bet, a player may fold,
// call, or raise (up to max_consecutive_raises raises per round). A shared
// card is dealt after a call or two checks, followed by a second, identical
// betting round. At showdown the higher pair (private card matching the
// shared card) wins, otherwise the higher private card; ties are worth 0.
// The k-th allowed bet (raise) size is worth k chips.
struct PokerConfig {
  int num_bets = 1;               // b: count of allowed bet sizes {1..b}
  int num_raises = 1;             // r: count of allowed raise sizes {1..r}
  int max_consecutive_raises = 1; // c: raise cap per betting round
};

namespace detail {

struct PokerBuilder {
  static constexpr int kRanks = 4;
  static constexpr int kCopies = 3;
  const PokerConfig& cfg;

  explicit PokerBuilder(const PokerConfig& c) : cfg(c) {}

  using Temp = GameBuilder::Temp;

  static std::string key(int own_rank, const std::string& hist1, int shared,
                         const std::string& hist2) {
    std::string s;
    s += static_cast<char>('0' + own_rank);
    s += '|';
    s += hist1;
    s += '|';
    s += shared < 0 ? '-' : static_cast<char>('0' + shared);
    s += '|';
    s += hist2;
    return s;
  }

  std::unique_ptr<Temp> deal_p1() {
    std::vector<std::pair<double, std::unique_ptr<Temp>>> outs;
    for (int i = 0; i < kRanks; ++i) {
      outs.emplace_back(static_cast<double>(kCopies) / (kRanks * kCopies),
                        deal_p2(i));
    }
    return GameBuilder::chance(std::move(outs));
  }

  std::unique_ptr<Temp> deal_p2(int i) {
    std::vector<std::pair<double, std::unique_ptr<Temp>>> outs;
    for (int j = 0; j < kRanks; ++j) {
      int left = kCopies - (i == j ? 1 : 0);
      outs.emplace_back(static_cast<double>(left) / (kRanks * kCopies - 1),
                        bet_node(i, j, -1, 1, 1, 0, kPlayer1, false, "", ""));
    }
    return GameBuilder::chance(std::move(outs));
  }

  std::unique_ptr<Temp> deal_shared(int i, int j, int c1, int c2,
                                    const std::string& hist1) {
    std::vector<std::pair<double, std::unique_ptr<Temp>>> outs;
    for (int k = 0; k < kRanks; ++k) {
      int left = kCopies - (i == k ? 1 : 0) - (j == k ? 1 : 0);
      outs.emplace_back(static_cast<double>(left) / (kRanks * kCopies - 2),
                        bet_node(i, j, k, c1, c2, 0, kPlayer1, false, hist1,
                                 ""));
    }
    return GameBuilder::chance(std::move(outs));
  }

  // One betting decision. `checked` marks that this is the second player
  // facing an opening check; a deficit > 0 means a bet or raise is pending.
  std::unique_ptr<Temp> bet_node(int i, int j, int shared, int c1, int c2,
                                 int raises, Player to_act, bool checked,
                                 std::string hist1, std::string hist2) {
    std::string& hist = shared < 0 ? hist1 : hist2;
    int own = to_act == kPlayer1 ? c1 : c2;
    int other = to_act == kPlayer1 ? c2 : c1;
    int deficit = other - own;
    std::vector<std::unique_ptr<Temp>> kids;
    // Children follow the order the rules name the moves in: bet sizes
    // ascending then check; raise sizes ascending, then call, then fold.
    if (deficit == 0) {
      for (int v = 1; v <= cfg.num_bets; ++v) {
        std::string h = hist;
        h += 'b';
        h += static_cast<char>('0' + v);
        int n1 = c1 + (to_act == kPlayer1 ? v : 0);
        int n2 = c2 + (to_act == kPlayer2 ? v : 0);
        kids.push_back(continue_round(i, j, shared, n1, n2, raises,
                                      opponent(to_act), false, hist1, hist2,
                                      h));
      }
      {
        std::string h = hist;
        h += 'k';
        if (checked) {
          kids.push_back(round_over(i, j, shared, c1, c2,
                                    shared < 0 ? h : hist1,
                                    shared < 0 ? hist2 : h));
        } else {
          kids.push_back(continue_round(i, j, shared, c1, c2, raises,
                                        opponent(to_act), true, hist1, hist2,
                                        h));
        }
      }
    } else {
      if (raises < cfg.max_consecutive_raises) {
        for (int w = 1; w <= cfg.num_raises; ++w) {
          std::string h = hist;
          h += 'r';
          h += static_cast<char>('0' + w);
          int add = deficit + w;
          int n1 = c1 + (to_act == kPlayer1 ? add : 0);
          int n2 = c2 + (to_act == kPlayer2 ? add : 0);
          kids.push_back(continue_round(i, j, shared, n1, n2, raises + 1,
                                        opponent(to_act), false, hist1, hist2,
                                        h));
        }
      }
      {
        std::string h = hist;
        h += 'c';
        int n1 = c1 + (to_act == kPlayer1 ? deficit : 0);
        int n2 = c2 + (to_act == kPlayer2 ? deficit : 0);
        kids.push_back(round_over(i, j, shared, n1, n2,
                                  shared < 0 ? h : hist1,
                                  shared < 0 ? hist2 : h));
      }
      {
        // Fold: the opponent collects the folder's total contribution.
        double u1 = to_act == kPlayer1 ? -static_cast<double>(c1)
                                       : static_cast<double>(c2);
        kids.push_back(GameBuilder::terminal(u1));
      }
    }
    int own_rank = to_act == kPlayer1 ? i : j;
    // The key reflects the betting state BEFORE this move; with the own rank
    // and the shared card that is exactly what the player has observed.
    std::string k = (to_act == kPlayer1 ? "1:" : "2:") +
                    key(own_rank, hist1, shared, shared < 0 ? "" : hist2);
    return GameBuilder::decision(to_act, k, std::move(kids));
  }

  // Continues the current round with the updated history on the right
  // street.
  std::unique_ptr<Temp> continue_round(int i, int j, int shared, int c1,
                                       int c2, int raises, Player to_act,
                                       bool checked, std::string hist1,
                                       std::string hist2,
                                       const std::string& h) {
    if (shared < 0) hist1 = h; else hist2 = h;
    return bet_node(i, j, shared, c1, c2, raises, to_act, checked,
                    std::move(hist1), std::move(hist2));
  }

  std::unique_ptr<Temp> round_over(int i, int j, int shared, int c1, int c2,
                                   const std::string& hist1,
                                   const std::string& /*hist2*/) {
    if (shared < 0) return deal_shared(i, j, c1, c2, hist1);
    return showdown(i, j, shared, c1, c2);
  }

  std::unique_ptr<Temp> showdown(int i, int j, int k, int c1, int c2) {
    bool pair1 = i == k, pair2 = j == k;
    int winner;  // 0, 1, or -1 for a tie
    if (pair1 && pair2) {
      winner = -1;
    } else if (pair1 || pair2) {
      winner = pair1 ? 0 : 1;
    } else if (i != j) {
      winner = i > j ? 0 : 1;
    } else {
      winner = -1;
    }
    double u1 = winner < 0 ? 0.0
                           : (winner == 0 ? static_cast<double>(c2)
                                          : -static_cast<double>(c1));
    return GameBuilder::terminal(u1);
  }
};

}  // namespace detail

inline Game build_poker(const PokerConfig& cfg) {
  if (cfg.num_bets < 1 || cfg.num_raises < 0 || cfg.max_consecutive_raises < 0)
    throw std::invalid_argument("invalid poker config");
  if (cfg.num_bets > 9 || cfg.num_raises > 9)
    throw std::invalid_argument("bet/raise counts above 9 unsupported");
  detail::PokerBuilder b(cfg);
  std::string name = "P" + std::to_string(cfg.num_bets) +
                     std::to_string(cfg.num_raises) +
                     std::to_string(cfg.max_consecutive_raises);
  return GameBuilder::finalize(name, b.deal_p1());
}

}  // namespace domains
}  // namespace efg

#endif  // EFG_DOMAINS_POKER_HPP
