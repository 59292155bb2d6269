#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "efg/domains/registry.hpp"
#include "efg/domains/test_games.hpp"
#include "efg/game.hpp"
#include "efg/game_io.hpp"
#include "efg/rng.hpp"
#include "efg/strategy.hpp"

namespace efg {
namespace {

// Random behavior profile: independent positive distribution per set.
Behavior random_behavior(const Game& g, Rng& rng) {
  Behavior b(g.num_actions, 0.0);
  for (const InfoSet& s : g.infosets) {
    double sum = 0.0;
    for (int a = 0; a < s.num_actions; ++a) {
      double w = 0.05 + rng.next_double();
      b[s.first_action + a] = w;
      sum += w;
    }
    for (int a = 0; a < s.num_actions; ++a) b[s.first_action + a] /= sum;
  }
  return b;
}

TEST(Structure, GoldenCounts) {
  Game mp = domains::matching_pennies();
  EXPECT_EQ(mp.num_nodes(), 7);
  EXPECT_EQ(mp.num_infosets(), 2);
  EXPECT_EQ(mp.num_actions, 4);

  Game f2 = domains::fig2_game();
  EXPECT_EQ(f2.num_nodes(), 39);
  EXPECT_EQ(f2.num_infosets(), 6);
  EXPECT_EQ(f2.num_actions, 12);

  Game os = domains::oscillator();
  EXPECT_EQ(os.num_nodes(), 15);
  EXPECT_EQ(os.num_infosets(), 3);
  EXPECT_EQ(os.num_actions, 6);

  Game e2 = domains::example2();
  EXPECT_EQ(e2.num_nodes(), 15);
  EXPECT_EQ(e2.num_infosets(), 4);
  EXPECT_EQ(e2.num_actions, 8);
}

TEST(Structure, IdsAreDepthFirstAndSiblingBlocksContiguous) {
  for (const char* name : {"matching_pennies", "fig2_game", "GS3", "P111"}) {
    Game g = domains::build_domain(name);
    EXPECT_EQ(g.nodes[0].parent, -1);
    std::vector<int> seen(g.num_nodes(), 0);
    for (int v = 1; v < g.num_nodes(); ++v) {
      const Node& n = g.nodes[v];
      ASSERT_GE(n.parent, 0) << name << " node " << v;
      ASSERT_LT(n.parent, v) << name << " node " << v;
      EXPECT_EQ(n.action_index, seen[n.parent]++);
      EXPECT_EQ(g.child(n.parent, n.action_index), v);
    }
    for (int v = 0; v < g.num_nodes(); ++v) {
      EXPECT_EQ(seen[v], g.nodes[v].num_children);
      EXPECT_EQ(g.nodes[v].is_terminal(), g.nodes[v].num_children == 0);
    }
    // Global action ids identify their set; members ascend.
    for (const InfoSet& s : g.infosets) {
      for (int a = 0; a < s.num_actions; ++a) {
        EXPECT_EQ(g.action_set[s.first_action + a], s.id);
      }
      for (std::size_t m = 1; m < s.members.size(); ++m) {
        EXPECT_LT(s.members[m - 1], s.members[m]);
      }
      for (int m : s.members) {
        EXPECT_EQ(g.nodes[m].infoset, s.id);
        EXPECT_EQ(g.nodes[m].owner, s.owner);
        EXPECT_EQ(g.nodes[m].num_children, s.num_actions);
      }
    }
  }
}

TEST(Structure, BuilderIsDeterministic) {
  std::string a = game_to_json(domains::build_domain("GS3")).dump();
  std::string b = game_to_json(domains::build_domain("GS3")).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(game_to_json(domains::build_domain("P111")).dump(),
            game_to_json(domains::build_domain("P111")).dump());
}

TEST(PerfectRecall, HoldsOnAllOriginalGames) {
  for (const char* name : {"matching_pennies", "fig2_game", "oscillator",
                           "example2", "GS3", "P111", "GP3"}) {
    EXPECT_TRUE(check_perfect_recall(domains::build_domain(name)).ok) << name;
  }
}

// The fig2 structure with the depth-1 pair and the depth-2 pair of P1 sets
// force-merged at construction: members then disagree on the action taken at
// the depth-1 set, so exactly the two merged sets violate recall.
TEST(PerfectRecall, DetectsMergedFig2Structure) {
  using B = GameBuilder;
  int leaf = 0;
  const double k_pay[8][2] = {{3, -2}, {-1, 4}, {2, -3}, {-4, 1},
                              {1, -2}, {-3, 2}, {4, -1}, {-2, 3}};
  auto bottom = [&]() {
    std::vector<std::unique_ptr<B::Temp>> kids;
    kids.push_back(B::terminal(k_pay[leaf][0]));
    kids.push_back(B::terminal(k_pay[leaf][1]));
    ++leaf;
    return B::decision(kPlayer2, "K", std::move(kids));
  };
  auto depth2 = [&]() {
    std::vector<std::unique_ptr<B::Temp>> kids;
    kids.push_back(bottom());
    kids.push_back(bottom());
    return B::decision(kPlayer1, "I6", std::move(kids));
  };
  auto depth1 = [&](double stop_pay) {
    std::vector<std::unique_ptr<B::Temp>> kids;
    kids.push_back(depth2());
    kids.push_back(B::terminal(stop_pay));
    return B::decision(kPlayer1, "I5", std::move(kids));
  };
  std::vector<std::unique_ptr<B::Temp>> root_kids;
  root_kids.push_back(depth1(1.0));
  root_kids.push_back(depth1(2.0));
  Game g = B::finalize("merged_fig2",
                       B::decision(kPlayer1, "I0", std::move(root_kids)));
  PerfectRecallReport rep = check_perfect_recall(g);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.violators, (std::vector<int>{1, 2}));
}

TEST(Metrics, HandComputedOnFixtures) {
  Game mp = domains::matching_pennies();
  EXPECT_DOUBLE_EQ(mp.max_abs_utility, 1.0);
  EXPECT_DOUBLE_EQ(mp.utility_range, 2.0);
  EXPECT_EQ(mp.max_actions, 2);
  EXPECT_EQ(mp.infoset_count_by_player[0], 1);
  EXPECT_EQ(mp.infoset_count_by_player[1], 1);
  EXPECT_DOUBLE_EQ(mp.infoset_delta[0], 2.0);
  EXPECT_DOUBLE_EQ(mp.infoset_delta[1], 2.0);

  Game os = domains::oscillator();
  EXPECT_DOUBLE_EQ(os.max_abs_utility, 10.0);
  EXPECT_DOUBLE_EQ(os.utility_range, 10.0);
  for (const InfoSet& s : os.infosets) {
    EXPECT_DOUBLE_EQ(os.infoset_delta[s.id], 10.0);
  }

  Game e2 = domains::example2();
  EXPECT_DOUBLE_EQ(e2.max_abs_utility, 4.2);
  EXPECT_DOUBLE_EQ(e2.utility_range, 6.2);
  // Sets in first-appearance order: root "r", P2 "k", P1 "pa", P1 "pb".
  EXPECT_DOUBLE_EQ(e2.infoset_delta[0], 6.2);
  EXPECT_DOUBLE_EQ(e2.infoset_delta[1], 6.2);
  EXPECT_DOUBLE_EQ(e2.infoset_delta[2], 3.0);
  EXPECT_DOUBLE_EQ(e2.infoset_delta[3], 6.2);
}

TEST(Reach, ChanceReach) {
  Game os = domains::oscillator();
  EXPECT_DOUBLE_EQ(os.chance_reach(0), 1.0);
  // Both P1 decision nodes under each chance node sit at probability 1/2.
  for (const InfoSet& s : os.infosets) {
    if (s.owner != kPlayer1) continue;
    for (int m : s.members) EXPECT_DOUBLE_EQ(os.chance_reach(m), 0.5);
  }
  // Poker deals: own card 3/12, then the other card 2/11 (same rank) or
  // 3/11 (different rank).
  Game p = domains::build_domain("P111");
  const Node& deal1 = p.nodes[0];
  ASSERT_TRUE(deal1.is_chance());
  int c0 = deal1.first_child;  // first rank for player 1
  EXPECT_NEAR(p.chance_reach(c0), 3.0 / 12.0, 1e-15);
  const Node& deal2 = p.nodes[c0];
  ASSERT_TRUE(deal2.is_chance());
  EXPECT_NEAR(p.chance_reach(deal2.first_child),
              (3.0 / 12.0) * (2.0 / 11.0), 1e-15);
  EXPECT_NEAR(p.chance_reach(deal2.first_child + 1),
              (3.0 / 12.0) * (3.0 / 11.0), 1e-15);
}

TEST(Reach, PlayerReach) {
  Game f2 = domains::fig2_game();
  Behavior u = uniform_behavior(f2);
  EXPECT_DOUBLE_EQ(f2.player_reach(0, kPlayer1, u), 1.0);
  EXPECT_DOUBLE_EQ(f2.player_reach(0, kPlayer2, u), 1.0);
  // A member of a depth-2 P1 set lies behind two of P1's own binary moves.
  for (const InfoSet& s : f2.infosets) {
    if (s.owner != kPlayer1 || s.own_seq.size() != 2) continue;
    for (int m : s.members) {
      EXPECT_DOUBLE_EQ(f2.player_reach(m, kPlayer1, u), 0.25);
      EXPECT_DOUBLE_EQ(f2.player_reach(m, kPlayer2, u), 1.0);
    }
  }
  // A pure strategy consistent with the path reaches with probability 1.
  Behavior pure = lowest_action_behavior(f2);
  int deep = -1;
  for (const InfoSet& s : f2.infosets) {
    if (s.owner == kPlayer1 && s.own_seq.size() == 2 &&
        s.own_seq == std::vector<int>{0, 2}) {
      deep = s.members.front();
    }
  }
  ASSERT_GE(deep, 0);
  EXPECT_DOUBLE_EQ(f2.player_reach(deep, kPlayer1, pure), 1.0);
}

TEST(ExpectedUtility, PenniesAndBruteForce) {
  Game mp = domains::matching_pennies();
  EXPECT_NEAR(expected_utility(mp, uniform_behavior(mp)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(expected_utility(mp, lowest_action_behavior(mp)), 1.0);

  // Independent oracle: direct recursion with per-node probabilities.
  Game gs = domains::build_domain("GS3");
  Behavior b = uniform_behavior(gs);
  Rng rng(7);
  Behavior r1 = random_behavior(gs, rng);
  for (const Behavior* prof : {&b, &r1}) {
    std::vector<double> val(gs.num_nodes(), 0.0);
    for (int v = gs.num_nodes() - 1; v >= 0; --v) {
      const Node& n = gs.nodes[v];
      if (n.is_terminal()) {
        val[v] = n.utility;
        continue;
      }
      for (int a = 0; a < n.num_children; ++a) {
        int c = gs.child(v, a);
        double p = n.is_chance()
                       ? gs.nodes[c].chance_prob
                       : (*prof)[gs.infosets[n.infoset].first_action + a];
        val[v] += p * val[c];
      }
    }
    EXPECT_NEAR(expected_utility(gs, *prof), val[0], 1e-12);
  }
}

TEST(ExpectedUtility, LeafReachesFormADistribution) {
  Rng rng(11);
  for (const char* name : {"fig2_game", "oscillator", "GS3", "P111"}) {
    Game g = domains::build_domain(name);
    Behavior b = random_behavior(g, rng);
    std::vector<double> reach = node_reach(g, b);
    double total = 0.0;
    for (int v = 0; v < g.num_nodes(); ++v) {
      if (g.nodes[v].is_terminal()) total += reach[v];
    }
    EXPECT_NEAR(total, 1.0, 1e-9) << name;
  }
}

TEST(ExpectedUtility, BilinearInOneSetsDistribution) {
  Game g = domains::fig2_game();
  Rng rng(3);
  Behavior b = random_behavior(g, rng);
  Behavior b2 = b;
  const InfoSet& s = g.infosets[1];  // some P1 set
  b2[s.first_action] = 0.9;
  b2[s.first_action + 1] = 0.1;
  for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
    Behavior mix = b;
    for (int a = 0; a < s.num_actions; ++a) {
      mix[s.first_action + a] = alpha * b[s.first_action + a] +
                                (1 - alpha) * b2[s.first_action + a];
    }
    EXPECT_NEAR(expected_utility(g, mix),
                alpha * expected_utility(g, b) +
                    (1 - alpha) * expected_utility(g, b2),
                1e-12);
  }
}

TEST(Serialization, RoundTripPreservesEverything) {
  for (const char* name :
       {"matching_pennies", "fig2_game", "oscillator", "example2", "GS3"}) {
    Game g = domains::build_domain(name);
    Game h = game_from_json(game_to_json(g));
    EXPECT_EQ(game_to_json(g).dump(), game_to_json(h).dump()) << name;
    ASSERT_EQ(g.num_infosets(), h.num_infosets());
    EXPECT_EQ(g.num_actions, h.num_actions);
    EXPECT_EQ(g.action_set, h.action_set);
    for (int i = 0; i < g.num_infosets(); ++i) {
      EXPECT_EQ(g.infosets[i].members, h.infosets[i].members);
      EXPECT_EQ(g.infosets[i].own_seq, h.infosets[i].own_seq);
      EXPECT_EQ(g.infosets[i].first_action, h.infosets[i].first_action);
      EXPECT_EQ(g.infosets[i].owner, h.infosets[i].owner);
    }
    EXPECT_DOUBLE_EQ(g.max_abs_utility, h.max_abs_utility);
    EXPECT_DOUBLE_EQ(g.utility_range, h.utility_range);
    EXPECT_EQ(g.infoset_delta, h.infoset_delta);
  }
}

TEST(Serialization, FileRoundTrip) {
  Game g = domains::example2();
  std::string path = ::testing::TempDir() + "/example2_game.json";
  save_game(g, path);
  Game h = load_game(path);
  EXPECT_EQ(game_to_json(g).dump(), game_to_json(h).dump());
  std::remove(path.c_str());
}

TEST(Serialization, RejectsInconsistentInput) {
  nlohmann::json j = game_to_json(domains::matching_pennies());
  {
    nlohmann::json bad = j;
    bad["nodes"][0][0] = 0;  // root must have parent -1
    EXPECT_THROW(game_from_json(bad), std::invalid_argument);
  }
  {
    nlohmann::json bad = j;
    bad["nodes"][3][0] = 5;  // parent after child
    EXPECT_THROW(game_from_json(bad), std::invalid_argument);
  }
  {
    nlohmann::json bad = j;
    bad["nodes"][3][2] = 1;  // infoset tag on a terminal
    EXPECT_THROW(game_from_json(bad), std::invalid_argument);
  }
  {
    nlohmann::json bad = j;
    bad["nodes"][1][2] = 0;  // member joining a set of the other player
    EXPECT_THROW(game_from_json(bad), std::invalid_argument);
  }
  {
    nlohmann::json bad = j;
    bad["nodes"][1][4] = 1;  // declared child count disagrees with layout
    EXPECT_THROW(game_from_json(bad), std::invalid_argument);
  }
  {
    // Chance probabilities must sum to one.
    nlohmann::json bad = game_to_json(domains::oscillator());
    int chance_child = -1;
    for (std::size_t v = 0; v < bad["nodes"].size(); ++v) {
      if (bad["nodes"][v][1].get<int>() == kChance) {
        chance_child = bad["nodes"][v][4].get<int>() > 0
                           ? static_cast<int>(v) + 1
                           : -1;
        break;
      }
    }
    ASSERT_GT(chance_child, 0);
    bad["nodes"][chance_child][5] = 0.75;
    EXPECT_THROW(game_from_json(bad), std::invalid_argument);
  }
}

}  // namespace
}  // namespace efg
