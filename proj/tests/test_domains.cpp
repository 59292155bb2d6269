#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "efg/domains/registry.hpp"
#include "efg/game.hpp"
#include "efg/game_io.hpp"
#include "efg/strategy.hpp"

namespace efg {
namespace {

using domains::build_domain;

struct Golden {
  const char* name;
  int nodes, sets, sets_p1, sets_p2, actions, max_actions;
  double max_abs, range;
};

TEST(Domains, GoldenSizes) {
  const Golden table[] = {
      {"GS2", 15, 10, 5, 5, 12, 2, 1, 2},
      {"GS3", 139, 72, 36, 36, 90, 3, 4, 8},
      {"GS4", 2229, 738, 369, 369, 924, 4, 8, 16},
      {"P111", 5045, 504, 252, 252, 1176, 3, 5, 10},
      {"P222", 162869, 14040, 7020, 7020, 40248, 4, 13, 26},
      {"GP3", 11555, 812, 407, 405, 4553, 25, 2, 3},
  };
  for (const Golden& e : table) {
    Game g = build_domain(e.name);
    EXPECT_EQ(g.num_nodes(), e.nodes) << e.name;
    EXPECT_EQ(g.num_infosets(), e.sets) << e.name;
    EXPECT_EQ(g.infoset_count_by_player[0], e.sets_p1) << e.name;
    EXPECT_EQ(g.infoset_count_by_player[1], e.sets_p2) << e.name;
    EXPECT_EQ(g.num_actions, e.actions) << e.name;
    EXPECT_EQ(g.max_actions, e.max_actions) << e.name;
    EXPECT_DOUBLE_EQ(g.max_abs_utility, e.max_abs) << e.name;
    EXPECT_DOUBLE_EQ(g.utility_range, e.range) << e.name;
    EXPECT_EQ(g.name, e.name);
  }
}

TEST(Domains, BuildersAreDeterministic) {
  for (const char* name : {"GS4", "P111", "GP3"}) {
    EXPECT_EQ(game_to_json(build_domain(name)).dump(),
              game_to_json(build_domain(name)).dump())
        << name;
  }
}

TEST(Domains, PerfectRecallEverywhere) {
  for (const char* name : {"GS2", "GS4", "P222", "GP3"}) {
    EXPECT_TRUE(check_perfect_recall(build_domain(name)).ok) << name;
  }
}

TEST(Domains, ChanceProbabilitiesFormDistributions) {
  for (const char* name : {"P111", "P222"}) {
    Game g = build_domain(name);
    for (int v = 0; v < g.num_nodes(); ++v) {
      if (!g.nodes[v].is_chance()) continue;
      double sum = 0.0;
      for (int a = 0; a < g.nodes[v].num_children; ++a) {
        sum += g.nodes[g.child(v, a)].chance_prob;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9) << name << " node " << v;
    }
  }
}

TEST(Domains, PokerDealProbabilities) {
  Game g = build_domain("P111");
  const Node& root = g.nodes[0];
  ASSERT_TRUE(root.is_chance());
  ASSERT_EQ(root.num_children, 4);
  for (int a = 0; a < 4; ++a) {
    EXPECT_NEAR(g.nodes[g.child(0, a)].chance_prob, 3.0 / 12.0, 1e-15);
  }
  // Second private card: 2 copies left of the rank already dealt, 3 of the
  // others.
  int second = g.child(0, 0);
  ASSERT_TRUE(g.nodes[second].is_chance());
  EXPECT_NEAR(g.nodes[g.child(second, 0)].chance_prob, 2.0 / 11.0, 1e-15);
  EXPECT_NEAR(g.nodes[g.child(second, 1)].chance_prob, 3.0 / 11.0, 1e-15);
  // After check-check with both players holding rank 0, one copy of rank 0
  // remains among the ten undealt cards.
  int p1 = g.child(second, 0);
  ASSERT_EQ(g.nodes[p1].owner, kPlayer1);
  int p2 = g.child(p1, g.nodes[p1].num_children - 1);  // check is last
  ASSERT_EQ(g.nodes[p2].owner, kPlayer2);
  int shared = g.child(p2, g.nodes[p2].num_children - 1);
  ASSERT_TRUE(g.nodes[shared].is_chance());
  EXPECT_NEAR(g.nodes[g.child(shared, 0)].chance_prob, 1.0 / 10.0, 1e-15);
  EXPECT_NEAR(g.nodes[g.child(shared, 1)].chance_prob, 3.0 / 10.0, 1e-15);
}

TEST(Domains, PokerActionOrderIsBetsThenCheckAndRaisesThenCallThenFold) {
  Game g = build_domain("P222");
  // First player's opening set: two bet sizes then check -> 3 actions.
  int p1 = g.child(g.child(0, 0), 0);
  ASSERT_EQ(g.nodes[p1].owner, kPlayer1);
  ASSERT_EQ(g.nodes[p1].num_children, 3);
  // Bet child leads to an opponent node offering raise/raise/call/fold;
  // its last action (fold) ends the game with the bettor taking the pot.
  int facing = g.child(p1, 0);
  ASSERT_EQ(g.nodes[facing].owner, kPlayer2);
  ASSERT_EQ(g.nodes[facing].num_children, 4);
  const Node& fold = g.nodes[g.child(facing, 3)];
  ASSERT_TRUE(fold.is_terminal());
  EXPECT_DOUBLE_EQ(fold.utility, 1.0);  // P2 folds: P1 wins P2's ante
  // Call ends the betting round (leads to the shared-card deal).
  EXPECT_TRUE(g.nodes[g.child(facing, 2)].is_chance());
  // Raises escalate further (still P1 to act).
  EXPECT_EQ(g.nodes[g.child(facing, 0)].owner, kPlayer1);
  // Check child of the opening set keeps the round going for P2.
  EXPECT_EQ(g.nodes[g.child(p1, 2)].owner, kPlayer2);
}

// In the 2-card bidding game the round-0 pure bids determine everything
// (round 1 is forced). Collected-point differences: equal bids give 0,
// bidding low against high wins the bigger second prize.
TEST(Domains, TwoCardBiddingPayoffs) {
  Game g = build_domain("GS2");
  auto pure = [&](bool p1_high, bool p2_high) {
    Behavior b(g.num_actions, 0.0);
    for (const InfoSet& s : g.infosets) {
      bool high = s.owner == kPlayer1 ? p1_high : p2_high;
      int pick = high ? s.num_actions - 1 : 0;
      b[s.first_action + pick] = 1.0;
    }
    return b;
  };
  EXPECT_DOUBLE_EQ(expected_utility(g, pure(false, false)), 0.0);
  EXPECT_DOUBLE_EQ(expected_utility(g, pure(true, true)), 0.0);
  EXPECT_DOUBLE_EQ(expected_utility(g, pure(true, false)), -1.0);
  EXPECT_DOUBLE_EQ(expected_utility(g, pure(false, true)), 1.0);
}

TEST(Domains, BiddingMiddleOrderChangesPayoffsNotShape) {
  domains::GoofspielConfig cfg = domains::GoofspielConfig::with_size(3);
  cfg.middle_order = {3, 2, 1};
  Game custom = domains::build_goofspiel(cfg);
  Game plain = build_domain("GS3");
  EXPECT_EQ(custom.num_nodes(), plain.num_nodes());
  EXPECT_EQ(custom.num_infosets(), plain.num_infosets());
  EXPECT_NE(game_to_json(custom).dump(), game_to_json(plain).dump());
}

TEST(Domains, PursuitForcedGoal) {
  // Path 0-1-2-3-4: attacker starts on the goal's only other neighbor;
  // defenders start too far away to interfere in one round.
  domains::GraphPursuitConfig cfg;
  cfg.adj = {{1}, {0, 2}, {1, 3}, {2, 4}, {3}};
  cfg.start = 0;
  cfg.goal = 1;
  cfg.defenders = {3, 4};
  cfg.rounds = 1;
  Game g = domains::build_graph_pursuit(cfg);
  int leaves = 0;
  for (const Node& n : g.nodes) {
    if (!n.is_terminal()) continue;
    ++leaves;
    EXPECT_DOUBLE_EQ(n.utility, 2.0);
  }
  EXPECT_EQ(leaves, 2);  // one defender has two move options
}

TEST(Domains, PursuitForcedCapture) {
  // Edges 0-1, 1-2, 3-4, 4-0: both attacker moves from 0 walk into a
  // defender whose own move is forced onto that node.
  domains::GraphPursuitConfig cfg;
  cfg.adj = {{1, 4}, {0, 2}, {1}, {4}, {0, 3}};
  cfg.start = 0;
  cfg.goal = 1;
  cfg.defenders = {2, 3};
  cfg.rounds = 1;
  Game g = domains::build_graph_pursuit(cfg);
  for (const Node& n : g.nodes) {
    if (n.is_terminal()) EXPECT_DOUBLE_EQ(n.utility, -1.0);
  }
}

TEST(Domains, PursuitCaptureBeatsGoal) {
  // Triangle start-goal-defender: if the attacker steps onto the goal while
  // a defender steps there too, capture wins.
  domains::GraphPursuitConfig cfg;
  cfg.adj = {{1, 2}, {0, 2}, {0, 1}};
  cfg.start = 0;
  cfg.goal = 1;
  cfg.defenders = {2, 2};
  cfg.rounds = 1;
  Game g = domains::build_graph_pursuit(cfg);
  bool saw_capture_on_goal = false;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const Node& n = g.nodes[v];
    if (n.is_terminal() && n.utility == -1.0) saw_capture_on_goal = true;
  }
  EXPECT_TRUE(saw_capture_on_goal);
}

TEST(Domains, GraphFileMatchesDirectConfig) {
  std::string path = ::testing::TempDir() + "/pursuit_graph.txt";
  {
    std::ofstream out(path);
    out << "# tiny path graph\n"
        << "edge 0 1\nedge 1 2\nedge 2 3\nedge 3 4\n"
        << "start 0\ngoal 1\ndefenders 3 4\n";
  }
  Game from_file = build_domain("GP1", path);
  domains::GraphPursuitConfig cfg;
  cfg.adj = {{1}, {0, 2}, {1, 3}, {2, 4}, {3}};
  cfg.start = 0;
  cfg.goal = 1;
  cfg.defenders = {3, 4};
  cfg.rounds = 1;
  Game direct = domains::build_graph_pursuit(cfg);
  EXPECT_EQ(game_to_json(from_file).dump(), game_to_json(direct).dump());
  std::remove(path.c_str());
}

TEST(Domains, GraphFileErrors) {
  EXPECT_THROW(build_domain("GP2", "/nonexistent/graph.txt"),
               std::runtime_error);
  std::string path = ::testing::TempDir() + "/bad_graph.txt";
  {
    std::ofstream out(path);
    out << "edge 0 1\nwobble 3\n";
  }
  EXPECT_THROW(build_domain("GP2", path), std::runtime_error);
  {
    std::ofstream out(path);
    out << "edge 0 1\nstart 0\n";  // goal/defenders missing
  }
  EXPECT_THROW(build_domain("GP2", path), std::runtime_error);
  std::remove(path.c_str());
}

TEST(Domains, InvalidConfigsRejected) {
  EXPECT_THROW(
      domains::build_goofspiel(domains::GoofspielConfig::with_size(1)),
      std::invalid_argument);
  {
    domains::GoofspielConfig cfg = domains::GoofspielConfig::with_size(3);
    cfg.middle_order = {1, 2};
    EXPECT_THROW(domains::build_goofspiel(cfg), std::invalid_argument);
  }
  {
    domains::PokerConfig cfg;
    cfg.num_bets = 0;
    EXPECT_THROW(domains::build_poker(cfg), std::invalid_argument);
  }
  {
    domains::GraphPursuitConfig cfg;
    cfg.adj = {{1}, {0}};
    cfg.start = 0;
    cfg.goal = 5;  // out of range
    cfg.defenders = {1, 1};
    cfg.rounds = 1;
    EXPECT_THROW(domains::build_graph_pursuit(cfg), std::invalid_argument);
    cfg.goal = 1;
    cfg.rounds = 0;
    EXPECT_THROW(domains::build_graph_pursuit(cfg), std::invalid_argument);
  }
  {
    domains::GraphPursuitConfig cfg;  // defender on an isolated node
    cfg.adj = {{1}, {0}, {}};
    cfg.start = 0;
    cfg.goal = 1;
    cfg.defenders = {2, 1};
    cfg.rounds = 1;
    EXPECT_THROW(domains::build_graph_pursuit(cfg), std::invalid_argument);
  }
  EXPECT_THROW(build_domain("no_such_game"), std::invalid_argument);
}

}  // namespace
}  // namespace efg
