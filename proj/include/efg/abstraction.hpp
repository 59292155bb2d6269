#ifndef EFG_ABSTRACTION_HPP
#define EFG_ABSTRACTION_HPP

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "efg/game.hpp"
#include "efg/strategy.hpp"

namespace efg {

// One information set of the abstracted game: a group of original
// information sets of the same owner with equal action counts and equal
// own-sequence lengths. Actions are aligned positionally: index k of every
// member corresponds to index k of the abstract set.
struct AbstractSet {
  int id = -1;
  Player owner = kPlayer1;
  int num_actions = 0;
  int seq_len = 0;
  int first_action = 0;      // base slot in abstract-strategy vectors
  std::vector<int> members;  // original infoset ids, ascending
  bool alive = true;

  bool abstracted() const { return members.size() > 1; }
};

// A refinement-only partition of the original information sets. Abstract set
// ids are fresh integers and never reused; dead sets stay in place (alive =
// false) so ids and action-slot bases remain stable. Strategy vectors over
// the abstraction are indexed by [set.first_action, set.first_action +
// set.num_actions); callers grow them when splits allocate new slots.
class Abstraction {
 public:
  // Empty shell so result structs can be default-constructed; usable only
  // after assignment from identity()/initial().
  Abstraction() = default;

  // Every original set forms its own abstract set (the unabstracted view).
  static Abstraction identity(const Game& g) {
    Abstraction x(g);
    for (const InfoSet& s : g.infosets) {
      x.add_set(s.owner, s.num_actions,
                static_cast<int>(s.own_seq.size()), {s.id});
    }
    return x;
  }

  // Groups the original sets of each player by (own-sequence length, action
  // count), the coarsest abstraction used as the starting point. Abstract
  // ids follow first appearance in original-set order.
  static Abstraction initial(const Game& g) {
    Abstraction x(g);
    std::map<std::tuple<Player, int, int>, int> by_class;
    for (const InfoSet& s : g.infosets) {
      int len = static_cast<int>(s.own_seq.size());
      auto key = std::make_tuple(s.owner, len, s.num_actions);
      auto it = by_class.find(key);
      if (it == by_class.end()) {
        by_class.emplace(key,
                         x.add_set(s.owner, s.num_actions, len, {s.id}));
      } else {
        x.sets_[it->second].members.push_back(s.id);
        x.phi_[s.id] = it->second;
      }
    }
    return x;
  }

  const Game& game() const { return *g_; }
  int version() const { return version_; }
  int phi(int original_set) const { return phi_[original_set]; }
  const AbstractSet& set(int id) const { return sets_[id]; }
  const std::vector<AbstractSet>& sets() const { return sets_; }
  int num_slots() const { return slots_; }

  int alive_set_count() const {
    int n = 0;
    for (const AbstractSet& s : sets_) n += s.alive ? 1 : 0;
    return n;
  }

  // Action slots of alive sets, optionally one player's only.
  int alive_slot_count(Player p = -9) const {
    int n = 0;
    for (const AbstractSet& s : sets_) {
      if (s.alive && (p == -9 || s.owner == p)) n += s.num_actions;
    }
    return n;
  }

  // Abstract slot of original action `a` under the positional action map.
  int xi(int a) const {
    const InfoSet& s = g_->set_of_action(a);
    return sets_[phi_[s.id]].first_action + (a - s.first_action);
  }

  // Originals currently grouped with at least one other set.
  std::vector<int> abstracted_originals(Player p) const {
    std::vector<int> out;
    for (const AbstractSet& s : sets_) {
      if (!s.alive || s.owner != p || !s.abstracted()) continue;
      out.insert(out.end(), s.members.begin(), s.members.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Replaces an alive set by one new set per block. Blocks must be nonempty,
  // disjoint, and cover the member list. Returns the fresh ids in block
  // order. A single-block "split" is the identity (no new set, version
  // unchanged).
  std::vector<int> split(int id, const std::vector<std::vector<int>>& blocks) {
    if (!sets_[id].alive) {
      throw std::logic_error("split of a dead abstract set");
    }
    std::size_t covered = 0;
    for (const auto& blk : blocks) {
      if (blk.empty()) throw std::logic_error("empty split block");
      for (int m : blk) {
        if (m < 0 || m >= static_cast<int>(phi_.size()) || phi_[m] != id) {
          throw std::logic_error("split block member not in the set");
        }
      }
      covered += blk.size();
    }
    if (covered != sets_[id].members.size()) {
      throw std::logic_error("split blocks do not partition the set");
    }
    if (blocks.size() == 1) return {id};
    // Copies, not references: add_set grows sets_ and would invalidate them.
    const Player owner = sets_[id].owner;
    const int num_actions = sets_[id].num_actions;
    const int seq_len = sets_[id].seq_len;
    sets_[id].alive = false;
    std::vector<int> ids;
    for (const auto& blk : blocks) {
      std::vector<int> ms = blk;
      std::sort(ms.begin(), ms.end());
      ids.push_back(add_set(owner, num_actions, seq_len, std::move(ms)));
    }
    ++version_;
    return ids;
  }

  // Abstract-keyed strategy -> original-game strategy (both players' rows).
  Behavior lift(const Behavior& abstract_b) const {
    Behavior out(g_->num_actions, 0.0);
    for (const InfoSet& s : g_->infosets) {
      int base = sets_[phi_[s.id]].first_action;
      for (int k = 0; k < s.num_actions; ++k) {
        out[s.first_action + k] = abstract_b[base + k];
      }
    }
    return out;
  }

  // Original-game strategy -> abstract-keyed strategy. Valid only when the
  // members of every alive abstract set carry identical rows.
  Behavior restrict(const Behavior& original_b) const {
    Behavior out(slots_, 0.0);
    std::string conflicts;
    for (const AbstractSet& s : sets_) {
      if (!s.alive) continue;
      const InfoSet& lead = g_->infosets[s.members.front()];
      for (int k = 0; k < s.num_actions; ++k) {
        out[s.first_action + k] = original_b[lead.first_action + k];
      }
      for (std::size_t m = 1; m < s.members.size(); ++m) {
        const InfoSet& other = g_->infosets[s.members[m]];
        for (int k = 0; k < s.num_actions; ++k) {
          if (original_b[other.first_action + k] !=
              original_b[lead.first_action + k]) {
            conflicts += " {set " + std::to_string(s.id) + ": originals " +
                         std::to_string(lead.id) + "," +
                         std::to_string(other.id) + " action " +
                         std::to_string(k) + "}";
          }
        }
      }
    }
    if (!conflicts.empty()) {
      throw std::runtime_error("strategy not constant on abstract sets:" +
                               conflicts);
    }
    return out;
  }

  // Words needed by the sparse mapping store. Originals of the largest
  // abstracted set in each (owner, sequence length, action count) class are
  // recognized implicitly (ties to the lowest id); every other abstracted
  // set tags each member with one word; unabstracted sets cost nothing.
  int mapping_word_count() const {
    std::map<std::tuple<Player, int, int>, int> largest;
    for (const AbstractSet& s : sets_) {
      if (!s.alive || !s.abstracted()) continue;
      auto key = std::make_tuple(s.owner, s.seq_len, s.num_actions);
      auto [it, fresh] = largest.emplace(key, s.id);
      if (!fresh && s.members.size() > sets_[it->second].members.size()) {
        it->second = s.id;
      }
    }
    int words = 0;
    for (const AbstractSet& s : sets_) {
      if (!s.alive || !s.abstracted()) continue;
      auto key = std::make_tuple(s.owner, s.seq_len, s.num_actions);
      if (largest.at(key) != s.id) {
        words += static_cast<int>(s.members.size());
      }
    }
    return words;
  }

  // Uniform / lowest-action-pure strategies keyed by the current slots.
  Behavior uniform() const {
    Behavior b(slots_, 0.0);
    for (const AbstractSet& s : sets_) {
      if (!s.alive) continue;
      for (int k = 0; k < s.num_actions; ++k) {
        b[s.first_action + k] = 1.0 / s.num_actions;
      }
    }
    return b;
  }
  Behavior lowest_action_pure() const {
    Behavior b(slots_, 0.0);
    for (const AbstractSet& s : sets_) {
      if (s.alive) b[s.first_action] = 1.0;
    }
    return b;
  }

  // Structural invariants; throws on violation.
  void validate() const {
    std::vector<int> seen(phi_.size(), 0);
    for (const AbstractSet& s : sets_) {
      if (!s.alive) continue;
      for (std::size_t m = 0; m < s.members.size(); ++m) {
        int I = s.members[m];
        const InfoSet& orig = g_->infosets[I];
        if (phi_[I] != s.id || orig.owner != s.owner ||
            orig.num_actions != s.num_actions ||
            static_cast<int>(orig.own_seq.size()) != s.seq_len ||
            (m > 0 && s.members[m - 1] >= I)) {
          throw std::logic_error("abstraction invariant violated at set " +
                                 std::to_string(s.id));
        }
        ++seen[I];
      }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i] != 1) {
        throw std::logic_error("original set " + std::to_string(i) +
                               " not covered exactly once");
      }
    }
  }

  // Text dump (abstract set -> members) for debugging and golden tests.
  std::string dump() const {
    std::string out;
    for (const AbstractSet& s : sets_) {
      if (!s.alive) continue;
      out += std::to_string(s.id) + " (p" + std::to_string(s.owner + 1) +
             "):";
      for (int m : s.members) out += " " + std::to_string(m);
      out += "\n";
    }
    return out;
  }

 private:
  explicit Abstraction(const Game& g)
      : g_(&g), phi_(g.num_infosets(), -1) {}

  const Game* g_ = nullptr;

  int add_set(Player owner, int num_actions, int seq_len,
              std::vector<int> members) {
    AbstractSet s;
    s.id = static_cast<int>(sets_.size());
    s.owner = owner;
    s.num_actions = num_actions;
    s.seq_len = seq_len;
    s.first_action = slots_;
    s.members = std::move(members);
    slots_ += num_actions;
    for (int m : s.members) phi_[m] = s.id;
    sets_.push_back(std::move(s));
    return sets_.back().id;
  }

  int version_ = 1;
  int slots_ = 0;
  std::vector<int> phi_;
  std::vector<AbstractSet> sets_;
};

}  // namespace efg

#endif  // EFG_ABSTRACTION_HPP
