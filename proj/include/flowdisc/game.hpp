#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "flowdisc/rational.hpp"

namespace flowdisc {

/// Read-only picture of the one-dimensional game handed to strategies.
struct GameView {
  std::span<const Rational> values;
  std::span<const int> colors;  // -1, 0 (uncolored), +1
};

struct Move {
  bool wait = false;
  int index = -1;
  int sign = 0;

  static Move pass() { return {true, -1, 0}; }
  static Move color(int index, int sign) { return {false, index, sign}; }
};

using Strategy = std::function<Move(const GameView&)>;

enum class Player { Maker, Breaker };
const char* to_string(Player p);

struct GameOptions {
  Player starter = Player::Breaker;
  bool maker_may_wait = false;
  bool breaker_may_wait = false;
};

struct HistoryEntry {
  Player player = Player::Maker;
  Move move;
  Rational max_prefix_after;
};

struct GameResult {
  std::vector<int> colors;
  std::vector<HistoryEntry> history;
  Rational payoff;          // max over time of the largest |prefix sum|
  bool draw_stop = false;   // both players waited in succession
};

/// Largest |v_1 e_1 + ... + v_k e_k| over k, uncolored entries counting as 0.
Rational max_abs_prefix(std::span<const Rational> values, std::span<const int> colors);

/// Plays to completion. Throws ValidationError on illegal moves.
GameResult play_game(const std::vector<Rational>& values, const Strategy& maker, const Strategy& breaker,
                     const GameOptions& options = {});

/// Rebuilds the coloring from a history; throws ValidationError on a recolor.
std::vector<int> replay(const std::vector<Rational>& values, const std::vector<HistoryEntry>& history);

/// Pairing maker for values in {-1, +1}: complete the last half-colored pair
/// with the opposite contribution, otherwise color the first uncolored element
/// greedily; with odd n the last element is left for the end.
Move maker_pairing_move(const GameView& view);
/// Same rule with sign(v) in place of v, usable on fractional values.
Move maker_pairing_move_signed(const GameView& view);
/// First uncolored element, sign minimizing the resulting max |prefix|;
/// ties give the contribution opposite to the preceding prefix sum.
Move maker_greedy_move(const GameView& view);

/// Preorder walk of the complete k^2-ary tree with layers 0..k/2-1, node
/// value 1 - layer/k.
std::vector<Rational> breaker_hard_instance(int k);

/// Stateful breaker that grows the nested-interval structure on
/// breaker_hard_instance(k) and then exploits the best prefix. Checks the
/// structural invariants after each of its moves and throws
/// InvariantViolation on failure.
class TreeBreaker {
 public:
  explicit TreeBreaker(int k);

  Move operator()(const GameView& view);

  bool maintenance() const { return maintenance_; }
  int level() const { return static_cast<int>(idx_.size()) - 2; }
  const std::vector<int>& indices() const { return idx_; }
  int invariant_checks() const { return checks_; }
  int case1_moves() const { return case1_; }
  int case2_moves() const { return case2_; }

  /// Returns a description of the first broken structural property, or an
  /// empty string.
  std::string check_structure(const GameView& view) const;

 private:
  int k_;
  std::vector<Rational> values_;
  std::vector<int> layer_, rank_, next_sib_, first_child_, subtree_end_;
  std::vector<int> idx_;
  std::vector<int> last_colors_;
  bool started_ = false;
  bool maintenance_ = false;
  int prefix_end_ = -1;
  int prefix_sign_ = 1;
  int checks_ = 0, case1_ = 0, case2_ = 0;

  void enter_maintenance(const GameView& view);
  Move maintenance_move(const GameView& view) const;
  Move commit(const GameView& view, Move move);
};

Strategy make_tree_breaker(int k, std::shared_ptr<TreeBreaker>* handle = nullptr);
/// Uniformly random uncolored element and sign; waits with probability
/// `wait_prob` when waiting is allowed by the caller's options.
Strategy make_random_breaker(std::uint64_t seed, double wait_prob = 0.0);
/// Named strategies: "pairing", "pairing-signed", "greedy".
Strategy make_maker(const std::string& kind);

constexpr int kExhaustiveGameLimit = 12;

/// Best breaker payoff against a fixed maker strategy by memoized game-tree
/// search. The maker strategy must be a function of the view alone.
Rational exhaustive_breaker_value(const std::vector<Rational>& values, const Strategy& maker,
                                  const GameOptions& options = {}, int limit = kExhaustiveGameLimit);

struct TwoPermutationResult {
  std::vector<int> signs;
  Rational identity_value;  // max |prefix| in the order 0, 1, ..., n-1
  Rational sigma_value;     // max |prefix| in the order sigma[0], sigma[1], ...
};

/// sigma[p] is the element at position p of the second order.
TwoPermutationResult color_two_permutation(const std::vector<Rational>& values, const std::vector<int>& sigma);

}  // namespace flowdisc
