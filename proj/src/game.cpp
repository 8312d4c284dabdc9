#include "flowdisc/game.hpp"

#include <algorithm>
#include <numeric>

#include "flowdisc/errors.hpp"
#include "flowdisc/rng.hpp"

namespace flowdisc {

const char* to_string(Player p) { return p == Player::Maker ? "maker" : "breaker"; }

Rational max_abs_prefix(std::span<const Rational> values, std::span<const int> colors) {
  Rational sum = 0, best = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (colors[j] == 0) continue;
    if (colors[j] > 0) sum += values[j];
    else sum -= values[j];
    if (abs(sum) > best) best = abs(sum);
  }
  return best;
}

namespace {

bool any_uncolored(std::span<const int> colors) {
  return std::find(colors.begin(), colors.end(), 0) != colors.end();
}

void apply_move(const std::vector<Rational>& values, std::vector<int>& colors, Player who, const Move& mv) {
  const std::string name = to_string(who);
  if (mv.index < 0 || mv.index >= static_cast<int>(values.size())) {
    throw ValidationError(name + " chose index " + std::to_string(mv.index) + " outside the game");
  }
  if (mv.sign != 1 && mv.sign != -1) throw ValidationError(name + " chose sign " + std::to_string(mv.sign));
  if (colors[mv.index] != 0) {
    throw ValidationError(name + " tried to recolor element " + std::to_string(mv.index));
  }
  colors[mv.index] = mv.sign;
}

int sign_or_plus(const Rational& q) { return sgn(q) < 0 ? -1 : 1; }

template <typename SignOf>
Move pairing_rule(const GameView& view, SignOf sign_of) {
  const int n = static_cast<int>(view.values.size());
  const int paired = n - n % 2;
  for (int a = paired - 2; a >= 0; a -= 2) {
    const int ca = view.colors[a], cb = view.colors[a + 1];
    if ((ca == 0) == (cb == 0)) continue;
    const int done = ca != 0 ? a : a + 1;
    const int open = ca != 0 ? a + 1 : a;
    const int contribution = view.colors[done] * sign_of(done);
    return Move::color(open, -contribution * sign_of(open));
  }
  auto greedy = [&](int i) {
    Rational prefix = 0;
    for (int j = 0; j < i; ++j) {
      if (view.colors[j] > 0) prefix += view.values[j];
      else if (view.colors[j] < 0) prefix -= view.values[j];
    }
    const int target = sgn(prefix) < 0 ? 1 : -1;
    return Move::color(i, target * sign_of(i));
  };
  for (int i = 0; i < paired; ++i) {
    if (view.colors[i] == 0) return greedy(i);
  }
  if (paired < n && view.colors[n - 1] == 0) return greedy(n - 1);
  return Move::pass();
}

}  // namespace

GameResult play_game(const std::vector<Rational>& values, const Strategy& maker, const Strategy& breaker,
                     const GameOptions& options) {
  GameResult result;
  result.colors.assign(values.size(), 0);
  result.payoff = 0;
  Player turn = options.starter;
  int waits_in_a_row = 0;
  while (any_uncolored(result.colors)) {
    const GameView view{values, result.colors};
    const Move mv = turn == Player::Maker ? maker(view) : breaker(view);
    if (mv.wait) {
      const bool allowed = turn == Player::Maker ? options.maker_may_wait : options.breaker_may_wait;
      if (!allowed) throw ValidationError(std::string(to_string(turn)) + " waited but waiting is disabled");
      if (++waits_in_a_row >= 2) {
        result.history.push_back({turn, mv, max_abs_prefix(values, result.colors)});
        result.draw_stop = true;
        break;
      }
    } else {
      waits_in_a_row = 0;
      apply_move(values, result.colors, turn, mv);
    }
    Rational now = max_abs_prefix(values, result.colors);
    if (now > result.payoff) result.payoff = now;
    result.history.push_back({turn, mv, std::move(now)});
    turn = turn == Player::Maker ? Player::Breaker : Player::Maker;
  }
  return result;
}

std::vector<int> replay(const std::vector<Rational>& values, const std::vector<HistoryEntry>& history) {
  std::vector<int> colors(values.size(), 0);
  for (const auto& entry : history) {
    if (!entry.move.wait) apply_move(values, colors, entry.player, entry.move);
  }
  return colors;
}

Move maker_pairing_move(const GameView& view) {
  for (const auto& v : view.values) {
    if (v != 1 && v != -1) throw ValidationError("pairing maker needs values in {-1, +1}, got " + to_string(v));
  }
  return pairing_rule(view, [&](int j) { return sign_or_plus(view.values[j]); });
}

Move maker_pairing_move_signed(const GameView& view) {
  return pairing_rule(view, [&](int j) { return sign_or_plus(view.values[j]); });
}

Move maker_greedy_move(const GameView& view) {
  const int n = static_cast<int>(view.values.size());
  int i = 0;
  while (i < n && view.colors[i] != 0) ++i;
  if (i == n) return Move::pass();
  std::vector<int> trial(view.colors.begin(), view.colors.end());
  trial[i] = 1;
  const Rational plus = max_abs_prefix(view.values, trial);
  trial[i] = -1;
  const Rational minus = max_abs_prefix(view.values, trial);
  if (plus < minus) return Move::color(i, 1);
  if (minus < plus) return Move::color(i, -1);
  Rational prefix = 0;
  for (int j = 0; j < i; ++j) {
    if (view.colors[j] > 0) prefix += view.values[j];
    else if (view.colors[j] < 0) prefix -= view.values[j];
  }
  const int target = sgn(prefix) < 0 ? 1 : -1;
  return Move::color(i, target * sign_or_plus(view.values[i]));
}

std::vector<Rational> breaker_hard_instance(int k) {
  if (k < 2 || k % 2 != 0) throw ValidationError("hard instance needs an even k >= 2, got " + std::to_string(k));
  if (k > 8) throw ValidationError("hard instance with k > 8 is too large to play");
  const int layers = k / 2;
  const int branching = k * k;
  std::vector<Rational> out;
  auto walk = [&](auto&& self, int layer) -> void {
    out.emplace_back(k - layer, k);
    out.back().canonicalize();
    if (layer + 1 >= layers) return;
    for (int c = 0; c < branching; ++c) self(self, layer + 1);
  };
  walk(walk, 0);
  return out;
}

TreeBreaker::TreeBreaker(int k) : k_(k), values_(breaker_hard_instance(k)) {
  const int n = static_cast<int>(values_.size());
  const int layers = k / 2;
  const int branching = k * k;
  layer_.assign(n, 0);
  rank_.assign(n, 0);
  next_sib_.assign(n, -1);
  first_child_.assign(n, -1);
  subtree_end_.assign(n, 0);
  int pos = 0;
  auto build = [&](auto&& self, int layer) -> int {
    const int node = pos++;
    layer_[node] = layer;
    if (layer + 1 < layers) {
      first_child_[node] = node + 1;
      int prev = -1;
      for (int c = 1; c <= branching; ++c) {
        const int child = self(self, layer + 1);
        rank_[child] = c;
        if (prev >= 0) next_sib_[prev] = child;
        prev = child;
      }
    }
    subtree_end_[node] = pos;
    return node;
  };
  build(build, 0);
}

std::string TreeBreaker::check_structure(const GameView& view) const {
  const auto& c = view.colors;
  const int ell = level();
  if (ell < 1) return "structure has no interior index";
  for (int j = 0; j + 1 < static_cast<int>(idx_.size()); ++j) {
    if (idx_[j] >= idx_[j + 1]) return "indices not increasing";
  }
  if (next_sib_[idx_[ell]] != idx_[ell + 1]) return "last index is not the next sibling of i_l";
  // Property 1.
  for (int j = 1; j <= ell; ++j) {
    if (c[idx_[j]] != 1) return "property 1: i_" + std::to_string(j) + " not colored +1";
  }
  // Property 2 (gaps j >= 1).
  for (int j = 1; j <= ell; ++j) {
    for (int e = idx_[j] + 1; e < idx_[j + 1]; ++e) {
      if (c[e] == 0 && values_[e] >= values_[idx_[j]]) {
        return "property 2: uncolored element " + std::to_string(e) + " not smaller than i_" + std::to_string(j);
      }
    }
  }
  // Property 3.
  Rational u_total = 0;
  for (int j = 0; j <= ell; ++j) {
    Rational u = 0;
    for (int e = idx_[j] + 1; e < idx_[j + 1]; ++e) {
      if (c[e] > 0) u += values_[e];
      else if (c[e] < 0) u -= values_[e];
    }
    if (sgn(u) < 0) return "property 3: u_" + std::to_string(j) + " negative";
    u_total += u;
  }
  // Property 4.
  for (int e = idx_[ell] + 1; e < subtree_end_[idx_[ell]]; ++e) {
    if (c[e] != 0) return "property 4: subtree of i_l colored at " + std::to_string(e);
  }
  for (int s = next_sib_[idx_[ell]]; s >= 0; s = next_sib_[s]) {
    for (int e = s; e < subtree_end_[s]; ++e) {
      if (c[e] != 0) return "property 4: sibling subtree colored at " + std::to_string(e);
    }
  }
  // Property 5.
  const int last = idx_[ell + 1];
  if (layer_[last] > ell) return "property 5: i_{l+1} too deep";
  if (u_total < Rational(rank_[last] - 2, k_)) return "property 5: u below (j-2)/k";
  return {};
}

Move TreeBreaker::commit(const GameView& view, Move move) {
  last_colors_.assign(view.colors.begin(), view.colors.end());
  if (!move.wait) last_colors_[move.index] = move.sign;
  if (!maintenance_) {
    const GameView after{values_, last_colors_};
    const std::string broken = check_structure(after);
    ++checks_;
    if (!broken.empty()) throw InvariantViolation("tree breaker: " + broken);
  }
  return move;
}

void TreeBreaker::enter_maintenance(const GameView& view) {
  maintenance_ = true;
  auto prefix_sum = [&](int end) {
    Rational s = 0;
    for (int e = 0; e <= end; ++e) {
      if (view.colors[e] > 0) s += values_[e];
      else if (view.colors[e] < 0) s -= values_[e];
    }
    return s;
  };
  if (idx_.size() >= 2) {
    const int a = idx_.front();
    const int b = idx_.back() - 1;
    const Rational sa = prefix_sum(a), sb = prefix_sum(b);
    if (abs(sa) > abs(sb)) {
      prefix_end_ = a;
      prefix_sign_ = sgn(sa) < 0 ? -1 : 1;
    } else {
      prefix_end_ = b;
      prefix_sign_ = sgn(sb) < 0 ? -1 : 1;
    }
  } else {
    prefix_end_ = static_cast<int>(values_.size()) - 1;
    prefix_sign_ = sgn(prefix_sum(prefix_end_)) < 0 ? -1 : 1;
  }
}

Move TreeBreaker::maintenance_move(const GameView& view) const {
  int best = -1;
  for (int e = 0; e <= prefix_end_; ++e) {
    if (view.colors[e] == 0 && (best < 0 || values_[e] > values_[best])) best = e;
  }
  if (best < 0) {
    for (int e = 0; e < static_cast<int>(values_.size()); ++e) {
      if (view.colors[e] == 0) {
        best = e;
        break;
      }
    }
  }
  if (best < 0) return Move::pass();
  return Move::color(best, prefix_sign_);
}

Move TreeBreaker::operator()(const GameView& view) {
  if (view.values.size() != values_.size()) throw ValidationError("tree breaker used on a different instance");
  std::vector<int> fresh;
  for (std::size_t e = 0; e < values_.size(); ++e) {
    const int before = last_colors_.empty() ? 0 : last_colors_[e];
    if (before == 0 && view.colors[e] != 0) fresh.push_back(static_cast<int>(e));
  }
  if (!started_) {
    started_ = true;
    const bool disturbed = !fresh.empty() && !(fresh.size() == 1 && fresh[0] == 0);
    if (disturbed || first_child_[0] < 0) {
      enter_maintenance(view);
      return commit(view, maintenance_move(view));
    }
    const int first = first_child_[0];
    idx_ = {0, first, next_sib_[first]};
    return commit(view, Move::color(first, 1));
  }
  if (maintenance_) return commit(view, maintenance_move(view));
  if (fresh.size() > 1) {
    enter_maintenance(view);
    return commit(view, maintenance_move(view));
  }
  const int ell = level();
  int gap = -1;
  if (!fresh.empty()) {
    for (int t = 1; t <= ell; ++t) {
      if (idx_[t] < fresh[0] && fresh[0] < idx_[t + 1]) gap = t;
    }
  }
  if (gap >= 1) {
    const int next = next_sib_[idx_[ell + 1]];
    if (next < 0) {
      enter_maintenance(view);
      return commit(view, maintenance_move(view));
    }
    ++case1_;
    idx_.erase(idx_.begin() + gap);
    idx_.push_back(next);
    const int promoted = idx_[ell];
    if (view.colors[promoted] != 0) throw InvariantViolation("tree breaker: promoted index already colored");
    return commit(view, Move::color(promoted, 1));
  }
  const int child = first_child_[idx_[ell]];
  if (child < 0 || next_sib_[child] < 0) {
    enter_maintenance(view);
    return commit(view, maintenance_move(view));
  }
  ++case2_;
  idx_[0] = idx_[1] - 1;
  idx_[ell + 1] = child;
  idx_.push_back(next_sib_[child]);
  if (view.colors[child] != 0) throw InvariantViolation("tree breaker: first child already colored");
  return commit(view, Move::color(child, 1));
}

Strategy make_tree_breaker(int k, std::shared_ptr<TreeBreaker>* handle) {
  auto breaker = std::make_shared<TreeBreaker>(k);
  if (handle) *handle = breaker;
  return [breaker](const GameView& view) { return (*breaker)(view); };
}

Strategy make_random_breaker(std::uint64_t seed, double wait_prob) {
  auto rng = std::make_shared<Rng>(seed, "tournament");
  return [rng, wait_prob](const GameView& view) {
    if (wait_prob > 0.0 && rng->bernoulli(wait_prob)) return Move::pass();
    std::vector<int> open;
    for (std::size_t e = 0; e < view.colors.size(); ++e) {
      if (view.colors[e] == 0) open.push_back(static_cast<int>(e));
    }
    if (open.empty()) return Move::pass();
    const int pick = open[rng->uniform_int(0, static_cast<std::int64_t>(open.size()) - 1)];
    return Move::color(pick, rng->bernoulli(0.5) ? 1 : -1);
  };
}

Strategy make_maker(const std::string& kind) {
  if (kind == "pairing") return maker_pairing_move;
  if (kind == "pairing-signed") return maker_pairing_move_signed;
  if (kind == "greedy") return maker_greedy_move;
  throw ValidationError("unknown maker strategy '" + kind + "'");
}

namespace {

class GameSearch {
 public:
  GameSearch(const std::vector<Rational>& values, const Strategy& maker, const GameOptions& options)
      : values_(values), maker_(maker), options_(options), colors_(values.size(), 0) {
    std::size_t states = 1;
    for (std::size_t e = 0; e < values.size(); ++e) states *= 3;
    pow3_.resize(values.size());
    std::size_t p = 1;
    for (std::size_t e = 0; e < values.size(); ++e) {
      pow3_[e] = p;
      p *= 3;
    }
    memo_.resize(2 * states);
    known_.assign(2 * states, 0);
  }

  Rational value(Player to_move) { return search(0, to_move); }

 private:
  const std::vector<Rational>& values_;
  const Strategy& maker_;
  GameOptions options_;
  std::vector<int> colors_;
  std::vector<std::size_t> pow3_;
  std::vector<Rational> memo_;
  std::vector<char> known_;

  std::size_t digit(int sign) const { return sign > 0 ? 1 : 2; }

  Rational search(std::size_t code, Player to_move) {
    const std::size_t slot = 2 * code + (to_move == Player::Breaker ? 1 : 0);
    if (known_[slot]) return memo_[slot];
    Rational best = max_abs_prefix(values_, colors_);
    if (any_uncolored(colors_)) {
      if (to_move == Player::Maker) {
        const Move mv = maker_(GameView{values_, colors_});
        if (mv.wait) throw ValidationError("maker waited during exhaustive search");
        if (mv.index < 0 || mv.index >= static_cast<int>(colors_.size()) || colors_[mv.index] != 0 ||
            (mv.sign != 1 && mv.sign != -1)) {
          throw ValidationError("maker produced an illegal move during exhaustive search");
        }
        colors_[mv.index] = mv.sign;
        Rational child = search(code + digit(mv.sign) * pow3_[mv.index], Player::Breaker);
        colors_[mv.index] = 0;
        if (child > best) best = child;
      } else {
        if (options_.breaker_may_wait) {
          Rational child = search(code, Player::Maker);
          if (child > best) best = child;
        }
        for (std::size_t e = 0; e < colors_.size(); ++e) {
          if (colors_[e] != 0) continue;
          for (int s : {1, -1}) {
            colors_[e] = s;
            Rational child = search(code + digit(s) * pow3_[e], Player::Maker);
            colors_[e] = 0;
            if (child > best) best = std::move(child);
          }
        }
      }
    }
    known_[slot] = 1;
    memo_[slot] = best;
    return best;
  }
};

}  // namespace

Rational exhaustive_breaker_value(const std::vector<Rational>& values, const Strategy& maker,
                                  const GameOptions& options, int limit) {
  if (static_cast<int>(values.size()) > limit) {
    throw ValidationError("exhaustive game search limited to n <= " + std::to_string(limit));
  }
  GameSearch search(values, maker, options);
  return search.value(options.starter);
}

TwoPermutationResult color_two_permutation(const std::vector<Rational>& values, const std::vector<int>& sigma) {
  const int n = static_cast<int>(values.size());
  if (static_cast<int>(sigma.size()) != n) throw ValidationError("permutation length differs from value count");
  {
    std::vector<int> sorted(sigma);
    std::sort(sorted.begin(), sorted.end());
    for (int p = 0; p < n; ++p) {
      if (sorted[p] != p) throw ValidationError("sigma is not a permutation of 0..n-1");
    }
  }
  TwoPermutationResult out;
  out.signs.assign(n, 0);
  std::vector<int> first_order, second_order;
  bool unit = true;
  for (int j = 0; j < n; ++j) {
    if (sgn(values[j]) == 0) out.signs[j] = 1;
    else first_order.push_back(j);
    if (sgn(values[j]) != 0 && abs(values[j]) != 1) unit = false;
  }
  for (int p = 0; p < n; ++p) {
    if (sgn(values[sigma[p]]) != 0) second_order.push_back(sigma[p]);
  }
  const auto rule = unit ? maker_pairing_move : maker_pairing_move_signed;
  auto play = [&](const std::vector<int>& order) {
    std::vector<Rational> vals;
    std::vector<int> cols;
    for (int j : order) {
      vals.push_back(values[j]);
      cols.push_back(out.signs[j]);
    }
    const Move mv = rule(GameView{vals, cols});
    if (mv.wait) return false;
    out.signs[order[mv.index]] = mv.sign;
    return true;
  };
  auto remaining = [&] { return std::count(out.signs.begin(), out.signs.end(), 0) > 0; };
  while (remaining()) {
    play(first_order);
    if (remaining()) play(second_order);
  }
  out.identity_value = max_abs_prefix(values, out.signs);
  std::vector<Rational> permuted;
  std::vector<int> permuted_signs;
  for (int p = 0; p < n; ++p) {
    permuted.push_back(values[sigma[p]]);
    permuted_signs.push_back(out.signs[sigma[p]]);
  }
  out.sigma_value = max_abs_prefix(permuted, permuted_signs);
  return out;
}

}  // namespace flowdisc
