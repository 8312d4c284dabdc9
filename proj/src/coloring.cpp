#include "flowdisc/coloring.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "flowdisc/errors.hpp"
#include "flowdisc/game.hpp"

namespace flowdisc {

void validate_sequence(const SignedVectorSequence& seq) {
  if (seq.m < 1) throw ValidationError("vector dimension must be positive");
  for (int j = 0; j < seq.n(); ++j) {
    if (static_cast<int>(seq.vectors[j].size()) != seq.m) {
      throw ValidationError("vector " + std::to_string(j) + " has dimension " +
                            std::to_string(seq.vectors[j].size()) + ", expected " + std::to_string(seq.m));
    }
  }
  if (!seq.signs.empty()) {
    if (static_cast<int>(seq.signs.size()) != seq.n()) throw ValidationError("sign count differs from vector count");
    for (int s : seq.signs) {
      if (s < -1 || s > 1) throw ValidationError("sign " + std::to_string(s) + " outside {-1, 0, 1}");
    }
  }
}

void require_beck_fiala(const SignedVectorSequence& seq) {
  validate_sequence(seq);
  for (int j = 0; j < seq.n(); ++j) {
    Rational norm = 0;
    for (const auto& x : seq.vectors[j]) norm += abs(x);
    if (norm > 1) {
      throw ValidationError("vector " + std::to_string(j) + " has l1-norm " + to_string(norm) + " > 1");
    }
  }
}

DiscMode parse_disc_mode(const std::string& text) {
  if (text == "prefix") return DiscMode::Prefix;
  if (text == "interval") return DiscMode::Interval;
  if (text == "one-sided" || text == "one_sided_interval" || text == "one-sided-interval") {
    return DiscMode::OneSidedInterval;
  }
  throw ValidationError("unknown discrepancy mode '" + text + "'");
}

const char* to_string(DiscMode mode) {
  switch (mode) {
    case DiscMode::Prefix: return "prefix";
    case DiscMode::Interval: return "interval";
    case DiscMode::OneSidedInterval: return "one-sided";
  }
  return "?";
}

DiscrepancyReport discrepancy(const SignedVectorSequence& seq, DiscMode mode) {
  return discrepancy(seq, seq.signs, mode);
}

DiscrepancyReport discrepancy(const SignedVectorSequence& seq, const std::vector<int>& signs, DiscMode mode) {
  validate_sequence(seq);
  if (static_cast<int>(signs.size()) != seq.n()) throw ValidationError("sign count differs from vector count");
  for (int j = 0; j < seq.n(); ++j) {
    if (signs[j] != 1 && signs[j] != -1) {
      throw ValidationError("vector " + std::to_string(j) + " is uncolored");
    }
  }
  DiscrepancyReport rep;
  rep.mode = mode;
  rep.value = 0;
  bool have = false;
  for (int i = 0; i < seq.m; ++i) {
    // S_0 = 0; track the positions of the smallest and largest earlier prefix.
    Rational s = 0, lo = 0, hi = 0;
    int lo_at = 0, hi_at = 0;
    for (int k = 1; k <= seq.n(); ++k) {
      if (signs[k - 1] > 0) s += seq.vectors[k - 1][i];
      else s -= seq.vectors[k - 1][i];
      Rational cand;
      int begin = 1;
      switch (mode) {
        case DiscMode::Prefix:
          cand = abs(s);
          break;
        case DiscMode::Interval:
          if (s - lo >= hi - s) {
            cand = s - lo;
            begin = lo_at + 1;
          } else {
            cand = hi - s;
            begin = hi_at + 1;
          }
          break;
        case DiscMode::OneSidedInterval:
          cand = s - lo;
          begin = lo_at + 1;
          break;
      }
      if (!have || cand > rep.value) {
        have = true;
        rep.value = cand;
        rep.coordinate = i;
        rep.begin = begin;
        rep.end = k;
      }
      // One-sided intervals need a < b strictly, so the earlier minimum only
      // absorbs S_k after S_k has been used as an endpoint.
      if (s < lo) {
        lo = s;
        lo_at = k;
      }
      if (s > hi) {
        hi = s;
        hi_at = k;
      }
    }
  }
  return rep;
}

Rational witness_value(const SignedVectorSequence& seq, const std::vector<int>& signs, const DiscrepancyReport& rep) {
  if (seq.n() == 0) return 0;
  Rational sum = 0;
  for (int k = rep.begin; k <= rep.end; ++k) {
    if (signs[k - 1] > 0) sum += seq.vectors[k - 1][rep.coordinate];
    else sum -= seq.vectors[k - 1][rep.coordinate];
  }
  return rep.mode == DiscMode::OneSidedInterval ? sum : abs(sum);
}

namespace {

// Depth-first search over sign patterns in lexicographic order (+1 first).
// Number is either std::int64_t (values pre-scaled to integers) or Rational.
template <typename Number>
class BruteForce {
 public:
  BruteForce(std::vector<std::vector<Number>> vecs, int m, DiscMode mode)
      : v_(std::move(vecs)), m_(m), n_(static_cast<int>(v_.size())), mode_(mode) {
    s_.assign(n_ + 1, std::vector<Number>(m_, Number(0)));
    lo_ = s_;
    hi_ = s_;
    value_.assign(n_ + 1, Number(0));
    current_.assign(n_, 0);
  }

  std::vector<int> run() {
    if (n_ == 0) return {};
    // A global sign flip preserves prefix and interval values but not
    // one-sided ones, so only the symmetric modes may fix eps_1 = +1.
    for (int first : {1, -1}) {
      if (first < 0 && mode_ != DiscMode::OneSidedInterval) break;
      current_[0] = first;
      step(1);
    }
    return best_;
  }

 private:
  std::vector<std::vector<Number>> v_;
  int m_, n_;
  DiscMode mode_;
  std::vector<std::vector<Number>> s_, lo_, hi_;
  std::vector<Number> value_;
  std::vector<int> current_, best_;
  Number best_value_{0};
  bool have_best_ = false;

  // Extends the pattern at depth k-1 by current_[k-1]; fills level k.
  void extend(int k) {
    const int sign = current_[k - 1];
    Number worst = value_[k - 1];
    for (int i = 0; i < m_; ++i) {
      Number s = s_[k - 1][i];
      if (sign > 0) s += v_[k - 1][i];
      else s -= v_[k - 1][i];
      Number cand{0};
      switch (mode_) {
        case DiscMode::Prefix:
          cand = s < 0 ? Number(-s) : s;
          break;
        case DiscMode::Interval: {
          Number up = s - lo_[k - 1][i], down = hi_[k - 1][i] - s;
          cand = up > down ? up : down;
          break;
        }
        case DiscMode::OneSidedInterval:
          cand = s - lo_[k - 1][i];
          break;
      }
      if (k == 1 && i == 0) worst = cand;
      else if (cand > worst) worst = cand;
      lo_[k][i] = s < lo_[k - 1][i] ? s : lo_[k - 1][i];
      hi_[k][i] = s > hi_[k - 1][i] ? s : hi_[k - 1][i];
      s_[k][i] = std::move(s);
    }
    value_[k] = std::move(worst);
  }

  void step(int k) {
    extend(k);
    if (have_best_ && value_[k] >= best_value_) return;
    if (k == n_) {
      best_value_ = value_[k];
      best_ = current_;
      have_best_ = true;
      return;
    }
    for (int sign : {1, -1}) {
      current_[k] = sign;
      step(k + 1);
    }
  }
};

}  // namespace

std::vector<int> color_brute_force(const SignedVectorSequence& seq, DiscMode mode, int limit) {
  validate_sequence(seq);
  if (seq.n() > limit) {
    throw ValidationError("brute force limited to n <= " + std::to_string(limit) + ", got " +
                          std::to_string(seq.n()));
  }
  std::vector<Rational> all;
  for (const auto& v : seq.vectors) all.insert(all.end(), v.begin(), v.end());
  const mpz_class scale = lcm_of_denominators(all);
  mpz_class total = 0;
  bool fits = true;
  std::vector<std::vector<std::int64_t>> ints(seq.n(), std::vector<std::int64_t>(seq.m));
  for (int j = 0; j < seq.n() && fits; ++j) {
    for (int i = 0; i < seq.m; ++i) {
      const Rational scaled = seq.vectors[j][i] * scale;
      const mpz_class x = scaled.get_num();
      if (!x.fits_slong_p()) {
        fits = false;
        break;
      }
      total += abs(x);
      ints[j][i] = x.get_si();
    }
  }
  if (fits && total < (mpz_class(1) << 60)) {
    return BruteForce<std::int64_t>(std::move(ints), seq.m, mode).run();
  }
  return BruteForce<Rational>(seq.vectors, seq.m, mode).run();
}

std::vector<int> color_greedy(const SignedVectorSequence& seq) {
  validate_sequence(seq);
  std::vector<Rational> s(seq.m, Rational(0));
  std::vector<int> signs;
  for (const auto& v : seq.vectors) {
    Rational plus = 0, minus = 0;
    for (int i = 0; i < seq.m; ++i) {
      plus = std::max(plus, abs(Rational(s[i] + v[i])));
      minus = std::max(minus, abs(Rational(s[i] - v[i])));
    }
    const int sign = minus < plus ? -1 : 1;
    for (int i = 0; i < seq.m; ++i) s[i] += sign * v[i];
    signs.push_back(sign);
  }
  return signs;
}

namespace {

// Lexicographically least kernel basis vector of the m x |cols| matrix whose
// columns are the given vectors; empty if the columns are independent.
std::vector<Rational> kernel_direction(const std::vector<std::vector<Rational>>& vecs, const std::vector<int>& cols,
                                       int m) {
  const int c = static_cast<int>(cols.size());
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(c));
  for (int i = 0; i < m; ++i) {
    for (int q = 0; q < c; ++q) a[i][q] = vecs[cols[q]][i];
  }
  std::vector<int> pivot_col;
  int row = 0;
  for (int q = 0; q < c && row < m; ++q) {
    int p = row;
    while (p < m && sgn(a[p][q]) == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    const Rational piv = a[row][q];
    for (auto& x : a[row]) x /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == row || sgn(a[r][q]) == 0) continue;
      const Rational f = a[r][q];
      for (int t = 0; t < c; ++t) a[r][t] -= f * a[row][t];
    }
    pivot_col.push_back(q);
    ++row;
  }
  std::vector<Rational> best;
  for (int f = 0; f < c; ++f) {
    if (std::find(pivot_col.begin(), pivot_col.end(), f) != pivot_col.end()) continue;
    std::vector<Rational> d(c, Rational(0));
    d[f] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) d[pivot_col[r]] = -a[r][f];
    if (best.empty() || d < best) best = std::move(d);
  }
  return best;
}

}  // namespace

FloatingTrace color_floating_traced(const SignedVectorSequence& seq) {
  require_beck_fiala(seq);
  const int n = seq.n();
  std::vector<Rational> x(n, Rational(0));
  std::vector<int> fractional;  // indices with |x| < 1, ascending
  FloatingTrace trace;
  for (int k = 0; k < n; ++k) {
    fractional.push_back(k);
    for (;;) {
      const auto d = kernel_direction(seq.vectors, fractional, seq.m);
      if (d.empty()) break;
      // Largest step keeping every coefficient in [-1, 1].
      Rational step;
      bool have = false;
      for (std::size_t q = 0; q < fractional.size(); ++q) {
        if (sgn(d[q]) == 0) continue;
        const Rational& xq = x[fractional[q]];
        Rational room = sgn(d[q]) > 0 ? Rational((1 - xq) / d[q]) : Rational((-1 - xq) / d[q]);
        if (!have || room < step) {
          step = std::move(room);
          have = true;
        }
      }
      std::vector<int> still;
      for (std::size_t q = 0; q < fractional.size(); ++q) {
        Rational& xq = x[fractional[q]];
        xq += step * d[q];
        if (abs(xq) != 1) still.push_back(fractional[q]);
      }
      fractional = std::move(still);
    }
    trace.max_fractional = std::max(trace.max_fractional, static_cast<int>(fractional.size()));
  }
  trace.signs.resize(n);
  for (int j = 0; j < n; ++j) trace.signs[j] = sgn(x[j]) < 0 ? -1 : 1;
  return trace;
}

std::vector<int> color_floating(const SignedVectorSequence& seq) { return color_floating_traced(seq).signs; }

PairedTrace color_two_sparse_paired_traced(const SignedVectorSequence& seq) {
  validate_sequence(seq);
  const int n = seq.n(), m = seq.m;
  std::vector<int> first_dim(n, -1), second_dim(n, -1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const Rational& x = seq.vectors[j][i];
      if (sgn(x) == 0) continue;
      if (x != 1 && x != -1) {
        throw ValidationError("vector " + std::to_string(j) + " has entry " + to_string(x) + " outside {-1, 0, 1}");
      }
      if (first_dim[j] < 0) first_dim[j] = i;
      else if (second_dim[j] < 0) second_dim[j] = i;
      else throw ValidationError("vector " + std::to_string(j) + " has more than two nonzero entries");
    }
  }
  // games[p][d]: elements whose p-th nonzero entry lies in dimension d.
  std::vector<std::vector<int>> games[2];
  games[0].assign(m, {});
  games[1].assign(m, {});
  for (int j = 0; j < n; ++j) {
    if (first_dim[j] >= 0) games[0][first_dim[j]].push_back(j);
    if (second_dim[j] >= 0) games[1][second_dim[j]].push_back(j);
  }
  const std::vector<int>* dims[2] = {&first_dim, &second_dim};
  PairedTrace out;
  out.signs.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    if (first_dim[j] < 0) out.signs[j] = 1;
  }
  auto game_open = [&](const std::vector<int>& game) {
    return std::any_of(game.begin(), game.end(), [&](int j) { return out.signs[j] == 0; });
  };
  auto play_in = [&](int player, int d) {
    const auto& game = games[player][d];
    std::vector<Rational> vals;
    std::vector<int> cols;
    for (int j : game) {
      vals.push_back(seq.vectors[j][d]);
      cols.push_back(out.signs[j]);
    }
    const Move mv = maker_pairing_move(GameView{vals, cols});
    if (mv.wait) throw InvariantViolation("pairing maker passed in an open game");
    out.signs[game[mv.index]] = mv.sign;
    return game[mv.index];
  };
  int last = -1;
  int player = 0;
  while (std::count(out.signs.begin(), out.signs.end(), 0) > 0) {
    int chosen = -1;
    const int answer_dim = last >= 0 ? (*dims[player])[last] : -1;
    if (answer_dim >= 0 && game_open(games[player][answer_dim])) {
      chosen = answer_dim;
    } else {
      for (int d = 0; d < m; ++d) {
        if (game_open(games[player][d])) {
          chosen = d;
          break;
        }
      }
    }
    last = chosen >= 0 ? play_in(player, chosen) : -1;
    player = 1 - player;
  }
  for (int p = 0; p < 2; ++p) {
    for (int d = 0; d < m; ++d) {
      std::vector<Rational> vals;
      std::vector<int> cols;
      for (int j : games[p][d]) {
        vals.push_back(seq.vectors[j][d]);
        cols.push_back(out.signs[j]);
      }
      out.game_values.push_back(max_abs_prefix(vals, cols));
    }
  }
  return out;
}

std::vector<int> color_two_sparse_paired(const SignedVectorSequence& seq) {
  return color_two_sparse_paired_traced(seq).signs;
}

Colorer make_colorer(const std::string& kind) {
  if (kind == "brute") return [](const SignedVectorSequence& s) { return color_brute_force(s, DiscMode::Prefix); };
  if (kind == "greedy") return color_greedy;
  if (kind == "floating") return color_floating;
  if (kind == "paired") return color_two_sparse_paired;
  if (kind == "auto") {
    return [](const SignedVectorSequence& s) {
      if (s.n() <= kBruteForceLimit) return color_brute_force(s, DiscMode::Prefix);
      return color_floating(s);
    };
  }
  throw ValidationError("unknown colorer '" + kind + "'");
}

}  // namespace flowdisc
