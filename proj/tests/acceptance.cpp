// Acceptance suite: one PASS/FAIL line per criterion. Every check recomputes
// its quantities with the small direct oracles below instead of trusting the
// library's own reports.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "flowdisc/equivalence.hpp"
#include "flowdisc/errors.hpp"
#include "flowdisc/game.hpp"
#include "flowdisc/maxflow.hpp"
#include "flowdisc/rng.hpp"
#include "flowdisc/sdp.hpp"
#include "flowdisc/totalflow.hpp"

using namespace flowdisc;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

int draw(Rng& rng, int lo, int hi) { return static_cast<int>(rng.uniform_int(lo, hi)); }

// ---------------------------------------------------------------- oracles

Rational naive_disc(const SignedVectorSequence& seq, const std::vector<int>& signs, DiscMode mode) {
  bool have = false;
  Rational best = 0;
  for (int i = 0; i < seq.m; ++i) {
    for (int a = 0; a < seq.n(); ++a) {
      if (mode == DiscMode::Prefix && a != 0) break;
      Rational sum = 0;
      for (int b = a; b < seq.n(); ++b) {
        sum += signs[b] * seq.vectors[b][i];
        Rational val = mode == DiscMode::OneSidedInterval ? sum : abs(sum);
        if (!have || val > best) best = val;
        have = true;
      }
    }
  }
  return best;
}

// Lexicographically least optimum, +1 before -1, by binary counting.
std::vector<int> enumerate_optimum(const SignedVectorSequence& seq, DiscMode mode) {
  const int n = seq.n();
  std::vector<int> best;
  Rational best_value;
  for (unsigned long code = 0; code < (1UL << n); ++code) {
    std::vector<int> signs(n, 1);
    for (int t = 0; t < n; ++t) {
      if (code >> (n - 1 - t) & 1UL) signs[t] = -1;
    }
    const Rational v = naive_disc(seq, signs, mode);
    if (best.empty() || v < best_value) {
      best = signs;
      best_value = v;
    }
  }
  return best;
}

Rational optimum_value(const SignedVectorSequence& seq, DiscMode mode) {
  if (seq.n() == 0) return 0;
  return naive_disc(seq, enumerate_optimum(seq, mode), mode);
}

// Release order (ties by index), non-preemptive, per machine.
Rational fifo_max_flow(const SchedulingInstance& inst, const std::vector<int>& assign) {
  Rational worst = 0;
  for (int i = 0; i < inst.m; ++i) {
    std::vector<int> jobs;
    for (int j = 0; j < inst.n(); ++j) {
      if (assign[j] == i) jobs.push_back(j);
    }
    std::stable_sort(jobs.begin(), jobs.end(),
                     [&](int a, int b) { return inst.jobs[a].release < inst.jobs[b].release; });
    Rational clock = 0;
    for (int j : jobs) {
      clock = std::max(clock, inst.jobs[j].release) + inst.p(i, j);
      worst = std::max(worst, Rational(clock - inst.jobs[j].release));
    }
  }
  return worst;
}

// Unit-slot SRPT with integer data; ties by index.
Rational srpt_total_flow(const SchedulingInstance& inst, const std::vector<int>& assign) {
  Rational total = 0;
  for (int i = 0; i < inst.m; ++i) {
    std::vector<int> jobs;
    std::vector<long> left;
    for (int j = 0; j < inst.n(); ++j) {
      if (assign[j] == i) {
        jobs.push_back(j);
        left.push_back(inst.p(i, j).get_num().get_si());
      }
    }
    std::size_t done = 0;
    for (long t = 0; done < jobs.size(); ++t) {
      int pick = -1;
      for (std::size_t a = 0; a < jobs.size(); ++a) {
        if (left[a] == 0 || inst.jobs[jobs[a]].release > t) continue;
        if (pick < 0 || left[a] < left[pick]) pick = static_cast<int>(a);
      }
      if (pick < 0) continue;
      if (--left[pick] == 0) {
        ++done;
        total += Rational(t + 1) - inst.jobs[jobs[pick]].release;
      }
    }
  }
  return total;
}

// Calls visit on every assignment of jobs to finite machines.
void for_each_assignment(const SchedulingInstance& inst, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> assign(inst.n(), 0);
  std::function<void(int)> rec = [&](int j) {
    if (j == inst.n()) {
      visit(assign);
      return;
    }
    for (int i = 0; i < inst.m; ++i) {
      if (!inst.finite(i, j)) continue;
      assign[j] = i;
      rec(j + 1);
    }
  };
  rec(0);
}

int class_of(const Rational& p) {
  int k = 0;
  while (pow2(k) < p) ++k;
  while (k > -64 && pow2(k - 1) >= p) --k;
  return k;
}

// Every machine, class and window [t1, t2) with 0 <= t1 < t2 <= H, floored at 0.
Rational naive_alpha(const SchedulingInstance& inst, const TimeIndexedSolution& y) {
  Rational best = 0;
  for (int i = 0; i < inst.m; ++i) {
    std::set<int> classes;
    for (int j = 0; j < inst.n(); ++j) {
      if (inst.finite(i, j)) classes.insert(class_of(inst.p(i, j)));
    }
    for (int k : classes) {
      std::vector<Rational> slot(y.H, Rational(0));
      for (const auto& [key, v] : y.y) {
        const auto [mi, j, t] = key;
        if (mi == i && class_of(inst.p(i, j)) <= k) slot[t] += v;
      }
      for (int t1 = 0; t1 < y.H; ++t1) {
        Rational sum = 0;
        for (int t2 = t1 + 1; t2 <= y.H; ++t2) {
          sum += slot[t2 - 1];
          best = std::max(best, Rational((sum - (t2 - t1)) / pow2(k)));
        }
      }
    }
  }
  return best;
}

Rational naive_aux_cost(const SchedulingInstance& inst, const TimeIndexedSolution& y) {
  Rational cost = 0;
  for (const auto& [key, v] : y.y) {
    const auto [i, j, t] = key;
    cost += (Rational(t - inst.jobs[j].release) / pow2(class_of(inst.p(i, j))) + q(1, 2)) * v;
  }
  return cost;
}

std::map<std::pair<int, int>, Rational> per_pair_totals(const TimeIndexedSolution& y) {
  std::map<std::pair<int, int>, Rational> out;
  for (const auto& [key, v] : y.y) out[{std::get<0>(key), std::get<1>(key)}] += v;
  return out;
}

Rational max_abs_prefix_in_order(const std::vector<Rational>& values, const std::vector<int>& signs,
                                 const std::vector<int>& order) {
  Rational sum = 0, best = 0;
  for (int e : order) {
    sum += signs[e] * values[e];
    best = std::max(best, Rational(abs(sum)));
  }
  return best;
}

// ---------------------------------------------------------------- harness

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

SchedulingInstance random_instance(Rng& rng, int n_lo, int n_hi, int m_lo, int m_hi, int p_hi, int r_hi) {
  RandomInstanceParams p;
  p.n = draw(rng, n_lo, n_hi);
  p.m = draw(rng, m_lo, m_hi);
  p.p_lo = 1;
  p.p_hi = p_hi;
  p.r_lo = 0;
  p.r_hi = r_hi;
  p.infinity_prob = 0.15;
  p.seed = rng.next();
  return gen_random_instance(p);
}

// ---------------------------------------------------------------- criteria

void criterion1(Outcome& out) {
  Rng rng(101, "instance-gen");
  int checked = 0;
  Rational worst_slack;
  bool first = true;
  for (int run = 0; run < 25; ++run) {
    const auto inst = random_instance(rng, 4, 10, 2, 4, 6, 8);
    const auto lp = solve_min_T(inst);
    const auto pruned = prune_instance(inst, lp.T_star);
    const auto half = quantize_dyadic(lp.fa, 1);
    const Rational T = assignment_value(pruned, half);
    const auto res = round_half_integral_maxflow(pruned, half, make_colorer("brute"));
    const Rational D = optimum_value(res.vectors, DiscMode::Prefix);
    out.require(res.D == D, "reported D differs from the exhaustive optimum on run " + std::to_string(run));
    const Rational p_max = pruned.p_max();
    const Rational flow = fifo_max_flow(pruned, res.assignment.assign);
    const Rational slack = T + 2 * D * p_max - flow;
    out.require(slack >= 0, "max flow above T + 2 D p_max on run " + std::to_string(run));
    if (first || slack < worst_slack) worst_slack = slack;
    first = false;
    ++checked;
  }
  out.note << checked << " instances, least slack " << to_string(worst_slack);
}

void criterion2(Outcome& out) {
  Rng rng(101, "instance-gen");
  Rational least_slack;
  bool first = true;
  for (int run = 0; run < 25; ++run) {
    const auto inst = random_instance(rng, 4, 10, 2, 4, 6, 8);
    const auto res = full_round_maxflow(inst, make_colorer("auto"));
    const auto& tr = res.trace;
    Rational bound = tr.T_star + tr.p_max;
    for (const auto& level : tr.levels) bound += 2 * level.D * tr.p_max / pow2(level.h - 1);
    const Rational flow = fifo_max_flow(inst, res.assignment.assign);
    out.require(tr.T_final <= bound, "T_final above the telescoped bound on run " + std::to_string(run));
    out.require(flow <= tr.T_final, "FIFO max flow above T_final on run " + std::to_string(run));
    if (first || bound - tr.T_final < least_slack) least_slack = bound - tr.T_final;
    first = false;
  }
  SchedulingInstance base;
  base.m = 2;
  for (int p : {2, 1, 1}) base.jobs.push_back({Rational(0), {Rational(p), Rational(p)}});
  std::vector<Rational> errors;
  for (int t : {2, 4, 8}) {
    const auto inst = gen_periodic_instance(base, t, q(2));
    const auto res = full_round_maxflow(inst, make_colorer("auto"));
    const auto& tr = res.trace;
    Rational bound = tr.T_star + tr.p_max;
    for (const auto& level : tr.levels) bound += 2 * level.D * tr.p_max / pow2(level.h - 1);
    out.require(tr.T_final <= bound, "periodic instance above the bound for t=" + std::to_string(t));
    errors.push_back(fifo_max_flow(inst, res.assignment.assign) - tr.T_star);
  }
  const bool monotone = errors[1] <= errors[0] && errors[2] <= errors[1];
  out.note << "25 instances, least slack " << to_string(least_slack) << "; periodic additive error t=2,4,8: "
           << to_string(errors[0]) << ", " << to_string(errors[1]) << ", " << to_string(errors[2])
           << (monotone ? " (non-increasing)" : " (not monotone)");
}

void criterion3(Outcome& out) {
  Rng rng(303, "instance-gen");
  int count = 0;
  for (int run = 0; run < 30; ++run) {
    const auto inst = random_instance(rng, 2, 7, 1, 3, 4, 5);
    Rational best_max, best_total;
    bool have = false;
    for_each_assignment(inst, [&](const std::vector<int>& a) {
      const Rational mf = fifo_max_flow(inst, a);
      const Rational tf = srpt_total_flow(inst, a);
      if (!have || mf < best_max) best_max = mf;
      if (!have || tf < best_total) best_total = tf;
      have = true;
    });
    const auto lp = solve_min_T(inst);
    out.require(lp.T_star <= best_max, "T* above the integral optimum on run " + std::to_string(run));
    const auto ti = solve_time_indexed_lp(inst);
    out.require(ti.status == LpStatus::Optimal, "time-indexed LP not solved on run " + std::to_string(run));
    out.require(ti.cost <= best_total, "time-indexed LP above the SRPT optimum on run " + std::to_string(run));
    ++count;
  }
  out.note << count << " instances, all assignments enumerated";
}

void criterion4(Outcome& out) {
  Rng rng(404, "solution-gen");
  for (int run = 0; run < 25; ++run) {
    const auto inst = random_instance(rng, 3, 8, 1, 3, 8, 5);
    const int H = 14;
    const auto y = random_time_indexed_solution(inst, H, rng.next());
    const auto z = normalize_consistent_order(inst, y, inst.release_order());
    const std::string tag = " on run " + std::to_string(run);
    out.require(naive_aux_cost(inst, z) == naive_aux_cost(inst, y), "auxiliary cost changed" + tag);
    out.require(per_pair_totals(z) == per_pair_totals(y), "per-(i,j) totals changed" + tag);
    out.require(naive_alpha(inst, z) == naive_alpha(inst, y), "alpha changed" + tag);
  }
  out.note << "25 solutions";
}

void criterion5(Outcome& out) {
  Rng rng(505, "half-solution-gen");
  Rational least_alpha_slack, least_cost_slack;
  bool first = true;
  for (int run = 0; run < 25; ++run) {
    const auto inst = random_instance(rng, 3, 10, 2, 4, 8, 5);
    const auto y = random_half_integral_solution(inst, 14, rng.next());
    const auto res = round_half_integral_totalflow(inst, y, make_colorer("brute"));
    const Rational D = optimum_value(res.vectors, DiscMode::Prefix);
    const std::string tag = " on run " + std::to_string(run);
    out.require(res.D == D, "reported D differs from the exhaustive optimum" + tag);
    const Rational alpha_in = naive_alpha(inst, y);
    const Rational alpha_out = naive_alpha(inst, res.y);
    const Rational compaction = naive_aux_cost(inst, earliest_compaction(normalize_consistent_order(inst, y, inst.release_order())));
    const Rational cost_out = naive_aux_cost(inst, res.y);
    out.require(alpha_out <= alpha_in + 4 * D + 4, "alpha_out above alpha_in + 4D + 4" + tag);
    out.require(cost_out <= compaction, "auxiliary cost above the compaction" + tag);
    const Rational sa = alpha_in + 4 * D + 4 - alpha_out, sc = compaction - cost_out;
    if (first || sa < least_alpha_slack) least_alpha_slack = sa;
    if (first || sc < least_cost_slack) least_cost_slack = sc;
    first = false;
  }
  out.note << "25 solutions, least alpha slack " << to_string(least_alpha_slack) << ", least cost slack "
           << to_string(least_cost_slack);
}

void criterion6(Outcome& out) {
  int count = 0;
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto vs = random_two_sparse(n, 2, seed * 7 + n);
      const auto inst = vectors_to_maxflow_instance(vs, 2);
      const std::string tag = " for n=" + std::to_string(n) + " seed " + std::to_string(seed);
      out.require(solve_min_T(inst).T_star == 1, "assignment LP optimum is not 1" + tag);
      std::vector<int> best;
      Rational opt;
      for_each_assignment(inst, [&](const std::vector<int>& a) {
        const Rational mf = fifo_max_flow(inst, a);
        if (best.empty() || mf < opt) {
          best = a;
          opt = mf;
        }
      });
      const auto signs = signs_from_assignment(inst, vs, MachineAssignment{best});
      const Rational value = naive_disc(to_sequence(vs, 2), signs, DiscMode::OneSidedInterval);
      out.require(value <= opt, "one-sided discrepancy above OPT" + tag);
      ++count;
    }
  }
  out.note << count << " sequences, every assignment enumerated";
}

void criterion7(Outcome& out) {
  Rational worst = 0;
  int games = 0;
  for (int n = 1; n <= 10; ++n) {
    const std::vector<Rational> ones(n, Rational(1));
    for (Player starter : {Player::Maker, Player::Breaker}) {
      for (bool waits : {false, true}) {
        GameOptions opt;
        opt.starter = starter;
        opt.breaker_may_wait = waits;
        const Rational v = exhaustive_breaker_value(ones, maker_pairing_move, opt);
        out.require(v <= 4, "breaker value above 4 at n=" + std::to_string(n));
        worst = std::max(worst, v);
        ++games;
      }
    }
  }
  out.note << games << " exhaustive game values, largest " << to_string(worst);
}

void criterion8(Outcome& out) {
  Rng rng(808, "instance-gen");
  Rational worst_paired = 0, worst_perm = 0;
  for (int run = 0; run < 100; ++run) {
    const int n = draw(rng, 1, 24);
    SignedVectorSequence seq;
    seq.m = draw(rng, 2, 4);
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> v(seq.m, Rational(0));
      const int nonzeros = draw(rng, 0, 2);
      for (int c = 0; c < nonzeros; ++c) v[draw(rng, 0, seq.m - 1)] = rng.bernoulli(0.5) ? 1 : -1;
      seq.vectors.push_back(v);
    }
    const Rational paired = naive_disc(seq, color_two_sparse_paired(seq), DiscMode::Prefix);
    out.require(paired <= 8, "paired colorer above 8 on run " + std::to_string(run));
    worst_paired = std::max(worst_paired, paired);

    std::vector<Rational> values;
    for (int j = 0; j < n; ++j) values.push_back(static_cast<long>(rng.uniform_int(-1, 1)));
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    for (int j = n - 1; j > 0; --j) std::swap(sigma[j], sigma[draw(rng, 0, j)]);
    const auto two = color_two_permutation(values, sigma);
    std::vector<int> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    const Rational a = max_abs_prefix_in_order(values, two.signs, identity);
    const Rational b = max_abs_prefix_in_order(values, two.signs, sigma);
    out.require(a <= 4 && b <= 4, "two-permutation colorer above 4 on run " + std::to_string(run));
    worst_perm = std::max({worst_perm, a, b});
  }
  out.note << "100 inputs, worst paired " << to_string(worst_paired) << ", worst two-permutation "
           << to_string(worst_perm);
}

void criterion9(Outcome& out) {
  std::map<std::string, std::vector<Rational>> payoffs;
  int checks = 0;
  for (int k : {2, 4, 6}) {
    for (const char* maker_kind : {"pairing-signed", "greedy"}) {
      std::shared_ptr<TreeBreaker> tb;
      auto breaker = make_tree_breaker(k, &tb);
      auto maker = make_maker(maker_kind);
      std::string broken;
      // The maker is asked to move right after each breaker move, so the
      // structure is checked here on the state the breaker left behind. Once
      // the breaker switches to holding its best prefix there is no structure.
      Strategy watched = [&](const GameView& view) {
        if (tb && !tb->maintenance()) {
          const std::string problem = tb->check_structure(view);
          if (!problem.empty() && broken.empty()) broken = problem;
          ++checks;
        }
        return maker(view);
      };
      const auto res = play_game(breaker_hard_instance(k), watched, breaker);
      out.require(broken.empty(), "structure broken for k=" + std::to_string(k) + ": " + broken);
      payoffs[maker_kind].push_back(res.payoff);
    }
  }
  // An interfering maker colors -1 inside the structure whenever it can,
  // which drives the merge case; otherwise it moves at random.
  int merges = 0;
  for (int k : {4, 6}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::shared_ptr<TreeBreaker> tb;
      auto breaker = make_tree_breaker(k, &tb);
      auto fallback = make_random_breaker(stream_seed(909 + seed, "tournament"));
      std::string broken;
      Strategy interfering = [&](const GameView& view) {
        if (tb && !tb->maintenance() && !tb->indices().empty()) {
          const std::string problem = tb->check_structure(view);
          if (!problem.empty() && broken.empty()) broken = problem;
          ++checks;
          const auto& idx = tb->indices();
          for (int e = idx[1] + 1; e < idx.back(); ++e) {
            if (view.colors[e] == 0) return Move::color(e, -1);
          }
        }
        return fallback(view);
      };
      play_game(breaker_hard_instance(k), interfering, breaker);
      out.require(broken.empty(), "structure broken against an interfering maker for k=" + std::to_string(k) + ": " +
                                      broken);
      merges += tb->case1_moves();
    }
  }
  for (const auto& [name, p] : payoffs) {
    out.require(p[0] <= p[1] && p[1] <= p[2], std::string("payoff decreases in k against ") + name);
    out.note << name << " payoffs k=2,4,6: " << to_string(p[0]) << ", " << to_string(p[1]) << ", "
             << to_string(p[2]) << "; ";
  }
  out.note << checks << " structure checks, " << merges << " merge moves against interfering makers";
}

void criterion10(Outcome& out) {
  Rng rng(1010, "instance-gen");
  const Rational delta = q(1, 2);
  const Rational limit = (1 + delta) * (1 + delta);
  int inside = 0;
  for (int run = 0; run < 20; ++run) {
    const int n = draw(rng, 1, 3), m = draw(rng, 1, 2), r = draw(rng, 1, 4);
    SignedVectorSequence seq;
    seq.m = m;
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> v(m);
      Rational norm = 0;
      for (auto& x : v) {
        x = q(draw(rng, -4, 4), 4);
        norm += x * x;
      }
      if (norm > 1) {
        for (auto& x : v) x /= 2;
      }
      seq.vectors.push_back(v);
    }
    std::vector<int> signs;
    for (int k = 0; k < n * r; ++k) signs.push_back(rng.bernoulli(0.5) ? 1 : -1);

    // SDP side: max over rows and prefixes of (1/r) sum_l (sum_j v_ij s_jl)^2.
    Rational sdp = 0;
    for (int i = 0; i < m; ++i) {
      std::vector<Rational> acc(r, Rational(0));
      for (int j = 0; j < n; ++j) {
        Rational sq = 0;
        for (int l = 0; l < r; ++l) {
          acc[l] += seq.vectors[j][i] * signs[j * r + l];
          sq += acc[l] * acc[l];
        }
        sdp = std::max(sdp, Rational(sq / r));
      }
    }
    // Body side: every block-end prefix of the block instance inside K.
    bool in_k = true;
    std::vector<Rational> point(m * r, Rational(0));
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < r; ++l) {
        for (int i = 0; i < m; ++i) point[i * r + l] += signs[j * r + l] * seq.vectors[j][i];
      }
      for (int i = 0; i < m; ++i) {
        Rational block = 0;
        for (int l = 0; l < r; ++l) block += point[i * r + l] * point[i * r + l];
        if (block > limit * r) in_k = false;
      }
    }
    const auto blocks = build_block_instance(seq, r);
    const std::string tag = " on run " + std::to_string(run);
    out.require(in_k == (sdp <= limit), "identity fails" + tag);
    out.require(block_prefixes_in_K(blocks, signs, delta, true) == in_k, "library membership differs" + tag);
    out.require(sdp_prefix_discrepancy(seq, signs_to_sdp_vectors(signs, r)).squared == sdp,
                "library SDP discrepancy differs" + tag);
    inside += in_k;
  }
  const int r = choose_r(0.5, 4, 2);
  const auto mc = gaussian_measure_mc(r, 0.5, 4, 2, 100000, stream_seed(1010, "mc"));
  out.require(mc.within, "Monte-Carlo tail above target + 3 sigma");
  char buf[160];
  std::snprintf(buf, sizeof buf, "r=%d: tail %llu/%llu = %.6f <= %.6f + %.6f", r,
                static_cast<unsigned long long>(mc.exceed), static_cast<unsigned long long>(mc.samples), mc.fraction,
                mc.target, mc.slack);
  out.note << "20 colorings (" << inside << " inside K); " << buf;
}

void criterion11(Outcome& out) {
  Rng rng(1111, "instance-gen");
  int compared = 0;
  for (DiscMode mode : {DiscMode::Prefix, DiscMode::Interval, DiscMode::OneSidedInterval}) {
    for (int run = 0; run < 10; ++run) {
      SignedVectorSequence seq;
      seq.m = draw(rng, 1, 3);
      const int n = draw(rng, 1, 12);
      for (int j = 0; j < n; ++j) {
        std::vector<Rational> v(seq.m);
        for (auto& x : v) x = q(draw(rng, -6, 6), 6);
        seq.vectors.push_back(v);
      }
      const auto brute = color_brute_force(seq, mode);
      const auto oracle = enumerate_optimum(seq, mode);
      out.require(brute == oracle, std::string("brute force differs in mode ") + to_string(mode));
      ++compared;
    }
  }
  Rational worst_ratio = 0;
  for (int run = 0; run < 60; ++run) {
    SignedVectorSequence seq;
    seq.m = draw(rng, 1, 4);
    const int n = draw(rng, 1, 40);
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> v(seq.m);
      Rational l1 = 0;
      for (auto& x : v) {
        x = q(draw(rng, -6, 6), 6);
        l1 += abs(x);
      }
      if (l1 > 1) {
        for (auto& x : v) x /= l1;
      }
      seq.vectors.push_back(v);
    }
    const Rational d = naive_disc(seq, color_floating(seq), DiscMode::Prefix);
    out.require(d <= 2 * seq.m, "floating colorer above 2m on run " + std::to_string(run));
    worst_ratio = std::max(worst_ratio, Rational(d / (2 * seq.m)));
  }
  out.note << compared << " brute-force comparisons; 60 floating runs, largest D/(2m) " << to_string(worst_ratio);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"half-integral max-flow rounding: max flow <= T + 2 D p_max", criterion1},
      {"full max-flow rounding: T_final <= T* + p_max + sum 2 D_h p_max / 2^(h-1)", criterion2},
      {"LP lower bounds: T* <= OPT max flow, time-indexed LP <= OPT SRPT total flow", criterion3},
      {"consistent order keeps cost, totals and alpha", criterion4},
      {"half-integral total-flow rounding: alpha_out <= alpha_in + 4D + 4, cost <= compaction", criterion5},
      {"equivalence: LP optimum 1, one-sided discrepancy <= OPT", criterion6},
      {"pairing maker holds the breaker to 4 on all-ones inputs", criterion7},
      {"paired colorer <= 8, two-permutation colorer <= 4", criterion8},
      {"tree breaker structure holds; payoffs non-decreasing in k", criterion9},
      {"SDP identity and Gaussian tail", criterion10},
      {"brute force matches the enumerator; floating colorer <= 2m", criterion11},
  };
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[c].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.note << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char time_buf[32];
    std::snprintf(time_buf, sizeof time_buf, "%.1fs", secs);
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c + 1 << ": " << criteria[c].first << " | "
              << out.note.str() << " (" << time_buf << ")" << std::endl;
    failed += !out.pass;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
