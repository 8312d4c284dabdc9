#include "flowdisc/maxflow.hpp"

#include <algorithm>

#include "flowdisc/errors.hpp"

namespace flowdisc {

std::string assignment_var(int job, int machine) {
  return "x_" + std::to_string(job) + "_" + std::to_string(machine);
}

namespace {

// Jobs released at each release point, by position in release_points().
std::vector<std::vector<int>> jobs_by_release(const SchedulingInstance& inst, const std::vector<Rational>& points) {
  std::vector<std::vector<int>> out(points.size());
  for (int j = 0; j < inst.n(); ++j) {
    const auto it = std::lower_bound(points.begin(), points.end(), inst.jobs[j].release);
    out[it - points.begin()].push_back(j);
  }
  return out;
}

bool allowed(const SchedulingInstance& inst, int i, int j, const Rational& T) {
  return inst.finite(i, j) && inst.p(i, j) <= T;
}

// min T over the assignment polytope restricted to {p_ij <= cap}, with T >= cap.
LpSolution solve_threshold_lp(const SchedulingInstance& inst, const Rational& cap, std::vector<std::vector<int>>& ids) {
  LinearProgram lp;
  const int t_var = lp.add_variable("T", cap);
  lp.set_objective(t_var, 1);
  ids.assign(inst.n(), std::vector<int>(inst.m, -1));
  for (int j = 0; j < inst.n(); ++j) {
    LinearTerms row;
    for (int i = 0; i < inst.m; ++i) {
      if (!allowed(inst, i, j, cap)) continue;
      ids[j][i] = lp.add_variable(assignment_var(j, i));
      row.emplace_back(ids[j][i], 1);
    }
    lp.add_constraint(row, Relation::Equal, 1);
  }
  const auto points = inst.release_points();
  const auto by_release = jobs_by_release(inst, points);
  for (int i = 0; i < inst.m; ++i) {
    for (std::size_t a = 0; a < points.size(); ++a) {
      LinearTerms terms;
      for (std::size_t b = a; b < points.size(); ++b) {
        for (int j : by_release[b]) {
          if (ids[j][i] >= 0 && sgn(inst.p(i, j)) != 0) terms.emplace_back(ids[j][i], inst.p(i, j));
        }
        if (terms.empty()) continue;
        LinearTerms row = terms;
        row.emplace_back(t_var, -1);
        lp.add_constraint(row, Relation::LessEq, points[b] - points[a]);
      }
    }
  }
  return solve_lp(lp);
}

}  // namespace

LinearProgram build_assignment_lp(const SchedulingInstance& inst, const Rational& T) {
  if (sgn(T) < 0) throw ValidationError("assignment LP needs T >= 0");
  LinearProgram lp;
  for (int j = 0; j < inst.n(); ++j) {
    LinearTerms row;
    for (int i = 0; i < inst.m; ++i) {
      const int id = allowed(inst, i, j, T) ? lp.add_variable(assignment_var(j, i))
                                            : lp.add_variable(assignment_var(j, i), Rational(0), Rational(0));
      row.emplace_back(id, 1);
    }
    lp.add_constraint(row, Relation::Equal, 1, "assign_" + std::to_string(j));
  }
  const auto points = inst.release_points();
  const auto by_release = jobs_by_release(inst, points);
  for (int i = 0; i < inst.m; ++i) {
    for (std::size_t a = 0; a < points.size(); ++a) {
      LinearTerms terms;
      for (std::size_t b = a; b < points.size(); ++b) {
        for (int j : by_release[b]) {
          if (inst.finite(i, j)) terms.emplace_back(lp.id(assignment_var(j, i)), inst.p(i, j));
        }
        lp.add_constraint(terms, Relation::LessEq, points[b] - points[a] + T,
                          "interval_" + std::to_string(i) + "_" + points[a].get_str() + "_" + points[b].get_str());
      }
    }
  }
  return lp;
}

void require_fractional_assignment(const SchedulingInstance& inst, const FractionalAssignment& fa) {
  if (static_cast<int>(fa.x.size()) != inst.n()) throw ValidationError("fractional assignment has wrong job count");
  for (int j = 0; j < inst.n(); ++j) {
    if (static_cast<int>(fa.x[j].size()) != inst.m) {
      throw ValidationError("fractional assignment row " + std::to_string(j) + " has wrong machine count");
    }
    Rational sum = 0;
    for (int i = 0; i < inst.m; ++i) {
      const Rational& v = fa.x[j][i];
      if (sgn(v) < 0 || v > 1) throw ValidationError("fractional assignment entry outside [0, 1]");
      if (sgn(v) != 0 && !inst.finite(i, j)) {
        throw ValidationError("job " + std::to_string(j) + " placed on a machine where it cannot run");
      }
      sum += v;
    }
    if (sum != 1) throw ValidationError("row " + std::to_string(j) + " of the fractional assignment sums to " +
                                        to_string(sum));
  }
}

Rational interval_load(const SchedulingInstance& inst, const FractionalAssignment& fa, int machine,
                       const Rational& t1, const Rational& t2) {
  Rational load = 0;
  for (int j = 0; j < inst.n(); ++j) {
    const Rational& r = inst.jobs[j].release;
    if (r < t1 || r > t2 || sgn(fa.x[j][machine]) == 0) continue;
    load += fa.x[j][machine] * inst.p(machine, j);
  }
  return load;
}

Rational assignment_value(const SchedulingInstance& inst, const FractionalAssignment& fa) {
  require_fractional_assignment(inst, fa);
  Rational best = 0;
  for (int j = 0; j < inst.n(); ++j) {
    for (int i = 0; i < inst.m; ++i) {
      if (sgn(fa.x[j][i]) > 0 && inst.p(i, j) > best) best = inst.p(i, j);
    }
  }
  const auto points = inst.release_points();
  const auto by_release = jobs_by_release(inst, points);
  for (int i = 0; i < inst.m; ++i) {
    std::vector<Rational> prefix(points.size() + 1, Rational(0));
    for (std::size_t a = 0; a < points.size(); ++a) {
      prefix[a + 1] = prefix[a];
      for (int j : by_release[a]) {
        if (sgn(fa.x[j][i]) != 0) prefix[a + 1] += fa.x[j][i] * inst.p(i, j);
      }
    }
    for (std::size_t a = 0; a < points.size(); ++a) {
      for (std::size_t b = a; b < points.size(); ++b) {
        Rational excess = prefix[b + 1] - prefix[a] - (points[b] - points[a]);
        if (excess > best) best = std::move(excess);
      }
    }
  }
  return best;
}

MinTResult solve_min_T(const SchedulingInstance& inst) {
  require_valid(inst);
  MinTResult out;
  if (inst.n() == 0) {
    out.T_star = 0;
    out.T_infeasible = -1;
    out.resolution = 1;
    return out;
  }
  std::vector<Rational> caps;
  std::vector<Rational> denominators;
  for (int j = 0; j < inst.n(); ++j) {
    denominators.push_back(inst.jobs[j].release);
    for (int i = 0; i < inst.m; ++i) {
      if (!inst.finite(i, j)) continue;
      caps.push_back(inst.p(i, j));
      denominators.push_back(inst.p(i, j));
    }
  }
  std::sort(caps.begin(), caps.end());
  caps.erase(std::unique(caps.begin(), caps.end()), caps.end());
  bool found = false;
  for (const auto& cap : caps) {
    // Each threshold LP has optimum >= cap, so later thresholds cannot win.
    if (found && out.T_star <= cap) break;
    std::vector<std::vector<int>> ids;
    const LpSolution sol = solve_threshold_lp(inst, cap, ids);
    ++out.lp_solves;
    if (sol.status != LpStatus::Optimal) continue;
    if (found && sol.values[0] >= out.T_star) continue;
    found = true;
    out.T_star = sol.values[0];
    out.fa.x.assign(inst.n(), std::vector<Rational>(inst.m, Rational(0)));
    for (int j = 0; j < inst.n(); ++j) {
      for (int i = 0; i < inst.m; ++i) {
        if (ids[j][i] >= 0) out.fa.x[j][i] = sol.values[ids[j][i]];
      }
    }
  }
  if (!found) throw ValidationError("instance has no feasible fractional assignment");
  out.fa.T = out.T_star;

  // Certificate: the returned point is feasible at T*, and the LP is
  // infeasible one resolution step below.
  const LinearProgram at_star = build_assignment_lp(inst, out.T_star);
  std::vector<Rational> point(at_star.num_variables());
  for (int j = 0; j < inst.n(); ++j) {
    for (int i = 0; i < inst.m; ++i) point[at_star.id(assignment_var(j, i))] = out.fa.x[j][i];
  }
  if (!check_point(at_star, point).empty()) throw InvariantViolation("min-T solution violates the LP at T*");
  out.resolution = Rational(1) / (mpz_class(inst.n()) * lcm_of_denominators(denominators));
  out.T_infeasible = out.T_star - out.resolution;
  if (sgn(out.T_infeasible) >= 0) {
    ++out.lp_solves;
    if (solve_lp(build_assignment_lp(inst, out.T_infeasible)).status != LpStatus::Infeasible) {
      throw InvariantViolation("assignment LP feasible below the computed optimum");
    }
  } else {
    out.T_infeasible = -1;
  }
  return out;
}

SchedulingInstance prune_instance(const SchedulingInstance& inst, const Rational& T) {
  SchedulingInstance out = inst;
  for (auto& job : out.jobs) {
    for (auto& p : job.proc) {
      if (p && *p > T) p.reset();
    }
  }
  return out;
}

FractionalAssignment quantize_dyadic(const FractionalAssignment& fa, int level) {
  FractionalAssignment out = fa;
  const Rational unit = pow2(-level);
  for (auto& row : out.x) {
    for (;;) {
      std::vector<int> open;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (!is_dyadic_multiple(row[i], level)) open.push_back(static_cast<int>(i));
      }
      if (open.empty()) break;
      if (open.size() == 1) throw InvariantViolation("row sum is not a multiple of the quantization unit");
      Rational& a = row[open[0]];
      Rational& b = row[open[1]];
      const Rational a_down = a - floor_to_dyadic(a, level), a_up = unit - a_down;
      const Rational b_down = b - floor_to_dyadic(b, level), b_up = unit - b_down;
      const Rational raise_a = std::min(a_up, b_down);
      const Rational lower_a = std::min(a_down, b_up);
      if (raise_a <= lower_a) {
        a += raise_a;
        b -= raise_a;
      } else {
        a -= lower_a;
        b += lower_a;
      }
    }
  }
  return out;
}

PairInstance split_to_pair_instance(const SchedulingInstance& inst, const FractionalAssignment& fa, int h) {
  if (h < 1) throw ValidationError("pair splitting needs h >= 1");
  require_fractional_assignment(inst, fa);
  PairInstance out;
  out.instance.m = inst.m;
  const Rational scale = pow2(h - 1);
  const long slots_total = 1L << h;
  for (int j = 0; j < inst.n(); ++j) {
    std::vector<int> slots;
    for (int i = 0; i < inst.m; ++i) {
      const Rational count = fa.x[j][i] * pow2(h);
      if (!is_integer(count)) {
        throw ValidationError("entry x[" + std::to_string(j) + "][" + std::to_string(i) + "] = " +
                              to_string(fa.x[j][i]) + " is not a multiple of 1/2^" + std::to_string(h));
      }
      for (long c = 0; c < count.get_num().get_si(); ++c) slots.push_back(i);
    }
    for (long a = 0; a < slots_total / 2; ++a) {
      const int i1 = slots[a], i2 = slots[slots_total - 1 - a];
      Job piece;
      piece.release = inst.jobs[j].release;
      piece.proc.assign(inst.m, std::nullopt);
      piece.proc[i1] = inst.p(i1, j) / scale;
      piece.proc[i2] = inst.p(i2, j) / scale;
      out.instance.jobs.push_back(std::move(piece));
      out.back_map.push_back({j, i1, i2});
      std::vector<Rational> row(inst.m, Rational(0));
      if (i1 == i2) {
        row[i1] = 1;
      } else {
        row[i1] = Rational(1, 2);
        row[i2] = Rational(1, 2);
      }
      out.half.x.push_back(std::move(row));
    }
  }
  out.half.T = fa.T;
  return out;
}

FractionalAssignment merge_pair_assignment(const SchedulingInstance& inst, const PairInstance& pairs,
                                           const MachineAssignment& asg, int h) {
  FractionalAssignment out;
  out.x.assign(inst.n(), std::vector<Rational>(inst.m, Rational(0)));
  const Rational piece = pow2(-(h - 1));
  for (std::size_t k = 0; k < pairs.back_map.size(); ++k) {
    const auto& pj = pairs.back_map[k];
    const int i = asg.assign[k];
    if (i != pj.first && i != pj.second) throw InvariantViolation("piece assigned outside its pair");
    out.x[pj.job][i] += piece;
  }
  return out;
}

HalfRoundResult round_half_integral_maxflow(const SchedulingInstance& inst, const FractionalAssignment& fa,
                                            const Colorer& colorer) {
  require_fractional_assignment(inst, fa);
  HalfRoundResult out;
  out.assignment.assign.assign(inst.n(), -1);
  std::vector<std::pair<int, int>> halves(inst.n(), {-1, -1});
  for (int j = 0; j < inst.n(); ++j) {
    std::vector<int> half_machines;
    for (int i = 0; i < inst.m; ++i) {
      const Rational& v = fa.x[j][i];
      if (v == 1) out.assignment.assign[j] = i;
      else if (v == Rational(1, 2)) half_machines.push_back(i);
      else if (sgn(v) != 0) throw ValidationError("row " + std::to_string(j) + " is not half-integral");
    }
    if (out.assignment.assign[j] < 0) {
      if (half_machines.size() != 2) throw ValidationError("row " + std::to_string(j) + " is not half-integral");
      halves[j] = {half_machines[0], half_machines[1]};
      out.order.push_back(j);
    }
  }
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](int a, int b) { return inst.jobs[a].release < inst.jobs[b].release; });
  const Rational p_max = inst.p_max();
  const Rational scale = sgn(p_max) > 0 ? Rational(1 / (2 * p_max)) : Rational(0);
  out.vectors.m = inst.m;
  for (int j : out.order) {
    std::vector<Rational> v(inst.m, Rational(0));
    v[halves[j].first] = inst.p(halves[j].first, j) * scale;
    v[halves[j].second] = -inst.p(halves[j].second, j) * scale;
    out.vectors.vectors.push_back(std::move(v));
  }
  std::vector<int> signs = out.order.empty() ? std::vector<int>{} : colorer(out.vectors);
  if (signs.size() != out.order.size()) throw InvariantViolation("colorer returned the wrong number of signs");
  out.vectors.signs = signs;
  out.D = out.order.empty() ? Rational(0) : discrepancy(out.vectors, signs, DiscMode::Prefix).value;
  for (std::size_t k = 0; k < out.order.size(); ++k) {
    const int j = out.order[k];
    out.assignment.assign[j] = signs[k] > 0 ? halves[j].first : halves[j].second;
  }

  FractionalAssignment integral;
  integral.x.assign(inst.n(), std::vector<Rational>(inst.m, Rational(0)));
  for (int j = 0; j < inst.n(); ++j) integral.x[j][out.assignment.assign[j]] = 1;
  out.T_in = assignment_value(inst, fa);
  out.T_out = assignment_value(inst, integral);

  // Exact identity: load change on [t1, t2] equals p_max times a difference
  // of two prefix sums of the signed vectors.
  const auto points = inst.release_points();
  std::vector<std::vector<Rational>> prefix(out.order.size() + 1, std::vector<Rational>(inst.m, Rational(0)));
  for (std::size_t k = 0; k < out.order.size(); ++k) {
    for (int i = 0; i < inst.m; ++i) prefix[k + 1][i] = prefix[k][i] + signs[k] * out.vectors.vectors[k][i];
  }
  auto count_released = [&](const Rational& t, bool inclusive) {
    std::size_t c = 0;
    while (c < out.order.size() &&
           (inclusive ? inst.jobs[out.order[c]].release <= t : inst.jobs[out.order[c]].release < t)) {
      ++c;
    }
    return c;
  };
  for (int i = 0; i < inst.m; ++i) {
    for (std::size_t a = 0; a < points.size(); ++a) {
      const std::size_t below = count_released(points[a], false);
      for (std::size_t b = a; b < points.size(); ++b) {
        const std::size_t upto = count_released(points[b], true);
        const Rational lhs = interval_load(inst, integral, i, points[a], points[b]) -
                             interval_load(inst, fa, i, points[a], points[b]);
        if (lhs != p_max * (prefix[upto][i] - prefix[below][i])) {
          throw InvariantViolation("half-integral rounding broke the prefix identity");
        }
      }
    }
  }
  if (out.T_out > out.T_in + 2 * out.D * p_max) {
    throw InvariantViolation("half-integral rounding exceeded T + 2 D p_max");
  }
  return out;
}

MaxflowResult full_round_maxflow(const SchedulingInstance& inst, const Colorer& colorer) {
  require_valid(inst);
  MaxflowResult out;
  auto& tr = out.trace;
  const MinTResult min_t = solve_min_T(inst);
  tr.T_star = min_t.T_star;
  tr.T_infeasible = min_t.T_infeasible;
  const SchedulingInstance pruned = prune_instance(inst, min_t.T_star);
  tr.p_max = pruned.p_max();
  if (tr.p_max > tr.T_star) throw InvariantViolation("p_max exceeds T* after pruning");
  tr.ell = inst.n() <= 1 ? 0 : ceil_log2(Rational(inst.n()));

  FractionalAssignment x = quantize_dyadic(min_t.fa, tr.ell);
  tr.T_quantized = assignment_value(pruned, x);
  if (tr.T_quantized > tr.T_star + tr.p_max) throw InvariantViolation("quantization raised T by more than p_max");
  Rational T = tr.T_quantized;
  tr.bound = tr.T_star + tr.p_max;
  for (int h = tr.ell; h >= 1; --h) {
    MaxflowLevel level;
    level.h = h;
    level.T_before = T;
    bool coarse = true;
    for (const auto& row : x.x) {
      for (const auto& v : row) coarse = coarse && is_dyadic_multiple(v, h - 1);
    }
    if (coarse) {
      level.skipped = true;
      level.D = 0;
      level.T_after = T;
      tr.levels.push_back(std::move(level));
      continue;
    }
    const PairInstance pairs = split_to_pair_instance(pruned, x, h);
    const HalfRoundResult half = round_half_integral_maxflow(pairs.instance, pairs.half, colorer);
    x = merge_pair_assignment(pruned, pairs, half.assignment, h);
    level.D = half.D;
    level.p_max_level = pairs.instance.p_max();
    level.split_jobs = pairs.instance.n();
    level.fractional_jobs = static_cast<int>(half.order.size());
    level.T_after = assignment_value(pruned, x);
    if (level.T_after > level.T_before + 2 * level.D * level.p_max_level) {
      throw InvariantViolation("level " + std::to_string(h) + " exceeded T + 2 D p'_max");
    }
    tr.bound += 2 * level.D * tr.p_max / pow2(h - 1);
    T = level.T_after;
    tr.levels.push_back(std::move(level));
  }
  out.assignment.assign.assign(inst.n(), -1);
  for (int j = 0; j < inst.n(); ++j) {
    for (int i = 0; i < inst.m; ++i) {
      if (x.x[j][i] == 1) out.assignment.assign[j] = i;
    }
    if (out.assignment.assign[j] < 0) throw InvariantViolation("rounding ended with a fractional row");
  }
  tr.T_final = T;
  tr.max_flow = evaluate_max_flow(inst, out.assignment).max_flow;
  if (tr.max_flow > tr.T_final) throw InvariantViolation("FIFO max flow exceeds the final LP value");
  if (tr.T_final > tr.bound) throw InvariantViolation("final value exceeds the telescoped bound");
  return out;
}

}  // namespace flowdisc
