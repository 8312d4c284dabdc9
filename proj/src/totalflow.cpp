#include "flowdisc/totalflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "flowdisc/errors.hpp"
#include "flowdisc/rng.hpp"

namespace flowdisc {

void TimeIndexedSolution::add(int machine, int job, int slot, const Rational& v) {
  if (sgn(v) == 0) return;
  const auto key = std::make_tuple(machine, job, slot);
  auto it = y.find(key);
  if (it == y.end()) {
    y.emplace(key, v);
    return;
  }
  it->second += v;
  if (sgn(it->second) == 0) y.erase(it);
}

Rational TimeIndexedSolution::at(int machine, int job, int slot) const {
  auto it = y.find({machine, job, slot});
  return it == y.end() ? Rational(0) : it->second;
}

Rational TimeIndexedSolution::total(int machine, int job) const {
  Rational sum = 0;
  for (auto it = y.lower_bound({machine, job, std::numeric_limits<int>::min()});
       it != y.end() && std::get<0>(it->first) == machine && std::get<1>(it->first) == job; ++it) {
    sum += it->second;
  }
  return sum;
}

int class_index(const Rational& p) {
  if (sgn(p) <= 0) throw ValidationError("job classes need positive processing times");
  return ceil_log2(p);
}

namespace {

int to_int(const Rational& q, const char* what) {
  if (!is_integer(q) || !q.get_num().fits_sint_p()) throw ValidationError(std::string(what) + " must be integers");
  return static_cast<int>(q.get_num().get_si());
}

int first_slot(const Rational& release) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), release.get_num_mpz_t(), release.get_den_mpz_t());
  return static_cast<int>(r.get_si());
}

// Profile of one (machine, job) as (slot, volume) pairs in slot order.
using Profile = std::vector<std::pair<int, Rational>>;

std::map<std::pair<int, int>, Profile> profiles(const TimeIndexedSolution& y) {
  std::map<std::pair<int, int>, Profile> out;
  for (const auto& [key, v] : y.y) {
    out[{std::get<0>(key), std::get<1>(key)}].emplace_back(std::get<2>(key), v);
  }
  return out;
}

// Volume between cumulative positions lo and hi of a profile.
Profile segment(const Profile& prof, const Rational& lo, const Rational& hi) {
  Profile out;
  Rational start = 0;
  for (const auto& [t, v] : prof) {
    const Rational end = start + v;
    const Rational a = std::max(start, lo), b = std::min(end, hi);
    if (a < b) out.emplace_back(t, b - a);
    start = end;
    if (start >= hi) break;
  }
  return out;
}

Rational aux_coefficient(const SchedulingInstance& inst, int i, int j, int t) {
  return (Rational(t) - inst.jobs[j].release) / pow2(class_index(inst.p(i, j))) + Rational(1, 2);
}

std::vector<int> classes_on(const SchedulingInstance& inst, int i) {
  std::set<int> ks;
  for (int j = 0; j < inst.n(); ++j) {
    if (inst.finite(i, j) && sgn(inst.p(i, j)) > 0) ks.insert(class_index(inst.p(i, j)));
  }
  return {ks.begin(), ks.end()};
}

void require_release_order(const SchedulingInstance& inst, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != inst.n()) throw ValidationError("job order has the wrong length");
  std::vector<char> seen(inst.n(), 0);
  for (std::size_t a = 0; a < order.size(); ++a) {
    if (order[a] < 0 || order[a] >= inst.n() || seen[order[a]]) throw ValidationError("job order is not a permutation");
    seen[order[a]] = 1;
    if (a > 0 && inst.jobs[order[a - 1]].release > inst.jobs[order[a]].release) {
      throw ValidationError("job order does not respect release times");
    }
  }
}

}  // namespace

void require_integral_instance(const SchedulingInstance& inst) {
  require_valid(inst);
  for (int j = 0; j < inst.n(); ++j) {
    to_int(inst.jobs[j].release, "release times");
    for (int i = 0; i < inst.m; ++i) {
      if (!inst.finite(i, j)) continue;
      if (to_int(inst.p(i, j), "processing times") < 1) {
        throw ValidationError("total flow time needs processing times >= 1");
      }
    }
  }
}

int default_horizon(const SchedulingInstance& inst) {
  require_integral_instance(inst);
  Rational max_release = 0, sum = 0;
  for (int j = 0; j < inst.n(); ++j) {
    max_release = std::max(max_release, inst.jobs[j].release);
    std::optional<Rational> best;
    for (int i = 0; i < inst.m; ++i) {
      if (inst.finite(i, j) && (!best || inst.p(i, j) < *best)) best = inst.p(i, j);
    }
    sum += *best;
  }
  return to_int(max_release + sum, "horizon");
}

void require_time_indexed_solution(const SchedulingInstance& inst, const TimeIndexedSolution& y) {
  std::vector<Rational> done(inst.n(), Rational(0));
  for (const auto& [key, v] : y.y) {
    const auto [i, j, t] = key;
    if (i < 0 || i >= inst.m || j < 0 || j >= inst.n()) throw ValidationError("solution entry out of range");
    if (t < 0 || t >= y.H) throw ValidationError("solution uses slot " + std::to_string(t) + " outside the horizon");
    if (sgn(v) < 0) throw ValidationError("solution has a negative volume");
    if (!inst.finite(i, j)) throw ValidationError("job " + std::to_string(j) + " runs on a forbidden machine");
    if (Rational(t) < inst.jobs[j].release) {
      throw ValidationError("job " + std::to_string(j) + " runs before its release");
    }
    done[j] += v / inst.p(i, j);
  }
  for (int j = 0; j < inst.n(); ++j) {
    if (done[j] != 1) {
      throw ValidationError("job " + std::to_string(j) + " is processed to fraction " + to_string(done[j]));
    }
  }
}

Rational time_indexed_cost(const SchedulingInstance& inst, const TimeIndexedSolution& y) {
  Rational cost = 0;
  for (const auto& [key, v] : y.y) {
    const auto [i, j, t] = key;
    cost += ((Rational(t) - inst.jobs[j].release) / inst.p(i, j) + Rational(1, 2)) * v;
  }
  return cost;
}

Rational auxiliary_cost(const SchedulingInstance& inst, const TimeIndexedSolution& y) {
  Rational cost = 0;
  for (const auto& [key, v] : y.y) {
    const auto [i, j, t] = key;
    cost += aux_coefficient(inst, i, j, t) * v;
  }
  return cost;
}

std::string slot_var(int machine, int job, int slot) {
  return "y_" + std::to_string(machine) + "_" + std::to_string(job) + "_" + std::to_string(slot);
}

namespace {

// Variables, objective and completion rows shared by both LPs.
LinearProgram base_lp(const SchedulingInstance& inst, int H, bool grouped) {
  require_integral_instance(inst);
  LinearProgram lp;
  for (int j = 0; j < inst.n(); ++j) {
    LinearTerms row;
    for (int i = 0; i < inst.m; ++i) {
      if (!inst.finite(i, j)) continue;
      for (int t = first_slot(inst.jobs[j].release); t < H; ++t) {
        const int id = lp.add_variable(slot_var(i, j, t));
        const Rational wait = Rational(t) - inst.jobs[j].release;
        const Rational denom = grouped ? pow2(class_index(inst.p(i, j))) : inst.p(i, j);
        lp.set_objective(id, wait / denom + Rational(1, 2));
        row.emplace_back(id, 1 / inst.p(i, j));
      }
    }
    if (row.empty()) throw ValidationError("horizon " + std::to_string(H) + " leaves job " + std::to_string(j) +
                                           " no slot");
    lp.add_constraint(row, Relation::Equal, 1, "complete_" + std::to_string(j));
  }
  return lp;
}

}  // namespace

LinearProgram build_time_indexed_lp(const SchedulingInstance& inst, int H) {
  LinearProgram lp = base_lp(inst, H, false);
  for (int i = 0; i < inst.m; ++i) {
    for (int t = 0; t < H; ++t) {
      LinearTerms row;
      for (int j = 0; j < inst.n(); ++j) {
        if (lp.has_variable(slot_var(i, j, t))) row.emplace_back(lp.id(slot_var(i, j, t)), 1);
      }
      if (!row.empty()) {
        lp.add_constraint(row, Relation::LessEq, 1, "capacity_" + std::to_string(i) + "_" + std::to_string(t));
      }
    }
  }
  return lp;
}

LinearProgram build_auxiliary_lp(const SchedulingInstance& inst, const Rational& alpha, int H) {
  if (sgn(alpha) < 0) throw ValidationError("alpha must be nonnegative");
  LinearProgram lp = base_lp(inst, H, true);
  std::set<int> event_set{0, H};
  for (const auto& job : inst.jobs) {
    const int r = first_slot(job.release);
    if (r < H) event_set.insert(r);
  }
  const std::vector<int> events(event_set.begin(), event_set.end());
  for (int i = 0; i < inst.m; ++i) {
    for (int k : classes_on(inst, i)) {
      for (std::size_t a = 0; a < events.size(); ++a) {
        for (std::size_t b = a + 1; b < events.size(); ++b) {
          LinearTerms row;
          for (int j = 0; j < inst.n(); ++j) {
            if (!inst.finite(i, j) || inst.p(i, j) > pow2(k)) continue;
            for (int t = events[a]; t < events[b]; ++t) {
              if (lp.has_variable(slot_var(i, j, t))) row.emplace_back(lp.id(slot_var(i, j, t)), 1);
            }
          }
          if (row.empty()) continue;
          lp.add_constraint(row, Relation::LessEq, Rational(events[b] - events[a]) + alpha * pow2(k),
                            "window_" + std::to_string(i) + "_" + std::to_string(k) + "_" +
                                std::to_string(events[a]) + "_" + std::to_string(events[b]));
        }
      }
    }
  }
  return lp;
}

TimeIndexedSolution solution_from_values(const LinearProgram& lp, const std::vector<Rational>& values, int H) {
  TimeIndexedSolution out;
  out.H = H;
  for (int id = 0; id < lp.num_variables(); ++id) {
    int i = 0, j = 0, t = 0;
    if (std::sscanf(lp.variables()[id].name.c_str(), "y_%d_%d_%d", &i, &j, &t) != 3) continue;
    out.add(i, j, t, values[id]);
  }
  return out;
}

TimeIndexedLpResult solve_time_indexed_lp(const SchedulingInstance& inst, std::optional<int> H) {
  const int horizon = H ? *H : default_horizon(inst);
  const LinearProgram lp = build_time_indexed_lp(inst, horizon);
  const LpSolution sol = solve_lp(lp);
  TimeIndexedLpResult out;
  out.status = sol.status;
  out.pivots = sol.pivots;
  out.y.H = horizon;
  if (sol.status != LpStatus::Optimal) return out;
  out.y = solution_from_values(lp, sol.values, horizon);
  out.cost = sol.objective_value;
  return out;
}

Rational window_excess(const SchedulingInstance& inst, const TimeIndexedSolution& y, int machine, int cls, int t1,
                       int t2) {
  Rational load = 0;
  for (const auto& [key, v] : y.y) {
    const auto [i, j, t] = key;
    if (i == machine && t >= t1 && t < t2 && inst.p(i, j) <= pow2(cls)) load += v;
  }
  return (load - Rational(t2 - t1)) / pow2(cls);
}

AlphaReport measure_alpha(const SchedulingInstance& inst, const TimeIndexedSolution& y) {
  AlphaReport best;
  best.alpha = 0;
  int H = y.H;
  for (const auto& [key, v] : y.y) H = std::max(H, std::get<2>(key) + 1);
  for (int i = 0; i < inst.m; ++i) {
    for (int k : classes_on(inst, i)) {
      std::vector<Rational> load(H, Rational(0));
      bool any = false;
      for (const auto& [key, v] : y.y) {
        const auto [mi, j, t] = key;
        if (mi == i && inst.p(i, j) <= pow2(k)) {
          load[t] += v;
          any = true;
        }
      }
      if (!any) continue;
      // Maximum-sum window of load - 1.
      Rational run = 0;
      int start = 0;
      for (int t = 0; t < H; ++t) {
        if (sgn(run) <= 0) {
          run = 0;
          start = t;
        }
        run += load[t] - 1;
        if (sgn(run) > 0) {
          const Rational a = run / pow2(k);
          if (a > best.alpha) best = {a, i, k, start, t + 1};
        }
      }
    }
  }
  return best;
}

TimeIndexedSolution normalize_consistent_order(const SchedulingInstance& inst, const TimeIndexedSolution& y,
                                               const std::vector<int>& order) {
  require_release_order(inst, order);
  std::vector<int> pos(inst.n());
  for (std::size_t a = 0; a < order.size(); ++a) pos[order[a]] = static_cast<int>(a);
  TimeIndexedSolution out;
  out.H = y.H;
  const auto prof = profiles(y);
  for (int i = 0; i < inst.m; ++i) {
    for (int k : classes_on(inst, i)) {
      std::vector<int> jobs;
      std::map<int, Rational> aggregate;
      for (int j = 0; j < inst.n(); ++j) {
        if (!inst.finite(i, j) || sgn(inst.p(i, j)) <= 0 || class_index(inst.p(i, j)) != k) continue;
        auto it = prof.find({i, j});
        if (it == prof.end()) continue;
        jobs.push_back(j);
        for (const auto& [t, v] : it->second) aggregate[t] += v;
      }
      std::sort(jobs.begin(), jobs.end(), [&](int a, int b) { return pos[a] < pos[b]; });
      auto slot = aggregate.begin();
      Rational left_in_slot = slot == aggregate.end() ? Rational(0) : slot->second;
      for (int j : jobs) {
        Rational need = y.total(i, j);
        while (sgn(need) > 0) {
          if (slot == aggregate.end()) throw InvariantViolation("normalization ran out of volume");
          const Rational take = std::min(need, left_in_slot);
          if (Rational(slot->first) < inst.jobs[j].release) {
            throw InvariantViolation("normalization moved a job before its release");
          }
          out.add(i, j, slot->first, take);
          need -= take;
          left_in_slot -= take;
          if (sgn(left_in_slot) == 0 && ++slot != aggregate.end()) left_in_slot = slot->second;
        }
      }
    }
  }
  return out;
}

bool is_consistently_ordered(const SchedulingInstance& inst, const TimeIndexedSolution& y,
                             const std::vector<int>& order) {
  require_release_order(inst, order);
  std::vector<int> pos(inst.n());
  for (std::size_t a = 0; a < order.size(); ++a) pos[order[a]] = static_cast<int>(a);
  const auto prof = profiles(y);
  for (const auto& [a_key, a_prof] : prof) {
    for (const auto& [b_key, b_prof] : prof) {
      const auto [i, j] = a_key;
      const auto [i2, j2] = b_key;
      if (i != i2 || j == j2 || pos[j2] >= pos[j]) continue;
      if (class_index(inst.p(i, j)) != class_index(inst.p(i, j2))) continue;
      // j2 comes first in the order, so j must not run strictly before j2 does.
      if (a_prof.front().first < b_prof.back().first) return false;
    }
  }
  return true;
}

TimeIndexedSolution earliest_compaction(const TimeIndexedSolution& y) {
  TimeIndexedSolution out;
  out.H = y.H;
  for (const auto& [key, prof] : profiles(y)) {
    Rational sum = 0;
    for (const auto& [t, v] : prof) sum += v;
    out.add(key.first, key.second, prof.front().first, sum);
  }
  return out;
}

TimeIndexedSolution quantize_dyadic_time(const SchedulingInstance& inst, const TimeIndexedSolution& y, int level) {
  require_time_indexed_solution(inst, y);
  if (level < 0) throw ValidationError("quantization level must be nonnegative");
  const Rational unit = pow2(-level);
  const auto prof = profiles(y);
  TimeIndexedSolution out;
  out.H = y.H;
  for (int j = 0; j < inst.n(); ++j) {
    std::vector<int> machines;
    std::vector<Rational> frac, rate;
    for (int i = 0; i < inst.m; ++i) {
      auto it = prof.find({i, j});
      if (it == prof.end()) continue;
      Rational volume = 0, cost = 0;
      for (const auto& [t, v] : it->second) {
        volume += v;
        cost += aux_coefficient(inst, i, j, t) * v;
      }
      machines.push_back(i);
      frac.push_back(volume / inst.p(i, j));
      // Cost per unit of job fraction; unchanged by scaling the profile.
      rate.push_back(cost / frac.back());
    }
    std::vector<Rational> target = frac;
    for (;;) {
      std::vector<std::size_t> open;
      for (std::size_t a = 0; a < target.size(); ++a) {
        if (!is_dyadic_multiple(target[a], level)) open.push_back(a);
      }
      if (open.empty()) break;
      if (open.size() == 1) throw InvariantViolation("job fractions do not sum to a multiple of the unit");
      const std::size_t a = open[0], b = open[1];
      const Rational a_down = target[a] - floor_to_dyadic(target[a], level), a_up = unit - a_down;
      const Rational b_down = target[b] - floor_to_dyadic(target[b], level), b_up = unit - b_down;
      if (rate[a] <= rate[b]) {
        const Rational d = std::min(a_up, b_down);
        target[a] += d;
        target[b] -= d;
      } else {
        const Rational d = std::min(a_down, b_up);
        target[a] -= d;
        target[b] += d;
      }
    }
    for (std::size_t a = 0; a < machines.size(); ++a) {
      const Rational scale = target[a] / frac[a];
      for (const auto& [t, v] : prof.at({machines[a], j})) out.add(machines[a], j, t, v * scale);
    }
  }
  return out;
}

SplitInstance split_jobs_instance(const SchedulingInstance& inst, int h) {
  if (h < 1 || h > 30) throw ValidationError("split level must lie in [1, 30]");
  SplitInstance out;
  out.instance.m = inst.m;
  out.pieces_per_job = 1 << (h - 1);
  const Rational scale = pow2(h - 1);
  for (int j = 0; j < inst.n(); ++j) {
    Job piece;
    piece.release = inst.jobs[j].release;
    for (const auto& p : inst.jobs[j].proc) piece.proc.push_back(p ? ProcTime(*p / scale) : std::nullopt);
    for (int a = 0; a < out.pieces_per_job; ++a) {
      out.instance.jobs.push_back(piece);
      out.origin.push_back(j);
    }
  }
  return out;
}

TimeIndexedSolution split_solution(const SchedulingInstance& inst, const TimeIndexedSolution& y,
                                   const SplitInstance& split, int h) {
  require_time_indexed_solution(inst, y);
  const int halves = 2 * split.pieces_per_job;
  if (halves != (1 << h)) throw ValidationError("split instance does not match level h");
  const auto prof = profiles(y);
  TimeIndexedSolution out;
  out.H = y.H;
  for (int j = 0; j < inst.n(); ++j) {
    // Half units in machine order: (machine, index of the half unit on it).
    std::vector<std::pair<int, int>> units;
    for (int i = 0; i < inst.m; ++i) {
      if (!prof.count({i, j})) continue;
      const Rational count = y.total(i, j) / inst.p(i, j) * pow2(h);
      if (!is_integer(count)) {
        throw ValidationError("total of job " + std::to_string(j) + " on machine " + std::to_string(i) +
                              " is not a multiple of p/2^" + std::to_string(h));
      }
      for (long u = 0; u < count.get_num().get_si(); ++u) units.emplace_back(i, static_cast<int>(u));
    }
    for (int a = 0; a < split.pieces_per_job; ++a) {
      const int piece = j * split.pieces_per_job + a;
      for (const auto& [i, u] : {units[a], units[halves - 1 - a]}) {
        const Rational q = inst.p(i, j) / pow2(h);
        for (const auto& [t, v] : segment(prof.at({i, j}), q * u, q * (u + 1))) out.add(i, piece, t, v);
      }
    }
  }
  return out;
}

TimeIndexedSolution merge_solution(const SplitInstance& split, const TimeIndexedSolution& pieces) {
  TimeIndexedSolution out;
  out.H = pieces.H;
  for (const auto& [key, v] : pieces.y) {
    out.add(std::get<0>(key), split.origin[std::get<1>(key)], std::get<2>(key), v);
  }
  return out;
}

TotalflowHalfRound round_half_integral_totalflow(const SchedulingInstance& inst, const TimeIndexedSolution& y,
                                                 const Colorer& colorer) {
  require_time_indexed_solution(inst, y);
  TotalflowHalfRound out;
  const std::vector<int> order = inst.release_order();
  const TimeIndexedSolution normalized = normalize_consistent_order(inst, y, order);

  // Per job: the whole machine, or the two half machines (first < second).
  std::vector<int> whole(inst.n(), -1);
  std::vector<std::pair<int, int>> halves(inst.n(), {-1, -1});
  for (int j = 0; j < inst.n(); ++j) {
    std::vector<int> half_machines;
    for (int i = 0; i < inst.m; ++i) {
      if (!inst.finite(i, j)) continue;
      const Rational share = y.total(i, j) / inst.p(i, j);
      if (share == 1) whole[j] = i;
      else if (share == Rational(1, 2)) half_machines.push_back(i);
      else if (sgn(share) != 0) throw ValidationError("job " + std::to_string(j) + " is not half-integral");
    }
    if (whole[j] < 0) {
      if (half_machines.size() != 2) throw ValidationError("job " + std::to_string(j) + " is not half-integral");
      halves[j] = {half_machines[0], half_machines[1]};
    }
  }

  std::map<std::pair<int, int>, int> coordinate;
  for (int i = 0; i < inst.m; ++i) {
    for (int k : classes_on(inst, i)) coordinate.emplace(std::make_pair(i, k), 0);
  }
  for (auto& [key, idx] : coordinate) {
    idx = static_cast<int>(out.coordinates.size());
    out.coordinates.push_back(key);
  }
  out.vectors.m = static_cast<int>(out.coordinates.size());
  for (int j : order) {
    if (whole[j] >= 0) continue;
    out.order.push_back(j);
    std::vector<Rational> v(out.vectors.m, Rational(0));
    const auto [i1, i2] = halves[j];
    const int k1 = class_index(inst.p(i1, j)), k2 = class_index(inst.p(i2, j));
    v[coordinate.at({i1, k1})] = inst.p(i1, j) / pow2(k1 + 1);
    v[coordinate.at({i2, k2})] = -inst.p(i2, j) / pow2(k2 + 1);
    out.vectors.vectors.push_back(std::move(v));
  }
  std::vector<int> signs = out.order.empty() ? std::vector<int>{} : colorer(out.vectors);
  if (signs.size() != out.order.size()) throw InvariantViolation("colorer returned the wrong number of signs");
  out.vectors.signs = signs;
  out.D = out.order.empty() ? Rational(0) : discrepancy(out.vectors, signs, DiscMode::Prefix).value;

  const TimeIndexedSolution compact = earliest_compaction(normalized);
  std::vector<int> to_machine(inst.n());
  for (int j = 0; j < inst.n(); ++j) to_machine[j] = whole[j];
  auto build = [&](int flip) {
    for (std::size_t a = 0; a < out.order.size(); ++a) {
      const int j = out.order[a];
      to_machine[j] = signs[a] * flip > 0 ? halves[j].first : halves[j].second;
    }
    TimeIndexedSolution sol;
    sol.H = y.H;
    for (const auto& [key, v] : compact.y) {
      const auto [i, j, t] = key;
      if (to_machine[j] == i) sol.add(i, j, t, inst.p(i, j));
    }
    return sol;
  };
  const TimeIndexedSolution plus = build(1), minus = build(-1);

  // The compaction is exactly the average of the two candidates.
  TimeIndexedSolution average;
  average.H = y.H;
  for (const auto& [key, v] : plus.y) average.add(std::get<0>(key), std::get<1>(key), std::get<2>(key), v / 2);
  for (const auto& [key, v] : minus.y) average.add(std::get<0>(key), std::get<1>(key), std::get<2>(key), v / 2);
  if (average.y != compact.y) throw InvariantViolation("compaction is not the average of the two roundings");

  out.cost_normalized = auxiliary_cost(inst, normalized);
  out.cost_compaction = auxiliary_cost(inst, compact);
  const Rational cost_plus = auxiliary_cost(inst, plus), cost_minus = auxiliary_cost(inst, minus);
  out.flipped = cost_minus < cost_plus;
  out.y = out.flipped ? minus : plus;
  out.cost_out = out.flipped ? cost_minus : cost_plus;
  out.alpha_in = measure_alpha(inst, y).alpha;
  out.alpha_out = measure_alpha(inst, out.y).alpha;
  if (out.cost_compaction > out.cost_normalized) throw InvariantViolation("earliest-time compaction raised the cost");
  if (out.cost_out > out.cost_compaction) throw InvariantViolation("rounding is costlier than the compaction");
  if (out.alpha_out > out.alpha_in + 4 * out.D + 4) {
    throw InvariantViolation("half-integral rounding exceeded alpha + 4 D + 4");
  }
  return out;
}

TotalflowResult full_round_totalflow(const SchedulingInstance& inst, const Colorer& colorer, std::optional<int> H) {
  require_integral_instance(inst);
  TotalflowResult out;
  auto& tr = out.trace;
  const TimeIndexedLpResult lp = solve_time_indexed_lp(inst, H);
  tr.H = lp.y.H;
  if (lp.status != LpStatus::Optimal) {
    throw ValidationError("time-indexed LP is " + std::string(to_string(lp.status)) + " for horizon " +
                          std::to_string(tr.H));
  }
  tr.lp_cost = lp.cost;
  tr.lp_aux_cost = auxiliary_cost(inst, lp.y);
  tr.alpha_lp = measure_alpha(inst, lp.y).alpha;
  if (sgn(tr.alpha_lp) != 0) throw InvariantViolation("time-indexed LP solution is not 0-relaxed");
  if (tr.lp_aux_cost > tr.lp_cost) throw InvariantViolation("auxiliary cost exceeds the time-indexed cost");

  tr.ell = inst.n() <= 1 ? 0 : ceil_log2(Rational(inst.n()));
  TimeIndexedSolution y = quantize_dyadic_time(inst, lp.y, tr.ell);
  tr.alpha_quantized = measure_alpha(inst, y).alpha;
  tr.cost_quantized = auxiliary_cost(inst, y);
  if (tr.alpha_quantized > tr.alpha_lp + 1) throw InvariantViolation("quantization exceeded alpha + 1");
  tr.alpha_bound = tr.alpha_lp + 1;

  Rational alpha = tr.alpha_quantized;
  for (int h = std::max(tr.ell, 1); h >= 1; --h) {
    TotalflowLevel level;
    level.h = h;
    level.alpha_before = alpha;
    const SplitInstance split = split_jobs_instance(inst, h);
    const TimeIndexedSolution pieces = split_solution(inst, y, split, h);
    const TotalflowHalfRound rounded = round_half_integral_totalflow(split.instance, pieces, colorer);
    y = merge_solution(split, rounded.y);
    level.pieces = split.instance.n();
    level.split_pieces = static_cast<int>(rounded.order.size());
    level.D = rounded.D;
    level.flipped = rounded.flipped;
    alpha = measure_alpha(inst, y).alpha;
    level.alpha_after = alpha;
    level.cost_after = auxiliary_cost(inst, y);
    const Rational step = (4 * rounded.D + 4) / pow2(h - 1);
    if (level.alpha_after > level.alpha_before + step) {
      throw InvariantViolation("level " + std::to_string(h) + " exceeded its alpha budget");
    }
    tr.alpha_bound += step;
    tr.levels.push_back(level);
  }
  tr.alpha_final = alpha;
  if (tr.alpha_final > tr.alpha_bound) throw InvariantViolation("final alpha exceeds the telescoped bound");
  tr.cost_final = auxiliary_cost(inst, y);
  out.y = std::move(y);
  return out;
}

ScheduleReport schedule_from_integral(const SchedulingInstance& inst, const TimeIndexedSolution& y) {
  require_integral_instance(inst);
  require_time_indexed_solution(inst, y);
  ScheduleReport out;
  out.assignment.assign.assign(inst.n(), -1);
  for (const auto& [key, v] : y.y) {
    const auto [i, j, t] = key;
    if (out.assignment.assign[j] >= 0 || v != inst.p(i, j)) {
      throw ValidationError("solution is not integral at job " + std::to_string(j));
    }
    out.assignment.assign[j] = i;
  }
  out.metrics = evaluate_total_flow_srpt(inst, out.assignment);
  out.lp_cost = time_indexed_cost(inst, y);
  out.aux_cost = auxiliary_cost(inst, y);
  out.ratio = sgn(out.lp_cost) > 0 ? Rational(out.metrics.total_flow / out.lp_cost) : Rational(0);
  out.alpha = measure_alpha(inst, y).alpha;
  out.log2_P = inst.n() > 0 ? std::log2(to_double(inst.ratio_P())) : 0.0;
  return out;
}

TimeIndexedSolution solution_from_schedule(const SchedulingInstance& inst, const ScheduleMetrics& schedule) {
  TimeIndexedSolution out;
  out.H = inst.n() > 0 ? default_horizon(inst) : 0;
  for (const auto& seg : schedule.timeline) {
    const int a = to_int(seg.start, "schedule times"), b = to_int(seg.end, "schedule times");
    for (int t = a; t < b; ++t) out.add(seg.machine, seg.job, t, 1);
    out.H = std::max(out.H, b);
  }
  return out;
}

namespace {

Rational ratio(std::int64_t a, std::int64_t b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

// Spreads `volume` of job j on machine i over one to three random slots.
void spread(TimeIndexedSolution& out, Rng& rng, int i, int j, int r, const Rational& volume) {
  const int count = static_cast<int>(rng.uniform_int(1, 3));
  std::vector<std::int64_t> weights(count);
  std::int64_t sum = 0;
  for (auto& w : weights) sum += (w = rng.uniform_int(1, 3));
  for (int a = 0; a < count; ++a) {
    const int t = static_cast<int>(rng.uniform_int(r, out.H - 1));
    out.add(i, j, t, volume * ratio(weights[a], sum));
  }
}

TimeIndexedSolution random_solution(const SchedulingInstance& inst, int H, std::uint64_t seed, bool half) {
  require_integral_instance(inst);
  TimeIndexedSolution out;
  out.H = H;
  Rng rng(seed, half ? "half-solution-gen" : "solution-gen");
  for (int j = 0; j < inst.n(); ++j) {
    const int r = first_slot(inst.jobs[j].release);
    if (r >= H) throw ValidationError("horizon ends before job " + std::to_string(j) + " is released");
    std::vector<int> machines;
    for (int i = 0; i < inst.m; ++i) {
      if (inst.finite(i, j)) machines.push_back(i);
    }
    std::shuffle(machines.begin(), machines.end(), rng.engine());
    const int limit = std::min<int>(half ? 2 : 3, static_cast<int>(machines.size()));
    const int used = static_cast<int>(rng.uniform_int(1, limit));
    machines.resize(used);
    std::vector<Rational> share(used);
    if (half) {
      for (auto& s : share) s = ratio(1, used);
    } else {
      std::vector<std::int64_t> w(used);
      std::int64_t sum = 0;
      for (auto& x : w) sum += (x = rng.uniform_int(1, 4));
      for (int a = 0; a < used; ++a) share[a] = ratio(w[a], sum);
    }
    for (int a = 0; a < used; ++a) {
      spread(out, rng, machines[a], j, r, share[a] * inst.p(machines[a], j));
    }
  }
  return out;
}

}  // namespace

TimeIndexedSolution random_time_indexed_solution(const SchedulingInstance& inst, int H, std::uint64_t seed) {
  return random_solution(inst, H, seed, false);
}

TimeIndexedSolution random_half_integral_solution(const SchedulingInstance& inst, int H, std::uint64_t seed) {
  return random_solution(inst, H, seed, true);
}

}  // namespace flowdisc
