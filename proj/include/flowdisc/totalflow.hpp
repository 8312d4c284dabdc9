#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "flowdisc/coloring.hpp"
#include "flowdisc/instance.hpp"
#include "flowdisc/lp.hpp"

namespace flowdisc {

/// Volumes y_ijt over unit slots [0, H). Missing keys are zero.
struct TimeIndexedSolution {
  int H = 0;
  std::map<std::tuple<int, int, int>, Rational> y;  // (machine, job, slot)

  /// Adds v to y_ijt, dropping the key when the result is zero.
  void add(int machine, int job, int slot, const Rational& v);
  Rational at(int machine, int job, int slot) const;
  /// Sum over slots of y_ijt.
  Rational total(int machine, int job) const;
};

/// k with p in (2^(k-1), 2^k]. Requires p > 0; k may be negative.
int class_index(const Rational& p);

/// Integer releases >= 0 and integer processing times >= 1 on every finite
/// entry. Throws ValidationError otherwise.
void require_integral_instance(const SchedulingInstance& inst);
/// Max release + sum over jobs of the smallest processing time.
int default_horizon(const SchedulingInstance& inst);

/// Nonnegative volumes on finite entries, slots in [r_j, H), and
/// sum_{i,t} y_ijt / p_ij = 1 per job. Throws ValidationError.
void require_time_indexed_solution(const SchedulingInstance& inst, const TimeIndexedSolution& y);

/// sum ((t - r_j)/p_ij + 1/2) y_ijt.
Rational time_indexed_cost(const SchedulingInstance& inst, const TimeIndexedSolution& y);
/// sum ((t - r_j)/2^k + 1/2) y_ijt with k the class of p_ij.
Rational auxiliary_cost(const SchedulingInstance& inst, const TimeIndexedSolution& y);

std::string slot_var(int machine, int job, int slot);

LinearProgram build_time_indexed_lp(const SchedulingInstance& inst, int H);
/// Interval constraints per machine, class, and pair of event slots
/// (releases and the horizon end) t1 < t2, over the window [t1, t2).
LinearProgram build_auxiliary_lp(const SchedulingInstance& inst, const Rational& alpha, int H);
/// Reads y_<i>_<j>_<t> variables back from an LP point.
TimeIndexedSolution solution_from_values(const LinearProgram& lp, const std::vector<Rational>& values, int H);

struct TimeIndexedLpResult {
  LpStatus status = LpStatus::Infeasible;
  TimeIndexedSolution y;
  Rational cost;
  int pivots = 0;
};

/// Solves the time-indexed LP; H defaults to default_horizon.
TimeIndexedLpResult solve_time_indexed_lp(const SchedulingInstance& inst, std::optional<int> H = std::nullopt);

struct AlphaReport {
  Rational alpha;
  // Witness window [t1, t2) on `machine` for jobs with p <= 2^cls; machine is
  // -1 when alpha is 0.
  int machine = -1;
  int cls = 0;
  int t1 = 0;
  int t2 = 0;
};

/// (sum_{j: p_ij <= 2^k} sum_{t in [t1, t2)} y_ijt - (t2 - t1)) / 2^k.
Rational window_excess(const SchedulingInstance& inst, const TimeIndexedSolution& y, int machine, int cls, int t1,
                       int t2);
/// Exact maximum of window_excess over machines, classes and windows, floored at 0.
AlphaReport measure_alpha(const SchedulingInstance& inst, const TimeIndexedSolution& y);

/// Rearranges each (machine, class) so that jobs run in `order` over time.
/// Per-slot class volumes and per-(machine, job) totals are kept.
TimeIndexedSolution normalize_consistent_order(const SchedulingInstance& inst, const TimeIndexedSolution& y,
                                               const std::vector<int>& order);
bool is_consistently_ordered(const SchedulingInstance& inst, const TimeIndexedSolution& y,
                             const std::vector<int>& order);

/// Moves each (machine, job) total to the earliest slot it uses.
TimeIndexedSolution earliest_compaction(const TimeIndexedSolution& y);

/// Pairwise transfers between machines until every per-(machine, job) total
/// is a multiple of p_ij / 2^level. Each transfer scales the two machine
/// profiles of the job and goes in the direction that does not raise the
/// auxiliary cost.
TimeIndexedSolution quantize_dyadic_time(const SchedulingInstance& inst, const TimeIndexedSolution& y, int level);

struct SplitInstance {
  SchedulingInstance instance;
  std::vector<int> origin;  // original job of each piece
  int pieces_per_job = 1;
};

/// Every job becomes 2^(h-1) pieces with p' = p / 2^(h-1) and the same release.
SplitInstance split_jobs_instance(const SchedulingInstance& inst, int h);
/// Hands each piece two half units (p'/2 each) of its job's volume, taking
/// consecutive time segments of the machine profile. Requires every
/// per-(machine, job) total to be a multiple of p_ij / 2^h.
TimeIndexedSolution split_solution(const SchedulingInstance& inst, const TimeIndexedSolution& y,
                                   const SplitInstance& split, int h);
TimeIndexedSolution merge_solution(const SplitInstance& split, const TimeIndexedSolution& pieces);

struct TotalflowHalfRound {
  TimeIndexedSolution y;        // integral: one slot per job, volume p_ij
  Rational D;                   // prefix discrepancy of the coloring
  std::vector<int> order;       // split jobs in consistent order
  SignedVectorSequence vectors; // coordinates are (machine, class) pairs
  std::vector<std::pair<int, int>> coordinates;
  bool flipped = false;         // all signs flipped because it was cheaper
  Rational alpha_in;
  Rational alpha_out;
  Rational cost_normalized;     // auxiliary costs
  Rational cost_compaction;
  Rational cost_out;
};

/// Per-(machine, job) totals must lie in {0, p/2, p}. Checks
/// alpha_out <= alpha_in + 4 D + 4 and cost_out <= cost_compaction.
TotalflowHalfRound round_half_integral_totalflow(const SchedulingInstance& inst, const TimeIndexedSolution& y,
                                                 const Colorer& colorer);

struct TotalflowLevel {
  int h = 0;
  int pieces = 0;
  int split_pieces = 0;
  Rational D;
  bool flipped = false;
  Rational alpha_before;
  Rational alpha_after;
  Rational cost_after;  // auxiliary cost on the original instance
};

struct TotalflowTrace {
  int H = 0;
  Rational lp_cost;        // time-indexed LP optimum
  Rational lp_aux_cost;    // auxiliary cost of the LP solution
  Rational alpha_lp;
  int ell = 0;
  Rational alpha_quantized;
  Rational cost_quantized;
  std::vector<TotalflowLevel> levels;
  Rational alpha_final;
  Rational alpha_bound;    // alpha_lp + 1 + sum (4 D_h + 4) / 2^(h-1)
  Rational cost_final;
};

struct TotalflowResult {
  TimeIndexedSolution y;
  TotalflowTrace trace;
};

TotalflowResult full_round_totalflow(const SchedulingInstance& inst, const Colorer& colorer,
                                     std::optional<int> H = std::nullopt);

struct ScheduleReport {
  MachineAssignment assignment;
  ScheduleMetrics metrics;  // preemptive SRPT per machine
  Rational lp_cost;         // time-indexed cost of y
  Rational aux_cost;
  Rational ratio;           // total flow / lp_cost (0 when lp_cost is 0)
  Rational alpha;
  double log2_P = 0.0;
};

/// Requires y integral: each job on one (machine, slot) with volume p_ij.
ScheduleReport schedule_from_integral(const SchedulingInstance& inst, const TimeIndexedSolution& y);

/// Unit volume in every slot a job runs in the schedule.
TimeIndexedSolution solution_from_schedule(const SchedulingInstance& inst, const ScheduleMetrics& schedule);

/// Random feasible solutions for testing: each job spread over up to three
/// machines and a few slots. Deterministic in `seed`.
TimeIndexedSolution random_time_indexed_solution(const SchedulingInstance& inst, int H, std::uint64_t seed);
/// As above, but every per-(machine, job) total lies in {0, p/2, p}.
TimeIndexedSolution random_half_integral_solution(const SchedulingInstance& inst, int H, std::uint64_t seed);

}  // namespace flowdisc
