#pragma once

#include <string>
#include <vector>

#include "flowdisc/coloring.hpp"
#include "flowdisc/instance.hpp"
#include "flowdisc/lp.hpp"

namespace flowdisc {

/// x[j][i]: fraction of job j on machine i.
struct FractionalAssignment {
  std::vector<std::vector<Rational>> x;
  Rational T;
};

/// Variables x_<j>_<i> for every job and machine (upper bound 0 where
/// p_ij > T or infinite), row sums, and one interval constraint per machine
/// and pair of release times t1 <= t2.
LinearProgram build_assignment_lp(const SchedulingInstance& inst, const Rational& T);
std::string assignment_var(int job, int machine);

/// Smallest T for which x is feasible: the largest interval excess
/// load - (t2 - t1), and at least every p_ij with x_ij > 0. For an integral
/// x the interval part equals the FIFO max flow.
Rational assignment_value(const SchedulingInstance& inst, const FractionalAssignment& fa);

/// Machine loads minus window lengths; used by the exact prefix identity.
Rational interval_load(const SchedulingInstance& inst, const FractionalAssignment& fa, int machine,
                       const Rational& t1, const Rational& t2);

/// Fails with ValidationError unless rows sum to 1, entries lie in [0, 1] and
/// infinite entries are 0.
void require_fractional_assignment(const SchedulingInstance& inst, const FractionalAssignment& fa);

struct MinTResult {
  Rational T_star;
  Rational T_infeasible;  // T_star - delta, certified infeasible (or -1 if T_star - delta < 0)
  Rational resolution;    // delta
  FractionalAssignment fa;
  int lp_solves = 0;
};

/// Exact LP optimum of the assignment LP. Throws ValidationError when no
/// finite assignment exists.
MinTResult solve_min_T(const SchedulingInstance& inst);

/// Sets p_ij to infinity wherever p_ij > T.
SchedulingInstance prune_instance(const SchedulingInstance& inst, const Rational& T);

/// Pairwise minimal-margin transfers until every entry is a multiple of 1/2^level.
FractionalAssignment quantize_dyadic(const FractionalAssignment& fa, int level);

struct PairJob {
  int job = 0;
  int first = 0;   // machine indices, first <= second
  int second = 0;
};

struct PairInstance {
  SchedulingInstance instance;
  std::vector<PairJob> back_map;  // one entry per job of `instance`
  FractionalAssignment half;      // 1/2 on each pair member (1 for {i, i})
};

/// Requires every entry to be a multiple of 1/2^h, h >= 1.
PairInstance split_to_pair_instance(const SchedulingInstance& inst, const FractionalAssignment& fa, int h);
/// x_ij = (number of pieces of j placed on i) / 2^(h-1).
FractionalAssignment merge_pair_assignment(const SchedulingInstance& inst, const PairInstance& pairs,
                                           const MachineAssignment& asg, int h);

struct HalfRoundResult {
  MachineAssignment assignment;
  Rational D;                // achieved prefix discrepancy of the signed vectors
  Rational T_in;             // assignment_value of the input
  Rational T_out;            // assignment_value of the output
  std::vector<int> order;    // fractional jobs in release order
  SignedVectorSequence vectors;
};

/// Rounds a half-integral assignment through a prefix coloring; checks the
/// exact per-interval identity and T_out <= T_in + 2 D p_max.
HalfRoundResult round_half_integral_maxflow(const SchedulingInstance& inst, const FractionalAssignment& fa,
                                            const Colorer& colorer);

struct MaxflowLevel {
  int h = 0;
  Rational D;
  Rational p_max_level;  // p'_max of the split instance
  Rational T_before;
  Rational T_after;
  int split_jobs = 0;
  int fractional_jobs = 0;
  bool skipped = false;  // already a multiple of 1/2^(h-1)
};

struct RoundingTrace {
  Rational T_star;
  Rational T_infeasible;
  Rational p_max;        // after pruning
  int ell = 0;
  Rational T_quantized;
  std::vector<MaxflowLevel> levels;
  Rational T_final;
  Rational bound;        // T* + p_max + sum 2 D_h p_max / 2^(h-1)
  Rational max_flow;     // FIFO schedule of the final assignment
};

struct MaxflowResult {
  MachineAssignment assignment;
  RoundingTrace trace;
};

MaxflowResult full_round_maxflow(const SchedulingInstance& inst, const Colorer& colorer);

}  // namespace flowdisc
