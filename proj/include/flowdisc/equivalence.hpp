#pragma once

#include <cstdint>
#include <vector>

#include "flowdisc/coloring.hpp"
#include "flowdisc/instance.hpp"

namespace flowdisc {

/// v[i1] = p1, v[i2] = -p2, zero elsewhere.
struct TwoSparseVector {
  int i1 = 0;
  int i2 = 1;
  Rational p1;
  Rational p2;
};

/// Throws ValidationError unless i1 != i2 are machine indices and p1, p2 lie in [0, 1/2].
void require_two_sparse(const TwoSparseVector& v, int m);
std::vector<Rational> realize(const TwoSparseVector& v, int m);
/// Reads a dense vector with at most one positive and one negative entry,
/// each of magnitude <= 1/2. Missing sides take the lowest free coordinate.
TwoSparseVector two_sparse_from_dense(const std::vector<Rational>& v);
SignedVectorSequence to_sequence(const std::vector<TwoSparseVector>& vs, int m);
std::vector<TwoSparseVector> from_sequence(const SignedVectorSequence& seq);

/// m + 1 jobs per step t = 1..n: the special job (index (t-1)(m+1)) with
/// p = 2 p1 on i1 and 2 p2 on i2, then one pinned filler per machine.
SchedulingInstance vectors_to_maxflow_instance(const std::vector<TwoSparseVector>& vs, int m);
inline int special_job(int step, int m) { return step * (m + 1); }

/// eps_t = +1 iff the special job of step t sits on i1. Checks the per-step
/// identity sum_{r_j = t} x_ij p_ij - 1 = eps_t v_i^(t) on every machine.
std::vector<int> signs_from_assignment(const SchedulingInstance& inst, const std::vector<TwoSparseVector>& vs,
                                       const MachineAssignment& asg);

struct OptimalAssignment {
  MachineAssignment assignment;
  Rational max_flow;
  std::uint64_t evaluated = 0;
};

/// Enumerates every assignment to finite machines (at most `limit` of them)
/// and keeps the first with the least FIFO max flow.
OptimalAssignment optimal_max_flow_assignment(const SchedulingInstance& inst, std::uint64_t limit = 1u << 22);

struct RoundtripReport {
  Rational lp_optimum;  // assignment LP optimum T*
  Rational opt_max_flow;
  MachineAssignment assignment;
  std::vector<int> extracted_signs;
  DiscrepancyReport extracted;  // one-sided interval discrepancy
  std::vector<int> brute_signs;
  DiscrepancyReport brute;
  bool equal = false;
};

/// Builds the instance, solves it exactly both ways, and compares the
/// extracted signs with the brute-force one-sided optimum. Checks
/// extracted <= OPT - 1 and brute <= extracted.
RoundtripReport roundtrip_check(const std::vector<TwoSparseVector>& vs, int m);

/// Random V_m vectors with p1, p2 multiples of 1/(2 * denominator).
std::vector<TwoSparseVector> random_two_sparse(int n, int m, std::uint64_t seed, int denominator = 10);

}  // namespace flowdisc
