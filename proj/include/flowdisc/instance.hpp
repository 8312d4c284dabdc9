#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowdisc/rational.hpp"

namespace flowdisc {

/// Processing time of a job on one machine; std::nullopt means the job
/// cannot run there.
using ProcTime = std::optional<Rational>;

struct Job {
  Rational release;
  std::vector<ProcTime> proc;  // one entry per machine
};

/// Unrelated-machines instance. The position of a job in `jobs` is its
/// canonical index, used for every tie-break in the library.
struct SchedulingInstance {
  int m = 0;
  std::vector<Job> jobs;

  int n() const { return static_cast<int>(jobs.size()); }
  bool finite(int machine, int job) const { return jobs[job].proc[machine].has_value(); }
  const Rational& p(int machine, int job) const { return *jobs[job].proc[machine]; }

  /// Largest finite processing time (0 for an empty instance).
  Rational p_max() const;
  /// Ratio of largest to smallest positive finite processing time.
  Rational ratio_P() const;
  /// Distinct release times in increasing order.
  std::vector<Rational> release_points() const;
  /// Jobs sorted by release, ties by index.
  std::vector<int> release_order() const;
};

/// Returns one human-readable line per broken invariant; empty iff valid.
/// Zero processing times are accepted (the vector-to-instance reduction
/// produces them); negative ones are not.
std::vector<std::string> validate_instance(const SchedulingInstance& inst);

/// Throws ValidationError carrying the first violation, if any.
void require_valid(const SchedulingInstance& inst);

/// Integral machine choice per job.
struct MachineAssignment {
  std::vector<int> assign;
};

/// Checks that every job is assigned to a machine where it can run.
/// Throws ValidationError otherwise.
void require_valid_assignment(const SchedulingInstance& inst, const MachineAssignment& asg);

struct Segment {
  int machine = 0;
  int job = 0;
  Rational start;
  Rational end;
};

struct ScheduleMetrics {
  std::vector<Rational> per_job_flow;
  Rational max_flow;
  Rational total_flow;
  std::vector<Segment> timeline;  // sorted by (machine, start)
};

/// Non-preemptive release-order (FIFO) schedule per machine; ties by index.
ScheduleMetrics evaluate_max_flow(const SchedulingInstance& inst, const MachineAssignment& asg);

/// Preemptive SRPT per machine over unit slots. Requires integer releases and
/// integer processing times on the assigned machines.
ScheduleMetrics evaluate_total_flow_srpt(const SchedulingInstance& inst, const MachineAssignment& asg);

/// `copies` copies of `base` (all releases must be 0), copy c released at c*period.
SchedulingInstance gen_periodic_instance(const SchedulingInstance& base, int copies, const Rational& period);

struct RandomInstanceParams {
  int n = 5;
  int m = 2;
  std::int64_t p_lo = 1;
  std::int64_t p_hi = 4;
  std::int64_t r_lo = 0;
  std::int64_t r_hi = 10;
  double infinity_prob = 0.0;
  std::uint64_t seed = 0;
};

/// Integer releases and processing times drawn uniformly from the ranges;
/// rows with every entry infinite are redrawn. Deterministic in `seed`.
SchedulingInstance gen_random_instance(const RandomInstanceParams& params);

}  // namespace flowdisc
