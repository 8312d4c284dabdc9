#include "flowdisc/instance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "flowdisc/errors.hpp"
#include "flowdisc/rng.hpp"

namespace flowdisc {

Rational SchedulingInstance::p_max() const {
  Rational best = 0;
  for (const auto& job : jobs) {
    for (const auto& p : job.proc) {
      if (p && *p > best) best = *p;
    }
  }
  return best;
}

Rational SchedulingInstance::ratio_P() const {
  std::optional<Rational> lo;
  Rational hi = 0;
  for (const auto& job : jobs) {
    for (const auto& p : job.proc) {
      if (!p || sgn(*p) <= 0) continue;
      if (!lo || *p < *lo) lo = *p;
      if (*p > hi) hi = *p;
    }
  }
  return lo ? Rational(hi / *lo) : Rational(1);
}

std::vector<Rational> SchedulingInstance::release_points() const {
  std::vector<Rational> points;
  points.reserve(jobs.size());
  for (const auto& job : jobs) points.push_back(job.release);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

std::vector<int> SchedulingInstance::release_order() const {
  std::vector<int> order(jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return jobs[a].release < jobs[b].release; });
  return order;
}

std::vector<std::string> validate_instance(const SchedulingInstance& inst) {
  std::vector<std::string> issues;
  if (inst.m < 1) issues.push_back("machine count must be positive, got " + std::to_string(inst.m));
  for (int j = 0; j < inst.n(); ++j) {
    const auto& job = inst.jobs[j];
    const std::string name = "job " + std::to_string(j);
    if (sgn(job.release) < 0) issues.push_back(name + ": negative release time " + to_string(job.release));
    if (static_cast<int>(job.proc.size()) != inst.m) {
      issues.push_back(name + ": expected " + std::to_string(inst.m) + " processing times, got " +
                       std::to_string(job.proc.size()));
      continue;
    }
    bool any_finite = false;
    for (int i = 0; i < inst.m; ++i) {
      if (!job.proc[i]) continue;
      any_finite = true;
      if (sgn(*job.proc[i]) < 0) {
        issues.push_back(name + ": negative processing time on machine " + std::to_string(i));
      }
    }
    if (!any_finite) issues.push_back(name + ": no machine with finite processing time");
  }
  return issues;
}

void require_valid(const SchedulingInstance& inst) {
  const auto issues = validate_instance(inst);
  if (!issues.empty()) throw ValidationError("invalid instance: " + issues.front());
}

void require_valid_assignment(const SchedulingInstance& inst, const MachineAssignment& asg) {
  if (static_cast<int>(asg.assign.size()) != inst.n()) {
    throw ValidationError("assignment has " + std::to_string(asg.assign.size()) + " entries for " +
                          std::to_string(inst.n()) + " jobs");
  }
  for (int j = 0; j < inst.n(); ++j) {
    const int i = asg.assign[j];
    if (i < 0 || i >= inst.m) throw ValidationError("job " + std::to_string(j) + " assigned to unknown machine");
    if (!inst.finite(i, j)) {
      throw ValidationError("job " + std::to_string(j) + " assigned to machine " + std::to_string(i) +
                            " where its processing time is infinite");
    }
  }
}

namespace {

std::vector<std::vector<int>> jobs_per_machine(const SchedulingInstance& inst, const MachineAssignment& asg) {
  std::vector<std::vector<int>> per(inst.m);
  for (int j : inst.release_order()) per[asg.assign[j]].push_back(j);
  return per;
}

void finish_metrics(ScheduleMetrics& out) {
  out.max_flow = 0;
  out.total_flow = 0;
  for (const auto& f : out.per_job_flow) {
    if (f > out.max_flow) out.max_flow = f;
    out.total_flow += f;
  }
}

std::int64_t as_int64(const Rational& q, const char* what) {
  if (!is_integer(q) || !q.get_num().fits_slong_p()) {
    throw ValidationError(std::string("SRPT simulation needs integer ") + what + ", got " + to_string(q));
  }
  return q.get_num().get_si();
}

}  // namespace

ScheduleMetrics evaluate_max_flow(const SchedulingInstance& inst, const MachineAssignment& asg) {
  require_valid_assignment(inst, asg);
  ScheduleMetrics out;
  out.per_job_flow.assign(inst.n(), Rational(0));
  const auto per = jobs_per_machine(inst, asg);
  for (int i = 0; i < inst.m; ++i) {
    Rational clock = 0;
    bool started = false;
    for (int j : per[i]) {
      const Rational& r = inst.jobs[j].release;
      Rational start = (!started || r > clock) ? r : clock;
      started = true;
      Rational end = start + inst.p(i, j);
      out.per_job_flow[j] = end - r;
      out.timeline.push_back({i, j, start, end});
      clock = end;
    }
  }
  finish_metrics(out);
  return out;
}

ScheduleMetrics evaluate_total_flow_srpt(const SchedulingInstance& inst, const MachineAssignment& asg) {
  require_valid_assignment(inst, asg);
  ScheduleMetrics out;
  out.per_job_flow.assign(inst.n(), Rational(0));
  const auto per = jobs_per_machine(inst, asg);
  for (int i = 0; i < inst.m; ++i) {
    const auto& jobs = per[i];  // release order
    const std::size_t count = jobs.size();
    std::vector<std::int64_t> release(count), remaining(count);
    for (std::size_t a = 0; a < count; ++a) {
      release[a] = as_int64(inst.jobs[jobs[a]].release, "release times");
      remaining[a] = as_int64(inst.p(i, jobs[a]), "processing times");
      if (remaining[a] == 0) out.per_job_flow[jobs[a]] = 0;
    }
    std::size_t next_release = 0;  // first job (in release order) not yet released
    std::size_t left = static_cast<std::size_t>(std::count_if(remaining.begin(), remaining.end(),
                                                              [](std::int64_t x) { return x > 0; }));
    std::int64_t t = count ? release[0] : 0;
    while (left > 0) {
      while (next_release < count && release[next_release] <= t) ++next_release;
      // Pick the released job with least remaining work; ties by job index.
      std::size_t best = count;
      for (std::size_t a = 0; a < next_release; ++a) {
        if (remaining[a] == 0) continue;
        if (best == count || remaining[a] < remaining[best] ||
            (remaining[a] == remaining[best] && jobs[a] < jobs[best])) {
          best = a;
        }
      }
      if (best == count) {
        t = release[next_release];  // idle until the next release
        continue;
      }
      const int job = jobs[best];
      if (!out.timeline.empty() && out.timeline.back().machine == i && out.timeline.back().job == job &&
          out.timeline.back().end == t) {
        out.timeline.back().end = t + 1;
      } else {
        out.timeline.push_back({i, job, Rational(t), Rational(t + 1)});
      }
      --remaining[best];
      ++t;
      if (remaining[best] == 0) {
        out.per_job_flow[job] = Rational(t - release[best]);
        --left;
      }
    }
  }
  finish_metrics(out);
  return out;
}

SchedulingInstance gen_periodic_instance(const SchedulingInstance& base, int copies, const Rational& period) {
  if (copies < 1) throw ValidationError("periodic instance needs at least one copy");
  for (const auto& job : base.jobs) {
    if (sgn(job.release) != 0) throw ValidationError("periodic base instance must release every job at 0");
  }
  SchedulingInstance out;
  out.m = base.m;
  for (int c = 1; c <= copies; ++c) {
    for (const auto& job : base.jobs) {
      Job copy = job;
      copy.release = period * c;
      out.jobs.push_back(std::move(copy));
    }
  }
  return out;
}

SchedulingInstance gen_random_instance(const RandomInstanceParams& params) {
  if (params.n < 0 || params.m < 1) throw ValidationError("random instance needs n >= 0 and m >= 1");
  if (params.p_lo < 1 || params.p_hi < params.p_lo || params.r_lo < 0 || params.r_hi < params.r_lo) {
    throw ValidationError("random instance ranges must be positive and non-empty");
  }
  if (params.infinity_prob < 0.0 || params.infinity_prob >= 1.0) {
    throw ValidationError("infinity probability must lie in [0, 1)");
  }
  Rng rng(params.seed, "instance-gen");
  SchedulingInstance inst;
  inst.m = params.m;
  inst.jobs.resize(params.n);
  for (auto& job : inst.jobs) {
    job.release = Rational(rng.uniform_int(params.r_lo, params.r_hi));
    bool any_finite = false;
    while (!any_finite) {
      job.proc.assign(params.m, std::nullopt);
      for (auto& p : job.proc) {
        const bool infinite = params.infinity_prob > 0.0 && rng.bernoulli(params.infinity_prob);
        const auto value = rng.uniform_int(params.p_lo, params.p_hi);
        if (!infinite) {
          p = Rational(value);
          any_finite = true;
        }
      }
    }
  }
  return inst;
}

}  // namespace flowdisc
