#include "flowdisc/equivalence.hpp"

#include "flowdisc/errors.hpp"
#include "flowdisc/maxflow.hpp"
#include "flowdisc/rng.hpp"

namespace flowdisc {

void require_two_sparse(const TwoSparseVector& v, int m) {
  if (v.i1 < 0 || v.i1 >= m || v.i2 < 0 || v.i2 >= m) throw ValidationError("V_m vector coordinate out of range");
  if (v.i1 == v.i2) throw ValidationError("V_m vector needs two distinct coordinates");
  const Rational half(1, 2);
  if (sgn(v.p1) < 0 || sgn(v.p2) < 0 || v.p1 > half || v.p2 > half) {
    throw ValidationError("V_m entries must lie in [0, 1/2]");
  }
}

std::vector<Rational> realize(const TwoSparseVector& v, int m) {
  require_two_sparse(v, m);
  std::vector<Rational> out(m, Rational(0));
  out[v.i1] = v.p1;
  out[v.i2] = -v.p2;
  return out;
}

TwoSparseVector two_sparse_from_dense(const std::vector<Rational>& v) {
  const int m = static_cast<int>(v.size());
  if (m < 2) throw ValidationError("V_m vectors need at least two coordinates");
  int pos = -1, neg = -1;
  for (int i = 0; i < m; ++i) {
    const int s = sgn(v[i]);
    if (s > 0) {
      if (pos >= 0) throw ValidationError("vector has two positive entries");
      pos = i;
    } else if (s < 0) {
      if (neg >= 0) throw ValidationError("vector has two negative entries");
      neg = i;
    }
  }
  auto lowest_free = [&](int taken) {
    for (int i = 0; i < m; ++i) {
      if (i != taken && sgn(v[i]) == 0) return i;
    }
    throw ValidationError("no free coordinate for a zero entry");
  };
  if (pos < 0) pos = lowest_free(neg);
  if (neg < 0) neg = lowest_free(pos);
  TwoSparseVector out{pos, neg, v[pos], -v[neg]};
  require_two_sparse(out, m);
  return out;
}

SignedVectorSequence to_sequence(const std::vector<TwoSparseVector>& vs, int m) {
  SignedVectorSequence seq;
  seq.m = m;
  for (const auto& v : vs) seq.vectors.push_back(realize(v, m));
  return seq;
}

std::vector<TwoSparseVector> from_sequence(const SignedVectorSequence& seq) {
  validate_sequence(seq);
  std::vector<TwoSparseVector> out;
  for (const auto& v : seq.vectors) out.push_back(two_sparse_from_dense(v));
  return out;
}

SchedulingInstance vectors_to_maxflow_instance(const std::vector<TwoSparseVector>& vs, int m) {
  SchedulingInstance inst;
  inst.m = m;
  for (std::size_t t = 0; t < vs.size(); ++t) {
    const auto& v = vs[t];
    require_two_sparse(v, m);
    const Rational release(static_cast<long>(t + 1));
    Job special;
    special.release = release;
    special.proc.assign(m, std::nullopt);
    special.proc[v.i1] = 2 * v.p1;
    special.proc[v.i2] = 2 * v.p2;
    inst.jobs.push_back(std::move(special));
    for (int i = 0; i < m; ++i) {
      Job filler;
      filler.release = release;
      filler.proc.assign(m, std::nullopt);
      filler.proc[i] = i == v.i1 ? Rational(1 - v.p1) : i == v.i2 ? Rational(1 - v.p2) : Rational(1);
      inst.jobs.push_back(std::move(filler));
    }
  }
  return inst;
}

std::vector<int> signs_from_assignment(const SchedulingInstance& inst, const std::vector<TwoSparseVector>& vs,
                                       const MachineAssignment& asg) {
  const int m = inst.m;
  if (inst.n() != static_cast<int>(vs.size()) * (m + 1)) {
    throw ValidationError("instance does not match the vector sequence");
  }
  require_valid_assignment(inst, asg);
  std::vector<int> signs;
  for (std::size_t t = 0; t < vs.size(); ++t) {
    const auto& v = vs[t];
    const int machine = asg.assign[special_job(static_cast<int>(t), m)];
    if (machine != v.i1 && machine != v.i2) throw ValidationError("special job placed outside its two machines");
    const int eps = machine == v.i1 ? 1 : -1;
    signs.push_back(eps);
    const auto dense = realize(v, m);
    std::vector<Rational> load(m, Rational(0));
    for (int k = 0; k <= m; ++k) {
      const int j = special_job(static_cast<int>(t), m) + k;
      load[asg.assign[j]] += inst.p(asg.assign[j], j);
    }
    for (int i = 0; i < m; ++i) {
      if (load[i] - 1 != eps * dense[i]) throw InvariantViolation("per-step sign identity fails");
    }
  }
  return signs;
}

OptimalAssignment optimal_max_flow_assignment(const SchedulingInstance& inst, std::uint64_t limit) {
  require_valid(inst);
  std::vector<std::vector<int>> choices(inst.n());
  long double count = 1;
  for (int j = 0; j < inst.n(); ++j) {
    for (int i = 0; i < inst.m; ++i) {
      if (inst.finite(i, j)) choices[j].push_back(i);
    }
    count *= static_cast<long double>(choices[j].size());
  }
  if (count > static_cast<long double>(limit)) {
    throw ValidationError("too many assignments to enumerate");
  }
  OptimalAssignment best;
  MachineAssignment asg;
  asg.assign.assign(inst.n(), 0);
  bool found = false;
  auto rec = [&](auto&& self, int j) -> void {
    if (j == inst.n()) {
      ++best.evaluated;
      Rational v = evaluate_max_flow(inst, asg).max_flow;
      if (!found || v < best.max_flow) {
        found = true;
        best.max_flow = std::move(v);
        best.assignment = asg;
      }
      return;
    }
    for (int i : choices[j]) {
      asg.assign[j] = i;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return best;
}

RoundtripReport roundtrip_check(const std::vector<TwoSparseVector>& vs, int m) {
  RoundtripReport out;
  const SchedulingInstance inst = vectors_to_maxflow_instance(vs, m);
  const SignedVectorSequence seq = to_sequence(vs, m);
  out.lp_optimum = vs.empty() ? Rational(0) : solve_min_T(inst).T_star;
  const OptimalAssignment opt = optimal_max_flow_assignment(inst);
  out.opt_max_flow = opt.max_flow;
  out.assignment = opt.assignment;
  out.extracted_signs = signs_from_assignment(inst, vs, opt.assignment);
  out.brute_signs = color_brute_force(seq, DiscMode::OneSidedInterval);
  if (vs.empty()) {
    out.extracted.mode = out.brute.mode = DiscMode::OneSidedInterval;
    out.extracted.value = out.brute.value = 0;
    out.equal = true;
    return out;
  }
  out.extracted = discrepancy(seq, out.extracted_signs, DiscMode::OneSidedInterval);
  out.brute = discrepancy(seq, out.brute_signs, DiscMode::OneSidedInterval);
  out.equal = out.extracted.value == out.brute.value;
  if (out.extracted.value > out.opt_max_flow - 1) {
    throw InvariantViolation("extracted signs exceed OPT - 1");
  }
  if (out.brute.value > out.extracted.value) throw InvariantViolation("brute force is not optimal");
  return out;
}

std::vector<TwoSparseVector> random_two_sparse(int n, int m, std::uint64_t seed, int denominator) {
  if (m < 2) throw ValidationError("V_m needs m >= 2");
  if (denominator < 1) throw ValidationError("denominator must be positive");
  Rng rng(seed, "two-sparse");
  std::vector<TwoSparseVector> out;
  for (int t = 0; t < n; ++t) {
    TwoSparseVector v;
    v.i1 = static_cast<int>(rng.uniform_int(0, m - 1));
    v.i2 = static_cast<int>(rng.uniform_int(0, m - 2));
    if (v.i2 >= v.i1) ++v.i2;
    v.p1 = Rational(rng.uniform_int(0, denominator), 2L * denominator);
    v.p2 = Rational(rng.uniform_int(0, denominator), 2L * denominator);
    v.p1.canonicalize();
    v.p2.canonicalize();
    out.push_back(v);
  }
  return out;
}

}  // namespace flowdisc
