#include "flowdisc/sdp.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "flowdisc/errors.hpp"
#include "flowdisc/rng.hpp"

namespace flowdisc {

BlockInstance build_block_instance(const SignedVectorSequence& seq, int r) {
  validate_sequence(seq);
  if (r < 1) throw ValidationError("block size r must be at least 1");
  BlockInstance out;
  out.base = seq;
  out.r = r;
  out.blocks.m = seq.m * r;
  for (const auto& v : seq.vectors) {
    for (int l = 0; l < r; ++l) {
      std::vector<Rational> b(out.blocks.m, Rational(0));
      for (int i = 0; i < seq.m; ++i) b[block_coordinate(i, l, r)] = v[i];
      out.blocks.vectors.push_back(std::move(b));
    }
  }
  return out;
}

int choose_r(double delta, int n, int m) {
  if (!(delta > 0)) throw ValidationError("delta must be positive");
  if (n < 1 || m < 1) throw ValidationError("choose_r needs n, m >= 1");
  const double grow = (1 + delta) * (1 + delta);
  for (int r = 1;; ++r) {
    const double x = std::log(2.0 * n * r * m);
    if (r + 2 * std::sqrt(r * x) + 2 * x <= grow * r) return r;
    if (r == 100000000) throw ValidationError("delta too small for choose_r");
  }
}

BodyMembership in_body_K(const std::vector<Rational>& point, int r, const Rational& delta) {
  if (r < 1 || point.size() % r != 0) throw ValidationError("point dimension is not a multiple of r");
  if (sgn(delta) < 0) throw ValidationError("delta must be nonnegative");
  BodyMembership out;
  out.limit = (1 + delta) * (1 + delta) * r;
  out.inside = true;
  for (std::size_t start = 0; start < point.size(); start += r) {
    Rational sum = 0;
    for (int l = 0; l < r; ++l) sum += point[start + l] * point[start + l];
    if (sum > out.limit) out.inside = false;
    out.block_sums.push_back(std::move(sum));
  }
  return out;
}

Rational SdpSolution::squared_norm(int j) const {
  Rational sum = 0;
  for (int e : signs[j]) sum += Rational(e * e);
  return sum / r;
}

SdpSolution signs_to_sdp_vectors(const std::vector<int>& block_signs, int r) {
  if (r < 1) throw ValidationError("block size r must be at least 1");
  if (block_signs.size() % r != 0) throw ValidationError("sign count is not a multiple of r");
  SdpSolution out;
  out.r = r;
  for (std::size_t start = 0; start < block_signs.size(); start += r) {
    std::vector<int> row(block_signs.begin() + start, block_signs.begin() + start + r);
    for (int e : row) {
      if (e != 1 && e != -1) throw ValidationError("every block sign must be set to +1 or -1");
    }
    out.signs.push_back(std::move(row));
  }
  return out;
}

std::vector<int> sdp_to_block_signs(const SdpSolution& w) {
  std::vector<int> out;
  for (const auto& row : w.signs) out.insert(out.end(), row.begin(), row.end());
  return out;
}

SdpDiscrepancy sdp_prefix_discrepancy(const SignedVectorSequence& seq, const SdpSolution& w) {
  validate_sequence(seq);
  if (static_cast<int>(w.signs.size()) != seq.n()) throw ValidationError("SDP solution has the wrong vector count");
  SdpDiscrepancy out;
  out.squared = 0;
  std::vector<std::vector<Rational>> sum(seq.m, std::vector<Rational>(w.r, Rational(0)));
  for (int j = 0; j < seq.n(); ++j) {
    if (static_cast<int>(w.signs[j].size()) != w.r) throw ValidationError("SDP vector of the wrong dimension");
    for (int i = 0; i < seq.m; ++i) {
      // Entries are kept scaled by sqrt(r); divide the squared norm by r.
      Rational sq = 0;
      for (int l = 0; l < w.r; ++l) {
        sum[i][l] += seq.vectors[j][i] * w.signs[j][l];
        sq += sum[i][l] * sum[i][l];
      }
      sq /= w.r;
      if (sq > out.squared || (j == 0 && i == 0)) {
        out.squared = sq;
        out.row = i;
        out.prefix = j + 1;
      }
    }
  }
  out.value = std::sqrt(to_double(out.squared));
  return out;
}

bool block_prefixes_in_K(const BlockInstance& inst, const std::vector<int>& block_signs, const Rational& delta,
                         bool block_ends_only) {
  if (static_cast<int>(block_signs.size()) != inst.blocks.n()) throw ValidationError("wrong number of block signs");
  std::vector<Rational> prefix(inst.blocks.m, Rational(0));
  for (int k = 0; k < inst.blocks.n(); ++k) {
    const int e = block_signs[k];
    if (e != 1 && e != -1) throw ValidationError("every block sign must be set to +1 or -1");
    for (int c = 0; c < inst.blocks.m; ++c) prefix[c] += e * inst.blocks.vectors[k][c];
    const bool block_end = (k + 1) % inst.r == 0;
    if ((block_end || !block_ends_only) && !in_body_K(prefix, inst.r, delta).inside) return false;
  }
  return true;
}

std::optional<std::vector<int>> color_blocks_in_K(const BlockInstance& inst, const Rational& delta, int limit) {
  const int total = inst.blocks.n();
  if (total > limit) throw ValidationError("block brute force limited to " + std::to_string(limit) + " vectors");
  if (total == 0) return std::vector<int>{};
  const Rational bound = (1 + delta) * (1 + delta) * inst.r;
  std::vector<int> signs(total, 1);
  std::vector<std::vector<Rational>> prefix(total + 1, std::vector<Rational>(inst.blocks.m, Rational(0)));
  auto fits = [&](int k) {
    for (int i = 0; i < inst.base.m; ++i) {
      Rational sum = 0;
      for (int l = 0; l < inst.r; ++l) {
        const Rational& x = prefix[k][block_coordinate(i, l, inst.r)];
        sum += x * x;
      }
      if (sum > bound) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int k) -> bool {
    if (k == total) return true;
    for (int e : {1, -1}) {
      if (k == 0 && e < 0) break;
      signs[k] = e;
      for (int c = 0; c < inst.blocks.m; ++c) prefix[k + 1][c] = prefix[k][c] + e * inst.blocks.vectors[k][c];
      if (fits(k + 1) && self(self, k + 1)) return true;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  return signs;
}

MonteCarloResult gaussian_measure_mc(int r, double delta, int n, int m, std::uint64_t samples, std::uint64_t seed,
                                     int shards) {
  if (r < 1 || n < 1 || m < 1) throw ValidationError("Monte Carlo needs r, n, m >= 1");
  if (delta < 0) throw ValidationError("delta must be nonnegative");
  if (shards < 1) throw ValidationError("need at least one shard");
  const double limit = (1 + delta) * (1 + delta) * r;
  std::vector<std::uint64_t> counts(shards, 0);
  auto run_shard = [&](int s) {
    Rng rng(seed, "mc-" + std::to_string(s));
    const std::uint64_t mine = samples / shards + (static_cast<std::uint64_t>(s) < samples % shards ? 1 : 0);
    for (std::uint64_t k = 0; k < mine; ++k) {
      double sq = 0;
      for (int l = 0; l < r; ++l) {
        const double g = rng.normal();
        sq += g * g;
      }
      if (sq > limit) ++counts[s];
    }
  };
  const int threads = std::max(1u, std::thread::hardware_concurrency());
  for (int start = 0; start < shards; start += threads) {
    std::vector<std::thread> pool;
    for (int s = start; s < std::min(shards, start + threads); ++s) pool.emplace_back(run_shard, s);
    for (auto& t : pool) t.join();
  }
  MonteCarloResult out;
  out.samples = samples;
  for (auto c : counts) out.exceed += c;
  out.fraction = samples ? static_cast<double>(out.exceed) / static_cast<double>(samples) : 0.0;
  out.target = 1.0 / (2.0 * n * r * m);
  out.slack = samples ? 3 * std::sqrt(out.target * (1 - out.target) / static_cast<double>(samples)) : 0.0;
  out.within = out.fraction <= out.target + out.slack;
  return out;
}

}  // namespace flowdisc
