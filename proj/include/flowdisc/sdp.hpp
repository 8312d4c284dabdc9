#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flowdisc/coloring.hpp"

namespace flowdisc {

/// Each coordinate i of the base becomes a block of r coordinates
/// (i, l) -> i * r + l, and every base vector v^(j) becomes r vectors
/// v^(j,l) carrying v^(j)_i at (i, l). Vectors are ordered j-major.
struct BlockInstance {
  SignedVectorSequence base;
  int r = 1;
  SignedVectorSequence blocks;  // n * r vectors in R^(r m)
};

BlockInstance build_block_instance(const SignedVectorSequence& seq, int r);
inline int block_coordinate(int i, int l, int r) { return i * r + l; }

/// Smallest r >= 1 with r + 2 sqrt(r x) + 2 x <= (1 + delta)^2 r, x = ln(2 n r m).
int choose_r(double delta, int n, int m);

struct BodyMembership {
  bool inside = false;
  std::vector<Rational> block_sums;  // squared sum per block
  Rational limit;                    // (1 + delta)^2 r
};

/// Closed body: every block's squared sum is at most (1 + delta)^2 r.
BodyMembership in_body_K(const std::vector<Rational>& point, int r, const Rational& delta);

/// w_j = r^(-1/2) (eps_{j,1}, ..., eps_{j,r}), stored as the sign matrix.
struct SdpSolution {
  int r = 1;
  std::vector<std::vector<int>> signs;  // n rows of r entries in {-1, +1}

  /// ||w_j||^2 computed exactly from the entries.
  Rational squared_norm(int j) const;
};

SdpSolution signs_to_sdp_vectors(const std::vector<int>& block_signs, int r);
std::vector<int> sdp_to_block_signs(const SdpSolution& w);

struct SdpDiscrepancy {
  Rational squared;  // max over rows i and prefixes k of ||sum_{j<=k} v_i^(j) w_j||^2
  int row = 0;
  int prefix = 0;    // 1-based
  double value = 0.0;
};

SdpDiscrepancy sdp_prefix_discrepancy(const SignedVectorSequence& seq, const SdpSolution& w);

/// Membership of the signed prefixes of the block sequence in K. With
/// block_ends_only, only prefixes ending a block (j, r) are tested; those are
/// the ones the SDP value sees.
bool block_prefixes_in_K(const BlockInstance& inst, const std::vector<int>& block_signs, const Rational& delta,
                         bool block_ends_only);

/// Exhaustive search, eps_1 = +1, pruning as soon as a prefix leaves K.
/// Returns the lexicographically least pattern (+1 before -1) keeping every
/// prefix in K, if any.
std::optional<std::vector<int>> color_blocks_in_K(const BlockInstance& inst, const Rational& delta,
                                                  int limit = kBruteForceLimit);

struct MonteCarloResult {
  std::uint64_t samples = 0;
  std::uint64_t exceed = 0;  // squared norm > (1 + delta)^2 r
  double fraction = 0.0;
  double target = 0.0;       // 1 / (2 n r m)
  double slack = 0.0;        // 3 sqrt(target (1 - target) / samples)
  bool within = false;       // fraction <= target + slack
};

/// Standard-normal r-vectors split into `shards` independently seeded
/// streams; the merged counts do not depend on how many threads run them.
MonteCarloResult gaussian_measure_mc(int r, double delta, int n, int m, std::uint64_t samples, std::uint64_t seed,
                                     int shards = 8);

}  // namespace flowdisc
