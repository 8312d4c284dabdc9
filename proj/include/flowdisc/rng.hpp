#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace flowdisc {

/// Seeded generator with implementation-independent output: mt19937_64 and
/// seed_seq are fully specified by the standard, and the helpers below avoid
/// the library-defined distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Independent sub-stream named by `stream`, e.g. "instance-gen" or "mc".
  Rng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform double in [0, 1).
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }
  /// Standard normal via Box-Muller (consumes two uniforms, caches one value).
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t stream_seed(std::uint64_t seed, std::string_view stream);

}  // namespace flowdisc
