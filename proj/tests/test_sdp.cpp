#include "doctest.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "flowdisc/errors.hpp"
#include "flowdisc/rng.hpp"
#include "flowdisc/sdp.hpp"

using namespace flowdisc;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

bool tail_inequality(int r, double delta, int n, int m) {
  const double x = std::log(2.0 * n * r * m);
  return r + 2 * std::sqrt(r * x) + 2 * x <= (1 + delta) * (1 + delta) * r;
}

SignedVectorSequence random_l2_seq(Rng& rng, int n, int m) {
  SignedVectorSequence s;
  s.m = m;
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> v(m);
    Rational norm = 0;
    for (auto& x : v) {
      x = q(rng.uniform_int(-4, 4), 4);
      norm += x * x;
    }
    if (norm > 1) {
      for (auto& x : v) x = x / 2;
    }
    s.vectors.push_back(v);
  }
  return s;
}

}  // namespace

TEST_CASE("build_block_instance") {
  SignedVectorSequence one{1, {{q(1)}}, {}};
  auto b = build_block_instance(one, 2);
  REQUIRE(b.blocks.n() == 2);
  CHECK(b.blocks.vectors[0] == std::vector<Rational>{q(1), q(0)});
  CHECK(b.blocks.vectors[1] == std::vector<Rational>{q(0), q(1)});

  SignedVectorSequence two{2, {{q(1, 2), q(-1, 3)}}, {}};
  auto b3 = build_block_instance(two, 3);
  CHECK(b3.blocks.m == 6);
  CHECK(b3.blocks.vectors[1][1] == q(1, 2));
  CHECK(b3.blocks.vectors[1][4] == q(-1, 3));
  CHECK(b3.blocks.vectors[2][5] == q(-1, 3));
  CHECK(b3.blocks.vectors[2][2] == q(1, 2));

  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = random_l2_seq(rng, 3, 2);
    auto blk = build_block_instance(s, 4);
    for (int j = 0; j < s.n(); ++j) {
      Rational base = 0;
      for (const auto& x : s.vectors[j]) base += x * x;
      for (int l = 0; l < 4; ++l) {
        Rational norm = 0;
        for (const auto& x : blk.blocks.vectors[j * 4 + l]) norm += x * x;
        CHECK(norm == base);
      }
    }
  }
  CHECK_THROWS_AS(build_block_instance(one, 0), ValidationError);
}

TEST_CASE("choose_r") {
  CHECK(choose_r(0.5, 4, 2) == 34);
  for (double delta : {0.25, 0.5, 1.0, 2.0}) {
    for (int nm : {1, 4, 16}) {
      const int r = choose_r(delta, nm, 2);
      CHECK(tail_inequality(r, delta, nm, 2));
      if (r > 1) CHECK_FALSE(tail_inequality(r - 1, delta, nm, 2));
      CHECK(choose_r(2 * delta, nm, 2) <= r);
      CHECK(choose_r(delta, 2 * nm, 2) >= r);
    }
  }
  const double ratio = static_cast<double>(choose_r(0.25, 4, 2)) / choose_r(0.5, 4, 2);
  CHECK(ratio >= 3);
  CHECK(ratio <= 5);
  CHECK_THROWS_AS(choose_r(0, 4, 2), ValidationError);
}

TEST_CASE("in_body_K") {
  CHECK(in_body_K(std::vector<Rational>(6, q(0)), 3, q(1, 2)).inside);
  // (1 + 1/2)^2 * 2 = 9/2 = 3/2^2 * 2: boundary point (3/2, 3/2) is inside.
  auto edge = in_body_K({q(3, 2), q(3, 2), q(0), q(0)}, 2, q(1, 2));
  CHECK(edge.inside);
  CHECK(edge.block_sums[0] == q(9, 2));
  CHECK(edge.limit == q(9, 2));
  CHECK_FALSE(in_body_K({q(3, 2), q(8, 5), q(0), q(0)}, 2, q(1, 2)).inside);
  CHECK(in_body_K({q(-3, 2), q(-3, 2), q(0), q(0)}, 2, q(1, 2)).inside);
  CHECK_THROWS_AS(in_body_K({q(1), q(1), q(1)}, 2, q(1, 2)), ValidationError);
}

TEST_CASE("SDP vectors and discrepancy") {
  auto w = signs_to_sdp_vectors({1, 1}, 2);
  REQUIRE(w.signs.size() == 1);
  CHECK(w.signs[0] == std::vector<int>{1, 1});
  CHECK(w.squared_norm(0) == 1);
  CHECK_THROWS_AS(signs_to_sdp_vectors({1, 0}, 2), ValidationError);

  SignedVectorSequence one{1, {{q(1)}}, {}};
  CHECK(sdp_prefix_discrepancy(one, w).squared == 1);

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 3)), m = static_cast<int>(rng.uniform_int(1, 2));
    const int r = static_cast<int>(rng.uniform_int(1, 4));
    auto s = random_l2_seq(rng, n, m);
    auto blk = build_block_instance(s, r);
    std::vector<int> signs;
    for (int k = 0; k < n * r; ++k) signs.push_back(rng.bernoulli(0.5) ? 1 : -1);
    auto sol = signs_to_sdp_vectors(signs, r);
    for (int j = 0; j < n; ++j) CHECK(sol.squared_norm(j) == 1);
    auto d = sdp_prefix_discrepancy(s, sol);
    auto flipped = sol;
    for (auto& row : flipped.signs) {
      for (auto& e : row) e = -e;
    }
    CHECK(sdp_prefix_discrepancy(s, flipped).squared == d.squared);
    // value^2 = max over block-end prefixes of (block squared sum) / r.
    Rational expect = 0;
    std::vector<Rational> prefix(blk.blocks.m, q(0));
    for (int k = 0; k < n * r; ++k) {
      for (int c = 0; c < blk.blocks.m; ++c) prefix[c] += signs[k] * blk.blocks.vectors[k][c];
      if ((k + 1) % r != 0) continue;
      for (const auto& sum : in_body_K(prefix, r, q(0)).block_sums) expect = std::max(expect, Rational(sum / r));
    }
    CHECK(d.squared == expect);
    for (const Rational& delta : {q(0), q(1, 4), q(1, 2), q(1)}) {
      const bool sdp_ok = d.squared <= (1 + delta) * (1 + delta);
      CHECK(block_prefixes_in_K(blk, signs, delta, true) == sdp_ok);
      if (block_prefixes_in_K(blk, signs, delta, false)) CHECK(sdp_ok);
    }
  }
}

TEST_CASE("color_blocks_in_K") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = random_l2_seq(rng, 3, 2);
    auto blk = build_block_instance(s, 3);
    auto found = color_blocks_in_K(blk, q(1, 2));
    if (found) {
      CHECK(block_prefixes_in_K(blk, *found, q(1, 2), false));
      CHECK(sdp_prefix_discrepancy(s, signs_to_sdp_vectors(*found, 3)).squared <= q(9, 4));
    } else {
      // Nothing in the whole space keeps every prefix in K.
      for (unsigned code = 0; code < (1u << 9); ++code) {
        std::vector<int> signs;
        for (int k = 0; k < 9; ++k) signs.push_back(code >> k & 1u ? -1 : 1);
        CHECK_FALSE(block_prefixes_in_K(blk, signs, q(1, 2), false));
      }
    }
  }
  SignedVectorSequence big{1, {{q(2)}}, {}};
  CHECK_FALSE(color_blocks_in_K(build_block_instance(big, 1), q(1, 2)).has_value());
}

TEST_CASE("gaussian_measure_mc") {
  const int r = choose_r(0.5, 4, 2);
  auto res = gaussian_measure_mc(r, 0.5, 4, 2, 100000, 7);
  CHECK(res.samples == 100000);
  CHECK(res.within);
  CHECK(res.target == doctest::Approx(1.0 / (2 * 4 * r * 2)));

  // Same seed, different thread layout: shards fix the result.
  CHECK(gaussian_measure_mc(r, 0.5, 4, 2, 20000, 3, 4).exceed == gaussian_measure_mc(r, 0.5, 4, 2, 20000, 3, 4).exceed);

  // Against the exact chi-square tail.
  for (int rr : {4, 10, 34}) {
    for (double delta : {0.0, 0.2}) {
      const double limit = (1 + delta) * (1 + delta) * rr;
      const double exact = boost::math::cdf(boost::math::complement(boost::math::chi_squared(rr), limit));
      const std::uint64_t samples = 40000;
      auto mc = gaussian_measure_mc(rr, delta, 1, 1, samples, 11);
      CHECK(std::abs(mc.fraction - exact) <= 4 * std::sqrt(exact * (1 - exact) / samples) + 1e-9);
    }
  }
}
