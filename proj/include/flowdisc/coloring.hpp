#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flowdisc/rational.hpp"

namespace flowdisc {

/// Ordered vectors in R^m with a partial coloring (0 = uncolored).
struct SignedVectorSequence {
  int m = 0;
  std::vector<std::vector<Rational>> vectors;
  std::vector<int> signs;  // empty or one entry per vector

  int n() const { return static_cast<int>(vectors.size()); }
};

/// Throws ValidationError on dimension mismatches or signs outside {-1,0,1}.
void validate_sequence(const SignedVectorSequence& seq);
/// Throws ValidationError naming the first vector with l1-norm above 1.
void require_beck_fiala(const SignedVectorSequence& seq);

enum class DiscMode { Prefix, Interval, OneSidedInterval };

DiscMode parse_disc_mode(const std::string& text);
const char* to_string(DiscMode mode);

/// Value plus the coordinate (0-based) and the interval [begin, end] of
/// vector positions (1-based, inclusive) that attains it. For prefix mode
/// begin is always 1.
struct DiscrepancyReport {
  DiscMode mode = DiscMode::Prefix;
  Rational value;
  int coordinate = 0;
  int begin = 0;
  int end = 0;
};

/// Requires every sign to be +-1.
DiscrepancyReport discrepancy(const SignedVectorSequence& seq, DiscMode mode);
DiscrepancyReport discrepancy(const SignedVectorSequence& seq, const std::vector<int>& signs, DiscMode mode);

/// Re-evaluates the witness of a report directly from its definition.
Rational witness_value(const SignedVectorSequence& seq, const std::vector<int>& signs, const DiscrepancyReport& rep);

constexpr int kBruteForceLimit = 20;

/// Exhaustive search with branch-and-bound pruning; eps_1 = +1 is fixed in the
/// flip-invariant modes (prefix, interval). Among optimal patterns returns the
/// lexicographically least, ranking +1 before -1.
std::vector<int> color_brute_force(const SignedVectorSequence& seq, DiscMode mode, int limit = kBruteForceLimit);

/// Picks each sign to minimize the running prefix's infinity norm; ties +1.
std::vector<int> color_greedy(const SignedVectorSequence& seq);

struct FloatingTrace {
  std::vector<int> signs;
  int max_fractional = 0;  // most coefficients strictly inside (-1, 1) after any step
};

/// Floating-coefficient colorer for l1-bounded vectors; prefix discrepancy <= 2m.
FloatingTrace color_floating_traced(const SignedVectorSequence& seq);
std::vector<int> color_floating(const SignedVectorSequence& seq);

struct PairedTrace {
  std::vector<int> signs;
  /// Final prefix discrepancy of each per-dimension game, first the games of
  /// player 1 (first nonzero entries) then those of player 2 (second ones).
  std::vector<Rational> game_values;
};

/// Two interleaved per-dimension pairing makers on {-1,0,1}-valued 2-sparse
/// vectors; prefix discrepancy <= 8.
PairedTrace color_two_sparse_paired_traced(const SignedVectorSequence& seq);
std::vector<int> color_two_sparse_paired(const SignedVectorSequence& seq);

using Colorer = std::function<std::vector<int>(const SignedVectorSequence&)>;

/// "brute", "greedy", "floating", "paired", or "auto" (brute force up to the
/// brute-force limit, floating beyond it). Brute force runs in prefix mode.
Colorer make_colorer(const std::string& kind);

}  // namespace flowdisc
