#pragma once

// Pairwise greedy balancing of a convergent series.
//
// Scoops are paired as (2k-1, 2k). Each pair is poured either "+-" or "-+",
// so it contributes +b_k or -b_k to the power sum with b_k = |a_{2k-1} - a_{2k}|
// and leaves the sign count unchanged. When every gap is dominated by the
// remaining tail,
//
//     b_k <= tail_k = sum_{n > k} b_n,
//
// choosing each pair sign against the running sum keeps |S_k| <= tail_k, so the
// sum converges to zero.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "soupdiv/signs.hpp"

namespace soupdiv {

/// Gaps b and tails tail, both 0-based here (element k-1 is index k).
class PairedSeries {
 public:
  /// Throws std::invalid_argument on length mismatch, empty input, negative
  /// entries, or tail[k] != tail[k+1] + b[k+1] beyond 1e-12 relative.
  PairedSeries(std::vector<double> b, std::vector<double> tail);

  /// b_k = q^{2k-1}(1-q), tail_k = q^{2k+1}/(1+q) for k = 1..pairs.
  static PairedSeries geometric(double q, std::size_t pairs);

  const std::vector<double>& b() const { return b_; }
  const std::vector<double>& tail() const { return tail_; }
  std::size_t size() const { return b_.size(); }

 private:
  std::vector<double> b_;
  std::vector<double> tail_;
};

struct Condition1Result {
  bool holds = true;
  std::optional<std::size_t> first_violation;  // 1-based
};

Condition1Result check_condition1(const PairedSeries& series);

/// The bare online rule: the first sign is +1, then each sign opposes the
/// running sum (a zero sum takes +1). No precondition is checked.
std::vector<Sign> greedy_signs(std::span<const double> b);

/// Online greedy signs; throws std::invalid_argument naming the first index
/// where the gap exceeds its tail.
std::vector<Sign> greedy_balance(const PairedSeries& series);

/// Lowest q accepted by geometric_fair_division (1/sqrt 2 minus 1e-12).
double greedy_threshold();

/// Boundedly fair prefix of n_scoops (even) signs for q in [1/sqrt 2, 1).
SignSeq geometric_fair_division(double q, std::size_t n_scoops);

/// Residual bound after 2k scoops of the geometric construction.
double greedy_pair_bound(double q, std::size_t k);

}  // namespace soupdiv
