#include "soupdiv/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace soupdiv {
namespace {

constexpr double kTailRelTol = 1e-12;
constexpr double kConditionTol = 1e-12;
constexpr double kThresholdSlack = 1e-12;

}  // namespace

PairedSeries::PairedSeries(std::vector<double> b, std::vector<double> tail)
    : b_(std::move(b)), tail_(std::move(tail)) {
  if (b_.size() != tail_.size()) throw std::invalid_argument("b and tail differ in length");
  if (b_.empty()) throw std::invalid_argument("paired series must be nonempty");
  for (std::size_t k = 0; k < b_.size(); ++k) {
    if (!(b_[k] >= 0.0) || !(tail_[k] >= 0.0)) {
      throw std::invalid_argument("negative gap or tail at index " + std::to_string(k + 1));
    }
  }
  for (std::size_t k = 0; k + 1 < b_.size(); ++k) {
    const double expected = tail_[k + 1] + b_[k + 1];
    const double scale = std::max({tail_[k], expected, 1e-280});
    if (std::abs(tail_[k] - expected) > kTailRelTol * scale) {
      throw std::invalid_argument("tail at index " + std::to_string(k + 1) +
                                  " is not the next tail plus the next gap");
    }
  }
}

PairedSeries PairedSeries::geometric(double q, std::size_t pairs) {
  require_unit_open(q);
  if (pairs == 0) throw std::invalid_argument("need at least one pair");
  std::vector<double> b(pairs), tail(pairs);
  const double q2 = q * q;
  double odd_power = q;  // q^{2k-1}
  for (std::size_t k = 0; k < pairs; ++k) {
    b[k] = odd_power * (1.0 - q);
    tail[k] = odd_power * q2 / (1.0 + q);
    odd_power *= q2;
  }
  return PairedSeries(std::move(b), std::move(tail));
}

Condition1Result check_condition1(const PairedSeries& series) {
  const auto& b = series.b();
  const auto& tail = series.tail();
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (b[k] > tail[k] + kConditionTol * std::max(1.0, tail[k])) {
      return {false, k + 1};
    }
  }
  return {true, std::nullopt};
}

std::vector<Sign> greedy_signs(std::span<const double> b) {
  std::vector<Sign> signs;
  signs.reserve(b.size());
  double partial = 0.0;
  for (double gap : b) {
    // Oppose the running sum; a zero sum (including the start) takes "+".
    const Sign s = partial > 0.0 ? kMinus : kPlus;
    signs.push_back(s);
    partial += s * gap;
  }
  return signs;
}

std::vector<Sign> greedy_balance(const PairedSeries& series) {
  if (auto cond = check_condition1(series); !cond.holds) {
    throw std::invalid_argument("gap exceeds remaining tail at index " +
                                std::to_string(*cond.first_violation));
  }
  return greedy_signs(series.b());
}

double greedy_threshold() { return 1.0 / std::sqrt(2.0) - kThresholdSlack; }

SignSeq geometric_fair_division(double q, std::size_t n_scoops) {
  require_unit_open(q);
  if (n_scoops == 0 || n_scoops % 2 != 0) {
    throw std::invalid_argument("number of scoops must be even and positive");
  }
  if (q < greedy_threshold()) {
    throw std::domain_error(
        "q below 1/sqrt(2): pairwise greedy does not apply, use a covering certificate");
  }
  const auto pair_signs = greedy_balance(PairedSeries::geometric(q, n_scoops / 2));
  std::vector<Sign> out;
  out.reserve(n_scoops);
  for (Sign s : pair_signs) {
    out.push_back(s);
    out.push_back(static_cast<Sign>(-s));
  }
  return SignSeq(std::move(out));
}

double greedy_pair_bound(double q, std::size_t k) {
  require_unit_open(q);
  return std::pow(q, 2.0 * static_cast<double>(k) + 1.0) / (1.0 + q);
}

}  // namespace soupdiv
