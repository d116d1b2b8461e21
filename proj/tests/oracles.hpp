#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's evaluation paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace soupdiv::testing {

/// Term-by-term sum of s_i q^i with explicit powers.
inline double naive_power_sum(const std::string& pattern, double q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const double term = std::pow(q, static_cast<double>(i + 1));
    sum += pattern[i] == '+' ? term : -term;
  }
  return sum;
}

/// Partial sums of q^i, i > k, until they stop changing.
inline double tail_by_partial_sums(double q, int k) {
  double sum = 0.0;
  double term = std::pow(q, k + 1);
  for (int guard = 0; guard < 100000; ++guard) {
    const double next = sum + term;
    if (next == sum) break;
    sum = next;
    term *= q;
  }
  return sum;
}

inline std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

/// Every +/- string of length n with equal counts, by brute force over 2^n.
inline std::vector<std::string> brute_balanced(int n) {
  std::vector<std::string> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::string s(n, '+');
    int plus = 0;
    for (int i = 0; i < n; ++i) {
      // Bit n-1-i set means '-' at position i; ascending masks are lexicographic.
      if (mask >> (n - 1 - i) & 1u) s[i] = '-';
      else ++plus;
    }
    if (2 * plus == n) out.push_back(s);
  }
  return out;
}

/// Sign-change brackets of the naive power sum on j / samples, j = 1..samples-1.
inline std::vector<std::pair<double, double>> dense_sign_changes(const std::string& pattern,
                                                                 int samples) {
  std::vector<std::pair<double, double>> out;
  double x_prev = 1.0 / samples;
  double f_prev = naive_power_sum(pattern, x_prev);
  for (int j = 2; j < samples; ++j) {
    const double x = static_cast<double>(j) / samples;
    const double f = naive_power_sum(pattern, x);
    if ((f < 0.0) != (f_prev < 0.0)) out.emplace_back(x_prev, x);
    x_prev = x;
    f_prev = f;
  }
  return out;
}

inline std::string random_signs(std::mt19937_64& rng, int n) {
  std::bernoulli_distribution coin(0.5);
  std::string s(n, '+');
  for (auto& c : s) c = coin(rng) ? '+' : '-';
  return s;
}

inline std::string random_balanced(std::mt19937_64& rng, int n) {
  std::string s(n / 2, '+');
  s += std::string(n - n / 2, '-');
  std::shuffle(s.begin(), s.end(), rng);
  return s;
}

/// P_n written out term by term from its defining sum.
inline std::string pn_text(int n) {
  std::string s = "+";
  for (int i = 2; i <= 2 * n - 1; ++i) s += i % 2 == 0 ? '+' : '-';
  s += '-';
  return s;
}

/// P_{n+1}(q) - P_n(q): integer coefficient differences of the two pattern
/// strings, then the surviving terms summed with explicit powers.
inline double gap_oracle(double q, int n) {
  const auto lo = pn_text(n);
  const auto hi = pn_text(n + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < hi.size(); ++i) {
    const int a = hi[i] == '+' ? 1 : -1;
    const int b = i < lo.size() ? (lo[i] == '+' ? 1 : -1) : 0;
    if (a != b) sum += (a - b) * std::pow(q, static_cast<double>(i + 1));
  }
  return sum;
}

}  // namespace soupdiv::testing
