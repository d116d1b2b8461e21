#pragma once

// Periodic divisions. A sequence repeating a block of N signs is fair (in
// either the asymptotic or the bounded sense) exactly when the block has
// zero sign sum and zero power sum at q, so periodic fair divisions live at
// roots in (0, 1) of balanced +/- polynomials.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "soupdiv/signs.hpp"

namespace soupdiv {

struct PeriodicVerdict {
  bool fair = false;
  int sign_sum = 0;
  double residual_abs = 0.0;
};

PeriodicVerdict classify_periodic(const SignSeq& period, double q, const EvalOptions& opts = {});

/// Lexicographic ('+' before '-') stream of balanced patterns of one degree.
class BalancedEnumerator {
 public:
  explicit BalancedEnumerator(int degree);

  /// Next pattern, or nullopt once exhausted. Odd degrees yield nothing.
  std::optional<PMPattern> next();

 private:
  std::string current_;
  bool done_ = false;
};

std::vector<PMPattern> enumerate_balanced(int degree);

struct LocatedRoot {
  double value = 0.0;
  double lo = 0.0;  // final bracket, hi - lo <= root_tol
  double hi = 0.0;
};

struct RootReport {
  PMPattern pattern;
  std::vector<LocatedRoot> roots;
  /// Set when the pattern starts with '-': its plate-swapped twin comes
  /// earlier in the listing with the same roots.
  bool negation_partner = false;
};

struct RootSearchOptions {
  int grid = 4096;
  double root_tol = 1e-12;
};

/// Grid scan of (0, 1) plus bisection of every sign change. Tangential
/// (even multiplicity) roots are not detected.
RootReport pattern_roots(const PMPattern& pattern, const RootSearchOptions& opts = {});

struct PeriodSearchOptions {
  RootSearchOptions roots;
  /// Worker threads for the scan; the result does not depend on this.
  unsigned threads = 1;
};

/// Degree -> patterns with at least one root in (0, 1), for every degree
/// 1..max_degree (odd degrees map to empty lists).
std::map<int, std::vector<RootReport>> min_period_search(int max_degree,
                                                         const PeriodSearchOptions& opts = {});

}  // namespace soupdiv
