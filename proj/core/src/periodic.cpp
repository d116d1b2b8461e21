#include "soupdiv/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace soupdiv {

PeriodicVerdict classify_periodic(const SignSeq& period, double q, const EvalOptions& opts) {
  require_unit_open(q);
  if (period.empty()) throw std::invalid_argument("period must be nonempty");
  if (!(opts.zero_tol >= 0.0)) throw std::invalid_argument("zero_tol must be nonnegative");
  PeriodicVerdict v;
  v.sign_sum = period.sign_sum();
  v.residual_abs = std::abs(eval_pm(period, q));
  v.fair = v.sign_sum == 0 && v.residual_abs <= opts.zero_tol;
  return v;
}

BalancedEnumerator::BalancedEnumerator(int degree) {
  if (degree < 1) throw std::invalid_argument("degree must be positive");
  if (degree % 2 != 0) {
    done_ = true;
    return;
  }
  // '+' < '-' in ASCII, so next_permutation walks the required order.
  current_ = std::string(degree / 2, '+') + std::string(degree / 2, '-');
}

std::optional<PMPattern> BalancedEnumerator::next() {
  if (done_) return std::nullopt;
  PMPattern out = PMPattern::parse(current_);
  done_ = !std::next_permutation(current_.begin(), current_.end());
  return out;
}

std::vector<PMPattern> enumerate_balanced(int degree) {
  std::vector<PMPattern> out;
  BalancedEnumerator it(degree);
  while (auto p = it.next()) out.push_back(std::move(*p));
  return out;
}

namespace {

// Signed power sum without the domain check; the scan stays inside (0, 1).
double horner(std::span<const Sign> signs, double x) {
  double acc = 0.0;
  for (auto it = signs.rbegin(); it != signs.rend(); ++it) acc = acc * x + *it;
  return acc * x;
}

LocatedRoot bisect(std::span<const Sign> signs, double lo, double hi, double f_lo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = horner(signs, mid);
    if (f_mid == 0.0) return {mid, mid, mid};
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), lo, hi};
}

}  // namespace

RootReport pattern_roots(const PMPattern& pattern, const RootSearchOptions& opts) {
  if (opts.grid < 2) throw std::invalid_argument("grid must have at least 2 subintervals");
  if (!(opts.root_tol > 0.0)) throw std::invalid_argument("root_tol must be positive");

  const auto signs = pattern.signs();
  const double delta = 1.0 / (2.0 * opts.grid);
  const double step = (1.0 - 2.0 * delta) / opts.grid;

  std::vector<LocatedRoot> found;
  double x_prev = delta;
  double f_prev = horner(signs, x_prev);
  if (f_prev == 0.0) found.push_back({x_prev, x_prev, x_prev});
  for (int j = 1; j <= opts.grid; ++j) {
    const double x = j == opts.grid ? 1.0 - delta : delta + j * step;
    const double f = horner(signs, x);
    if (f == 0.0) {
      found.push_back({x, x, x});
    } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
      found.push_back(bisect(signs, x_prev, x, f_prev, opts.root_tol));
    }
    x_prev = x;
    f_prev = f;
  }

  RootReport report{pattern, {}, pattern.signs().front() == kMinus};
  const double edge = 2.0 * opts.root_tol;
  for (const auto& r : found) {
    if (r.value <= edge || r.value >= 1.0 - edge) continue;
    if (!report.roots.empty() && r.value - report.roots.back().value <= edge) continue;
    report.roots.push_back(r);
  }
  return report;
}

std::map<int, std::vector<RootReport>> min_period_search(int max_degree,
                                                         const PeriodSearchOptions& opts) {
  if (max_degree < 2) throw std::invalid_argument("max_degree must be at least 2");
  std::map<int, std::vector<RootReport>> out;
  for (int degree = 1; degree <= max_degree; ++degree) {
    auto& hits = out[degree];
    const auto patterns = enumerate_balanced(degree);
    if (patterns.empty()) continue;

    std::vector<std::optional<RootReport>> slots(patterns.size());
    const unsigned workers =
        std::clamp<unsigned>(opts.threads, 1, static_cast<unsigned>(patterns.size()));
    auto scan = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        auto report = pattern_roots(patterns[i], opts.roots);
        if (!report.roots.empty()) slots[i] = std::move(report);
      }
    };
    if (workers == 1) {
      scan(0, patterns.size());
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (patterns.size() + workers - 1) / workers;
      for (std::size_t begin = 0; begin < patterns.size(); begin += chunk) {
        pool.emplace_back(scan, begin, std::min(begin + chunk, patterns.size()));
      }
    }
    for (auto& slot : slots) {
      if (slot) hits.push_back(std::move(*slot));
    }
  }
  return out;
}

}  // namespace soupdiv
