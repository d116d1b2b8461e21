#include "soupdiv/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "soupdiv/greedy.hpp"
#include "soupdiv/periodic.hpp"

namespace soupdiv {

double SimulationTrace::remaining_surface() const {
  return std::pow(q, static_cast<double>(rows.size()));
}

SimulationTrace simulate(double q, const SignSeq& signs, std::size_t steps) {
  require_unit_open(q);
  if (steps == 0) throw std::invalid_argument("steps must be positive");
  if (steps > signs.size()) throw std::invalid_argument("steps exceed the sign sequence length");

  SimulationTrace trace{q, {}};
  trace.rows.reserve(steps);
  SimulationRow acc;
  double surface = 1.0;  // q^{i-1}
  for (std::size_t i = 1; i <= steps; ++i) {
    SimulationRow row = acc;
    row.i = i;
    row.sign = signs.at(i);
    row.stuff1_delivered = 1.0;
    row.stuff2_delivered = (1.0 - q) * surface;
    if (row.sign == kPlus) {
      row.stuff1_plus += row.stuff1_delivered;
      row.stuff2_plus += row.stuff2_delivered;
    } else {
      row.stuff1_minus += row.stuff1_delivered;
      row.stuff2_minus += row.stuff2_delivered;
    }
    row.imbalance1 += row.sign;
    row.imbalance2 = row.stuff2_plus - row.stuff2_minus;
    surface *= q;
    trace.rows.push_back(row);
    acc = row;
  }
  return trace;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kBoundedFairObserved:
      return "BoundedFairObserved";
    case Verdict::kDiverging:
      return "Diverging";
    case Verdict::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

FairnessReport fairness_report(const SimulationTrace& trace, const FairnessCriteria& criteria) {
  if (trace.rows.empty()) throw std::invalid_argument("empty trace");
  FairnessReport report;
  for (const auto& row : trace.rows) {
    report.max_abs_imbalance1 = std::max(report.max_abs_imbalance1, std::abs(row.imbalance1));
    report.max_abs_imbalance2 = std::max(report.max_abs_imbalance2, std::abs(row.imbalance2));
    if (!criteria.envelope) continue;
    if (auto bound = criteria.envelope(row.i)) {
      report.imbalance2_envelope.emplace_back(row.i, *bound);
      if (!report.first_envelope_violation &&
          std::abs(row.imbalance2) > *bound + criteria.tolerance) {
        report.first_envelope_violation = row.i;
      }
    }
  }
  report.final_imbalance2 = trace.rows.back().imbalance2;

  if (report.max_abs_imbalance1 > criteria.imbalance1_cap || report.first_envelope_violation) {
    report.verdict = Verdict::kDiverging;
  } else if (!report.imbalance2_envelope.empty()) {
    report.verdict = Verdict::kBoundedFairObserved;
  } else {
    report.verdict = Verdict::kInconclusive;
  }
  return report;
}

Envelope greedy_envelope(double q) {
  require_unit_open(q);
  const double scale = (1.0 - q) / q;
  return [q, scale](std::size_t k) -> std::optional<double> {
    if (k % 2 != 0) return std::nullopt;
    return scale * greedy_pair_bound(q, k / 2);
  };
}

Envelope certificate_envelope(const FairDivisionPlan& plan) {
  const double q = plan.certificate.q;
  const double scale = (1.0 - q) / q * plan.certificate.A;
  std::vector<std::size_t> ends(plan.block_ends.begin() + 1, plan.block_ends.end());
  return [q, scale, ends = std::move(ends)](std::size_t k) -> std::optional<double> {
    if (!std::binary_search(ends.begin(), ends.end(), k)) return std::nullopt;
    return scale * std::pow(q, static_cast<double>(k));
  };
}

Envelope periodic_envelope(std::size_t period, double bound) {
  if (period == 0) throw std::invalid_argument("period must be positive");
  return [period, bound](std::size_t k) -> std::optional<double> {
    if (k % period != 0) return std::nullopt;
    return bound;
  };
}

std::string to_string(FeasibilityKind kind) {
  switch (kind) {
    case FeasibilityKind::kInfeasible:
      return "Infeasible";
    case FeasibilityKind::kBoundedFairGreedy:
      return "BoundedFairGreedy";
    case FeasibilityKind::kBoundedFairCertificate:
      return "BoundedFairCertificate";
    case FeasibilityKind::kPeriodicFair:
      return "PeriodicFair";
    case FeasibilityKind::kUnknown:
      return "Unknown";
  }
  return "Unknown";
}

namespace {

constexpr double kRootMatch = 1e-9;

std::optional<std::pair<PMPattern, double>> periodic_hit(double q, int max_degree) {
  const double lo = std::max(q - kRootMatch, 1e-300);
  const double hi = std::min(q + kRootMatch, 1.0 - 1e-16);
  for (int degree = 2; degree <= max_degree; degree += 2) {
    BalancedEnumerator it(degree);
    while (auto p = it.next()) {
      const double f_q = eval_pm(*p, q);
      if (f_q == 0.0) return std::pair{*p, q};
      double a = lo, b = hi;
      double f_a = eval_pm(*p, a);
      const double f_b = eval_pm(*p, b);
      if ((f_a < 0.0) == (f_b < 0.0) && f_a != 0.0 && f_b != 0.0) continue;
      if (f_a == 0.0) return std::pair{*p, a};
      if (f_b == 0.0) return std::pair{*p, b};
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double f_mid = eval_pm(*p, mid);
        if ((f_mid < 0.0) == (f_a < 0.0)) {
          a = mid;
          f_a = f_mid;
        } else {
          b = mid;
        }
      }
      return std::pair{*p, 0.5 * (a + b)};
    }
  }
  return std::nullopt;
}

}  // namespace

FeasibilityClass classify(double q, int search_degree) {
  require_unit_open(q);
  FeasibilityClass out;
  out.q = q;
  if (q <= 0.5) {
    out.kind = FeasibilityKind::kInfeasible;
    out.gap = q - geometric_tail(q, 1);
    return out;
  }
  if (q >= greedy_threshold()) {
    out.kind = FeasibilityKind::kBoundedFairGreedy;
    return out;
  }
  if (q > q_infinity()) {
    auto outcome = auto_certificate(q);
    if (outcome.ok()) {
      out.kind = FeasibilityKind::kBoundedFairCertificate;
      out.certificate = std::move(outcome.certificate);
      return out;
    }
  }
  if (auto hit = periodic_hit(q, search_degree)) {
    out.kind = FeasibilityKind::kPeriodicFair;
    out.pattern = std::move(hit->first);
    out.root = hit->second;
    return out;
  }
  out.kind = FeasibilityKind::kUnknown;
  return out;
}

}  // namespace soupdiv
