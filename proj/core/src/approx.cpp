#include "soupdiv/approx.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace soupdiv {
namespace {

constexpr double kCertTol = 1e-12;
constexpr double kRangeTol = 1e-12;

void require_above_half(double q) {
  if (!(q > 0.5 && q < 1.0)) throw std::domain_error("q must lie in (1/2, 1)");
}

}  // namespace

PMPattern pn_pattern(int n) {
  if (n < 1) throw std::invalid_argument("P_n needs n >= 1");
  const int degree = 2 * n;
  std::vector<Sign> signs(degree);
  signs.front() = kPlus;
  for (int i = 2; i < degree; ++i) signs[i - 1] = i % 2 == 0 ? kPlus : kMinus;
  signs.back() = kMinus;
  return PMPattern(std::move(signs));
}

double pn_value(double q, int n) {
  require_unit_open(q);
  if (n < 1) throw std::invalid_argument("P_n needs n >= 1");
  const double top = std::pow(q, 2 * n);
  return q - top + (q * q - top) / (1.0 + q);
}

double pn_gap(double q, int n) {
  require_unit_open(q);
  const PMPattern lower_pattern = pn_pattern(n);
  const PMPattern upper_pattern = pn_pattern(n + 1);
  const auto lower = lower_pattern.signs();
  const auto upper = upper_pattern.signs();
  double acc = 0.0;
  for (std::size_t i = upper.size(); i-- > 0;) {
    const int diff = upper[i] - (i < lower.size() ? lower[i] : 0);
    acc = acc * q + diff;
  }
  return acc * q;
}

double p_infinity(double q) {
  require_unit_open(q);
  return q + q * q / (1.0 + q);
}

double covering_ratio(double q) {
  require_unit_open(q);
  return (2.0 - q - q * q) / (1.0 + q * q);
}

double q_infinity_poly(double x) { return ((x + 1.0) * x + 2.0) * x * x - 1.0; }

double q_infinity(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  double lo = 0.5;
  double hi = 0.6;
  if (!(q_infinity_poly(lo) < 0.0 && q_infinity_poly(hi) > 0.0)) {
    throw std::logic_error("q_infinity bracket [0.5, 0.6] lost its sign change");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (q_infinity_poly(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string to_string(InequalityFamily family) {
  switch (family) {
    case InequalityFamily::kUpperEndpoint:
      return "upper_endpoint";
    case InequalityFamily::kGaps:
      return "gaps";
    case InequalityFamily::kLowerEndpoint:
      return "lower_endpoint";
  }
  return "unknown";
}

CertificateOutcome verify_certificate(double q, int N) {
  require_above_half(q);
  if (N < 1) throw std::invalid_argument("N must be at least 1");

  CertificateOutcome out;
  out.ratio = covering_ratio(q);
  out.p_inf = p_infinity(q);

  std::vector<double> pn(N);
  for (int n = 1; n <= N; ++n) pn[n - 1] = pn_value(q, n);
  const double q2 = q * q;
  const double top = std::pow(q, 2 * N);
  const double A = pn[N - 1] / (1.0 - top);

  auto fail = [&](InequalityFamily family, int index, double lhs, double rhs) {
    if (!out.failure) out.failure = CertificateFailure{family, index, lhs, rhs, N, A};
  };

  {
    const double lhs = pn[N - 1] + A * top;
    auto& check = out.checks.upper_endpoint;
    check.worst_margin = lhs - A;
    check.holds = lhs >= A - kCertTol;
    if (!check.holds) fail(InequalityFamily::kUpperEndpoint, N, lhs, A);
  }
  {
    auto& check = out.checks.gaps;
    double even_power = q2;  // q^{2n}
    for (int n = 1; n < N; ++n) {
      const double lhs = std::abs(pn_gap(q, n));
      const double rhs = A * (even_power + even_power * q2);
      const double margin = rhs - lhs;
      check.worst_margin = n == 1 ? margin : std::min(check.worst_margin, margin);
      if (lhs > rhs + kCertTol) {
        check.holds = false;
        fail(InequalityFamily::kGaps, n, lhs, rhs);
      }
      even_power *= q2;
    }
  }
  {
    const double lhs = A * q2;
    auto& check = out.checks.lower_endpoint;
    check.worst_margin = lhs - pn[0];
    check.holds = lhs >= pn[0] - kCertTol;
    if (!check.holds) fail(InequalityFamily::kLowerEndpoint, 1, lhs, pn[0]);
  }

  if (!out.failure) {
    out.certificate = Certificate{q, N, A, std::move(pn), out.checks, out.ratio, out.p_inf};
  }
  return out;
}

CertificateOutcome auto_certificate(double q, int N_max) {
  require_above_half(q);
  if (N_max < 1) throw std::invalid_argument("N_max must be at least 1");
  CertificateOutcome last;
  for (int N = 1; N <= N_max; N *= 2) {
    last = verify_certificate(q, N);
    if (last.ok()) break;
  }
  return last;
}

ApproxStep approximate_step(double x0, const Certificate& cert) {
  if (cert.N < 1 || static_cast<int>(cert.pn_values.size()) != cert.N) {
    throw std::invalid_argument("malformed certificate");
  }
  if (!(x0 >= -kRangeTol && x0 <= cert.A + kRangeTol)) {
    throw std::domain_error("x0 outside [0, A]");
  }
  const double x = std::clamp(x0, 0.0, cert.A);
  const double q2 = cert.q * cert.q;
  double even_power = q2;
  for (int n = 1; n <= cert.N; ++n) {
    const double p = cert.pn_values[n - 1];
    const double residual = x - p;
    // Rounding-level slack so exact endpoint hits (x0 = A, x0 = P_n) qualify.
    const double slack = 4.0 * DBL_EPSILON * (x + p) + kCertTol * even_power;
    if (std::abs(residual) <= cert.A * even_power + slack) {
      return ApproxStep{n, pn_pattern(n), residual};
    }
    even_power *= q2;
  }
  throw std::logic_error("certificate does not cover x0; covering invariant broken");
}

FairDivisionPlan construct_bounded(double q, std::size_t min_scoops,
                                   const std::optional<Certificate>& cert) {
  require_above_half(q);
  if (min_scoops < 2) throw std::invalid_argument("need at least 2 scoops");

  FairDivisionPlan plan;
  if (cert) {
    if (cert->q != q) throw std::invalid_argument("certificate was issued for a different q");
    plan.certificate = *cert;
  } else {
    auto outcome = auto_certificate(q);
    if (!outcome.ok()) {
      throw std::runtime_error("no covering certificate found for q = " + std::to_string(q));
    }
    plan.certificate = std::move(*outcome.certificate);
  }
  const Certificate& c = plan.certificate;

  // x is the power sum rescaled by q^{-k}; it stays within [-A, A].
  double x = 0.0;
  std::size_t k = 0;
  plan.block_ends.push_back(0);
  plan.residuals_at_blocks.push_back(0.0);
  plan.normalized_residuals.push_back(0.0);
  while (k < min_scoops) {
    const bool nonnegative = x >= 0.0;
    const ApproxStep step = approximate_step(std::abs(x), c);
    const Sign factor = nonnegative ? kMinus : kPlus;
    plan.seq.append(step.pattern.signs(), factor);

    const std::size_t length = 2 * static_cast<std::size_t>(step.n);
    const double scale = std::pow(q, static_cast<double>(length));
    x = (nonnegative ? step.residual : -step.residual) / scale;

    PlanBlock block;
    block.start = k;
    k += length;
    block.end = k;
    block.n = step.n;
    block.negated = factor == kMinus;
    block.normalized_residual = x;
    block.residual = x * std::pow(q, static_cast<double>(k));
    plan.blocks.push_back(block);
    plan.block_ends.push_back(k);
    plan.residuals_at_blocks.push_back(block.residual);
    plan.normalized_residuals.push_back(x);
  }
  return plan;
}

bool sqrt3_necessary(double q) {
  require_unit_open(q);
  // Equivalent to 2q^2 / (1 - q^2) > 1 on (0, 1), without rounding at the boundary.
  return q > 1.0 / std::sqrt(3.0);
}

}  // namespace soupdiv
