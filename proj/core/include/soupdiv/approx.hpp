#pragma once

// Approximating numbers and the block construction built on them.
//
// q is approximating when some A > 0 and N >= 1 let every x0 in [0, A] be
// matched by a balanced pattern P of degree d <= 2N with |x0 - P(q)| <= A q^d.
// Given that, a fair division is assembled block by block: the running power
// sum, rescaled by q^{-k}, stays in [-A, A] and each block of balanced signs
// cancels it down to the next scale.
//
// The witness family used here is
//
//     P_n(x) = x - x^{2n} + sum_{i=2}^{2n-1} (-x)^i
//            = x - x^{2n} + (x^2 - x^{2n}) / (1 + x),
//
// with A = P_N(q) / (1 - q^{2N}). It certifies every q above the positive root
// of x^4 + x^3 + 2x^2 - 1 (about 0.5845751).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "soupdiv/signs.hpp"

namespace soupdiv {

PMPattern pn_pattern(int n);

/// Closed form of P_n(q).
double pn_value(double q, int n);

/// P_{n+1}(q) - P_n(q), evaluated from the difference of the two sign
/// patterns so that no cancellation between nearly equal values occurs.
double pn_gap(double q, int n);

/// Limit P_inf(q) = q + q^2 / (1 + q).
double p_infinity(double q);

/// (2 - q - q^2) / (1 + q^2): every consecutive gap P_{n+1} - P_n divided by
/// q^{2n} + q^{2n+2} equals this.
double covering_ratio(double q);

/// x^4 + x^3 + 2x^2 - 1
double q_infinity_poly(double x);

/// Bisection root of q_infinity_poly on [0.5, 0.6], bracket width <= tol.
double q_infinity(double tol = 1e-12);

enum class InequalityFamily {
  kUpperEndpoint,  // P_N + A q^{2N} >= A
  kGaps,           // |P_{n+1} - P_n| <= A (q^{2n} + q^{2n+2}), 1 <= n < N
  kLowerEndpoint,  // A q^2 >= P_1
};

std::string to_string(InequalityFamily family);

struct FamilyCheck {
  bool holds = true;
  /// Smallest slack (satisfied side minus required side) over the family;
  /// negative when violated. Zero for an empty family.
  double worst_margin = 0.0;
};

struct CertificateChecks {
  FamilyCheck upper_endpoint;
  FamilyCheck gaps;
  FamilyCheck lower_endpoint;
};

struct Certificate {
  double q = 0.0;
  int N = 0;
  double A = 0.0;
  std::vector<double> pn_values;  // P_1(q) .. P_N(q)
  CertificateChecks checks;
  double ratio = 0.0;
  double p_inf = 0.0;
};

struct CertificateFailure {
  InequalityFamily family = InequalityFamily::kUpperEndpoint;
  int index = 0;  // n for the gap family, N or 1 for the endpoints
  double lhs = 0.0;
  double rhs = 0.0;
  int N = 0;
  double A = 0.0;
};

struct CertificateOutcome {
  std::optional<Certificate> certificate;
  std::optional<CertificateFailure> failure;
  CertificateChecks checks;
  double ratio = 0.0;
  double p_inf = 0.0;

  bool ok() const { return certificate.has_value(); }
};

/// Checks the three covering families for one N. Failures are reported in
/// the order upper endpoint, gaps (ascending n), lower endpoint.
/// Throws std::domain_error unless 1/2 < q < 1.
CertificateOutcome verify_certificate(double q, int N);

/// Tries N = 1, 2, 4, ... up to N_max; the first success wins, otherwise
/// the outcome of the last attempt is returned.
CertificateOutcome auto_certificate(double q, int N_max = 64);

struct ApproxStep {
  int n = 0;
  PMPattern pattern;
  double residual = 0.0;  // x0 - P_n(q)
};

/// Smallest n with |x0 - P_n(q)| <= A q^{2n}.
/// Throws std::domain_error when x0 is outside [0, A] by more than 1e-12 and
/// std::logic_error when no n qualifies.
ApproxStep approximate_step(double x0, const Certificate& cert);

struct PlanBlock {
  std::size_t start = 0;  // k_m
  std::size_t end = 0;    // k_{m+1}
  int n = 0;              // P_n used, block length 2n
  bool negated = false;
  double residual = 0.0;             // power sum after the block
  double normalized_residual = 0.0;  // residual / q^end, within [-A, A]
};

struct FairDivisionPlan {
  SignSeq seq;
  std::vector<std::size_t> block_ends;       // 0 = k_0 < k_1 < ...
  std::vector<double> residuals_at_blocks;   // aligned with block_ends
  std::vector<double> normalized_residuals;  // aligned with block_ends
  std::vector<PlanBlock> blocks;
  Certificate certificate;
};

/// Appends balanced P_n blocks until at least min_scoops signs exist. The
/// certificate, when supplied, must be for the same q; otherwise one is
/// found with auto_certificate and std::runtime_error is thrown if none is.
FairDivisionPlan construct_bounded(double q, std::size_t min_scoops,
                                   const std::optional<Certificate>& cert = std::nullopt);

/// True iff 2q^2 / (1 - q^2) > 1, i.e. q > 1/sqrt 3. A single chain of
/// balanced patterns with degrees 2, 4, ... cannot cover [0, A] otherwise.
bool sqrt3_necessary(double q);

}  // namespace soupdiv
