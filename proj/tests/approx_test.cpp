#include "soupdiv/approx.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"

namespace soupdiv {
namespace {

using testing::gap_oracle;
using testing::pn_text;

double pn_oracle(double q, int n) { return testing::naive_power_sum(pn_text(n), q); }

TEST(PnPatternTest, Examples) {
  EXPECT_EQ(pn_pattern(1).to_string(), "+-");
  EXPECT_EQ(pn_pattern(2).to_string(), "++--");
  for (int n = 1; n <= 30; ++n) {
    EXPECT_EQ(pn_pattern(n).to_string(), pn_text(n));
    EXPECT_EQ(pn_pattern(n).seq().sign_sum(), 0);
    EXPECT_EQ(pn_pattern(n).degree(), 2 * n);
  }
  EXPECT_THROW((void)pn_pattern(0), std::invalid_argument);
}

TEST(PnValueTest, Examples) {
  EXPECT_NEAR(pn_value(0.7, 1), 0.21, 1e-15);
  EXPECT_NEAR(p_infinity(0.7), 0.7 + 0.49 / 1.7, 1e-15);
  EXPECT_NEAR(p_infinity(0.7), 0.9882352941176471, 1e-15);
  EXPECT_THROW((void)pn_value(1.0, 2), std::domain_error);
}

TEST(PnValueTest, ClosedFormMatchesEvaluation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double q = unit(rng);
    for (int n = 1; n <= 20; ++n) {
      EXPECT_NEAR(pn_value(q, n), eval_pm(pn_pattern(n), q), 1e-13);
      EXPECT_NEAR(pn_value(q, n), pn_oracle(q, n), 1e-13);
    }
  }
}

TEST(PnValueTest, GapMatchesOracle) {
  for (int i = 1; i < 100; ++i) {
    const double q = i / 100.0;
    for (int n = 1; n <= 20; ++n) {
      const double oracle = gap_oracle(q, n);
      EXPECT_NEAR(pn_gap(q, n), oracle, 1e-14 * std::abs(oracle)) << "q=" << q << " n=" << n;
    }
    // Coarse agreement with the closed forms where cancellation is mild.
    EXPECT_NEAR(pn_gap(q, 1), pn_value(q, 2) - pn_value(q, 1), 1e-15);
  }
}

TEST(PnValueTest, GapRatioIdentity) {
  for (int i = 1; i < 100; ++i) {
    const double q = i / 100.0;
    for (int n = 1; n <= 20; ++n) {
      const double gap = std::abs(gap_oracle(q, n));
      const double denom = std::pow(q, 2 * n) + std::pow(q, 2 * n + 2);
      EXPECT_NEAR(gap / denom, covering_ratio(q), 1e-10) << "q=" << q << " n=" << n;
    }
  }
}

TEST(PnValueTest, NormalizedEndpointApproachesLimit) {
  for (double q = 0.51; q <= 0.95; q += 0.01) {
    const double top = std::pow(q, 128);
    EXPECT_LE(std::abs(pn_value(q, 64) / (1 - top) - p_infinity(q)), 10 * top + 1e-15) << q;
  }
}

TEST(QInfinityTest, Examples) {
  const double coarse = q_infinity(1e-7);
  EXPECT_EQ(std::lround(coarse * 1e7), 5845751);
  EXPECT_LT(q_infinity_poly(0.58), 0.0);
  EXPECT_GT(q_infinity_poly(0.59), 0.0);
  const double fine = q_infinity(1e-12);
  EXPECT_LE(std::abs(q_infinity_poly(fine)), 1e-11);
  EXPECT_THROW((void)q_infinity(0.0), std::invalid_argument);
}

TEST(QInfinityTest, LowerEndpointPositivityAtRoot) {
  const double q = q_infinity(1e-12);
  EXPECT_GT(-1 + 2 * q * q + 2 * q * q * q, 0.0);
  // Q_inf > 0 is the same as ratio < P_inf; both flip at the root.
  EXPECT_LT(covering_ratio(q + 1e-6), p_infinity(q + 1e-6));
  EXPECT_GT(covering_ratio(q - 1e-6), p_infinity(q - 1e-6));
}

TEST(VerifyCertificateTest, CertifiesPointSevenWithEight) {
  const auto out = verify_certificate(0.7, 8);
  ASSERT_TRUE(out.ok());
  const auto& c = *out.certificate;
  const double expected_a = pn_oracle(0.7, 8) / (1 - std::pow(0.7, 16));
  EXPECT_NEAR(c.A, expected_a, 1e-14);
  EXPECT_NEAR(c.A, 0.9862, 1e-4);
  EXPECT_NEAR(c.ratio, 0.54362, 1e-5);
  EXPECT_NEAR(c.p_inf, 0.98824, 1e-5);
  EXPECT_LT(c.ratio, c.p_inf);
  ASSERT_EQ(c.pn_values.size(), 8u);
  for (int n = 1; n <= 8; ++n) EXPECT_NEAR(c.pn_values[n - 1], pn_oracle(0.7, n), 1e-14);
  EXPECT_TRUE(c.checks.upper_endpoint.holds);
  EXPECT_TRUE(c.checks.gaps.holds);
  EXPECT_TRUE(c.checks.lower_endpoint.holds);
  // Certificate invariants.
  EXPECT_GE(c.A * 0.49, c.pn_values[0] - 1e-12);
  EXPECT_GE(c.pn_values[7] + c.A * std::pow(0.7, 16), c.A - 1e-12);
}

TEST(VerifyCertificateTest, SingleBlockFailsAtLowerEndpoint) {
  const auto out = verify_certificate(0.55, 1);
  ASSERT_FALSE(out.ok());
  const auto& f = *out.failure;
  EXPECT_EQ(f.family, InequalityFamily::kLowerEndpoint);
  // A = q/(1+q); A q^2 versus P_1 = q(1-q).
  EXPECT_NEAR(f.A, 0.55 / 1.55, 1e-15);
  EXPECT_NEAR(f.lhs, 0.55 / 1.55 * 0.3025, 1e-15);
  EXPECT_NEAR(f.rhs, 0.2475, 1e-15);
}

TEST(VerifyCertificateTest, TwoBlocksFailAtGaps) {
  const auto out = verify_certificate(0.55, 2);
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.failure->family, InequalityFamily::kGaps);
  EXPECT_EQ(out.failure->index, 1);
  EXPECT_NEAR(out.ratio, 0.8810, 1e-4);
  EXPECT_NEAR(out.failure->A, 0.6545, 1e-4);
  EXPECT_GT(out.ratio, out.failure->A);
  EXPECT_FALSE(out.checks.lower_endpoint.holds);
}

TEST(VerifyCertificateTest, DomainErrors) {
  EXPECT_THROW((void)verify_certificate(0.5, 4), std::domain_error);
  EXPECT_THROW((void)verify_certificate(1.0, 4), std::domain_error);
  EXPECT_THROW((void)verify_certificate(0.7, 0), std::invalid_argument);
}

TEST(AutoCertificateTest, Examples) {
  const auto six = auto_certificate(0.6);
  ASSERT_TRUE(six.ok());
  EXPECT_LE(six.certificate->N, 64);
  EXPECT_FALSE(auto_certificate(0.55).ok());
  const auto nine = auto_certificate(0.9);
  ASSERT_TRUE(nine.ok());
  EXPECT_LE(nine.certificate->N, 2);
}

TEST(AutoCertificateTest, JustAboveThresholdNeedsLargerN) {
  const double q = q_infinity() + 1e-6;
  const auto out = auto_certificate(q);
  ASSERT_TRUE(out.ok());
  EXPECT_GE(out.certificate->N, 8);
}

Certificate cert_07_8() { return *verify_certificate(0.7, 8).certificate; }

TEST(ApproximateStepTest, Examples) {
  const auto c = cert_07_8();
  const auto zero = approximate_step(0.0, c);
  EXPECT_EQ(zero.n, 1);
  EXPECT_EQ(zero.pattern.to_string(), "+-");
  EXPECT_NEAR(zero.residual, -0.21, 1e-15);
  EXPECT_LE(std::abs(zero.residual), c.A * 0.49);

  const auto hit = approximate_step(c.pn_values[1], c);
  EXPECT_LE(hit.n, 2);
  if (hit.n == 2) EXPECT_EQ(hit.residual, 0.0);

  const auto top = approximate_step(c.A, c);
  EXPECT_EQ(top.n, c.N);
  EXPECT_NEAR(top.residual, c.A * std::pow(0.7, 16), 1e-15);
}

TEST(ApproximateStepTest, CoversWholeSegment) {
  for (double q : {0.59, 0.62, 0.7, 0.9}) {
    const auto c = *auto_certificate(q).certificate;
    for (int i = 0; i <= 10000; ++i) {
      const double x0 = c.A * i / 10000.0;
      const auto step = approximate_step(x0, c);
      ASSERT_LE(std::abs(step.residual), c.A * std::pow(q, 2 * step.n) + 1e-12)
          << "q=" << q << " x0=" << x0;
    }
  }
}

TEST(ApproximateStepTest, RejectsOutOfRange) {
  const auto c = cert_07_8();
  EXPECT_THROW((void)approximate_step(-0.01, c), std::domain_error);
  EXPECT_THROW((void)approximate_step(c.A + 0.01, c), std::domain_error);
  EXPECT_NO_THROW((void)approximate_step(-1e-13, c));
}

TEST(ConstructBoundedTest, FirstBlockCancelsEmptyState) {
  const auto plan = construct_bounded(0.7, 4, cert_07_8());
  ASSERT_GE(plan.blocks.size(), 1u);
  // Zero residual takes the nonnegative branch, so P_1 goes in negated.
  EXPECT_EQ(plan.seq.to_string().substr(0, 2), "-+");
  EXPECT_NEAR(plan.residuals_at_blocks[1], -0.21, 1e-15);
  EXPECT_LE(std::abs(plan.residuals_at_blocks[1]), plan.certificate.A * 0.49);
}

TEST(ConstructBoundedTest, PlanInvariants) {
  for (double q : {0.59, 0.62, 0.75, 0.9}) {
    const auto plan = construct_bounded(q, 3000);
    const auto& c = plan.certificate;
    ASSERT_GE(plan.seq.size(), 3000u);
    ASSERT_EQ(plan.block_ends.front(), 0u);
    ASSERT_EQ(plan.block_ends.back(), plan.seq.size());
    const auto d = prefix_diagnostics(plan.seq, q);
    int max_abs = 0;
    for (int s : d.sign_sums) max_abs = std::max(max_abs, std::abs(s));
    EXPECT_LE(max_abs, 2 * c.N);
    for (std::size_t m = 1; m < plan.block_ends.size(); ++m) {
      const auto k = plan.block_ends[m];
      const auto len = k - plan.block_ends[m - 1];
      EXPECT_EQ(len % 2, 0u);
      EXPECT_LE(len, static_cast<std::size_t>(2 * c.N));
      EXPECT_EQ(d.sign_sums[k - 1], 0);
      EXPECT_LE(std::abs(d.residuals[k - 1]), c.A * std::pow(q, k) + k * 1e-15);
      // Contraction: the rescaled residual never leaves [-A, A].
      EXPECT_LE(std::abs(plan.normalized_residuals[m]), c.A + 1e-9);
    }
  }
}

TEST(ConstructBoundedTest, RejectsForeignCertificateAndUncertifiable) {
  EXPECT_THROW((void)construct_bounded(0.71, 10, cert_07_8()), std::invalid_argument);
  EXPECT_THROW((void)construct_bounded(0.55, 10), std::runtime_error);
  EXPECT_THROW((void)construct_bounded(0.7, 1), std::invalid_argument);
}

TEST(Sqrt3NecessaryTest, Boundary) {
  EXPECT_FALSE(sqrt3_necessary(0.577));
  EXPECT_TRUE(sqrt3_necessary(0.58));
  EXPECT_FALSE(sqrt3_necessary(1.0 / std::sqrt(3.0)));
  for (int i = 1; i < 1000; ++i) {
    const double q = i / 1000.0;
    if (std::abs(q - 1.0 / std::sqrt(3.0)) < 1e-9) continue;
    EXPECT_EQ(sqrt3_necessary(q), 2 * q * q / (1 - q * q) > 1) << q;
  }
}

}  // namespace
}  // namespace soupdiv
