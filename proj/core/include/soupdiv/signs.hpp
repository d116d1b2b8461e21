#pragma once

// Sign sequences, balanced +/- polynomials and their evaluation.
//
// A sign sequence assigns scoop i (counted from 1) to the "+" or "-" plate.
// Its value at q is the signed power sum
//
//     s_1 q + s_2 q^2 + ... + s_n q^n,
//
// i.e. the imbalance of the geometrically decaying stuff in the normalization
// where scoop i carries q^i. Text form: leftmost character is exponent 1,
// e.g. "+---++".

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace soupdiv {

using Sign = std::int8_t;

inline constexpr Sign kPlus = 1;
inline constexpr Sign kMinus = -1;

/// Absolute tolerance policy for "evaluates to zero".
struct EvalOptions {
  double zero_tol = 1e-12;
};

/// Finite prefix of a division; element i-1 is the sign of scoop i.
class SignSeq {
 public:
  SignSeq() = default;

  /// Throws std::invalid_argument if any element is not +1 or -1.
  explicit SignSeq(std::vector<Sign> signs);

  /// Accepts '+', '-' and U+2212 MINUS SIGN; anything else throws.
  static SignSeq parse(std::string_view text);

  std::span<const Sign> signs() const { return signs_; }
  std::size_t size() const { return signs_.size(); }
  bool empty() const { return signs_.empty(); }

  /// Sign of scoop i, 1-based.
  Sign at(std::size_t i) const { return signs_.at(i - 1); }

  int sign_sum() const;
  SignSeq negated() const;
  SignSeq prefix(std::size_t n) const;

  void append(std::span<const Sign> more);
  /// Appends `more`, multiplied by `factor` (+1 or -1).
  void append(std::span<const Sign> more, Sign factor);

  std::string to_string() const;

  friend bool operator==(const SignSeq&, const SignSeq&) = default;

 private:
  std::vector<Sign> signs_;
};

/// Balanced +/- polynomial: sum of s_i x^i for i = 1..n with P(1) = 0.
class PMPattern {
 public:
  /// Throws std::invalid_argument when empty or unbalanced.
  explicit PMPattern(SignSeq signs);
  explicit PMPattern(std::vector<Sign> signs);

  static PMPattern parse(std::string_view text);

  int degree() const { return static_cast<int>(signs_.size()); }
  const SignSeq& seq() const { return signs_; }
  std::span<const Sign> signs() const { return signs_.signs(); }

  PMPattern negated() const;
  std::string to_string() const { return signs_.to_string(); }

  friend bool operator==(const PMPattern&, const PMPattern&) = default;
  friend auto operator<=>(const PMPattern& a, const PMPattern& b) {
    return a.to_string() <=> b.to_string();
  }

 private:
  SignSeq signs_;
};

/// Throws std::domain_error unless 0 < q < 1.
void require_unit_open(double q, const char* what = "q");

/// Signed power sum by nested evaluation. Throws on empty input or bad q.
double eval_pm(std::span<const Sign> signs, double q);
inline double eval_pm(const SignSeq& seq, double q) { return eval_pm(seq.signs(), q); }
inline double eval_pm(const PMPattern& p, double q) { return eval_pm(p.signs(), q); }

struct PrefixDiagnostics {
  std::vector<int> sign_sums;
  std::vector<double> residuals;
};

/// Running sign sums and running power sums, one entry per scoop.
PrefixDiagnostics prefix_diagnostics(const SignSeq& seq, double q);

/// Sum of q^i over i > k, i.e. q^{k+1} / (1 - q).
double geometric_tail(double q, int k);

}  // namespace soupdiv
