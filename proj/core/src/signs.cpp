#include "soupdiv/signs.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace soupdiv {

SignSeq::SignSeq(std::vector<Sign> signs) : signs_(std::move(signs)) {
  for (std::size_t i = 0; i < signs_.size(); ++i) {
    if (signs_[i] != kPlus && signs_[i] != kMinus) {
      throw std::invalid_argument("sign at scoop " + std::to_string(i + 1) +
                                  " is not +1 or -1");
    }
  }
}

SignSeq SignSeq::parse(std::string_view text) {
  // U+2212 is encoded as E2 88 92.
  static constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";
  std::vector<Sign> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '+') {
      out.push_back(kPlus);
      ++i;
    } else if (text[i] == '-') {
      out.push_back(kMinus);
      ++i;
    } else if (text.substr(i, kUnicodeMinus.size()) == kUnicodeMinus) {
      out.push_back(kMinus);
      i += kUnicodeMinus.size();
    } else {
      throw std::invalid_argument("unexpected character in sign string at offset " +
                                  std::to_string(i));
    }
  }
  return SignSeq(std::move(out));
}

int SignSeq::sign_sum() const {
  return std::accumulate(signs_.begin(), signs_.end(), 0);
}

SignSeq SignSeq::negated() const {
  SignSeq out;
  out.append(signs_, kMinus);
  return out;
}

SignSeq SignSeq::prefix(std::size_t n) const {
  if (n > signs_.size()) throw std::out_of_range("prefix longer than sequence");
  return SignSeq(std::vector<Sign>(signs_.begin(), signs_.begin() + n));
}

void SignSeq::append(std::span<const Sign> more) { append(more, kPlus); }

void SignSeq::append(std::span<const Sign> more, Sign factor) {
  if (factor != kPlus && factor != kMinus) throw std::invalid_argument("factor must be +1 or -1");
  signs_.reserve(signs_.size() + more.size());
  for (Sign s : more) {
    if (s != kPlus && s != kMinus) throw std::invalid_argument("sign is not +1 or -1");
    signs_.push_back(static_cast<Sign>(s * factor));
  }
}

std::string SignSeq::to_string() const {
  std::string out;
  out.reserve(signs_.size());
  for (Sign s : signs_) out.push_back(s > 0 ? '+' : '-');
  return out;
}

PMPattern::PMPattern(SignSeq signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw std::invalid_argument("balanced pattern must be nonempty");
  if (signs_.sign_sum() != 0) {
    throw std::invalid_argument("pattern " + signs_.to_string() +
                                " is not balanced (P(1) != 0)");
  }
}

PMPattern::PMPattern(std::vector<Sign> signs) : PMPattern(SignSeq(std::move(signs))) {}

PMPattern PMPattern::parse(std::string_view text) { return PMPattern(SignSeq::parse(text)); }

PMPattern PMPattern::negated() const { return PMPattern(signs_.negated()); }

void require_unit_open(double q, const char* what) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in (0, 1)");
  }
}

double eval_pm(std::span<const Sign> signs, double q) {
  require_unit_open(q);
  if (signs.empty()) throw std::invalid_argument("cannot evaluate an empty sign sequence");
  // q (s_1 + q (s_2 + ... + q s_n))
  double acc = 0.0;
  for (auto it = signs.rbegin(); it != signs.rend(); ++it) {
    acc = acc * q + static_cast<double>(*it);
  }
  return acc * q;
}

PrefixDiagnostics prefix_diagnostics(const SignSeq& seq, double q) {
  require_unit_open(q);
  if (seq.empty()) throw std::invalid_argument("cannot diagnose an empty sign sequence");
  PrefixDiagnostics out;
  out.sign_sums.reserve(seq.size());
  out.residuals.reserve(seq.size());
  int sum = 0;
  double residual = 0.0;
  double power = 1.0;
  for (Sign s : seq.signs()) {
    power *= q;
    sum += s;
    residual += s * power;
    out.sign_sums.push_back(sum);
    out.residuals.push_back(residual);
  }
  return out;
}

double geometric_tail(double q, int k) {
  require_unit_open(q);
  if (k < 0) throw std::invalid_argument("tail index must be nonnegative");
  return std::pow(q, k + 1) / (1.0 - q);
}

}  // namespace soupdiv
