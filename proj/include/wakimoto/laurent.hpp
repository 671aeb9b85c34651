#pragma once

#include <map>
#include <optional>

#include "wakimoto/rational.hpp"

namespace wakimoto {

/// Truncated Laurent series sum_n c_n z^{-n-weight}.
///
/// Coefficients are known on [lo, hi]; c_n = 0 for n > tail_zero_above.
/// Anything below lo is unknown, and asking for it is an error.
class LaurentWindow {
 public:
  LaurentWindow() = default;
  LaurentWindow(int weight, int lo, int hi, int tail_zero_above);

  /// Window holding only the given coefficients, all others in [lo, hi] zero.
  static LaurentWindow from_terms(int weight, int lo, int hi, const std::map<int, Rational>& terms);

  int weight() const { return weight_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int tail_zero_above() const { return tail_; }

  bool determined(int n) const { return n > tail_ || (n >= lo_ && n <= hi_); }
  Rational coeff(int n) const;
  void set(int n, const Rational& value);

  /// Nonzero stored coefficients, ascending.
  const std::map<int, Rational>& coeffs() const { return coeffs_; }

  /// Largest index with a nonzero coefficient, or nullopt for the zero series.
  std::optional<int> top_index() const;

  friend bool operator==(const LaurentWindow& a, const LaurentWindow& b);

 private:
  int weight_ = 1;
  int lo_ = 0;
  int hi_ = 0;
  int tail_ = 0;
  std::map<int, Rational> coeffs_;
};

struct IndexWindow {
  int lo = 0;
  int hi = 0;
};

LaurentWindow laurent_mul(const LaurentWindow& a, const LaurentWindow& b, IndexWindow out);
LaurentWindow laurent_der(const LaurentWindow& a);
LaurentWindow laurent_add(const LaurentWindow& a, const LaurentWindow& b);
LaurentWindow laurent_scale(const LaurentWindow& a, const Rational& s);

/// theta(z) = 1/2 chi(z)^2 + chi'(z), in the weight-2 convention.
LaurentWindow theta_from_chi(const LaurentWindow& chi, IndexWindow out);

/// Indices n for which every coefficient of a*b is determined by the inputs.
bool product_determined(const LaurentWindow& a, const LaurentWindow& b, int n);

}  // namespace wakimoto
