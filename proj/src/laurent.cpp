#include "wakimoto/laurent.hpp"

#include <algorithm>
#include <string>

#include "wakimoto/error.hpp"

namespace wakimoto {

LaurentWindow::LaurentWindow(int weight, int lo, int hi, int tail_zero_above)
    : weight_(weight), lo_(lo), hi_(hi), tail_(tail_zero_above) {
  if (lo > hi) {
    throw EngineError(ErrorCode::InvalidArgument, "LaurentWindow", "lo > hi");
  }
}

LaurentWindow LaurentWindow::from_terms(int weight, int lo, int hi,
                                        const std::map<int, Rational>& terms) {
  int tail = lo - 1;
  for (const auto& [n, c] : terms) {
    if (!c.is_zero()) tail = std::max(tail, n);
  }
  LaurentWindow w(weight, lo, std::max(hi, tail), tail);
  for (const auto& [n, c] : terms) w.set(n, c);
  return w;
}

Rational LaurentWindow::coeff(int n) const {
  if (n > tail_) return Rational(0);
  if (n < lo_ || n > hi_) {
    throw EngineError(ErrorCode::UndeterminedCoefficient, "LaurentWindow::coeff",
                      "index " + std::to_string(n) + " outside [" + std::to_string(lo_) + ", " +
                          std::to_string(hi_) + "]");
  }
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void LaurentWindow::set(int n, const Rational& value) {
  if (n < lo_ || n > hi_) {
    throw EngineError(ErrorCode::InvalidArgument, "LaurentWindow::set",
                      "index " + std::to_string(n) + " outside window");
  }
  if (n > tail_ && !value.is_zero()) {
    throw EngineError(ErrorCode::InvalidArgument, "LaurentWindow::set",
                      "nonzero coefficient above tail bound");
  }
  if (value.is_zero()) {
    coeffs_.erase(n);
  } else {
    coeffs_[n] = value;
  }
}

std::optional<int> LaurentWindow::top_index() const {
  if (coeffs_.empty()) return std::nullopt;
  return coeffs_.rbegin()->first;
}

bool operator==(const LaurentWindow& a, const LaurentWindow& b) {
  return a.weight_ == b.weight_ && a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.tail_ == b.tail_ &&
         a.coeffs_ == b.coeffs_;
}

bool product_determined(const LaurentWindow& a, const LaurentWindow& b, int n) {
  int ta = a.tail_zero_above();
  int tb = b.tail_zero_above();
  if (n > ta + tb) return true;
  // Every split n = i + j with i <= ta, j <= tb must use known coefficients.
  return n - tb >= a.lo() && n - ta >= b.lo();
}

LaurentWindow laurent_mul(const LaurentWindow& a, const LaurentWindow& b, IndexWindow out) {
  int tail = a.tail_zero_above() + b.tail_zero_above();
  LaurentWindow r(a.weight() + b.weight(), out.lo, std::max(out.hi, tail), tail);
  int hi = std::max(out.hi, tail);
  for (int n = out.lo; n <= hi; ++n) {
    if (!product_determined(a, b, n)) {
      throw EngineError(ErrorCode::UndeterminedCoefficient, "laurent_mul",
                        "coefficient " + std::to_string(n) + " needs unknown input coefficients");
    }
    if (n > tail) continue;
    Rational s(0);
    for (const auto& [i, ci] : a.coeffs()) {
      int j = n - i;
      if (j > b.tail_zero_above()) continue;
      s += ci * b.coeff(j);
    }
    r.set(n, s);
  }
  return r;
}

LaurentWindow laurent_der(const LaurentWindow& a) {
  LaurentWindow r(a.weight() + 1, a.lo(), a.hi(), a.tail_zero_above());
  for (const auto& [n, c] : a.coeffs()) r.set(n, -Rational(n + a.weight()) * c);
  return r;
}

LaurentWindow laurent_add(const LaurentWindow& a, const LaurentWindow& b) {
  if (a.weight() != b.weight()) {
    throw EngineError(ErrorCode::InvalidArgument, "laurent_add", "weight mismatch");
  }
  int tail = std::max(a.tail_zero_above(), b.tail_zero_above());
  // Known range: both inputs known, or above one tail and inside the other window.
  int lo = std::max(a.lo(), b.lo());
  int hi = std::max(std::min(a.hi(), b.hi()), tail);
  LaurentWindow r(a.weight(), lo, hi, tail);
  for (int n = lo; n <= std::min(hi, tail); ++n) r.set(n, a.coeff(n) + b.coeff(n));
  return r;
}

LaurentWindow laurent_scale(const LaurentWindow& a, const Rational& s) {
  LaurentWindow r(a.weight(), a.lo(), a.hi(), a.tail_zero_above());
  for (const auto& [n, c] : a.coeffs()) r.set(n, c * s);
  return r;
}

LaurentWindow theta_from_chi(const LaurentWindow& chi, IndexWindow out) {
  if (chi.weight() != 1) {
    throw EngineError(ErrorCode::InvalidArgument, "theta_from_chi", "chi must have weight 1");
  }
  LaurentWindow sq = laurent_mul(chi, chi, out);
  LaurentWindow d = laurent_der(chi);
  int tail = std::max(sq.tail_zero_above(), d.tail_zero_above());
  int hi = std::max(out.hi, tail);
  LaurentWindow r(2, out.lo, hi, tail);
  for (int n = out.lo; n <= std::min(hi, tail); ++n) {
    r.set(n, Rational(1, 2) * sq.coeff(n) + d.coeff(n));
  }
  return r;
}

}  // namespace wakimoto
