#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace wakimoto {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in 64 bits are kept inline;
/// anything larger is promoted to a GMP rational and demoted again as soon as
/// it fits. The inline form is therefore canonical, which keeps equality and
/// ordering cheap on the hot paths of the operator engine.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : num_(value) {}         // NOLINT(google-explicit-constructor)
  Rational(long long numerator, long long denominator);
  explicit Rational(const mpq_class& value);

  Rational(const Rational& other);
  Rational(Rational&& other) noexcept = default;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&& other) noexcept = default;
  ~Rational() = default;

  /// Parses "p" or "p/q" (optional leading sign, decimal digits only).
  static Rational parse(std::string_view text);

  std::string str() const;
  mpq_class to_mpq() const;
  mpz_class numerator() const;
  mpz_class denominator() const;

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_integer() const;
  bool is_small() const { return !big_; }
  /// Inline numerator and denominator; meaningful only when is_small().
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }
  int sign() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  void assign_big(mpq_class value);
  void reduce_store(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

/// The level kappa; the central element K acts by it.
struct LevelParam {
  Rational kappa;

  bool critical() const { return kappa == Rational(-2); }
};

}  // namespace wakimoto
