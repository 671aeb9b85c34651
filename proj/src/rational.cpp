#include "wakimoto/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <ostream>

#include "wakimoto/error.hpp"

namespace wakimoto {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();
constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();

u128 uabs(i128 v) { return v < 0 ? u128(-(v + 1)) + 1 : u128(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 v) { return v >= kMin64 && v <= kMax64; }

std::uint64_t gcd64(std::int64_t a, std::int64_t b) {
  std::uint64_t x = a < 0 ? std::uint64_t(0) - std::uint64_t(a) : std::uint64_t(a);
  std::uint64_t y = b < 0 ? std::uint64_t(0) - std::uint64_t(b) : std::uint64_t(b);
  std::uint64_t g = std::gcd(x, y);
  return g == 0 ? 1 : g;
}

/// gcd of 128-bit values, using 64-bit steps once both fit.
u128 gcd_mixed(u128 a, u128 b) {
  while (b != 0 && ((a >> 64) != 0 || (b >> 64) != 0)) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  if (b == 0) return a;
  return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
}

mpz_class to_mpz(i128 v) {
  // Two 64-bit halves are enough for every value produced here.
  bool neg = v < 0;
  u128 m = uabs(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(m)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

mpq_class small_to_mpq(std::int64_t n, std::int64_t d) {
  mpq_class q;
  q.get_num() = to_mpz(n);
  q.get_den() = to_mpz(d);
  return q;
}

bool mpz_fits64(const mpz_class& z) {
  return mpz_sizeinbase(z.get_mpz_t(), 2) <= 63;
}

std::int64_t mpz_to64(const mpz_class& z) {
  // Caller guarantees |z| < 2^63.
  mpz_class a = abs(z);
  std::uint64_t lo = 0;
  mpz_export(&lo, nullptr, -1, sizeof(lo), 0, 0, a.get_mpz_t());
  auto v = static_cast<std::int64_t>(lo);
  return sgn(z) < 0 ? -v : v;
}

}  // namespace

Rational::Rational(long long numerator, long long denominator) {
  if (denominator == 0) {
    throw EngineError(ErrorCode::InvalidArgument, "Rational", "zero denominator");
  }
  i128 n = numerator;
  i128 d = denominator;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 g = gcd128(uabs(n), uabs(d));
  if (g > 1) {
    n /= i128(g);
    d /= i128(g);
  }
  if (fits64(n) && fits64(d)) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  } else {
    mpq_class q;
    q.get_num() = to_mpz(n);
    q.get_den() = to_mpz(d);
    assign_big(std::move(q));
  }
}

Rational::Rational(const mpq_class& value) {
  mpq_class q(value);
  q.canonicalize();
  assign_big(std::move(q));
}

Rational::Rational(const Rational& other)
    : num_(other.num_), den_(other.den_),
      big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

Rational& Rational::operator=(const Rational& other) {
  if (this != &other) {
    num_ = other.num_;
    den_ = other.den_;
    big_ = other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr;
  }
  return *this;
}

void Rational::reduce_store(__int128 n, __int128 d) {
  u128 g = gcd_mixed(uabs(n), uabs(d));
  if (g > 1) {
    n /= i128(g);
    d /= i128(g);
  }
  if (n == 0) d = 1;
  if (fits64(n) && fits64(d)) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
    big_.reset();
  } else {
    mpq_class q;
    q.get_num() = to_mpz(n);
    q.get_den() = to_mpz(d);
    big_ = std::make_unique<mpq_class>(std::move(q));
    num_ = 0;
    den_ = 1;
  }
}

void Rational::assign_big(mpq_class value) {
  if (mpz_fits64(value.get_num()) && mpz_fits64(value.get_den())) {
    num_ = mpz_to64(value.get_num());
    den_ = mpz_to64(value.get_den());
    big_.reset();
  } else {
    num_ = 0;
    den_ = 1;
    big_ = std::make_unique<mpq_class>(std::move(value));
  }
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw EngineError(ErrorCode::InvalidArgument, "Rational::parse",
                      "not an exact rational literal: '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();
  std::size_t slash = text.find('/');
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) return fail();
  std::string num_s(num);
  if (!num_s.empty() && num_s[0] == '+') num_s.erase(0, 1);
  mpq_class q;
  q.get_num() = mpz_class(num_s, 10);
  q.get_den() = mpz_class(std::string(den), 10);
  if (q.get_den() == 0) return fail();
  q.canonicalize();
  Rational r;
  r.assign_big(std::move(q));
  return r;
}

std::string Rational::str() const {
  if (big_) {
    if (big_->get_den() == 1) return big_->get_num().get_str();
    return big_->get_num().get_str() + "/" + big_->get_den().get_str();
  }
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

mpq_class Rational::to_mpq() const { return big_ ? *big_ : small_to_mpq(num_, den_); }

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : to_mpz(num_); }

mpz_class Rational::denominator() const { return big_ ? mpz_class(big_->get_den()) : to_mpz(den_); }

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      std::int64_t n;
      if (!__builtin_add_overflow(num_, rhs.num_, &n)) {
        num_ = n;
        return *this;
      }
    }
    i128 n = i128(num_) * rhs.den_ + i128(rhs.num_) * den_;
    i128 d = i128(den_) * rhs.den_;
    reduce_store(n, d);
    return *this;
  }
  assign_big(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      std::int64_t n;
      if (!__builtin_mul_overflow(num_, rhs.num_, &n)) {
        num_ = n;
        return *this;
      }
    }
    std::uint64_t g1 = gcd64(num_, rhs.den_);
    std::uint64_t g2 = gcd64(rhs.num_, den_);
    i128 n = (i128(num_) / i128(g1)) * (i128(rhs.num_) / i128(g2));
    i128 d = (i128(den_) / i128(g2)) * (i128(rhs.den_) / i128(g1));
    if (n == 0) d = 1;
    if (fits64(n) && fits64(d)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      return *this;
    }
  }
  assign_big(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) {
    throw EngineError(ErrorCode::InvalidArgument, "Rational", "division by zero");
  }
  if (!rhs.big_) {
    // Multiply by the inverse, keeping the denominator positive.
    Rational inv;
    inv.num_ = rhs.num_ < 0 ? -rhs.den_ : rhs.den_;
    inv.den_ = rhs.num_ < 0 ? -rhs.num_ : rhs.num_;
    if (rhs.num_ != std::numeric_limits<std::int64_t>::min()) return *this *= inv;
  }
  assign_big(to_mpq() / rhs.to_mpq());
  return *this;
}

Rational Rational::operator-() const {
  Rational r(*this);
  if (r.big_) {
    *r.big_ = -*r.big_;
  } else if (r.num_ == std::numeric_limits<std::int64_t>::min()) {
    r.assign_big(-to_mpq());
  } else {
    r.num_ = -r.num_;
  }
  return r;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical form: a value that fits is never stored big
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 l = i128(a.num_) * b.den_;
    i128 r = i128(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

}  // namespace wakimoto
