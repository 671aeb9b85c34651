#include "wakimoto/schur.hpp"

#include <string>
#include <utility>

#include "wakimoto/error.hpp"

namespace wakimoto {

namespace {

void check_input(const SchurInput& inp, const char* op) {
  if (inp.r < 0 || static_cast<int>(inp.x.size()) != inp.r) {
    throw EngineError(ErrorCode::InvalidArgument, op,
                      "expected r >= 0 and exactly r arguments, got r=" + std::to_string(inp.r));
  }
}

}  // namespace

Rational schur_rec(const SchurInput& inp) {
  check_input(inp, "schur_rec");
  // r S_r = sum_{k=1}^r x_k S_{r-k}
  std::vector<Rational> s(inp.r + 1);
  s[0] = 1;
  for (int r = 1; r <= inp.r; ++r) {
    Rational acc(0);
    for (int k = 1; k <= r; ++k) acc += inp.x[k - 1] * s[r - k];
    s[r] = acc / Rational(r);
  }
  return s[inp.r];
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  // Bareiss elimination; every intermediate division is exact.
  const std::size_t n = m.size();
  if (n == 0) return Rational(1);
  Rational sign(1);
  Rational prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return Rational(0);
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

Rational schur_det(const SchurInput& inp) {
  check_input(inp, "schur_det");
  if (inp.r == 0) {
    throw EngineError(ErrorCode::InvalidArgument, "schur_det", "r = 0 has no determinant form");
  }
  const int r = inp.r;
  std::vector<std::vector<Rational>> m(r, std::vector<Rational>(r));
  for (int i = 0; i < r; ++i) {
    if (i >= 1) m[i][i - 1] = Rational(-(r - i));
    for (int j = i; j < r; ++j) m[i][j] = inp.x[j - i];
  }
  Rational fact(1);
  for (int k = 2; k <= r; ++k) fact *= Rational(k);
  return determinant(std::move(m)) / fact;
}

}  // namespace wakimoto
