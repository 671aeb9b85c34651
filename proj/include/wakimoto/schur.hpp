#pragma once

#include <vector>

#include "wakimoto/rational.hpp"

namespace wakimoto {

/// Arguments x_1..x_r of S_r; x[k-1] holds x_k.
struct SchurInput {
  int r = 0;
  std::vector<Rational> x;
};

/// S_r as the y^r coefficient of exp(sum_n x_n y^n / n).
Rational schur_rec(const SchurInput& inp);

/// S_r through the (1/r!) determinant form. Rejects r = 0.
Rational schur_det(const SchurInput& inp);

/// Exact determinant by fraction-free elimination.
Rational determinant(std::vector<std::vector<Rational>> m);

}  // namespace wakimoto
