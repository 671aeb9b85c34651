#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wakimoto/laurent.hpp"
#include "wakimoto/linear_combination.hpp"
#include "wakimoto/rational.hpp"

namespace wakimoto {

/// Oscillator creation factors. The stored index is positive for a(-n) and
/// b(-j) and non-negative for a*(-m).
enum class FockGen : unsigned char { A = 0, AStar = 1, B = 2 };

using FockMonomial = Monomial<FockGen>;
using FockLC = LinComb<FockMonomial>;

int degree(const FockMonomial& m);
std::string to_string(const FockMonomial& m);

/// Eigenvalues a(i) -> lambda_i (i >= 0) and a*(j) -> mu_j (j >= 1).
struct WhittakerData {
  std::map<int, Rational> lambda;
  std::map<int, Rational> mu;

  Rational lambda_at(int i) const;
  Rational mu_at(int j) const;
  int N() const;  // -1 if lambda = 0
  int M() const;  // 0 if mu = 0
  void validate() const;
};

/// Eigenvalues b(n) -> eta_n (n >= 0); level is the Heisenberg level kappa + 2.
struct HeisWhittakerData {
  std::map<int, Rational> eta;
  Rational level;

  Rational eta_at(int n) const;
  int P() const;  // -1 if eta = 0
  void validate() const;
};

/// One-dimensional module on which b(n) acts by chi_n.
struct ChiModuleData {
  LaurentWindow chi;
};

enum class ModuleTag { Vacuum, WeylWhittaker, WeylHeis, WeylChi, Heis, Chi };

std::string to_string(ModuleTag tag);
bool has_weyl(ModuleTag tag);
bool has_heis(ModuleTag tag);
bool has_chi(ModuleTag tag);

/// A module of the oscillator algebra together with its eigenvalue data.
struct FockModule {
  ModuleTag tag = ModuleTag::Vacuum;
  WhittakerData weyl;
  HeisWhittakerData heis;
  ChiModuleData chi;

  static FockModule vacuum();
  static FockModule weyl_whittaker(WhittakerData w);
  static FockModule weyl_heis(WhittakerData w, HeisWhittakerData h);
  static FockModule weyl_chi(WhittakerData w, ChiModuleData c);
  static FockModule heis_only(HeisWhittakerData h);
  static FockModule chi_only(ChiModuleData c);

  /// Largest index carrying a nonzero eigenvalue on any factor (at least 0).
  int support_bound() const;
};

struct FockVector {
  ModuleTag tag = ModuleTag::Vacuum;
  FockLC terms;

  static FockVector cyclic(ModuleTag tag);
  bool is_zero() const { return terms.is_zero(); }
  friend bool operator==(const FockVector&, const FockVector&) = default;
};

enum class WeylKind { A, AStar };

/// a(n) or a*(n) on a single monomial.
FockLC weyl_apply_mono(const FockModule& mod, WeylKind kind, int n, const FockMonomial& m);
/// b(n) on a single monomial.
FockLC heis_apply_mono(const FockModule& mod, int n, const FockMonomial& m);

FockVector weyl_apply(const FockModule& mod, WeylKind kind, int n, const FockVector& v);
FockVector heis_apply(const FockModule& mod, int n, const FockVector& v);

/// Monomials of degree <= D for the tag, graded then lexicographic.
/// The a*(0) exponent is bounded by cap, which tags with a Weyl factor require.
std::vector<FockMonomial> basis_up_to(ModuleTag tag, int D, std::optional<int> cap);

}  // namespace wakimoto
