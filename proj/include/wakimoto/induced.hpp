#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wakimoto/laurent.hpp"
#include "wakimoto/linear_combination.hpp"
#include "wakimoto/wakimoto.hpp"

namespace wakimoto {

/// PBW monomial of an induced module: e-factors, then h, then f, modes descending.
using PBWMonomial = Monomial<AffineGen>;
using PBWLC = LinComb<PBWMonomial>;

std::string to_string(const PBWMonomial& m);

enum class InducedFamily { S, P };

/// Character of the inducing subalgebra.
///
/// Family S(N, M): e(n > N), f(p > M), h(m >= 0).
/// Family P(q, r): e(n >= 0), h(m >= q), f(p >= r).
class InducedFunctional {
 public:
  InducedFunctional(InducedFamily family, int first, int second, LevelParam level,
                    std::map<int, Rational> e_values, std::map<int, Rational> h_values,
                    std::map<int, Rational> f_values);

  static InducedFunctional S(int N, int M, LevelParam level, std::map<int, Rational> h_values,
                             std::map<int, Rational> e_values = {}, std::map<int, Rational> f_values = {});
  static InducedFunctional P(int q, int r, LevelParam level, std::map<int, Rational> e_values,
                             std::map<int, Rational> h_values, std::map<int, Rational> f_values);

  InducedFamily family() const { return family_; }
  int first() const { return first_; }
  int second() const { return second_; }
  const LevelParam& level() const { return level_; }

  /// N + M + 1 for the S family.
  int n0() const { return first_ + second_ + 1; }

  bool in_subalgebra(AffineMode m) const;
  /// Value on a subalgebra mode; zero outside the stored support.
  Rational value(AffineMode m) const;
  const std::map<int, Rational>& values(AffineGen g) const;

  /// Largest complement index of any generator.
  int top_complement_index() const;
  /// Largest index with a nonzero value.
  int support_bound() const;

  /// Brackets of subalgebra modes with indices up to `window` that the character fails to kill.
  std::vector<std::string> admissibility_violations(int window) const;

  /// The character of the tau-twisted module (e and f swapped, h negated); needs N = M.
  InducedFunctional twisted() const;

 private:
  InducedFamily family_;
  int first_;
  int second_;
  LevelParam level_;
  std::map<int, Rational> e_, h_, f_;
};

/// Affine bracket [x(i), y(j)] = coeff * z(i + j) + central.
struct BracketResult {
  std::optional<AffineMode> mode;
  Rational coeff;
  Rational central;
};
BracketResult affine_bracket(AffineMode x, AffineMode y, const Rational& kappa);

/// Memoized straightening in one induced module.
class InducedModule {
 public:
  explicit InducedModule(InducedFunctional spec);
  ~InducedModule();
  InducedModule(const InducedModule&) = delete;
  InducedModule& operator=(const InducedModule&) = delete;

  const InducedFunctional& spec() const;

  int intern(const PBWMonomial& m);
  const PBWMonomial& monomial(int id) const;

  /// x(i) applied to a PBW monomial, straightened. T is allowed at the critical level.
  const SparseVec& apply(AffineMode mode, int id);
  SparseVec apply(AffineMode mode, const SparseVec& v);
  void apply_into(AffineMode mode, const SparseVec& v, const Rational& c, Accumulator& out);

  SparseVec to_sparse(const PBWLC& v);
  PBWLC to_lc(const SparseVec& v) const;
  AccumulatorPool& pool();

  /// x(l) v = 0 for every generator and l above this bound.
  int smooth_bound(const PBWMonomial& m) const;

  std::size_t cache_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct PBWVector {
  PBWLC terms;

  static PBWVector cyclic();
  bool is_zero() const { return terms.is_zero(); }
  friend bool operator==(const PBWVector&, const PBWVector&) = default;
};

/// word[0] word[1] ... word[k-1] target, read as an operator product.
PBWVector pbw_straighten(const std::vector<AffineMode>& word, const PBWVector& target, InducedModule& mod);

PBWVector induced_apply(AffineMode m, const PBWVector& v, InducedModule& mod);

struct TScanEntry {
  std::optional<Rational> proportional;
  bool independent = false;
};

/// T(n) u for n in [N0 - range, N0 + range].
std::map<int, TScanEntry> t_scan(InducedModule& mod, int range);

/// (T(N0 - i) - theta_{N0 - i}) u for i = 1..count.
std::vector<PBWVector> singular_vectors_T(InducedModule& mod, const LaurentWindow& theta, int count);

struct TruncationParams {
  int max_word = 4;
  int lo = -4;
  int hi = 2;
  int buffer = 1;
  std::size_t max_vectors = 200000;
};

struct QuotientResult {
  std::vector<PBWMonomial> basis;        // complement basis of the quotient
  std::size_t truncated_dim = 0;         // size of the truncated monomial space
  std::size_t submodule_dim = 0;         // closure intersected with it
  bool saturated = false;
  std::vector<PBWVector> projected_generators;
};

/// Truncated quotient of M(phi) by the submodule generated by `generators`.
QuotientResult truncated_quotient(InducedModule& mod, const std::vector<PBWVector>& generators,
                                  const TruncationParams& trunc);

/// Complement monomials with word length <= max_word and all indices in [lo, hi].
std::vector<PBWMonomial> truncated_pbw_basis(const InducedFunctional& spec, int max_word, int lo, int hi);

}  // namespace wakimoto
