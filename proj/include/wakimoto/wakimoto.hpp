#pragma once

#include <memory>
#include <string>
#include <utility>

#include "wakimoto/fock.hpp"
#include "wakimoto/rational.hpp"

namespace wakimoto {

/// Affine generators plus the Sugawara modes L and the critical modes T.
/// The order E < H < F is the PBW order of induced modules.
enum class AffineGen : unsigned char { E = 0, H = 1, F = 2, L = 3, T = 4 };

std::string to_string(AffineGen g);

struct AffineMode {
  AffineGen gen = AffineGen::E;
  int index = 0;

  friend auto operator<=>(const AffineMode&, const AffineMode&) = default;
};

std::string to_string(const AffineMode& m);

/// Engine knobs. Only tests change these.
struct WakimotoOptions {
  /// a*(k) counts as annihilation side for k >= this value.
  int a_star_annihilation_start = 1;
};

class WakimotoEngine;

/// Level plus the oscillator module the affine fields act on.
class WakimotoContext {
 public:
  WakimotoContext(LevelParam level, FockModule module, WakimotoOptions options = {});

  const LevelParam& level() const { return level_; }
  const FockModule& module() const { return module_; }
  const WakimotoOptions& options() const { return options_; }
  WakimotoEngine& engine() const { return *engine_; }

  /// x(l) v = 0 for every field x and every l above this bound.
  int smooth_bound(const FockMonomial& m) const;

 private:
  LevelParam level_;
  FockModule module_;
  WakimotoOptions options_;
  std::shared_ptr<WakimotoEngine> engine_;
};

/// Memoized single-mode actions on interned monomials.
class WakimotoEngine {
 public:
  WakimotoEngine(LevelParam level, FockModule module, WakimotoOptions options);
  ~WakimotoEngine();
  WakimotoEngine(const WakimotoEngine&) = delete;
  WakimotoEngine& operator=(const WakimotoEngine&) = delete;

  int intern(const FockMonomial& m);
  const FockMonomial& monomial(int id) const;

  const SparseVec& apply(AffineMode mode, int id);
  SparseVec apply(AffineMode mode, const SparseVec& v);
  void apply_into(AffineMode mode, const SparseVec& v, const Rational& c, Accumulator& out);

  SparseVec to_sparse(const FockLC& v);
  FockLC to_lc(const SparseVec& v) const;

  AccumulatorPool& pool();
  void clear_cache();
  std::size_t cache_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FockVector sl2_apply(AffineMode m, const FockVector& v, const WakimotoContext& ctx);
FockVector sugawara_apply(int n, const FockVector& v, const WakimotoContext& ctx);
FockVector central_T_apply(int n, const FockVector& v, const WakimotoContext& ctx);

/// Dispatches on the generator (e, f, h, L or T).
FockVector affine_apply(AffineMode m, const FockVector& v, const WakimotoContext& ctx);

/// The involution e(n) -> f(n), f(n) -> e(n), h(n) -> -h(n).
std::pair<AffineMode, Rational> tau_mode(AffineMode m);

}  // namespace wakimoto
