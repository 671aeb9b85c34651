#include "wakimoto/wakimoto.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include <boost/container/small_vector.hpp>
#include <vector>

#include "wakimoto/error.hpp"

namespace wakimoto {

std::string to_string(AffineGen g) {
  switch (g) {
    case AffineGen::E: return "e";
    case AffineGen::H: return "h";
    case AffineGen::F: return "f";
    case AffineGen::L: return "L";
    case AffineGen::T: return "T";
  }
  return "?";
}

std::string to_string(const AffineMode& m) { return to_string(m.gen) + "(" + std::to_string(m.index) + ")"; }

namespace {

enum class Osc { A, AStar, B };

/// Which factor positions sit on the annihilation and creation sides.
struct Split {
  std::vector<int> ann;
  std::vector<int> cre;
};

std::vector<Split> make_splits(std::size_t r) {
  std::vector<Split> out;
  for (int mask = 0; mask < (1 << r); ++mask) {
    Split s;
    for (int j = static_cast<int>(r) - 1; j >= 0; --j) {
      if (mask & (1 << j)) {
        s.cre.push_back(j);
      } else {
        s.ann.push_back(j);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// One normally ordered product sum_{i_1+...+i_r = n} w(i) :O_1(i_1)...O_r(i_r):.
struct NormalTerm {
  NormalTerm(std::vector<Osc> f, std::function<Rational(const std::vector<int>&)> w)
      : factors(std::move(f)), weight(std::move(w)), splits(make_splits(factors.size())) {}

  std::vector<Osc> factors;
  std::function<Rational(const std::vector<int>&)> weight;
  std::vector<Split> splits;
};

std::uint64_t cache_key(AffineGen g, int n, int id) {
  return (static_cast<std::uint64_t>(g) << 56) | (static_cast<std::uint64_t>(n + (1 << 22)) << 32) |
         static_cast<std::uint32_t>(id);
}

}  // namespace

struct WakimotoEngine::Impl {
  LevelParam level;
  FockModule mod;
  WakimotoOptions opt;
  std::unordered_map<std::uint64_t, SparseVec> cache;
  Interner<FockMonomial> monos;
  AccumulatorPool pool;
  std::vector<NormalTerm> h_terms, f_terms, l_terms;
  Rational sugawara_scale;
  Rational heis_double_level;

  Impl(LevelParam lv, FockModule m, WakimotoOptions o) : level(std::move(lv)), mod(std::move(m)), opt(o) {
    heis_double_level = Rational(2) * mod.heis.level;
    auto constant = [](Rational c) { return [c](const std::vector<int>&) { return c; }; };
    h_terms.emplace_back(std::vector<Osc>{Osc::AStar, Osc::A}, constant(Rational(-2)));
    f_terms.emplace_back(std::vector<Osc>{Osc::AStar, Osc::AStar, Osc::A}, constant(Rational(-1)));
    f_terms.emplace_back(std::vector<Osc>{Osc::AStar, Osc::B}, constant(Rational(1)));
    l_terms.emplace_back(std::vector<Osc>{Osc::A, Osc::AStar}, [](const std::vector<int>& idx) { return Rational(-idx[1]); });
    if (!level.critical()) {
      sugawara_scale = Rational(1) / (Rational(4) * (level.kappa + Rational(2)));
      l_terms.emplace_back(std::vector<Osc>{Osc::B, Osc::B}, constant(sugawara_scale));
    }
  }

  int creation_upper(Osc o) const {
    return o == Osc::AStar ? opt.a_star_annihilation_start - 1 : -1;
  }

  int annihilation_lower(Osc o) const {
    return o == Osc::AStar ? opt.a_star_annihilation_start : 0;
  }

  /// Emits the (at most two) terms of O(i) applied to c*m.
  template <class Emit>
  void osc_each(Osc o, int i, const FockMonomial& m, const Rational& c, Emit&& emit) const {
    switch (o) {
      case Osc::A: {
        if (!has_weyl(mod.tag)) throw EngineError(ErrorCode::ModuleMismatch, "weyl_apply", "no Weyl factor");
        if (i <= -1) {
          emit(m.with(FockGen::A, -i, 1), Rational(c));
          return;
        }
        if (auto it = mod.weyl.lambda.find(i); it != mod.weyl.lambda.end() && !it->second.is_zero()) {
          emit(FockMonomial(m), c * it->second);
        }
        if (int e = m.exponent(FockGen::AStar, i); e > 0) emit(m.with(FockGen::AStar, i, -1), c * Rational(e));
        return;
      }
      case Osc::AStar: {
        if (!has_weyl(mod.tag)) throw EngineError(ErrorCode::ModuleMismatch, "weyl_apply", "no Weyl factor");
        if (i <= 0) {
          emit(m.with(FockGen::AStar, -i, 1), Rational(c));
          return;
        }
        if (auto it = mod.weyl.mu.find(i); it != mod.weyl.mu.end() && !it->second.is_zero()) {
          emit(FockMonomial(m), c * it->second);
        }
        if (int e = m.exponent(FockGen::A, i); e > 0) emit(m.with(FockGen::A, i, -1), c * Rational(-e));
        return;
      }
      case Osc::B: {
        if (has_chi(mod.tag)) {
          Rational x = mod.chi.chi.coeff(i);
          if (!x.is_zero()) emit(FockMonomial(m), c * x);
          return;
        }
        if (i <= -1) {
          emit(m.with(FockGen::B, -i, 1), Rational(c));
          return;
        }
        if (auto it = mod.heis.eta.find(i); it != mod.heis.eta.end() && !it->second.is_zero()) {
          emit(FockMonomial(m), c * it->second);
        }
        if (i >= 1) {
          if (int e = m.exponent(FockGen::B, i); e > 0) {
            emit(m.with(FockGen::B, i, -1), c * heis_double_level * Rational(i * e));
          }
        }
        return;
      }
    }
  }

  using IndexList = boost::container::small_vector<int, 8>;

  /// Annihilation-side indices that can act nonzero on m.
  IndexList active(Osc o, const FockMonomial& m) const {
    IndexList idx;
    auto push = [&](int i) {
      if (i >= annihilation_lower(o) && std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
    };
    switch (o) {
      case Osc::A:
        for (const auto& [i, c] : mod.weyl.lambda) push(i);
        for (auto f : m.factors()) {
          if (f.gen == FockGen::AStar) push(f.index);
        }
        break;
      case Osc::AStar:
        for (const auto& [j, c] : mod.weyl.mu) push(j);
        for (auto f : m.factors()) {
          if (f.gen == FockGen::A) push(f.index);
        }
        break;
      case Osc::B:
        if (has_chi(mod.tag)) {
          const LaurentWindow& chi = mod.chi.chi;
          for (int j = 0; j <= chi.tail_zero_above(); ++j) {
            if (!chi.coeff(j).is_zero()) push(j);
          }
        } else {
          for (const auto& [j, c] : mod.heis.eta) push(j);
          for (auto f : m.factors()) {
            if (f.gen == FockGen::B) push(f.index);
          }
        }
        break;
    }
    return idx;
  }

  void eval_term(const NormalTerm& t, int n, const FockMonomial& m, const Rational& c0, Accumulator& out) {
    std::vector<int> idx(t.factors.size(), 0);
    for (const Split& s : t.splits) annihilate(t, s, n, 0, m, c0, 0, idx, out);
  }

  void annihilate(const NormalTerm& t, const Split& s, int n, std::size_t k, const FockMonomial& m,
                  const Rational& c, int sum, std::vector<int>& idx, Accumulator& out) {
    if (k == s.ann.size()) {
      create(t, s, 0, n - sum, m, c, idx, out);
      return;
    }
    const int pos = s.ann[k];
    const Osc o = t.factors[pos];
    auto step = [&](int i) {
      if (i < annihilation_lower(o)) return;
      osc_each(o, i, m, c, [&](FockMonomial&& m2, Rational&& c2) {
        idx[pos] = i;
        annihilate(t, s, n, k + 1, m2, c2, sum + i, idx, out);
      });
    };
    if (k + 1 == s.ann.size() && s.cre.empty()) {
      step(n - sum);
      return;
    }
    for (int i : active(o, m)) step(i);
  }

  /// Creation-side factors, applied right to left, with indices summing to rem.
  void create(const NormalTerm& t, const Split& s, std::size_t k, int rem, const FockMonomial& m, const Rational& c,
              std::vector<int>& idx, Accumulator& out) {
    if (k == s.cre.size()) {
      if (rem == 0) out.add(monos.intern(m), c * t.weight(idx));
      return;
    }
    const int pos = s.cre[k];
    const Osc o = t.factors[pos];
    const int upper = creation_upper(o);
    const bool last = k + 1 == s.cre.size();
    int lower = rem;
    for (std::size_t j = k + 1; j < s.cre.size(); ++j) lower -= creation_upper(t.factors[s.cre[j]]);
    const int hi = last ? std::min(upper, rem) : upper;
    for (int i = lower; i <= hi; ++i) {
      idx[pos] = i;
      osc_each(o, i, m, c, [&](FockMonomial&& m2, Rational&& c2) {
        create(t, s, k + 1, rem - i, m2, c2, idx, out);
      });
    }
  }

  int smooth_bound(const FockMonomial& m) const { return degree(m) + 3 * mod.support_bound(); }

  void osc_into(Osc o, int n, const FockMonomial& m, const Rational& c, Accumulator& out) {
    osc_each(o, n, m, c, [&](FockMonomial&& r, Rational&& x) { out.add(monos.intern(r), x); });
  }

  SparseVec compute(AffineGen g, int n, int id, WakimotoEngine& self) {
    AccumulatorPool::Lease out(pool);
    const FockMonomial m = monos.at(id);
    switch (g) {
      case AffineGen::E:
        osc_into(Osc::A, n, m, Rational(1), *out);
        break;
      case AffineGen::H:
        for (const auto& t : h_terms) eval_term(t, n, m, Rational(1), *out);
        osc_into(Osc::B, n, m, Rational(1), *out);
        break;
      case AffineGen::F: {
        for (const auto& t : f_terms) eval_term(t, n, m, Rational(1), *out);
        Rational c = -level.kappa * Rational(n);
        if (!c.is_zero()) osc_into(Osc::AStar, n, m, c, *out);
        break;
      }
      case AffineGen::L: {
        for (const auto& t : l_terms) eval_term(t, n, m, Rational(1), *out);
        Rational c = sugawara_scale * Rational(2 * (n + 1));
        if (!c.is_zero()) osc_into(Osc::B, n, m, c, *out);
        break;
      }
      case AffineGen::T:
        central_T(n, id, m, self, *out);
        break;
    }
    return out->take();
  }

  /// sum_m :e(m)f(n-m): + :f(m)e(n-m): + 1/2 :h(m)h(n-m):
  void central_T(int n, int id, const FockMonomial& u, WakimotoEngine& self, Accumulator& out) {
    const int b = smooth_bound(u);
    auto pair = [&](AffineGen left, int lm, AffineGen right, int rm, const Rational& c) {
      // Copy: applying `left` may grow the cache while we iterate.
      SparseVec inner = self.apply(AffineMode{right, rm}, id);
      self.apply_into(AffineMode{left, lm}, inner, c, out);
    };
    const Rational one(1);
    const Rational half(1, 2);
    for (int m = n - b; m <= -1; ++m) {
      pair(AffineGen::E, m, AffineGen::F, n - m, one);
      pair(AffineGen::F, m, AffineGen::E, n - m, one);
      pair(AffineGen::H, m, AffineGen::H, n - m, half);
    }
    for (int m = 0; m <= b; ++m) {
      pair(AffineGen::F, n - m, AffineGen::E, m, one);
      pair(AffineGen::E, n - m, AffineGen::F, m, one);
      pair(AffineGen::H, n - m, AffineGen::H, m, half);
    }
  }
};

WakimotoEngine::WakimotoEngine(LevelParam level, FockModule module, WakimotoOptions options)
    : impl_(std::make_unique<Impl>(std::move(level), std::move(module), options)) {}

WakimotoEngine::~WakimotoEngine() = default;

int WakimotoEngine::intern(const FockMonomial& m) { return impl_->monos.intern(m); }

const FockMonomial& WakimotoEngine::monomial(int id) const { return impl_->monos.at(id); }

const SparseVec& WakimotoEngine::apply(AffineMode mode, int id) {
  const std::uint64_t key = cache_key(mode.gen, mode.index, id);
  auto it = impl_->cache.find(key);
  if (it != impl_->cache.end()) return it->second;
  SparseVec r = impl_->compute(mode.gen, mode.index, id, *this);
  return impl_->cache.emplace(key, std::move(r)).first->second;
}

void WakimotoEngine::apply_into(AffineMode mode, const SparseVec& v, const Rational& c, Accumulator& out) {
  for (const auto& [id, x] : v) out.add_scaled(apply(mode, id), x * c);
}

SparseVec WakimotoEngine::apply(AffineMode mode, const SparseVec& v) {
  AccumulatorPool::Lease acc(impl_->pool);
  apply_into(mode, v, Rational(1), *acc);
  return acc->take();
}

SparseVec WakimotoEngine::to_sparse(const FockLC& v) {
  SparseVec out;
  for (const auto& [m, c] : v.terms()) out.emplace_back(intern(m), c);
  std::sort(out.begin(), out.end(), [](const SparseTerm& a, const SparseTerm& b) { return a.first < b.first; });
  return out;
}

FockLC WakimotoEngine::to_lc(const SparseVec& v) const {
  FockLC out;
  for (const auto& [id, c] : v) out.add(monomial(id), c);
  return out;
}

AccumulatorPool& WakimotoEngine::pool() { return impl_->pool; }

void WakimotoEngine::clear_cache() { impl_->cache.clear(); }

std::size_t WakimotoEngine::cache_size() const { return impl_->cache.size(); }

WakimotoContext::WakimotoContext(LevelParam level, FockModule module, WakimotoOptions options)
    : level_(std::move(level)), module_(std::move(module)), options_(options) {
  if (module_.tag != ModuleTag::WeylHeis && module_.tag != ModuleTag::WeylChi) {
    throw EngineError(ErrorCode::ModuleMismatch, "WakimotoContext",
                      "needs a Weyl factor tensored with a Heisenberg factor, got " + to_string(module_.tag));
  }
  if (module_.tag == ModuleTag::WeylHeis && module_.heis.level != level_.kappa + Rational(2)) {
    throw EngineError(ErrorCode::InvalidArgument, "WakimotoContext", "Heisenberg level must equal kappa + 2");
  }
  if (module_.tag == ModuleTag::WeylChi && !level_.critical()) {
    throw EngineError(ErrorCode::NotCritical, "WakimotoContext", "one-dimensional b-modules need kappa = -2");
  }
  engine_ = std::make_shared<WakimotoEngine>(level_, module_, options_);
}

int WakimotoContext::smooth_bound(const FockMonomial& m) const { return degree(m) + 3 * module_.support_bound(); }

namespace {

void check_vector(const FockVector& v, const WakimotoContext& ctx, const char* op) {
  if (v.tag != ctx.module().tag) {
    throw EngineError(ErrorCode::ModuleMismatch, op,
                      "vector of " + to_string(v.tag) + " applied in " + to_string(ctx.module().tag));
  }
}

FockVector run(AffineMode m, const FockVector& v, const WakimotoContext& ctx) {
  WakimotoEngine& eng = ctx.engine();
  FockVector out;
  out.tag = v.tag;
  out.terms = eng.to_lc(eng.apply(m, eng.to_sparse(v.terms)));
  return out;
}

}  // namespace

FockVector sl2_apply(AffineMode m, const FockVector& v, const WakimotoContext& ctx) {
  check_vector(v, ctx, "sl2_apply");
  if (m.gen != AffineGen::E && m.gen != AffineGen::F && m.gen != AffineGen::H) {
    throw EngineError(ErrorCode::InvalidArgument, "sl2_apply", "generator must be e, f or h");
  }
  return run(m, v, ctx);
}

FockVector sugawara_apply(int n, const FockVector& v, const WakimotoContext& ctx) {
  check_vector(v, ctx, "sugawara_apply");
  if (ctx.level().critical()) {
    throw EngineError(ErrorCode::CriticalLevel, "sugawara_apply", "L(n) is undefined at kappa = -2");
  }
  return run(AffineMode{AffineGen::L, n}, v, ctx);
}

FockVector central_T_apply(int n, const FockVector& v, const WakimotoContext& ctx) {
  check_vector(v, ctx, "central_T_apply");
  if (!ctx.level().critical()) {
    throw EngineError(ErrorCode::NotCritical, "central_T_apply", "T(n) needs kappa = -2");
  }
  return run(AffineMode{AffineGen::T, n}, v, ctx);
}

FockVector affine_apply(AffineMode m, const FockVector& v, const WakimotoContext& ctx) {
  switch (m.gen) {
    case AffineGen::L: return sugawara_apply(m.index, v, ctx);
    case AffineGen::T: return central_T_apply(m.index, v, ctx);
    default: return sl2_apply(m, v, ctx);
  }
}

std::pair<AffineMode, Rational> tau_mode(AffineMode m) {
  switch (m.gen) {
    case AffineGen::E: return {AffineMode{AffineGen::F, m.index}, Rational(1)};
    case AffineGen::F: return {AffineMode{AffineGen::E, m.index}, Rational(1)};
    case AffineGen::H: return {AffineMode{AffineGen::H, m.index}, Rational(-1)};
    default:
      throw EngineError(ErrorCode::Unsupported, "tau_mode", "tau is defined on e, f, h only");
  }
}

}  // namespace wakimoto
