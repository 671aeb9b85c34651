#include "wakimoto/induced.hpp"

#include <algorithm>
#include <unordered_map>

#include "wakimoto/error.hpp"
#include "wakimoto/span.hpp"

namespace wakimoto {

std::string to_string(const PBWMonomial& m) {
  if (m.empty()) return "u";
  std::string out;
  for (const auto& f : m.factors()) {
    out += to_string(f.gen) + "(" + std::to_string(f.index) + ")";
    if (f.exp > 1) out += "^" + std::to_string(f.exp);
    out += " ";
  }
  return out + "u";
}

namespace {

const std::map<int, Rational> kEmpty;

void check_sl2(AffineMode m, const char* op) {
  if (m.gen != AffineGen::E && m.gen != AffineGen::F && m.gen != AffineGen::H) {
    throw EngineError(ErrorCode::InvalidArgument, op, "generator must be e, f or h, got " + to_string(m));
  }
}

std::map<int, Rational> strip_zeros(std::map<int, Rational> m) {
  std::erase_if(m, [](const auto& kv) { return kv.second.is_zero(); });
  return m;
}

int lower_bound_index(InducedFamily fam, int first, int second, AffineGen g) {
  if (fam == InducedFamily::S) {
    switch (g) {
      case AffineGen::E: return first + 1;
      case AffineGen::F: return second + 1;
      default: return 0;
    }
  }
  switch (g) {
    case AffineGen::E: return 0;
    case AffineGen::H: return first;
    default: return second;
  }
}

std::uint64_t cache_key(AffineGen g, int n, int id) {
  return (static_cast<std::uint64_t>(g) << 56) | (static_cast<std::uint64_t>(n + (1 << 22)) << 32) |
         static_cast<std::uint32_t>(id);
}

/// x strictly after y in the PBW order e < h < f, modes descending.
bool after(AffineMode x, AffineMode y) {
  if (x.gen != y.gen) return x.gen > y.gen;
  return x.index < y.index;
}

}  // namespace

InducedFunctional::InducedFunctional(InducedFamily family, int first, int second, LevelParam level,
                                     std::map<int, Rational> e_values, std::map<int, Rational> h_values,
                                     std::map<int, Rational> f_values)
    : family_(family), first_(first), second_(second), level_(std::move(level)),
      e_(strip_zeros(std::move(e_values))), h_(strip_zeros(std::move(h_values))),
      f_(strip_zeros(std::move(f_values))) {
  if (family_ == InducedFamily::S && first_ + second_ < 0) {
    throw EngineError(ErrorCode::InvalidArgument, "InducedFunctional", "S(N, M) needs N + M >= 0");
  }
  if (family_ == InducedFamily::P && !(0 < first_ && first_ < second_)) {
    throw EngineError(ErrorCode::InvalidArgument, "InducedFunctional", "P(q, r) needs 0 < q < r");
  }
  for (AffineGen g : {AffineGen::E, AffineGen::H, AffineGen::F}) {
    int lo = lower_bound_index(family_, first_, second_, g);
    for (const auto& [n, v] : values(g)) {
      if (n < lo) {
        throw EngineError(ErrorCode::InvalidArgument, "InducedFunctional",
                          "value given for " + to_string(AffineMode{g, n}) + " outside the subalgebra");
      }
    }
  }
  auto bad = admissibility_violations(support_bound() + 2);
  if (!bad.empty()) {
    throw EngineError(ErrorCode::InvalidArgument, "InducedFunctional", "character does not kill " + bad.front());
  }
}

InducedFunctional InducedFunctional::S(int N, int M, LevelParam level, std::map<int, Rational> h_values,
                                       std::map<int, Rational> e_values, std::map<int, Rational> f_values) {
  return InducedFunctional(InducedFamily::S, N, M, std::move(level), std::move(e_values), std::move(h_values),
                           std::move(f_values));
}

InducedFunctional InducedFunctional::P(int q, int r, LevelParam level, std::map<int, Rational> e_values,
                                       std::map<int, Rational> h_values, std::map<int, Rational> f_values) {
  return InducedFunctional(InducedFamily::P, q, r, std::move(level), std::move(e_values), std::move(h_values),
                           std::move(f_values));
}

bool InducedFunctional::in_subalgebra(AffineMode m) const {
  return m.index >= lower_bound_index(family_, first_, second_, m.gen);
}

const std::map<int, Rational>& InducedFunctional::values(AffineGen g) const {
  switch (g) {
    case AffineGen::E: return e_;
    case AffineGen::H: return h_;
    case AffineGen::F: return f_;
    default: return kEmpty;
  }
}

Rational InducedFunctional::value(AffineMode m) const {
  const auto& t = values(m.gen);
  auto it = t.find(m.index);
  return it == t.end() ? Rational(0) : it->second;
}

int InducedFunctional::top_complement_index() const {
  int top = 0;
  for (AffineGen g : {AffineGen::E, AffineGen::H, AffineGen::F}) {
    top = std::max(top, lower_bound_index(family_, first_, second_, g) - 1);
  }
  return top;
}

int InducedFunctional::support_bound() const {
  int s = 0;
  for (const auto* t : {&e_, &h_, &f_}) {
    if (!t->empty()) s = std::max(s, t->rbegin()->first);
  }
  return s;
}

std::vector<std::string> InducedFunctional::admissibility_violations(int window) const {
  std::vector<std::string> out;
  const AffineGen gens[] = {AffineGen::E, AffineGen::H, AffineGen::F};
  for (AffineGen gx : gens) {
    for (AffineGen gy : gens) {
      if (gy < gx) continue;
      for (int i = lower_bound_index(family_, first_, second_, gx); i <= window; ++i) {
        for (int j = lower_bound_index(family_, first_, second_, gy); j <= window; ++j) {
          AffineMode x{gx, i};
          AffineMode y{gy, j};
          BracketResult b = affine_bracket(x, y, level_.kappa);
          Rational v = b.central;
          if (b.mode) v += b.coeff * value(*b.mode);
          if (!v.is_zero()) out.push_back("[" + to_string(x) + ", " + to_string(y) + "]");
        }
      }
    }
  }
  return out;
}

InducedFunctional InducedFunctional::twisted() const {
  if (family_ != InducedFamily::S || first_ != second_) {
    throw EngineError(ErrorCode::Unsupported, "InducedFunctional::twisted", "needs the S family with N = M");
  }
  std::map<int, Rational> h;
  for (const auto& [n, v] : h_) h.emplace(n, -v);
  return InducedFunctional(family_, first_, second_, level_, f_, std::move(h), e_);
}

BracketResult affine_bracket(AffineMode x, AffineMode y, const Rational& kappa) {
  check_sl2(x, "affine_bracket");
  check_sl2(y, "affine_bracket");
  BracketResult r;
  const int s = x.index + y.index;
  auto form = [&](int value) {
    if (s == 0) r.central = Rational(x.index) * Rational(value) * kappa;
  };
  using G = AffineGen;
  if (x.gen == G::E && y.gen == G::F) {
    r.mode = AffineMode{G::H, s};
    r.coeff = 1;
    form(1);
  } else if (x.gen == G::F && y.gen == G::E) {
    r.mode = AffineMode{G::H, s};
    r.coeff = -1;
    form(1);
  } else if (x.gen == G::H && y.gen == G::E) {
    r.mode = AffineMode{G::E, s};
    r.coeff = 2;
  } else if (x.gen == G::E && y.gen == G::H) {
    r.mode = AffineMode{G::E, s};
    r.coeff = -2;
  } else if (x.gen == G::H && y.gen == G::F) {
    r.mode = AffineMode{G::F, s};
    r.coeff = -2;
  } else if (x.gen == G::F && y.gen == G::H) {
    r.mode = AffineMode{G::F, s};
    r.coeff = 2;
  } else if (x.gen == G::H && y.gen == G::H) {
    form(2);
  }
  return r;
}

struct InducedModule::Impl {
  explicit Impl(InducedFunctional s) : spec(std::move(s)) {
    bmax = std::max(spec.top_complement_index(), spec.support_bound());
    empty_id = monos.intern(PBWMonomial());
  }

  InducedFunctional spec;
  int bmax = 0;
  int empty_id = 0;
  Interner<PBWMonomial> monos;
  std::unordered_map<std::uint64_t, SparseVec> cache;
  AccumulatorPool pool;

  int smooth_bound(const PBWMonomial& m) const {
    int deg = 0;
    for (const auto& f : m.factors()) deg += std::max(0, -f.index) * f.exp;
    return bmax + deg;
  }

  SparseVec straighten(AffineMode x, int id, InducedModule& self) {
    const PBWMonomial m = monos.at(id);
    const bool sub = spec.in_subalgebra(x);
    if (m.empty()) {
      if (!sub) return {{monos.intern(m.with(x.gen, x.index, 1)), Rational(1)}};
      Rational v = spec.value(x);
      if (v.is_zero()) return {};
      return {{id, v}};
    }
    auto f0 = m.factor(0);
    AffineMode y{f0.gen, f0.index};
    if (!sub && !after(x, y)) return {{monos.intern(m.with(x.gen, x.index, 1)), Rational(1)}};
    // x(i) y rest = y (x(i) rest) + [x(i), y] rest
    const int rest = monos.intern(m.with(y.gen, y.index, -1));
    AccumulatorPool::Lease acc(pool);
    SparseVec inner = self.apply(x, rest);
    self.apply_into(y, inner, Rational(1), *acc);
    BracketResult b = affine_bracket(x, y, spec.level().kappa);
    if (b.mode && !b.coeff.is_zero()) acc->add_scaled(self.apply(*b.mode, rest), b.coeff);
    if (!b.central.is_zero()) acc->add(rest, b.central);
    return acc->take();
  }

  /// sum_m :e(m)f(n-m): + :f(m)e(n-m): + 1/2 :h(m)h(n-m):
  SparseVec central_T(int n, int id, InducedModule& self) {
    const int b = smooth_bound(monos.at(id));
    AccumulatorPool::Lease acc(pool);
    auto pair = [&](AffineGen left, int lm, AffineGen right, int rm, const Rational& c) {
      SparseVec inner = self.apply(AffineMode{right, rm}, id);
      self.apply_into(AffineMode{left, lm}, inner, c, *acc);
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
    return acc->take();
  }
};

InducedModule::InducedModule(InducedFunctional spec) : impl_(std::make_unique<Impl>(std::move(spec))) {}

InducedModule::~InducedModule() = default;

const InducedFunctional& InducedModule::spec() const { return impl_->spec; }

int InducedModule::intern(const PBWMonomial& m) { return impl_->monos.intern(m); }

const PBWMonomial& InducedModule::monomial(int id) const { return impl_->monos.at(id); }

const SparseVec& InducedModule::apply(AffineMode mode, int id) {
  const std::uint64_t key = cache_key(mode.gen, mode.index, id);
  auto it = impl_->cache.find(key);
  if (it != impl_->cache.end()) return it->second;
  SparseVec r;
  if (mode.gen == AffineGen::T) {
    if (!impl_->spec.level().critical()) {
      throw EngineError(ErrorCode::NotCritical, "induced_apply", "T(n) needs kappa = -2");
    }
    r = impl_->central_T(mode.index, id, *this);
  } else {
    check_sl2(mode, "induced_apply");
    r = impl_->straighten(mode, id, *this);
  }
  return impl_->cache.emplace(key, std::move(r)).first->second;
}

void InducedModule::apply_into(AffineMode mode, const SparseVec& v, const Rational& c, Accumulator& out) {
  for (const auto& [id, x] : v) out.add_scaled(apply(mode, id), x * c);
}

SparseVec InducedModule::apply(AffineMode mode, const SparseVec& v) {
  AccumulatorPool::Lease acc(impl_->pool);
  apply_into(mode, v, Rational(1), *acc);
  return acc->take();
}

SparseVec InducedModule::to_sparse(const PBWLC& v) {
  SparseVec out;
  for (const auto& [m, c] : v.terms()) out.emplace_back(intern(m), c);
  std::sort(out.begin(), out.end(), [](const SparseTerm& a, const SparseTerm& b) { return a.first < b.first; });
  return out;
}

PBWLC InducedModule::to_lc(const SparseVec& v) const {
  PBWLC out;
  for (const auto& [id, c] : v) out.add(monomial(id), c);
  return out;
}

AccumulatorPool& InducedModule::pool() { return impl_->pool; }

int InducedModule::smooth_bound(const PBWMonomial& m) const { return impl_->smooth_bound(m); }

std::size_t InducedModule::cache_size() const { return impl_->cache.size(); }

PBWVector PBWVector::cyclic() { return PBWVector{PBWLC(PBWMonomial())}; }

PBWVector pbw_straighten(const std::vector<AffineMode>& word, const PBWVector& target, InducedModule& mod) {
  for (AffineMode m : word) check_sl2(m, "pbw_straighten");
  SparseVec v = mod.to_sparse(target.terms);
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = mod.apply(*it, v);
  return PBWVector{mod.to_lc(v)};
}

PBWVector induced_apply(AffineMode m, const PBWVector& v, InducedModule& mod) {
  if (m.gen == AffineGen::L) {
    throw EngineError(ErrorCode::Unsupported, "induced_apply", "Sugawara modes are not available here");
  }
  return PBWVector{mod.to_lc(mod.apply(m, mod.to_sparse(v.terms)))};
}

namespace {

void require_critical_S(const InducedFunctional& s, const char* op) {
  if (s.family() != InducedFamily::S) {
    throw EngineError(ErrorCode::Unsupported, op, "needs an S(N, M) character");
  }
  if (!s.level().critical()) throw EngineError(ErrorCode::NotCritical, op, "needs kappa = -2");
}

}  // namespace

std::map<int, TScanEntry> t_scan(InducedModule& mod, int range) {
  require_critical_S(mod.spec(), "t_scan");
  const int n0 = mod.spec().n0();
  const int u = mod.intern(PBWMonomial());
  std::map<int, TScanEntry> out;
  for (int n = n0 - range; n <= n0 + range; ++n) {
    const SparseVec& w = mod.apply(AffineMode{AffineGen::T, n}, u);
    TScanEntry e;
    if (w.empty()) {
      e.proportional = Rational(0);
    } else if (w.size() == 1 && w.front().first == u) {
      e.proportional = w.front().second;
    } else {
      e.independent = true;
    }
    out.emplace(n, std::move(e));
  }
  return out;
}

std::vector<PBWVector> singular_vectors_T(InducedModule& mod, const LaurentWindow& theta, int count) {
  require_critical_S(mod.spec(), "singular_vectors_T");
  const int n0 = mod.spec().n0();
  const int u = mod.intern(PBWMonomial());
  std::vector<PBWVector> out;
  for (int i = 1; i <= count; ++i) {
    const int n = n0 - i;
    Rational t = theta.coeff(n);
    SparseVec w = mod.apply(AffineMode{AffineGen::T, n}, u);
    Accumulator acc;
    for (const auto& [id, c] : w) acc.add(id, c);
    acc.add(u, -t);
    SparseVec s = acc.take();
    if (s.empty()) {
      throw EngineError(ErrorCode::InvalidArgument, "singular_vectors_T",
                        "vector for index " + std::to_string(n) + " vanished");
    }
    out.push_back(PBWVector{mod.to_lc(s)});
  }
  return out;
}

std::vector<PBWMonomial> truncated_pbw_basis(const InducedFunctional& spec, int max_word, int lo, int hi) {
  std::vector<AffineMode> modes;
  for (AffineGen g : {AffineGen::E, AffineGen::H, AffineGen::F}) {
    for (int n = hi; n >= lo; --n) {
      if (!spec.in_subalgebra(AffineMode{g, n})) modes.push_back(AffineMode{g, n});
    }
  }
  std::vector<PBWMonomial> out;
  PBWMonomial cur;
  // multisets over modes, each built in nondecreasing mode position
  auto rec = [&](auto&& self, std::size_t from, int left) -> void {
    out.push_back(cur);
    if (left == 0) return;
    for (std::size_t k = from; k < modes.size(); ++k) {
      cur.bump(modes[k].gen, modes[k].index, 1);
      self(self, k, left - 1);
      cur.bump(modes[k].gen, modes[k].index, -1);
    }
  };
  rec(rec, 0, max_word);
  std::sort(out.begin(), out.end(), [](const PBWMonomial& a, const PBWMonomial& b) {
    int la = a.word_length();
    int lb = b.word_length();
    if (la != lb) return la < lb;
    return a < b;
  });
  return out;
}

QuotientResult truncated_quotient(InducedModule& mod, const std::vector<PBWVector>& generators,
                                  const TruncationParams& trunc) {
  auto in_box = [&](const PBWMonomial& m, int words, int lo, int hi) {
    if (m.word_length() > words) return false;
    for (const auto& f : m.factors()) {
      if (f.index < lo || f.index > hi) return false;
    }
    return true;
  };
  auto tier = [&](int id) {
    const PBWMonomial& m = mod.monomial(id);
    if (in_box(m, trunc.max_word, trunc.lo, trunc.hi)) return 2;
    if (in_box(m, trunc.max_word + trunc.buffer, trunc.lo - trunc.buffer, trunc.hi + trunc.buffer)) return 1;
    return 0;
  };
  auto expand = [&](const SparseVec& v, const std::function<void(SparseVec)>& emit) {
    for (AffineGen g : {AffineGen::E, AffineGen::H, AffineGen::F}) {
      for (int n = trunc.lo; n <= trunc.hi; ++n) emit(mod.apply(AffineMode{g, n}, v));
    }
  };
  Closure closure(tier, expand, trunc.max_vectors);
  for (const auto& g : generators) closure.add(mod.to_sparse(g.terms));
  closure.run();

  QuotientResult out;
  SpanEngine& span = closure.span();
  auto basis = truncated_pbw_basis(mod.spec(), trunc.max_word, trunc.lo, trunc.hi);
  out.truncated_dim = basis.size();
  out.submodule_dim = span.rank_from_tier(2);
  for (const auto& m : basis) {
    if (!span.is_pivot(mod.intern(m))) out.basis.push_back(m);
  }
  out.saturated = closure.saturated();
  for (const auto& g : generators) out.projected_generators.push_back(PBWVector{mod.to_lc(span.project(mod.to_sparse(g.terms)))});
  return out;
}

}  // namespace wakimoto
