#include "wakimoto/analysis.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "wakimoto/error.hpp"
#include "wakimoto/schur.hpp"
#include "wakimoto/span.hpp"

namespace wakimoto {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::IrreducibleI: return "IRREDUCIBLE_I";
    case Verdict::IrreducibleII: return "IRREDUCIBLE_II";
    case Verdict::IrreducibleIII: return "IRREDUCIBLE_III";
    case Verdict::Reducible: return "REDUCIBLE";
  }
  return "?";
}

Classification classify_chi(const LaurentWindow& chi) {
  auto need = [&](int n) {
    if (!chi.determined(n)) {
      throw EngineError(ErrorCode::WindowTooSmall, "classify_chi",
                        "coefficient chi_" + std::to_string(n) + " is not in the window");
    }
    return chi.coeff(n);
  };
  // Every coefficient above 0 must be known before the top index can be trusted.
  for (int n = 1; n <= chi.tail_zero_above(); ++n) need(n);
  Classification c;
  auto top = chi.top_index();
  if (top && *top >= 1) {
    c.verdict = Verdict::IrreducibleI;
    c.p = *top;
    c.chi_p = chi.coeff(*top);
    return c;
  }
  Rational chi0 = need(0);
  c.chi_0 = chi0;
  if (chi0 == Rational(1) || !chi0.is_integer()) {
    c.verdict = Verdict::IrreducibleII;
    return c;
  }
  if (chi0 >= Rational(2)) {
    if (!chi0.is_small() || chi0.small_num() > (1 << 20)) {
      throw EngineError(ErrorCode::WindowTooSmall, "classify_chi", "chi_0 too large to evaluate S_ell");
    }
    const int ell = static_cast<int>(chi0.small_num()) - 1;
    SchurInput in;
    in.r = ell;
    for (int k = 1; k <= ell; ++k) in.x.push_back(-need(-k));
    Rational s = schur_rec(in);
    c.ell = ell;
    c.schur = s;
    c.verdict = s.is_zero() ? Verdict::Reducible : Verdict::IrreducibleIII;
    return c;
  }
  c.verdict = Verdict::Reducible;
  return c;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

template <class LC, class F>
std::string lc_string(const LC& v, F mono) {
  if (v.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : v.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ") " + mono(m);
  }
  return out;
}

}  // namespace

std::string to_string(const FockLC& v) {
  return lc_string(v, [](const FockMonomial& m) { return to_string(m); });
}

std::string to_string(const PBWLC& v) {
  return lc_string(v, [](const PBWMonomial& m) { return to_string(m); });
}

namespace {

constexpr AffineGen kSl2[] = {AffineGen::E, AffineGen::H, AffineGen::F};

/// [x, y] = sum c z + scalar, checked as an operator identity.
struct Identity {
  AffineMode x;
  AffineMode y;
  std::vector<std::pair<AffineMode, Rational>> rhs;
  Rational scalar;
  std::string label;
};

/// Collects the first failure and a failure count.
struct FailureLog {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::optional<std::string> first_label;
  std::optional<std::string> offending;
  std::optional<std::string> discrepancy;
};

template <class Eng, class ToString>
void check_identity(Eng& eng, int id, const Identity& ident, FailureLog& log, ToString to_str) {
  AccumulatorPool::Lease acc(eng.pool());
  SparseVec yv = eng.apply(ident.y, id);
  eng.apply_into(ident.x, yv, Rational(1), *acc);
  SparseVec xv = eng.apply(ident.x, id);
  eng.apply_into(ident.y, xv, Rational(-1), *acc);
  for (const auto& [z, c] : ident.rhs) acc->add_scaled(eng.apply(z, id), -c);
  if (!ident.scalar.is_zero()) acc->add(id, -ident.scalar);
  ++log.checked;
  if (acc->is_zero()) return;
  ++log.failed;
  if (!log.first_label) {
    SparseVec d = acc->take();
    log.first_label = ident.label;
    log.offending = to_str(eng.to_lc({{id, Rational(1)}}));
    log.discrepancy = to_str(eng.to_lc(d));
  }
}

CheckResult finish(std::string name, std::string description, const FailureLog& log) {
  CheckResult r;
  r.name = std::move(name);
  r.description = std::move(description);
  r.pass = log.failed == 0 && log.checked > 0;
  r.detail = std::to_string(log.checked) + " evaluations, " + std::to_string(log.failed) + " failed";
  if (log.first_label) {
    r.detail += "; first failure " + *log.first_label;
    r.offending = log.offending;
    r.discrepancy = log.discrepancy;
  }
  return r;
}

std::string label_of(AffineMode x, AffineMode y) { return "[" + to_string(x) + ", " + to_string(y) + "]"; }

/// The six sl2 identities for one (n, m); symmetric ones only for n <= m.
std::vector<Identity> sl2_identities(int n, int m, const Rational& kappa) {
  std::vector<Identity> out;
  auto add = [&](AffineGen gx, AffineGen gy) {
    AffineMode x{gx, n};
    AffineMode y{gy, m};
    BracketResult b = affine_bracket(x, y, kappa);
    Identity id{x, y, {}, b.central, label_of(x, y)};
    if (b.mode && !b.coeff.is_zero()) id.rhs.emplace_back(*b.mode, b.coeff);
    out.push_back(std::move(id));
  };
  add(AffineGen::E, AffineGen::F);
  add(AffineGen::H, AffineGen::E);
  add(AffineGen::H, AffineGen::F);
  if (n <= m) {
    add(AffineGen::H, AffineGen::H);
    add(AffineGen::E, AffineGen::E);
    add(AffineGen::F, AffineGen::F);
  }
  return out;
}

std::vector<int> basis_ids(const WakimotoContext& ctx, int degree, int cap) {
  std::vector<int> ids;
  for (const auto& m : basis_up_to(ctx.module().tag, degree, cap)) ids.push_back(ctx.engine().intern(m));
  return ids;
}

auto fock_str = [](const FockLC& v) { return to_string(v); };
auto pbw_str = [](const PBWLC& v) { return to_string(v); };

std::string range_text(const SuiteRange& r) {
  return "basis degree <= " + std::to_string(r.degree) + " (a*(0) cap " + std::to_string(r.cap) +
         "), |n| <= " + std::to_string(r.n_range) + ", |m| <= " + std::to_string(r.m_range);
}

}  // namespace

CheckResult sl2_brackets(const WakimotoContext& ctx, const SuiteRange& r) {
  WakimotoEngine& eng = ctx.engine();
  FailureLog log;
  const Rational& kappa = ctx.level().kappa;
  std::vector<Identity> idents;
  for (int n = -r.n_range; n <= r.n_range; ++n) {
    for (int m = -r.m_range; m <= r.m_range; ++m) {
      for (auto& i : sl2_identities(n, m, kappa)) idents.push_back(std::move(i));
    }
  }
  for (int id : basis_ids(ctx, r.degree, r.cap)) {
    for (const auto& ident : idents) check_identity(eng, id, ident, log, fock_str);
  }
  return finish("sl2-brackets", "[x(n), y(m)] = [x, y](n + m) + n (x, y) kappa delta_{n+m,0} on " + range_text(r),
                log);
}

CheckResult sugawara_affine(const WakimotoContext& ctx, const SuiteRange& r) {
  if (ctx.level().critical()) {
    throw EngineError(ErrorCode::CriticalLevel, "sugawara_affine", "L(n) is undefined at kappa = -2");
  }
  WakimotoEngine& eng = ctx.engine();
  FailureLog log;
  for (int id : basis_ids(ctx, r.degree, r.cap)) {
    for (int n = -r.n_range; n <= r.n_range; ++n) {
      for (AffineGen g : kSl2) {
        for (int m = -r.m_range; m <= r.m_range; ++m) {
          AffineMode x{AffineGen::L, n};
          AffineMode y{g, m};
          Identity ident{x, y, {{AffineMode{g, n + m}, Rational(-m)}}, Rational(0), label_of(x, y)};
          check_identity(eng, id, ident, log, fock_str);
        }
      }
    }
  }
  return finish("sugawara-affine", "[L(n), x(m)] = -m x(n + m) on " + range_text(r), log);
}

CheckResult virasoro_central_charge(const WakimotoContext& ctx, const SuiteRange& r, Rational* extracted) {
  if (ctx.level().critical()) {
    throw EngineError(ErrorCode::CriticalLevel, "virasoro_central_charge", "L(n) is undefined at kappa = -2");
  }
  WakimotoEngine& eng = ctx.engine();
  const Rational& kappa = ctx.level().kappa;
  const Rational expected = Rational(3) * kappa / (kappa + Rational(2));
  FailureLog log;
  std::optional<Rational> found;
  bool consistent = true;
  auto L = [](int n) { return AffineMode{AffineGen::L, n}; };
  for (int id : basis_ids(ctx, r.degree, r.cap)) {
    check_identity(eng, id, Identity{L(1), L(-1), {{L(0), Rational(2)}}, Rational(0), "[L(1), L(-1)]"}, log,
                   fock_str);
    // [L(2), L(-2)] - 4 L(0) must be a scalar; it equals c/2.
    AccumulatorPool::Lease acc(eng.pool());
    SparseVec a = eng.apply(L(-2), id);
    eng.apply_into(L(2), a, Rational(1), *acc);
    SparseVec b = eng.apply(L(2), id);
    eng.apply_into(L(-2), b, Rational(-1), *acc);
    acc->add_scaled(eng.apply(L(0), id), Rational(-4));
    SparseVec d = acc->take();
    ++log.checked;
    bool scalar = d.empty() || (d.size() == 1 && d.front().first == id);
    Rational c = d.empty() ? Rational(0) : d.front().second * Rational(2);
    if (!scalar || (found && *found != c)) {
      consistent = false;
      ++log.failed;
      if (!log.first_label) {
        log.first_label = "[L(2), L(-2)] - 4 L(0) is not one scalar";
        log.offending = to_string(eng.to_lc({{id, Rational(1)}}));
        log.discrepancy = to_string(eng.to_lc(d));
      }
      continue;
    }
    found = c;
  }
  CheckResult res = finish("virasoro-central-charge",
                           "[L(1), L(-1)] = 2 L(0) and [L(2), L(-2)] - 4 L(0) = (c/2) Id with c = 3 kappa/(kappa + 2), on " +
                               range_text(r),
                           log);
  if (found) {
    res.detail += "; extracted c = " + found->str() + ", expected " + expected.str();
    if (extracted) *extracted = *found;
  }
  res.pass = res.pass && consistent && found && *found == expected;
  return res;
}

CheckResult t_centrality(const WakimotoContext& ctx, const SuiteRange& r) {
  if (!ctx.level().critical()) {
    throw EngineError(ErrorCode::NotCritical, "t_centrality", "T(n) needs kappa = -2");
  }
  WakimotoEngine& eng = ctx.engine();
  FailureLog log;
  for (int id : basis_ids(ctx, r.degree, r.cap)) {
    for (int n = -r.n_range; n <= r.n_range; ++n) {
      for (AffineGen g : kSl2) {
        for (int m = -r.m_range; m <= r.m_range; ++m) {
          AffineMode x{AffineGen::T, n};
          AffineMode y{g, m};
          check_identity(eng, id, Identity{x, y, {}, Rational(0), label_of(x, y)}, log, fock_str);
        }
      }
    }
  }
  return finish("t-centrality", "[T(n), x(m)] = 0 on " + range_text(r), log);
}

CheckResult tau_automorphism(int range) {
  FailureLog log;
  // Generic nonzero level so that central terms are exercised.
  const Rational kappa(7, 3);
  for (int n = -range; n <= range; ++n) {
    for (int m = -range; m <= range; ++m) {
      for (AffineGen gx : kSl2) {
        for (AffineGen gy : kSl2) {
          AffineMode x{gx, n};
          AffineMode y{gy, m};
          BracketResult lhs = affine_bracket(x, y, kappa);
          auto [tx, sx] = tau_mode(x);
          auto [ty, sy] = tau_mode(y);
          BracketResult img = affine_bracket(tx, ty, kappa);
          // tau[x, y] = sx sy [tau x, tau y]
          bool ok = img.central * sx * sy == lhs.central;
          if (lhs.mode) {
            auto [tz, sz] = tau_mode(*lhs.mode);
            ok = ok && img.mode && *img.mode == tz && img.coeff * sx * sy == lhs.coeff * sz;
          } else {
            ok = ok && (!img.mode || img.coeff.is_zero());
          }
          auto [ttx, s2] = tau_mode(tx);
          ok = ok && ttx == x && s2 * sx == Rational(1);
          ++log.checked;
          if (!ok) {
            ++log.failed;
            if (!log.first_label) log.first_label = label_of(x, y);
          }
        }
      }
    }
  }
  return finish("tau-automorphism",
                "tau maps each bracket [x(n), y(m)] to the bracket of the images, and tau^2 = id, |n|, |m| <= " +
                    std::to_string(range),
                log);
}

CheckResult negative_control(const WakimotoContext& ctx, const SuiteRange& r) {
  WakimotoOptions bad = ctx.options();
  bad.a_star_annihilation_start = 0;
  WakimotoContext broken(ctx.level(), ctx.module(), bad);
  FailureLog log;
  std::size_t ef_fail = 0;
  const Rational& kappa = ctx.level().kappa;
  for (int id : basis_ids(broken, r.degree, r.cap)) {
    for (int n = -r.n_range; n <= r.n_range; ++n) {
      for (auto& ident : sl2_identities(n, -n, kappa)) {
        std::size_t before = log.failed;
        check_identity(broken.engine(), id, ident, log, fock_str);
        if (log.failed > before && ident.x.gen == AffineGen::E && ident.y.gen == AffineGen::F) ++ef_fail;
      }
    }
  }
  CheckResult res;
  res.name = "negative-control";
  res.description = "with a*(0) moved to the annihilation side the sl2 identities must fail on [e(n), f(-n)], " +
                    range_text(r);
  res.pass = ef_fail > 0;
  res.detail = std::to_string(log.failed) + " of " + std::to_string(log.checked) + " evaluations failed (" +
               std::to_string(ef_fail) + " on [e(n), f(-n)])";
  if (log.first_label) res.detail += "; first failure " + *log.first_label;
  return res;
}

VerificationReport bracket_suite(const WakimotoContext& ctx, const SuiteRange& r) {
  VerificationReport rep;
  rep.suite = "brackets";
  rep.checks.push_back(sl2_brackets(ctx, r));
  if (ctx.level().critical()) {
    rep.checks.push_back(t_centrality(ctx, r));
  } else {
    rep.checks.push_back(sugawara_affine(ctx, r));
    rep.checks.push_back(virasoro_central_charge(ctx, r));
  }
  rep.checks.push_back(tau_automorphism(5));
  return rep;
}

std::vector<PBWMonomial> pbw_range_basis(const InducedModule& mod, const PBWRange& r) {
  return truncated_pbw_basis(mod.spec(), r.max_word, r.lo, r.hi);
}

namespace {

std::string pbw_range_text(const PBWRange& r) {
  return "PBW monomials of word length <= " + std::to_string(r.max_word) + " with modes in [" + std::to_string(r.lo) +
         ", " + std::to_string(r.hi) + "]";
}

}  // namespace

CheckResult induced_brackets(InducedModule& mod, const PBWRange& r) {
  FailureLog log;
  const Rational& kappa = mod.spec().level().kappa;
  std::vector<Identity> idents;
  for (int n = -r.n_range; n <= r.n_range; ++n) {
    for (int m = -r.m_range; m <= r.m_range; ++m) {
      for (auto& i : sl2_identities(n, m, kappa)) idents.push_back(std::move(i));
    }
  }
  for (const auto& b : pbw_range_basis(mod, r)) {
    int id = mod.intern(b);
    for (const auto& ident : idents) check_identity(mod, id, ident, log, pbw_str);
  }
  return finish("induced-brackets",
                "[x(n), y(m)] acts as the affine bracket, |n| <= " + std::to_string(r.n_range) + ", |m| <= " +
                    std::to_string(r.m_range) + ", on " + pbw_range_text(r),
                log);
}

CheckResult induced_t_centrality(InducedModule& mod, const PBWRange& r, int n_center) {
  if (!mod.spec().level().critical()) {
    throw EngineError(ErrorCode::NotCritical, "induced_t_centrality", "T(n) needs kappa = -2");
  }
  FailureLog log;
  for (const auto& b : pbw_range_basis(mod, r)) {
    int id = mod.intern(b);
    for (int n = n_center - r.n_range; n <= n_center + r.n_range; ++n) {
      for (AffineGen g : kSl2) {
        for (int m = -r.m_range; m <= r.m_range; ++m) {
          AffineMode x{AffineGen::T, n};
          AffineMode y{g, m};
          check_identity(mod, id, Identity{x, y, {}, Rational(0), label_of(x, y)}, log, pbw_str);
        }
      }
    }
  }
  return finish("induced-t-centrality",
                "[T(n), x(m)] = 0 for |n - " + std::to_string(n_center) + "| <= " + std::to_string(r.n_range) +
                    ", |m| <= " + std::to_string(r.m_range) + " on " + pbw_range_text(r),
                log);
}

CheckResult straightening_associativity(InducedModule& mod, int words, int max_len, int index_range,
                                        unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> gen_d(0, 2);
  std::uniform_int_distribution<int> idx_d(-index_range, index_range);
  std::uniform_int_distribution<int> len_d(2, std::max(2, max_len));
  // The second evaluation runs in a fresh module so that no memoized result is shared.
  InducedModule fresh(mod.spec());
  const PBWVector u = PBWVector::cyclic();
  FailureLog log;
  for (int w = 0; w < words; ++w) {
    std::vector<AffineMode> word(static_cast<std::size_t>(len_d(rng)));
    for (auto& m : word) m = AffineMode{kSl2[gen_d(rng)], idx_d(rng)};
    std::uniform_int_distribution<std::size_t> pos_d(0, word.size() - 2);
    std::size_t k = pos_d(rng);
    // x y rest = y x rest + [x, y] rest, evaluated from the swapped word.
    PBWVector direct = pbw_straighten(word, u, mod);
    std::vector<AffineMode> swapped = word;
    std::swap(swapped[k], swapped[k + 1]);
    PBWVector other = pbw_straighten(swapped, u, fresh);
    BracketResult b = affine_bracket(word[k], word[k + 1], mod.spec().level().kappa);
    std::vector<AffineMode> prefix(word.begin(), word.begin() + static_cast<long>(k));
    std::vector<AffineMode> suffix(word.begin() + static_cast<long>(k) + 2, word.end());
    PBWVector tail = pbw_straighten(suffix, u, fresh);
    PBWLC extra;
    if (b.mode && !b.coeff.is_zero()) {
      std::vector<AffineMode> with = prefix;
      with.push_back(*b.mode);
      extra.add_scaled(pbw_straighten(with, tail, fresh).terms, b.coeff);
    }
    if (!b.central.is_zero()) extra.add_scaled(pbw_straighten(prefix, tail, fresh).terms, b.central);
    PBWLC diff = direct.terms - other.terms - extra;
    ++log.checked;
    if (!diff.is_zero()) {
      ++log.failed;
      if (!log.first_label) {
        std::string s;
        for (auto m : word) s += to_string(m) + " ";
        log.first_label = "word " + s;
        log.discrepancy = to_string(diff);
      }
    }
  }
  return finish("straightening-consistency",
                std::to_string(words) + " seeded words of length <= " + std::to_string(max_len) + ", modes in [-" +
                    std::to_string(index_range) + ", " + std::to_string(index_range) +
                    "], evaluated directly and with one adjacent pair swapped plus its bracket",
                log);
}

CheckResult tau_twist_profile(const InducedFunctional& spec, int window) {
  InducedFunctional tw = spec.twisted();
  InducedModule mod(spec);
  const PBWVector u = PBWVector::cyclic();
  FailureLog log;
  for (AffineGen g : kSl2) {
    for (int n = -window; n <= window; ++n) {
      AffineMode x{g, n};
      if (!tw.in_subalgebra(x)) continue;
      auto [tx, s] = tau_mode(x);
      PBWVector got = induced_apply(tx, u, mod);
      PBWLC lhs = got.terms * s;
      PBWLC rhs;
      rhs.add(PBWMonomial(), tw.value(x));
      ++log.checked;
      if (!(lhs - rhs).is_zero()) {
        ++log.failed;
        if (!log.first_label) {
          log.first_label = to_string(x);
          log.discrepancy = to_string(lhs - rhs);
        }
      }
    }
  }
  return finish("tau-twist-profile",
                "on the twisted cyclic vector x(n) acts by the swapped and negated character, |n| <= " +
                    std::to_string(window),
                log);
}

CheckResult theta_identity(const WakimotoContext& ctx, const LaurentWindow& chi, int n_lo, int n_hi,
                           const SuiteRange& basis) {
  if (!ctx.level().critical()) {
    throw EngineError(ErrorCode::NotCritical, "theta_identity", "T(n) needs kappa = -2");
  }
  LaurentWindow theta = theta_from_chi(chi, IndexWindow{n_lo, n_hi});
  WakimotoEngine& eng = ctx.engine();
  FailureLog log;
  int used = 0;
  for (int n = n_lo; n <= n_hi; ++n) {
    if (!theta.determined(n)) continue;
    ++used;
    Rational t = theta.coeff(n);
    for (int id : basis_ids(ctx, basis.degree, basis.cap)) {
      AccumulatorPool::Lease acc(eng.pool());
      acc->add_scaled(eng.apply(AffineMode{AffineGen::T, n}, id), Rational(1));
      acc->add(id, -t);
      ++log.checked;
      if (!acc->is_zero()) {
        ++log.failed;
        if (!log.first_label) {
          log.first_label = "T(" + std::to_string(n) + ") - theta_" + std::to_string(n);
          log.offending = to_string(eng.to_lc({{id, Rational(1)}}));
          log.discrepancy = to_string(eng.to_lc(acc->take()));
        }
      }
    }
  }
  CheckResult r = finish("theta-identity",
                         "T(n) = theta_n Id on W (x) L(-chi) with theta = chi^2/2 + chi', every determined n in [" +
                             std::to_string(n_lo) + ", " + std::to_string(n_hi) + "], basis degree <= " +
                             std::to_string(basis.degree) + " (a*(0) cap " + std::to_string(basis.cap) + ")",
                         log);
  r.detail += "; " + std::to_string(used) + " indices determined";
  return r;
}

WhittakerProfile whittaker_profile(const WakimotoContext& ctx, int window) {
  const FockModule& mod = ctx.module();
  if (mod.tag != ModuleTag::WeylHeis) {
    throw EngineError(ErrorCode::ModuleMismatch, "whittaker_profile", "needs Whittaker data on both factors");
  }
  const WhittakerData& w = mod.weyl;
  const HeisWhittakerData& h = mod.heis;
  const int N = w.N();
  const int M = w.M();
  const int P = h.P();
  WhittakerProfile prof;
  prof.q = std::max(M, N + 1);
  prof.r = std::max({M + N + 1, 2 * M, P + 1});
  prof.window = window;
  WakimotoEngine& eng = ctx.engine();
  const int u = eng.intern(FockMonomial());
  auto measure = [&](AffineMode m) {
    const SparseVec& v = eng.apply(m, u);
    if (v.empty()) return Rational(0);
    if (v.size() == 1 && v.front().first == u) return v.front().second;
    throw EngineError(ErrorCode::NotEigenvector, "whittaker_profile",
                      to_string(m) + " does not act by a scalar on the cyclic vector");
  };
  const Rational& kappa = ctx.level().kappa;
  for (int i = 0; i <= window; ++i) {
    prof.measured_a.push_back(measure(AffineMode{AffineGen::E, i}));
    prof.measured_b.push_back(measure(AffineMode{AffineGen::H, prof.q + i}));
    prof.measured_c.push_back(measure(AffineMode{AffineGen::F, prof.r + i}));

    prof.predicted_a.push_back(w.lambda_at(i));
    const int sb = prof.q + i;
    Rational b = h.eta_at(sb);
    for (int k = 0; k < sb; ++k) b -= Rational(2) * w.lambda_at(k) * w.mu_at(sb - k);
    prof.predicted_b.push_back(b);
    const int sc = prof.r + i;
    Rational c = -(kappa * Rational(sc) * w.mu_at(sc));
    for (int k1 = 1; k1 <= sc; ++k1) {
      for (int k2 = 1; k1 + k2 <= sc; ++k2) c -= w.mu_at(k1) * w.mu_at(k2) * w.lambda_at(sc - k1 - k2);
    }
    for (int j1 = 1; j1 <= sc; ++j1) c += w.mu_at(j1) * h.eta_at(sc - j1);
    prof.predicted_c.push_back(c);
  }
  prof.match = prof.measured_a == prof.predicted_a && prof.measured_b == prof.predicted_b &&
               prof.measured_c == prof.predicted_c;
  return prof;
}

ModeWindow default_mode_window(const WakimotoContext& ctx, int D) {
  return ModeWindow{-(D + 1), ctx.module().support_bound() + 1};
}

namespace {

struct FockProbe {
  const WakimotoContext& ctx;
  ProbeParams p;
  ModeWindow modes;
  std::vector<FockMonomial> basis;

  FockProbe(const WakimotoContext& c, const ProbeParams& params)
      : ctx(c), p(params), modes(params.modes.value_or(default_mode_window(c, params.D))),
        basis(basis_up_to(c.module().tag, params.D, params.cap)) {}

  int tier(int id) const {
    const FockMonomial& m = ctx.engine().monomial(id);
    const int d = degree(m);
    const int z = m.exponent(FockGen::AStar, 0);
    if (d <= p.D && z <= p.cap) return 2;
    if (d <= p.D + p.buffer && z <= p.cap + p.buffer) return 1;
    return 0;
  }

  Closure closure_of(const SparseVec& start) {
    WakimotoEngine& eng = ctx.engine();
    auto expand = [this, &eng](const SparseVec& v, const std::function<void(SparseVec)>& emit) {
      for (AffineGen g : kSl2) {
        for (int n = modes.lo; n <= modes.hi; ++n) emit(eng.apply(AffineMode{g, n}, v));
      }
    };
    Closure c([this](int id) { return tier(id); }, expand, p.max_vectors);
    c.add(start);
    c.run();
    return c;
  }
};

}  // namespace

ProbeResult cyclicity_probe(const WakimotoContext& ctx, const FockVector& cyclic, const ProbeParams& p) {
  if (cyclic.tag != ctx.module().tag) {
    throw EngineError(ErrorCode::ModuleMismatch, "cyclicity_probe", "vector does not belong to the module");
  }
  FockProbe probe(ctx, p);
  ProbeResult r;
  r.full_dim = probe.basis.size();
  if (cyclic.is_zero()) {
    r.saturated = true;
    return r;
  }
  Closure c = probe.closure_of(ctx.engine().to_sparse(cyclic.terms));
  r.reached_dim = c.span().rank_from_tier(2);
  r.saturated = c.saturated();
  r.candidates_tried = 1;
  return r;
}

ProbeResult submodule_probe(const WakimotoContext& ctx, const ProbeParams& p) {
  FockProbe probe(ctx, p);
  WakimotoEngine& eng = ctx.engine();
  ProbeResult r;
  r.full_dim = probe.basis.size();
  r.saturated = true;
  std::size_t limit = p.max_candidates == 0 ? probe.basis.size() : std::min(p.max_candidates, probe.basis.size());
  // basis[0] is the cyclic vector itself.
  for (std::size_t k = 0; k < limit; ++k) {
    SparseVec start{{eng.intern(probe.basis[k]), Rational(1)}};
    Closure c = probe.closure_of(start);
    ++r.candidates_tried;
    std::size_t reached = c.span().rank_from_tier(2);
    if (reached < r.full_dim) {
      r.reached_dim = reached;
      r.saturated = c.saturated();
      r.witness = FockVector{ctx.module().tag, FockLC(probe.basis[k])};
      for (const auto& m : probe.basis) {
        if (!c.span().contains({{eng.intern(m), Rational(1)}})) {
          r.excluded = m;
          break;
        }
      }
      return r;
    }
    r.reached_dim = reached;
    r.saturated = r.saturated && c.saturated();
  }
  return r;
}

ProbeResult induced_cyclicity_probe(InducedModule& mod, const PBWVector& v, const TruncationParams& t) {
  ProbeResult r;
  if (v.is_zero()) {
    r.full_dim = truncated_pbw_basis(mod.spec(), t.max_word, t.lo, t.hi).size();
    r.saturated = true;
    return r;
  }
  QuotientResult q = truncated_quotient(mod, {v}, t);
  r.reached_dim = q.submodule_dim;
  r.full_dim = q.truncated_dim;
  r.saturated = q.saturated;
  r.candidates_tried = 1;
  return r;
}

}  // namespace wakimoto
