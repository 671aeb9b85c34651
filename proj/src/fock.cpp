#include "wakimoto/fock.hpp"

#include <algorithm>
#include <functional>

#include "wakimoto/error.hpp"

namespace wakimoto {

namespace {

Rational lookup(const std::map<int, Rational>& t, int i) {
  auto it = t.find(i);
  return it == t.end() ? Rational(0) : it->second;
}

int top_nonzero(const std::map<int, Rational>& t, int none) {
  int top = none;
  for (const auto& [i, c] : t) {
    if (!c.is_zero()) top = std::max(top, i);
  }
  return top;
}

void check_support(const std::map<int, Rational>& t, int min_index, const char* name) {
  for (const auto& [i, c] : t) {
    if (i < min_index) {
      throw EngineError(ErrorCode::InvalidArgument, name,
                        "index " + std::to_string(i) + " below " + std::to_string(min_index));
    }
  }
}

void require(bool ok, const char* op, ModuleTag tag, const char* what) {
  if (!ok) {
    throw EngineError(ErrorCode::ModuleMismatch, op, to_string(tag) + " has no " + what + " factor");
  }
}

}  // namespace

int degree(const FockMonomial& m) {
  int d = 0;
  for (const auto& f : m.factors()) d += f.index * f.exp;
  return d;
}

std::string to_string(const FockMonomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (const auto& f : m.factors()) {
    if (!s.empty()) s += " ";
    switch (f.gen) {
      case FockGen::A: s += "a(" + std::to_string(-f.index) + ")"; break;
      case FockGen::AStar: s += "a*(" + std::to_string(-f.index) + ")"; break;
      case FockGen::B: s += "b(" + std::to_string(-f.index) + ")"; break;
    }
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
  }
  return s;
}

Rational WhittakerData::lambda_at(int i) const { return lookup(lambda, i); }
Rational WhittakerData::mu_at(int j) const { return lookup(mu, j); }
int WhittakerData::N() const { return top_nonzero(lambda, -1); }
int WhittakerData::M() const { return top_nonzero(mu, 0); }

void WhittakerData::validate() const {
  check_support(lambda, 0, "WhittakerData.lambda");
  check_support(mu, 1, "WhittakerData.mu");
}

Rational HeisWhittakerData::eta_at(int n) const { return lookup(eta, n); }
int HeisWhittakerData::P() const { return top_nonzero(eta, -1); }

void HeisWhittakerData::validate() const { check_support(eta, 0, "HeisWhittakerData.eta"); }

std::string to_string(ModuleTag tag) {
  switch (tag) {
    case ModuleTag::Vacuum: return "W";
    case ModuleTag::WeylWhittaker: return "M1";
    case ModuleTag::WeylHeis: return "M1xN1";
    case ModuleTag::WeylChi: return "M1xL";
    case ModuleTag::Heis: return "N1";
    case ModuleTag::Chi: return "L";
  }
  return "?";
}

bool has_weyl(ModuleTag tag) {
  return tag == ModuleTag::Vacuum || tag == ModuleTag::WeylWhittaker || tag == ModuleTag::WeylHeis ||
         tag == ModuleTag::WeylChi;
}

bool has_heis(ModuleTag tag) { return tag == ModuleTag::WeylHeis || tag == ModuleTag::Heis; }

bool has_chi(ModuleTag tag) { return tag == ModuleTag::WeylChi || tag == ModuleTag::Chi; }

FockModule FockModule::vacuum() { return FockModule{}; }

FockModule FockModule::weyl_whittaker(WhittakerData w) {
  w.validate();
  FockModule m;
  m.tag = ModuleTag::WeylWhittaker;
  m.weyl = std::move(w);
  return m;
}

FockModule FockModule::weyl_heis(WhittakerData w, HeisWhittakerData h) {
  w.validate();
  h.validate();
  FockModule m;
  m.tag = ModuleTag::WeylHeis;
  m.weyl = std::move(w);
  m.heis = std::move(h);
  return m;
}

FockModule FockModule::weyl_chi(WhittakerData w, ChiModuleData c) {
  w.validate();
  FockModule m;
  m.tag = ModuleTag::WeylChi;
  m.weyl = std::move(w);
  m.chi = std::move(c);
  return m;
}

FockModule FockModule::heis_only(HeisWhittakerData h) {
  h.validate();
  FockModule m;
  m.tag = ModuleTag::Heis;
  m.heis = std::move(h);
  return m;
}

FockModule FockModule::chi_only(ChiModuleData c) {
  FockModule m;
  m.tag = ModuleTag::Chi;
  m.chi = std::move(c);
  return m;
}

int FockModule::support_bound() const {
  int s = 0;
  if (has_weyl(tag)) s = std::max({s, weyl.N(), weyl.M()});
  if (has_heis(tag)) s = std::max(s, heis.P());
  if (has_chi(tag)) s = std::max(s, chi.chi.tail_zero_above());
  return s;
}

FockVector FockVector::cyclic(ModuleTag tag) {
  FockVector v;
  v.tag = tag;
  v.terms.add(FockMonomial{}, Rational(1));
  return v;
}

FockLC weyl_apply_mono(const FockModule& mod, WeylKind kind, int n, const FockMonomial& m) {
  require(has_weyl(mod.tag), "weyl_apply", mod.tag, "Weyl");
  FockLC out;
  if (kind == WeylKind::A) {
    if (n <= -1) {
      out.add(m.with(FockGen::A, -n, 1), Rational(1));
      return out;
    }
    out.add(m, mod.weyl.lambda_at(n));
    int e = m.exponent(FockGen::AStar, n);
    if (e > 0) out.add(m.with(FockGen::AStar, n, -1), Rational(e));
    return out;
  }
  if (n <= 0) {
    out.add(m.with(FockGen::AStar, -n, 1), Rational(1));
    return out;
  }
  out.add(m, mod.weyl.mu_at(n));
  int e = m.exponent(FockGen::A, n);
  if (e > 0) out.add(m.with(FockGen::A, n, -1), Rational(-e));
  return out;
}

FockLC heis_apply_mono(const FockModule& mod, int n, const FockMonomial& m) {
  FockLC out;
  if (has_chi(mod.tag)) {
    out.add(m, mod.chi.chi.coeff(n));
    return out;
  }
  require(has_heis(mod.tag), "heis_apply", mod.tag, "Heisenberg");
  if (n <= -1) {
    out.add(m.with(FockGen::B, -n, 1), Rational(1));
    return out;
  }
  out.add(m, mod.heis.eta_at(n));
  if (n >= 1) {
    int e = m.exponent(FockGen::B, n);
    if (e > 0) out.add(m.with(FockGen::B, n, -1), Rational(2) * mod.heis.level * Rational(n) * Rational(e));
  }
  return out;
}

namespace {

FockVector apply_each(const FockVector& v, const std::function<FockLC(const FockMonomial&)>& op) {
  FockVector out;
  out.tag = v.tag;
  for (const auto& [m, c] : v.terms.terms()) out.terms.add_scaled(op(m), c);
  return out;
}

void check_tag(const FockModule& mod, const FockVector& v, const char* op) {
  if (mod.tag != v.tag) {
    throw EngineError(ErrorCode::ModuleMismatch, op,
                      "vector of " + to_string(v.tag) + " applied in " + to_string(mod.tag));
  }
}

}  // namespace

FockVector weyl_apply(const FockModule& mod, WeylKind kind, int n, const FockVector& v) {
  check_tag(mod, v, "weyl_apply");
  require(has_weyl(mod.tag), "weyl_apply", mod.tag, "Weyl");
  return apply_each(v, [&](const FockMonomial& m) { return weyl_apply_mono(mod, kind, n, m); });
}

FockVector heis_apply(const FockModule& mod, int n, const FockVector& v) {
  check_tag(mod, v, "heis_apply");
  require(has_heis(mod.tag) || has_chi(mod.tag), "heis_apply", mod.tag, "Heisenberg");
  return apply_each(v, [&](const FockMonomial& m) { return heis_apply_mono(mod, n, m); });
}

std::vector<FockMonomial> basis_up_to(ModuleTag tag, int D, std::optional<int> cap) {
  if (D < 0) throw EngineError(ErrorCode::InvalidArgument, "basis_up_to", "D < 0");
  if (has_weyl(tag) && !cap) {
    throw EngineError(ErrorCode::MissingCap, "basis_up_to", "a*(0) exponent cap required for " + to_string(tag));
  }
  // Generators (gen, index) with their degree; a*(0) is handled separately.
  std::vector<std::pair<FockGen, int>> gens;
  if (has_weyl(tag)) {
    for (int n = 1; n <= D; ++n) gens.emplace_back(FockGen::A, n);
    for (int n = 1; n <= D; ++n) gens.emplace_back(FockGen::AStar, n);
  }
  if (has_heis(tag)) {
    for (int n = 1; n <= D; ++n) gens.emplace_back(FockGen::B, n);
  }
  std::vector<FockMonomial> out;
  std::function<void(std::size_t, int, FockMonomial&)> rec = [&](std::size_t k, int budget, FockMonomial& m) {
    if (k == gens.size()) {
      out.push_back(m);
      return;
    }
    auto [g, idx] = gens[k];
    rec(k + 1, budget, m);
    int e = 0;
    while (budget - idx * (e + 1) >= 0) {
      ++e;
      m.bump(g, idx, 1);
      rec(k + 1, budget - idx * e, m);
    }
    if (e > 0) m.bump(g, idx, -e);
  };
  int zero_cap = has_weyl(tag) ? *cap : 0;
  for (int p = 0; p <= zero_cap; ++p) {
    FockMonomial m;
    if (p > 0) m.bump(FockGen::AStar, 0, p);
    rec(0, D, m);
  }
  std::sort(out.begin(), out.end(), [](const FockMonomial& a, const FockMonomial& b) {
    int da = degree(a);
    int db = degree(b);
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

}  // namespace wakimoto
