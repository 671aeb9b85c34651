#include <doctest.h>

#include <random>

#include "wakimoto/analysis.hpp"
#include "wakimoto/error.hpp"
#include "wakimoto/induced.hpp"

using namespace wakimoto;

namespace {

Rational q(long long n, long long d = 1) { return Rational(n, d); }

AffineMode E(int n) { return AffineMode{AffineGen::E, n}; }
AffineMode H(int n) { return AffineMode{AffineGen::H, n}; }
AffineMode F(int n) { return AffineMode{AffineGen::F, n}; }

PBWMonomial pbw(std::initializer_list<std::pair<AffineMode, int>> f) {
  PBWMonomial m;
  for (auto [mode, e] : f) m.bump(mode.gen, mode.index, e);
  return m;
}

PBWVector single(const PBWMonomial& m, const Rational& c = Rational(1)) {
  PBWVector v;
  v.terms.add(m, c);
  return v;
}

InducedFunctional s00(const Rational& kappa) { return InducedFunctional::S(0, 0, LevelParam{kappa}, {{0, q(1, 3)}, {1, q(2)}}); }

}  // namespace

TEST_CASE("characters are validated") {
  CHECK_THROWS_AS(InducedFunctional::S(-1, 0, LevelParam{q(1)}, {}), EngineError);
  CHECK_THROWS_AS(InducedFunctional::P(2, 1, LevelParam{q(1)}, {}, {}, {}), EngineError);
  // [h(0), e(1)] = 2 e(1) forces phi(e(1)) = 0.
  CHECK_THROWS_AS(InducedFunctional::S(0, 0, LevelParam{q(1)}, {}, {{1, q(1)}}), EngineError);
  // f(0) lies outside S(0, 0).
  CHECK_THROWS_AS(InducedFunctional::S(0, 0, LevelParam{q(1)}, {}, {}, {{0, q(1)}}), EngineError);
  CHECK_NOTHROW(InducedFunctional::P(1, 2, LevelParam{q(1)}, {{0, q(1)}}, {{1, q(-2)}}, {{2, q(1)}}));
  // [e(0), f(2)] = h(2) must vanish.
  CHECK_THROWS_AS(InducedFunctional::P(1, 2, LevelParam{q(1)}, {{0, q(1)}}, {{2, q(1)}}, {{2, q(1)}}), EngineError);
}

TEST_CASE("affine brackets") {
  Rational k = q(5, 2);
  auto ef = affine_bracket(E(1), F(-1), k);
  CHECK(*ef.mode == H(0));
  CHECK(ef.coeff == q(1));
  CHECK(ef.central == k);
  auto hh = affine_bracket(H(2), H(-2), k);
  CHECK_FALSE(hh.mode);
  CHECK(hh.central == q(4) * k);
  auto he = affine_bracket(H(1), E(2), k);
  CHECK(*he.mode == E(3));
  CHECK(he.coeff == q(2));
  auto fh = affine_bracket(F(0), H(1), k);
  CHECK(*fh.mode == F(1));
  CHECK(fh.coeff == q(2));
  auto ee = affine_bracket(E(1), E(-1), k);
  CHECK(ee.coeff.is_zero());
  CHECK(ee.central.is_zero());
}

TEST_CASE("straightening examples") {
  for (Rational kappa : {q(-2), q(3, 2)}) {
    InducedFunctional spec = s00(kappa);
    InducedModule mod(spec);
    PBWVector u = PBWVector::cyclic();
    // e(1) f(-1) u = f(-1) e(1) u + h(0) u + kappa u, with e(1) u = 0 and h(0) u = (1/3) u.
    PBWVector got = pbw_straighten({E(1), F(-1)}, u, mod);
    CHECK(got == single(PBWMonomial{}, q(1, 3) + kappa));
    CHECK(pbw_straighten({H(0)}, u, mod) == single(PBWMonomial{}, q(1, 3)));
    CHECK(pbw_straighten({}, u, mod) == u);
    CHECK(induced_apply(H(spec.n0()), u, mod) == single(PBWMonomial{}, q(2)));
    for (int n = 1; n <= 4; ++n) CHECK(induced_apply(E(n), u, mod).is_zero());
    CHECK(induced_apply(F(0), u, mod) == single(pbw({{F(0), 1}})));
    // Ordering inside the complement: f(0) e(0) u = e(0) f(0) u - h(0) u.
    PBWVector fe = pbw_straighten({F(0), E(0)}, u, mod);
    PBWVector expect = single(pbw({{E(0), 1}, {F(0), 1}}));
    expect.terms.add(PBWMonomial{}, q(-1, 3));
    CHECK(fe == expect);
  }
  CHECK(to_string(pbw({{E(0), 1}, {F(-1), 2}})) == "e(0) f(-1)^2 u");
}

TEST_CASE("straightening is associative on seeded words") {
  InducedFunctional spec = InducedFunctional::S(1, 0, LevelParam{q(1)}, {{0, q(2)}, {2, q(-1)}});
  InducedModule mod(spec);
  CheckResult r = straightening_associativity(mod, 200, 4, 3, 99);
  CHECK(r.pass);
  // Letter by letter against the whole word.
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> gen(0, 2), idx(-3, 3), len(1, 4);
  for (int t = 0; t < 200; ++t) {
    std::vector<AffineMode> word;
    for (int k = len(rng); k > 0; --k) word.push_back(AffineMode{static_cast<AffineGen>(gen(rng)), idx(rng)});
    PBWVector step = PBWVector::cyclic();
    for (auto it = word.rbegin(); it != word.rend(); ++it) step = induced_apply(*it, step, mod);
    InducedModule fresh(spec);
    CHECK(pbw_straighten(word, PBWVector::cyclic(), fresh) == step);
  }
}

TEST_CASE("bracket fidelity on induced modules") {
  for (Rational kappa : {q(-2), q(3, 2)}) {
    InducedModule a(s00(kappa));
    CHECK(induced_brackets(a, PBWRange{}).pass);
    InducedModule b(InducedFunctional::P(1, 2, LevelParam{kappa}, {{0, q(1)}}, {{1, q(-2)}}, {{2, q(1)}}));
    CHECK(induced_brackets(b, PBWRange{}).pass);
  }
}

TEST_CASE("T is central on induced modules at the critical level") {
  InducedModule mod(s00(q(-2)));
  CHECK(induced_t_centrality(mod, PBWRange{2, -3, 3, 2, 2}, 1).pass);
  InducedModule off(s00(q(1)));
  CHECK_THROWS_AS(induced_apply(AffineMode{AffineGen::T, 0}, PBWVector::cyclic(), off), EngineError);
}

TEST_CASE("tau twist swaps and negates the character") {
  InducedFunctional spec = InducedFunctional::S(1, 1, LevelParam{q(-2)}, {{0, q(1)}, {3, q(4)}});
  CHECK(tau_twist_profile(spec, 6).pass);
  InducedFunctional t = spec.twisted();
  CHECK(t.value(H(3)) == q(-4));
  CHECK(t.twisted().value(H(3)) == q(4));
}

TEST_CASE("T scan on S(0, 0)") {
  InducedModule mod(s00(q(-2)));
  auto scan = t_scan(mod, 3);
  for (int n = -2; n <= 0; ++n) CHECK(scan.at(n).independent);
  // Scalars measured once and frozen.
  CHECK(*scan.at(1).proportional == q(2, 3));
  CHECK(*scan.at(2).proportional == q(2));
  CHECK(scan.at(3).proportional->is_zero());
  CHECK(scan.at(4).proportional->is_zero());
  InducedModule off(s00(q(1)));
  CHECK_THROWS_AS(t_scan(off, 1), EngineError);
}

TEST_CASE("singular vectors and the truncated quotient") {
  InducedFunctional spec = s00(q(-2));
  InducedModule mod(spec);
  LaurentWindow theta = LaurentWindow::from_terms(2, -6, 4, {{-1, q(5)}, {0, q(-1)}, {1, q(2, 3)}, {2, q(2)}});
  CHECK(singular_vectors_T(mod, theta, 0).empty());
  auto sv = singular_vectors_T(mod, theta, 2);
  REQUIRE(sv.size() == 2);
  for (const auto& w : sv) {
    CHECK_FALSE(w.is_zero());
    for (int n = 0; n <= 4; ++n) {
      for (AffineMode x : {E(n + 1), H(n), F(n + 1)}) {
        PBWVector expect = w;
        expect.terms *= spec.value(x);
        CHECK(induced_apply(x, w, mod) == expect);
      }
    }
  }
  TruncationParams tp{3, -3, 2, 0, 200000};
  QuotientResult none = truncated_quotient(mod, {}, tp);
  CHECK(none.basis.size() == none.truncated_dim);
  CHECK(none.submodule_dim == 0);
  QuotientResult all = truncated_quotient(mod, {PBWVector::cyclic()}, tp);
  CHECK(all.basis.empty());
  CHECK(all.saturated);
  QuotientResult quo = truncated_quotient(mod, sv, tp);
  CHECK(quo.saturated);
  for (const auto& p : quo.projected_generators) CHECK(p.is_zero());
  CHECK(quo.basis.size() < quo.truncated_dim);
  CHECK_FALSE(quo.basis.empty());
}

TEST_CASE("noncritical induced module: reach from a creation vector") {
  // h(N0) acts by a nonzero scalar; every probe vector regenerates u inside the truncation.
  InducedModule mod(s00(q(1)));
  TruncationParams tp{2, -2, 2, 1, 200000};
  for (const auto& m : truncated_pbw_basis(mod.spec(), 2, -2, 2)) {
    ProbeResult r = induced_cyclicity_probe(mod, single(m), tp);
    CHECK(r.saturated);
    CHECK(r.reached_dim == r.full_dim);
  }
  ProbeResult zero = induced_cyclicity_probe(mod, PBWVector{}, tp);
  CHECK(zero.reached_dim == 0);
}
