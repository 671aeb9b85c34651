#include <doctest.h>

#include <algorithm>
#include <random>

#include "wakimoto/analysis.hpp"
#include "wakimoto/error.hpp"

using namespace wakimoto;

namespace {

Rational q(long long n, long long d = 1) { return Rational(n, d); }

LaurentWindow chi_of(std::map<int, Rational> t, int lo = -12) { return LaurentWindow::from_terms(1, lo, 1, t); }

WakimotoContext chi_ctx(const LaurentWindow& chi) {
  return WakimotoContext(LevelParam{q(-2)}, FockModule::weyl_chi(WhittakerData{}, ChiModuleData{laurent_scale(chi, q(-1))}));
}

WakimotoContext heis_ctx(const Rational& kappa, std::map<int, Rational> lambda, std::map<int, Rational> mu,
                         std::map<int, Rational> eta) {
  WhittakerData w;
  w.lambda = std::move(lambda);
  w.mu = std::move(mu);
  HeisWhittakerData h;
  h.eta = std::move(eta);
  h.level = kappa + q(2);
  return WakimotoContext(LevelParam{kappa}, FockModule::weyl_heis(w, h));
}

FockVector scaled(FockVector v, const Rational& c) {
  v.terms *= c;
  return v;
}

}  // namespace

TEST_CASE("classifier examples") {
  Classification i = classify_chi(chi_of({{1, q(5)}}));
  CHECK(i.verdict == Verdict::IrreducibleI);
  CHECK(*i.p == 1);
  CHECK(*i.chi_p == q(5));
  CHECK(classify_chi(chi_of({{0, q(1, 2)}, {-3, q(7)}})).verdict == Verdict::IrreducibleII);
  CHECK(classify_chi(chi_of({{0, q(1)}})).verdict == Verdict::IrreducibleII);
  Classification r = classify_chi(chi_of({{0, q(2)}}));
  CHECK(r.verdict == Verdict::Reducible);
  CHECK(*r.ell == 1);
  CHECK(r.schur->is_zero());
  CHECK(classify_chi(chi_of({{0, q(2)}, {-1, q(4)}})).verdict == Verdict::IrreducibleIII);
  // ell = 2: S_2(x1, x2) = (x1^2 + x2) / 2 with x_k = -chi_{-k}.
  Classification iii = classify_chi(chi_of({{0, q(3)}, {-1, q(1)}, {-2, q(-1, 2)}}));
  CHECK(iii.verdict == Verdict::IrreducibleIII);
  CHECK(*iii.schur == q(3, 4));
  CHECK(classify_chi(chi_of({{0, q(3)}, {-1, q(1)}, {-2, q(1)}})).verdict == Verdict::Reducible);
  CHECK(classify_chi(chi_of({})).verdict == Verdict::Reducible);
  CHECK(classify_chi(chi_of({{0, q(-2)}})).verdict == Verdict::Reducible);
  CHECK(to_string(Verdict::IrreducibleI) == "IRREDUCIBLE_I");
}

TEST_CASE("classifier needs the coefficients it reads") {
  CHECK_THROWS_AS(classify_chi(chi_of({{0, q(4)}}, -2)), EngineError);
  CHECK_NOTHROW(classify_chi(chi_of({{0, q(4)}}, -3)));
  LaurentWindow gap(1, -4, 0, 2);  // chi_1, chi_2 unknown
  CHECK_THROWS_AS(classify_chi(gap), EngineError);
}

TEST_CASE("classifier ignores insertion order") {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::pair<int, Rational>> terms;
    for (int n = -5; n <= (t % 3 == 0 ? 1 : 0); ++n) terms.emplace_back(n, Rational(c(rng), 1 + t % 2));
    LaurentWindow a(1, -8, 1, 1);
    for (const auto& [n, v] : terms) a.set(n, v);
    std::shuffle(terms.begin(), terms.end(), rng);
    LaurentWindow b(1, -8, 1, 1);
    for (const auto& [n, v] : terms) b.set(n, v);
    CHECK(classify_chi(a).verdict == classify_chi(b).verdict);
  }
}

TEST_CASE("bracket suites") {
  WakimotoContext ctx = heis_ctx(q(1), {{0, q(1)}, {2, q(-1)}}, {{1, q(2)}}, {{0, q(1)}, {3, q(2)}});
  SuiteRange r{3, 2, 2, 2};
  VerificationReport rep = bracket_suite(ctx, r);
  CHECK(rep.all_pass());
  Rational c;
  CHECK(virasoro_central_charge(ctx, r, &c).pass);
  CHECK(c == q(1));
  WakimotoContext other = heis_ctx(q(-1, 2), {}, {{2, q(1)}}, {{1, q(1)}});
  CHECK(virasoro_central_charge(other, r, &c).pass);
  CHECK(c == q(-1));
  WakimotoContext crit = heis_ctx(q(-2), {{1, q(1)}}, {}, {{2, q(3)}});
  CHECK(bracket_suite(crit, r).all_pass());
  CHECK_THROWS_AS(sugawara_affine(crit, r), EngineError);
  CHECK(negative_control(ctx, SuiteRange{2, 1, 3, 3}).pass);
  CHECK(tau_automorphism(5).pass);
}

TEST_CASE("theta identity") {
  SuiteRange basis{2, 1, 0, 0};
  LaurentWindow pole2 = chi_of({{1, q(3)}});
  CHECK(theta_identity(chi_ctx(pole2), pole2, -6, 6, basis).pass);
  LaurentWindow simple = chi_of({{0, q(-5, 2)}});
  CHECK(theta_identity(chi_ctx(simple), simple, -6, 6, basis).pass);
  // The opposite sign convention fails.
  WakimotoContext wrong(LevelParam{q(-2)}, FockModule::weyl_chi(WhittakerData{}, ChiModuleData{pole2}));
  CHECK_FALSE(theta_identity(wrong, pole2, -6, 6, basis).pass);
}

TEST_CASE("Whittaker profile") {
  WakimotoContext ctx = heis_ctx(q(1, 2), {{0, q(1)}}, {{1, q(1)}}, {{0, q(7, 5)}, {1, q(2)}});
  WhittakerProfile p = whittaker_profile(ctx, 4);
  CHECK(p.q == 1);
  CHECK(p.r == 2);
  CHECK(p.match);
  CHECK(p.predicted_c[0] == q(1));
  CHECK(p.predicted_b[0].is_zero());
  FockVector w = FockVector::cyclic(ctx.module().tag);
  CHECK(sl2_apply(AffineMode{AffineGen::F, 2}, w, ctx) == w);
  CHECK(sl2_apply(AffineMode{AffineGen::H, 1}, w, ctx).is_zero());
  CHECK(sl2_apply(AffineMode{AffineGen::E, 0}, w, ctx) == w);

  // N + 1 > M: q = N + 1 and b_i reads index q + i.
  WakimotoContext wide = heis_ctx(q(-2), {{0, q(1, 2)}, {2, q(-1)}}, {{1, q(3)}}, {{1, q(2)}});
  WhittakerProfile pw = whittaker_profile(wide, 4);
  CHECK(pw.q == 3);
  CHECK(pw.match);
  for (int i = 0; i <= 4; ++i) {
    CHECK(sl2_apply(AffineMode{AffineGen::H, pw.q + i}, FockVector::cyclic(wide.module().tag), wide) ==
          scaled(FockVector::cyclic(wide.module().tag), pw.predicted_b[i]));
  }
  for (auto [lam, mu, eta] : {std::tuple<int, int, int>{1, 2, 0}, {2, 2, 2}, {0, 1, 2}}) {
    WakimotoContext c = heis_ctx(q(3), {{lam, q(2)}}, {{mu, q(-1, 3)}}, {{eta, q(5)}});
    CHECK(whittaker_profile(c, 4).match);
  }
  WakimotoContext vac = heis_ctx(q(1), {}, {}, {{1, q(1)}});
  for (const auto& a : whittaker_profile(vac, 4).measured_a) CHECK(a.is_zero());
  CHECK_THROWS_AS(whittaker_profile(chi_ctx(chi_of({{1, q(1)}})), 2), EngineError);
}

TEST_CASE("cyclicity probes") {
  for (int N : {1, 2}) {
    WakimotoContext ctx = heis_ctx(q(1), {}, {}, {{0, q(1, 2)}, {N, q(2)}});
    FockVector v = FockVector::cyclic(ctx.module().tag);
    ProbeResult r = cyclicity_probe(ctx, v, ProbeParams{3, 0, 2});
    CHECK(r.saturated);
    CHECK(r.reached_dim == r.full_dim);
    CHECK(r.full_dim == 105);
    ProbeResult base = cyclicity_probe(ctx, v, ProbeParams{0, 0, 2});
    CHECK(base.full_dim == 3);
    CHECK(base.reached_dim == 3);
    CHECK(cyclicity_probe(ctx, FockVector{ctx.module().tag, {}}, ProbeParams{2, 0, 2}).reached_dim == 0);
  }
}

TEST_CASE("probe reach grows with the window and the buffer") {
  WakimotoContext ctx = chi_ctx(chi_of({}));
  FockVector v = FockVector::cyclic(ctx.module().tag);
  std::size_t last = 0;
  for (auto [lo, hi, buffer] : {std::tuple<int, int, int>{-2, 0, 0}, {-3, 1, 0}, {-3, 1, 1}, {-4, 2, 1}}) {
    ProbeParams p{2, buffer, 1};
    p.modes = ModeWindow{lo, hi};
    ProbeResult r = cyclicity_probe(ctx, v, p);
    CHECK(r.reached_dim >= last);
    last = r.reached_dim;
  }
  ProbeParams d{2, 0, 1};
  ProbeParams b{2, 1, 1};
  CHECK(cyclicity_probe(ctx, v, b).reached_dim >= cyclicity_probe(ctx, v, d).reached_dim);
}

TEST_CASE("submodule probes") {
  WakimotoContext zero = chi_ctx(chi_of({}));
  ProbeResult w = submodule_probe(zero, ProbeParams{3, 0, 2});
  REQUIRE(w.witness);
  CHECK_FALSE(w.witness->is_zero());
  CHECK(w.reached_dim < w.full_dim);
  REQUIRE(w.excluded);
  CHECK(w.saturated);

  WakimotoContext irr = chi_ctx(chi_of({{1, q(5)}}));
  ProbeResult none = submodule_probe(irr, ProbeParams{3, 0, 2});
  CHECK_FALSE(none.witness);
  CHECK(none.saturated);
  CHECK(none.candidates_tried == 54);
}
