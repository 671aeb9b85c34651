#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "wakimoto/analysis.hpp"
#include "wakimoto/report.hpp"
#include "wakimoto/schur.hpp"

using namespace wakimoto;

namespace {

// Every comparison is exact; the only tolerances are runtime budgets.
constexpr double kBracketBudget = 120.0;
constexpr double kProfileBudget = 60.0;
constexpr double kFixtureBudget = 600.0;

Rational q(long long n, long long d = 1) { return Rational(n, d); }

struct Params {
  std::map<int, Rational> lambda, mu, eta;
};

const std::vector<Params> kSets = {
    {{{0, q(1)}, {2, q(-1, 2)}}, {{1, q(2)}}, {{0, q(1, 3)}, {3, q(2)}}},
    {{{3, q(5)}}, {{3, q(-1)}, {1, q(1, 4)}}, {{1, q(-2)}}},
    {{}, {{2, q(7, 3)}}, {{0, q(1)}, {2, q(1)}, {3, q(-4)}}},
};

WakimotoContext heis_ctx(const Rational& kappa, const Params& p) {
  WhittakerData w;
  w.lambda = p.lambda;
  w.mu = p.mu;
  HeisWhittakerData h;
  h.eta = p.eta;
  h.level = kappa + q(2);
  return WakimotoContext(LevelParam{kappa}, FockModule::weyl_heis(w, h));
}

WakimotoContext chi_ctx(const LaurentWindow& chi) {
  return WakimotoContext(LevelParam{q(-2)}, FockModule::weyl_chi(WhittakerData{}, ChiModuleData{laurent_scale(chi, q(-1))}));
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

int failures = 0;

void line(int k, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", k, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fail_names(const std::vector<CheckResult>& cs) {
  std::string s;
  for (const auto& c : cs) {
    if (!c.pass) s += " [" + c.name + ": " + c.detail + "]";
  }
  return s;
}

void criterion_1() {
  auto t = std::chrono::steady_clock::now();
  std::vector<CheckResult> cs;
  std::size_t evals = 0;
  for (Rational kappa : {q(-2), q(0), q(1), q(-1, 2)}) {
    for (const auto& p : kSets) {
      cs.push_back(sl2_brackets(heis_ctx(kappa, p), SuiteRange{5, 3, 3, 3}));
      evals += std::stoul(cs.back().detail);
    }
  }
  double s = seconds_since(t);
  bool ok = std::all_of(cs.begin(), cs.end(), [](const CheckResult& c) { return c.pass; }) && s < kBracketBudget;
  line(1, ok, "sl2 brackets, 4 levels x 3 parameter sets, degree <= 5, cap 3, |n|,|m| <= 3: " + std::to_string(evals) +
                  " evaluations, " + std::to_string(s) + " s (budget " + std::to_string(kBracketBudget) + " s)" +
                  fail_names(cs));
}

void criterion_2() {
  std::vector<CheckResult> cs;
  std::string charges;
  for (Rational kappa : {q(0), q(1), q(-1, 2)}) {
    WakimotoContext ctx = heis_ctx(kappa, kSets[0]);
    cs.push_back(sugawara_affine(ctx, SuiteRange{4, 2, 3, 3}));
    Rational c;
    cs.push_back(virasoro_central_charge(ctx, SuiteRange{4, 2, 3, 3}, &c));
    bool exact = c == q(3) * kappa / (kappa + q(2));
    if (!exact) cs.push_back(CheckResult{"central-charge", "", false, c.str(), {}, {}});
    charges += " c(" + kappa.str() + ") = " + c.str();
  }
  bool ok = std::all_of(cs.begin(), cs.end(), [](const CheckResult& c) { return c.pass; });
  line(2, ok, "[L(n), x(m)] = -m x(n+m) for |n|,|m| <= 3 and extracted central charges:" + charges + fail_names(cs));
}

void criterion_3() {
  std::vector<CheckResult> cs;
  LaurentWindow chi = LaurentWindow::from_terms(1, -12, 1, {{1, q(3)}, {-1, q(1, 2)}});
  cs.push_back(t_centrality(chi_ctx(chi), SuiteRange{4, 2, 3, 3}));
  cs.push_back(t_centrality(heis_ctx(q(-2), kSets[1]), SuiteRange{4, 2, 3, 3}));
  InducedModule mod(InducedFunctional::S(0, 0, LevelParam{q(-2)}, {{0, q(1, 3)}, {1, q(2)}}));
  cs.push_back(induced_t_centrality(mod, PBWRange{4, -3, 3, 3, 3}, 0));
  bool ok = std::all_of(cs.begin(), cs.end(), [](const CheckResult& c) { return c.pass; });
  line(3, ok, "[T(n), x(m)] = 0 for |n|,|m| <= 3 on W (x) L(chi~) and W (x) N1(eta) (degree <= 4) and on S(0, 0) "
              "(PBW words <= 4, modes in [-3, 3]): " + cs[0].detail + "; " + cs[1].detail + "; " + cs[2].detail +
              fail_names(cs));
}

void criterion_4() {
  std::vector<CheckResult> cs;
  SuiteRange basis{3, 2, 0, 0};
  for (const auto& chi : {LaurentWindow::from_terms(1, -12, 1, {{1, q(3)}}),
                          LaurentWindow::from_terms(1, -12, 1, {{0, q(-5, 2)}}),
                          LaurentWindow::from_terms(1, -12, 1, {{0, q(4)}})}) {
    cs.push_back(theta_identity(chi_ctx(chi), chi, -6, 8, basis));
  }
  bool ok = std::all_of(cs.begin(), cs.end(), [](const CheckResult& c) { return c.pass; });
  line(4, ok, "(T(n) - theta_n) v = 0 for chi = 3 z^-2, -5/2 z^-1, 4 z^-1, n in [-6, 8], degree <= 3, cap 2: " +
                  cs[0].detail + "; " + cs[1].detail + "; " + cs[2].detail + fail_names(cs));
}

void criterion_5() {
  auto t = std::chrono::steady_clock::now();
  const std::vector<std::pair<Rational, Params>> sets = {
      {q(1, 2), {{{0, q(1)}}, {{1, q(1)}}, {{0, q(7, 5)}, {1, q(2)}}}},
      {q(-2), {{{0, q(1, 2)}, {2, q(-1)}}, {{1, q(3)}}, {{1, q(2)}}}},
      {q(1), {{{1, q(2)}}, {{2, q(-1, 3)}}, {{2, q(5)}}}},
      {q(-1, 2), {{{2, q(1)}}, {{1, q(4)}, {2, q(1)}}, {{0, q(3)}}}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [kappa, p] : sets) {
    WhittakerProfile w = whittaker_profile(heis_ctx(kappa, p), 4);
    ok = ok && w.match;
    detail += " (q, r) = (" + std::to_string(w.q) + ", " + std::to_string(w.r) + ")" + (w.match ? "" : " mismatch");
  }
  WhittakerProfile fx = whittaker_profile(heis_ctx(sets[0].first, sets[0].second), 4);
  bool pinned = fx.measured_c[0] == q(1) && fx.measured_b[0].is_zero();
  double s = seconds_since(t);
  ok = ok && pinned && s < kProfileBudget;
  line(5, ok, "measured Whittaker profile equals the predicted one on 4 parameter sets with N, M, P <= 2:" + detail +
                  "; fixture c_0 = " + fx.measured_c[0].str() + ", b_0 = " + fx.measured_b[0].str() + "; " +
                  std::to_string(s) + " s (budget " + std::to_string(kProfileBudget) + " s)");
}

Rational schur_series(const std::vector<Rational>& x, int r) {
  std::vector<Rational> s(r + 1, Rational(0)), result(r + 1, Rational(0)), power(r + 1, Rational(0));
  for (int n = 1; n <= r; ++n) s[n] = x[n - 1] / Rational(n);
  power[0] = 1;
  Rational fact = 1;
  for (int k = 0; k <= r; ++k) {
    if (k > 0) fact *= Rational(k);
    for (int i = 0; i <= r; ++i) result[i] += power[i] / fact;
    std::vector<Rational> next(r + 1, Rational(0));
    for (int i = 0; i <= r; ++i) {
      for (int j = 1; i + j <= r; ++j) next[i + j] += power[i] * s[j];
    }
    power = next;
  }
  return result[r];
}

void criterion_6() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  int det_bad = 0, series_bad = 0, total = 0;
  for (int r = 1; r <= 12; ++r) {
    for (int t = 0; t < 50; ++t) {
      SchurInput in{r, {}};
      for (int k = 0; k < r; ++k) in.x.emplace_back(num(rng), den(rng));
      Rational rec = schur_rec(in);
      ++total;
      if (rec != schur_det(in)) ++det_bad;
      if (r <= 6 && rec != schur_series(in.x, r)) ++series_bad;
    }
  }
  line(6, det_bad == 0 && series_bad == 0,
       "S_r recursion vs determinant on " + std::to_string(total) + " seeded inputs (r <= 12): " +
           std::to_string(det_bad) + " mismatches; vs exponential series (r <= 6): " + std::to_string(series_bad) +
           " mismatches");
}

void criterion_7() {
  bool ok = true;
  std::string detail;
  for (int N : {1, 2}) {
    WakimotoContext ctx = heis_ctx(q(1), Params{{}, {}, {{0, q(1, 2)}, {N, q(2)}}});
    ProbeResult r = cyclicity_probe(ctx, FockVector::cyclic(ctx.module().tag), ProbeParams{3, 0, 2});
    ok = ok && r.saturated && r.reached_dim == r.full_dim;
    detail += "eta_" + std::to_string(N) + ": reached " + std::to_string(r.reached_dim) + "/" +
              std::to_string(r.full_dim) + (r.saturated ? " saturated; " : " unsaturated; ");
  }
  WakimotoContext zero = chi_ctx(LaurentWindow::from_terms(1, -12, 1, {}));
  ProbeResult w = submodule_probe(zero, ProbeParams{3, 0, 2});
  ok = ok && w.witness && !w.witness->is_zero() && w.reached_dim < w.full_dim;
  detail += "chi_0 = 0: " + (w.witness ? "witness closure " + std::to_string(w.reached_dim) + "/" +
                                             std::to_string(w.full_dim) + " missing " + to_string(*w.excluded)
                                       : std::string("no witness")) + "; ";
  LaurentWindow chi1 = LaurentWindow::from_terms(1, -12, 1, {{1, q(5)}});
  bool class_i = classify_chi(chi1).verdict == Verdict::IrreducibleI;
  ProbeResult n = submodule_probe(chi_ctx(chi1), ProbeParams{3, 0, 2});
  ok = ok && class_i && !n.witness && n.saturated;
  detail += "chi_1 = 5 (" + to_string(classify_chi(chi1).verdict) + "): " +
            (n.witness ? std::string("unexpected witness") : "none found among " + std::to_string(n.candidates_tried)) +
            (n.saturated ? ", saturated" : ", unsaturated");
  line(7, ok, "truncated probes at D = 3, cap 2: " + detail);
}

void criterion_8() {
  InducedFunctional spec = InducedFunctional::S(0, 0, LevelParam{q(-2)}, {{0, q(1, 3)}, {1, q(2)}});
  InducedModule mod(spec);
  auto scan = t_scan(mod, 4);
  bool ok = true;
  std::string detail;
  for (const auto& [n, e] : scan) {
    if (n < spec.n0()) ok = ok && e.independent;
    if (n >= spec.n0()) ok = ok && !e.independent;
    detail += std::to_string(n) + ":" + (e.independent ? std::string("ind") : e.proportional->str()) + " ";
  }
  ok = ok && scan.rbegin()->second.proportional && scan.rbegin()->second.proportional->is_zero();
  LaurentWindow theta = LaurentWindow::from_terms(2, -6, 5, {{-1, q(5)}, {0, q(-1)}, {1, q(2, 3)}, {2, q(2)}});
  auto sv = singular_vectors_T(mod, theta, 2);
  bool whittaker = sv.size() == 2;
  for (const auto& w : sv) {
    whittaker = whittaker && !w.is_zero();
    for (int n = 0; n <= 5; ++n) {
      for (AffineMode x : {AffineMode{AffineGen::E, n + 1}, AffineMode{AffineGen::H, n}, AffineMode{AffineGen::F, n + 1}}) {
        PBWVector expect = w;
        expect.terms *= spec.value(x);
        whittaker = whittaker && induced_apply(x, w, mod) == expect;
      }
    }
  }
  QuotientResult quo = truncated_quotient(mod, sv, TruncationParams{3, -4, 2, 1, 400000});
  bool killed = quo.saturated;
  for (const auto& p : quo.projected_generators) killed = killed && p.is_zero();
  line(8, ok && whittaker && killed,
       "S(0, 0), phi(h(1)) = 2, N0 = 1: T(n)u " + detail + "; singular vectors carry phi: " +
           (whittaker ? "yes" : "no") + "; truncated quotient (words <= 3, modes [-4, 2], buffer 1) dim " +
           std::to_string(quo.basis.size()) + " of " + std::to_string(quo.truncated_dim) +
           (killed ? ", generators project to 0" : ", generators survive or closure unsaturated"));
}

void criterion_9() {
  bool ok = true;
  double worst = 0;
  std::size_t checks = 0;
  for (const auto& f : builtin_fixtures()) {
    auto t = std::chrono::steady_clock::now();
    RunResult a = run_all({f.config});
    double s = seconds_since(t);
    RunResult b = run_all({f.config});
    worst = std::max(worst, s);
    checks += a.checks();
    ok = ok && a.success() && render_report(a) == render_report(b) && s < kFixtureBudget;
  }
  line(9, ok, std::to_string(builtin_fixtures().size()) + " built-in fixtures, " + std::to_string(checks) +
                  " checks, reports byte-identical across two runs; slowest fixture " + std::to_string(worst) +
                  " s (budget " + std::to_string(kFixtureBudget) + " s)");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                       criterion_6, criterion_7, criterion_8, criterion_9};
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    try {
      criteria[k]();
    } catch (const std::exception& e) {
      line(static_cast<int>(k + 1), false, std::string("error: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
