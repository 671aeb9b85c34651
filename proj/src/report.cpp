#include "wakimoto/report.hpp"

#include <algorithm>
#include <random>

#include <json.hpp>

#include "wakimoto/error.hpp"
#include "wakimoto/schur.hpp"

namespace wakimoto {

using json = nlohmann::ordered_json;

std::string to_string(ModuleKind k) {
  switch (k) {
    case ModuleKind::WakimotoWhittaker: return "wakimoto-whittaker";
    case ModuleKind::WakimotoChi: return "wakimoto-chi";
    case ModuleKind::InducedS: return "induced-S";
    case ModuleKind::InducedP: return "induced-P";
  }
  return "?";
}

namespace {

const std::vector<std::string> kSuites = {"brackets", "virasoro", "centrality", "theta", "profile",
                                          "classify", "cyclicity", "submodule", "schur",  "t-scan"};

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw EngineError(ErrorCode::ConfigInvalid, "parse_config", path + ": " + what);
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) invalid(path, "expected an integer");
  return j.get<int>();
}

Rational get_rational(const json& j, const std::string& path) {
  if (!j.is_string()) invalid(path, "expected a rational written as a string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const EngineError& e) {
    invalid(path, e.what());
  }
}

std::map<int, Rational> get_table(const json& j, const std::string& path, int min_index) {
  if (!j.is_object()) invalid(path, "expected an object mapping indices to rationals");
  std::map<int, Rational> out;
  for (const auto& [k, v] : j.items()) {
    const std::string p = path + "." + k;
    int idx = 0;
    std::size_t used = 0;
    try {
      idx = std::stoi(k, &used);
    } catch (const std::exception&) {
      invalid(p, "index is not an integer");
    }
    if (used != k.size() || std::to_string(idx) != k) invalid(p, "index is not a canonical integer");
    if (idx < min_index) invalid(p, "index below " + std::to_string(min_index));
    out[idx] = get_rational(v, p);
  }
  return out;
}

json table_json(const std::map<int, Rational>& t) {
  json o = json::object();
  for (const auto& [k, v] : t) o[std::to_string(k)] = v.str();
  return o;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : j.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; });
    if (!ok) invalid(path.empty() ? k : path + "." + k, "unknown field");
  }
}

CharacterConfig get_character(const json& j, const std::string& path, const char* a, const char* b) {
  if (!j.is_object()) invalid(path, "expected an object");
  check_keys(j, path, {a, b, "e", "h", "f"});
  CharacterConfig c;
  if (!j.contains(a)) invalid(path + "." + a, "missing");
  if (!j.contains(b)) invalid(path + "." + b, "missing");
  c.first = get_int(j.at(a), path + "." + a);
  c.second = get_int(j.at(b), path + "." + b);
  constexpr int kLow = -2047;
  if (j.contains("e")) c.e = get_table(j.at("e"), path + ".e", kLow);
  if (j.contains("h")) c.h = get_table(j.at("h"), path + ".h", kLow);
  if (j.contains("f")) c.f = get_table(j.at("f"), path + ".f", kLow);
  return c;
}

json character_json(const CharacterConfig& c, const char* a, const char* b) {
  json o;
  o[a] = c.first;
  o[b] = c.second;
  o["e"] = table_json(c.e);
  o["h"] = table_json(c.h);
  o["f"] = table_json(c.f);
  return o;
}

bool is_wakimoto(ModuleKind k) { return k == ModuleKind::WakimotoWhittaker || k == ModuleKind::WakimotoChi; }

/// Empty string when the suite applies, otherwise the reason.
std::string suite_mismatch(const RunConfig& c, const std::string& s) {
  const bool crit = c.level == Rational(-2);
  if (s == "brackets" || s == "schur") return "";
  if (s == "virasoro") {
    if (!is_wakimoto(c.module)) return "needs a Wakimoto module";
    return crit ? "L(n) is undefined at the critical level" : "";
  }
  if (s == "centrality") {
    if (!crit) return "needs level -2";
    return c.module == ModuleKind::InducedP ? "not available for the P family" : "";
  }
  if (s == "theta" || s == "classify" || s == "submodule") {
    return c.module == ModuleKind::WakimotoChi ? "" : "needs module wakimoto-chi";
  }
  if (s == "profile") return c.module == ModuleKind::WakimotoWhittaker ? "" : "needs module wakimoto-whittaker";
  if (s == "cyclicity") return is_wakimoto(c.module) ? "" : "needs a Wakimoto module";
  if (s == "t-scan") {
    if (c.module != ModuleKind::InducedS) return "needs module induced-S";
    return crit ? "" : "needs level -2";
  }
  return "unknown suite";
}

InducedFunctional make_character(const RunConfig& c) {
  LevelParam lv{c.level};
  if (c.module == ModuleKind::InducedS) {
    const auto& p = *c.phi;
    return InducedFunctional::S(p.first, p.second, lv, p.h, p.e, p.f);
  }
  const auto& p = *c.psi;
  return InducedFunctional::P(p.first, p.second, lv, p.e, p.h, p.f);
}

void validate(RunConfig& c) {
  const bool crit = c.level == Rational(-2);
  if (c.module == ModuleKind::WakimotoChi && !crit) invalid("level", "wakimoto-chi needs level -2");
  if (is_wakimoto(c.module) && c.level == Rational(-2) && c.module == ModuleKind::WakimotoWhittaker) {
    // Heisenberg level 0 is allowed.
  }
  if (c.module == ModuleKind::WakimotoChi && !c.eta.empty()) invalid("eta", "not used by wakimoto-chi");
  if (c.module != ModuleKind::WakimotoChi && !c.chi.empty()) invalid("chi", "only used by wakimoto-chi");
  if (!is_wakimoto(c.module) && (!c.lambda.empty() || !c.mu.empty() || !c.eta.empty())) {
    invalid(!c.lambda.empty() ? "lambda" : !c.mu.empty() ? "mu" : "eta", "only used by Wakimoto modules");
  }
  if (c.module == ModuleKind::InducedS && !c.phi) invalid("phi", "missing");
  if (c.module == ModuleKind::InducedP && !c.psi) invalid("psi", "missing");
  if (c.module != ModuleKind::InducedS && c.phi) invalid("phi", "only used by induced-S");
  if (c.module != ModuleKind::InducedP && c.psi) invalid("psi", "only used by induced-P");
  if (c.phi || c.psi) {
    try {
      make_character(c);
    } catch (const EngineError& e) {
      invalid(c.phi ? "phi" : "psi", e.what());
    }
  }
  for (const auto& [k, v] : c.chi) {
    if (k < c.chi_low) invalid("chi." + std::to_string(k), "index below chiLow");
  }
  for (const auto& [k, v] : c.theta) {
    if (k < c.theta_low) invalid("theta." + std::to_string(k), "index below thetaLow");
  }
  if (c.truncation.D < 0) invalid("truncation.D", "must be non-negative");
  if (c.truncation.buffer < 0) invalid("truncation.buffer", "must be non-negative");
  if (c.truncation.cap < 0) invalid("truncation.cap", "must be non-negative");
  if (c.truncation.mode_window && c.truncation.mode_window->lo > c.truncation.mode_window->hi) {
    invalid("truncation.modeWindow", "lower end above upper end");
  }
  if (c.suites.empty()) invalid("suites", "no suites requested");
  for (std::size_t i = 0; i < c.suites.size(); ++i) {
    const std::string p = "suites[" + std::to_string(i) + "]";
    if (std::find(kSuites.begin(), kSuites.end(), c.suites[i]) == kSuites.end()) {
      invalid(p, "unknown suite '" + c.suites[i] + "'");
    }
    std::string why = suite_mismatch(c, c.suites[i]);
    if (!why.empty()) invalid(p, c.suites[i] + " " + why);
  }
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) invalid("$", "expected an object");
  check_keys(j, "", {"id", "level", "module", "lambda", "mu", "eta", "chi", "chiLow", "theta", "thetaLow", "phi", "psi",
                     "truncation", "suites", "seed"});
  RunConfig c;
  if (j.contains("id")) {
    if (!j.at("id").is_string()) invalid("id", "expected a string");
    c.id = j.at("id").get<std::string>();
  }
  if (!j.contains("level")) invalid("level", "missing");
  c.level = get_rational(j.at("level"), "level");
  if (!j.contains("module")) invalid("module", "missing");
  {
    const json& m = j.at("module");
    if (!m.is_string()) invalid("module", "expected a string");
    const std::string s = m.get<std::string>();
    bool found = false;
    for (ModuleKind k : {ModuleKind::WakimotoWhittaker, ModuleKind::WakimotoChi, ModuleKind::InducedS,
                         ModuleKind::InducedP}) {
      if (s == to_string(k)) {
        c.module = k;
        found = true;
      }
    }
    if (!found) invalid("module", "unknown module kind '" + s + "'");
  }
  if (j.contains("chiLow")) c.chi_low = get_int(j.at("chiLow"), "chiLow");
  if (j.contains("thetaLow")) c.theta_low = get_int(j.at("thetaLow"), "thetaLow");
  if (j.contains("lambda")) c.lambda = get_table(j.at("lambda"), "lambda", 0);
  if (j.contains("mu")) c.mu = get_table(j.at("mu"), "mu", 1);
  if (j.contains("eta")) c.eta = get_table(j.at("eta"), "eta", 0);
  if (j.contains("chi")) c.chi = get_table(j.at("chi"), "chi", -2047);
  if (j.contains("theta")) c.theta = get_table(j.at("theta"), "theta", -2047);
  if (j.contains("phi")) c.phi = get_character(j.at("phi"), "phi", "N", "M");
  if (j.contains("psi")) c.psi = get_character(j.at("psi"), "psi", "q", "r");
  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    if (!t.is_object()) invalid("truncation", "expected an object");
    check_keys(t, "truncation", {"D", "buffer", "cap", "modeWindow"});
    if (t.contains("D")) c.truncation.D = get_int(t.at("D"), "truncation.D");
    if (t.contains("buffer")) c.truncation.buffer = get_int(t.at("buffer"), "truncation.buffer");
    if (t.contains("cap")) c.truncation.cap = get_int(t.at("cap"), "truncation.cap");
    if (t.contains("modeWindow")) {
      const json& w = t.at("modeWindow");
      if (!w.is_array() || w.size() != 2) invalid("truncation.modeWindow", "expected [lo, hi]");
      c.truncation.mode_window = ModeWindow{get_int(w[0], "truncation.modeWindow[0]"),
                                            get_int(w[1], "truncation.modeWindow[1]")};
    }
  }
  if (!j.contains("suites") || !j.at("suites").is_array()) invalid("suites", "expected a list of suite names");
  for (std::size_t i = 0; i < j.at("suites").size(); ++i) {
    const json& s = j.at("suites")[i];
    if (!s.is_string()) invalid("suites[" + std::to_string(i) + "]", "expected a string");
    c.suites.push_back(s.get<std::string>());
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) invalid("seed", "expected an integer");
    c.seed = j.at("seed").get<std::int64_t>();
  }
  validate(c);
  return c;
}

json config_json(const RunConfig& c) {
  json j;
  j["id"] = c.id;
  j["level"] = c.level.str();
  j["module"] = to_string(c.module);
  if (is_wakimoto(c.module)) {
    j["lambda"] = table_json(c.lambda);
    j["mu"] = table_json(c.mu);
  }
  if (c.module == ModuleKind::WakimotoWhittaker) j["eta"] = table_json(c.eta);
  if (c.module == ModuleKind::WakimotoChi) {
    j["chi"] = table_json(c.chi);
    j["chiLow"] = c.chi_low;
  }
  if (c.module == ModuleKind::InducedS) {
    j["theta"] = table_json(c.theta);
    j["thetaLow"] = c.theta_low;
  }
  if (c.phi) j["phi"] = character_json(*c.phi, "N", "M");
  if (c.psi) j["psi"] = character_json(*c.psi, "q", "r");
  json t;
  t["D"] = c.truncation.D;
  t["buffer"] = c.truncation.buffer;
  t["cap"] = c.truncation.cap;
  if (c.truncation.mode_window) t["modeWindow"] = {c.truncation.mode_window->lo, c.truncation.mode_window->hi};
  j["truncation"] = t;
  j["suites"] = c.suites;
  j["seed"] = c.seed;
  return j;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    invalid("$", std::string("malformed document: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) { return config_from_json(parse_json(json_text)); }

std::vector<RunConfig> parse_config_file(const std::string& json_text) {
  json j = parse_json(json_text);
  std::vector<RunConfig> out;
  if (j.is_object() && j.contains("fixtures")) {
    check_keys(j, "", {"fixtures"});
    const json& f = j.at("fixtures");
    if (!f.is_array() || f.empty()) invalid("fixtures", "expected a non-empty list");
    for (std::size_t i = 0; i < f.size(); ++i) {
      try {
        out.push_back(config_from_json(f[i]));
      } catch (const EngineError& e) {
        throw EngineError(ErrorCode::ConfigInvalid, "parse_config",
                          "fixtures[" + std::to_string(i) + "]." + std::string(e.what()).substr(
                                                                       std::string("CONFIG_INVALID in parse_config: ").size()));
      }
    }
    return out;
  }
  out.push_back(config_from_json(j));
  return out;
}

std::string serialize_config(const RunConfig& c) { return config_json(c).dump(2); }

// ------------------------------------------------------------------ running

std::size_t RunResult::checks() const {
  std::size_t n = 0;
  for (const auto& f : fixtures) {
    for (const auto& s : f.suites) n += s.report.checks.size();
  }
  return n;
}

std::size_t RunResult::failed() const {
  std::size_t n = 0;
  for (const auto& f : fixtures) {
    for (const auto& s : f.suites) {
      for (const auto& c : s.report.checks) n += c.pass ? 0 : 1;
    }
  }
  return n;
}

std::size_t RunResult::unsaturated() const {
  std::size_t n = 0;
  for (const auto& f : fixtures) {
    for (const auto& s : f.suites) {
      if (s.needs_saturation && s.report.saturated && !*s.report.saturated) ++n;
    }
  }
  return n;
}

namespace {

LaurentWindow chi_window(const RunConfig& c) {
  int hi = 1;
  if (!c.chi.empty()) hi = std::max(hi, c.chi.rbegin()->first);
  return LaurentWindow::from_terms(1, c.chi_low, hi, c.chi);
}

WakimotoContext make_context(const RunConfig& c) {
  WhittakerData w;
  w.lambda = c.lambda;
  w.mu = c.mu;
  LevelParam lv{c.level};
  if (c.module == ModuleKind::WakimotoChi) {
    LaurentWindow tilde = laurent_scale(chi_window(c), Rational(-1));
    return WakimotoContext(lv, FockModule::weyl_chi(w, ChiModuleData{tilde}));
  }
  HeisWhittakerData h;
  h.eta = c.eta;
  h.level = c.level + Rational(2);
  return WakimotoContext(lv, FockModule::weyl_heis(w, h));
}

SuiteRange suite_range(const RunConfig& c) { return SuiteRange{c.truncation.D, c.truncation.cap, 3, 3}; }

ProbeParams probe_params(const RunConfig& c) {
  ProbeParams p;
  p.D = c.truncation.D;
  p.buffer = c.truncation.buffer;
  p.cap = c.truncation.cap;
  p.modes = c.truncation.mode_window;
  return p;
}

std::string rationals(const std::vector<Rational>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + "]";
}

CheckResult check(std::string name, std::string description, bool pass, std::string detail) {
  CheckResult r;
  r.name = std::move(name);
  r.description = std::move(description);
  r.pass = pass;
  r.detail = std::move(detail);
  return r;
}

PBWRange pbw_range(const InducedFunctional& s) {
  PBWRange r;
  r.max_word = 3;
  r.lo = -3;
  r.hi = std::max(3, s.top_complement_index());
  return r;
}

void run_brackets(const RunConfig& c, SuiteOutcome& out) {
  if (is_wakimoto(c.module)) {
    WakimotoContext ctx = make_context(c);
    out.report = bracket_suite(ctx, suite_range(c));
    SuiteRange small{std::min(c.truncation.D, 2), std::min(c.truncation.cap, 1), 3, 3};
    out.report.checks.push_back(negative_control(ctx, small));
    return;
  }
  InducedFunctional spec = make_character(c);
  InducedModule mod(spec);
  out.report.checks.push_back(induced_brackets(mod, pbw_range(spec)));
  out.report.checks.push_back(straightening_associativity(mod, 200, 4, 3, static_cast<unsigned>(c.seed)));
  if (spec.family() == InducedFamily::S && spec.first() == spec.second()) {
    out.report.checks.push_back(tau_twist_profile(spec, spec.support_bound() + 3));
  }
  out.report.checks.push_back(tau_automorphism(5));
}

void run_t_scan(const RunConfig& c, SuiteOutcome& out) {
  InducedFunctional spec = make_character(c);
  InducedModule mod(spec);
  const int n0 = spec.n0();
  const int range = 3;
  auto scan = t_scan(mod, range);
  bool ok = true;
  std::string detail;
  for (const auto& [n, e] : scan) {
    detail += "T(" + std::to_string(n) + ")u: " + (e.independent ? std::string("independent") : e.proportional->str()) + "; ";
    if (n < n0 && !e.independent) ok = false;
    if (n >= n0 && e.independent) ok = false;
  }
  const auto& last = scan.rbegin()->second;
  ok = ok && !last.independent && last.proportional->is_zero();
  out.report.checks.push_back(check("t-scan",
                                    "T(n)u is independent of u for n < N0 and a multiple of u for n >= N0, the "
                                    "multiple vanishing at n = N0 + " + std::to_string(range) + "; N0 = " +
                                        std::to_string(n0),
                                    ok, detail));

  int hi = std::max(n0 + range, 1);
  if (!c.theta.empty()) hi = std::max(hi, c.theta.rbegin()->first);
  LaurentWindow theta = LaurentWindow::from_terms(2, c.theta_low, hi, c.theta);
  const int count = std::min(2, n0 - c.theta_low);
  auto sv = singular_vectors_T(mod, theta, count);

  // x w' = phi(x) w' for subalgebra modes up to the support bound plus two.
  std::size_t evals = 0;
  std::size_t bad = 0;
  const int window = spec.support_bound() + 2;
  for (const auto& w : sv) {
    for (AffineGen g : {AffineGen::E, AffineGen::H, AffineGen::F}) {
      for (int n = 0; n <= window; ++n) {
        AffineMode x{g, n};
        if (!spec.in_subalgebra(x)) continue;
        PBWVector got = induced_apply(x, w, mod);
        PBWLC want = w.terms * spec.value(x);
        ++evals;
        if (!(got.terms - want).is_zero()) ++bad;
      }
    }
  }
  out.report.checks.push_back(check("singular-vectors",
                                    "each (T(N0 - i) - theta_{N0 - i})u, i = 1.." + std::to_string(count) +
                                        ", is nonzero and x acts on it by phi(x) for subalgebra modes with index <= " +
                                        std::to_string(window),
                                    bad == 0 && evals > 0 && static_cast<int>(sv.size()) == count,
                                    std::to_string(sv.size()) + " vectors, " + std::to_string(evals) +
                                        " evaluations, " + std::to_string(bad) + " failed"));

  TruncationParams tp;
  tp.max_word = c.truncation.D;
  tp.buffer = c.truncation.buffer;
  tp.lo = c.truncation.mode_window ? c.truncation.mode_window->lo : -4;
  tp.hi = c.truncation.mode_window ? c.truncation.mode_window->hi : std::max(spec.first(), spec.second()) + 2;
  QuotientResult q = truncated_quotient(mod, sv, tp);
  bool killed = std::all_of(q.projected_generators.begin(), q.projected_generators.end(),
                            [](const PBWVector& v) { return v.is_zero(); });
  out.report.checks.push_back(check("quotient",
                                    "the singular vectors project to zero in the truncated quotient (word length <= " +
                                        std::to_string(tp.max_word) + ", modes in [" + std::to_string(tp.lo) + ", " +
                                        std::to_string(tp.hi) + "])",
                                    killed,
                                    "truncated dimension " + std::to_string(q.truncated_dim) + ", submodule part " +
                                        std::to_string(q.submodule_dim) + ", quotient " +
                                        std::to_string(q.basis.size())));
  out.report.saturated = q.saturated;
  out.needs_saturation = true;
  out.report.stats["quotientDim"] = std::to_string(q.basis.size());
  out.report.stats["truncatedDim"] = std::to_string(q.truncated_dim);
}

void run_schur(const RunConfig& c, SuiteOutcome& out) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(c.seed));
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  std::size_t evals = 0;
  std::size_t bad = 0;
  std::string first;
  for (int r = 1; r <= 12; ++r) {
    for (int t = 0; t < 50; ++t) {
      SchurInput in;
      in.r = r;
      for (int k = 0; k < r; ++k) in.x.emplace_back(num(rng), den(rng));
      ++evals;
      if (schur_rec(in) != schur_det(in)) {
        ++bad;
        if (first.empty()) first = "r = " + std::to_string(r);
      }
    }
  }
  out.report.checks.push_back(check("schur",
                                    "recursive and determinant evaluations of S_r agree for r = 1..12 on 50 seeded "
                                    "rational inputs each",
                                    bad == 0, std::to_string(evals) + " evaluations, " + std::to_string(bad) + " failed" +
                                                  (first.empty() ? "" : "; first failure " + first)));
}

}  // namespace

SuiteOutcome run_suite(const RunConfig& c, const std::string& suite) {
  SuiteOutcome out;
  out.report.suite = suite;
  if (suite == "brackets") {
    run_brackets(c, out);
  } else if (suite == "virasoro") {
    WakimotoContext ctx = make_context(c);
    out.report.checks.push_back(sugawara_affine(ctx, suite_range(c)));
    Rational extracted;
    out.report.checks.push_back(virasoro_central_charge(ctx, suite_range(c), &extracted));
    out.report.stats["centralCharge"] = extracted.str();
  } else if (suite == "centrality") {
    if (is_wakimoto(c.module)) {
      WakimotoContext ctx = make_context(c);
      out.report.checks.push_back(t_centrality(ctx, suite_range(c)));
    } else {
      InducedFunctional spec = make_character(c);
      InducedModule mod(spec);
      PBWRange r = pbw_range(spec);
      r.max_word = std::min(c.truncation.D, 2);
      out.report.checks.push_back(induced_t_centrality(mod, r, spec.n0()));
    }
  } else if (suite == "theta") {
    WakimotoContext ctx = make_context(c);
    LaurentWindow chi = chi_window(c);
    const int top = chi.top_index().value_or(0);
    SuiteRange basis{std::min(c.truncation.D, 2), std::min(c.truncation.cap, 1), 0, 0};
    out.report.checks.push_back(theta_identity(ctx, chi, -6, std::max(6, 2 * top + 3), basis));
  } else if (suite == "profile") {
    WakimotoContext ctx = make_context(c);
    WhittakerProfile p = whittaker_profile(ctx, 4);
    out.report.checks.push_back(check(
        "whittaker-profile",
        "e(i), h(q + i), f(r + i) act on the cyclic vector by a_i, b_i, c_i for i = 0..4, q = max(M, N + 1), "
        "r = max(M + N + 1, 2M, P + 1)",
        p.match,
        "q = " + std::to_string(p.q) + ", r = " + std::to_string(p.r) + "; measured a " + rationals(p.measured_a) +
            " b " + rationals(p.measured_b) + " c " + rationals(p.measured_c) + "; predicted a " +
            rationals(p.predicted_a) + " b " + rationals(p.predicted_b) + " c " + rationals(p.predicted_c)));
  } else if (suite == "classify") {
    Classification cl = classify_chi(chi_window(c));
    std::string d = "verdict " + to_string(cl.verdict);
    if (cl.p) d += ", p = " + std::to_string(*cl.p) + ", chi_p = " + cl.chi_p->str();
    if (cl.chi_0) d += ", chi_0 = " + cl.chi_0->str();
    if (cl.ell) d += ", ell = " + std::to_string(*cl.ell) + ", S_ell(-chi) = " + cl.schur->str();
    out.report.checks.push_back(check("classification", "case analysis of chi for W (x) L(-chi) at level -2", true, d));
    out.report.stats["verdict"] = to_string(cl.verdict);
  } else if (suite == "cyclicity") {
    WakimotoContext ctx = make_context(c);
    ProbeResult r = cyclicity_probe(ctx, FockVector::cyclic(ctx.module().tag), probe_params(c));
    out.report.checks.push_back(check("cyclicity",
                                      "the closure of the cyclic vector under e, f, h modes contains the whole "
                                      "degree <= " + std::to_string(c.truncation.D) + " space (a*(0) cap " +
                                          std::to_string(c.truncation.cap) + ")",
                                      r.reached_dim == r.full_dim,
                                      "reached " + std::to_string(r.reached_dim) + " of " + std::to_string(r.full_dim)));
    out.report.saturated = r.saturated;
    out.needs_saturation = true;
    out.report.stats["reachedDim"] = std::to_string(r.reached_dim);
    out.report.stats["fullDim"] = std::to_string(r.full_dim);
  } else if (suite == "submodule") {
    WakimotoContext ctx = make_context(c);
    Classification cl = classify_chi(chi_window(c));
    ProbeResult r = submodule_probe(ctx, probe_params(c));
    const bool reducible = cl.verdict == Verdict::Reducible;
    std::string d = r.witness ? "witness " + to_string(r.witness->terms) + " reaches " + std::to_string(r.reached_dim) +
                                    " of " + std::to_string(r.full_dim) + ", missing " + to_string(*r.excluded)
                              : "no witness among " + std::to_string(r.candidates_tried) + " candidates";
    out.report.checks.push_back(check("submodule",
                                      "search for a vector whose closure is a proper subspace of the degree <= " +
                                          std::to_string(c.truncation.D) +
                                          " space; the outcome is consistent with the classification",
                                      reducible == r.witness.has_value(), d + "; classification " + to_string(cl.verdict)));
    out.report.saturated = r.saturated;
    out.needs_saturation = true;
    out.report.stats["candidates"] = std::to_string(r.candidates_tried);
  } else if (suite == "schur") {
    run_schur(c, out);
  } else if (suite == "t-scan") {
    run_t_scan(c, out);
  } else {
    throw EngineError(ErrorCode::ConfigInvalid, "run", "unknown suite '" + suite + "'");
  }
  if (out.needs_saturation && out.report.saturated && !*out.report.saturated) {
    out.report.stats["evidence"] = "inconclusive";
  }
  return out;
}

FixtureOutcome run_fixture(const RunConfig& c) {
  FixtureOutcome f;
  f.id = c.id;
  f.params = serialize_config(c);
  for (const auto& s : c.suites) f.suites.push_back(run_suite(c, s));
  return f;
}

RunResult run_all(const std::vector<RunConfig>& configs, std::optional<std::int64_t> seed_override) {
  RunResult r;
  r.seed = seed_override.value_or(configs.empty() ? 0 : configs.front().seed);
  for (RunConfig c : configs) {
    if (seed_override) c.seed = *seed_override;
    r.fixtures.push_back(run_fixture(c));
  }
  return r;
}

std::string render_report(const RunResult& r) {
  json doc;
  doc["schema"] = kReportSchema;
  doc["engineVersion"] = kEngineVersion;
  doc["seed"] = r.seed;
  json fx = json::array();
  for (const auto& f : r.fixtures) {
    json jf;
    jf["id"] = f.id;
    jf["params"] = json::parse(f.params);
    json suites = json::array();
    for (const auto& s : f.suites) {
      json js;
      js["suite"] = s.report.suite;
      json checks = json::array();
      for (const auto& c : s.report.checks) {
        json jc;
        jc["name"] = c.name;
        jc["reference"] = c.description;
        jc["pass"] = c.pass;
        jc["detail"] = c.detail;
        if (c.offending) jc["offending"] = *c.offending;
        if (c.discrepancy) jc["discrepancy"] = *c.discrepancy;
        checks.push_back(jc);
      }
      js["checks"] = checks;
      if (s.report.saturated) js["saturated"] = *s.report.saturated;
      if (!s.report.stats.empty()) {
        json st;
        for (const auto& [k, v] : s.report.stats) st[k] = v;
        js["stats"] = st;
      }
      suites.push_back(js);
    }
    jf["suites"] = suites;
    fx.push_back(jf);
  }
  doc["fixtures"] = fx;
  json sum;
  sum["checks"] = r.checks();
  sum["failed"] = r.failed();
  sum["unsaturated"] = r.unsaturated();
  sum["pass"] = r.success();
  doc["summary"] = sum;
  return doc.dump(2) + "\n";
}

// ------------------------------------------------------------------ explain

namespace {

struct Explanation {
  const char* name;
  const char* text;
};

const Explanation kExplain[] = {
    {"sl2-brackets",
     "Affine sl2 relations [x(n), y(m)] = [x, y](n + m) + n (x, y) delta_{n+m,0} kappa with (e, f) = 1 and (h, h) = 2, "
     "checked as operator identities for the free-field fields e = a, h = -2 :a* a: + b, "
     "f = -:a* a* a: + kappa a*' + a* b.\n"
     "Ranges: every basis monomial of degree <= D with a*(0) exponent <= cap, |n|, |m| <= 3."},
    {"sugawara-affine",
     "[L(n), x(m)] = -m x(n + m) for x in {e, f, h}, where L(n) are the modes of the free-field conformal vector "
     "a(-1)a*(-1) + (b(-1)^2 - 2 b(-2)) / (4 (kappa + 2)).\n"
     "Ranges: basis degree <= D, a*(0) cap, |n|, |m| <= 3; kappa != -2."},
    {"virasoro-central-charge",
     "[L(1), L(-1)] = 2 L(0), and [L(2), L(-2)] - 4 L(0) acts by one scalar c/2 on every basis vector; the extracted c "
     "must equal 3 kappa / (kappa + 2).\n"
     "Ranges: basis degree <= D, a*(0) cap; kappa != -2."},
    {"t-centrality",
     "At kappa = -2 the modes T(n) of sum_m :e(m)f(n-m): + :f(m)e(n-m): + 1/2 :h(m)h(n-m): commute with every "
     "e(m), f(m), h(m).\n"
     "Ranges: Wakimoto modules, basis degree <= D, |n|, |m| <= 3; induced modules, |n - N0| <= 2, |m| <= 2."},
    {"tau-automorphism",
     "The involution e(n) -> f(n), f(n) -> e(n), h(n) -> -h(n) maps each bracket to the bracket of the images and "
     "squares to the identity.\nRanges: |n|, |m| <= 5, checked on mode labels."},
    {"negative-control",
     "The bracket checks are rerun with a*(0) moved to the annihilation side of the normal ordering; they must fail on "
     "[e(n), f(-n)].\nRanges: basis degree <= min(D, 2), a*(0) cap <= 1, |n| <= 3."},
    {"induced-brackets",
     "Straightened action on an induced module respects the affine relations.\n"
     "Ranges: PBW monomials of word length <= 3 with modes in [-3, 3], |n|, |m| <= 2."},
    {"induced-t-centrality",
     "At kappa = -2 the modes T(n) commute with e, f, h on an induced module.\n"
     "Ranges: PBW monomials of word length <= 2, |n - N0| <= 2, |m| <= 2."},
    {"straightening-consistency",
     "A seeded random word applied to the cyclic vector equals the result with one adjacent pair swapped plus the "
     "bracket term, each side evaluated in an independent engine.\n"
     "Ranges: 200 words of length 2..4, modes in [-3, 3]."},
    {"tau-twist-profile",
     "On the tau-twisted induced module the cyclic vector carries the character phi o tau: e and f values swapped, "
     "h values negated.\nRanges: subalgebra modes up to the support bound plus 3."},
    {"theta-identity",
     "On W (x) L(-chi) at kappa = -2, T(n) acts by theta_n where theta(z) = (chi(z)^2 + 2 chi'(z)) / 2, for every n "
     "whose coefficient is determined by the stored window of chi.\n"
     "Ranges: n in [-6, max(6, 2p + 3)], basis degree <= min(D, 2), a*(0) cap <= 1."},
    {"whittaker-profile",
     "The cyclic vector of M1(lambda, mu) (x) N1(eta) is a Whittaker vector: e(i), h(q + i), f(r + i) act by "
     "a_i = lambda_i, b_i = -2 sum_{k + l = q + i} lambda_k mu_l + eta_{q + i}, c_i = -sum mu mu lambda + "
     "sum mu eta - kappa (r + i) mu_{r + i}, with q = max(M, N + 1), r = max(M + N + 1, 2M, P + 1).\n"
     "Ranges: i = 0..4."},
    {"classification",
     "Case analysis of chi: (I) top index p >= 1; (II) chi supported in n <= 0 with chi_0 = 1 or chi_0 not an integer; "
     "(III) chi_0 = l + 1 with l >= 1 and S_l(-chi_{-1}, ..., -chi_{-l}) != 0; otherwise reducible."},
    {"cyclicity",
     "Truncated evidence: the closure of the cyclic vector under e(n), f(n), h(n) for n in the mode window contains "
     "every basis vector of degree <= D (a*(0) cap). Only exact subspaces of the true submodule are used.\n"
     "Ranges: D, buffer, cap and mode window from the config; default window [-(D + 1), support + 1]."},
    {"submodule",
     "Truncated evidence: the cyclic vector and then basis monomials are tried in order; a witness is a vector whose "
     "closure misses part of the degree <= D space. The outcome must agree with the classification.\n"
     "Ranges: as for cyclicity."},
    {"schur",
     "S_r from the recursion r S_r = sum_k x_k S_{r-k} equals the determinant formula divided by r!.\n"
     "Ranges: r = 1..12, 50 seeded rational inputs each."},
    {"t-scan",
     "On an induced module with kappa = -2, T(n)u is independent of u for n < N0 = N + M + 1 and a multiple of u "
     "for n >= N0, the multiple vanishing for large n.\nRanges: n in [N0 - 3, N0 + 3]."},
    {"singular-vectors",
     "The vectors (T(N0 - i) - theta_{N0 - i})u are nonzero and satisfy x w = phi(x) w for subalgebra modes.\n"
     "Ranges: i = 1..2, modes up to the support bound plus 2."},
    {"quotient",
     "The submodule generated by the singular vectors, truncated by word length and mode window, contains them, so "
     "their projections to the truncated quotient vanish.\nRanges: word length <= D, modes in the config window "
     "(default [-4, max(N, M) + 2])."},
};

}  // namespace

std::vector<std::string> known_checks() {
  std::vector<std::string> out;
  for (const auto& e : kExplain) out.emplace_back(e.name);
  return out;
}

std::string explain(const std::string& check) {
  std::string name = check == "centrality" ? "t-centrality" : check;
  for (const auto& e : kExplain) {
    if (name == e.name) return std::string(e.name) + "\n" + e.text + "\n";
  }
  throw EngineError(ErrorCode::UnknownCheck, "explain", "no check named '" + check + "'");
}

// ------------------------------------------------------------------ fixtures

namespace {

std::map<int, Rational> tab(std::initializer_list<std::pair<const int, Rational>> l) { return std::map<int, Rational>(l); }

std::vector<Fixture> make_fixtures() {
  std::vector<Fixture> out;
  auto wak = [](std::string id, Rational level, std::map<int, Rational> lambda, std::map<int, Rational> mu,
                std::map<int, Rational> eta, std::vector<std::string> suites) {
    RunConfig c;
    c.id = std::move(id);
    c.level = level;
    c.module = ModuleKind::WakimotoWhittaker;
    c.lambda = std::move(lambda);
    c.mu = std::move(mu);
    c.eta = std::move(eta);
    c.suites = std::move(suites);
    return c;
  };
  auto chi = [](std::string id, std::map<int, Rational> chi, std::vector<std::string> suites) {
    RunConfig c;
    c.id = std::move(id);
    c.level = Rational(-2);
    c.module = ModuleKind::WakimotoChi;
    c.chi = std::move(chi);
    c.suites = std::move(suites);
    return c;
  };
  out.push_back({"whittaker-generic", "level 1, lambda and mu up to index 2, eta_2 = 3",
                 wak("whittaker-generic", Rational(1), tab({{0, 1}, {1, 2}}), tab({{1, 1}, {2, Rational(-1, 3)}}),
                     tab({{0, Rational(1, 2)}, {2, 3}}), {"brackets", "virasoro", "profile"})});
  out.push_back({"whittaker-critical", "level -2, N = 2, M = 1, P = 1",
                 wak("whittaker-critical", Rational(-2), tab({{0, Rational(1, 2)}, {2, -1}}), tab({{1, 3}}),
                     tab({{1, 2}}), {"brackets", "centrality", "profile"})});
  out.push_back({"whittaker-profile", "level 1/2, N = 0, M = 1, P = 1: c_0 = 1 and b_0 = 0",
                 wak("whittaker-profile", Rational(1, 2), tab({{0, 1}}), tab({{1, 1}}),
                     tab({{0, Rational(7, 5)}, {1, 2}}), {"profile"})});
  out.push_back({"cyclic-eta1", "level 1, vacuum Weyl factor, eta_1 = 2",
                 wak("cyclic-eta1", Rational(1), {}, {}, tab({{0, Rational(1, 2)}, {1, 2}}), {"cyclicity"})});
  out.push_back({"cyclic-eta2", "level -1/2, vacuum Weyl factor, eta_2 = 3",
                 wak("cyclic-eta2", Rational(-1, 2), {}, {}, tab({{0, 1}, {2, 3}}), {"cyclicity"})});
  out.push_back({"chi-pole2", "chi(z) = 3 z^-2", chi("chi-pole2", tab({{1, 3}}), {"classify", "theta", "centrality", "submodule"})});
  out.push_back({"chi-simple-pole", "chi(z) = (1/2) z^-1", chi("chi-simple-pole", tab({{0, Rational(1, 2)}}), {"classify", "theta"})});
  out.push_back({"chi-zero", "chi = 0, residue 0", chi("chi-zero", {}, {"classify", "submodule"})});
  out.push_back({"chi-residue3", "chi_0 = 3, chi_{-1} = 1, chi_{-2} = -1/2",
                 chi("chi-residue3", tab({{0, 3}, {-1, 1}, {-2, Rational(-1, 2)}}), {"classify", "schur"})});
  {
    RunConfig c;
    c.id = "induced-s00";
    c.level = Rational(-2);
    c.module = ModuleKind::InducedS;
    c.phi = CharacterConfig{0, 0, {}, tab({{0, Rational(1, 3)}, {1, 2}}), {}};
    c.theta = tab({{-1, 5}, {0, -1}, {1, Rational(2, 3)}, {2, 2}});
    c.suites = {"brackets", "centrality", "t-scan"};
    out.push_back({"induced-s00", "S(0, 0) at level -2 with phi(h(0)) = 1/3, phi(h(1)) = 2", c});
  }
  {
    RunConfig c;
    c.id = "induced-p12";
    c.level = Rational(1);
    c.module = ModuleKind::InducedP;
    c.psi = CharacterConfig{1, 2, tab({{0, 1}}), tab({{1, Rational(-2)}}), tab({{2, 1}})};
    c.suites = {"brackets"};
    out.push_back({"induced-p12", "P(1, 2) at level 1", c});
  }
  for (auto& f : out) f.config = parse_config(serialize_config(f.config));
  return out;
}

}  // namespace

const std::vector<Fixture>& builtin_fixtures() {
  static const std::vector<Fixture> fixtures = make_fixtures();
  return fixtures;
}

}  // namespace wakimoto
