#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wakimoto/induced.hpp"
#include "wakimoto/laurent.hpp"
#include "wakimoto/wakimoto.hpp"

namespace wakimoto {

// ---------------------------------------------------------------- classifier

enum class Verdict { IrreducibleI, IrreducibleII, IrreducibleIII, Reducible };

std::string to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Reducible;
  std::optional<int> p;          // case I
  std::optional<Rational> chi_p;
  std::optional<Rational> chi_0;  // cases II, III and the reducible tail
  std::optional<int> ell;         // case III
  std::optional<Rational> schur;  // S_ell(-chi_{-1}, ..., -chi_{-ell})
};

/// chi is the weight-one series sum_n chi_n z^{-n-1}; the module in question is W (x) L(-chi).
Classification classify_chi(const LaurentWindow& chi);

// ------------------------------------------------------------ reports

struct CheckResult {
  std::string name;
  std::string description;
  bool pass = false;
  std::string detail;
  std::optional<std::string> offending;    // first failing basis vector
  std::optional<std::string> discrepancy;  // exact difference vector
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::optional<bool> saturated;
  std::map<std::string, std::string> stats;

  bool all_pass() const;
};

std::string to_string(const FockLC& v);
std::string to_string(const PBWLC& v);

// ------------------------------------------------------------ bracket suites

struct SuiteRange {
  int degree = 3;     // basis degree bound
  int cap = 2;        // a*(0) exponent cap
  int n_range = 3;    // |n| <= n_range for the first mode
  int m_range = 3;    // |m| <= m_range for the second mode
};

/// The six sl2 bracket identities of the affine algebra on every basis vector.
CheckResult sl2_brackets(const WakimotoContext& ctx, const SuiteRange& r);

/// [L(n), x(m)] = -m x(n + m).
CheckResult sugawara_affine(const WakimotoContext& ctx, const SuiteRange& r);

/// [L(n), L(m)] for (1, -1) and (2, -2); the central charge is read off the operators.
CheckResult virasoro_central_charge(const WakimotoContext& ctx, const SuiteRange& r, Rational* extracted = nullptr);

/// [T(n), x(m)] = 0 at the critical level.
CheckResult t_centrality(const WakimotoContext& ctx, const SuiteRange& r);

/// tau applied to both sides of every sl2 bracket identity gives an identity (mode labels only).
CheckResult tau_automorphism(int range);

/// Rebuilds the context with a*(0) counted as an annihilator; the check passes when
/// the sl2 identities then fail on [e(n), f(-n)].
CheckResult negative_control(const WakimotoContext& ctx, const SuiteRange& r);

/// Every applicable identity for the level: sl2, then Sugawara or T centrality, then tau.
VerificationReport bracket_suite(const WakimotoContext& ctx, const SuiteRange& r);

struct PBWRange {
  int max_word = 3;
  int lo = -3;
  int hi = 3;
  int n_range = 2;
  int m_range = 2;
};

std::vector<PBWMonomial> pbw_range_basis(const InducedModule& mod, const PBWRange& r);

CheckResult induced_brackets(InducedModule& mod, const PBWRange& r);
/// [T(n), x(m)] = 0 for |n - n_center| <= n_range.
CheckResult induced_t_centrality(InducedModule& mod, const PBWRange& r, int n_center);
/// Applying a seeded random word in two association orders gives the same vector.
CheckResult straightening_associativity(InducedModule& mod, int words, int max_len, int index_range,
                                        unsigned seed);
/// The twisted cyclic vector has the negated-and-swapped character.
CheckResult tau_twist_profile(const InducedFunctional& spec, int window);

// ------------------------------------------------------------ theta identity

/// (T(n) - theta_n) v = 0 on W (x) L(-chi) for every n in [n_lo, n_hi] where theta_n is determined.
CheckResult theta_identity(const WakimotoContext& ctx, const LaurentWindow& chi, int n_lo, int n_hi,
                           const SuiteRange& basis);

// ------------------------------------------------------------ Whittaker profile

struct WhittakerProfile {
  int q = 0;
  int r = 0;
  int window = 0;
  std::vector<Rational> measured_a, measured_b, measured_c;
  std::vector<Rational> predicted_a, predicted_b, predicted_c;
  bool match = false;
};

/// Measures e(i), h(q + i), f(r + i) on the cyclic vector for i in [0, window].
WhittakerProfile whittaker_profile(const WakimotoContext& ctx, int window);

// ------------------------------------------------------------ probes

struct ModeWindow {
  int lo = 0;
  int hi = 0;
};

struct ProbeParams {
  int D = 3;
  int buffer = 0;
  int cap = 2;
  std::optional<ModeWindow> modes;  // default [-(D + 1), support + 1]
  std::size_t max_vectors = 400000;
  std::size_t max_candidates = 0;   // 0 = all basis monomials
};

struct ProbeResult {
  std::size_t reached_dim = 0;
  std::size_t full_dim = 0;
  bool saturated = false;
  std::optional<FockVector> witness;
  std::optional<FockMonomial> excluded;  // a basis monomial outside the witness closure
  std::size_t candidates_tried = 0;
};

ModeWindow default_mode_window(const WakimotoContext& ctx, int D);

ProbeResult cyclicity_probe(const WakimotoContext& ctx, const FockVector& cyclic, const ProbeParams& p);

/// Looks for a vector (the cyclic vector, then basis monomials) whose truncated closure is proper.
ProbeResult submodule_probe(const WakimotoContext& ctx, const ProbeParams& p);

/// Closure of v in an induced module against the PBW box of the truncation.
ProbeResult induced_cyclicity_probe(InducedModule& mod, const PBWVector& v, const TruncationParams& t);

}  // namespace wakimoto
