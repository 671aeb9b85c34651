#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wakimoto/analysis.hpp"

namespace wakimoto {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr const char* kReportSchema = "wakimoto-report/1";

enum class ModuleKind { WakimotoWhittaker, WakimotoChi, InducedS, InducedP };

std::string to_string(ModuleKind k);

struct TruncationConfig {
  int D = 3;
  int buffer = 0;
  int cap = 2;
  std::optional<ModeWindow> mode_window;
};

/// Character data of an induced module: (N, M) for S, (q, r) for P.
struct CharacterConfig {
  int first = 0;
  int second = 0;
  std::map<int, Rational> e, h, f;
};

struct RunConfig {
  std::string id = "fixture";
  Rational level;
  ModuleKind module = ModuleKind::WakimotoWhittaker;
  std::map<int, Rational> lambda, mu, eta;
  /// The series chi of the classifier; the module built is W (x) L(-chi).
  std::map<int, Rational> chi;
  int chi_low = -12;
  std::map<int, Rational> theta;
  int theta_low = -6;
  std::optional<CharacterConfig> phi;
  std::optional<CharacterConfig> psi;
  TruncationConfig truncation;
  std::vector<std::string> suites;
  std::int64_t seed = 0;
};

/// Parses and validates one config document; errors are CONFIG_INVALID naming the field path.
RunConfig parse_config(const std::string& json_text);
/// A document holding either one config object or {"fixtures": [...]}.
std::vector<RunConfig> parse_config_file(const std::string& json_text);
std::string serialize_config(const RunConfig& c);

struct SuiteOutcome {
  VerificationReport report;
  bool needs_saturation = false;
};

struct FixtureOutcome {
  std::string id;
  std::string params;  // canonical config JSON
  std::vector<SuiteOutcome> suites;
};

struct RunResult {
  std::vector<FixtureOutcome> fixtures;
  std::int64_t seed = 0;

  std::size_t checks() const;
  std::size_t failed() const;
  std::size_t unsaturated() const;
  bool success() const { return failed() == 0 && unsaturated() == 0; }
};

SuiteOutcome run_suite(const RunConfig& c, const std::string& suite);
FixtureOutcome run_fixture(const RunConfig& c);
RunResult run_all(const std::vector<RunConfig>& configs, std::optional<std::int64_t> seed_override = std::nullopt);

/// Deterministic report document (no timings).
std::string render_report(const RunResult& r);

/// Statement and tested ranges of a named check; UNKNOWN_CHECK otherwise.
std::string explain(const std::string& check);
std::vector<std::string> known_checks();

struct Fixture {
  std::string id;
  std::string summary;
  RunConfig config;
};

const std::vector<Fixture>& builtin_fixtures();

}  // namespace wakimoto
