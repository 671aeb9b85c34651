#include <doctest.h>

#include <string>

#include "wakimoto/error.hpp"
#include "wakimoto/report.hpp"

using namespace wakimoto;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const EngineError& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    return e.what();
  }
  return "";
}

bool mentions(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const char* kWhittaker = R"({
  "id": "eta2",
  "level": "1",
  "module": "wakimoto-whittaker",
  "eta": {"2": "3"},
  "truncation": {"D": 2, "cap": 1},
  "suites": ["brackets"],
  "seed": 5
})";

}  // namespace

TEST_CASE("config round trip") {
  RunConfig c = parse_config(kWhittaker);
  CHECK(c.level == Rational(1));
  CHECK(c.eta.at(2) == Rational(3));
  std::string once = serialize_config(c);
  CHECK(serialize_config(parse_config(once)) == once);
  for (const auto& f : builtin_fixtures()) {
    std::string s = serialize_config(f.config);
    CHECK(serialize_config(parse_config(s)) == s);
  }
}

TEST_CASE("config errors name the field") {
  CHECK(mentions(config_error(R"({"level": "1", "module": "wakimoto-whittaker", "mu": {"0": "1"}, "suites": ["brackets"]})"),
                 "mu.0"));
  CHECK(mentions(config_error(R"({"module": "wakimoto-whittaker", "suites": ["brackets"]})"), "level"));
  CHECK(mentions(config_error(R"({"level": 1, "module": "wakimoto-whittaker", "suites": ["brackets"]})"), "level"));
  CHECK(mentions(config_error(R"({"level": "0.5", "module": "wakimoto-whittaker", "suites": ["brackets"]})"), "level"));
  CHECK(mentions(config_error(R"({"level": "1", "module": "nope", "suites": ["brackets"]})"), "module"));
  CHECK(mentions(config_error(R"({"level": "1", "module": "wakimoto-whittaker", "suites": ["brackets", "warp"]})"),
                 "suites[1]"));
  CHECK(mentions(config_error(R"({"level": "1", "module": "wakimoto-whittaker", "suites": ["theta"]})"), "suites[0]"));
  CHECK(mentions(config_error(R"({"level": "1", "module": "wakimoto-whittaker", "lambda": {"0": "x"}, "suites": ["brackets"]})"),
                 "lambda.0"));
  CHECK(mentions(config_error(R"({"level": "1", "module": "wakimoto-whittaker", "colour": 1, "suites": ["brackets"]})"),
                 "colour"));
  CHECK(mentions(config_error(R"({"level": "-2", "module": "induced-S", "suites": ["t-scan"]})"), "phi"));
  CHECK(mentions(config_error(R"({"level": "1", "module": "wakimoto-chi", "suites": ["classify"]})"), "level"));
  CHECK(mentions(config_error("{"), "malformed"));
}

TEST_CASE("runs are deterministic and pass") {
  RunConfig c = parse_config(kWhittaker);
  RunResult a = run_all({c});
  RunResult b = run_all({c});
  CHECK(a.success());
  CHECK(a.checks() > 0);
  CHECK(render_report(a) == render_report(b));
  CHECK(mentions(render_report(a), "\"schema\": \"wakimoto-report/1\""));
  RunResult seeded = run_all({c}, 17);
  CHECK(seeded.seed == 17);
}

TEST_CASE("schur suite") {
  RunConfig c = parse_config(R"({"level": "1", "module": "wakimoto-whittaker", "suites": ["schur"], "seed": 3})");
  RunResult r = run_all({c});
  CHECK(r.success());
  CHECK(r.checks() == 1);
}

TEST_CASE("config files with several fixtures") {
  auto cs = parse_config_file(std::string(R"({"fixtures": [)") + kWhittaker + "," + kWhittaker + "]}");
  CHECK(cs.size() == 2);
  try {
    parse_config_file(R"({"fixtures": [{"level": "1", "module": "induced-P", "suites": ["brackets"]}]})");
    CHECK(false);
  } catch (const EngineError& e) {
    CHECK(mentions(e.what(), "fixtures[0].psi"));
  }
}

TEST_CASE("explain") {
  CHECK(mentions(explain("theta-identity"), "theta(z) = (chi(z)^2 + 2 chi'(z)) / 2"));
  CHECK(mentions(explain("centrality"), "T(n)"));
  for (const auto& name : known_checks()) CHECK_NOTHROW(explain(name));
  try {
    explain("no-such-check");
    CHECK(false);
  } catch (const EngineError& e) {
    CHECK(e.code() == ErrorCode::UnknownCheck);
  }
}
