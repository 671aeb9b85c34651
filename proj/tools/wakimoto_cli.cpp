#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wakimoto/error.hpp"
#include "wakimoto/report.hpp"

namespace {

using namespace wakimoto;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EngineError(ErrorCode::ConfigInvalid, "run", path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& path, const std::string& out, std::optional<std::int64_t> seed) {
  auto start = std::chrono::steady_clock::now();
  std::vector<RunConfig> configs = parse_config_file(read_file(path));
  RunResult r = run_all(configs, seed);
  std::string doc = render_report(r);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    f << doc;
    if (!f) throw EngineError(ErrorCode::InvalidArgument, "run", out + ": cannot write report");
  } else {
    std::cout << doc;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // The summary shares stdout only when the report went to a file.
  std::ostream& log = out.empty() ? std::cerr : std::cout;

  for (const auto& fx : r.fixtures) {
    for (const auto& s : fx.suites) {
      for (const auto& c : s.report.checks) {
        log << (c.pass ? "PASS " : "FAIL ") << fx.id << " / " << s.report.suite << " / " << c.name;
        if (!c.pass) log << ": " << c.detail;
        log << "\n";
      }
      if (s.needs_saturation && s.report.saturated && !*s.report.saturated) {
        log << "UNSATURATED " << fx.id << " / " << s.report.suite << "\n";
      }
    }
  }
  log << r.checks() << " checks, " << r.failed() << " failed, " << r.unsaturated() << " unsaturated probes; "
            << "wall-clock " << std::fixed << std::setprecision(2) << secs << " s\n";
  return r.success() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-field and induced module verification engine for affine sl2"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::int64_t> seed;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run the suites of a config file and write a report");
  run->add_option("config", config_path, "Config file (one config or {\"fixtures\": [...]})")->required();
  run->add_option("--out", out_path, "Report path; the report goes to stdout when omitted");
  run->add_option("--seed", seed, "Overrides the seed of every config");
  run->add_option("--jobs", jobs, "Parallelism hint; results do not depend on it")->check(CLI::PositiveNumber);

  std::string check_name;
  auto* expl = app.add_subcommand("explain", "Print the statement and ranges of a check");
  expl->add_option("check", check_name, "Check name")->required();

  auto* fixtures = app.add_subcommand("fixtures", "Built-in fixtures");
  fixtures->require_subcommand(1);
  auto* list = fixtures->add_subcommand("list", "List built-in fixtures");
  std::string show_id;
  auto* show = fixtures->add_subcommand("show", "Print the config of a built-in fixture");
  show->add_option("id", show_id, "Fixture id")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_path, seed);
    if (*expl) {
      std::cout << explain(check_name);
      return 0;
    }
    if (*list) {
      for (const auto& f : builtin_fixtures()) std::cout << f.id << "  " << f.summary << "\n";
      return 0;
    }
    if (*show) {
      for (const auto& f : builtin_fixtures()) {
        if (f.id == show_id) {
          std::cout << serialize_config(f.config) << "\n";
          return 0;
        }
      }
      std::cerr << "no fixture named '" << show_id << "'\n";
      return 2;
    }
  } catch (const EngineError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
