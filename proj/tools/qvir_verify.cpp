// qvir_verify: runs the verification suites and writes a JSON report.
//
// Exit status: 0 when every check passes, 1 when some check fails, 2 on a
// usage error.

#include <cstdlib>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "qvir/lie.hpp"
#include "qvir/verify.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  qvir::RunConfig config;
  std::string level = "1";
  std::vector<std::string> eval_q;
  std::string cache;

  CLI::App app{"Exact verification suites for the q-Virasoro kernel"};
  app.add_option("--suite", config.suite, "Suite to run")
      ->check(CLI::IsMember({"all", "field", "lie", "affine", "formal", "induced", "correspondence"}))
      ->capture_default_str();
  app.add_option("--alpha-max", config.alpha_max, "Bound on |alpha|")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--r-max", config.r_max, "Bound on |r|")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--mode-max", config.mode_max, "Bound on |mode|")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--window", config.window, "Coefficient window W")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--level", level, "Level as P/Q")->capture_default_str();
  app.add_option("--samples", config.samples, "Random samples per randomized check")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--report", config.report_path, "Report path (stdout when omitted)");
  app.add_option("--cache", cache, "Structure-constant cache file")->envname("QVIR_CACHE");
  app.add_option("--eval-q", eval_q, "Specialization point P/Q, repeatable")->take_all();
  app.add_flag("--timings", config.timings, "Record elapsed seconds per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    config.level = qvir::parse_rational(level);
    for (const auto& q : eval_q) config.eval_q.push_back(qvir::parse_rational(q));
    if (!cache.empty()) config.cache_path = cache;
    qvir::validate(config);
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::shared_ptr<qvir::StructureCache> store;
  if (config.cache_path) {
    store = std::make_shared<qvir::StructureCache>();
    try {
      store->load(*config.cache_path);
    } catch (const std::exception& e) {
      std::cerr << "cannot load cache " << *config.cache_path << ": " << e.what() << "\n";
      return kExitUsage;
    }
    qvir::set_structure_cache(store);
  }

  const qvir::Report report = qvir::run_suite(config);

  try {
    if (config.report_path.empty()) {
      std::cout << qvir::report_text(report);
    } else {
      qvir::emit_report(report, config.report_path);
    }
    if (store) store->save(*config.cache_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitFail;
  }

  std::cerr << report.passed() << "/" << report.checks.size() << " checks passed\n";
  int shown = 0;
  for (const auto& r : report.checks) {
    if (r.pass || shown++ >= 20) continue;
    std::cerr << "FAIL " << r.suite << " " << r.name << ": " << r.witness << "\n";
  }
  return report.all_pass() ? EXIT_SUCCESS : kExitFail;
}
