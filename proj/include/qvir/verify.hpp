#pragma once

// Suite runner behind the qvir_verify command line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qvir/qq_field.hpp"

namespace qvir {

inline constexpr const char* kKernelVersion = "0.1.0";

// Suites in report order.
const std::vector<std::string>& suite_names();

struct RunConfig {
  std::string suite = "all";
  int alpha_max = 3;
  int r_max = 2;
  int mode_max = 4;
  int window = 5;
  Rational level = 1;
  int samples = 200;
  std::uint64_t seed = 0;
  std::string report_path;
  std::optional<std::string> cache_path;
  std::vector<Rational> eval_q;
  bool timings = false;
};

// Throws std::invalid_argument on a bad configuration.
void validate(const RunConfig& config);

using ParamValue = std::variant<long, std::string>;
using Params = std::vector<std::pair<std::string, ParamValue>>;

struct CheckRecord {
  std::string suite;
  std::string name;
  Params params;
  bool pass = true;
  std::string witness;
  std::optional<double> elapsed;  // seconds, only with timings enabled
};

struct Report {
  RunConfig config;
  std::vector<CheckRecord> checks;  // sorted by (suite, name, params)

  std::size_t passed() const;
  std::size_t failed() const { return checks.size() - passed(); }
  bool all_pass() const { return failed() == 0; }
};

// Runs the selected suites with the structure cache already installed by the caller.
Report run_suite(const RunConfig& config);

nlohmann::ordered_json report_json(const Report& report);
std::string report_text(const Report& report);
// Throws std::runtime_error on an unwritable path.
void emit_report(const Report& report, const std::string& path);

}  // namespace qvir
