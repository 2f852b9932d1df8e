#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <memory>
#include <tuple>

#include "qvir/lie.hpp"
#include "qvir/verify.hpp"

using namespace qvir;

namespace {

RunConfig small(const std::string& suite) {
  RunConfig c;
  c.suite = suite;
  c.alpha_max = 1;
  c.r_max = 1;
  c.mode_max = 2;
  c.window = 2;
  c.samples = 10;
  return c;
}

}  // namespace

TEST_CASE("configuration validation") {
  RunConfig c;
  CHECK_NOTHROW(validate(c));
  c.window = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = RunConfig{};
  c.suite = "nope";
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  for (const Rational& bad : {Rational(0), Rational(1), Rational(-1)}) {
    c = RunConfig{};
    c.eval_q = {bad};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
  }
}

TEST_CASE("empty report") {
  Report r;
  auto j = report_json(r);
  CHECK(j["kernel_version"] == "0.1.0");
  CHECK(j["summary"]["total"] == 0);
  CHECK(j["summary"]["passed"] == 0);
  CHECK(j["checks"].empty());
  CHECK(r.all_pass());
}

TEST_CASE("reports are deterministic and sorted") {
  RunConfig c = small("all");
  c.eval_q = {Rational(2)};
  Report a = run_suite(c);
  Report b = run_suite(c);
  CHECK(report_text(a) == report_text(b));
  CHECK(a.all_pass());
  auto index = [](const std::string& s) {
    return std::find(suite_names().begin(), suite_names().end(), s) - suite_names().begin();
  };
  CHECK(std::is_sorted(a.checks.begin(), a.checks.end(), [&](const CheckRecord& x, const CheckRecord& y) {
    return std::make_tuple(index(x.suite), std::cref(x.name), std::cref(x.params)) <
           std::make_tuple(index(y.suite), std::cref(y.name), std::cref(y.params));
  }));
  auto j = report_json(a);
  CHECK(j["summary"]["total"] == a.checks.size());
  CHECK(j["checks"][0]["elapsed"].is_null());
}

TEST_CASE("timings are recorded only on request") {
  RunConfig c = small("field");
  c.timings = true;
  Report r = run_suite(c);
  REQUIRE(!r.checks.empty());
  CHECK(report_json(r)["checks"][0]["elapsed"].is_number());
}

TEST_CASE("smallest window") {
  RunConfig c = small("formal");
  c.window = 1;
  CHECK(run_suite(c).all_pass());
}

TEST_CASE("cache soundness and a corrupted entry") {
  RunConfig c = small("lie");
  Report plain = run_suite(c);
  auto cache = std::make_shared<StructureCache>();
  set_structure_cache(cache);
  Report cached = run_suite(c);
  CHECK(cache->size() > 0);
  REQUIRE(plain.checks.size() == cached.checks.size());
  for (std::size_t k = 0; k < plain.checks.size(); ++k) CHECK(plain.checks[k].pass == cached.checks[k].pass);

  // [D^1(1), D^1(-1)] with a spurious central term
  LieElement wrong = bracket_D_generators(1, 1, 1, -1) + d_central();
  auto bad = std::make_shared<StructureCache>();
  bad->insert(LieLabel::d_gen(1, 1), LieLabel::d_gen(1, -1), wrong);
  set_structure_cache(bad);
  Report broken = run_suite(c);
  set_structure_cache(nullptr);
  CHECK_FALSE(broken.all_pass());
  bool found = false;
  for (const auto& r : broken.checks) {
    if (r.name == "structure-cache" && !r.pass) {
      CHECK(r.witness == "[D[1,1], D[1,-1]]; coefficient c: lhs = 1*q^0; rhs = 0; residual = 1*q^0");
      found = true;
    }
  }
  CHECK(found);
}
