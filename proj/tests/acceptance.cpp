// Acceptance run: one PASS/FAIL line per criterion.
//
// usage: acceptance <qvir_verify> <corrupted-cache fixture> <scratch dir>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "oracles.hpp"
#include "qvir/verify.hpp"

using namespace qvir;
namespace fs = std::filesystem;

namespace {

const std::vector<Rational> kSpecialization = {Rational(2), Rational(3, 2)};

struct Tally {
  std::size_t total = 0;
  std::size_t failed = 0;
  std::string first_failure;

  void add(const CheckRecord& r) {
    ++total;
    if (!r.pass) {
      if (failed++ == 0) first_failure = r.suite + " " + r.name + ": " + r.witness;
    }
  }
  bool ok() const { return total > 0 && failed == 0; }
  std::string text() const {
    std::string out = std::to_string(total - failed) + "/" + std::to_string(total) + " checks";
    if (failed) out += "; first failure " + first_failure;
    return out;
  }
};

template <class Pred>
Tally tally(const Report& r, Pred&& keep) {
  Tally t;
  for (const auto& c : r.checks)
    if (keep(c)) t.add(c);
  return t;
}

bool is_specialized(const CheckRecord& c) { return c.name.ends_with("@q0"); }

long param_long(const CheckRecord& c, const std::string& key) {
  for (const auto& [k, v] : c.params)
    if (k == key) return std::get<long>(v);
  return 0;
}

struct Timed {
  Report report;
  double seconds = 0;
};

Timed run(RunConfig c) {
  c.eval_q = kSpecialization;
  const auto t0 = std::chrono::steady_clock::now();
  Report r = run_suite(c);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  return {std::move(r), dt.count()};
}

int verdicts = 0;
int failures = 0;

void line(int n, bool ok, const std::string& what, const std::string& detail) {
  ++verdicts;
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << n << ": " << what << " (" << detail << ")" << std::endl;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Independent check of the -2 proportionality: trace of explicit matrices.
Tally dense_form_oracle(int amax, int rmax) {
  Tally t;
  const int n = amax + rmax + 1;
  for (int a = 1; a <= amax; ++a)
    for (int r = -rmax; r <= rmax; ++r)
      for (int b = 1; b <= amax; ++b)
        for (int s = -rmax; s <= rmax; ++s) {
          const Rational trace = oracle::trace_form(oracle::frak_matrix(a, r, n), oracle::frak_matrix(b, s, n));
          const Rational form = pair_form(frak(a, r), frak(b, s)).eval(Rational(2));
          CheckRecord rec{"oracle", "dense-trace", {}, trace == -2 * form, "", std::nullopt};
          if (!rec.pass) {
            rec.witness = "d[" + std::to_string(a) + "," + std::to_string(r) + "], d[" + std::to_string(b) + "," +
                          std::to_string(s) + "]: trace " + trace.get_str() + ", form " + form.get_str();
          }
          t.add(rec);
        }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <qvir_verify> <corrupted-cache fixture> <scratch dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path fixture = argv[2];
  const fs::path scratch = argv[3];
  fs::create_directories(scratch);

  Tally specialized;
  auto collect_specialized = [&](const Report& r) {
    for (const auto& c : r.checks)
      if (is_specialized(c)) specialized.add(c);
  };

  // 1 and 2: the Lie-algebra suite at |alpha| <= 3, |mode|, |r| <= 3
  RunConfig lie;
  lie.suite = "lie";
  lie.alpha_max = 3;
  lie.mode_max = 3;
  lie.samples = 200;
  const Timed lr = run(lie);
  collect_specialized(lr.report);
  {
    long triples = 0;
    Tally t = tally(lr.report, [&](const CheckRecord& c) {
      if (is_specialized(c)) return false;
      if (c.name == "jacobi") triples += param_long(c, "triples");
      if (c.name == "jacobi-random") triples += param_long(c, "samples");
      return c.name == "jacobi" || c.name == "jacobi-random" || c.name == "skew-symmetry";
    });
    const bool ok = t.ok() && triples >= 10000 && lr.seconds <= 120.0;
    std::ostringstream d;
    d << t.text() << ", " << triples << " triples, " << lr.seconds << " s";
    line(1, ok, "Jacobi identity and skew symmetry in D, frakD, gl", d.str());
  }
  {
    Tally t = tally(lr.report, [](const CheckRecord& c) {
      return !is_specialized(c) &&
             (c.name == "embedding-homomorphism" || c.name == "form-pullback" || c.name == "form-invariance");
    });
    Tally o = dense_form_oracle(3, 3);
    line(2, t.ok() && o.ok(), "embedding homomorphism, -2 form pullback, invariance",
         t.text() + "; dense trace oracle " + o.text());
  }

  // 3: covariant algebra
  RunConfig aff;
  aff.suite = "affine";
  aff.alpha_max = 3;
  aff.r_max = 2;
  aff.mode_max = 3;
  const Timed ar = run(aff);
  collect_specialized(ar.report);
  {
    Tally t = tally(ar.report, [](const CheckRecord& c) { return !is_specialized(c); });
    line(3, t.ok(), "covariant bracket isomorphic to D", t.text());
  }

  // 4: generating identities at W = 5
  RunConfig formal;
  formal.suite = "formal";
  formal.alpha_max = 3;
  formal.r_max = 2;
  formal.window = 5;
  const Timed fr = run(formal);
  collect_specialized(fr.report);
  {
    Tally t = tally(fr.report, [](const CheckRecord& c) { return !is_specialized(c); });
    Tally g = tally(fr.report,
                    [](const CheckRecord& c) { return c.name == "generating-identity"; });
    std::ostringstream d;
    d << "generating identities " << g.text() << "; suite " << t.text() << ", " << fr.seconds << " s";
    line(4, t.ok() && g.ok() && fr.seconds <= 300.0, "generating identities at W = 5", d.str());
  }

  // 5: induced modules
  RunConfig ind;
  ind.suite = "induced";
  const Timed ir = run(ind);
  collect_specialized(ir.report);
  {
    Tally t = tally(ir.report, [](const CheckRecord& c) { return !is_specialized(c); });
    line(5, t.ok(), "level, grading, restrictedness, Borcherds, sigma, conjugation law", t.text());
  }

  // 6: correspondence on M_D(l)
  {
    Tally t;
    for (const char* level : {"0", "1", "3/2"}) {
      RunConfig corr;
      corr.suite = "correspondence";
      corr.level = parse_rational(level);
      const Timed cr = run(corr);
      collect_specialized(cr.report);
      for (const auto& c : cr.report.checks)
        if (!is_specialized(c)) t.add(c);
    }
    line(6, t.ok(), "quasi and phi modules on M_D(l), l in {0, 1, 3/2}", t.text());
  }

  // 7: specializations
  line(7, specialized.ok(), "identities re-verified at q0 in {2, 3/2}", specialized.text());

  // 8: determinism and the exit-status contract of the CLI
  {
    const std::string args = " --suite all --alpha-max 2 --r-max 1 --mode-max 2 --window 3 --samples 20 --seed 11"
                             " --eval-q 2 --report ";
    const fs::path a = scratch / "determinism_a.json";
    const fs::path b = scratch / "determinism_b.json";
    const int ea = shell(cli + args + a.string() + " 2>/dev/null");
    const int eb = shell(cli + args + b.string() + " 2>/dev/null");
    const bool identical = ea == 0 && eb == 0 && slurp(a) == slurp(b) && !slurp(a).empty();

    const fs::path cache = scratch / "corrupted_cache.json";
    fs::copy_file(fixture, cache, fs::copy_options::overwrite_existing);
    const fs::path bad = scratch / "corrupted_report.json";
    const int ec = shell(cli + " --suite lie --alpha-max 1 --mode-max 1 --cache " + cache.string() + " --report " +
                         bad.string() + " 2>/dev/null");
    std::string witness;
    bool coefficient_witness = false;
    try {
      const auto doc = nlohmann::json::parse(slurp(bad));
      for (const auto& c : doc.at("checks")) {
        if (c.at("status") == "fail" && c.at("name") == "structure-cache") {
          witness = c.at("witness").get<std::string>();
          coefficient_witness = witness.find("coefficient c") != std::string::npos;
          break;
        }
      }
    } catch (const std::exception& e) {
      witness = std::string("unreadable report: ") + e.what();
    }
    const int eu = shell(cli + " --eval-q 1 --suite field 2>/dev/null >/dev/null");
    std::ostringstream d;
    d << "repeat runs " << (identical ? "byte-identical" : "differ") << "; corrupted cache exit " << ec
      << ", witness \"" << witness << "\"; usage error exit " << eu;
    line(8, identical && ec == 1 && coefficient_witness && eu == 2, "determinism and exit status", d.str());
  }

  std::cout << (failures == 0 ? "PASS" : "FAIL") << "  " << verdicts - failures << "/" << verdicts
            << " criteria" << std::endl;
  return failures == 0 ? 0 : 1;
}
