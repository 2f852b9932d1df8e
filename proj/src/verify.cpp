#include "qvir/verify.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <tuple>

#include "qvir/affine.hpp"
#include "qvir/formal.hpp"
#include "qvir/induced.hpp"
#include "qvir/lie.hpp"

namespace qvir {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"field", "lie", "affine", "formal", "induced", "correspondence"};
  return names;
}

void validate(const RunConfig& c) {
  if (c.suite != "all" && std::find(suite_names().begin(), suite_names().end(), c.suite) == suite_names().end()) {
    throw std::invalid_argument("unknown suite \"" + c.suite + "\"");
  }
  if (c.alpha_max < 1 || c.r_max < 1 || c.mode_max < 1) throw std::invalid_argument("range bounds must be >= 1");
  if (c.window < 1) throw std::invalid_argument("window must be >= 1");
  if (c.samples < 0) throw std::invalid_argument("samples must be >= 0");
  for (const auto& q0 : c.eval_q) {
    if (q0 == 0 || q0 == 1 || q0 == -1) {
      throw std::invalid_argument("specialization point " + rational_to_string(q0) + " is 0 or a root of unity");
    }
  }
}

std::size_t Report::passed() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& r) { return r.pass; }));
}

namespace {

// ---------------------------------------------------------------------------
// Comparison with coefficient-level witnesses

class Compare {
 public:
  explicit Compare(const std::vector<Rational>& q0s) : q0s_(q0s), specialized_(q0s.size()) {}

  bool holds() const { return !witness_; }
  bool compared() const { return compared_; }
  const std::optional<std::string>& witness() const { return witness_; }
  const std::vector<std::optional<std::string>>& specialized() const { return specialized_; }

  void fail(const std::string& text) {
    if (!witness_) witness_ = text;
  }
  void require(bool cond, const std::string& where, const std::string& text) {
    if (!cond) fail(where + ": " + text);
  }

  template <class K, class KeyText>
  bool equal(const std::string& where, const LinComb<K>& lhs, const LinComb<K>& rhs, KeyText key_text) {
    compared_ = true;
    if (witness_) return false;
    if (!(lhs == rhs)) {
      const auto diff = lhs - rhs;
      const K& k = diff.begin()->first;
      fail(where + "; coefficient " + key_text(k) + ": lhs = " + lhs.coeff(k).to_string() +
           "; rhs = " + rhs.coeff(k).to_string() + "; residual = " + diff.begin()->second.to_string());
      return false;
    }
    for (std::size_t i = 0; i < q0s_.size(); ++i) {
      if (specialized_[i]) continue;
      try {
        std::map<K, Rational> acc;
        accumulate_specialized(acc, lhs, q0s_[i]);
        accumulate_specialized(acc, rhs, q0s_[i], -1);
        if (!acc.empty()) {
          specialized_[i] = where + "; coefficient " + key_text(acc.begin()->first) + " at q = " +
                            rational_to_string(q0s_[i]) + ": residual = " + rational_to_string(acc.begin()->second);
        }
      } catch (const std::exception& e) {
        specialized_[i] = where + ": evaluation failed: " + e.what();
      }
    }
    return true;
  }

  bool equal(const std::string& where, const LieElement& lhs, const LieElement& rhs) {
    if (lhs.tag() != rhs.tag()) {
      fail(where + ": algebra tags differ");
      return false;
    }
    return equal(where, lhs.terms(), rhs.terms(), [](const LieLabel& l) { return l.to_string(); });
  }

  bool equal(const std::string& where, const AffineElement& lhs, const AffineElement& rhs) {
    return equal(where, lhs, rhs, [](const AffineLabel& l) { return l.to_string(); });
  }

  bool equal(const std::string& where, const InducedModule& M, const PBWVector& lhs, const PBWVector& rhs) {
    return equal(where, lhs, rhs, [&M](const Monomial& m) { return M.monomial_text(m); });
  }

  bool equal(const std::string& where, const RatQ& lhs, const RatQ& rhs) {
    compared_ = true;
    if (witness_) return false;
    if (!(lhs == rhs)) {
      fail(where + ": lhs = " + lhs.to_string() + "; rhs = " + rhs.to_string() + "; residual = " +
           (lhs - rhs).to_string());
      return false;
    }
    for (std::size_t i = 0; i < q0s_.size(); ++i) {
      if (specialized_[i]) continue;
      try {
        if (lhs.eval(q0s_[i]) != rhs.eval(q0s_[i])) {
          specialized_[i] = where + " at q = " + rational_to_string(q0s_[i]) + ": lhs = " +
                            rational_to_string(lhs.eval(q0s_[i])) + "; rhs = " + rational_to_string(rhs.eval(q0s_[i]));
        }
      } catch (const std::exception& e) {
        specialized_[i] = where + ": evaluation failed: " + e.what();
      }
    }
    return true;
  }

  void absorb(const std::string& where, const IdentityVerdict& v) {
    compared_ = true;
    if (!v.holds) {
      fail(where + "; " + v.witness);
      return;
    }
    for (std::size_t i = 0; i < v.specialized.size() && i < specialized_.size(); ++i) {
      if (v.specialized[i] && !specialized_[i]) specialized_[i] = where + "; " + *v.specialized[i];
    }
  }

 private:
  const std::vector<Rational>& q0s_;
  std::optional<std::string> witness_;
  std::vector<std::optional<std::string>> specialized_;
  bool compared_ = false;
};

class Runner {
 public:
  explicit Runner(const RunConfig& c) : config_(c) {}

  template <class F>
  void check(const std::string& suite, const std::string& name, Params params, F&& body) {
    Compare cmp(config_.eval_q);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(cmp);
    } catch (const std::exception& e) {
      cmp.fail(std::string("exception: ") + e.what());
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    CheckRecord rec{suite, name, params, cmp.holds(), cmp.witness().value_or(""), std::nullopt};
    if (config_.timings) rec.elapsed = dt.count();
    records_.push_back(rec);
    if (!cmp.holds() || !cmp.compared()) return;
    for (std::size_t i = 0; i < config_.eval_q.size(); ++i) {
      Params sp = params;
      sp.emplace_back("q0", rational_to_string(config_.eval_q[i]));
      const auto& w = cmp.specialized()[i];
      records_.push_back({suite, name + "@q0", std::move(sp), !w, w.value_or(""), std::nullopt});
    }
  }

  std::vector<CheckRecord> take() { return std::move(records_); }

 private:
  const RunConfig& config_;
  std::vector<CheckRecord> records_;
};

std::string ints(std::initializer_list<std::pair<const char*, int>> xs) {
  std::string out;
  for (const auto& [k, v] : xs) {
    if (!out.empty()) out += ", ";
    out += std::string(k) + " = " + std::to_string(v);
  }
  return out;
}

Params label_params(const std::string& algebra, const LieElement& a) {
  const LieLabel& l = a.terms().begin()->first;
  return {{"algebra", algebra}, {"a", static_cast<long>(l.a)}, {"b", static_cast<long>(l.b)}};
}

std::string label_text(const LieElement& a) { return a.terms().begin()->first.to_string(); }

// ---------------------------------------------------------------------------
// field

RatQ random_ratq(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> exp(-3, 3);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> count(1, 3);
  auto poly = [&] {
    std::vector<LaurentPoly::Term> terms;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) terms.emplace_back(exp(rng), Rational(coeff(rng)) / (1 + (i % 2)));
    return LaurentPoly::from_terms(std::move(terms));
  };
  LaurentPoly num = poly();
  LaurentPoly den = poly();
  if (den.is_zero()) den = LaurentPoly(Rational(1));
  return RatQ::normalize(num, den);
}

void field_suite(Runner& run, const RunConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::vector<Rational> points = {Rational(2)};
  for (const auto& q0 : c.eval_q) points.push_back(q0);
  for (int s = 0; s < c.samples; ++s) {
    const RatQ x = random_ratq(rng);
    const RatQ y = random_ratq(rng);
    const RatQ z = random_ratq(rng);
    const Params p = {{"sample", static_cast<long>(s)}, {"seed", static_cast<long>(c.seed)}};
    run.check("field", "field-axioms", p, [&](Compare& cmp) {
      cmp.equal("associativity", (x + y) + z, x + (y + z));
      cmp.equal("commutativity", x * y, y * x);
      cmp.equal("distributivity", x * (y + z), x * y + x * z);
      if (!x.is_zero()) cmp.equal("inverse", x * x.inv(), RatQ(1));
    });
    run.check("field", "normal-form", p, [&](Compare& cmp) {
      for (const RatQ& v : {x, y, z, x * y + z}) {
        cmp.equal("text round trip of " + v.to_string(), RatQ::parse(v.to_string()), v);
        const LaurentPoly& d = v.den();
        cmp.require(d.low() == 0, v.to_string(), "denominator low exponent is nonzero");
        cmp.require(d.leading() > 0, v.to_string(), "denominator leading coefficient is not positive");
        mpz_class g = 0;
        for (const auto& [e, k] : d.terms()) {
          cmp.require(k.get_den() == 1, v.to_string(), "denominator coefficient is not integral");
          g = gcd(g, k.get_num());
        }
        cmp.require(g == 1, v.to_string(), "denominator is not primitive");
      }
    });
    run.check("field", "evaluation", p, [&](Compare& cmp) {
      for (const auto& q0 : points) {
        try {
          const Rational ex = x.eval(q0);
          const Rational ey = y.eval(q0);
          cmp.require((x * y).eval(q0) == ex * ey, "q = " + rational_to_string(q0), "product does not specialize");
          cmp.require((x + y).eval(q0) == ex + ey, "q = " + rational_to_string(q0), "sum does not specialize");
        } catch (const EvaluationPole&) {
          // random denominators may vanish at q0; such points are skipped
        }
      }
    });
  }
  for (int g = -c.alpha_max; g <= c.alpha_max; ++g) {
    run.check("field", "q-integer", {{"gamma", static_cast<long>(g)}}, [&](Compare& cmp) {
      for (int n = -c.mode_max; n <= c.mode_max; ++n) {
        const std::string where = ints({{"n", n}, {"gamma", g}});
        cmp.equal(where + " odd", qint(-n, g), -qint(n, g));
        cmp.equal(where + " inversion", qint(n, -g), qint(n, g));
        if (g == 0) {
          cmp.equal(where + " classical", qint(n, 0), RatQ(static_cast<long>(n)));
        } else {
          const RatQ diff = RatQ::q_power(-g) - RatQ::q_power(g);
          cmp.equal(where + " definition", qint(n, g) * diff, RatQ::q_power(-g * n) - RatQ::q_power(g * n));
          cmp.equal(where + " inverse difference", inverse_qdiff(g) * diff, RatQ(1));
          cmp.require(qint(n, g).eval(Rational(1)) == n, where, "value at q = 1 is not n");
        }
      }
    });
  }
}

// ---------------------------------------------------------------------------
// lie

struct GeneratorSet {
  std::string algebra;
  std::vector<LieElement> gens;
};

std::vector<GeneratorSet> lie_generators(const RunConfig& c) {
  GeneratorSet d{"D", {}};
  GeneratorSet f{"frakD", {}};
  GeneratorSet g{"gl", {}};
  for (int a = 1; a <= c.alpha_max; ++a)
    for (int n = -c.mode_max; n <= c.mode_max; ++n) {
      d.gens.push_back(d_gen(a, n));
      f.gens.push_back(frak(a, n));
    }
  d.gens.push_back(d_central());
  for (int i = -c.alpha_max; i <= c.alpha_max; ++i)
    for (int j = -c.alpha_max; j <= c.alpha_max; ++j) g.gens.push_back(gl_unit(i, j));
  return {d, f, g};
}

LieElement random_element(Algebra tag, std::mt19937_64& rng, int mode_max) {
  std::uniform_int_distribution<int> alpha(-6, 6);
  std::uniform_int_distribution<int> index(-mode_max, mode_max);
  std::uniform_int_distribution<int> coeff(-3, 3);
  LieElement out(tag);
  for (int k = 0; k < 2; ++k) {
    const int a = alpha(rng);
    const int i = tag == Algebra::Gl ? alpha(rng) : index(rng);
    out.add_scaled(canon_label(tag, a, i), RatQ(static_cast<long>(k == 0 ? 1 : coeff(rng))));
  }
  return out;
}

void lie_suite(Runner& run, const RunConfig& c) {
  const auto sets = lie_generators(c);
  for (const auto& set : sets) {
    const long triples = static_cast<long>(set.gens.size() * set.gens.size());
    for (const auto& a : set.gens) {
      Params p = label_params(set.algebra, a);
      Params pj = p;
      pj.emplace_back("triples", triples);
      run.check("lie", "jacobi", pj, [&](Compare& cmp) {
        for (const auto& b : set.gens)
          for (const auto& x : set.gens) {
            auto v = check_jacobi(a, b, x);
            if (!cmp.equal("jacobi(" + label_text(a) + ", " + label_text(b) + ", " + label_text(x) + ")", v.residual,
                           LieElement(a.tag()))) {
              return;
            }
          }
      });
      run.check("lie", "skew-symmetry", p, [&](Compare& cmp) {
        for (const auto& b : set.gens) {
          if (!cmp.equal("[" + label_text(a) + ", " + label_text(b) + "]", bracket(a, b), -bracket(b, a))) return;
        }
      });
      if (a.tag() == Algebra::Gl) continue;
      const LieLabel la = a.terms().begin()->first;
      if (la.kind == LieLabel::Kind::DCentral) continue;
      run.check("lie", "structure-cache", p, [&](Compare& cmp) {
        for (const auto& b : set.gens) {
          const LieLabel lb = b.terms().begin()->first;
          if (lb.kind == LieLabel::Kind::DCentral) continue;
          const std::string where = "[" + la.to_string() + ", " + lb.to_string() + "]";
          const bool ok = a.tag() == Algebra::D
                              ? cmp.equal(where, bracket_D(a, b), bracket_D_generators(la.a, la.b, lb.a, lb.b))
                              : cmp.equal(where, bracket_frakD(a, b), bracket_frakD_generators(la.a, la.b, lb.a, lb.b));
          if (!ok) return;
        }
      });
    }
    std::mt19937_64 rng(c.seed);
    const Algebra tag = set.gens.front().tag();
    run.check("lie", "jacobi-random",
              {{"algebra", set.algebra}, {"samples", static_cast<long>(c.samples)}, {"seed", static_cast<long>(c.seed)}},
              [&](Compare& cmp) {
                for (int s = 0; s < c.samples; ++s) {
                  LieElement a = random_element(tag, rng, c.mode_max);
                  LieElement b = random_element(tag, rng, c.mode_max);
                  LieElement x = random_element(tag, rng, c.mode_max);
                  if (!cmp.equal("sample " + std::to_string(s), check_jacobi(a, b, x).residual, LieElement(tag))) return;
                }
              });
  }
  // embedding of frakD into gl and the forms
  const auto& frak_gens = sets[1].gens;
  for (const auto& a : frak_gens) {
    const Params p = label_params("frakD", a);
    run.check("lie", "embedding-homomorphism", p, [&](Compare& cmp) {
      cmp.equal("tau-fixed " + label_text(a), tau_map(embed_frakD(a)), embed_frakD(a));
      for (const auto& b : frak_gens) {
        if (!cmp.equal("[" + label_text(a) + ", " + label_text(b) + "]", embed_frakD(bracket_frakD(a, b)),
                       bracket_gl(embed_frakD(a), embed_frakD(b)))) {
          return;
        }
      }
    });
    run.check("lie", "form-pullback", p, [&](Compare& cmp) {
      for (const auto& b : frak_gens) {
        if (!cmp.equal("<" + label_text(a) + ", " + label_text(b) + ">", pair_form(embed_frakD(a), embed_frakD(b)),
                       RatQ(-2) * pair_form(a, b))) {
          return;
        }
      }
    });
  }
  for (std::size_t k : {std::size_t{1}, std::size_t{2}}) {
    const auto& set = sets[k];
    for (const auto& a : set.gens) {
      run.check("lie", "form-invariance", label_params(set.algebra, a), [&](Compare& cmp) {
        for (const auto& b : set.gens)
          for (const auto& x : set.gens) {
            auto v = check_invariance(a, b, x);
            if (!cmp.equal("<[" + label_text(a) + ", " + label_text(b) + "], " + label_text(x) + ">", v.residual,
                           RatQ())) {
              return;
            }
          }
      });
    }
  }
}

// ---------------------------------------------------------------------------
// affine

void affine_suite(Runner& run, const RunConfig& c) {
  std::vector<AffineLabel> gens;
  for (int a = 1; a <= c.alpha_max; ++a)
    for (int r = -c.r_max; r <= c.r_max; ++r)
      for (int n = -c.mode_max; n <= c.mode_max; ++n) gens.push_back(AffineLabel::loop(a, r, n));
  for (const auto& x : gens) {
    const Params p = {{"alpha", static_cast<long>(x.alpha)}, {"r", static_cast<long>(x.r)}, {"n", static_cast<long>(x.n)}};
    run.check("affine", "covariant-isomorphism", p, [&](Compare& cmp) {
      const AffineElement ex(x);
      const LieElement ix = iso_covariant_to_D(canon_mod_JGamma(ex));
      for (const auto& y : gens) {
        const AffineElement ey(y);
        const AffineElement br = bracket_gamma_covariant(ex, ey);
        const std::string where = "[" + x.to_string() + ", " + y.to_string() + "]_Gamma";
        cmp.require(is_canonical_mod_JGamma(br), where, "bracket is not in canonical form");
        if (!cmp.equal(where, iso_covariant_to_D(canon_mod_JGamma(br)),
                       bracket_D(ix, iso_covariant_to_D(canon_mod_JGamma(ey))))) {
          return;
        }
      }
    });
  }
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<int> alpha(-6, 6);
  std::uniform_int_distribution<int> r(-c.r_max, c.r_max);
  std::uniform_int_distribution<int> n(-c.mode_max, c.mode_max);
  std::uniform_int_distribution<int> coin(0, 4);
  auto element = [&] {
    AffineElement out = loop(alpha(rng), r(rng), n(rng));
    out += loop(alpha(rng), r(rng), n(rng));
    if (coin(rng) == 0) out += aff_central();
    return out;
  };
  run.check("affine", "affine-jacobi-random", {{"samples", static_cast<long>(c.samples)}, {"seed", static_cast<long>(c.seed)}},
            [&](Compare& cmp) {
              for (int s = 0; s < c.samples; ++s) {
                AffineElement a = element();
                AffineElement b = element();
                AffineElement x = element();
                if (!cmp.equal("sample " + std::to_string(s), check_affine_jacobi(a, b, x).residual, AffineElement())) {
                  return;
                }
              }
            });
}

// ---------------------------------------------------------------------------
// formal

Params identity_params(IdentityId id, int a, int b, int r, int s) {
  Params p = {{"identity", identity_name(id)}, {"alpha", static_cast<long>(a)}, {"beta", static_cast<long>(b)}};
  if (identity_uses_rs(id)) {
    p.emplace_back("r", static_cast<long>(r));
    p.emplace_back("s", static_cast<long>(s));
  }
  return p;
}

// Derivative-delta factors must carry multiplicity 2 and no factor more.
void check_certificate_shape(Compare& cmp, const std::string& where, const Certificate& cert,
                             const std::vector<DeltaTerm>& terms, const std::vector<bool>& live) {
  std::map<int, int> mult;
  for (const auto& f : cert) mult[f.shift] = f.multiplicity;
  for (const auto& f : cert) {
    cmp.require(f.multiplicity >= 1 && f.multiplicity <= 2, where, "factor multiplicity out of range in " +
                                                                       certificate_text(cert));
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (!live[k] || terms[k].order == 0) continue;
    cmp.require(mult[terms[k].shift] == 2, where,
                "derivative delta at shift " + std::to_string(terms[k].shift) + " not squared in " +
                    certificate_text(cert));
  }
}

template <class R>
std::vector<bool> live_terms(const std::vector<R>& contexts, const std::vector<DeltaTerm>& terms, const Window& w) {
  std::vector<bool> live(terms.size(), false);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (terms[k].prefactor.is_zero()) continue;
    for (const auto& ctx : contexts)
      for (int p = -w.bound - 2; p <= w.bound + 2 && !live[k]; ++p) {
        if (terms[k].payload.kind != Payload::Kind::Field && p != 0) continue;
        if (!payload_value(ctx, terms[k].payload, p).is_zero()) live[k] = true;
      }
  }
  return live;
}

// Commutator values are reused across the trial certificates.
template <class R>
struct MemoRealization {
  using Value = typename R::Value;
  const R* base = nullptr;
  mutable std::map<std::tuple<FieldSymbol, int, FieldSymbol, int>, Value> memo;

  Value zero() const { return base->zero(); }
  Value field(const FieldSymbol& f, int p) const { return base->field(f, p); }
  Value central() const { return base->central(); }
  Value identity() const { return base->identity(); }
  Value commutator(const FieldSymbol& a, int i, const FieldSymbol& b, int j) const {
    auto key = std::make_tuple(a, i, b, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Value v = base->commutator(a, i, b, j);
    memo.emplace(key, v);
    return v;
  }
};

void formal_suite(Runner& run, const RunConfig& c) {
  const Window w(c.window);
  const LieRealization lie;
  const AffineRealization aff;
  const SymbolicRealization sym;
  const int A = c.alpha_max;
  const int R = c.r_max;
  for (IdentityId id : {IdentityId::GEN_2_8, IdentityId::GEN_2_17, IdentityId::GEN_2_9, IdentityId::GEN_3_2,
                        IdentityId::GEN_3_4, IdentityId::AFF_2_13}) {
    const int rr = identity_uses_rs(id) ? R : 0;
    for (int a = -A; a <= A; ++a)
      for (int b = -A; b <= A; ++b)
        for (int r = -rr; r <= rr; ++r)
          for (int s = -rr; s <= rr; ++s) {
            const IdentityParams ip{a, b, r, s, RatQ(c.level)};
            run.check("formal", "generating-identity", identity_params(id, a, b, r, s), [&](Compare& cmp) {
              const std::string where = identity_name(id) + " " + ints({{"alpha", a}, {"beta", b}, {"r", r}, {"s", s}});
              if (id == IdentityId::AFF_2_13) {
                cmp.absorb(where, check_generating_identity(id, ip, w, aff, c.eval_q));
              } else {
                cmp.absorb(where, check_generating_identity(id, ip, w, lie, c.eval_q));
              }
            });
          }
  }
  for (int a = -A; a <= A; ++a) {
    if (a == 0) continue;
    for (int r = -R; r <= R; ++r) {
      run.check("formal", "mode-identity", {{"alpha", static_cast<long>(a)}, {"r", static_cast<long>(r)}},
                [&](Compare& cmp) { cmp.absorb(ints({{"alpha", a}, {"r", r}}), check_mode_identity(a, r, w)); });
    }
    run.check("formal", "degenerate-limit", {{"gamma", static_cast<long>(a)}},
              [&](Compare& cmp) { cmp.absorb(ints({{"gamma", a}}), check_degenerate_limit(a, w)); });
  }
  // certificates for the D-valued generating functions
  for (IdentityId id : {IdentityId::GEN_2_8, IdentityId::GEN_3_4})
    for (int a = 1; a <= A; ++a)
      for (int b = 1; b <= A; ++b) {
        run.check("formal", "certificate", identity_params(id, a, b, 0, 0), [&](Compare& cmp) {
          const IdentityParams ip{a, b, 0, 0, RatQ(c.level)};
          auto [fa, fb] = identity_fields(id, ip);
          const auto terms = identity_rhs(id, ip);
          MemoRealization<LieRealization> memo{&lie, {}};
          const std::vector<MemoRealization<LieRealization>> ctx{memo};
          const Certificate cert = quasi_locality_certificate(ctx, fa, fb, terms, w);
          check_certificate_shape(cmp, identity_name(id) + " " + ints({{"alpha", a}, {"beta", b}}), cert, terms,
                                  live_terms(ctx, terms, w));
        });
      }
  for (int a = 1; a <= A; ++a)
    for (int b = -A; b <= A; ++b)
      for (int r = -R; r <= R; ++r)
        for (int s = -R; s <= R; ++s) {
          const Params p = {{"alpha", static_cast<long>(a)}, {"beta", static_cast<long>(b)},
                            {"r", static_cast<long>(r)}, {"s", static_cast<long>(s)}};
          run.check("formal", "e-products", p, [&](Compare& cmp) {
            const IdentityParams ip{a, b, r, s, RatQ(c.level)};
            const std::string where = ints({{"alpha", a}, {"beta", b}, {"r", r}, {"s", s}});
            const EProducts e = extract_e_products(identity_rhs(IdentityId::PHI_3_6, ip));
            cmp.require(e == displayed_e_products(ip), where,
                        "extracted " + e_products_text(e) + " vs displayed " + e_products_text(displayed_e_products(ip)));
            cmp.require(e.upper_bound(1) == e.end(), where, "a product of order >= 2 is nonzero");
            cmp.absorb(where + " rebuild", compare_term_sums(sym, borcherds_rebuild(e), borcherds_display(ip), w));
          });
        }
}

// ---------------------------------------------------------------------------
// induced

// All PBW monomials of degree 1..depth over labels alpha = 1..amax (r = 0),
// plus the highest-weight vector.
std::vector<PBWVector> verma_vectors(const InducedModule& M, int amax, int depth) {
  std::vector<PBWVector> out{M.highest_weight()};
  std::vector<ModeLabel> current;
  auto rec = [&](auto&& self, int remaining, ModeLabel floor) -> void {
    for (int mode = floor.mode; mode <= -1 && -mode <= remaining; ++mode) {
      for (int a = (mode == floor.mode ? floor.alpha : 1); a <= amax; ++a) {
        current.push_back({mode, a, 0});
        out.push_back(M.pbw_normalize(current));
        self(self, remaining + mode, ModeLabel{mode, a, 0});
        current.pop_back();
      }
    }
  };
  rec(rec, depth, ModeLabel{-depth, 1, 0});
  return out;
}

std::vector<ModeLabel> vacuum_labels(const RunConfig& c) {
  std::vector<ModeLabel> out;
  for (int a = 1; a <= std::min(c.alpha_max, 2); ++a)
    for (int r = -std::min(c.r_max, 1); r <= std::min(c.r_max, 1); ++r) out.push_back({-1, a, r});
  return out;
}

std::vector<PBWVector> vacuum_vectors(const InducedModule& V, const std::vector<ModeLabel>& labels) {
  std::vector<PBWVector> out{V.highest_weight()};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.push_back(V.pbw_normalize({labels[i]}));
    out.push_back(V.pbw_normalize({{-2, labels[i].alpha, labels[i].r}}));
    for (std::size_t j = i; j < labels.size(); ++j) out.push_back(V.pbw_normalize({labels[i], labels[j]}));
  }
  return out;
}

void induced_suite(Runner& run, const RunConfig& c) {
  const RatQ level(c.level);
  const InducedModule M(ModuleKind::Verma, level);
  const InducedModule V(ModuleKind::Vacuum, level);
  const auto mvecs = verma_vectors(M, c.alpha_max, 3);
  for (std::size_t k = 0; k < mvecs.size(); ++k) {
    const auto& w = mvecs[k];
    run.check("induced", "highest-weight-module", {{"vector", static_cast<long>(k)}}, [&](Compare& cmp) {
      const std::string where = "w = " + M.to_string(w);
      cmp.equal(where + "; c w", M, M.act_element(d_central(), w), level * w);
      const int d = weight_grade(w);
      for (int a = 1; a <= c.alpha_max; ++a)
        for (int n = -c.mode_max; n <= d + 3; ++n) {
          const PBWVector x = M.act(ModeLabel{n, a, 0}, w);
          const std::string at = where + "; D[" + std::to_string(a) + "](" + std::to_string(n) + ")";
          if (n > d) {
            cmp.equal(at + " restricted", M, x, PBWVector());
          } else if (!x.is_zero()) {
            cmp.require(weight_grade(x) == d - n, at, "degree " + std::to_string(weight_grade(x)) + " expected " +
                                                          std::to_string(d - n));
          }
        }
    });
  }
  // module axiom on depth <= 2 vectors
  const auto small = verma_vectors(M, std::min(c.alpha_max, 2), 2);
  for (int a = 1; a <= c.alpha_max; ++a)
    for (int m = -2; m <= 2; ++m) {
      run.check("induced", "module-axiom", {{"alpha", static_cast<long>(a)}, {"m", static_cast<long>(m)}},
                [&](Compare& cmp) {
                  for (const auto& w : small)
                    for (int b = 1; b <= c.alpha_max; ++b)
                      for (int n = -2; n <= 2; ++n) {
                        const ModeLabel x{m, a, 0};
                        const ModeLabel y{n, b, 0};
                        PBWVector lhs = M.act(x, M.act(y, w)) - M.act(y, M.act(x, w));
                        if (!cmp.equal("[D[" + std::to_string(a) + "](" + std::to_string(m) + "), D[" +
                                           std::to_string(b) + "](" + std::to_string(n) + ")] on " + M.to_string(w),
                                       M, lhs, M.act_element(bracket_D(d_gen(a, m), d_gen(b, n)), w))) {
                          return;
                        }
                      }
                });
    }

  const auto labels = vacuum_labels(c);
  const auto vvecs = vacuum_vectors(V, labels);
  for (const auto& u : labels) {
    const PBWVector gu = generator_vector(u.alpha, u.r);
    for (const auto& v : labels) {
      const PBWVector gv = generator_vector(v.alpha, v.r);
      const Params p = {{"alpha", static_cast<long>(u.alpha)}, {"r", static_cast<long>(u.r)},
                        {"beta", static_cast<long>(v.alpha)}, {"s", static_cast<long>(v.r)}};
      run.check("induced", "borcherds-commutator", p, [&](Compare& cmp) {
        for (const auto& w : vvecs)
          for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
              auto r = commutator_check_borcherds(V, gu, gv, m, n, w);
              if (!r.holds) {
                cmp.fail("w = " + V.to_string(w) + "; " + r.witness);
                return;
              }
            }
      });
    }
  }
  for (const auto& u : labels) {
    const Params p = {{"alpha", static_cast<long>(u.alpha)}, {"r", static_cast<long>(u.r)}};
    const PBWVector gu = generator_vector(u.alpha, u.r);
    run.check("induced", "vacuum-axioms", p, [&](Compare& cmp) {
      const PBWVector vac = V.highest_weight();
      for (int m = 0; m <= c.mode_max; ++m) cmp.equal("u_" + std::to_string(m) + " |vac>", V, vertex_coeff(V, gu, m, vac), {});
      cmp.equal("u_{-1} |vac>", V, vertex_coeff(V, gu, -1, vac), gu);
      for (const auto& w : vvecs)
        for (int n = -c.mode_max; n <= c.mode_max; ++n) {
          cmp.equal("Y(a(-1)|vac>) mode " + std::to_string(n) + " on " + V.to_string(w), V, vertex_coeff(V, gu, n, w),
                    V.act(ModeLabel{n, u.alpha, u.r}, w));
        }
    });
    run.check("induced", "borcherds-identity", p, [&](Compare& cmp) {
      const PBWVector composite = V.pbw_normalize({{-2, labels.front().alpha, labels.front().r}});
      for (int l = -2; l <= 1; ++l)
        for (int pp = -1; pp <= 1; ++pp)
          for (int m = -1; m <= 1; ++m) {
            auto r = borcherds_identity_check(V, gu, composite, generator_vector(labels.back().alpha, labels.back().r),
                                              pp, l, m);
            if (!r.holds) {
              cmp.fail(r.witness);
              return;
            }
          }
    });
    for (int m = -c.r_max; m <= c.r_max; ++m) {
      Params pm = p;
      pm.emplace_back("m", static_cast<long>(m));
      run.check("induced", "sigma-equivariance", pm, [&](Compare& cmp) {
        for (const auto& w : vvecs)
          for (int n = -c.mode_max; n <= c.mode_max; ++n) {
            if (!cmp.equal("n = " + std::to_string(n) + " on " + V.to_string(w), V,
                           sigma_on_V(m, V.act(ModeLabel{n, u.alpha, u.r}, w)),
                           V.act(ModeLabel{n, u.alpha, u.r + m}, sigma_on_V(m, w)))) {
              return;
            }
          }
      });
      run.check("induced", "conjugation-law", pm, [&](Compare& cmp) {
        for (const auto& w : vvecs) {
          cmp.equal("R_g inverse on " + V.to_string(w), V, R_g(-m, R_g(m, w)), w);
          for (int n = -c.mode_max; n <= c.mode_max; ++n) {
            // R_g Y(v, x) R_g^{-1} = Y(R_g v, q^{-m} x)
            if (!cmp.equal("n = " + std::to_string(n) + " on " + V.to_string(w), V,
                           R_g(m, vertex_coeff(V, gu, n, R_g(-m, w))),
                           RatQ::q_power(m * (n + 1)) * vertex_coeff(V, R_g(m, gu), n, w))) {
              return;
            }
          }
        }
      });
    }
  }
}

// ---------------------------------------------------------------------------
// correspondence

void correspondence_suite(Runner& run, const RunConfig& c) {
  const RatQ level(c.level);
  const InducedModule M(ModuleKind::Verma, level);
  const InducedModule V(ModuleKind::Vacuum, level);
  const Window w(c.window);
  const int A = c.alpha_max;
  const int R = c.r_max;
  const std::vector<PBWVector> vecs = {M.highest_weight(), M.pbw_normalize({{-1, 1, 0}})};
  std::vector<ModuleRealization> reals;
  for (const auto& v : vecs) reals.push_back({&M, v});

  for (IdentityId id : {IdentityId::GEN_2_9, IdentityId::PHI_3_6, IdentityId::THM_3_9})
    for (int a = -A; a <= A; ++a)
      for (int b = -A; b <= A; ++b)
        for (int r = -R; r <= R; ++r)
          for (int s = -R; s <= R; ++s) {
            run.check("correspondence", "module-identity", identity_params(id, a, b, r, s), [&](Compare& cmp) {
              const IdentityParams ip{a, b, r, s, level};
              for (std::size_t k = 0; k < reals.size(); ++k) {
                cmp.absorb(identity_name(id) + " " + ints({{"alpha", a}, {"beta", b}, {"r", r}, {"s", s}}) +
                               " on " + M.to_string(vecs[k]),
                           check_generating_identity(id, ip, w, reals[k], c.eval_q));
                if (!cmp.holds()) return;
              }
            });
          }

  for (int a = 1; a <= A; ++a)
    for (int r = -R; r <= R; ++r) {
      run.check("correspondence", "gamma-equivariance", {{"alpha", static_cast<long>(a)}, {"r", static_cast<long>(r)}},
                [&](Compare& cmp) {
                  for (const auto& v : vecs)
                    for (int m = -R; m <= R; ++m)
                      for (int n = -c.mode_max; n <= c.mode_max; ++n) {
                        const std::string where = ints({{"m", m}, {"n", n}}) + " on " + M.to_string(v);
                        // Y_W(R_{sigma_m} d, x) = Y_W(d, q^m x)
                        cmp.equal("quasi " + where, M, RatQ::q_power(-m) * quasi_field_apply(M, a, r + m, n, v),
                                  RatQ::q_power(-m * (n + 1)) * quasi_field_apply(M, a, r, n, v));
                        // Y_W(sigma_m d, x) = Y_W(d, q^m x) for the phi-coordinated fields
                        cmp.equal("phi " + where, M, phi_field_apply(M, a, r + m, n, v),
                                  RatQ::q_power(-m * n) * phi_field_apply(M, a, r, n, v));
                        if (!cmp.holds()) return;
                      }
                  for (const auto& v : vecs)
                    for (int n = -c.mode_max; n <= c.mode_max; ++n) {
                      PBWVector rebuilt = quasi_field_apply(M, a, 0, n, v);
                      if (n == 0) rebuilt.add_scaled(v, inverse_qdiff(a) * level);
                      cmp.equal("round trip n = " + std::to_string(n), M, rebuilt, M.act(ModeLabel{n, a, 0}, v));
                    }
                });
    }

  for (IdentityId id : {IdentityId::GEN_2_9, IdentityId::PHI_3_6})
    for (int a = 1; a <= A; ++a)
      for (int b = 1; b <= A; ++b)
        for (int r = -R; r <= R; ++r)
          for (int s = -R; s <= R; ++s) {
            run.check("correspondence", "certificate", identity_params(id, a, b, r, s), [&](Compare& cmp) {
              const IdentityParams ip{a, b, r, s, level};
              auto [fa, fb] = identity_fields(id, ip);
              const auto terms = identity_rhs(id, ip);
              std::vector<MemoRealization<ModuleRealization>> ctx;
              for (const auto& real : reals) ctx.push_back({&real, {}});
              const Certificate cert = quasi_locality_certificate(ctx, fa, fb, terms, w);
              check_certificate_shape(cmp, identity_name(id) + " " + ints({{"alpha", a}, {"beta", b}, {"r", r}, {"s", s}}),
                                      cert, terms, live_terms(ctx, terms, w));
            });
          }

  auto as_payloads = [](const PBWVector& v) {
    LinComb<Payload> out;
    for (const auto& [mono, k] : v) {
      if (mono.factors.empty()) {
        out.add(Payload::identity(), k);
      } else if (mono.factors.size() == 1 && mono.factors[0].mode == -1) {
        out.add(Payload::of_field(FieldSymbol{Family::Dhat_ar, mono.factors[0].alpha, mono.factors[0].r}), k);
      } else {
        throw std::runtime_error("product of generators is not a generator vector");
      }
    }
    return out;
  };
  for (int a = 1; a <= A; ++a)
    for (int b = -A; b <= A; ++b)
      for (int r = -R; r <= R; ++r)
        for (int s = -R; s <= R; ++s) {
          const Params p = {{"alpha", static_cast<long>(a)}, {"beta", static_cast<long>(b)},
                            {"r", static_cast<long>(r)}, {"s", static_cast<long>(s)}};
          run.check("correspondence", "e-products", p, [&](Compare& cmp) {
            const IdentityParams ip{a, b, r, s, level};
            const std::string where = ints({{"alpha", a}, {"beta", b}, {"r", r}, {"s", s}});
            const EProducts e = extract_e_products(identity_rhs(IdentityId::PHI_3_6, ip));
            cmp.require(e == displayed_e_products(ip), where,
                        "extracted " + e_products_text(e) + " vs displayed " + e_products_text(displayed_e_products(ip)));
            RatQ expected = level * RatQ(static_cast<long>(((a == b) - (a == -b)) * (r == s)));
            LinComb<Payload> one;
            one.add(Payload::identity(), expected);
            const LinComb<Payload> got1 = e.count(1) ? e.at(1) : LinComb<Payload>();
            cmp.equal(where + " product 1", got1, one, [](const Payload& pl) { return pl.to_string(); });
            // the same products computed in the vacuum module
            const PBWVector u = generator_vector(a, r);
            const PBWVector v = generator_vector(b, s);
            for (int n = 0; n <= 3; ++n) {
              const LinComb<Payload> got = e.count(n) ? e.at(n) : LinComb<Payload>();
              cmp.equal(where + " product " + std::to_string(n) + " in V", got, as_payloads(vertex_coeff(V, u, n, v)),
                        [](const Payload& pl) { return pl.to_string(); });
            }
          });
        }
}

}  // namespace

Report run_suite(const RunConfig& config) {
  validate(config);
  Runner run(config);
  auto selected = [&](const std::string& s) { return config.suite == "all" || config.suite == s; };
  if (selected("field")) field_suite(run, config);
  if (selected("lie")) lie_suite(run, config);
  if (selected("affine")) affine_suite(run, config);
  if (selected("formal")) formal_suite(run, config);
  if (selected("induced")) induced_suite(run, config);
  if (selected("correspondence")) correspondence_suite(run, config);
  Report report{config, run.take()};
  auto suite_index = [](const std::string& s) {
    return std::find(suite_names().begin(), suite_names().end(), s) - suite_names().begin();
  };
  std::stable_sort(report.checks.begin(), report.checks.end(), [&](const CheckRecord& x, const CheckRecord& y) {
    return std::make_tuple(suite_index(x.suite), std::cref(x.name), std::cref(x.params)) <
           std::make_tuple(suite_index(y.suite), std::cref(y.name), std::cref(y.params));
  });
  return report;
}

nlohmann::ordered_json report_json(const Report& report) {
  using nlohmann::ordered_json;
  const RunConfig& c = report.config;
  ordered_json eval_q = ordered_json::array();
  for (const auto& q0 : c.eval_q) eval_q.push_back(rational_to_string(q0));
  ordered_json config = {{"suite", c.suite},
                         {"alpha_max", c.alpha_max},
                         {"r_max", c.r_max},
                         {"mode_max", c.mode_max},
                         {"window", c.window},
                         {"level", rational_to_string(c.level)},
                         {"samples", c.samples},
                         {"seed", c.seed},
                         {"cache", c.cache_path ? ordered_json(*c.cache_path) : ordered_json(nullptr)},
                         {"eval_q", eval_q},
                         {"timings", c.timings}};
  ordered_json checks = ordered_json::array();
  for (const auto& r : report.checks) {
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : r.params) {
      std::visit([&](const auto& x) { params[k] = x; }, v);
    }
    checks.push_back({{"suite", r.suite},
                      {"name", r.name},
                      {"parameters", params},
                      {"status", r.pass ? "pass" : "fail"},
                      {"witness", r.witness},
                      {"elapsed", r.elapsed ? ordered_json(*r.elapsed) : ordered_json(nullptr)}});
  }
  return {{"kernel_version", kKernelVersion},
          {"config", config},
          {"summary", {{"total", report.checks.size()}, {"passed", report.passed()}, {"failed", report.failed()}}},
          {"checks", checks}};
}

std::string report_text(const Report& report) { return report_json(report).dump(2) + "\n"; }

void emit_report(const Report& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path);
  out << report_text(report);
  if (!out) throw std::runtime_error("cannot write report to " + path);
}

}  // namespace qvir
