#include "qvir/induced.hpp"

#include <algorithm>

namespace qvir {

int Monomial::degree() const {
  int d = 0;
  for (const auto& f : factors) d -= f.mode;
  return d;
}

InducedModule::InducedModule(ModuleKind kind, RatQ level) : kind_(kind), level_(std::move(level)) {}

std::size_t InducedModule::cache_size() const {
  std::lock_guard lock(cache_mutex_);
  return cache_.size();
}

std::pair<std::vector<std::pair<ModeLabel, RatQ>>, RatQ> InducedModule::bracket(const ModeLabel& x,
                                                                                 const ModeLabel& y) const {
  std::vector<std::pair<ModeLabel, RatQ>> terms;
  RatQ central;
  const int mode = x.mode + y.mode;
  if (kind_ == ModuleKind::Verma) {
    LieElement z = bracket_D(d_gen(x.alpha, x.mode), d_gen(y.alpha, y.mode));
    for (const auto& [label, c] : z.terms()) {
      if (label.kind == LieLabel::Kind::DCentral) {
        central += c * level_;
      } else {
        terms.emplace_back(ModeLabel{label.b, label.a, 0}, c);
      }
    }
  } else {
    LieElement a = frak(x.alpha, x.r);
    LieElement b = frak(y.alpha, y.r);
    LieElement z = bracket_frakD(a, b);
    for (const auto& [label, c] : z.terms()) terms.emplace_back(ModeLabel{mode, label.a, label.b}, c);
    if (mode == 0) central = RatQ(x.mode) * pair_form(a, b) * level_;
  }
  return {std::move(terms), std::move(central)};
}

PBWVector InducedModule::act_bracket(const ModeLabel& x, const ModeLabel& y, const Monomial& rest) const {
  auto [terms, central] = bracket(x, y);
  PBWVector out;
  for (const auto& [z, c] : terms) out.add_scaled(act_monomial(z, rest), c);
  if (!central.is_zero()) out.add(rest, central);
  return out;
}

PBWVector InducedModule::act_monomial(const ModeLabel& x, const Monomial& m) const {
  if (m.factors.empty()) {
    if (x.mode >= 0) return {};  // the character vanishes on nonnegative modes
    return PBWVector(Monomial{{x}});
  }
  const ModeLabel& y = m.factors.front();
  if (x.mode < 0 && x <= y) {
    Monomial out;
    out.factors.reserve(m.factors.size() + 1);
    out.factors.push_back(x);
    out.factors.insert(out.factors.end(), m.factors.begin(), m.factors.end());
    return PBWVector(std::move(out));
  }
  // a monomial of degree d is killed by any mode above d
  if (x.mode > m.degree()) return {};
  {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find({x, m});
    if (it != cache_.end()) return it->second;
  }
  // x y rest = y (x rest) + [x, y] rest
  Monomial rest{std::vector<ModeLabel>(m.factors.begin() + 1, m.factors.end())};
  PBWVector out = act(y, act_monomial(x, rest));
  out += act_bracket(x, y, rest);
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(std::make_pair(x, m), out);
  return out;
}

PBWVector InducedModule::act(const ModeLabel& x, const PBWVector& v) const {
  if (kind_ == ModuleKind::Verma && x.r != 0) throw std::invalid_argument("M_D labels carry no r-index");
  PBWVector out;
  for (const auto& [m, c] : v) out.add_scaled(act_monomial(x, m), c);
  return out;
}

PBWVector InducedModule::act_element(const LieElement& e, const PBWVector& v) const {
  if (kind_ != ModuleKind::Verma || e.tag() != Algebra::D) {
    throw TagMismatch("elements of D act on M_D(l) only");
  }
  PBWVector out;
  for (const auto& [label, c] : e.terms()) {
    if (label.kind == LieLabel::Kind::DCentral) {
      out.add_scaled(v, c * level_);
    } else {
      out.add_scaled(act(ModeLabel{label.b, label.a, 0}, v), c);
    }
  }
  return out;
}

PBWVector InducedModule::act_element(const AffineElement& e, const PBWVector& v) const {
  if (kind_ != ModuleKind::Vacuum) throw TagMismatch("affine elements act on the vacuum module only");
  PBWVector out;
  for (const auto& [label, c] : e) {
    if (label.central) {
      out.add_scaled(v, c * level_);
    } else {
      out.add_scaled(act(ModeLabel{label.n, label.alpha, label.r}, v), c);
    }
  }
  return out;
}

PBWVector InducedModule::pbw_normalize(const std::vector<ModeLabel>& factors, const RatQ& coeff) const {
  PBWVector v = highest_weight();
  v *= coeff;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    if (it->mode >= 0) throw std::invalid_argument("pbw_normalize expects negative modes");
    v = act(*it, v);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Text

std::string InducedModule::monomial_text(const Monomial& m) const {
  const bool vac = kind_ == ModuleKind::Vacuum;
  std::string out;
  for (const auto& f : m.factors) {
    if (vac) {
      out += "d[" + std::to_string(f.alpha) + "," + std::to_string(f.r) + "](" + std::to_string(f.mode) + ") ";
    } else {
      out += "D[" + std::to_string(f.alpha) + "](" + std::to_string(f.mode) + ") ";
    }
  }
  return out + (vac ? "|vac>" : "|hw>");
}

std::string InducedModule::to_string(const PBWVector& v) const {
  return v.to_string([this](const Monomial& m) { return monomial_text(m); });
}

PBWVector InducedModule::parse(std::string_view text) const {
  const bool vac = kind_ == ModuleKind::Vacuum;
  auto parse_monomial = [&](std::string_view s) {
    std::vector<ModeLabel> factors;
    std::size_t pos = 0;
    while (pos < s.size()) {
      if (s[pos] == ' ') {
        ++pos;
        continue;
      }
      if (s.substr(pos) == (vac ? "|vac>" : "|hw>")) {
        return pbw_normalize(factors);
      }
      auto close = s.find(')', pos);
      auto open = s.find('(', pos);
      if (close == std::string_view::npos || open == std::string_view::npos || open > close) break;
      std::string head(s.substr(pos, open - pos));
      const int mode = std::stoi(std::string(s.substr(open + 1, close - open - 1)));
      ModeLabel f{mode, 0, 0};
      if (vac) {
        LieLabel l = LieLabel::parse(head);
        if (l.kind != LieLabel::Kind::FrakD) break;
        f.alpha = l.a;
        f.r = l.b;
      } else {
        if (head.size() < 4 || head.rfind("D[", 0) != 0 || head.back() != ']') break;
        f.alpha = std::stoi(head.substr(2, head.size() - 3));
      }
      factors.push_back(f);
      pos = close + 1;
    }
    throw ParseError("bad PBW monomial \"" + std::string(s) + "\"");
  };
  // monomials are normalized on parse, so collect as a sum
  PBWVector out;
  auto comb = parse_lincomb<std::string>(text, [](std::string_view s) { return std::string(s); });
  for (const auto& [mono, c] : comb) out.add_scaled(parse_monomial(mono), c);
  return out;
}

std::string value_text(const PBWVector& v) {
  return v.to_string([](const Monomial& m) {
    std::string out;
    for (const auto& f : m.factors) {
      out += "[" + std::to_string(f.alpha) + "," + std::to_string(f.r) + "](" + std::to_string(f.mode) + ") ";
    }
    return out + "|0>";
  });
}

// ---------------------------------------------------------------------------
// Grading and automorphisms

int weight_grade(const PBWVector& v) {
  std::optional<int> d;
  for (const auto& [m, c] : v) {
    const int e = m.degree();
    if (d && *d != e) {
      throw Inhomogeneous("inhomogeneous vector: degrees " + std::to_string(*d) + " and " + std::to_string(e));
    }
    d = e;
  }
  return d.value_or(0);
}

int max_degree(const PBWVector& v) {
  int d = 0;
  for (const auto& [m, c] : v) d = std::max(d, m.degree());
  return d;
}

PBWVector sigma_on_V(int m, const PBWVector& v) {
  // the shift preserves the PBW order since it moves every r by the same amount
  return v.map_keys([m](const Monomial& mono) {
    Monomial out = mono;
    for (auto& f : out.factors) f.r += m;
    return out;
  });
}

PBWVector R_g(int m, const PBWVector& v) {
  PBWVector out;
  for (const auto& [mono, c] : sigma_on_V(m, v)) out.add(mono, c * RatQ::q_power(-m * mono.degree()));
  return out;
}

PBWVector generator_vector(int alpha, int r) {
  if (alpha == 0) return {};
  if (alpha < 0) return -generator_vector(-alpha, r);
  return PBWVector(Monomial{{ModeLabel{-1, alpha, r}}});
}

Rational binomial(long x, long k) {
  Rational out = 1;
  for (long i = 0; i < k; ++i) out = out * Rational(x - i) / Rational(i + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Vertex operators on V

namespace {

PBWVector vertex_coeff_monomial(const InducedModule& V, const Monomial& u, int m, const PBWVector& w) {
  if (u.factors.empty()) return m == -1 ? w : PBWVector();
  if (u.degree() + max_degree(w) - m - 1 < 0) return {};
  const ModeLabel a = u.factors.front();
  const int k = -a.mode;
  const Monomial rest{std::vector<ModeLabel>(u.factors.begin() + 1, u.factors.end())};
  const PBWVector u_rest(rest);
  const int dw = max_degree(w);
  PBWVector out;
  // creation part: modes n < 0 of d^{k-1}a/(k-1)!, acting on the left
  for (int n = m - k - rest.degree() - dw + 1; n <= -1; ++n) {
    Rational c = binomial(-n - 1, k - 1);
    if (c == 0) continue;
    PBWVector inner = vertex_coeff(V, u_rest, m - n - k, w);
    if (inner.is_zero()) continue;
    out.add_scaled(V.act(ModeLabel{n, a.alpha, a.r}, inner), RatQ(c));
  }
  // annihilation part: modes n >= 0, acting on w first
  for (int n = 0; n <= dw; ++n) {
    Rational c = binomial(-n - 1, k - 1);
    if (c == 0) continue;
    PBWVector aw = V.act(ModeLabel{n, a.alpha, a.r}, w);
    if (aw.is_zero()) continue;
    out.add_scaled(vertex_coeff(V, u_rest, m - n - k, aw), RatQ(c));
  }
  return out;
}

}  // namespace

PBWVector vertex_coeff(const InducedModule& V, const PBWVector& u, int m, const PBWVector& w) {
  if (V.kind() != ModuleKind::Vacuum) throw std::invalid_argument("vertex_coeff is defined on the vacuum module");
  PBWVector out;
  for (const auto& [mono, c] : u) out.add_scaled(vertex_coeff_monomial(V, mono, m, w), c);
  return out;
}

namespace {

ModuleVerdict compare_vectors(const InducedModule& V, const PBWVector& lhs, const PBWVector& rhs,
                              const std::string& where) {
  if (lhs == rhs) return {};
  return {false, where + ": lhs = " + V.to_string(lhs) + "; rhs = " + V.to_string(rhs) +
                     "; residual = " + V.to_string(lhs - rhs)};
}

}  // namespace

ModuleVerdict commutator_check_borcherds(const InducedModule& V, const PBWVector& u, const PBWVector& v, int m,
                                         int n, const PBWVector& w) {
  PBWVector lhs = vertex_coeff(V, u, m, vertex_coeff(V, v, n, w));
  lhs -= vertex_coeff(V, v, n, vertex_coeff(V, u, m, w));
  PBWVector rhs;
  const int top = max_degree(u) + max_degree(v) - 1;  // u_i v = 0 beyond
  for (int i = 0; i <= top; ++i) {
    Rational c = binomial(m, i);
    if (c == 0) continue;
    PBWVector uv = vertex_coeff(V, u, i, v);
    if (uv.is_zero()) continue;
    rhs.add_scaled(vertex_coeff(V, uv, m + n - i, w), RatQ(c));
  }
  return compare_vectors(V, lhs, rhs, "m = " + std::to_string(m) + ", n = " + std::to_string(n));
}

ModuleVerdict borcherds_identity_check(const InducedModule& V, const PBWVector& u, const PBWVector& v,
                                       const PBWVector& w, int p, int l, int m) {
  const int du = max_degree(u);
  const int dv = max_degree(v);
  const int dw = max_degree(w);
  PBWVector lhs;
  for (int i = 0; l + i <= du + dv - 1; ++i) {
    PBWVector uv = vertex_coeff(V, u, l + i, v);
    if (!uv.is_zero()) lhs.add_scaled(vertex_coeff(V, uv, m + p - i, w), RatQ(binomial(p, i)));
  }
  PBWVector rhs;
  // first sum: v_{m+i} w vanishes once m + i > dv + dw - 1
  for (int i = 0; m + i <= dv + dw - 1; ++i) {
    Rational c = binomial(l, i);
    if (c == 0) continue;
    if (i % 2) c = -c;
    rhs.add_scaled(vertex_coeff(V, u, p + l - i, vertex_coeff(V, v, m + i, w)), RatQ(c));
  }
  // second sum: u_{p+i} w vanishes once p + i > du + dw - 1
  for (int i = 0; p + i <= du + dw - 1; ++i) {
    Rational c = binomial(l, i);
    if (c == 0) continue;
    if ((i + l) % 2 == 0) c = -c;  // -(-1)^{i+l}
    rhs.add_scaled(vertex_coeff(V, v, m + l - i, vertex_coeff(V, u, p + i, w)), RatQ(c));
  }
  return compare_vectors(V, lhs, rhs,
                         "p = " + std::to_string(p) + ", l = " + std::to_string(l) + ", m = " + std::to_string(m));
}

// ---------------------------------------------------------------------------
// Fields on M_D(l)

PBWVector quasi_field_apply(const InducedModule& M, int alpha, int r, int n, const PBWVector& w) {
  const FieldSymbol f{Family::Dar, alpha, r};
  return M.act_element(d_family_coefficient(f, exponent_of_mode(f.family, n)), w);
}

PBWVector phi_field_apply(const InducedModule& M, int alpha, int r, int n, const PBWVector& w) {
  const FieldSymbol f{Family::Dhat_ar, alpha, r};
  return M.act_element(d_family_coefficient(f, exponent_of_mode(f.family, n)), w);
}

PBWVector ModuleRealization::commutator(const FieldSymbol& a, int i, const FieldSymbol& b, int j) const {
  LieElement x = d_family_coefficient(a, i);
  LieElement y = d_family_coefficient(b, j);
  PBWVector out = module->act_element(x, module->act_element(y, w));
  out -= module->act_element(y, module->act_element(x, w));
  return out;
}

}  // namespace qvir
