#include "qvir/formal.hpp"

#include <stdexcept>

namespace qvir {

Window::Window(int w) : bound(w) {
  if (w < 1) throw std::invalid_argument("window bound must be at least 1");
}

std::string FieldSymbol::to_string() const {
  const std::string a = std::to_string(alpha);
  const std::string ar = a + "," + std::to_string(r);
  switch (family) {
    case Family::D: return "D{" + a + "}";
    case Family::Dtilde: return "Dtilde{" + a + "}";
    case Family::Dar: return "D{" + ar + "}";
    case Family::Dbar: return "Dbar{" + a + "}";
    case Family::Dhat: return "Dhat{" + a + "}";
    case Family::Dhat_ar: return "Dhat{" + ar + "}";
    case Family::d_aff: return "d{" + ar + "}";
  }
  return "?";
}

namespace {

bool shifted_convention(Family f) { return f == Family::Dbar || f == Family::Dhat || f == Family::Dhat_ar; }

}  // namespace

int mode_of_exponent(Family f, int p) { return shifted_convention(f) ? -p : -p - 1; }
int exponent_of_mode(Family f, int n) { return shifted_convention(f) ? -n : -n - 1; }

std::string Payload::to_string() const {
  switch (kind) {
    case Kind::Central: return "c";
    case Kind::Identity: return "1";
    case Kind::Field:
      if (scale == 0) return field.to_string() + "(x2)";
      return field.to_string() + "(q^" + std::to_string(scale) + " x2)";
  }
  return "?";
}

std::string DeltaTerm::to_string() const {
  std::string d = std::string(x1_inverse ? "x1^-1 " : "") + "delta(q^" + std::to_string(shift) + " x2/x1)";
  if (order == 1) d = std::string(flavor == Flavor::D2 ? "d/dx2 " : "x2 d/dx2 ") + d;
  std::string out = "(" + prefactor.to_string() + ") " + payload.to_string();
  if (x2_power != 0) out += " x2^" + std::to_string(x2_power);
  return out + " " + d;
}

// ---------------------------------------------------------------------------
// Expansions

std::optional<std::pair<RatQ, int>> delta_coefficient(const DeltaTerm& t, int i) {
  const int n = -i - (t.x1_inverse ? 1 : 0);
  RatQ c = RatQ::q_power(t.shift * n);
  int x2 = n;
  if (t.order == 1) {
    if (n == 0) return std::nullopt;
    c *= RatQ(n);
    if (t.flavor == Flavor::D2) x2 = n - 1;
  } else if (t.order != 0) {
    throw std::invalid_argument("derivative order above 1 is not supported");
  }
  return std::make_pair(std::move(c), x2);
}

BiSeries<RatQ> expand_delta(const DeltaTerm& t, const Window& w) {
  BiSeries<RatQ> out;
  for (int i = -w.bound; i <= w.bound; ++i) {
    auto dc = delta_coefficient(t, i);
    if (!dc) continue;
    const int j = dc->second + t.x2_power;
    if (!w.contains(i, j)) continue;
    RatQ v = t.prefactor * dc->first;
    if (!v.is_zero()) out.emplace(std::make_pair(i, j), std::move(v));
  }
  return out;
}

BiSeries<RatQ> expand_iota_binomial(const RatQ& c, int m, const Window& w) {
  // sum_{j >= 0} binom(m, j) (-c)^j x1^{m-j} x2^j
  BiSeries<RatQ> out;
  Rational binom = 1;
  RatQ power(1);
  const RatQ minus_c = -c;
  for (int j = 0; j <= w.bound; ++j) {
    if (j > 0) {
      binom = binom * Rational(m - j + 1) / Rational(j);
      power *= minus_c;
    }
    if (binom == 0) break;
    const int i = m - j;
    if (w.contains(i, j)) {
      RatQ v = RatQ(binom) * power;
      if (!v.is_zero()) out.emplace(std::make_pair(i, j), std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Identity catalogue

std::string identity_name(IdentityId id) {
  switch (id) {
    case IdentityId::GEN_2_8: return "GEN-2.8";
    case IdentityId::GEN_2_17: return "GEN-2.17";
    case IdentityId::GEN_2_9: return "GEN-2.9";
    case IdentityId::GEN_3_2: return "GEN-3.2";
    case IdentityId::GEN_3_4: return "GEN-3.4";
    case IdentityId::AFF_2_13: return "AFF-2.13";
    case IdentityId::PHI_3_6: return "PHI-3.6";
    case IdentityId::THM_3_9: return "THM-3.9";
  }
  return "?";
}

IdentityId parse_identity(const std::string& name) {
  for (auto id : {IdentityId::GEN_2_8, IdentityId::GEN_2_17, IdentityId::GEN_2_9, IdentityId::GEN_3_2,
                  IdentityId::GEN_3_4, IdentityId::AFF_2_13, IdentityId::PHI_3_6, IdentityId::THM_3_9}) {
    if (identity_name(id) == name) return id;
  }
  throw std::invalid_argument("unknown identity id \"" + name + "\"");
}

bool identity_uses_rs(IdentityId id) {
  return id == IdentityId::GEN_2_9 || id == IdentityId::AFF_2_13 || id == IdentityId::PHI_3_6 ||
         id == IdentityId::THM_3_9;
}

std::pair<FieldSymbol, FieldSymbol> identity_fields(IdentityId id, const IdentityParams& p) {
  auto both = [&](Family f, bool rs) {
    return std::make_pair(FieldSymbol{f, p.alpha, rs ? p.r : 0}, FieldSymbol{f, p.beta, rs ? p.s : 0});
  };
  switch (id) {
    case IdentityId::GEN_2_8: return both(Family::D, false);
    case IdentityId::GEN_2_17: return both(Family::Dtilde, false);
    case IdentityId::GEN_2_9: return both(Family::Dar, true);
    case IdentityId::GEN_3_2: return both(Family::Dbar, false);
    case IdentityId::GEN_3_4: return both(Family::Dhat, false);
    case IdentityId::AFF_2_13: return both(Family::d_aff, true);
    case IdentityId::PHI_3_6:
    case IdentityId::THM_3_9: return both(Family::Dhat_ar, true);
  }
  throw std::invalid_argument("unknown identity");
}

namespace {

int kron(int a, int b) { return a == b ? 1 : 0; }

DeltaTerm field_term(RatQ pre, Family f, int alpha, int r, int scale, int shift, bool x1_inverse) {
  DeltaTerm t;
  t.shift = shift;
  t.prefactor = std::move(pre);
  t.x1_inverse = x1_inverse;
  t.payload = Payload::of_field(FieldSymbol{f, alpha, r}, scale);
  return t;
}

DeltaTerm scalar_term(RatQ pre, Payload pl, int shift, int order, Flavor flavor, bool x1_inverse, int x2_power) {
  DeltaTerm t;
  t.shift = shift;
  t.order = order;
  t.flavor = flavor;
  t.prefactor = std::move(pre);
  t.x1_inverse = x1_inverse;
  t.x2_power = x2_power;
  t.payload = pl;
  return t;
}

// The four field terms shared by the unshifted identities:
// q^{-a}F^{a+b}(q^{-a}x2) d(q^{-a-b}) - q^{a}F^{a+b}(q^{a}x2) d(q^{a+b})
// - q^{-a}F^{a-b}(q^{-a}x2) d(q^{b-a}) + q^{a}F^{a-b}(q^{a}x2) d(q^{a-b})
void four_scaled_terms(std::vector<DeltaTerm>& out, Family f, int a, int b, bool with_q_prefactor, bool x1_inverse) {
  auto pre = [&](int e, int sign) { return RatQ(sign) * (with_q_prefactor ? RatQ::q_power(e) : RatQ(1)); };
  out.push_back(field_term(pre(-a, 1), f, a + b, 0, -a, -a - b, x1_inverse));
  out.push_back(field_term(pre(a, -1), f, a + b, 0, a, a + b, x1_inverse));
  out.push_back(field_term(pre(-a, -1), f, a - b, 0, -a, b - a, x1_inverse));
  out.push_back(field_term(pre(a, 1), f, a - b, 0, a, a - b, x1_inverse));
}

// The four terms of the r,s-indexed identities:
// F^{a+b,-a+s} d(q^{-a-b-r+s}) - F^{a+b,a+s} d(q^{a+b-r+s})
// - F^{a-b,-a+s} d(q^{b-a-r+s}) + F^{a-b,a+s} d(q^{a-b-r+s})
void four_indexed_terms(std::vector<DeltaTerm>& out, Family f, int a, int b, int r, int s, bool x1_inverse) {
  out.push_back(field_term(RatQ(1), f, a + b, -a + s, 0, -a - b - r + s, x1_inverse));
  out.push_back(field_term(RatQ(-1), f, a + b, a + s, 0, a + b - r + s, x1_inverse));
  out.push_back(field_term(RatQ(-1), f, a - b, -a + s, 0, b - a - r + s, x1_inverse));
  out.push_back(field_term(RatQ(1), f, a - b, a + s, 0, a - b - r + s, x1_inverse));
}

// sign * (1/(q^{-g}-q^{g})) [d(q^{g}) - d(q^{-g})] c x2^{x2_power}, with the
// g = 0 value -x2 d/dx2 d(x2/x1).
void central_pair(std::vector<DeltaTerm>& out, int sign, int g, bool x1_inverse, int x2_power) {
  if (g == 0) {
    out.push_back(scalar_term(RatQ(-sign), Payload::central(), 0, 1, Flavor::X2D2, x1_inverse, x2_power));
    return;
  }
  const RatQ pre = RatQ(sign) * inverse_qdiff(g);
  out.push_back(scalar_term(pre, Payload::central(), g, 0, Flavor::D2, x1_inverse, x2_power));
  out.push_back(scalar_term(-pre, Payload::central(), -g, 0, Flavor::D2, x1_inverse, x2_power));
}

}  // namespace

std::vector<DeltaTerm> identity_rhs(IdentityId id, const IdentityParams& p) {
  const int a = p.alpha;
  const int b = p.beta;
  const int r = p.r;
  const int s = p.s;
  const int degenerate = kron(a - b, 0) - kron(a + b, 0);
  std::vector<DeltaTerm> out;
  switch (id) {
    case IdentityId::GEN_2_8:
      four_scaled_terms(out, Family::D, a, b, true, true);
      central_pair(out, 1, a + b, true, -1);
      // -(1/(q^{b-a}-q^{a-b}))[d(q^{a-b}) - d(q^{b-a})]: the same pair at g = a - b, negated
      central_pair(out, -1, a - b, true, -1);
      break;
    case IdentityId::GEN_2_17:
      four_scaled_terms(out, Family::Dtilde, a, b, true, true);
      out.push_back(scalar_term(RatQ(degenerate), Payload::central(), 0, 1, Flavor::D2, true, 0));
      break;
    case IdentityId::GEN_2_9:
      four_indexed_terms(out, Family::Dar, a, b, r, s, true);
      out.push_back(scalar_term(RatQ(degenerate), Payload::central(), s - r, 1, Flavor::D2, true, 0));
      break;
    case IdentityId::GEN_3_2:
      four_scaled_terms(out, Family::Dbar, a, b, false, false);
      central_pair(out, 1, a + b, false, 0);
      central_pair(out, -1, a - b, false, 0);
      break;
    case IdentityId::GEN_3_4:
      four_scaled_terms(out, Family::Dhat, a, b, false, false);
      out.push_back(scalar_term(RatQ(degenerate), Payload::central(), 0, 1, Flavor::X2D2, false, 0));
      break;
    case IdentityId::AFF_2_13: {
      // every term sits at delta(x2/x1); the Kronecker factors select the live ones
      out.push_back(field_term(RatQ(kron(a + b, s - r)), Family::d_aff, a + b, -a + s, 0, 0, true));
      out.push_back(field_term(RatQ(-kron(a + b, r - s)), Family::d_aff, a + b, a + s, 0, 0, true));
      out.push_back(field_term(RatQ(-kron(a - b, s - r)), Family::d_aff, a - b, -a + s, 0, 0, true));
      out.push_back(field_term(RatQ(kron(a - b, r - s)), Family::d_aff, a - b, a + s, 0, 0, true));
      out.push_back(scalar_term(RatQ(kron(r, s) * degenerate), Payload::central(), 0, 1, Flavor::D2, true, 0));
      break;
    }
    case IdentityId::PHI_3_6:
      four_indexed_terms(out, Family::Dhat_ar, a, b, r, s, false);
      out.push_back(scalar_term(p.level * RatQ(degenerate), Payload::identity(), s - r, 1, Flavor::X2D2, false, 0));
      break;
    case IdentityId::THM_3_9:
      // sum_m Y_W([d^{a,r+m}, d^{b,s}], x2) d(q^m x2/x1) + l <d^{a,r+m}, d^{b,s}> x2 d/dx2 d(q^m x2/x1)
      for (int m : covariant_shifts(a, r, b, s)) {
        LieElement x = frak(a, r + m);
        LieElement y = frak(b, s);
        LieElement z = bracket_frakD(x, y);
        for (const auto& [label, c] : z.terms()) {
          out.push_back(field_term(c, Family::Dhat_ar, label.a, label.b, 0, m, false));
        }
        RatQ form = pair_form(x, y);
        if (!form.is_zero()) {
          out.push_back(scalar_term(p.level * form, Payload::identity(), m, 1, Flavor::X2D2, false, 0));
        }
      }
      break;
  }
  return out;
}

std::vector<DeltaTerm> borcherds_display(const IdentityParams& p) {
  const int a = p.alpha;
  const int b = p.beta;
  const int r = p.r;
  const int s = p.s;
  std::vector<DeltaTerm> out;
  out.push_back(field_term(RatQ(kron(a + b, s - r)), Family::Dhat_ar, a + b, -a + s, 0, 0, true));
  out.push_back(field_term(RatQ(-kron(a + b, r - s)), Family::Dhat_ar, a + b, a + s, 0, 0, true));
  out.push_back(field_term(RatQ(-kron(a - b, s - r)), Family::Dhat_ar, a - b, -a + s, 0, 0, true));
  out.push_back(field_term(RatQ(kron(a - b, r - s)), Family::Dhat_ar, a - b, a + s, 0, 0, true));
  const int degenerate = kron(a - b, 0) - kron(a + b, 0);
  out.push_back(
      scalar_term(p.level * RatQ(kron(r, s) * degenerate), Payload::identity(), 0, 1, Flavor::D2, true, 0));
  return out;
}

// ---------------------------------------------------------------------------
// Realizations

LieElement d_family_coefficient(const FieldSymbol& f, int p) {
  const int n = mode_of_exponent(f.family, p);
  auto tilde = [&] {
    LieElement x = d_gen(f.alpha, n);
    if (n == 0 && f.alpha != 0) x.add(LieLabel::central(), -inverse_qdiff(f.alpha));
    return x;
  };
  switch (f.family) {
    case Family::D:
    case Family::Dbar: return d_gen(f.alpha, n);
    case Family::Dtilde:
    case Family::Dhat: return tilde();
    case Family::Dar:
    case Family::Dhat_ar: return RatQ::q_power(-f.r * n) * tilde();
    case Family::d_aff: break;
  }
  throw std::invalid_argument("field " + f.to_string() + " does not live in D");
}

LieElement LieRealization::identity() const {
  throw std::logic_error("the identity operator is not an element of D");
}

AffineElement AffineRealization::field(const FieldSymbol& f, int p) const {
  if (f.family != Family::d_aff) throw std::invalid_argument("field " + f.to_string() + " is not affine");
  return loop(f.alpha, f.r, mode_of_exponent(f.family, p));
}

AffineElement AffineRealization::identity() const {
  throw std::logic_error("the identity operator is not an element of the affine algebra");
}

std::string value_text(const SymbolicValue& v) {
  return v.to_string([](const SymbolicKey& k) { return "[" + k.payload.to_string() + "]_" + std::to_string(k.p); });
}

SymbolicValue SymbolicRealization::field(const FieldSymbol& f, int p) const {
  if (f.alpha == 0) return {};
  FieldSymbol g = f;
  RatQ sign(1);
  if (g.alpha < 0) {
    g.alpha = -g.alpha;
    sign = RatQ(-1);
  }
  return SymbolicValue(SymbolicKey{Payload::of_field(g), p}, sign);
}

SymbolicValue SymbolicRealization::commutator(const FieldSymbol&, int, const FieldSymbol&, int) const {
  throw std::logic_error("symbolic fields carry no bracket");
}

IdentityVerdict check_mode_identity(int alpha, int r, const Window& w) {
  IdentityVerdict out;
  const FieldSymbol tilde{Family::Dtilde, alpha, 0};
  const FieldSymbol ar{Family::Dar, alpha, r};
  for (int p = -w.bound; p <= w.bound; ++p) {
    ++out.positions;
    // x^p coefficient of q^r F(q^r x) is q^{r + rp} F_p
    LieElement expanded = RatQ::q_power(r + r * p) * d_family_coefficient(tilde, p);
    LieElement direct = d_family_coefficient(ar, p);
    if (!(expanded == direct)) {
      out.holds = false;
      out.witness = "coefficient x^" + std::to_string(p) + ": " + expanded.to_string() + " vs " + direct.to_string();
      return out;
    }
  }
  return out;
}

IdentityVerdict check_degenerate_limit(int gamma, const Window& w) {
  IdentityVerdict out;
  std::vector<DeltaTerm> pair;
  central_pair(pair, 1, gamma, true, 0);
  std::vector<DeltaTerm> replacement;
  central_pair(replacement, 1, 0, true, 0);
  for (int n = -w.bound; n <= w.bound; ++n) {
    ++out.positions;
    const int i = -n - 1;
    RatQ generic;
    for (const auto& t : pair) {
      auto dc = delta_coefficient(t, i);
      if (dc && dc->second == n) generic += t.prefactor * dc->first;
    }
    RatQ limit;
    for (const auto& t : replacement) {
      auto dc = delta_coefficient(t, i);
      if (dc && dc->second == n) limit += t.prefactor * dc->first;
    }
    const bool ok = generic == -qint(n, gamma) && generic.eval(Rational(1)) == Rational(-n) &&
                    limit == RatQ(static_cast<long>(-n));
    if (!ok) {
      out.holds = false;
      out.witness = "n = " + std::to_string(n) + ": generic " + generic.to_string() + ", replacement " +
                    limit.to_string();
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Certificates

std::string certificate_text(const Certificate& c) {
  if (c.empty()) return "1";
  std::string out;
  for (const auto& f : c) {
    if (!out.empty()) out += "*";
    out += "(x1 - q^" + std::to_string(f.shift) + " x2)^" + std::to_string(f.multiplicity);
  }
  return out;
}

BiSeries<RatQ> certificate_polynomial(const Certificate& c) {
  BiSeries<RatQ> poly{{{0, 0}, RatQ(1)}};
  for (const auto& f : c) {
    for (int k = 0; k < f.multiplicity; ++k) {
      BiSeries<RatQ> next;
      auto add = [&](std::pair<int, int> at, const RatQ& v) {
        auto [it, inserted] = next.try_emplace(at, v);
        if (!inserted) {
          it->second += v;
          if (it->second.is_zero()) next.erase(it);
        }
      };
      const RatQ root = -RatQ::q_power(f.shift);
      for (const auto& [ab, v] : poly) {
        add({ab.first + 1, ab.second}, v);
        add({ab.first, ab.second + 1}, v * root);
      }
      poly = std::move(next);
    }
  }
  return poly;
}

Certificate structural_certificate(const std::vector<DeltaTerm>& terms, const std::vector<bool>& term_is_zero) {
  std::map<int, int> mult;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (term_is_zero[k] || terms[k].prefactor.is_zero()) continue;
    int& m = mult[terms[k].shift];
    m = std::max(m, 1 + terms[k].order);
  }
  Certificate out;
  for (const auto& [k, m] : mult) out.push_back({k, m});
  return out;
}

// ---------------------------------------------------------------------------
// e-products

namespace {

void add_payload(LinComb<Payload>& acc, Payload pl, const RatQ& c) {
  if (pl.kind == Payload::Kind::Field) {
    if (pl.field.alpha == 0) return;
    if (pl.field.alpha < 0) {
      pl.field.alpha = -pl.field.alpha;
      acc.add(pl, -c);
      return;
    }
  }
  acc.add(pl, c);
}

}  // namespace

EProducts extract_e_products(const std::vector<DeltaTerm>& terms) {
  EProducts out;
  for (const auto& t : terms) {
    if (t.shift != 0) continue;
    if (t.x1_inverse || t.x2_power != 0 || (t.order == 1 && t.flavor != Flavor::X2D2)) {
      throw std::invalid_argument("e-product extraction expects x2 d/dx2 flavoured plain deltas: " + t.to_string());
    }
    add_payload(out[t.order], t.payload, t.prefactor);
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  }
  return out;
}

std::string e_products_text(const EProducts& e) {
  if (e.empty()) return "{}";
  std::string out = "{";
  for (const auto& [n, v] : e) {
    if (out.size() > 1) out += "; ";
    out += std::to_string(n) + ": " + v.to_string([](const Payload& p) { return p.to_string(); });
  }
  return out + "}";
}

EProducts displayed_e_products(const IdentityParams& p) {
  const int a = p.alpha;
  const int b = p.beta;
  const int r = p.r;
  const int s = p.s;
  EProducts out;
  auto field = [](int alpha, int idx) { return Payload::of_field(FieldSymbol{Family::Dhat_ar, alpha, idx}); };
  LinComb<Payload> p0;
  add_payload(p0, field(a + b, -a + s), RatQ(kron(a + b, s - r)));
  add_payload(p0, field(a + b, a + s), RatQ(-kron(a + b, r - s)));
  add_payload(p0, field(a - b, -a + s), RatQ(-kron(b - a, r - s)));
  add_payload(p0, field(a - b, a + s), RatQ(kron(a - b, r - s)));
  if (!p0.is_zero()) out[0] = p0;
  LinComb<Payload> p1;
  p1.add(Payload::identity(), p.level * RatQ((kron(a - b, 0) - kron(a + b, 0)) * kron(s - r, 0)));
  if (!p1.is_zero()) out[1] = p1;
  return out;
}

std::vector<DeltaTerm> borcherds_rebuild(const EProducts& e) {
  std::vector<DeltaTerm> out;
  for (const auto& [n, v] : e) {
    if (n > 1) throw std::invalid_argument("rebuild supports products of order at most 1");
    for (const auto& [pl, c] : v) {
      DeltaTerm t;
      t.shift = 0;
      t.order = n;
      t.flavor = Flavor::D2;
      t.prefactor = c;
      t.x1_inverse = true;
      t.payload = pl;
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace qvir
