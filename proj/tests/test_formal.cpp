#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qvir/formal.hpp"

using namespace qvir;

namespace {

RatQ q(int e) { return RatQ::q_power(e); }

DeltaTerm plain(int shift, bool x1_inverse) {
  DeltaTerm t;
  t.shift = shift;
  t.x1_inverse = x1_inverse;
  return t;
}

DeltaTerm derivative(int shift, Flavor flavor, bool x1_inverse) {
  DeltaTerm t = plain(shift, x1_inverse);
  t.order = 1;
  t.flavor = flavor;
  return t;
}

const IdentityId kLieIds[] = {IdentityId::GEN_2_8, IdentityId::GEN_2_17, IdentityId::GEN_2_9, IdentityId::GEN_3_2,
                              IdentityId::GEN_3_4};

}  // namespace

TEST_CASE("delta expansions") {
  auto s = expand_delta(plain(1, false), Window(5));
  CHECK(s.at({-3, 3}) == q(3));
  auto flat = expand_delta(plain(0, false), Window(4));
  CHECK(flat.size() == 9);
  for (const auto& [ij, v] : flat) {
    CHECK(ij.first == -ij.second);
    CHECK(v == RatQ(1));
  }
  auto d = expand_delta(derivative(0, Flavor::X2D2, false), Window(4));
  for (int n = -4; n <= 4; ++n) {
    if (n == 0) {
      CHECK(d.count({0, 0}) == 0);
    } else {
      CHECK(d.at({-n, n}) == RatQ(n));
    }
  }
  auto inv = expand_delta(plain(2, true), Window(3));
  CHECK(inv.at({-2, 1}) == q(2));
  auto d2 = expand_delta(derivative(0, Flavor::D2, true), Window(3));
  CHECK(d2.at({-3, 1}) == RatQ(2));
}

TEST_CASE("iota binomial expansions") {
  auto lin = expand_iota_binomial(q(1), 1, Window(3));
  CHECK(lin.size() == 2);
  CHECK(lin.at({1, 0}) == RatQ(1));
  CHECK(lin.at({0, 1}) == -q(1));
  auto inv = expand_iota_binomial(RatQ(1), -1, Window(5));
  for (int j = 0; j <= 4; ++j) CHECK(inv.at({-1 - j, j}) == RatQ(1));
  auto sq = expand_iota_binomial(q(2), 2, Window(3));
  CHECK(sq.at({0, 2}) == q(4));
}

TEST_CASE("multiplying a delta by its linear factor annihilates it") {
  const Window w(6);
  const Window inner(5);
  for (int k = -3; k <= 3; ++k) {
    for (bool x1inv : {false, true}) {
      auto factor = expand_iota_binomial(q(k), 1, Window(1));
      auto series = expand_delta(plain(k, x1inv), w);
      CHECK(multiply(factor, series, inner, RatQ()).empty());
      auto ds = expand_delta(derivative(k, Flavor::X2D2, x1inv), w);
      CHECK_FALSE(multiply(factor, ds, inner, RatQ()).empty());
      auto once = multiply(factor, ds, inner, RatQ());
      auto twice = multiply(factor, once, Window(4), RatQ());
      CHECK(twice.empty());
    }
  }
}

TEST_CASE("degenerate replacement matches the generic coefficient at q = 1") {
  for (int g = -3; g <= 3; ++g) {
    if (g == 0) continue;
    CHECK(check_degenerate_limit(g, Window(5)).holds);
  }
}

TEST_CASE("identity examples") {
  LieRealization lie;
  CHECK(check_generating_identity(IdentityId::GEN_2_17, {1, 1}, Window(4), lie).holds);
  CHECK(check_generating_identity(IdentityId::GEN_2_8, {1, -1}, Window(5), lie).holds);
  for (auto id : kLieIds) CHECK(check_generating_identity(id, {0, 0}, Window(3), lie).holds);
  CHECK_THROWS_AS(parse_identity("GEN-9.9"), std::invalid_argument);
  CHECK(parse_identity("AFF-2.13") == IdentityId::AFF_2_13);
}

TEST_CASE("all D identities on a reduced range") {
  LieRealization lie;
  for (auto id : kLieIds)
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        for (int r = -1; r <= 1; ++r)
          for (int s = -1; s <= 1; ++s) {
            if (!identity_uses_rs(id) && (r != 0 || s != 0)) continue;
            auto v = check_generating_identity(id, {a, b, r, s}, Window(3), lie);
            INFO(identity_name(id), " a=", a, " b=", b, " r=", r, " s=", s, " ", v.witness);
            CHECK(v.holds);
          }
}

TEST_CASE("affine identity") {
  AffineRealization aff;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int r = -2; r <= 2; ++r)
        for (int s = -2; s <= 2; ++s) {
          auto v = check_generating_identity(IdentityId::AFF_2_13, {a, b, r, s}, Window(3), aff);
          INFO(a, b, r, s, v.witness);
          CHECK(v.holds);
        }
}

TEST_CASE("a wrong right-hand side yields a coefficient witness") {
  LieRealization lie;
  auto rhs = identity_rhs(IdentityId::GEN_2_17, {1, 1});
  rhs.back().prefactor = RatQ(2);
  auto [a, b] = identity_fields(IdentityId::GEN_2_17, {1, 1});
  auto v = check_terms_against_commutator(lie, a, b, rhs, Window(3));
  CHECK_FALSE(v.holds);
  CHECK(v.witness.find("coefficient x1^") == 0);
  CHECK(v.witness.find("residual") != std::string::npos);
}

TEST_CASE("mode identity") {
  for (int a = -2; a <= 2; ++a)
    for (int r = -2; r <= 2; ++r) CHECK(check_mode_identity(a, r, Window(4)).holds);
}

TEST_CASE("certificates in D") {
  LieRealization lie;
  IdentityParams p{1, 2, 0, 0};
  auto [a, b] = identity_fields(IdentityId::GEN_2_9, p);
  auto cert = quasi_locality_certificate(std::vector<LieRealization>{lie}, a, b,
                                         identity_rhs(IdentityId::GEN_2_9, p), Window(4));
  CHECK(certificate_text(cert) == "(x1 - q^-3 x2)^1*(x1 - q^-1 x2)^1*(x1 - q^1 x2)^1*(x1 - q^3 x2)^1");
  CHECK(certificate_text({}) == "1");
  auto poly = certificate_polynomial({{0, 2}});
  CHECK(poly.at({2, 0}) == RatQ(1));
  CHECK(poly.at({1, 1}) == RatQ(-2));
  CHECK(poly.at({0, 2}) == RatQ(1));
}

TEST_CASE("e-product extraction") {
  IdentityParams p{1, 1, 0, 0, RatQ(Rational(3, 2))};
  EProducts e = extract_e_products(identity_rhs(IdentityId::PHI_3_6, p));
  CHECK(e == displayed_e_products(p));
  CHECK(e.at(1).coeff(Payload::identity()) == RatQ(Rational(3, 2)));
  CHECK(e.count(2) == 0);
  std::vector<DeltaTerm> shifted = {derivative(3, Flavor::X2D2, false), plain(-1, false)};
  CHECK(extract_e_products(shifted).empty());
  DeltaTerm single = derivative(0, Flavor::X2D2, false);
  single.prefactor = RatQ(5);
  single.payload = Payload::identity();
  CHECK(extract_e_products({single}).at(1).coeff(Payload::identity()) == RatQ(5));
}

TEST_CASE("Borcherds rebuild matches the displayed commutator") {
  SymbolicRealization sym;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int r = -2; r <= 2; ++r)
        for (int s = -2; s <= 2; ++s) {
          IdentityParams p{a, b, r, s, RatQ(3)};
          EProducts e = extract_e_products(identity_rhs(IdentityId::PHI_3_6, p));
          CHECK(e == displayed_e_products(p));
          CHECK(compare_term_sums(sym, borcherds_rebuild(e), borcherds_display(p), Window(3)).holds);
        }
}
