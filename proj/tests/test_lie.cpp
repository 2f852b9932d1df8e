#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <random>

#include "oracles.hpp"
#include "qvir/lie.hpp"

using namespace qvir;

namespace {

RatQ q(int e) { return RatQ::q_power(e); }

std::vector<LieElement> d_generators(int amax, int nmax) {
  std::vector<LieElement> out;
  for (int a = 1; a <= amax; ++a)
    for (int n = -nmax; n <= nmax; ++n) out.push_back(d_gen(a, n));
  out.push_back(d_central());
  return out;
}

std::vector<LieElement> frak_generators(int amax, int rmax) {
  std::vector<LieElement> out;
  for (int a = 1; a <= amax; ++a)
    for (int r = -rmax; r <= rmax; ++r) out.push_back(frak(a, r));
  return out;
}

}  // namespace

TEST_CASE("canonical labels") {
  CHECK(canon_label(Algebra::D, 0, 5).is_zero());
  CHECK(canon_label(Algebra::FrakD, -2, 3) == -frak(2, 3));
  CHECK(canon_label(Algebra::D, 3, -1) == LieElement(Algebra::D, LieLabel::d_gen(3, -1)));
  CHECK_THROWS_AS(LieElement(Algebra::D, LieLabel::frak(1, 0)), TagMismatch);
}

TEST_CASE("q-Virasoro bracket examples") {
  LieElement expected = (q(-4) - q(4)) * d_gen(2, 0) + (RatQ(2) - q(2) - q(-2)) * d_central();
  CHECK(bracket_D(d_gen(1, 2), d_gen(1, -2)) == expected);
  CHECK(bracket_D(d_gen(1, 1), d_gen(1, -1)) == (q(-2) - q(2)) * d_gen(2, 0));
  for (int a = 1; a <= 3; ++a)
    for (int n = -3; n <= 3; ++n) CHECK(bracket_D(d_gen(a, n), d_central()).is_zero());
  CHECK_THROWS_AS(bracket_D(d_gen(1, 0), frak(1, 0)), TagMismatch);
}

TEST_CASE("frakD bracket examples") {
  CHECK(bracket_frakD(frak(1, 0), frak(1, 2)) == frak(2, 1));
  CHECK(bracket_frakD(frak(1, 0), frak(1, 1)).is_zero());
  CHECK(bracket_frakD(frak(2, 3), frak(2, 3)).is_zero());
}

TEST_CASE("gl bracket examples") {
  CHECK(bracket_gl(gl_unit(1, 2), gl_unit(2, 3)) == gl_unit(1, 3));
  CHECK(bracket_gl(gl_unit(1, 2), gl_unit(3, 4)).is_zero());
  CHECK(bracket_gl(gl_unit(1, 2), gl_unit(2, 1)) == gl_unit(1, 1) - gl_unit(2, 2));
}

TEST_CASE("tau, gtau and the embedding") {
  CHECK(tau_map(gl_unit(3, 5)) == -gl_unit(5, 3));
  CHECK(tau_map(gl_unit(2, 2)) == -gl_unit(2, 2));
  LieElement x = RatQ(3) * gl_unit(1, 4) + q(2) * gl_unit(-2, 0);
  CHECK(tau_map(tau_map(x)) == x);
  CHECK(gtau(1, 0) == gl_unit(1, -1) - gl_unit(-1, 1));
  CHECK(gtau(0, 4).is_zero());
  for (int a = -3; a <= 3; ++a)
    for (int m = -3; m <= 3; ++m) {
      CHECK(gtau(-a, m) == -gtau(a, m));
      CHECK(tau_map(gtau(a, m)) == gtau(a, m));
    }
  CHECK(embed_frakD(frak(1, 0)) == gl_unit(-1, 1) - gl_unit(1, -1));
  CHECK(embed_frakD(LieElement(Algebra::FrakD)).is_zero());
  CHECK(embed_frakD(bracket_frakD(frak(1, 0), frak(1, 2))) == -gtau(2, 1));
}

TEST_CASE("bilinear forms") {
  CHECK(pair_form(gl_unit(1, 2), gl_unit(2, 1)) == RatQ(1));
  CHECK(pair_form(frak(1, 3), frak(1, 3)) == RatQ(1));
  CHECK(pair_form(frak(1, 0), frak(2, 0)).is_zero());
  CHECK(pair_form(frak(1, 0), -frak(1, 0)) == RatQ(-1));
  CHECK_THROWS_AS(pair_form(frak(1, 0), gl_unit(0, 0)), TagMismatch);
}

TEST_CASE("sigma shift") {
  CHECK(sigma_shift(2, frak(1, 0)) == frak(1, 2));
  LieElement x = q(1) * frak(2, -1) + RatQ(5) * frak(1, 3);
  CHECK(sigma_shift(0, x) == x);
  CHECK(sigma_shift(3, sigma_shift(-3, x)) == x);
  for (const auto& a : frak_generators(3, 2))
    for (const auto& b : frak_generators(3, 2))
      for (int m = -3; m <= 3; ++m) {
        CHECK(sigma_shift(m, bracket_frakD(a, b)) == bracket_frakD(sigma_shift(m, a), sigma_shift(m, b)));
        CHECK(pair_form(sigma_shift(m, a), sigma_shift(m, b)) == pair_form(a, b));
      }
}

TEST_CASE("Jacobi examples") {
  CHECK(check_jacobi(d_gen(1, 1), d_gen(2, -1), d_gen(1, 0)).holds);
  CHECK(check_jacobi(gl_unit(1, 2), gl_unit(2, 3), gl_unit(3, 1)).holds);
  CHECK(check_jacobi(frak(1, 0), frak(2, 1), frak(3, -1)).holds);
  CHECK(check_invariance(frak(1, 0), frak(1, 2), frak(2, 1)).holds);
  CHECK(check_invariance(gl_unit(1, 2), gl_unit(2, 3), gl_unit(3, 1)).holds);
  CHECK(check_invariance(frak(1, 0), LieElement(Algebra::FrakD), frak(2, 1)).holds);
}

TEST_CASE("skew symmetry and Jacobi on small D range") {
  auto gens = d_generators(2, 2);
  for (const auto& a : gens)
    for (const auto& b : gens) {
      CHECK((bracket_D(a, b) + bracket_D(b, a)).is_zero());
      for (const auto& c : gens) CHECK(check_jacobi(a, b, c).holds);
    }
}

TEST_CASE("D bracket output stays within alpha range and central term needs m + n = 0") {
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int n = -3; n <= 3; ++n)
        for (int m = -3; m <= 3; ++m) {
          LieElement x = bracket_D(d_gen(a, n), d_gen(b, m));
          for (const auto& [label, c] : x.terms()) {
            if (label.kind == LieLabel::Kind::DCentral) {
              CHECK(m + n == 0);
            } else {
              CHECK(label.a <= a + b);
              CHECK(label.b == m + n);
            }
          }
        }
}

TEST_CASE("embedding against dense matrix oracle") {
  const int n = 12;
  auto gens = frak_generators(3, 3);
  for (int a = 1; a <= 3; ++a)
    for (int r = -3; r <= 3; ++r) CHECK(oracle::to_dense(embed_frakD(frak(a, r)), n) == oracle::frak_matrix(a, r, n));
  for (const auto& x : gens)
    for (const auto& y : gens) {
      LieElement ex = embed_frakD(x);
      LieElement ey = embed_frakD(y);
      CHECK(embed_frakD(bracket_frakD(x, y)) == bracket_gl(ex, ey));
      oracle::DenseMatrix dx = oracle::to_dense(ex, n);
      oracle::DenseMatrix dy = oracle::to_dense(ey, n);
      CHECK(oracle::to_dense(bracket_gl(ex, ey), n) == oracle::commutator(dx, dy));
      Rational tr = oracle::trace_form(dx, dy);
      CHECK(pair_form(ex, ey) == RatQ(tr));
      CHECK(RatQ(tr) == RatQ(-2) * pair_form(x, y));
    }
}

TEST_CASE("text round trip") {
  LieElement x = (q(-4) - q(4)) * d_gen(2, 0) + inverse_qdiff(3) * d_central();
  CHECK(LieElement::parse(Algebra::D, x.to_string()) == x);
  LieElement y = RatQ(Rational(3, 2)) * gl_unit(-1, 4) - gl_unit(2, 2);
  CHECK(LieElement::parse(Algebra::Gl, y.to_string()) == y);
  CHECK(LieElement::parse(Algebra::FrakD, "0").is_zero());
  CHECK(LieLabel::parse("d[2,-3]") == LieLabel::frak(2, -3));
  CHECK_THROWS_AS(LieLabel::parse("D[x,1]"), ParseError);
}

TEST_CASE("structure cache is transparent and persists") {
  auto cache = std::make_shared<StructureCache>();
  set_structure_cache(cache);
  LieElement first = bracket_D(d_gen(2, 1), d_gen(1, -1));
  LieElement second = bracket_D(d_gen(2, 1), d_gen(1, -1));
  CHECK(first == second);
  CHECK(first == bracket_D_generators(2, 1, 1, -1));
  CHECK(cache->size() == 1);
  std::string path = "test_lie_cache.json";
  cache->save(path);
  auto loaded = std::make_shared<StructureCache>();
  loaded->load(path);
  CHECK(loaded->size() == 1);
  CHECK(*loaded->lookup(LieLabel::d_gen(2, 1), LieLabel::d_gen(1, -1)) == first);
  set_structure_cache(nullptr);
  std::remove(path.c_str());
}
