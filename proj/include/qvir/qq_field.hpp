#pragma once

// Exact arithmetic in the rational function field Q(q).
//
// A LaurentPoly is a sparse map exponent -> rational coefficient. A RatQ is
// a reduced fraction of Laurent polynomials kept in a normal form, so that
// two RatQ values are equal iff they are structurally equal:
//
//   * den is an ordinary polynomial with a nonzero constant term,
//   * den has integer coefficients, content 1 and positive leading term,
//   * gcd(num, den) = 1,
//   * num carries every power of q and any rational scale factor.

#include <gmpxx.h>

#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qvir {

using Rational = mpq_class;

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class EvaluationPole : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LaurentPoly {
 public:
  using Term = std::pair<int, Rational>;

  LaurentPoly() = default;
  explicit LaurentPoly(const Rational& c);

  static LaurentPoly monomial(int exponent, const Rational& c = 1);
  // Builds from arbitrary (exponent, coeff) pairs; merges and drops zeros.
  static LaurentPoly from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::span<const Term> terms() const { return terms_; }
  Rational coeff(int exponent) const;

  // Undefined on the zero polynomial.
  int low() const { return terms_.front().first; }
  int high() const { return terms_.back().first; }
  const Rational& leading() const { return terms_.back().second; }
  bool is_monomial() const { return terms_.size() == 1; }

  LaurentPoly shifted(int by) const;
  LaurentPoly scaled(const Rational& c) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
  // Total order used only for deterministic container ordering.
  friend std::strong_ordering compare(const LaurentPoly& a, const LaurentPoly& b);

  Rational eval(const Rational& q0) const;

  std::string to_string() const;
  static LaurentPoly parse(std::string_view text);

 private:
  std::vector<Term> terms_;  // strictly ascending exponents, nonzero coeffs
};

// Polynomial quotient and remainder. Both operands must have low() >= 0;
// they are treated as ordinary polynomials in q.
std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly& a, const LaurentPoly& b);
// Monic gcd of two polynomials (low() >= 0); gcd(0, 0) = 0.
LaurentPoly poly_gcd(LaurentPoly a, LaurentPoly b);

class RatQ {
 public:
  RatQ() : den_(Rational(1)) {}
  RatQ(long n) : num_(Rational(n)), den_(Rational(1)) {}  // NOLINT: implicit by design of a field type
  RatQ(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT
  explicit RatQ(LaurentPoly poly) : num_(std::move(poly)), den_(Rational(1)) {}

  static RatQ normalize(const LaurentPoly& num, const LaurentPoly& den);
  static RatQ q_power(int e) { return RatQ(LaurentPoly::monomial(e)); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_monomial(); }

  RatQ operator-() const;
  RatQ inv() const;
  RatQ& operator+=(const RatQ& rhs);
  RatQ& operator-=(const RatQ& rhs);
  RatQ& operator*=(const RatQ& rhs);
  RatQ& operator/=(const RatQ& rhs) { return *this *= rhs.inv(); }
  friend RatQ operator+(RatQ a, const RatQ& b) { return a += b; }
  friend RatQ operator-(RatQ a, const RatQ& b) { return a -= b; }
  friend RatQ operator*(RatQ a, const RatQ& b) { return a *= b; }
  friend RatQ operator/(RatQ a, const RatQ& b) { return a /= b; }

  friend bool operator==(const RatQ& a, const RatQ& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  Rational eval(const Rational& q0) const;

  std::string to_string() const;
  static RatQ parse(std::string_view text);

 private:
  LaurentPoly num_;
  LaurentPoly den_;
};

// [n]_{q^gamma} = (q^{-gamma n} - q^{gamma n}) / (q^{-gamma} - q^{gamma}), with
// the gamma = 0 value n.
RatQ qint(long n, int gamma);

// 1 / (q^{-a} - q^{a}) for a != 0.
RatQ inverse_qdiff(int a);

Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& r);

}  // namespace qvir
