#include "qvir/qq_field.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qvir {

namespace {

Rational rational_pow(const Rational& base, int e) {
  if (e == 0) return Rational(1);
  unsigned long k = static_cast<unsigned long>(e < 0 ? -static_cast<long>(e) : e);
  mpz_class n;
  mpz_class d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), k);
  Rational r = e > 0 ? Rational(n, d) : Rational(d, n);
  r.canonicalize();
  return r;
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string_view digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return text_.substr(start, pos_ - start);
  }
  int integer() {
    bool neg = accept('-');
    auto d = digits();
    long v = std::stol(std::string(d));
    return static_cast<int>(neg ? -v : v);
  }
  Rational rational() {
    std::string s(digits());
    if (accept('/')) {
      s += '/';
      s += digits();
    }
    Rational r(s);
    if (r.get_den() == 0) fail("zero denominator in rational literal");
    r.canonicalize();
    return r;
  }
  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("parse error at offset " + std::to_string(pos_) + ": " + what + " in \"" +
                     std::string(text_) + "\"");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

LaurentPoly parse_poly(Cursor& cur) {
  std::vector<LaurentPoly::Term> terms;
  bool negative = cur.accept('-');
  // A lone "0" is the zero polynomial.
  std::size_t mark = cur.pos();
  if (!negative && cur.peek() == '0') {
    cur.digits();
    if (cur.peek() != '*' && cur.peek() != '/') return LaurentPoly();
    cur.set_pos(mark);
  }
  for (;;) {
    Rational c = cur.rational();
    cur.expect('*');
    cur.expect('q');
    cur.expect('^');
    int e = cur.integer();
    terms.emplace_back(e, negative ? Rational(-c) : c);
    char next = cur.peek();
    if (next == '+') {
      cur.accept('+');
      negative = false;
    } else if (next == '-') {
      cur.accept('-');
      negative = true;
    } else {
      break;
    }
  }
  return LaurentPoly::from_terms(std::move(terms));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  Cursor cur(text);
  bool neg = cur.accept('-');
  Rational r = cur.rational();
  if (!cur.at_end()) cur.fail("trailing characters");
  return neg ? Rational(-r) : r;
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

// ---------------------------------------------------------------------------
// LaurentPoly

LaurentPoly::LaurentPoly(const Rational& c) {
  if (c != 0) terms_.emplace_back(0, c);
}

LaurentPoly LaurentPoly::monomial(int exponent, const Rational& c) {
  LaurentPoly p;
  if (c != 0) p.terms_.emplace_back(exponent, c);
  return p;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  LaurentPoly p;
  for (auto& [e, c] : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == e) {
      p.terms_.back().second += c;
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    } else if (c != 0) {
      p.terms_.emplace_back(e, std::move(c));
    }
  }
  return p;
}

Rational LaurentPoly::coeff(int exponent) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                             [](const Term& t, int e) { return t.first < e; });
  if (it != terms_.end() && it->first == exponent) return it->second;
  return Rational(0);
}

LaurentPoly LaurentPoly::shifted(int by) const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.first += by;
  return p;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (c == 0) return LaurentPoly();
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.second *= c;
  return p;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.second = -t.second;
  return p;
}

namespace {

template <int Sign>
void merge_into(std::vector<LaurentPoly::Term>& out, const std::vector<LaurentPoly::Term>& a,
                std::span<const LaurentPoly::Term> b) {
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, Sign > 0 ? b[j].second : Rational(-b[j].second));
      ++j;
    } else {
      Rational c = Sign > 0 ? Rational(a[i].second + b[j].second) : Rational(a[i].second - b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
}

}  // namespace

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  std::vector<Term> out;
  merge_into<1>(out, terms_, rhs.terms_);
  terms_ = std::move(out);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
  if (rhs.is_zero()) return *this;
  std::vector<Term> out;
  merge_into<-1>(out, terms_, rhs.terms_);
  terms_ = std::move(out);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return LaurentPoly();
  if (b.is_monomial()) return a.shifted(b.low()).scaled(b.leading());
  if (a.is_monomial()) return b.shifted(a.low()).scaled(a.leading());
  std::vector<LaurentPoly::Term> terms;
  terms.reserve(a.size() * b.size());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) terms.emplace_back(ea + eb, ca * cb);
  return LaurentPoly::from_terms(std::move(terms));
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second) return false;
  }
  return true;
}

std::strong_ordering compare(const LaurentPoly& a, const LaurentPoly& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].first <=> b.terms_[i].first; c != 0) return c;
    int c = cmp(a.terms_[i].second, b.terms_[i].second);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

Rational LaurentPoly::eval(const Rational& q0) const {
  Rational acc = 0;
  for (const auto& [e, c] : terms_) acc += c * rational_pow(q0, e);
  return acc;
}

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    bool neg = c < 0;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    os << rational_to_string(neg ? Rational(-c) : c) << "*q^" << e;
    first = false;
  }
  return os.str();
}

LaurentPoly LaurentPoly::parse(std::string_view text) {
  Cursor cur(text);
  LaurentPoly p = parse_poly(cur);
  if (!cur.at_end()) cur.fail("trailing characters");
  return p;
}

// ---------------------------------------------------------------------------
// Polynomial division and gcd

std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  LaurentPoly quotient;
  LaurentPoly rem = a;
  const int db = b.high();
  const Rational& lb = b.leading();
  while (!rem.is_zero() && rem.high() >= db) {
    LaurentPoly t = LaurentPoly::monomial(rem.high() - db, rem.leading() / lb);
    quotient += t;
    rem -= t * b;
  }
  return {std::move(quotient), std::move(rem)};
}

LaurentPoly poly_gcd(LaurentPoly a, LaurentPoly b) {
  while (!b.is_zero()) {
    LaurentPoly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(Rational(1) / a.leading());
}

// ---------------------------------------------------------------------------
// RatQ

RatQ RatQ::normalize(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw DivisionByZero("division by zero in ℚ(q)");
  RatQ out;
  if (num.is_zero()) return out;
  if (den.is_monomial()) {
    out.num_ = num.shifted(-den.low()).scaled(Rational(1) / den.leading());
    return out;
  }
  const int shift = num.low() - den.low();
  LaurentPoly a = num.shifted(-num.low());
  LaurentPoly b = den.shifted(-den.low());
  if (!a.is_monomial()) {
    LaurentPoly g = poly_gcd(a, b);
    if (g.high() > 0) {
      a = poly_divmod(a, g).first;
      b = poly_divmod(b, g).first;
    }
  }
  if (b.is_monomial()) {
    out.num_ = a.shifted(shift).scaled(Rational(1) / b.leading());
    return out;
  }
  // Scale b to a primitive integer polynomial with positive leading coefficient.
  mpz_class lcm_den = 1;
  for (const auto& [e, c] : b.terms()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
  mpz_class content = 0;
  for (const auto& [e, c] : b.terms()) {
    mpz_class n = c.get_num() * (lcm_den / c.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), n.get_mpz_t());
  }
  Rational factor(lcm_den, content);
  factor.canonicalize();
  if (b.leading() < 0) factor = -factor;
  out.num_ = a.shifted(shift).scaled(factor);
  out.den_ = b.scaled(factor);
  return out;
}

RatQ RatQ::operator-() const {
  RatQ r = *this;
  r.num_ = -r.num_;
  return r;
}

RatQ RatQ::inv() const {
  if (is_zero()) throw DivisionByZero("division by zero in ℚ(q)");
  return normalize(den_, num_);
}

RatQ& RatQ::operator+=(const RatQ& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  if (den_ == rhs.den_) {
    if (is_polynomial()) {
      num_ += rhs.num_;
      return *this;
    }
    return *this = normalize(num_ + rhs.num_, den_);
  }
  return *this = normalize(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
}

RatQ& RatQ::operator-=(const RatQ& rhs) { return *this += -rhs; }

RatQ& RatQ::operator*=(const RatQ& rhs) {
  if (is_zero()) return *this;
  if (rhs.is_zero()) return *this = RatQ();
  if (is_polynomial() && rhs.is_polynomial()) {
    num_ = num_ * rhs.num_;
    return *this;
  }
  if (rhs.num_.is_monomial()) {
    // q-power times scalar: only the numerator changes and gcd is preserved.
    if (rhs.is_polynomial()) {
      num_ = num_ * rhs.num_;
      return *this;
    }
  }
  if (num_.is_monomial() && is_polynomial()) {
    LaurentPoly n = rhs.num_ * num_;
    num_ = std::move(n);
    den_ = rhs.den_;
    return *this;
  }
  return *this = normalize(num_ * rhs.num_, den_ * rhs.den_);
}

Rational RatQ::eval(const Rational& q0) const {
  if (q0 == 0) throw EvaluationPole("cannot evaluate at q = 0");
  Rational d = den_.eval(q0);
  if (d == 0) {
    throw EvaluationPole("evaluation pole: denominator " + den_.to_string() + " vanishes at q = " +
                         rational_to_string(q0));
  }
  return num_.eval(q0) / d;
}

std::string RatQ::to_string() const {
  if (is_polynomial()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RatQ RatQ::parse(std::string_view text) {
  Cursor cur(text);
  if (cur.peek() == '(') {
    cur.expect('(');
    LaurentPoly n = parse_poly(cur);
    cur.expect(')');
    LaurentPoly d(Rational(1));
    if (cur.accept('/')) {
      cur.expect('(');
      d = parse_poly(cur);
      cur.expect(')');
    }
    if (!cur.at_end()) cur.fail("trailing characters");
    return normalize(n, d);
  }
  LaurentPoly n = parse_poly(cur);
  if (!cur.at_end()) cur.fail("trailing characters");
  return RatQ(std::move(n));
}

// ---------------------------------------------------------------------------

RatQ qint(long n, int gamma) {
  if (gamma == 0) return RatQ(n);
  if (n == 0) return RatQ();
  const long m = n < 0 ? -n : n;
  std::vector<LaurentPoly::Term> terms;
  terms.reserve(static_cast<std::size_t>(m));
  for (long k = 0; k < m; ++k) terms.emplace_back(static_cast<int>(gamma * (m - 1 - 2 * k)), Rational(1));
  RatQ r(LaurentPoly::from_terms(std::move(terms)));
  return n < 0 ? -r : r;
}

RatQ inverse_qdiff(int a) {
  if (a == 0) throw DivisionByZero("division by zero in ℚ(q)");
  return RatQ::normalize(LaurentPoly(Rational(1)),
                         LaurentPoly::monomial(-a) - LaurentPoly::monomial(a));
}

}  // namespace qvir
