#pragma once

#include <functional>
#include <map>
#include <string_view>
#include <string>
#include <utility>

#include "qvir/qq_field.hpp"

namespace qvir {

// Finite linear combination of keys with RatQ coefficients. Zero
// coefficients are never stored, so equality is map equality.
template <class Key>
class LinComb {
 public:
  using Map = std::map<Key, RatQ>;

  LinComb() = default;
  explicit LinComb(const Key& key, RatQ coeff = RatQ(1)) { add(key, std::move(coeff)); }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  RatQ coeff(const Key& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? RatQ() : it->second;
  }

  void add(const Key& key, const RatQ& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void add_scaled(const LinComb& other, const RatQ& c) {
    if (c.is_zero()) return;
    for (const auto& [k, v] : other.terms_) add(k, v * c);
  }

  LinComb& operator+=(const LinComb& rhs) {
    for (const auto& [k, v] : rhs.terms_) add(k, v);
    return *this;
  }
  LinComb& operator-=(const LinComb& rhs) {
    for (const auto& [k, v] : rhs.terms_) add(k, -v);
    return *this;
  }
  LinComb& operator*=(const RatQ& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
  }
  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend LinComb operator*(const RatQ& c, LinComb a) { return a *= c; }
  LinComb operator-() const {
    LinComb r = *this;
    for (auto& [k, v] : r.terms_) v = -v;
    return r;
  }

  template <class F>
  LinComb map_keys(F&& f) const {
    LinComb out;
    for (const auto& [k, v] : terms_) out.add(f(k), v);
    return out;
  }

  friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }

  // "(coeff) * key + (coeff) * key"; "0" for the empty combination.
  std::string to_string(const std::function<std::string(const Key&)>& key_text) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, v] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + v.to_string() + ") * " + key_text(k);
    }
    return out;
  }

  // Coefficientwise specialization q -> q0; zero values are dropped.
  std::map<Key, Rational> specialize(const Rational& q0) const {
    std::map<Key, Rational> out;
    for (const auto& [k, v] : terms_) {
      Rational x = v.eval(q0);
      if (x != 0) out.emplace(k, std::move(x));
    }
    return out;
  }

 private:
  Map terms_;
};

// Accumulates a specialized value into a rational map.
template <class Key>
void accumulate_specialized(std::map<Key, Rational>& acc, const LinComb<Key>& v, const Rational& q0,
                            int sign = 1) {
  for (const auto& [k, c] : v.terms()) {
    Rational x = c.eval(q0);
    if (sign < 0) x = -x;
    auto [it, inserted] = acc.try_emplace(k, x);
    if (!inserted) {
      it->second += x;
      if (it->second == 0) acc.erase(it);
    } else if (it->second == 0) {
      acc.erase(it);
    }
  }
}

// Inverse of LinComb::to_string. Keys never contain the separator " + (".
template <class Key, class KeyParser>
LinComb<Key> parse_lincomb(std::string_view text, KeyParser&& parse_key) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  LinComb<Key> out;
  if (text == "0") return out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '(') throw ParseError("expected '(' in linear combination \"" + std::string(text) + "\"");
    int depth = 0;
    std::size_t close = pos;
    for (; close < text.size(); ++close) {
      if (text[close] == '(') ++depth;
      if (text[close] == ')' && --depth == 0) break;
    }
    if (close >= text.size()) throw ParseError("unbalanced parentheses in \"" + std::string(text) + "\"");
    RatQ coeff = RatQ::parse(text.substr(pos + 1, close - pos - 1));
    std::size_t star = text.find('*', close);
    if (star == std::string_view::npos) throw ParseError("expected '*' in \"" + std::string(text) + "\"");
    std::size_t next = text.find(" + (", star);
    std::string_view key_text = trim(text.substr(star + 1, next == std::string_view::npos ? std::string_view::npos : next - star - 1));
    out.add(parse_key(key_text), coeff);
    if (next == std::string_view::npos) break;
    pos = next + 3;
  }
  return out;
}

}  // namespace qvir
