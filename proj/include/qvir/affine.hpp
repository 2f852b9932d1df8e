#pragma once

// The affinization of frakD, its Gamma-covariant bracket, the canonical
// form modulo J_Gamma and the isomorphism of the covariant quotient onto D.

#include <compare>
#include <string>
#include <string_view>

#include "qvir/lie.hpp"
#include "qvir/lincomb.hpp"

namespace qvir {

struct AffineLabel {
  bool central = false;  // the affine central symbol K
  int alpha = 0;         // >= 1 for loop labels
  int r = 0;
  int n = 0;  // t-power

  static AffineLabel loop(int alpha, int r, int n) { return {false, alpha, r, n}; }
  static AffineLabel K() { return {true, 0, 0, 0}; }

  std::string to_string() const;
  static AffineLabel parse(std::string_view text);

  auto operator<=>(const AffineLabel&) const = default;
};

using AffineElement = LinComb<AffineLabel>;

// Signed loop element d^{alpha,r} (x) t^n, canonicalized in alpha.
AffineElement loop(int alpha, int r, int n);
AffineElement aff_central();
// a (x) t^n for a in frakD.
AffineElement tensor_t(const LieElement& a, int n);

std::string to_string(const AffineElement& a);
AffineElement parse_affine(std::string_view text);

// [a (x) t^m, b (x) t^n] = [a,b] (x) t^{m+n} + m delta_{m+n,0} <a,b> K
AffineElement bracket_affine(const AffineElement& a, const AffineElement& b);

// Covariant bracket sum_k q^{mk}([sigma_k a, b] (x) t^{m+n} + m delta_{m+n,0} <sigma_k a, b> K)
// over the finite k-set read off the delta constraints; result in canonical form.
AffineElement bracket_gamma_covariant(const AffineElement& a, const AffineElement& b);

// The k-values for which generator pair (alpha,r), (beta,s) can contribute.
std::vector<int> covariant_shifts(int alpha, int r, int beta, int s);

// d^{alpha,r} (x) t^n -> q^{-rn} d^{alpha,0} (x) t^n
AffineElement canon_mod_JGamma(const AffineElement& a);
bool is_canonical_mod_JGamma(const AffineElement& a);

class NonCanonical : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// d^{alpha,0} (x) t^n -> D^alpha(n) - delta_{n,0} c / (q^{-alpha} - q^alpha), K -> c
LieElement iso_covariant_to_D(const AffineElement& a);

Verdict<AffineElement> check_affine_jacobi(const AffineElement& a, const AffineElement& b, const AffineElement& c);

}  // namespace qvir
