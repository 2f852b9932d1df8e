#include "qvir/affine.hpp"

#include <algorithm>

namespace qvir {

std::string AffineLabel::to_string() const {
  if (central) return "K";
  return "d[" + std::to_string(alpha) + "," + std::to_string(r) + "](" + std::to_string(n) + ")";
}

AffineLabel AffineLabel::parse(std::string_view text) {
  if (text == "K") return K();
  auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw ParseError("bad affine label \"" + std::string(text) + "\"");
  }
  LieLabel base = LieLabel::parse(text.substr(0, open));
  if (base.kind != LieLabel::Kind::FrakD) throw ParseError("affine label base must be d[a,r]");
  int n = 0;
  try {
    n = std::stoi(std::string(text.substr(open + 1, text.size() - open - 2)));
  } catch (const std::exception&) {
    throw ParseError("bad t-power in \"" + std::string(text) + "\"");
  }
  return loop(base.a, base.b, n);
}

AffineElement loop(int alpha, int r, int n) { return tensor_t(frak(alpha, r), n); }

AffineElement aff_central() { return AffineElement(AffineLabel::K()); }

AffineElement tensor_t(const LieElement& a, int n) {
  if (a.tag() != Algebra::FrakD) throw TagMismatch("tensor_t expects an element of FrakD");
  AffineElement out;
  for (const auto& [x, c] : a.terms()) out.add(AffineLabel::loop(x.a, x.b, n), c);
  return out;
}

std::string to_string(const AffineElement& a) {
  return a.to_string([](const AffineLabel& l) { return l.to_string(); });
}

AffineElement parse_affine(std::string_view text) {
  return parse_lincomb<AffineLabel>(text, [](std::string_view s) { return AffineLabel::parse(s); });
}

namespace {

LieElement base_of(const AffineLabel& x) { return LieElement(Algebra::FrakD, LieLabel::frak(x.alpha, x.r)); }

template <class LabelBracket>
AffineElement bilinear(const AffineElement& a, const AffineElement& b, LabelBracket&& label_bracket) {
  AffineElement out;
  for (const auto& [x, cx] : a) {
    if (x.central) continue;
    for (const auto& [y, cy] : b) {
      if (y.central) continue;
      out.add_scaled(label_bracket(x, y), cx * cy);
    }
  }
  return out;
}

}  // namespace

AffineElement bracket_affine(const AffineElement& a, const AffineElement& b) {
  return bilinear(a, b, [](const AffineLabel& x, const AffineLabel& y) {
    LieElement ax = base_of(x);
    LieElement by = base_of(y);
    AffineElement out = tensor_t(bracket_frakD(ax, by), x.n + y.n);
    if (x.n + y.n == 0) out.add(AffineLabel::K(), RatQ(x.n) * pair_form(ax, by));
    return out;
  });
}

std::vector<int> covariant_shifts(int alpha, int r, int beta, int s) {
  std::vector<int> ks = {alpha + beta - r + s, -(alpha + beta) - r + s, alpha - beta - r + s,
                         -(alpha - beta) - r + s, s - r};
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

AffineElement bracket_gamma_covariant(const AffineElement& a, const AffineElement& b) {
  AffineElement raw = bilinear(a, b, [](const AffineLabel& x, const AffineLabel& y) {
    const int m = x.n;
    const int n = y.n;
    LieElement by = base_of(y);
    AffineElement out;
    for (int k : covariant_shifts(x.alpha, x.r, y.alpha, y.r)) {
      LieElement ax = LieElement(Algebra::FrakD, LieLabel::frak(x.alpha, x.r + k));
      const RatQ weight = RatQ::q_power(m * k);
      out.add_scaled(tensor_t(bracket_frakD(ax, by), m + n), weight);
      if (m + n == 0) out.add(AffineLabel::K(), weight * RatQ(m) * pair_form(ax, by));
    }
    return out;
  });
  return canon_mod_JGamma(raw);
}

AffineElement canon_mod_JGamma(const AffineElement& a) {
  AffineElement out;
  for (const auto& [x, c] : a) {
    if (x.central) {
      out.add(x, c);
    } else {
      out.add(AffineLabel::loop(x.alpha, 0, x.n), c * RatQ::q_power(-x.r * x.n));
    }
  }
  return out;
}

bool is_canonical_mod_JGamma(const AffineElement& a) {
  return std::all_of(a.begin(), a.end(), [](const auto& term) { return term.first.central || term.first.r == 0; });
}

LieElement iso_covariant_to_D(const AffineElement& a) {
  LieElement out(Algebra::D);
  for (const auto& [x, c] : a) {
    if (x.central) {
      out.add(LieLabel::central(), c);
      continue;
    }
    if (x.r != 0) throw NonCanonical("iso_covariant_to_D: " + x.to_string() + " is not canonical mod J_Gamma");
    out.add(LieLabel::d_gen(x.alpha, x.n), c);
    if (x.n == 0) out.add(LieLabel::central(), -c * inverse_qdiff(x.alpha));
  }
  return out;
}

Verdict<AffineElement> check_affine_jacobi(const AffineElement& a, const AffineElement& b, const AffineElement& c) {
  AffineElement residual = bracket_affine(a, bracket_affine(b, c));
  residual += bracket_affine(b, bracket_affine(c, a));
  residual += bracket_affine(c, bracket_affine(a, b));
  return {residual.is_zero(), residual};
}

}  // namespace qvir
