#include "qvir/lie.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include "json.hpp"

namespace qvir {

std::string_view algebra_name(Algebra a) {
  switch (a) {
    case Algebra::D: return "D";
    case Algebra::FrakD: return "FrakD";
    case Algebra::Gl: return "Gl";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Labels

Algebra LieLabel::algebra() const {
  switch (kind) {
    case Kind::DGen:
    case Kind::DCentral: return Algebra::D;
    case Kind::FrakD: return Algebra::FrakD;
    case Kind::GlUnit: return Algebra::Gl;
  }
  return Algebra::D;
}

std::string LieLabel::to_string() const {
  auto pair = [this](const char* head) {
    return std::string(head) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
  };
  switch (kind) {
    case Kind::DGen: return pair("D");
    case Kind::DCentral: return "c";
    case Kind::FrakD: return pair("d");
    case Kind::GlUnit: return pair("E");
  }
  return "?";
}

LieLabel LieLabel::parse(std::string_view text) {
  if (text == "c") return central();
  auto fail = [&] { throw ParseError("bad Lie label \"" + std::string(text) + "\""); };
  if (text.size() < 5 || text[1] != '[' || text.back() != ']') fail();
  auto comma = text.find(',');
  if (comma == std::string_view::npos) fail();
  int x = 0;
  int y = 0;
  try {
    x = std::stoi(std::string(text.substr(2, comma - 2)));
    y = std::stoi(std::string(text.substr(comma + 1, text.size() - comma - 2)));
  } catch (const std::exception&) {
    fail();
  }
  switch (text[0]) {
    case 'D': return d_gen(x, y);
    case 'd': return frak(x, y);
    case 'E': return unit(x, y);
    default: fail();
  }
  return central();
}

// ---------------------------------------------------------------------------
// Elements

LieElement::LieElement(Algebra tag, const LieLabel& label, const RatQ& coeff) : tag_(tag) { add(label, coeff); }

void LieElement::check_label(const LieLabel& label) const {
  if (label.algebra() != tag_) {
    throw TagMismatch("label " + label.to_string() + " does not belong to algebra " +
                      std::string(algebra_name(tag_)));
  }
  if ((label.kind == LieLabel::Kind::DGen || label.kind == LieLabel::Kind::FrakD) && label.a < 1) {
    throw std::invalid_argument("non-canonical label " + label.to_string());
  }
}

void LieElement::add(const LieLabel& label, const RatQ& coeff) {
  check_label(label);
  terms_.add(label, coeff);
}

void LieElement::add_scaled(const LieElement& other, const RatQ& c) {
  if (other.tag_ != tag_) throw TagMismatch("adding elements of different algebras");
  terms_.add_scaled(other.terms_, c);
}

LieElement& LieElement::operator+=(const LieElement& rhs) {
  if (rhs.tag_ != tag_) throw TagMismatch("adding elements of different algebras");
  terms_ += rhs.terms_;
  return *this;
}

LieElement& LieElement::operator-=(const LieElement& rhs) {
  if (rhs.tag_ != tag_) throw TagMismatch("subtracting elements of different algebras");
  terms_ -= rhs.terms_;
  return *this;
}

LieElement& LieElement::operator*=(const RatQ& c) {
  terms_ *= c;
  return *this;
}

LieElement LieElement::operator-() const {
  LieElement r = *this;
  r.terms_ = -r.terms_;
  return r;
}

std::string LieElement::to_string() const {
  return terms_.to_string([](const LieLabel& l) { return l.to_string(); });
}

LieElement LieElement::parse(Algebra tag, std::string_view text) {
  LieElement out(tag);
  auto comb = parse_lincomb<LieLabel>(text, [](std::string_view s) { return LieLabel::parse(s); });
  for (const auto& [label, coeff] : comb) out.add(label, coeff);
  return out;
}

// ---------------------------------------------------------------------------
// Basis

LieElement canon_label(Algebra tag, int alpha, int index) {
  LieElement out(tag);
  if (tag == Algebra::Gl) {
    out.add(LieLabel::unit(alpha, index), 1);
    return out;
  }
  if (alpha == 0) return out;
  const int a = alpha < 0 ? -alpha : alpha;
  const RatQ sign = alpha < 0 ? RatQ(-1) : RatQ(1);
  out.add(tag == Algebra::D ? LieLabel::d_gen(a, index) : LieLabel::frak(a, index), sign);
  return out;
}

LieElement d_gen(int alpha, int n) { return canon_label(Algebra::D, alpha, n); }
LieElement d_central() { return LieElement(Algebra::D, LieLabel::central()); }
LieElement frak(int alpha, int r) { return canon_label(Algebra::FrakD, alpha, r); }
LieElement gl_unit(int i, int j) { return canon_label(Algebra::Gl, i, j); }

// ---------------------------------------------------------------------------
// Structure cache plumbing

namespace {

std::mutex g_cache_mutex;
std::shared_ptr<StructureCache> g_cache;
std::atomic<bool> g_cache_enabled{false};

std::shared_ptr<StructureCache> active_cache() {
  if (!g_cache_enabled.load(std::memory_order_acquire)) return nullptr;
  std::lock_guard lock(g_cache_mutex);
  return g_cache;
}

// (q^k - q^{-k}), the value of (q - q^{-1})[k]_q.
RatQ qdiff(int k) {
  if (k == 0) return RatQ();
  return RatQ(LaurentPoly::monomial(k) - LaurentPoly::monomial(-k));
}

void add_canon(LieElement& out, Algebra tag, int alpha, int index, const RatQ& coeff) {
  if (alpha == 0 || coeff.is_zero()) return;
  out.add_scaled(canon_label(tag, alpha, index), coeff);
}

template <class Compute>
LieElement cached_bracket(const LieLabel& x, const LieLabel& y, Compute&& compute) {
  auto cache = active_cache();
  if (cache) {
    if (auto hit = cache->lookup(x, y)) return *hit;
  }
  LieElement value = compute();
  if (cache) cache->insert(x, y, value);
  return value;
}

void require_tags(const LieElement& a, const LieElement& b, Algebra tag, const char* op) {
  if (a.tag() != tag || b.tag() != tag) {
    throw TagMismatch(std::string(op) + ": expected two elements of " + std::string(algebra_name(tag)) +
                      ", got " + std::string(algebra_name(a.tag())) + " and " +
                      std::string(algebra_name(b.tag())));
  }
}

template <class LabelBracket>
LieElement bilinear(Algebra tag, const LieElement& a, const LieElement& b, LabelBracket&& label_bracket) {
  LieElement out(tag);
  for (const auto& [x, cx] : a.terms()) {
    for (const auto& [y, cy] : b.terms()) {
      LieElement xy = label_bracket(x, y);
      if (!xy.is_zero()) out.add_scaled(xy, cx * cy);
    }
  }
  return out;
}

}  // namespace

LieElement bracket_D_generators(int alpha, int n, int beta, int m) {
  // [D^a(n), D^b(m)] = (q-q^-1)[am-bn]_q D^{a+b}(m+n) - (q-q^-1)[am+bn]_q D^{a-b}(m+n)
  //                    + ([m]_{q^{a+b}} - [m]_{q^{a-b}}) delta_{m+n,0} c
  LieElement out(Algebra::D);
  add_canon(out, Algebra::D, alpha + beta, m + n, qdiff(alpha * m - beta * n));
  add_canon(out, Algebra::D, alpha - beta, m + n, -qdiff(alpha * m + beta * n));
  if (m + n == 0) out.add(LieLabel::central(), qint(m, alpha + beta) - qint(m, alpha - beta));
  return out;
}

LieElement bracket_frakD_generators(int alpha, int r, int beta, int s) {
  LieElement out(Algebra::FrakD);
  if (alpha + beta == s - r) add_canon(out, Algebra::FrakD, alpha + beta, -alpha + s, 1);
  if (alpha + beta == r - s) add_canon(out, Algebra::FrakD, alpha + beta, alpha + s, -1);
  if (alpha - beta == s - r) add_canon(out, Algebra::FrakD, alpha - beta, -alpha + s, -1);
  if (alpha - beta == r - s) add_canon(out, Algebra::FrakD, alpha - beta, alpha + s, 1);
  return out;
}

LieElement bracket_D(const LieElement& a, const LieElement& b) {
  require_tags(a, b, Algebra::D, "bracket_D");
  return bilinear(Algebra::D, a, b, [](const LieLabel& x, const LieLabel& y) {
    if (x.kind == LieLabel::Kind::DCentral || y.kind == LieLabel::Kind::DCentral) return LieElement(Algebra::D);
    return cached_bracket(x, y, [&] { return bracket_D_generators(x.a, x.b, y.a, y.b); });
  });
}

LieElement bracket_frakD(const LieElement& a, const LieElement& b) {
  require_tags(a, b, Algebra::FrakD, "bracket_frakD");
  return bilinear(Algebra::FrakD, a, b, [](const LieLabel& x, const LieLabel& y) {
    return cached_bracket(x, y, [&] { return bracket_frakD_generators(x.a, x.b, y.a, y.b); });
  });
}

LieElement bracket_gl(const LieElement& a, const LieElement& b) {
  require_tags(a, b, Algebra::Gl, "bracket_gl");
  return bilinear(Algebra::Gl, a, b, [](const LieLabel& x, const LieLabel& y) {
    // [E_{m,n}, E_{p,q}] = delta_{n,p} E_{m,q} - delta_{q,m} E_{p,n}
    LieElement out(Algebra::Gl);
    if (x.b == y.a) out.add(LieLabel::unit(x.a, y.b), 1);
    if (y.b == x.a) out.add(LieLabel::unit(y.a, x.b), -1);
    return out;
  });
}

LieElement bracket(const LieElement& a, const LieElement& b) {
  if (a.tag() != b.tag()) throw TagMismatch("bracket of elements from different algebras");
  switch (a.tag()) {
    case Algebra::D: return bracket_D(a, b);
    case Algebra::FrakD: return bracket_frakD(a, b);
    case Algebra::Gl: return bracket_gl(a, b);
  }
  return LieElement(a.tag());
}

// ---------------------------------------------------------------------------
// Maps and forms

LieElement tau_map(const LieElement& a) {
  if (a.tag() != Algebra::Gl) throw TagMismatch("tau_map expects an element of Gl");
  LieElement out(Algebra::Gl);
  for (const auto& [x, c] : a.terms()) out.add(LieLabel::unit(x.b, x.a), -c);
  return out;
}

LieElement gtau(int alpha, int m) {
  LieElement out(Algebra::Gl);
  out.add(LieLabel::unit(alpha + m, m - alpha), 1);
  out.add(LieLabel::unit(m - alpha, m + alpha), -1);
  return out;
}

LieElement embed_frakD(const LieElement& a) {
  if (a.tag() != Algebra::FrakD) throw TagMismatch("embed_frakD expects an element of FrakD");
  LieElement out(Algebra::Gl);
  for (const auto& [x, c] : a.terms()) out.add_scaled(gtau(-x.a, x.b), c);
  return out;
}

RatQ pair_form(const LieElement& a, const LieElement& b) {
  if (a.tag() != b.tag()) throw TagMismatch("pair_form of elements from different algebras");
  if (a.tag() == Algebra::D) throw TagMismatch("pair_form is defined on FrakD and Gl only");
  RatQ out;
  for (const auto& [x, cx] : a.terms()) {
    for (const auto& [y, cy] : b.terms()) {
      int value = 0;
      if (a.tag() == Algebra::FrakD) {
        // <d^{a,r}, d^{b,s}> = delta_{r,s}(delta_{a-b,0} - delta_{a+b,0}); labels have a,b >= 1.
        if (x.b == y.b && x.a == y.a) value = 1;
      } else {
        // <E_{m,n}, E_{r,s}> = delta_{m,s} delta_{n,r}
        if (x.a == y.b && x.b == y.a) value = 1;
      }
      if (value != 0) out += cx * cy;
    }
  }
  return out;
}

LieElement sigma_shift(int m, const LieElement& a) {
  if (a.tag() != Algebra::FrakD) throw TagMismatch("sigma_shift expects an element of FrakD");
  LieElement out(Algebra::FrakD);
  for (const auto& [x, c] : a.terms()) out.add(LieLabel::frak(x.a, x.b + m), c);
  return out;
}

Verdict<LieElement> check_jacobi(const LieElement& a, const LieElement& b, const LieElement& c) {
  LieElement residual = bracket(a, bracket(b, c));
  residual += bracket(b, bracket(c, a));
  residual += bracket(c, bracket(a, b));
  return {residual.is_zero(), residual};
}

Verdict<RatQ> check_invariance(const LieElement& a, const LieElement& b, const LieElement& c) {
  RatQ residual = pair_form(bracket(a, b), c) - pair_form(a, bracket(b, c));
  return {residual.is_zero(), residual};
}

// ---------------------------------------------------------------------------
// StructureCache

std::optional<LieElement> StructureCache::lookup(const LieLabel& x, const LieLabel& y) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find({x, y});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void StructureCache::insert(const LieLabel& x, const LieLabel& y, const LieElement& value) {
  std::unique_lock lock(mutex_);
  entries_.try_emplace({x, y}, value);
}

std::size_t StructureCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void StructureCache::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;  // a missing cache file is an empty cache
  nlohmann::json doc = nlohmann::json::parse(in);
  std::unique_lock lock(mutex_);
  for (const auto& [key, value] : doc.at("entries").items()) {
    auto bar = key.find('|');
    if (bar == std::string::npos) throw ParseError("bad cache key \"" + key + "\"");
    LieLabel x = LieLabel::parse(key.substr(0, bar));
    LieLabel y = LieLabel::parse(key.substr(bar + 1));
    entries_.insert_or_assign({x, y}, LieElement::parse(x.algebra(), value.get<std::string>()));
  }
}

void StructureCache::save(const std::string& path) const {
  nlohmann::json entries = nlohmann::json::object();
  {
    std::shared_lock lock(mutex_);
    for (const auto& [key, value] : entries_) {
      entries[key.first.to_string() + "|" + key.second.to_string()] = value.to_string();
    }
  }
  nlohmann::json doc = {{"format", "qvir-structure-cache"}, {"version", 1}, {"entries", entries}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write cache file " + path);
  out << doc.dump(1) << '\n';
}

void set_structure_cache(std::shared_ptr<StructureCache> cache) {
  std::lock_guard lock(g_cache_mutex);
  g_cache = std::move(cache);
  g_cache_enabled.store(g_cache != nullptr, std::memory_order_release);
}

std::shared_ptr<StructureCache> structure_cache() {
  std::lock_guard lock(g_cache_mutex);
  return g_cache;
}

}  // namespace qvir
