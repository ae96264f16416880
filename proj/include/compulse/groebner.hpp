// Copyright 2026 The Compulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact polynomial systems in t_1..t_m over Q(g), where g stands for the
// target ratio gamma, and Buchberger's algorithm under lex order with
// t_m > ... > t_1.

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "compulse/common.hpp"
#include "compulse/phase_algebra.hpp"
#include "compulse/polyroots.hpp"

namespace compulse {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Dense univariate polynomial over Q, lowest power first, no trailing zeros.
class UPoly {
 public:
  UPoly() = default;
  UPoly(const Rational& constant) {  // NOLINT(google-explicit-constructor)
    if (constant != 0) c_.push_back(constant);
  }
  UPoly(int constant) : UPoly(Rational(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit UPoly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

  static UPoly variable() { return UPoly(std::vector<Rational>{0, 1}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coefficient(int i) const { return i < static_cast<int>(c_.size()) ? c_[i] : Rational(0); }
  const Rational& lead() const { return c_.back(); }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coefficient(int(i)) + b.coefficient(int(i));
    return UPoly(std::move(out));
  }
  friend UPoly operator-(const UPoly& a) {
    UPoly out(a);
    for (auto& v : out.c_) v = -v;
    return out;
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return UPoly(std::move(out));
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// a = q b + r with deg r < deg b.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    require(!b.is_zero(), "polynomial division by zero");
    std::vector<Rational> q(std::max(0, a.degree() - b.degree() + 1));
    std::vector<Rational> r = a.c_;
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
      const Rational factor = r[k + b.degree()] / b.lead();
      q[k] = factor;
      if (factor == 0) continue;
      for (int i = 0; i <= b.degree(); ++i) r[k + i] -= factor * b.c_[i];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
  }

  UPoly monic() const {
    if (is_zero()) return {};
    UPoly out(*this);
    const Rational l = lead();
    for (auto& v : out.c_) v /= l;
    return out;
  }

  friend UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
      UPoly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  double evaluate(double x) const {
    double v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + it->convert_to<double>();
    return v;
  }

  Rational evaluate(const Rational& x) const {
    Rational v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Element of Q(g): coprime numerator and monic denominator.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(const UPoly& num) : num_(num), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(int c) : RationalFunction(UPoly(c)) {}     // NOLINT(google-explicit-constructor)
  RationalFunction(const Rational& c) : RationalFunction(UPoly(c)) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(UPoly num, UPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  const UPoly& numerator() const { return num_; }
  const UPoly& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunction operator-(const RationalFunction& a) { return {-a.num_, a.den_}; }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    require(!b.is_zero(), "rational function division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  double evaluate(double g) const { return num_.evaluate(g) / den_.evaluate(g); }

 private:
  void normalize() {
    require(!den_.is_zero(), "rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = UPoly(1);
      return;
    }
    const UPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = UPoly::divmod(num_, g).first;
      den_ = UPoly::divmod(den_, g).first;
    }
    const Rational l = den_.lead();
    if (l != 1) {
      num_ = num_ * UPoly(1 / l);
      den_ = den_ * UPoly(1 / l);
    }
  }

  UPoly num_;
  UPoly den_;
};

/// Exponents of t_1..t_m, index 0 is t_1.
using Monomial = std::vector<int>;

/// Lex order with the last variable most significant.
struct LexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] > b[i];
    return false;
  }
};

inline bool lex_greater(const Monomial& a, const Monomial& b) { return LexGreater{}(a, b); }

inline bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Monomial monomial_lcm(const Monomial& a, const Monomial& b) {
  Monomial out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

inline int total_degree(const Monomial& a) {
  int d = 0;
  for (int e : a) d += e;
  return d;
}

class MultiPoly {
 public:
  using Terms = std::map<Monomial, RationalFunction, LexGreater>;

  MultiPoly() = default;
  explicit MultiPoly(int variables) : nvars_(variables) {}

  static MultiPoly constant(int variables, const RationalFunction& c) {
    MultiPoly p(variables);
    p.add_term(Monomial(variables, 0), c);
    return p;
  }
  static MultiPoly variable(int variables, int index) {
    MultiPoly p(variables);
    Monomial m(variables, 0);
    m.at(index) = 1;
    p.add_term(m, RationalFunction(1));
    return p;
  }

  int variables() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const RationalFunction& c) {
    require(static_cast<int>(m.size()) == nvars_, "monomial arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  const Monomial& leading_monomial() const {
    require(!is_zero(), "leading monomial of zero polynomial");
    return terms_.begin()->first;
  }
  const RationalFunction& leading_coefficient() const {
    require(!is_zero(), "leading coefficient of zero polynomial");
    return terms_.begin()->second;
  }

  /// Highest variable index present, or -1 for constants.
  int main_variable() const {
    int v = -1;
    for (const auto& [m, c] : terms_)
      for (int i = nvars_ - 1; i > v; --i)
        if (m[i] > 0) v = i;
    return v;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out(a);
    for (const auto& [m, c] : b.terms_) out.add_term(m, c);
    return out;
  }
  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly out(a.nvars_);
    for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, -c);
    return out;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out(a);
    for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
    return out;
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(ma);
        for (int i = 0; i < a.nvars_; ++i) m[i] += mb[i];
        out.add_term(m, ca * cb);
      }
    return out;
  }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  MultiPoly times_term(const Monomial& m, const RationalFunction& c) const {
    MultiPoly out(nvars_);
    for (const auto& [mi, ci] : terms_) {
      Monomial s(mi);
      for (int i = 0; i < nvars_; ++i) s[i] += m[i];
      out.terms_.emplace(std::move(s), ci * c);
    }
    return out;
  }

  MultiPoly scaled(const RationalFunction& c) const { return times_term(Monomial(nvars_, 0), c); }

  MultiPoly make_monic() const {
    if (is_zero()) return *this;
    return scaled(RationalFunction(1) / leading_coefficient());
  }

  /// Numeric value at gamma and t.
  double evaluate(double gamma, std::span<const double> t) const {
    double v = 0;
    for (const auto& [m, c] : terms_) {
      double term = c.evaluate(gamma);
      for (int i = 0; i < nvars_; ++i) term *= std::pow(t[i], m[i]);
      v += term;
    }
    return v;
  }

 private:
  int nvars_ = 0;
  Terms terms_;
};

/// Generators over a shared variable set, plus the spurious factors that
/// clearing denominators introduced.
struct PolySystem {
  int variables = 0;
  std::vector<MultiPoly> polys;
  std::vector<MultiPoly> spurious;
};

// ---------------------------------------------------------------------------
// Text dump: monomials in order, coefficients as (num)/(den) with integer
// coefficients in g.

namespace detail {

inline std::string integer_poly_string(const std::vector<BigInt>& c) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    BigInt v = c[i];
    if (first) {
      if (v < 0) {
        os << "-";
        v = -v;
      }
    } else {
      os << (v < 0 ? " - " : " + ");
      if (v < 0) v = -v;
    }
    if (i == 0 || v != 1) os << v;
    if (i > 0) {
      if (v != 1) os << "*";
      os << "g";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

inline std::string monomial_string(const Monomial& m) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = m.size(); i-- > 0;) {
    if (m[i] == 0) continue;
    if (!first) os << "*";
    os << "t" << (i + 1);
    if (m[i] > 1) os << "^" << m[i];
    first = false;
  }
  return first ? "1" : os.str();
}

}  // namespace detail

/// (num)/(den) with num, den scaled to coprime integer coefficients.
inline std::string to_string(const RationalFunction& r) {
  BigInt scale = 1;
  auto collect = [&](const UPoly& p) {
    for (const auto& v : p.coefficients()) scale = boost::multiprecision::lcm(scale, denominator(v));
  };
  collect(r.numerator());
  collect(r.denominator());
  auto to_int = [&](const UPoly& p) {
    std::vector<BigInt> out;
    for (const auto& v : p.coefficients()) out.push_back(numerator(v) * (scale / denominator(v)));
    return out;
  };
  auto n = to_int(r.numerator());
  auto d = to_int(r.denominator());
  BigInt content = 0;
  for (const auto& v : n) content = boost::multiprecision::gcd(content, v);
  for (const auto& v : d) content = boost::multiprecision::gcd(content, v);
  if (content > 1) {
    for (auto& v : n) v /= content;
    for (auto& v : d) v /= content;
  }
  return "(" + detail::integer_poly_string(n) + ")/(" + detail::integer_poly_string(d) + ")";
}

inline std::string to_string(const MultiPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) os << " + ";
    os << to_string(c) << "*" << detail::monomial_string(m);
    first = false;
  }
  return os.str();
}

inline std::string to_string(const PolySystem& s) {
  std::ostringstream os;
  for (const auto& p : s.polys) os << to_string(p) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Buchberger machinery.

inline MultiPoly spol(const MultiPoly& f, const MultiPoly& g) {
  require(f.variables() == g.variables(), "spol: variable sets differ");
  if (f.is_zero() || g.is_zero()) return MultiPoly(f.variables());
  const Monomial l = monomial_lcm(f.leading_monomial(), g.leading_monomial());
  auto shift = [&](const Monomial& m) {
    Monomial s(l);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= m[i];
    return s;
  };
  const RationalFunction one(1);
  return f.times_term(shift(f.leading_monomial()), one / f.leading_coefficient()) -
         g.times_term(shift(g.leading_monomial()), one / g.leading_coefficient());
}

/// Remainder of multivariate division by `divisors`, tried in listed order.
inline MultiPoly reduce(const MultiPoly& f, const std::vector<MultiPoly>& divisors) {
  MultiPoly p(f);
  MultiPoly remainder(f.variables());
  while (!p.is_zero()) {
    const Monomial lm = p.leading_monomial();
    const RationalFunction lc = p.leading_coefficient();
    bool divided = false;
    for (const auto& g : divisors) {
      if (g.is_zero() || !divides(g.leading_monomial(), lm)) continue;
      Monomial shift(lm);
      for (std::size_t i = 0; i < shift.size(); ++i) shift[i] -= g.leading_monomial()[i];
      p = p - g.times_term(shift, lc / g.leading_coefficient());
      divided = true;
      break;
    }
    if (!divided) {
      remainder.add_term(lm, lc);
      MultiPoly lead(f.variables());
      lead.add_term(lm, lc);
      p = p - lead;
    }
  }
  return remainder;
}

struct BuchbergerOptions {
  std::size_t max_pairs = 20000;
  bool coprime_criterion = true;
};

/// Normal selection strategy: smallest lcm total degree first, ties broken
/// by insertion order.
inline PolySystem buchberger(const PolySystem& input, const BuchbergerOptions& opt = {}) {
  require(!input.polys.empty(), "buchberger: empty system");
  PolySystem out{input.variables, {}, input.spurious};
  for (const auto& p : input.polys)
    if (!p.is_zero()) out.polys.push_back(p);
  struct Pair {
    std::size_t i, j;
    int degree;
    std::size_t serial;
  };
  std::vector<Pair> pairs;
  std::size_t serial = 0;
  auto push_pairs = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i)
      pairs.push_back(
          {i, j, total_degree(monomial_lcm(out.polys[i].leading_monomial(), out.polys[j].leading_monomial())),
           serial++});
  };
  for (std::size_t j = 1; j < out.polys.size(); ++j) push_pairs(j);
  std::size_t processed = 0;
  while (!pairs.empty()) {
    if (++processed > opt.max_pairs) throw resource_limit_error("buchberger: pair limit exceeded");
    auto best = std::min_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      return a.degree != b.degree ? a.degree < b.degree : a.serial < b.serial;
    });
    const Pair pair = *best;
    pairs.erase(best);
    const MultiPoly& a = out.polys[pair.i];
    const MultiPoly& b = out.polys[pair.j];
    if (opt.coprime_criterion &&
        monomial_lcm(a.leading_monomial(), b.leading_monomial()) == [&] {
          Monomial s(a.leading_monomial());
          for (std::size_t k = 0; k < s.size(); ++k) s[k] += b.leading_monomial()[k];
          return s;
        }())
      continue;
    MultiPoly h = reduce(spol(a, b), out.polys);
    if (h.is_zero()) continue;
    out.polys.push_back(std::move(h));
    push_pairs(out.polys.size() - 1);
  }
  return out;
}

/// Definition check: every S-polynomial reduces to zero.
inline bool is_groebner_basis(const PolySystem& g) {
  for (std::size_t i = 0; i < g.polys.size(); ++i)
    for (std::size_t j = i + 1; j < g.polys.size(); ++j)
      if (!reduce(spol(g.polys[i], g.polys[j]), g.polys).is_zero()) return false;
  return true;
}

/// Repeats g <- RED(g, G - {g}) until nothing changes; drops zeros and makes
/// leading coefficients 1. Output sorted by leading monomial, smallest first.
inline PolySystem reduce_basis(const PolySystem& g) {
  PolySystem out{g.variables, {}, g.spurious};
  for (const auto& p : g.polys)
    if (!p.is_zero()) out.polys.push_back(p.make_monic());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < out.polys.size(); ++k) {
      std::vector<MultiPoly> others;
      for (std::size_t i = 0; i < out.polys.size(); ++i)
        if (i != k) others.push_back(out.polys[i]);
      MultiPoly r = reduce(out.polys[k], others);
      if (r.is_zero()) {
        out.polys.erase(out.polys.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
      r = r.make_monic();
      if (!(r == out.polys[k])) {
        out.polys[k] = std::move(r);
        changed = true;
      }
    }
  }
  std::sort(out.polys.begin(), out.polys.end(),
            [](const MultiPoly& a, const MultiPoly& b) { return lex_greater(b.leading_monomial(), a.leading_monomial()); });
  return out;
}

/// Exact quotient f / d, or nothing when d does not divide f.
inline std::optional<MultiPoly> exact_divide(const MultiPoly& f, const MultiPoly& d) {
  require(!d.is_zero(), "exact_divide: zero divisor");
  MultiPoly p(f);
  MultiPoly q(f.variables());
  while (!p.is_zero()) {
    const Monomial& lm = p.leading_monomial();
    if (!divides(d.leading_monomial(), lm)) return std::nullopt;
    Monomial shift(lm);
    for (std::size_t i = 0; i < shift.size(); ++i) shift[i] -= d.leading_monomial()[i];
    const RationalFunction c = p.leading_coefficient() / d.leading_coefficient();
    q.add_term(shift, c);
    p = p - d.times_term(shift, c);
  }
  return q;
}

/// Strips every listed factor from any generator it divides exactly, then
/// recompletes and reduces, until no factor divides any generator.
inline PolySystem saturate(const PolySystem& g, const std::vector<MultiPoly>& factors,
                           const BuchbergerOptions& opt = {}) {
  PolySystem current = reduce_basis(g);
  for (int round = 0; round < 64; ++round) {
    bool stripped = false;
    for (auto& p : current.polys) {
      for (const auto& f : factors) {
        while (true) {
          if (p.main_variable() < 0) break;
          auto q = exact_divide(p, f);
          if (!q) break;
          p = std::move(*q);
          stripped = true;
        }
      }
    }
    if (!stripped) return current;
    current = reduce_basis(buchberger(current, opt));
  }
  throw resource_limit_error("saturate: did not stabilize");
}

// ---------------------------------------------------------------------------
// Trigonometric constraints to polynomials.

namespace detail {

// Gaussian rational polynomial in t_1..t_m as a (real, imaginary) pair.
struct ComplexPoly {
  MultiPoly re, im;
};

inline ComplexPoly complex_product(const ComplexPoly& a, const ComplexPoly& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// (1 + i t_k)^p (1 - i t_k)^q
inline ComplexPoly weierstrass_factor(int variables, int k, int p, int q) {
  const MultiPoly one = MultiPoly::constant(variables, 1);
  const MultiPoly zero(variables);
  const MultiPoly t = MultiPoly::variable(variables, k);
  ComplexPoly out{one, zero};
  const ComplexPoly plus{one, t};
  const ComplexPoly minus{one, -t};
  for (int i = 0; i < p; ++i) out = complex_product(out, plus);
  for (int i = 0; i < q; ++i) out = complex_product(out, minus);
  return out;
}

inline MultiPoly one_plus_square(int variables, int k) {
  const MultiPoly t = MultiPoly::variable(variables, k);
  return MultiPoly::constant(variables, 1) + t * t;
}

// Phase sums of a symmetric sequence as integer combinations of
// exp(i a . phi_half).
inline std::vector<std::map<std::vector<int>, long long>> symbolic_phase_sums(int half, Symmetry tag, int jmax) {
  const int length = 2 * half;
  std::vector<std::map<std::vector<int>, long long>> table(static_cast<std::size_t>(jmax) + 1);
  table[0][std::vector<int>(half, 0)] = 1;
  for (int p = 0; p < length; ++p) {
    const int var = p < half ? p : length - 1 - p;
    const int base_sign = (p < half || tag == Symmetry::palindromic) ? 1 : -1;
    for (int j = std::min(jmax, p + 1); j >= 1; --j) {
      const int sign = base_sign * ((j % 2) ? 1 : -1);
      for (const auto& [a, count] : table[j - 1]) {
        std::vector<int> b(a);
        b[var] += sign;
        table[j][b] += count;
      }
    }
  }
  return table;
}

// Divides out the content so coefficients in g share no rational factor.
inline MultiPoly primitive(const MultiPoly& p) {
  if (p.is_zero()) return p;
  BigInt num_gcd = 0, den_lcm = 1;
  for (const auto& [m, c] : p.terms()) {
    require(c.denominator().degree() == 0, "primitive: expected polynomial coefficients");
    for (const auto& v : c.numerator().coefficients()) {
      num_gcd = boost::multiprecision::gcd(num_gcd, numerator(v));
      den_lcm = boost::multiprecision::lcm(den_lcm, denominator(v));
    }
  }
  return p.scaled(RationalFunction(Rational(den_lcm, num_gcd)));
}

}  // namespace detail

/// Weierstrass form of the AP/PD 2pi system on the half list: cos and sin of
/// each phase become rational in t_k = tan(phi_k/2), and each row is
/// multiplied through by prod_k (1 + t_k^2)^{d_k}.
inline PolySystem weierstrass_system(const ConstraintSpec& spec) {
  spec.validate();
  require(spec.family == PulseFamily::two_pi && spec.symmetry != Symmetry::none,
          "weierstrass_system: needs an AP or PD 2pi-pulse spec");
  require(spec.order >= 1 && spec.order <= 4, "weierstrass_system: supported for n <= 4");
  require(spec.length == 2 * spec.order, "weierstrass_system: expects L = 2n");
  const int m = spec.length / 2;
  const auto sums = detail::symbolic_phase_sums(m, spec.symmetry, spec.order);
  PolySystem out;
  out.variables = m;
  for (int k = 0; k < m; ++k) out.spurious.push_back(detail::one_plus_square(m, k));

  detail::for_each_row(spec, [&](int j, bool real_part) {
    std::vector<int> d(m, 0);
    for (const auto& [a, count] : sums[j])
      for (int k = 0; k < m; ++k) d[k] = std::max(d[k], std::abs(a[k]));
    detail::ComplexPoly total{MultiPoly(m), MultiPoly(m)};
    for (const auto& [a, count] : sums[j]) {
      if (count == 0) continue;
      detail::ComplexPoly term{MultiPoly::constant(m, Rational(count)), MultiPoly(m)};
      for (int k = 0; k < m; ++k)
        term = detail::complex_product(term, detail::weierstrass_factor(m, k, d[k] + a[k], d[k] - a[k]));
      total.re = total.re + term.re;
      total.im = total.im + term.im;
    }
    MultiPoly row = real_part ? total.re : total.im;
    if (real_part) {
      const UPoly f(ml_poly_coefficients<Rational>(spec.length, j));
      MultiPoly clearing = MultiPoly::constant(m, 1);
      for (int k = 0; k < m; ++k)
        for (int e = 0; e < d[k]; ++e) clearing = clearing * out.spurious[k];
      row = row - clearing.scaled(RationalFunction(f));
    }
    for (int k = 0; k < m; ++k)
      while (!row.is_zero()) {
        auto q = exact_divide(row, out.spurious[k]);
        if (!q) break;
        row = std::move(*q);
      }
    if (!row.is_zero()) out.polys.push_back(detail::primitive(row));
  });
  return out;
}

/// Real roots of a triangular (lex) basis at a numeric gamma, solved one
/// variable at a time from t_1 upward.
inline std::vector<std::vector<double>> real_roots_triangular(const PolySystem& g, double gamma,
                                                              double tolerance = 1e-8) {
  const int m = g.variables;
  std::vector<std::vector<const MultiPoly*>> by_var(static_cast<std::size_t>(m));
  for (const auto& p : g.polys) {
    const int v = p.main_variable();
    if (v < 0) return {};  // a nonzero constant: no roots
    by_var[v].push_back(&p);
  }
  std::vector<std::vector<double>> partial{{}};
  for (int k = 0; k < m; ++k) {
    require(!by_var[k].empty(), "real_roots_triangular: basis is not zero-dimensional in t" + std::to_string(k + 1));
    std::vector<std::vector<double>> next;
    for (const auto& known : partial) {
      // Univariate coefficients in t_k of each polynomial at the known values.
      std::vector<std::vector<double>> uni;
      for (const MultiPoly* p : by_var[k]) {
        std::vector<double> c;
        for (const auto& [mono, coef] : p->terms()) {
          double v = coef.evaluate(gamma);
          for (int i = 0; i < k; ++i) v *= std::pow(known[i], mono[i]);
          const auto e = static_cast<std::size_t>(mono[k]);
          if (c.size() <= e) c.resize(e + 1, 0.0);
          c[e] += v;
        }
        uni.push_back(std::move(c));
      }
      std::sort(uni.begin(), uni.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
      const std::vector<double>* pivot = nullptr;
      for (const auto& c : uni) {
        double s = 0;
        for (double v : c) s = std::max(s, std::abs(v));
        if (s > tolerance && c.size() > 1) {
          pivot = &c;
          break;
        }
      }
      if (!pivot) continue;
      for (double r : real_polynomial_roots(*pivot).roots) {
        bool ok = true;
        for (const auto& c : uni) {
          double v = 0, scale = 0, pw = 1;
          for (double ci : c) {
            v += ci * pw;
            scale += std::abs(ci * pw);
            pw *= r;
          }
          if (std::abs(v) > tolerance * std::max(1.0, scale)) ok = false;
        }
        if (!ok) continue;
        auto extended = known;
        extended.push_back(r);
        next.push_back(std::move(extended));
      }
    }
    partial = std::move(next);
  }
  return partial;
}

}  // namespace compulse
