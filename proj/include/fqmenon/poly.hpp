#pragma once

// The polynomial ring A = F_q[T].

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fqmenon/errors.hpp"
#include "fqmenon/gf.hpp"

namespace fqmenon {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

// Degree of the zero polynomial.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

class Poly {
 public:
  explicit Poly(FieldPtr field) : field_(std::move(field)) {}
  Poly(FieldPtr field, std::vector<FieldElement> coeffs)
      : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    for (auto c : coeffs_) require(c.code() < field_->order(), "coefficient out of range");
    trim();
  }

  // Coefficients given as element codes, ascending degree.
  static Poly from_codes(FieldPtr field, std::initializer_list<std::uint32_t> codes) {
    std::vector<FieldElement> c;
    for (auto x : codes) c.emplace_back(x);
    return Poly(std::move(field), std::move(c));
  }
  static Poly constant(FieldPtr field, FieldElement c) {
    return Poly(std::move(field), std::vector<FieldElement>{c});
  }
  static Poly one(FieldPtr field) { return constant(std::move(field), FieldElement(1)); }
  // c * T^degree
  static Poly monomial(FieldPtr field, FieldElement c, int degree) {
    std::vector<FieldElement> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    return Poly(std::move(field), std::move(v));
  }
  static Poly t(FieldPtr field) { return monomial(std::move(field), FieldElement(1), 1); }

  // Base-q digits of `index` as coefficients (constant term = lowest digit).
  static Poly from_index(FieldPtr field, std::uint64_t index) {
    const std::uint32_t q = field->order();
    std::vector<FieldElement> c;
    while (index) {
      c.emplace_back(static_cast<std::uint32_t>(index % q));
      index /= q;
    }
    return Poly(std::move(field), std::move(c));
  }
  std::uint64_t to_index() const {
    std::uint64_t index = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      index = index * field_->order() + coeffs_[i].code();
    }
    return index;
  }

  const FieldPtr& field() const { return field_; }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }
  int degree() const {
    return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
  }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  // Nonzero constant.
  bool is_unit() const { return coeffs_.size() == 1; }
  bool is_one() const { return coeffs_.size() == 1 && coeffs_[0].code() == 1; }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back().code() == 1; }
  FieldElement leading() const { return coeffs_.empty() ? FieldElement() : coeffs_.back(); }
  FieldElement coeff(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : FieldElement();
  }

  Poly scaled(FieldElement c) const {
    std::vector<FieldElement> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = field_->mul(coeffs_[i], c);
    return Poly(field_, std::move(out));
  }
  // Monic associate; zero stays zero.
  Poly monic() const {
    if (is_zero() || is_monic()) return *this;
    return scaled(field_->inv(leading()));
  }

  Poly operator-() const {
    std::vector<FieldElement> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = field_->neg(coeffs_[i]);
    return Poly(field_, std::move(out));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    a.check_same_field(b);
    const auto& f = *a.field_;
    std::vector<FieldElement> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.add(a.coeff(i), b.coeff(i));
    return Poly(a.field_, std::move(out));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    a.check_same_field(b);
    const auto& f = *a.field_;
    std::vector<FieldElement> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.sub(a.coeff(i), b.coeff(i));
    return Poly(a.field_, std::move(out));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_same_field(b);
    if (a.is_zero() || b.is_zero()) return Poly(a.field_);
    const auto& f = *a.field_;
    std::vector<FieldElement> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        out[i + j] = f.add(out[i + j], f.mul(a.coeffs_[i], b.coeffs_[j]));
      }
    }
    return Poly(a.field_, std::move(out));
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.field_->same_as(*b.field_) && a.coeffs_ == b.coeffs_;
  }

  void check_same_field(const Poly& other) const {
    if (!field_->same_as(*other.field_)) {
      throw PreconditionError("polynomials over different fields");
    }
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  FieldPtr field_;
  std::vector<FieldElement> coeffs_;
};

// Degree first, then coefficient codes compared from the constant term up.
inline bool canonical_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] != b.coeffs()[i]) return a.coeffs()[i] < b.coeffs()[i];
  }
  return false;
}

struct DivMod {
  Poly quotient;
  Poly remainder;
};

inline DivMod divmod(const Poly& a, const Poly& b) {
  a.check_same_field(b);
  if (b.is_zero()) throw PreconditionError("division by the zero polynomial");
  const auto& field = a.field();
  const auto& f = *field;
  if (a.degree() < b.degree()) return {Poly(field), a};
  std::vector<FieldElement> rem = a.coeffs();
  const std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<FieldElement> quot(rem.size() - db);
  const FieldElement inv_lead = f.inv(b.leading());
  for (std::size_t top = rem.size(); top-- > db;) {
    const FieldElement factor = f.mul(rem[top], inv_lead);
    if (factor.is_zero()) continue;
    const std::size_t shift = top - db;
    quot[shift] = factor;
    for (std::size_t i = 0; i <= db; ++i) {
      rem[shift + i] = f.sub(rem[shift + i], f.mul(factor, b.coeffs()[i]));
    }
  }
  rem.resize(db);
  return {Poly(field, std::move(quot)), Poly(field, std::move(rem))};
}

inline Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).remainder; }

inline bool divides(const Poly& d, const Poly& a) {
  if (d.is_zero()) return a.is_zero();
  return (a % d).is_zero();
}

// a / b, which must divide exactly.
inline Poly exact_quotient(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw PreconditionError("polynomial does not divide exactly");
  return q;
}

// Monic gcd, with gcd(0, H) = monic(H). Both zero is an error.
inline Poly gcd(Poly a, Poly b) {
  a.check_same_field(b);
  if (a.is_zero() && b.is_zero()) throw PreconditionError("gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) throw PreconditionError("lcm of the zero polynomial");
  return exact_quotient(a * b, gcd(a, b)).monic();
}

struct ExtendedGcd {
  Poly gcd;  // monic
  Poly x;    // a*x + b*y = gcd
  Poly y;
};

inline ExtendedGcd extended_gcd(const Poly& a, const Poly& b) {
  const auto& field = a.field();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::one(field), s1(field);
  Poly t0(field), t1 = Poly::one(field);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) throw PreconditionError("gcd(0, 0) is undefined");
  const FieldElement inv = field->inv(r0.leading());
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
inline Poly inverse_mod(const Poly& a, const Poly& m) {
  auto eg = extended_gcd(a % m, m);
  if (!eg.gcd.is_one()) throw PreconditionError("element is not invertible modulo H");
  return eg.x % m;
}

// Unique X with deg X < deg(Π moduli) and X ≡ r_i (mod m_i).
inline Poly crt_solve(std::span<const std::pair<Poly, Poly>> pairs) {
  require(!pairs.empty(), "crt_solve needs at least one congruence");
  const auto& field = pairs.front().first.field();
  Poly x(field);
  Poly modulus = Poly::one(field);
  for (const auto& [residue, m] : pairs) {
    require(m.degree() >= 1, "CRT moduli must have degree at least 1");
    if (!gcd(modulus, m).is_one()) throw PreconditionError("CRT moduli are not pairwise coprime");
    // x' = x + modulus * ((r - x) * modulus^{-1} mod m)
    const Poly step = ((residue - x) * inverse_mod(modulus, m)) % m;
    x = x + modulus * step;
    modulus = modulus * m;
    x = x % modulus;
  }
  return x;
}

inline Poly pow(const Poly& a, unsigned e) {
  Poly out = Poly::one(a.field());
  for (unsigned i = 0; i < e; ++i) out *= a;
  return out;
}

// |H| = q^{deg H}.
inline BigInt abs_value(const Poly& h) {
  require(!h.is_zero(), "absolute value of the zero polynomial");
  return boost::multiprecision::pow(BigInt(h.field()->order()),
                                    static_cast<unsigned>(h.degree()));
}

// All monic polynomials of exact degree d in canonical order.
inline std::vector<Poly> monic_polys(const FieldPtr& field, int d) {
  const std::uint64_t count = saturating_pow(field->order(), static_cast<std::uint64_t>(d));
  std::vector<Poly> out;
  out.reserve(count);
  for (std::uint64_t lo = 0; lo < count; ++lo) {
    // lowest coefficient varies slowest so the order is canonical
    std::vector<FieldElement> c(static_cast<std::size_t>(d) + 1);
    std::uint64_t x = lo;
    for (int i = d - 1; i >= 0; --i) {
      c[static_cast<std::size_t>(i)] = FieldElement(static_cast<std::uint32_t>(x % field->order()));
      x /= field->order();
    }
    c.back() = FieldElement(1);
    out.emplace_back(field, std::move(c));
  }
  return out;
}

inline std::vector<Poly> monic_polys_up_to(const FieldPtr& field, int max_degree) {
  std::vector<Poly> out;
  for (int d = 1; d <= max_degree; ++d) {
    auto v = monic_polys(field, d);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

// Irreducibility by trial division with monic polynomials of degree <= deg/2.
inline bool is_irreducible(const Poly& p) {
  if (p.degree() < 1) return false;
  for (int d = 1; 2 * d <= p.degree(); ++d) {
    for (const auto& g : monic_polys(p.field(), d)) {
      if (divides(g, p)) return false;
    }
  }
  return true;
}

// Monic irreducibles of degree d, sieved: monic polynomials of degree d with
// no monic irreducible factor of degree <= d/2.
inline std::vector<Poly> monic_irreducibles(const FieldPtr& field, int d) {
  std::vector<Poly> smaller;
  for (int e = 1; 2 * e <= d; ++e) {
    auto v = monic_irreducibles(field, e);
    smaller.insert(smaller.end(), v.begin(), v.end());
  }
  std::vector<Poly> out;
  for (auto& candidate : monic_polys(field, d)) {
    bool irreducible = true;
    for (const auto& p : smaller) {
      if (divides(p, candidate)) {
        irreducible = false;
        break;
      }
    }
    if (irreducible) out.push_back(std::move(candidate));
  }
  return out;
}

struct Factorization {
  FieldElement unit;
  std::vector<std::pair<Poly, int>> factors;  // canonical order, distinct

  Poly product(const FieldPtr& field) const {
    Poly out = Poly::constant(field, unit);
    for (const auto& [p, e] : factors) out *= pow(p, static_cast<unsigned>(e));
    return out;
  }
  int valuation(const Poly& p) const {
    for (const auto& [q, e] : factors) {
      if (q == p) return e;
    }
    return 0;
  }
  bool squarefree() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const auto& f) { return f.second == 1; });
  }
};

// Trial division by monic polynomials of increasing degree. Once all factors
// of smaller degree are removed, the first divisor found at each degree is
// irreducible.
inline Factorization factorize(const Poly& h) {
  require(!h.is_zero(), "cannot factor the zero polynomial");
  const auto& field = h.field();
  Factorization out{h.leading(), {}};
  Poly rest = h.monic();
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    for (const auto& p : monic_polys(field, d)) {
      if (2 * d > rest.degree()) break;
      int e = 0;
      while (true) {
        auto [q, r] = divmod(rest, p);
        if (!r.is_zero()) break;
        rest = std::move(q);
        ++e;
      }
      if (e > 0) out.factors.emplace_back(p, e);
    }
  }
  if (rest.degree() >= 1) out.factors.emplace_back(rest, 1);
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
  return out;
}

inline Poly radical(const Factorization& f, const FieldPtr& field) {
  Poly out = Poly::one(field);
  for (const auto& [p, e] : f.factors) out *= p;
  return out;
}

// Monic divisors, canonically ordered; count is Π(α_i + 1).
inline std::vector<Poly> divisors(const Factorization& f, const FieldPtr& field) {
  std::vector<Poly> out{Poly::one(field)};
  for (const auto& [p, e] : f.factors) {
    std::vector<Poly> next;
    for (const auto& d : out) {
      Poly power = d;
      for (int i = 0; i <= e; ++i) {
        next.push_back(power);
        power *= p;
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

inline std::vector<Poly> divisors(const Poly& h) {
  return divisors(factorize(h), h.field());
}

// All residues mod H (polynomials of degree < deg H), canonical order.
inline std::vector<Poly> residues(const Poly& h) {
  require(!h.is_zero() && h.degree() >= 1, "residue enumeration needs deg H >= 1");
  const std::uint64_t count =
      saturating_pow(h.field()->order(), static_cast<std::uint64_t>(h.degree()));
  std::vector<Poly> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(Poly::from_index(h.field(), i));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

inline std::vector<Poly> units(const Poly& h) {
  std::vector<Poly> out;
  for (auto& r : residues(h)) {
    if (!r.is_zero() && gcd(r, h).is_one()) out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format.
//
// Symbolic: "T^2+2*T+1"; coefficients are integers in [0, p) for prime fields
// and bracketed coordinate vectors such as "[0,1]*T+[1,1]" otherwise.
// Coefficient form: "coeffs=[1,2,1]" or "coeffs=[[1,0],[0,1]]", ascending.

inline std::string to_string(const Poly& a) {
  if (a.is_zero()) return "0";
  const auto& f = *a.field();
  std::string out;
  for (int i = a.degree(); i >= 0; --i) {
    const FieldElement c = a.coeff(static_cast<std::size_t>(i));
    if (c.is_zero()) continue;
    if (!out.empty()) out += '+';
    const bool show_coeff = !(c.code() == 1 && i > 0);
    if (show_coeff) {
      out += f.format(c);
      if (i > 0) out += '*';
    }
    if (i >= 1) out += 'T';
    if (i >= 2) out += '^' + std::to_string(i);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& out, const Poly& a) { return out << to_string(a); }

namespace detail {

inline FieldElement parse_coefficient(const Field& f, std::string_view text) {
  if (!text.empty() && text.front() == '[') {
    if (f.degree() == 1) {
      throw ParseError("bracketed coefficient in a prime field: '" + std::string(text) + "'");
    }
    const auto coords = parse_uint_list(text);
    if (coords.size() != f.degree()) {
      throw ParseError("coefficient vector has wrong length: '" + std::string(text) + "'");
    }
    for (auto c : coords) {
      if (c >= f.characteristic()) {
        throw ParseError("coefficient coordinate out of range: '" + std::string(text) + "'");
      }
    }
    return f.from_coords(coords);
  }
  if (f.degree() != 1) {
    throw ParseError("extension-field coefficients must be bracketed: '" + std::string(text) + "'");
  }
  const auto v = parse_uint(text, "coefficient");
  if (v >= f.characteristic()) {
    throw ParseError("coefficient out of range: '" + std::string(text) + "'");
  }
  return FieldElement(v);
}

// Splits "a,b,[c,d]" at top-level commas.
inline std::vector<std::string_view> split_top_level(std::string_view text) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[') ++depth;
    if (text[i] == ']') --depth;
    if (text[i] == ',' && depth == 0) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(text.substr(start));
  return out;
}

}  // namespace detail

inline Poly parse_poly(const FieldPtr& field, std::string_view text) {
  const auto& f = *field;
  if (text.empty()) throw ParseError("empty polynomial");
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      throw ParseError("whitespace is not allowed in polynomials: '" + std::string(text) + "'");
    }
  }
  constexpr std::string_view kCoeffs = "coeffs=";
  if (text.substr(0, kCoeffs.size()) == kCoeffs) {
    auto body = text.substr(kCoeffs.size());
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      throw ParseError("malformed coefficient list: '" + std::string(text) + "'");
    }
    body = body.substr(1, body.size() - 2);
    std::vector<FieldElement> coeffs;
    if (!body.empty()) {
      for (auto item : detail::split_top_level(body)) {
        coeffs.push_back(detail::parse_coefficient(f, item));
      }
    }
    return Poly(field, std::move(coeffs));
  }
  if (text == "0") return Poly(field);

  std::map<int, FieldElement> terms;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    // term ends at the next '+' outside brackets
    std::size_t end = pos;
    int depth = 0;
    while (end < text.size() && !(text[end] == '+' && depth == 0)) {
      if (text[end] == '[') ++depth;
      if (text[end] == ']') --depth;
      ++end;
    }
    const auto term = text.substr(pos, end - pos);
    if (term.empty()) throw ParseError("empty term in '" + std::string(text) + "'");

    FieldElement coeff(1);
    int degree = 0;
    const auto t_pos = term.find('T');
    if (t_pos == std::string_view::npos) {
      coeff = detail::parse_coefficient(f, term);
    } else {
      if (t_pos > 0) {
        if (t_pos < 2 || term[t_pos - 1] != '*') {
          throw ParseError("expected '*' before T in '" + std::string(term) + "'");
        }
        coeff = detail::parse_coefficient(f, term.substr(0, t_pos - 1));
      }
      const auto rest = term.substr(t_pos + 1);
      if (rest.empty()) {
        degree = 1;
      } else {
        if (rest.front() != '^') throw ParseError("malformed term '" + std::string(term) + "'");
        degree = static_cast<int>(detail::parse_uint(rest.substr(1), "exponent"));
      }
    }
    if (coeff.is_zero()) throw ParseError("zero coefficient in term '" + std::string(term) + "'");
    if (!terms.emplace(degree, coeff).second) {
      throw ParseError("repeated degree " + std::to_string(degree) + " in '" + std::string(text) + "'");
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  std::vector<FieldElement> coeffs(static_cast<std::size_t>(terms.rbegin()->first) + 1);
  for (const auto& [d, c] : terms) coeffs[static_cast<std::size_t>(d)] = c;
  return Poly(field, std::move(coeffs));
}

inline std::string to_string(const Factorization& fac, const Field& field) {
  std::string out;
  if (fac.unit.code() != 1 || fac.factors.empty()) out = field.format(fac.unit);
  for (const auto& [p, e] : fac.factors) {
    if (!out.empty()) out += " * ";
    out += "(" + to_string(p) + ")";
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

}  // namespace fqmenon
