#pragma once

// Scalar values: exact integers, integer multiples of roots of unity, and
// complex floating values; plus exact sums in Z[ζ_m].

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "fqmenon/poly.hpp"

namespace fqmenon {

using Complex = std::complex<double>;

// ζ_order^exponent, kept in lowest terms (exponent 0 has order 1).
class RootOfUnity {
 public:
  RootOfUnity() = default;
  RootOfUnity(std::uint64_t order, std::int64_t exponent) {
    require(order >= 1, "root of unity order must be positive");
    std::int64_t e = exponent % static_cast<std::int64_t>(order);
    if (e < 0) e += static_cast<std::int64_t>(order);
    const std::uint64_t g = std::gcd(order, static_cast<std::uint64_t>(e));
    order_ = order / g;
    exponent_ = static_cast<std::uint64_t>(e) / g;
  }

  std::uint64_t order() const { return order_; }
  std::uint64_t exponent() const { return exponent_; }
  bool is_one() const { return order_ == 1; }
  bool is_rational() const { return order_ <= 2; }
  // +1 or -1 for rational roots.
  int sign() const { return order_ == 2 ? -1 : 1; }

  // exponent as a multiple of ζ_m for m a multiple of order()
  std::uint64_t exponent_in(std::uint64_t m) const {
    require(m % order_ == 0, "root of unity order does not divide m");
    return exponent_ * (m / order_);
  }

  Complex to_complex() const {
    if (order_ == 1) return {1.0, 0.0};
    if (order_ == 2) return {-1.0, 0.0};
    const long double angle =
        2.0L * std::numbers::pi_v<long double> * static_cast<long double>(exponent_) /
        static_cast<long double>(order_);
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }

  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
    const std::uint64_t m = std::lcm(a.order_, b.order_);
    return RootOfUnity(m, static_cast<std::int64_t>((a.exponent_in(m) + b.exponent_in(m)) % m));
  }
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;

  std::string to_string() const {
    if (order_ == 1) return "1";
    if (order_ == 2) return "-1";
    return "zeta" + std::to_string(order_) + "^" + std::to_string(exponent_);
  }

 private:
  std::uint64_t order_ = 1;
  std::uint64_t exponent_ = 0;
};

// coefficient · root
struct RootMultiple {
  BigInt coefficient;
  RootOfUnity root;
};

// Values of arithmetical functions, characters and identity sums.
class ScalarValue {
 public:
  ScalarValue() : value_(BigInt(0)) {}
  ScalarValue(BigInt v) : value_(std::move(v)) {}
  ScalarValue(int v) : value_(BigInt(v)) {}
  ScalarValue(std::int64_t v) : value_(BigInt(v)) {}
  ScalarValue(RootOfUnity r) : ScalarValue(RootMultiple{1, r}) {}
  ScalarValue(RootMultiple m) {
    if (m.coefficient == 0) {
      value_ = BigInt(0);
    } else if (m.root.is_rational()) {
      value_ = BigInt(m.coefficient * m.root.sign());
    } else {
      // Positive coefficient, so that equal values share one representation.
      if (m.coefficient < 0) {
        m.coefficient = -m.coefficient;
        m.root = m.root * RootOfUnity(2, 1);
      }
      value_ = std::move(m);
    }
  }
  ScalarValue(Complex c) : value_(c) {}

  bool is_integer() const { return std::holds_alternative<BigInt>(value_); }
  bool is_root_multiple() const { return std::holds_alternative<RootMultiple>(value_); }
  bool is_exact() const { return !std::holds_alternative<Complex>(value_); }
  const BigInt& integer() const { return std::get<BigInt>(value_); }
  const RootMultiple& root_multiple() const { return std::get<RootMultiple>(value_); }

  Complex to_complex() const {
    if (const auto* i = std::get_if<BigInt>(&value_)) return {i->convert_to<double>(), 0.0};
    if (const auto* r = std::get_if<RootMultiple>(&value_)) {
      return r->coefficient.convert_to<double>() * r->root.to_complex();
    }
    return std::get<Complex>(value_);
  }

  friend ScalarValue operator*(const ScalarValue& a, const ScalarValue& b) {
    if (a.is_exact() && b.is_exact()) {
      const RootMultiple x = a.as_root_multiple(), y = b.as_root_multiple();
      return RootMultiple{x.coefficient * y.coefficient, x.root * y.root};
    }
    return a.to_complex() * b.to_complex();
  }
  friend ScalarValue operator+(const ScalarValue& a, const ScalarValue& b) {
    if (a.is_integer() && b.is_integer()) return a.integer() + b.integer();
    if (a.is_exact() && b.is_exact()) {
      const RootMultiple x = a.as_root_multiple(), y = b.as_root_multiple();
      if (x.root == y.root) return RootMultiple{x.coefficient + y.coefficient, x.root};
      if (x.coefficient == 0) return b;
      if (y.coefficient == 0) return a;
    }
    return a.to_complex() + b.to_complex();
  }
  // Exact kinds compare exactly; anything else compares as complex doubles.
  friend bool operator==(const ScalarValue& a, const ScalarValue& b) {
    if (a.is_exact() && b.is_exact()) {
      const RootMultiple x = a.as_root_multiple(), y = b.as_root_multiple();
      if (x.coefficient == 0 || y.coefficient == 0) return x.coefficient == y.coefficient;
      return x.coefficient == y.coefficient && x.root == y.root;
    }
    return a.to_complex() == b.to_complex();
  }

  std::string to_string() const {
    if (const auto* i = std::get_if<BigInt>(&value_)) return i->str();
    if (const auto* r = std::get_if<RootMultiple>(&value_)) {
      return r->coefficient.str() + "*" + r->root.to_string();
    }
    const auto c = std::get<Complex>(value_);
    return "(" + std::to_string(c.real()) + "," + std::to_string(c.imag()) + ")";
  }

 private:
  RootMultiple as_root_multiple() const {
    if (const auto* i = std::get_if<BigInt>(&value_)) return {*i, RootOfUnity()};
    return std::get<RootMultiple>(value_);
  }

  std::variant<BigInt, RootMultiple, Complex> value_;
};

inline std::ostream& operator<<(std::ostream& out, const ScalarValue& v) { return out << v.to_string(); }

namespace detail {

inline int integer_moebius(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    n /= d;
    if (n % d == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

}  // namespace detail

// Φ_m(x) over Z, coefficients ascending: Π_{d|m} (x^d - 1)^{μ(m/d)}.
inline std::vector<BigInt> cyclotomic_polynomial(std::uint64_t m) {
  require(m >= 1, "cyclotomic index must be positive");
  std::vector<BigInt> poly{1};
  std::vector<std::uint64_t> divide_by;
  for (std::uint64_t d = 1; d <= m; ++d) {
    if (m % d) continue;
    const int mu = detail::integer_moebius(m / d);
    if (mu == 1) {
      // multiply by x^d - 1
      std::vector<BigInt> out(poly.size() + d, 0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        out[i + d] += poly[i];
        out[i] -= poly[i];
      }
      poly = std::move(out);
    } else if (mu == -1) {
      divide_by.push_back(d);
    }
  }
  for (const std::uint64_t d : divide_by) {
    // exact division by x^d - 1, from the top coefficient down
    std::vector<BigInt> quot(poly.size() - d, 0);
    std::vector<BigInt> rem = poly;
    for (std::size_t top = rem.size() - 1; top >= d; --top) {
      const BigInt c = rem[top];
      quot[top - d] = c;
      rem[top] -= c;
      rem[top - d] += c;
    }
    poly = std::move(quot);
  }
  return poly;
}

// Σ c_k ζ_m^k with integer c_k, compared exactly by reducing modulo Φ_m.
class CyclotomicSum {
 public:
  explicit CyclotomicSum(std::uint64_t order = 1) : order_(order), coeffs_(order, 0) {
    require(order >= 1, "cyclotomic order must be positive");
  }
  CyclotomicSum(std::uint64_t order, std::vector<BigInt> coeffs)
      : order_(order), coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == order_, "coefficient count must equal the order");
  }

  std::uint64_t order() const { return order_; }
  const std::vector<BigInt>& coefficients() const { return coeffs_; }

  void add(std::uint64_t exponent, const BigInt& c) { coeffs_[exponent % order_] += c; }
  void add(const RootOfUnity& root, const BigInt& c) {
    const std::uint64_t m = std::lcm(order_, root.order());
    if (m != order_) lift_to(m);
    add(root.exponent_in(order_), c);
  }

  // Coordinates in the basis 1, ζ, ..., ζ^{φ(m)-1}; unique per element.
  std::vector<BigInt> reduced() const {
    const auto phi_m = cyclotomic_polynomial(order_);
    std::vector<BigInt> r = coeffs_;
    const std::size_t deg = phi_m.size() - 1;
    for (std::size_t top = r.size(); top-- > deg;) {
      const BigInt c = r[top];
      if (c == 0) continue;
      const std::size_t shift = top - deg;
      for (std::size_t i = 0; i <= deg; ++i) r[shift + i] -= c * phi_m[i];
    }
    r.resize(deg);
    return r;
  }

  bool is_zero() const {
    for (const auto& c : reduced()) {
      if (c != 0) return false;
    }
    return true;
  }

  // The integer value when the element is rational.
  std::optional<BigInt> rational_value() const {
    const auto r = reduced();
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (r[i] != 0) return std::nullopt;
    }
    return r.empty() ? BigInt(0) : r[0];
  }

  Complex to_complex() const {
    long double re = 0, im = 0;
    for (std::uint64_t k = 0; k < order_; ++k) {
      if (coeffs_[k] == 0) continue;
      const long double c = coeffs_[k].convert_to<long double>();
      const long double angle = 2.0L * std::numbers::pi_v<long double> *
                                static_cast<long double>(k) / static_cast<long double>(order_);
      re += c * std::cos(angle);
      im += c * std::sin(angle);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  ScalarValue to_scalar() const {
    if (auto v = rational_value()) return *v;
    return to_complex();
  }

  friend CyclotomicSum operator-(CyclotomicSum a, const CyclotomicSum& b) {
    const std::uint64_t m = std::lcm(a.order_, b.order_);
    a.lift_to(m);
    CyclotomicSum bb = b;
    bb.lift_to(m);
    for (std::uint64_t k = 0; k < m; ++k) a.coeffs_[k] -= bb.coeffs_[k];
    return a;
  }

  friend bool exactly_equal(const CyclotomicSum& a, const CyclotomicSum& b) {
    return (a - b).is_zero();
  }

  // "zeta<m>:[c0,c1,...]" in the reduced basis.
  std::string to_string() const {
    if (auto v = rational_value()) return v->str();
    std::string out = "zeta" + std::to_string(order_) + ":[";
    const auto r = reduced();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i].str();
    }
    return out + "]";
  }

 private:
  void lift_to(std::uint64_t m) {
    if (m == order_) return;
    std::vector<BigInt> out(m, 0);
    const std::uint64_t scale = m / order_;
    for (std::uint64_t k = 0; k < order_; ++k) out[k * scale] = coeffs_[k];
    coeffs_ = std::move(out);
    order_ = m;
  }

  std::uint64_t order_;
  std::vector<BigInt> coeffs_;
};

// An exact closed-form value: rational coefficient times a root of unity.
struct ExactValue {
  Rational coefficient;
  RootOfUnity root;

  bool is_zero() const { return coefficient == 0; }
  bool is_rational() const { return coefficient == 0 || root.is_rational(); }

  Complex to_complex() const {
    return coefficient.convert_to<double>() * root.to_complex();
  }

  // Integral values become exact scalars; a non-integral coefficient can only
  // be represented approximately.
  ScalarValue to_scalar() const {
    if (boost::multiprecision::denominator(coefficient) == 1) {
      return RootMultiple{boost::multiprecision::numerator(coefficient), root};
    }
    return to_complex();
  }

  std::string to_string() const {
    const std::string c = coefficient.str();
    if (root.is_one() || coefficient == 0) return c;
    if (root.order() == 2) return Rational(-coefficient).str();
    return c + "*" + root.to_string();
  }
};

// An algebraic integer in Z[ζ] equals r·ζ^k only if r is an integer.
inline bool exactly_equal(const CyclotomicSum& sum, const ExactValue& value) {
  if (boost::multiprecision::denominator(value.coefficient) != 1) return false;
  CyclotomicSum rhs(1);
  rhs.add(value.root, boost::multiprecision::numerator(value.coefficient));
  return exactly_equal(sum, rhs);
}

}  // namespace fqmenon
