#pragma once

// Finite fields F_q = F_p[x]/(m(x)) with table-driven arithmetic.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fqmenon/errors.hpp"

namespace fqmenon {

// An element of F_q, stored as the base-p integer Σ c_i p^i of its
// polynomial-basis coordinates c_0..c_{n-1}. Codes below p are the prime
// subfield.
class FieldElement {
 public:
  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint32_t code) : code_(code) {}

  constexpr std::uint32_t code() const { return code_; }
  constexpr bool is_zero() const { return code_ == 0; }

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

 private:
  std::uint32_t code_ = 0;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over F_p with coefficients ascending; used only to
// validate moduli and build the field tables.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inverse_mod_prime(std::uint32_t a, std::uint32_t p) {
  // Fermat: a^(p-2)
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

inline PrimePoly remainder(PrimePoly a, const PrimePoly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t inv_lead = inverse_mod_prime(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = a.back() * inv_lead % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = static_cast<std::uint32_t>(
          (a[shift + i] + p - factor * b[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

// Irreducibility by trial division with every monic polynomial of degree
// 1..deg/2 over F_p.
inline bool is_irreducible_over_prime(const PrimePoly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg == 0) return false;
  for (std::size_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      PrimePoly g(d + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[d] = 1;
      if (remainder(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

// Parsed form of the field text "p=2,n=2,mod=[1,1,1]". An empty modulus
// requests the default choice.
struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t n = 1;
  std::vector<std::uint32_t> modulus;

  static FieldSpec parse(std::string_view text);
  std::string to_string() const;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// F_q with q = p^n. Immutable after construction.
class Field {
 public:
  static constexpr std::uint64_t kMaxOrder = 1u << 16;
  static constexpr std::uint64_t kAddTableMaxOrder = 1024;

  static FieldPtr make(std::uint32_t p, std::uint32_t n,
                       std::optional<std::vector<std::uint32_t>> modulus = {}) {
    return FieldPtr(new Field(p, n, std::move(modulus)));
  }
  static FieldPtr make(const FieldSpec& spec) {
    if (spec.modulus.empty()) return make(spec.p, spec.n);
    return make(spec.p, spec.n, spec.modulus);
  }
  static FieldPtr parse(std::string_view text) {
    return make(FieldSpec::parse(text));
  }

  // Lexicographically smallest monic irreducible of degree n over F_p,
  // comparing coefficients from the constant term upward.
  static std::vector<std::uint32_t> default_modulus(std::uint32_t p,
                                                    std::uint32_t n) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < n; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> f(n + 1, 0);
      std::uint64_t c = idx;
      for (std::uint32_t i = n; i-- > 0;) {
        f[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      f[n] = 1;
      if (detail::is_irreducible_over_prime(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return n_; }
  std::uint32_t order() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  FieldSpec spec() const { return FieldSpec{p_, n_, modulus_}; }

  bool same_as(const Field& other) const {
    return this == &other || (p_ == other.p_ && n_ == other.n_ &&
                              modulus_ == other.modulus_);
  }

  FieldElement zero() const { return FieldElement(0); }
  FieldElement one() const { return FieldElement(1); }

  FieldElement element(std::uint32_t code) const {
    require(code < q_, "field element code out of range");
    return FieldElement(code);
  }

  // Coordinates c_0..c_{n-1} must lie in [0, p).
  FieldElement from_coords(const std::vector<std::uint32_t>& coords) const {
    require(coords.size() == n_, "field element needs exactly n coordinates");
    std::uint32_t code = 0;
    for (std::uint32_t i = n_; i-- > 0;) {
      require(coords[i] < p_, "field coordinate out of range");
      code = code * p_ + coords[i];
    }
    return FieldElement(code);
  }

  std::vector<std::uint32_t> coords(FieldElement x) const {
    std::vector<std::uint32_t> out(n_);
    std::uint32_t c = x.code();
    for (std::uint32_t i = 0; i < n_; ++i) {
      out[i] = c % p_;
      c /= p_;
    }
    return out;
  }

  std::vector<FieldElement> elements() const {
    std::vector<FieldElement> out;
    out.reserve(q_);
    for (std::uint32_t c = 0; c < q_; ++c) out.emplace_back(c);
    return out;
  }

  FieldElement add(FieldElement a, FieldElement b) const {
    if (!add_.empty()) return FieldElement(add_[a.code() * q_ + b.code()]);
    std::uint32_t x = a.code(), y = b.code(), out = 0, scale = 1;
    for (std::uint32_t i = 0; i < n_; ++i) {
      out += ((x % p_ + y % p_) % p_) * scale;
      x /= p_;
      y /= p_;
      scale *= p_;
    }
    return FieldElement(out);
  }
  FieldElement neg(FieldElement a) const { return FieldElement(neg_[a.code()]); }
  FieldElement sub(FieldElement a, FieldElement b) const {
    return add(a, neg(b));
  }
  FieldElement mul(FieldElement a, FieldElement b) const {
    if (a.is_zero() || b.is_zero()) return zero();
    return FieldElement(exp_[log_[a.code()] + log_[b.code()]]);
  }
  FieldElement inv(FieldElement a) const {
    if (a.is_zero()) throw PreconditionError("inversion of zero in F_q");
    return FieldElement(exp_[(q_ - 1 - log_[a.code()]) % (q_ - 1)]);
  }
  FieldElement div(FieldElement a, FieldElement b) const {
    return mul(a, inv(b));
  }
  FieldElement pow(FieldElement a, std::uint64_t e) const {
    if (e == 0) return one();
    if (a.is_zero()) return zero();
    const std::uint64_t group = q_ - 1;
    return FieldElement(
        exp_[static_cast<std::uint64_t>(log_[a.code()]) * (e % group) % group]);
  }

  // Tr(x) = x + x^p + ... + x^{p^{n-1}}; the result lies in the prime subfield.
  FieldElement trace(FieldElement x) const {
    FieldElement sum = zero(), term = x;
    for (std::uint32_t i = 0; i < n_; ++i) {
      sum = add(sum, term);
      term = pow(term, p_);
    }
    return sum;
  }
  std::uint32_t trace_value(FieldElement x) const { return trace(x).code(); }

  // Element generating F_q^*.
  FieldElement primitive_element() const { return FieldElement(exp_[1]); }

  std::string format(FieldElement x) const {
    if (n_ == 1) return std::to_string(x.code());
    std::string out = "[";
    const auto c = coords(x);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(c[i]);
    }
    return out + "]";
  }

 private:
  Field(std::uint32_t p, std::uint32_t n,
        std::optional<std::vector<std::uint32_t>> modulus)
      : p_(p), n_(n) {
    require(detail::is_prime(p), "field characteristic must be prime");
    require(n >= 1, "extension degree must be at least 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      q *= p;
      require(q <= kMaxOrder, "field order exceeds the 2^16 cap");
    }
    q_ = static_cast<std::uint32_t>(q);
    if (modulus) {
      const auto& m = *modulus;
      require(m.size() == n + 1, "modulus must have n+1 coefficients");
      for (auto c : m) require(c < p, "modulus coefficient out of range");
      require(m.back() == 1, "modulus must be monic");
      require(detail::is_irreducible_over_prime(m, p),
              "modulus is reducible over F_p");
      modulus_ = m;
    } else {
      modulus_ = default_modulus(p, n);
    }
    build_tables();
  }

  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
    detail::PrimePoly x(n_), y(n_);
    for (std::uint32_t i = 0; i < n_; ++i) {
      x[i] = a % p_;
      a /= p_;
      y[i] = b % p_;
      b /= p_;
    }
    detail::PrimePoly prod(2 * n_, 0);
    for (std::uint32_t i = 0; i < n_; ++i) {
      for (std::uint32_t j = 0; j < n_; ++j) {
        prod[i + j] = static_cast<std::uint32_t>(
            (prod[i + j] + static_cast<std::uint64_t>(x[i]) * y[j]) % p_);
      }
    }
    const auto r = detail::remainder(prod, modulus_, p_);
    std::uint32_t code = 0;
    for (std::size_t i = r.size(); i-- > 0;) code = code * p_ + r[i];
    return code;
  }

  void build_tables() {
    neg_.resize(q_);
    for (std::uint32_t c = 0; c < q_; ++c) {
      std::uint32_t x = c, out = 0, scale = 1;
      for (std::uint32_t i = 0; i < n_; ++i) {
        out += ((p_ - x % p_) % p_) * scale;
        x /= p_;
        scale *= p_;
      }
      neg_[c] = out;
    }
    if (q_ <= kAddTableMaxOrder) {
      std::vector<std::uint32_t> table(static_cast<std::size_t>(q_) * q_);
      for (std::uint32_t a = 0; a < q_; ++a) {
        for (std::uint32_t b = 0; b < q_; ++b) {
          std::uint32_t x = a, y = b, out = 0, scale = 1;
          for (std::uint32_t i = 0; i < n_; ++i) {
            out += ((x % p_ + y % p_) % p_) * scale;
            x /= p_;
            y /= p_;
            scale *= p_;
          }
          table[a * q_ + b] = out;
        }
      }
      add_ = std::move(table);
    }

    // Find a generator of F_q^* and build exp/log tables from it.
    const std::uint32_t group = q_ - 1;
    const auto primes = detail::prime_divisors(group);
    auto slow_pow = [&](std::uint32_t a, std::uint64_t e) {
      std::uint32_t result = 1;
      while (e) {
        if (e & 1) result = slow_mul(result, a);
        a = slow_mul(a, a);
        e >>= 1;
      }
      return result;
    };
    std::uint32_t generator = 1;
    for (std::uint32_t g = 1; g < q_; ++g) {
      bool ok = true;
      for (auto r : primes) {
        if (slow_pow(g, group / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        generator = g;
        break;
      }
    }
    exp_.assign(2 * static_cast<std::size_t>(group) + 1, 0);
    log_.assign(q_, 0);
    std::uint32_t acc = 1;
    for (std::uint32_t i = 0; i < group; ++i) {
      exp_[i] = acc;
      log_[acc] = i;
      acc = slow_mul(acc, generator);
    }
    for (std::size_t i = group; i < exp_.size(); ++i) exp_[i] = exp_[i - group];
  }

  std::uint32_t p_;
  std::uint32_t n_;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> add_;
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

namespace detail {

inline std::uint32_t parse_uint(std::string_view text, const char* what) {
  std::uint32_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(std::string("invalid ") + what + ": '" +
                     std::string(text) + "'");
  }
  return value;
}

// "[1,2,3]" -> {1,2,3}
inline std::vector<std::uint32_t> parse_uint_list(std::string_view text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ParseError("expected bracketed list: '" + std::string(text) + "'");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<std::uint32_t> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_uint(text.substr(start, comma - start), "list entry"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

inline FieldSpec FieldSpec::parse(std::string_view text) {
  FieldSpec spec;
  bool have_p = false, have_n = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eq = text.find('=', pos);
    if (eq == std::string_view::npos) {
      throw ParseError("field spec entry without '=': '" + std::string(text) + "'");
    }
    const auto key = text.substr(pos, eq - pos);
    std::size_t end;
    if (key == "mod") {
      const auto close = text.find(']', eq);
      if (close == std::string_view::npos) throw ParseError("unterminated modulus list");
      end = close + 1;
      spec.modulus = detail::parse_uint_list(text.substr(eq + 1, end - eq - 1));
    } else {
      end = text.find(',', eq);
      if (end == std::string_view::npos) end = text.size();
      const auto value = text.substr(eq + 1, end - eq - 1);
      if (key == "p") {
        spec.p = detail::parse_uint(value, "p");
        have_p = true;
      } else if (key == "n") {
        spec.n = detail::parse_uint(value, "n");
        have_n = true;
      } else {
        throw ParseError("unknown field spec key '" + std::string(key) + "'");
      }
    }
    if (end < text.size()) {
      if (text[end] != ',' || end + 1 == text.size()) {
        throw ParseError("malformed field spec: '" + std::string(text) + "'");
      }
      ++end;
    }
    pos = end;
  }
  if (!have_p || !have_n) throw ParseError("field spec needs both p and n");
  return spec;
}

inline std::string FieldSpec::to_string() const {
  std::ostringstream out;
  out << "p=" << p << ",n=" << n;
  if (!modulus.empty()) {
    out << ",mod=[";
    for (std::size_t i = 0; i < modulus.size(); ++i) {
      if (i) out << ',';
      out << modulus[i];
    }
    out << ']';
  }
  return out.str();
}

}  // namespace fqmenon
