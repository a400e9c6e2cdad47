#pragma once

// Test-side reference implementations. They use plain integer vectors and
// direct enumeration so that they share no code with the library paths they
// check.

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

// Dense polynomial over Z/p, ascending coefficients, no trailing zeros.
using IntPoly = std::vector<int>;

inline IntPoly trim(IntPoly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline IntPoly add(const IntPoly& a, const IntPoly& b, int p) {
  IntPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int x = i < a.size() ? a[i] : 0;
    const int y = i < b.size() ? b[i] : 0;
    out[i] = (x + y) % p;
  }
  return trim(out);
}

inline IntPoly mul(const IntPoly& a, const IntPoly& b, int p) {
  if (a.empty() || b.empty()) return {};
  IntPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  return trim(out);
}

// Remainder modulo a monic polynomial.
inline IntPoly mod_monic(IntPoly a, const IntPoly& m, int p) {
  a = trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const int c = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
    a = trim(a);
  }
  return a;
}

// Base-p digits of a field element code, padded to n.
inline IntPoly coords(std::uint32_t code, int p, int n) {
  IntPoly out(n, 0);
  for (int i = 0; i < n; ++i) {
    out[i] = static_cast<int>(code % p);
    code /= p;
  }
  return out;
}

inline std::uint32_t code(const IntPoly& a, int p) {
  std::uint32_t c = 0;
  for (std::size_t i = a.size(); i-- > 0;) c = c * p + a[i];
  return c;
}

// Product in F_p[x]/(modulus) on element codes.
inline std::uint32_t field_mul(std::uint32_t x, std::uint32_t y, const IntPoly& modulus, int p) {
  const int n = static_cast<int>(modulus.size()) - 1;
  return code(mod_monic(mul(trim(coords(x, p, n)), trim(coords(y, p, n)), p), modulus, p), p);
}

inline std::uint32_t field_add(std::uint32_t x, std::uint32_t y, int p, int n) {
  return code(add(coords(x, p, n), coords(y, p, n), p), p);
}

// Number of monic irreducibles of degree d over F_q: (1/d) Σ_{e|d} μ(d/e) q^e.
inline std::int64_t irreducible_count(std::int64_t q, int d) {
  auto mu = [](int n) {
    int result = 1;
    for (int f = 2; f * f <= n; ++f) {
      if (n % f == 0) {
        n /= f;
        if (n % f == 0) return 0;
        result = -result;
      }
    }
    return n > 1 ? -result : result;
  };
  std::int64_t sum = 0;
  for (int e = 1; e <= d; ++e) {
    if (d % e) continue;
    std::int64_t qe = 1;
    for (int i = 0; i < e; ++i) qe *= q;
    sum += mu(d / e) * qe;
  }
  return sum / d;
}

// Calls visit(tuple) for every length-k tuple drawn from `items`.
template <typename T>
void for_each_tuple(const std::vector<T>& items, int k, const std::function<void(const std::vector<T>&)>& visit) {
  std::vector<T> tuple;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(tuple.size()) == k) {
      visit(tuple);
      return;
    }
    for (const auto& x : items) {
      tuple.push_back(x);
      rec();
      tuple.pop_back();
    }
  };
  rec();
}

}  // namespace oracle
