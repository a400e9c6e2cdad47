#pragma once

// Arithmetical functions on A: μ, φ, τ, the generalized Euler functions φ_k
// and φ_k(H, M), Dirichlet convolution, and the named function library.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fqmenon/errors.hpp"
#include "fqmenon/poly.hpp"
#include "fqmenon/residue_ring.hpp"
#include "fqmenon/scalar.hpp"

namespace fqmenon {

inline int moebius(const Poly& h) {
  const auto f = factorize(h);
  if (!f.squarefree()) return 0;
  return f.factors.size() % 2 ? -1 : 1;
}

// Π_{P^e || H} (|P|^e - |P|^{e-1})
inline BigInt euler_phi(const Factorization& f) {
  BigInt out = 1;
  for (const auto& [p, e] : f.factors) {
    const BigInt norm = abs_value(p);
    out *= boost::multiprecision::pow(norm, static_cast<unsigned>(e - 1)) * (norm - 1);
  }
  return out;
}
inline BigInt euler_phi(const Poly& h) { return euler_phi(factorize(h)); }

// Number of monic divisors.
inline BigInt tau(const Poly& h) {
  BigInt out = 1;
  for (const auto& [p, e] : factorize(h).factors) out *= e + 1;
  return out;
}

// 1 - 1/(|P|-1) + 1/(|P|-1)^2 - ... + (-1)^{k-1}/(|P|-1)^{k-1}
inline Rational alternating_factor(const BigInt& prime_norm, int k) {
  const Rational ratio(BigInt(-1), prime_norm - 1);
  Rational term = 1, sum = 0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= ratio;
  }
  return sum;
}

inline Rational alternating_factor(const Poly& prime, int k) {
  return alternating_factor(abs_value(prime), k);
}

inline BigInt integral_or_throw(const Rational& r, const char* what) {
  if (boost::multiprecision::denominator(r) != 1) {
    throw std::logic_error(std::string(what) + " is not integral: " + r.str());
  }
  return boost::multiprecision::numerator(r);
}

// Number of k-tuples of residues mod H with product coprime to H and sum
// coprime to M, by enumeration. M must divide H.
inline BigInt phi_k_two_arg_brute(const Poly& h, const Poly& m, int k,
                                  const Budget& budget = Budget::from_env()) {
  require(k >= 1, "k must be positive");
  require(h.degree() >= 1, "phi_k needs deg H >= 1");
  require(divides(m, h), "M must divide H");
  budget.charge(saturating_pow(h.field()->order(),
                               static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(h.degree())),
                "phi_k enumeration");
  const auto ring = ResidueRing::make(h.monic());
  const auto& lat = ring->lattice();
  const std::size_t m_idx = lat.index_of(m);
  const std::size_t one_idx = lat.index_of(Poly::one(h.field()));
  std::uint64_t count = 0;
  for_each_tuple(*ring, ring->units(), k, [&](auto, std::uint32_t sum) {
    if (lat.meet(ring->gcd_divisor(sum), m_idx) == one_idx) ++count;
  });
  return count;
}

inline BigInt phi_k_brute(const Poly& h, int k, const Budget& budget = Budget::from_env()) {
  return phi_k_two_arg_brute(h, h, k, budget);
}

// φ(H)^k Π_{P|M} alternating_factor(P, k), in exact rationals.
inline BigInt phi_k_two_arg_formula(const Poly& h, const Poly& m, int k) {
  require(k >= 1, "k must be positive");
  require(h.degree() >= 1, "phi_k needs deg H >= 1");
  require(divides(m, h), "M must divide H");
  Rational value = Rational(boost::multiprecision::pow(euler_phi(h), static_cast<unsigned>(k)));
  for (const auto& [p, e] : factorize(m).factors) value *= alternating_factor(p, k);
  return integral_or_throw(value, "phi_k closed form");
}

inline BigInt phi_k_formula(const Poly& h, int k) { return phi_k_two_arg_formula(h, h, k); }

// φ(H) Σ_{D|M} μ(D)/φ(D) φ_{k-1}(H, D), with φ_{k-1}(H, D) counted by
// enumeration. Requires k >= 2.
inline Rational phi_k_two_arg_recursion(const Poly& h, const Poly& m, int k,
                                        const Budget& budget = Budget::from_env()) {
  require(k >= 2, "the recursion needs k >= 2");
  Rational sum = 0;
  for (const auto& d : divisors(m)) {
    const int mu = moebius(d);
    if (mu == 0) continue;
    sum += Rational(mu * phi_k_two_arg_brute(h, d, k - 1, budget), euler_phi(d));
  }
  return Rational(euler_phi(h)) * sum;
}

// A function on monic polynomials; callers' inputs are normalized to their
// monic associate.
struct ArithFunc {
  std::string name;
  std::function<ScalarValue(const Poly&)> eval;

  ScalarValue operator()(const Poly& a) const {
    require(!a.is_zero(), "arithmetical functions are not evaluated at 0");
    return eval(a.monic());
  }

  // Integer value; throws when the function is not integer-valued at a.
  BigInt integer(const Poly& a) const {
    const ScalarValue v = (*this)(a);
    if (!v.is_integer()) throw PreconditionError(name + " is not integer-valued");
    return v.integer();
  }
};

inline ArithFunc make_abs_power(unsigned s) {
  return {"abs_s:" + std::to_string(s), [s](const Poly& a) {
            return ScalarValue(boost::multiprecision::pow(abs_value(a), s));
          }};
}

// Names: one | abs | abs_s:<s> | tau | mu | phi | indicator_unit
inline ArithFunc arith_func(std::string_view name) {
  if (name == "one") return {"one", [](const Poly&) { return ScalarValue(1); }};
  if (name == "abs") return {"abs", [](const Poly& a) { return ScalarValue(abs_value(a)); }};
  if (name == "tau") return {"tau", [](const Poly& a) { return ScalarValue(tau(a)); }};
  if (name == "mu") return {"mu", [](const Poly& a) { return ScalarValue(moebius(a)); }};
  if (name == "phi") return {"phi", [](const Poly& a) { return ScalarValue(euler_phi(a)); }};
  if (name == "indicator_unit") {
    return {"indicator_unit", [](const Poly& a) { return ScalarValue(a.is_one() ? 1 : 0); }};
  }
  constexpr std::string_view kAbsPower = "abs_s:";
  if (name.substr(0, kAbsPower.size()) == kAbsPower) {
    return make_abs_power(detail::parse_uint(name.substr(kAbsPower.size()), "abs_s exponent"));
  }
  throw ParseError("unknown arithmetical function '" + std::string(name) + "'");
}

inline std::vector<ArithFunc> builtin_functions(unsigned abs_power = 2) {
  std::vector<ArithFunc> out;
  for (std::string_view name : {"one", "abs", "tau", "mu", "phi", "indicator_unit"}) {
    out.push_back(arith_func(name));
  }
  out.push_back(make_abs_power(abs_power));
  return out;
}

// (f * g)(H) = Σ_{D|H monic} f(D) g(H/D)
inline ScalarValue dirichlet_convolution(const ArithFunc& f, const ArithFunc& g, const Poly& h) {
  require(!h.is_zero(), "Dirichlet convolution at 0");
  const Poly hm = h.monic();
  ScalarValue sum(0);
  for (const auto& d : divisors(hm)) sum = sum + f(d) * g(exact_quotient(hm, d));
  return sum;
}

inline ArithFunc convolve(ArithFunc f, ArithFunc g) {
  std::string name = "(" + f.name + "*" + g.name + ")";
  return {std::move(name), [f = std::move(f), g = std::move(g)](const Poly& a) {
            return dirichlet_convolution(f, g, a);
          }};
}

}  // namespace fqmenon
