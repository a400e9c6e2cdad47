#pragma once

// Brute-force and closed-form sides of the progression counts, the
// constrained tuple counts N_l, their character-weighted sums, and both sides
// of the twisted gcd-sum identity.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fqmenon/chars.hpp"
#include "fqmenon/errors.hpp"
#include "fqmenon/multfunc.hpp"
#include "fqmenon/poly.hpp"
#include "fqmenon/residue_ring.hpp"
#include "fqmenon/scalar.hpp"

namespace fqmenon {

namespace detail {

inline BigInt phi_of_exponents(const std::vector<Poly>& primes, const std::vector<int>& exps) {
  BigInt out = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (exps[i] == 0) continue;
    const BigInt norm = abs_value(primes[i]);
    out *= boost::multiprecision::pow(norm, static_cast<unsigned>(exps[i] - 1)) * (norm - 1);
  }
  return out;
}

// φ_k of a factored polynomial, with φ_k(1) = 1.
inline Rational phi_k_closed(const Factorization& f, int k) {
  Rational value = Rational(boost::multiprecision::pow(euler_phi(f), static_cast<unsigned>(k)));
  for (const auto& [p, e] : f.factors) value *= alternating_factor(p, k);
  return value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Units in arithmetic progressions. The table forms take residue and divisor
// indices of a fixed ring; the polynomial forms wrap them.

// |{K mod H : (K, H) = 1, K ≡ Q mod D}|
inline std::uint64_t count_coprime_progression_brute(const ResidueRing& ring, std::size_t d,
                                                     std::uint32_t q) {
  const std::uint32_t target = ring.reduce(d, q);
  std::uint64_t count = 0;
  for (auto u : ring.units()) count += ring.reduce(d, u) == target;
  return count;
}

inline BigInt count_coprime_progression_brute(const Poly& h, const Poly& d, const Poly& q) {
  require(divides(d, h), "D must divide H");
  require(gcd(q, h).is_one(), "Q must be coprime to H");
  const auto ring = ResidueRing::make(h.monic());
  return count_coprime_progression_brute(*ring, ring->lattice().index_of(d), ring->index(q));
}

inline BigInt count_coprime_progression_closed(const Poly& h, const Poly& d, const Poly& q) {
  require(divides(d, h), "D must divide H");
  require(gcd(q, h).is_one(), "Q must be coprime to H");
  return euler_phi(h) / euler_phi(d);
}

// |{K mod H : (K, H) = 1, K ≡ Q mod D, K ≡ S mod M}|
inline std::uint64_t g_count_brute(const ResidueRing& ring, std::size_t d, std::size_t m,
                                   std::uint32_t q, std::uint32_t s) {
  const std::uint32_t qd = ring.reduce(d, q), sm = ring.reduce(m, s);
  std::uint64_t count = 0;
  for (auto u : ring.units()) count += ring.reduce(d, u) == qd && ring.reduce(m, u) == sm;
  return count;
}

// φ(H)/φ([D, M]) if (Q, D) = (S, M) = 1 and Q ≡ S mod (D, M), else 0.
inline BigInt g_count_closed(const ResidueRing& ring, std::size_t d, std::size_t m,
                             std::uint32_t q, std::uint32_t s) {
  const auto& lat = ring.lattice();
  if (lat.meet(ring.gcd_divisor(q), d) != lat.bottom()) return 0;
  if (lat.meet(ring.gcd_divisor(s), m) != lat.bottom()) return 0;
  const std::size_t g = lat.meet(d, m);
  if (ring.reduce(g, q) != ring.reduce(g, s)) return 0;
  const std::size_t top = lat.top(), l = lat.join(d, m);
  return detail::phi_of_exponents(lat.primes(), lat.exponents(top)) /
         detail::phi_of_exponents(lat.primes(), lat.exponents(l));
}

inline BigInt g_count_brute(const Poly& h, const Poly& d, const Poly& m, const Poly& q,
                            const Poly& s) {
  require(divides(d, h) && divides(m, h), "D and M must divide H");
  const auto ring = ResidueRing::make(h.monic());
  const auto& lat = ring->lattice();
  return g_count_brute(*ring, lat.index_of(d), lat.index_of(m), ring->index(q), ring->index(s));
}

inline BigInt g_count_closed(const Poly& h, const Poly& d, const Poly& m, const Poly& q,
                             const Poly& s) {
  require(divides(d, h) && divides(m, h), "D and M must divide H");
  if (!gcd(q, d).is_one() || !gcd(s, m).is_one()) return 0;
  if (!divides(gcd(d, m), q - s)) return 0;
  return euler_phi(h) / euler_phi(lcm(d, m));
}

// The rings A/P^e for P^e || H, used to evaluate g as a product of local
// counts.
class LocalRings {
 public:
  explicit LocalRings(const ResidueRing& global) : global_(global) {
    const auto& lat = global.lattice();
    for (std::size_t i = 0; i < lat.primes().size(); ++i) {
      std::vector<int> v(lat.primes().size(), 0);
      v[i] = lat.top_exponents()[i];
      const std::size_t idx = lat.index_of_exps(v);
      parts_.push_back({idx, ResidueRing::make(lat.divisor(idx))});
    }
  }

  // Π over P^e || H of g(P^e, P^{v_P(D)}, P^{v_P(M)}, Q, S).
  std::uint64_t g_count(std::size_t d, std::size_t m, std::uint32_t q, std::uint32_t s) const {
    const auto& lat = global_.lattice();
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const auto& [idx, ring] = parts_[i];
      const auto& local = ring->lattice();
      std::vector<int> dv{lat.exponents(d)[i]}, mv{lat.exponents(m)[i]};
      out *= g_count_brute(*ring, local.index_of_exps(dv), local.index_of_exps(mv),
                           global_.reduce(idx, q), global_.reduce(idx, s));
    }
    return out;
  }

 private:
  struct Part {
    std::size_t index;  // divisor index of P^e in H
    ResidueRingPtr ring;
  };
  const ResidueRing& global_;
  std::vector<Part> parts_;
};

inline BigInt g_count_local_product(const Poly& h, const Poly& d, const Poly& m, const Poly& q,
                                    const Poly& s) {
  require(divides(d, h) && divides(m, h), "D and M must divide H");
  const auto ring = ResidueRing::make(h.monic());
  const auto& lat = ring->lattice();
  return LocalRings(*ring).g_count(lat.index_of(d), lat.index_of(m), ring->index(q), ring->index(s));
}

// Σ ψ(U) over U mod D with U ≡ S mod Q.
inline CyclotomicSum primitive_progression_sum_brute(const DirichletCharacter& psi, const Poly& q,
                                                     const Poly& s) {
  const auto& ring = psi.group().ring();
  const auto& lat = ring.lattice();
  const std::size_t qi = lat.index_of(q);
  const std::uint32_t target = ring.reduce(qi, ring.index(s));
  CyclotomicSum sum(psi.table_order());
  for (auto u : ring.units()) {
    if (ring.reduce(qi, u) == target) sum.add(static_cast<std::uint64_t>(psi.exponent_at(u)), 1);
  }
  return sum;
}

inline CyclotomicSum primitive_progression_sum_closed(const DirichletCharacter& psi, const Poly& q,
                                                      const Poly& s) {
  require(divides(q, psi.modulus()), "Q must divide the modulus");
  require(gcd(s, psi.modulus()).is_one(), "S must be coprime to the modulus");
  CyclotomicSum sum(psi.table_order());
  if (q.monic() == psi.modulus()) sum.add(*psi.at(s), 1);
  return sum;
}

// ---------------------------------------------------------------------------
// N_l(H, M, N, D, S, U): l-tuples of units mod H with K_1 ≡ U mod D,
// ΣK ≡ S mod M and ΣK ≡ 0 mod N.

// Counts for every residue U mod D at once, indexed by residue index mod D.
inline std::vector<BigInt> n_l_counts_by_u(const Poly& h, const Poly& m, const Poly& n,
                                           const Poly& d, const Poly& s, int l,
                                           const Budget& budget = Budget::from_env()) {
  require(l >= 1, "l must be positive");
  require(divides(m, h) && divides(n, h) && divides(d, h), "M, N and D must divide H");
  require(gcd(s, h).is_one(), "S must be coprime to H");
  const auto ring = ResidueRing::make(h.monic());
  const auto& lat = ring->lattice();
  const std::size_t di = lat.index_of(d), mi = lat.index_of(m), ni = lat.index_of(n);
  const std::uint32_t d_size = static_cast<std::uint32_t>(abs_value(d));
  std::vector<BigInt> out(d_size, 0);
  if (!gcd(m, n).is_one()) return out;
  budget.charge(saturating_pow(h.field()->order(), static_cast<std::uint64_t>(l) * h.degree()),
                "N_l enumeration");
  const std::uint32_t sm = ring->reduce(mi, ring->index(s));
  std::vector<std::uint64_t> counts(d_size, 0);
  for_each_tuple(*ring, ring->units(), l, [&](std::span<const std::uint32_t> k, std::uint32_t sum) {
    if (ring->reduce(mi, sum) == sm && ring->divisible(ni, sum)) ++counts[ring->reduce(di, k[0])];
  });
  for (std::uint32_t i = 0; i < d_size; ++i) out[i] = counts[i];
  return out;
}

inline BigInt n_l_count(const Poly& h, const Poly& m, const Poly& n, const Poly& d, const Poly& s,
                        const Poly& u, int l, const Budget& budget = Budget::from_env()) {
  const auto counts = n_l_counts_by_u(h, m, n, d, s, l, budget);
  return counts[(u % d.monic()).to_index()];
}

struct RecursionCheck {
  BigInt lhs;
  Rational rhs;
  bool holds = false;
};

// N_l = φ(H)/(φ(M)φ(N)) Σ_{J|M} μ(J) Σ_{I|N} μ(I) N_{l-1}(H, J, I, D, S, U)
inline RecursionCheck n_l_recursion_check(const Poly& h, const Poly& m, const Poly& n,
                                          const Poly& d, const Poly& s, const Poly& u, int l,
                                          const Budget& budget = Budget::from_env()) {
  require(l >= 2, "the recursion needs l >= 2");
  require(gcd(m, n).is_one(), "M and N must be coprime");
  RecursionCheck out;
  out.lhs = n_l_count(h, m, n, d, s, u, l, budget);
  BigInt sum = 0;
  for (const auto& j : divisors(m)) {
    const int mu_j = moebius(j);
    if (mu_j == 0) continue;
    for (const auto& i : divisors(n)) {
      const int mu_i = moebius(i);
      if (mu_i == 0) continue;
      sum += mu_j * mu_i * n_l_count(h, j, i, d, s, u, l - 1, budget);
    }
  }
  out.rhs = Rational(euler_phi(h) * sum, euler_phi(m) * euler_phi(n));
  out.holds = out.rhs == Rational(out.lhs);
  return out;
}

struct WeightedSumCheck {
  CyclotomicSum brute;
  ExactValue closed;
  double abs_diff = 0;
  bool holds = false;
};

// Closed form of Σ_{U mod D, (U,D)=1} ψ(U) N_l(H, M, N, D, S, U) with
// ψ the primitive character inducing χ and D its conductor.
inline ExactValue weighted_sum_closed(const DirichletCharacter& chi, const Poly& m, const Poly& n,
                                      const Poly& s, int l) {
  const Poly& h = chi.modulus();
  const Poly d = conductor(chi);
  if (!divides(d, m)) return {0, RootOfUnity()};
  const auto psi = primitive_lift(chi);
  const int mu_d = moebius(d);
  Rational value = Rational(boost::multiprecision::pow(euler_phi(h), static_cast<unsigned>(l)),
                            euler_phi(m) * euler_phi(n));
  if (mu_d == 0 && l >= 2) return {0, RootOfUnity()};
  if ((l - 1) % 2 == 1) value *= mu_d;
  const auto df = factorize(d);
  for (const auto& [p, e] : df.factors) {
    value /= Rational(boost::multiprecision::pow(abs_value(p) - 1, static_cast<unsigned>(l - 1)));
  }
  for (const auto& [p, e] : factorize(m).factors) {
    if (df.valuation(p) == 0) value *= alternating_factor(p, l);
  }
  for (const auto& [p, e] : factorize(n).factors) value *= alternating_factor(p, l - 1);
  return {value, d.is_one() ? RootOfUnity() : *psi.at(s)};
}

inline CyclotomicSum weighted_sum_brute(const DirichletCharacter& chi, const Poly& m, const Poly& n,
                                        const Poly& s, int l,
                                        const Budget& budget = Budget::from_env()) {
  const Poly& h = chi.modulus();
  const auto psi = primitive_lift(chi);
  const Poly& d = psi.modulus();
  const auto counts = n_l_counts_by_u(h, m, n, d, s, l, budget);
  const auto& dring = psi.group().ring();
  CyclotomicSum sum(psi.table_order());
  for (auto u : dring.units()) sum.add(static_cast<std::uint64_t>(psi.exponent_at(u)), counts[u]);
  return sum;
}

inline WeightedSumCheck weighted_sum_check(const DirichletCharacter& chi, const Poly& m,
                                           const Poly& n, const Poly& s, int l,
                                           const Budget& budget = Budget::from_env()) {
  require(l >= 2, "the weighted sum needs l >= 2");
  require(gcd(m, n).is_one(), "M and N must be coprime");
  require(divides(m, chi.modulus()) && divides(n, chi.modulus()), "M and N must divide H");
  require(gcd(s, chi.modulus()).is_one(), "S must be coprime to H");
  WeightedSumCheck out{weighted_sum_brute(chi, m, n, s, l, budget),
                       weighted_sum_closed(chi, m, n, s, l), 0, false};
  out.abs_diff = std::abs(out.brute.to_complex() - out.closed.to_complex());
  out.holds = exactly_equal(out.brute, out.closed);
  return out;
}

// ∏_{P|D} P^{v_P(H)}
inline Poly h0_compute(const Poly& h, const Poly& d) {
  require(divides(d, h), "D must divide H");
  const auto hf = factorize(h);
  const auto df = factorize(d);
  Poly h0 = Poly::one(h.field());
  for (const auto& [p, e] : df.factors) h0 *= pow(p, static_cast<unsigned>(hf.valuation(p)));
  if (!(radical(factorize(h0), h.field()) == radical(df, h.field()))) {
    throw std::logic_error("H_0 and D have different prime factors");
  }
  if (!gcd(h0, exact_quotient(h.monic(), h0)).is_one()) {
    throw std::logic_error("H_0 is not coprime to H/H_0");
  }
  return h0;
}

// ---------------------------------------------------------------------------
// The identity.

enum class EvalMode { kAuto, kExact, kFloat };

inline EvalMode parse_eval_mode(std::string_view text) {
  if (text == "auto") return EvalMode::kAuto;
  if (text == "exact") return EvalMode::kExact;
  if (text == "float") return EvalMode::kFloat;
  throw ParseError("mode must be auto, exact or float, got '" + std::string(text) + "'");
}

inline std::string to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::kExact:
      return "exact";
    case EvalMode::kFloat:
      return "float";
    default:
      return "auto";
  }
}

struct TothInstance {
  FieldPtr field;
  Poly h;
  int l = 1;
  int s = 0;
  std::size_t chi_index = 0;
  std::vector<Poly> lambdas;  // W_1..W_s
  Poly S;
  std::string F = "abs";
  EvalMode mode = EvalMode::kAuto;

  TothInstance(FieldPtr f, Poly modulus, Poly shift)
      : field(std::move(f)), h(std::move(modulus)), S(std::move(shift)) {}

  void validate() const {
    require(h.is_monic() && h.degree() >= 1, "H must be monic of degree >= 1");
    require(l >= 1, "l must be positive");
    require(s >= 0, "s must be nonnegative");
    require(lambdas.size() == static_cast<std::size_t>(s), "exactly s additive characters are required");
    for (const auto& w : lambdas) require(w.degree() < h.degree(), "deg W_i must be less than deg H");
    require(!S.is_zero() && gcd(S, h).is_one(), "S must be coprime to H");
  }

  std::string describe() const {
    std::string out = "field=" + field->spec().to_string() + ";H=" + to_string(h) +
                      ";l=" + std::to_string(l) + ";s=" + std::to_string(s) +
                      ";chi=" + std::to_string(chi_index) + ";W=[";
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (i) out += ',';
      out += to_string(lambdas[i]);
    }
    return out + "];S=" + to_string(S) + ";F=" + F;
  }
};

// q^{deg H (l + s)}
inline BigInt estimate_cost(const TothInstance& inst) {
  return boost::multiprecision::pow(BigInt(inst.field->order()),
                                    static_cast<unsigned>(inst.h.degree() * (inst.l + inst.s)));
}

inline std::uint64_t saturate(const BigInt& v) {
  if (v > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return v.convert_to<std::uint64_t>();
}

inline const DirichletCharacter& select_character(const std::vector<DirichletCharacter>& chars,
                                                  std::size_t index) {
  if (index >= chars.size()) {
    throw PreconditionError("character index " + std::to_string(index) + " out of range (" +
                            std::to_string(chars.size()) + " characters)");
  }
  return chars[index];
}

// Σ F(gcd(ΣK - S, B_1, .., B_s, H)) χ(K_1) Π λ_i(B_i) over all K_i, B_i mod H
// with ΣK and ΠK coprime to H. The K tuples are grouped by (χ(K_1), gcd
// class) and the B tuples by (gcd class, trace sum), so the value is exact.
inline CyclotomicSum toth_lhs(const TothInstance& inst, const DirichletCharacter& chi,
                              const Budget& budget = Budget::from_env()) {
  inst.validate();
  require(chi.modulus() == inst.h, "character modulus differs from H");
  budget.charge(saturate(estimate_cost(inst)), "identity enumeration");
  const ResidueRing& ring = chi.group().ring();
  const auto& lat = ring.lattice();
  const std::size_t ndiv = lat.size();
  const auto func = arith_func(inst.F);
  std::vector<BigInt> f_values(ndiv);
  for (std::size_t i = 0; i < ndiv; ++i) f_values[i] = func.integer(lat.divisor(i));

  // K side: counts[e][d] of unit tuples with χ(K_1) = ζ_m^e and
  // gcd(ΣK - S, H) = divisor d.
  const std::uint64_t m = chi.table_order();
  std::vector<std::uint64_t> k_counts(m * ndiv, 0);
  const std::uint32_t s_idx = ring.index(inst.S);
  for_each_tuple(ring, ring.units(), inst.l, [&](std::span<const std::uint32_t> k, std::uint32_t sum) {
    if (!ring.is_unit(sum)) return;
    const auto e = static_cast<std::uint64_t>(chi.exponent_at(k[0]));
    ++k_counts[e * ndiv + ring.gcd_divisor(ring.sub(sum, s_idx))];
  });

  // B side: b_counts[g][t] of tuples with gcd(B_1, .., B_s, H) = g and
  // Σ Tr(t(W_i B_i)) ≡ t mod p.
  const std::uint32_t p = inst.field->characteristic();
  std::vector<std::uint64_t> b_counts(ndiv * p, 0);
  const std::uint32_t size = ring.size();
  std::vector<std::vector<std::uint32_t>> traces(static_cast<std::size_t>(inst.s));
  for (int i = 0; i < inst.s; ++i) {
    const auto lambda = additive_character(inst.h, inst.lambdas[i]);
    traces[i].resize(size);
    for (std::uint32_t b = 0; b < size; ++b) traces[i][b] = additive_trace(lambda, ring.poly(b));
  }
  {
    const std::size_t s = static_cast<std::size_t>(inst.s);
    std::vector<std::uint32_t> b(s, 0);
    std::vector<std::uint32_t> g(s + 1, static_cast<std::uint32_t>(lat.top()));
    std::vector<std::uint32_t> t(s + 1, 0);
    auto refresh = [&](std::size_t from) {
      for (std::size_t j = from; j < s; ++j) {
        g[j + 1] = lat.meet(g[j], ring.gcd_divisor(b[j]));
        t[j + 1] = (t[j] + traces[j][b[j]]) % p;
      }
    };
    refresh(0);
    while (true) {
      ++b_counts[g[s] * p + t[s]];
      std::size_t i = s;
      while (i > 0 && ++b[i - 1] == size) {
        b[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
      refresh(i - 1);
    }
  }

  // G(d)[t] = Σ_g b_counts[g][t] F(gcd(d, g))
  std::vector<BigInt> g_values(ndiv * p, 0);
  for (std::size_t d = 0; d < ndiv; ++d) {
    for (std::size_t g = 0; g < ndiv; ++g) {
      const BigInt& f = f_values[lat.meet(d, g)];
      for (std::uint32_t t = 0; t < p; ++t) {
        if (b_counts[g * p + t]) g_values[d * p + t] += f * b_counts[g * p + t];
      }
    }
  }

  const std::uint64_t order = std::lcm(m, static_cast<std::uint64_t>(p));
  CyclotomicSum out(order);
  for (std::uint64_t e = 0; e < m; ++e) {
    for (std::size_t d = 0; d < ndiv; ++d) {
      const std::uint64_t c = k_counts[e * ndiv + d];
      if (!c) continue;
      for (std::uint32_t t = 0; t < p; ++t) {
        const BigInt& gv = g_values[d * p + t];
        if (gv != 0) out.add(e * (order / m) + t * (order / p), gv * c);
      }
    }
  }
  return out;
}

inline CyclotomicSum toth_lhs(const TothInstance& inst, const Budget& budget = Budget::from_env()) {
  const auto chars = characters(inst.h);
  return toth_lhs(inst, select_character(chars, inst.chi_index), budget);
}

// The same sum evaluated term by term with polynomial arithmetic, in complex
// floating point. Used as an independent check on small instances.
inline Complex toth_lhs_naive(const TothInstance& inst, const DirichletCharacter& chi,
                              const Budget& budget = Budget::from_env()) {
  inst.validate();
  budget.charge(saturate(estimate_cost(inst)), "identity enumeration");
  const auto func = arith_func(inst.F);
  const auto all = residues(inst.h);
  const int width = inst.l + inst.s;
  std::vector<std::size_t> pos(static_cast<std::size_t>(width), 0);
  Complex total = 0;
  while (true) {
    Poly sum(inst.field), product = Poly::one(inst.field);
    for (int i = 0; i < inst.l; ++i) {
      sum += all[pos[i]];
      product *= all[pos[i]];
    }
    if (gcd(sum, inst.h).is_one() && gcd(product, inst.h).is_one()) {
      Poly g = gcd(sum - inst.S, inst.h);
      Complex term = char_eval(chi, all[pos[0]]).to_complex();
      for (int i = 0; i < inst.s; ++i) {
        const Poly& b = all[pos[inst.l + i]];
        g = gcd(g, b);
        term *= additive_char_eval(additive_character(inst.h, inst.lambdas[i]), b).to_complex();
      }
      total += func(g).to_complex() * term;
    }
    std::size_t i = pos.size();
    while (i > 0 && ++pos[i - 1] == all.size()) {
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return total;
}

struct RhsValue {
  ExactValue value;
  std::uint64_t terms = 0;  // divisors M examined
};

// μ(D)^{l-1} ψ(S) φ(H_0^l / D^{l-1}) φ_l(H/H_0)
//   · Σ_{D|M|H, (H/M)|W_i} (μ*F)(M)/φ(M) |H/M|^s
inline RhsValue toth_rhs(const TothInstance& inst, const DirichletCharacter& chi) {
  inst.validate();
  const auto& h = inst.h;
  const Poly d = conductor(chi);
  const auto psi = primitive_lift(chi);
  const Poly h0 = h0_compute(h, d);
  const auto hf = factorize(h);
  const auto df = factorize(d);

  RhsValue out;
  out.value.root = d.is_one() ? RootOfUnity() : *psi.at(inst.S);
  const int mu_d = moebius(d);
  if (inst.l >= 2 && mu_d == 0) {
    out.value.coefficient = 0;
    return out;
  }
  Rational prefactor = (inst.l - 1) % 2 == 1 ? mu_d : 1;

  // φ(H_0^l / D^{l-1}) from exponents l·v_P(H) - (l-1)·v_P(D) over P | D.
  std::vector<Poly> primes;
  std::vector<int> exps;
  for (const auto& [p, e] : df.factors) {
    primes.push_back(p);
    exps.push_back(inst.l * hf.valuation(p) - (inst.l - 1) * e);
  }
  prefactor *= Rational(detail::phi_of_exponents(primes, exps));
  prefactor *= detail::phi_k_closed(factorize(exact_quotient(h, h0)), inst.l);

  const auto func = arith_func(inst.F);
  const auto mu = arith_func("mu");
  Rational sum = 0;
  for (const auto& m : divisors(hf, h.field())) {
    if (!divides(d, m)) continue;
    ++out.terms;
    const Poly cofactor = exact_quotient(h, m);
    bool admitted = true;
    for (const auto& w : inst.lambdas) admitted = admitted && divides(cofactor, w);
    if (!admitted) continue;
    const BigInt conv = dirichlet_convolution(mu, func, m).integer();
    sum += Rational(conv * boost::multiprecision::pow(abs_value(cofactor), static_cast<unsigned>(inst.s)),
                    euler_phi(m));
  }
  out.value.coefficient = prefactor * sum;
  return out;
}

inline RhsValue toth_rhs(const TothInstance& inst) {
  const auto chars = characters(inst.h);
  return toth_rhs(inst, select_character(chars, inst.chi_index));
}

inline constexpr double kDefaultTolerance = 1e-6;

struct VerificationReport {
  std::string description;
  CyclotomicSum lhs_exact;
  ExactValue rhs_exact;
  Complex lhs;
  Complex rhs;
  double abs_diff = 0;
  bool pass = false;
  BigInt terms;
  std::uint64_t rhs_terms = 0;
  std::int64_t elapsed_ms = 0;
  std::string mode;  // "exact" or "float"
};

// Every term is rational when χ takes values ±1 and each λ_i does too.
inline bool all_terms_rational(const TothInstance& inst, const DirichletCharacter& chi) {
  if (chi.order() > 2) return false;
  if (inst.field->characteristic() == 2) return true;
  for (const auto& w : inst.lambdas) {
    if (!w.is_zero()) return false;
  }
  return true;
}

// pass ⇔ |lhs - rhs| <= tol · max(1, |lhs|), or exact equality in exact mode.
inline bool within_tolerance(Complex lhs, Complex rhs, double tol) {
  return std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(lhs));
}

inline VerificationReport verify_toth(const TothInstance& inst, const DirichletCharacter& chi,
                                      double tol = kDefaultTolerance,
                                      const Budget& budget = Budget::from_env()) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.description = inst.describe();
  r.lhs_exact = toth_lhs(inst, chi, budget);
  const auto rhs = toth_rhs(inst, chi);
  r.rhs_exact = rhs.value;
  r.rhs_terms = rhs.terms;
  r.terms = estimate_cost(inst);
  r.lhs = r.lhs_exact.to_complex();
  r.rhs = r.rhs_exact.to_complex();
  r.abs_diff = std::abs(r.lhs - r.rhs);
  const bool exact = inst.mode == EvalMode::kExact ||
                     (inst.mode == EvalMode::kAuto && all_terms_rational(inst, chi));
  r.mode = exact ? "exact" : "float";
  r.pass = exact ? exactly_equal(r.lhs_exact, r.rhs_exact) : within_tolerance(r.lhs, r.rhs, tol);
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

inline VerificationReport verify_toth(const TothInstance& inst, double tol = kDefaultTolerance,
                                      const Budget& budget = Budget::from_env()) {
  inst.validate();
  const auto chars = characters(inst.h);
  return verify_toth(inst, select_character(chars, inst.chi_index), tol, budget);
}

}  // namespace fqmenon
