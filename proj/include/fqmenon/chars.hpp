#pragma once

// Dirichlet characters modulo H and additive characters E(W, H).

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fqmenon/errors.hpp"
#include "fqmenon/multfunc.hpp"
#include "fqmenon/poly.hpp"
#include "fqmenon/residue_ring.hpp"
#include "fqmenon/scalar.hpp"

namespace fqmenon {

class UnitGroup;
using UnitGroupPtr = std::shared_ptr<const UnitGroup>;

// (A/H)^× as a direct product of cyclic groups with a discrete-log table.
class UnitGroup {
 public:
  struct Generator {
    std::uint32_t residue;  // index in the residue ring
    std::uint64_t order;
  };

  static UnitGroupPtr make(const Poly& h) {
    require(!h.is_zero(), "unit group of the zero modulus");
    return UnitGroupPtr(new UnitGroup(ResidueRing::make(h.monic())));
  }

  const ResidueRing& ring() const { return *ring_; }
  const ResidueRingPtr& ring_ptr() const { return ring_; }
  const Poly& modulus() const { return ring_->modulus(); }
  const std::vector<Generator>& generators() const { return gens_; }
  std::uint64_t size() const { return ring_->units().size(); }
  // lcm of the generator orders
  std::uint64_t exponent() const { return exponent_; }

  // Exponent vector of a unit residue; empty optional for non-units.
  std::optional<std::vector<std::uint64_t>> dlog(std::uint32_t residue) const {
    if (!ring_->is_unit(residue)) return std::nullopt;
    const std::size_t g = gens_.size();
    return std::vector<std::uint64_t>(dlog_.begin() + residue * g, dlog_.begin() + (residue + 1) * g);
  }
  std::uint64_t dlog_component(std::uint32_t residue, std::size_t i) const {
    return dlog_[residue * gens_.size() + i];
  }

  std::uint32_t power(std::uint32_t x, std::uint64_t e) const {
    std::uint32_t result = one_, base = x;
    while (e) {
      if (e & 1) result = ring_->mul(result, base);
      base = ring_->mul(base, base);
      e >>= 1;
    }
    return result;
  }

 private:
  explicit UnitGroup(ResidueRingPtr ring) : ring_(std::move(ring)) {
    const auto& r = *ring_;
    one_ = r.index(Poly::one(r.field()));
    std::vector<std::uint32_t> units = r.units();
    std::sort(units.begin(), units.end(),
              [&](auto a, auto b) { return canonical_less(r.poly(a), r.poly(b)); });
    const std::uint64_t phi = units.size();

    std::vector<char> in_k(r.size(), 0);
    std::vector<std::uint32_t> k_elems{one_};
    in_k[one_] = 1;
    while (k_elems.size() < phi) {
      // Element of maximal order in G/K, first in canonical order on ties.
      std::uint32_t best = one_;
      std::uint64_t best_order = 0;
      for (auto x : units) {
        const std::uint64_t o = order_modulo(x, in_k, phi);
        if (o > best_order) {
          best = x;
          best_order = o;
        }
      }
      // An element of the coset best*K whose order equals the quotient order,
      // so that <z> meets K trivially.
      std::optional<std::uint32_t> z;
      for (auto k : k_elems) {
        const std::uint32_t c = r.mul(best, k);
        if (power(c, best_order) == one_) {
          z = c;
          break;
        }
      }
      if (!z) throw std::logic_error("unit group decomposition failed");
      gens_.push_back({*z, best_order});
      std::vector<std::uint32_t> next;
      next.reserve(k_elems.size() * best_order);
      std::uint32_t zi = one_;
      for (std::uint64_t i = 0; i < best_order; ++i) {
        for (auto k : k_elems) next.push_back(r.mul(k, zi));
        zi = r.mul(zi, *z);
      }
      k_elems = std::move(next);
      std::fill(in_k.begin(), in_k.end(), 0);
      for (auto k : k_elems) in_k[k] = 1;
    }

    exponent_ = 1;
    for (const auto& g : gens_) exponent_ = std::lcm(exponent_, g.order);

    // Discrete logs by enumerating exponent vectors.
    const std::size_t ng = gens_.size();
    dlog_.assign(static_cast<std::size_t>(r.size()) * ng, 0);
    std::vector<char> seen(r.size(), 0);
    std::vector<std::uint64_t> e(ng, 0);
    // partial[j + 1] = Π_{i <= j} g_i^{e_i}
    std::vector<std::uint32_t> partial(ng + 1, one_);
    std::uint64_t visited = 0;
    while (true) {
      const std::uint32_t x = partial[ng];
      if (!r.is_unit(x) || seen[x]) throw std::logic_error("unit group basis is not independent");
      seen[x] = 1;
      ++visited;
      for (std::size_t i = 0; i < ng; ++i) dlog_[x * ng + i] = e[i];
      std::size_t i = ng;
      while (i > 0 && ++e[i - 1] == gens_[i - 1].order) {
        e[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
      partial[i] = r.mul(partial[i], gens_[i - 1].residue);
      for (std::size_t j = i; j < ng; ++j) partial[j + 1] = partial[j];
    }
    if (visited != phi) throw std::logic_error("unit group basis does not span");
  }

  // Smallest j >= 1 with x^j in K.
  std::uint64_t order_modulo(std::uint32_t x, const std::vector<char>& in_k,
                             std::uint64_t group_order) const {
    std::uint64_t j = group_order;
    for (const std::uint64_t prime : detail::prime_divisors(group_order)) {
      while (j % prime == 0 && in_k[power(x, j / prime)]) j /= prime;
    }
    return j;
  }

  ResidueRingPtr ring_;
  std::uint32_t one_ = 0;
  std::vector<Generator> gens_;
  std::uint64_t exponent_ = 1;
  std::vector<std::uint64_t> dlog_;
};

// A Dirichlet character modulo H, given by exponents on the group generators.
class DirichletCharacter {
 public:
  DirichletCharacter(UnitGroupPtr group, std::vector<std::uint64_t> exponents)
      : group_(std::move(group)), exponents_(std::move(exponents)) {
    const auto& gens = group_->generators();
    require(exponents_.size() == gens.size(), "one exponent per generator is required");
    const std::uint64_t m = group_->exponent();
    order_ = 1;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      exponents_[i] %= gens[i].order;
      order_ = std::lcm(order_, gens[i].order / std::gcd(gens[i].order, exponents_[i]));
    }
    const auto& ring = group_->ring();
    table_.assign(ring.size(), -1);
    for (auto u : ring.units()) {
      std::uint64_t k = 0;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        k = (k + exponents_[i] * group_->dlog_component(u, i) % gens[i].order * (m / gens[i].order)) % m;
      }
      table_[u] = static_cast<std::int64_t>(k);
    }
  }

  const UnitGroup& group() const { return *group_; }
  const UnitGroupPtr& group_ptr() const { return group_; }
  const Poly& modulus() const { return group_->modulus(); }
  const std::vector<std::uint64_t>& exponents() const { return exponents_; }
  // Order of χ in the character group.
  std::uint64_t order() const { return order_; }
  bool is_trivial() const { return order_ == 1; }
  // Root-of-unity order m in which the exponent table is expressed.
  std::uint64_t table_order() const { return group_->exponent(); }

  // χ(residue) = ζ_m^{k}; nullopt at non-units.
  std::optional<RootOfUnity> at_residue(std::uint32_t residue) const {
    if (table_[residue] < 0) return std::nullopt;
    return RootOfUnity(group_->exponent(), table_[residue]);
  }
  // Exponent k with χ = ζ_m^k, or -1 at non-units.
  std::int64_t exponent_at(std::uint32_t residue) const { return table_[residue]; }

  std::optional<RootOfUnity> at(const Poly& a) const {
    return at_residue(group_->ring().index(a));
  }

 private:
  UnitGroupPtr group_;
  std::vector<std::uint64_t> exponents_;
  std::uint64_t order_ = 1;
  std::vector<std::int64_t> table_;
};

inline UnitGroupPtr unit_group(const Poly& h) { return UnitGroup::make(h); }

// All characters mod H; exponent vectors in lexicographic order, so the
// trivial character comes first.
inline std::vector<DirichletCharacter> characters(const UnitGroupPtr& group) {
  const auto& gens = group->generators();
  std::vector<DirichletCharacter> out;
  std::vector<std::uint64_t> e(gens.size(), 0);
  while (true) {
    out.emplace_back(group, e);
    std::size_t i = e.size();
    while (i > 0 && ++e[i - 1] == gens[i - 1].order) {
      e[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

inline std::vector<DirichletCharacter> characters(const Poly& h) {
  return characters(unit_group(h));
}

inline ScalarValue char_eval(const DirichletCharacter& chi, const Poly& a) {
  const auto v = chi.at(a);
  if (!v) return ScalarValue(0);
  return ScalarValue(*v);
}

// Divisor indices d of H such that χ is constant on unit classes mod d.
inline std::vector<std::size_t> induced_moduli(const DirichletCharacter& chi) {
  const auto& ring = chi.group().ring();
  const auto& lat = ring.lattice();
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < lat.size(); ++d) {
    std::vector<std::int64_t> value(ring.size(), -1);
    bool periodic = true;
    for (auto u : ring.units()) {
      auto& slot = value[ring.reduce(d, u)];
      if (slot < 0) {
        slot = chi.exponent_at(u);
      } else if (slot != chi.exponent_at(u)) {
        periodic = false;
        break;
      }
    }
    if (periodic) out.push_back(d);
  }
  return out;
}

inline Poly conductor(const DirichletCharacter& chi) {
  const auto& lat = chi.group().ring().lattice();
  const auto moduli = induced_moduli(chi);
  std::size_t best = moduli.front();  // H itself always qualifies
  for (auto d : moduli) {
    if (lat.divisor(d).degree() < lat.divisor(best).degree()) best = d;
  }
  for (auto d : moduli) {
    if (lat.meet(best, d) != best) throw std::logic_error("conductor does not divide an induced modulus");
  }
  return lat.divisor(best);
}

inline bool is_primitive(const DirichletCharacter& chi) {
  return conductor(chi) == chi.modulus();
}

// The primitive character modulo the conductor that induces χ.
inline DirichletCharacter primitive_lift(const DirichletCharacter& chi) {
  const Poly d = conductor(chi);
  const auto& ring = chi.group().ring();
  const auto& field = ring.field();
  auto candidates = characters(d);
  if (d.is_one()) return candidates.front();
  const auto& fac = ring.lattice().factorization();
  const auto& target_ring = candidates.front().group().ring();
  std::vector<std::int64_t> wanted(target_ring.size(), -1);
  for (auto a : target_ring.units()) {
    const Poly a_poly = target_ring.poly(a);
    std::vector<std::pair<Poly, Poly>> congruences;
    for (const auto& [p, e] : fac.factors) {
      const Poly power = pow(p, static_cast<unsigned>(e));
      congruences.emplace_back(divides(p, d) ? a_poly % power : Poly::one(field), power);
    }
    wanted[a] = chi.exponent_at(ring.index(crt_solve(congruences)));
  }
  const std::uint64_t m_chi = chi.table_order();
  for (auto& psi : candidates) {
    const std::uint64_t m_psi = psi.table_order();
    bool match = true;
    for (auto a : target_ring.units()) {
      // Compare ζ_{m_psi}^x with ζ_{m_chi}^y.
      const auto lhs = RootOfUnity(m_psi, psi.exponent_at(a));
      const auto rhs = RootOfUnity(m_chi, wanted[a]);
      if (!(lhs == rhs)) {
        match = false;
        break;
      }
    }
    if (match) return psi;
  }
  throw std::logic_error("no primitive character matches the lift");
}

// B ↦ exp(2πi Tr(t(W·B mod H)) / p), t = coefficient of T^{deg H - 1}.
struct AdditiveCharacter {
  Poly h;
  Poly w;
};

inline AdditiveCharacter additive_character(const Poly& h, const Poly& w) {
  require(!h.is_zero() && h.is_monic() && h.degree() >= 1, "additive character modulus must be monic of degree >= 1");
  require(w.degree() < h.degree(), "deg W must be less than deg H");
  return {h, w};
}

// Trace value in [0, p) of the character at B.
inline std::uint32_t additive_trace(const AdditiveCharacter& lambda, const Poly& b) {
  const Poly r = (lambda.w * b) % lambda.h;
  const auto& field = *lambda.h.field();
  return field.trace_value(r.coeff(static_cast<std::size_t>(lambda.h.degree() - 1)));
}

inline RootOfUnity additive_root(const AdditiveCharacter& lambda, const Poly& b) {
  return RootOfUnity(lambda.h.field()->characteristic(), additive_trace(lambda, b));
}

inline ScalarValue additive_char_eval(const AdditiveCharacter& lambda, const Poly& b) {
  return ScalarValue(additive_root(lambda, b));
}

// Σ λ(B) over residues B mod H with M | B, as an exact cyclotomic sum.
inline CyclotomicSum additive_sum_over_multiples_brute(const AdditiveCharacter& lambda, const Poly& m) {
  require(divides(m, lambda.h), "M must divide H");
  CyclotomicSum sum(lambda.h.field()->characteristic());
  for (const auto& b : residues(lambda.h)) {
    if (divides(m, b)) sum.add(additive_root(lambda, b), 1);
  }
  return sum;
}

inline BigInt additive_sum_over_multiples_closed(const AdditiveCharacter& lambda, const Poly& m) {
  require(divides(m, lambda.h), "M must divide H");
  const Poly cofactor = exact_quotient(lambda.h, m.monic());
  return divides(cofactor, lambda.w) ? abs_value(cofactor) : BigInt(0);
}

inline std::vector<AdditiveCharacter> all_additive_characters(const Poly& h) {
  std::vector<AdditiveCharacter> out;
  for (const auto& w : residues(h)) out.push_back(additive_character(h, w));
  return out;
}

}  // namespace fqmenon
