#pragma once

// Table-driven arithmetic in A/H for the brute-force enumerations.
//
// Residues are addressed by index: the residue Σ c_i T^i (deg < deg H) has
// index Σ code(c_i) q^i. Monic divisors of H are addressed by their position
// in the canonical divisor list.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fqmenon/errors.hpp"
#include "fqmenon/poly.hpp"

namespace fqmenon {

// Monic divisors of H with their exponent vectors over the primes of H.
class DivisorLattice {
 public:
  explicit DivisorLattice(const Poly& h)
      : field_(h.field()), factorization_(factorize(h)) {
    for (const auto& [p, e] : factorization_.factors) {
      primes_.push_back(p);
      top_.push_back(e);
    }
    std::vector<std::vector<int>> exps{{}};
    for (int top : top_) {
      std::vector<std::vector<int>> next;
      for (const auto& v : exps) {
        for (int e = 0; e <= top; ++e) {
          auto w = v;
          w.push_back(e);
          next.push_back(std::move(w));
        }
      }
      exps = std::move(next);
    }
    std::vector<std::pair<Poly, std::vector<int>>> items;
    for (auto& v : exps) items.emplace_back(build(v), std::move(v));
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
    for (auto& [d, v] : items) {
      divisors_.push_back(std::move(d));
      exps_.push_back(std::move(v));
    }
    const std::size_t n = divisors_.size();
    meet_.resize(n * n);
    join_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        std::vector<int> lo(top_.size()), hi(top_.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
          lo[i] = std::min(exps_[a][i], exps_[b][i]);
          hi[i] = std::max(exps_[a][i], exps_[b][i]);
        }
        meet_[a * n + b] = static_cast<std::uint32_t>(index_of_exps(lo));
        join_[a * n + b] = static_cast<std::uint32_t>(index_of_exps(hi));
      }
    }
  }

  std::size_t size() const { return divisors_.size(); }
  const Poly& divisor(std::size_t i) const { return divisors_[i]; }
  const std::vector<Poly>& divisors() const { return divisors_; }
  const std::vector<int>& exponents(std::size_t i) const { return exps_[i]; }
  const std::vector<Poly>& primes() const { return primes_; }
  const std::vector<int>& top_exponents() const { return top_; }
  const Factorization& factorization() const { return factorization_; }
  // index of H itself
  std::size_t top() const { return index_of_exps(top_); }

  // gcd of two divisors
  std::uint32_t meet(std::size_t a, std::size_t b) const { return meet_[a * divisors_.size() + b]; }
  // lcm of two divisors
  std::uint32_t join(std::size_t a, std::size_t b) const { return join_[a * divisors_.size() + b]; }
  // index of 1
  std::size_t bottom() const { return 0; }

  std::size_t index_of_exps(const std::vector<int>& v) const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] == v) return i;
    }
    throw PreconditionError("exponent vector is not a divisor of H");
  }

  // Position of the monic associate of d; d must divide H.
  std::size_t index_of(const Poly& d) const {
    const Poly m = d.monic();
    for (std::size_t i = 0; i < divisors_.size(); ++i) {
      if (divisors_[i] == m) return i;
    }
    throw PreconditionError(to_string(d) + " does not divide the modulus");
  }

 private:
  Poly build(const std::vector<int>& v) const {
    Poly out = Poly::one(field_);
    for (std::size_t i = 0; i < v.size(); ++i) out *= pow(primes_[i], static_cast<unsigned>(v[i]));
    return out;
  }

  FieldPtr field_;
  Factorization factorization_;
  std::vector<Poly> primes_;
  std::vector<int> top_;
  std::vector<Poly> divisors_;
  std::vector<std::vector<int>> exps_;
  std::vector<std::uint32_t> meet_;
  std::vector<std::uint32_t> join_;
};

class ResidueRing;
using ResidueRingPtr = std::shared_ptr<const ResidueRing>;

// A/H for monic H of degree >= 0 (H = 1 gives the one-element ring).
class ResidueRing {
 public:
  static constexpr std::uint64_t kMaxSize = 1u << 22;
  static constexpr std::uint64_t kAddTableMaxSize = 1024;

  static ResidueRingPtr make(const Poly& h) { return ResidueRingPtr(new ResidueRing(h)); }

  const FieldPtr& field() const { return field_; }
  const Poly& modulus() const { return h_; }
  int degree() const { return degree_; }
  std::uint32_t size() const { return size_; }
  const DivisorLattice& lattice() const { return lattice_; }

  Poly poly(std::uint32_t i) const { return Poly::from_index(field_, i); }
  std::uint32_t index(const Poly& a) const {
    return static_cast<std::uint32_t>((a % h_).to_index());
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (!add_.empty()) return add_[static_cast<std::size_t>(a) * size_ + b];
    return digit_add(a, b);
  }
  std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg_[b]); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return index(poly(a) * poly(b)); }

  bool is_unit(std::uint32_t a) const { return unit_[a] != 0; }
  const std::vector<std::uint32_t>& units() const { return units_; }

  // Divisor index of gcd(a, H); gcd(0, H) = H.
  std::uint32_t gcd_divisor(std::uint32_t a) const { return gcd_div_[a]; }

  // Residue of a modulo the divisor with index d, as an index in A/d.
  std::uint32_t reduce(std::size_t d, std::uint32_t a) const { return reduce_[d][a]; }
  bool divisible(std::size_t d, std::uint32_t a) const { return reduce_[d][a] == 0; }

 private:
  explicit ResidueRing(const Poly& h)
      : field_(h.field()), h_(h), lattice_(h) {
    require(!h.is_zero() && h.is_monic(), "residue ring modulus must be monic");
    degree_ = h.degree();
    const std::uint64_t size = saturating_pow(field_->order(), static_cast<std::uint64_t>(degree_));
    if (size > kMaxSize) throw BudgetExceeded("residue ring too large", size, kMaxSize);
    size_ = static_cast<std::uint32_t>(size);

    neg_.resize(size_);
    unit_.resize(size_);
    gcd_div_.resize(size_);
    for (std::uint32_t i = 0; i < size_; ++i) {
      const Poly a = poly(i);
      neg_[i] = static_cast<std::uint32_t>((-a).to_index());
      const Poly g = gcd(a, h_);
      unit_[i] = g.is_one();
      if (unit_[i]) units_.push_back(i);
      gcd_div_[i] = static_cast<std::uint32_t>(lattice_.index_of(g));
    }
    if (size_ <= kAddTableMaxSize) {
      add_.resize(static_cast<std::size_t>(size_) * size_);
      for (std::uint32_t a = 0; a < size_; ++a) {
        for (std::uint32_t b = 0; b < size_; ++b) add_[static_cast<std::size_t>(a) * size_ + b] = digit_add(a, b);
      }
    }
    reduce_.resize(lattice_.size());
    for (std::size_t d = 0; d < lattice_.size(); ++d) {
      reduce_[d].resize(size_);
      const Poly& div = lattice_.divisor(d);
      for (std::uint32_t i = 0; i < size_; ++i) {
        reduce_[d][i] = static_cast<std::uint32_t>((poly(i) % div).to_index());
      }
    }
  }

  std::uint32_t digit_add(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t q = field_->order();
    std::uint32_t out = 0, scale = 1;
    for (int i = 0; i < degree_; ++i) {
      out += field_->add(FieldElement(a % q), FieldElement(b % q)).code() * scale;
      a /= q;
      b /= q;
      scale *= q;
    }
    return out;
  }

  FieldPtr field_;
  Poly h_;
  DivisorLattice lattice_;
  int degree_ = 0;
  std::uint32_t size_ = 1;
  std::vector<std::uint32_t> add_;
  std::vector<std::uint32_t> neg_;
  std::vector<char> unit_;
  std::vector<std::uint32_t> units_;
  std::vector<std::uint32_t> gcd_div_;
  std::vector<std::vector<std::uint32_t>> reduce_;
};

}  // namespace fqmenon

namespace fqmenon {

// Calls visit(tuple, sum) for every k-tuple over `pool`, in odometer order
// (last coordinate fastest), where sum is the residue of the tuple's sum.
template <typename Visit>
void for_each_tuple(const ResidueRing& ring, std::span<const std::uint32_t> pool, int k,
                    Visit&& visit) {
  std::vector<std::uint32_t> tuple(static_cast<std::size_t>(k));
  if (k == 0) {
    visit(std::span<const std::uint32_t>(tuple), std::uint32_t{0});
    return;
  }
  if (pool.empty()) return;
  std::vector<std::size_t> pos(static_cast<std::size_t>(k), 0);
  std::vector<std::uint32_t> partial(static_cast<std::size_t>(k) + 1, 0);
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    tuple[j] = pool[0];
    partial[j + 1] = ring.add(partial[j], tuple[j]);
  }
  while (true) {
    visit(std::span<const std::uint32_t>(tuple), partial.back());
    std::size_t i = tuple.size();
    while (i > 0 && ++pos[i - 1] == pool.size()) {
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
    for (std::size_t j = i - 1; j < tuple.size(); ++j) {
      tuple[j] = pool[pos[j]];
      partial[j + 1] = ring.add(partial[j], tuple[j]);
    }
  }
}

}  // namespace fqmenon
