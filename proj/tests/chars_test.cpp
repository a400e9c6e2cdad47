#include <gtest/gtest.h>

#include <map>
#include <set>
#include <vector>

#include "fqmenon/chars.hpp"

namespace fqmenon {
namespace {

Poly P(const FieldPtr& f, const char* text) { return parse_poly(f, text); }

class CharsTest : public ::testing::Test {
 protected:
  FieldPtr f2 = Field::make(2, 1);
  FieldPtr f3 = Field::make(3, 1);
  FieldPtr f4 = Field::make(2, 2);

  std::vector<Poly> grid() const {
    std::vector<Poly> out;
    for (const auto& f : {f2, f3}) {
      for (const auto& h : monic_polys_up_to(f, 3)) out.push_back(h);
    }
    for (const auto& h : monic_polys_up_to(f4, 2)) out.push_back(h);
    return out;
  }
};

TEST_F(CharsTest, UnitGroupExamples) {
  auto g = unit_group(P(f3, "T"));
  ASSERT_EQ(g->generators().size(), 1u);
  EXPECT_EQ(g->generators()[0].order, 2u);
  EXPECT_EQ(g->ring().poly(g->generators()[0].residue), P(f3, "2"));

  g = unit_group(P(f2, "T^2"));
  ASSERT_EQ(g->generators().size(), 1u);
  EXPECT_EQ(g->ring().poly(g->generators()[0].residue), P(f2, "T+1"));
  EXPECT_EQ(g->generators()[0].order, 2u);

  g = unit_group(P(f2, "T^2+T"));
  EXPECT_EQ(g->size(), 1u);
  EXPECT_TRUE(g->generators().empty());
}

TEST_F(CharsTest, UnitGroupStructure) {
  for (const auto& h : grid()) {
    const auto g = unit_group(h);
    std::uint64_t product = 1;
    for (const auto& gen : g->generators()) {
      product *= gen.order;
      ASSERT_EQ(g->power(gen.residue, gen.order), g->ring().index(Poly::one(h.field())));
    }
    ASSERT_EQ(product, euler_phi(h));
    // dlog inverts the exponent map
    for (auto u : g->ring().units()) {
      const auto e = g->dlog(u);
      ASSERT_TRUE(e.has_value());
      std::uint32_t x = g->ring().index(Poly::one(h.field()));
      for (std::size_t i = 0; i < e->size(); ++i) {
        x = g->ring().mul(x, g->power(g->generators()[i].residue, (*e)[i]));
      }
      ASSERT_EQ(x, u);
    }
  }
}

TEST_F(CharsTest, CharacterExamples) {
  const auto chars = characters(P(f3, "T"));
  ASSERT_EQ(chars.size(), 2u);
  EXPECT_TRUE(chars[0].is_trivial());
  EXPECT_EQ(char_eval(chars[1], P(f3, "2")), ScalarValue(-1));
  EXPECT_EQ(char_eval(chars[1], P(f3, "1")), ScalarValue(1));
  EXPECT_EQ(char_eval(chars[1], P(f3, "T")), ScalarValue(0));
  EXPECT_EQ(char_eval(chars[1], P(f3, "T+2")), ScalarValue(-1));
  EXPECT_EQ(characters(P(f2, "T^2+T")).size(), 1u);
}

TEST_F(CharsTest, TrivialCharacterIsOneOnUnitsAndZeroElsewhere) {
  for (const auto& h : grid()) {
    const auto chi = characters(h).front();
    for (const auto& a : residues(h)) {
      const bool unit = !a.is_zero() && gcd(a, h).is_one();
      ASSERT_EQ(char_eval(chi, a), ScalarValue(unit ? 1 : 0));
    }
  }
}

TEST_F(CharsTest, CountAndOrthogonality) {
  for (const auto& h : grid()) {
    const auto chars = characters(h);
    const auto us = units(h);
    ASSERT_EQ(BigInt(chars.size()), euler_phi(h)) << h;
    // Row orthogonality: Σ_A χ(A) \bar ψ(A) = φ(H) δ_{χψ}.
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = 0; j < chars.size(); ++j) {
        CyclotomicSum sum(1);
        for (const auto& a : us) {
          const auto x = *chars[i].at(a), y = *chars[j].at(a);
          sum.add(x * RootOfUnity(y.order(), -static_cast<std::int64_t>(y.exponent())), 1);
        }
        const BigInt expected = i == j ? BigInt(us.size()) : BigInt(0);
        ASSERT_EQ(sum.rational_value(), std::optional<BigInt>(expected)) << h << " " << i << "," << j;
      }
    }
    // Column orthogonality: Σ_χ χ(A) = φ(H) if A ≡ 1 else 0.
    for (const auto& a : us) {
      CyclotomicSum sum(1);
      for (const auto& chi : chars) sum.add(*chi.at(a), 1);
      const BigInt expected = a.is_one() ? BigInt(us.size()) : BigInt(0);
      ASSERT_EQ(sum.rational_value(), std::optional<BigInt>(expected)) << h << " " << a;
    }
  }
}

TEST_F(CharsTest, CharactersAreMultiplicativeAndDistinct) {
  for (const auto& h : grid()) {
    const auto chars = characters(h);
    const auto rs = residues(h);
    std::set<std::vector<std::int64_t>> tables;
    for (const auto& chi : chars) {
      for (const auto& a : rs) {
        for (const auto& b : rs) {
          ASSERT_EQ(char_eval(chi, a * b), char_eval(chi, a) * char_eval(chi, b)) << h << " " << a << " " << b;
        }
      }
      std::vector<std::int64_t> table;
      for (const auto& a : rs) {
        const auto v = chi.at(a);
        table.push_back(v ? static_cast<std::int64_t>(v->exponent_in(chi.table_order())) : -1);
      }
      tables.insert(table);
    }
    ASSERT_EQ(tables.size(), chars.size());
  }
}

TEST_F(CharsTest, CharactersArePeriodic) {
  const Poly h = P(f3, "T^2+1");
  const auto chars = characters(h);
  for (const auto& chi : chars) {
    for (const auto& a : residues(h)) ASSERT_EQ(char_eval(chi, a + h * P(f3, "T+2")), char_eval(chi, a));
  }
}

TEST_F(CharsTest, ConductorExamples) {
  for (const auto& h : grid()) EXPECT_TRUE(conductor(characters(h).front()).is_one());
  EXPECT_EQ(conductor(characters(P(f3, "T"))[1]), P(f3, "T"));
  const auto chars = characters(P(f2, "T^2"));
  ASSERT_EQ(chars.size(), 2u);
  EXPECT_EQ(char_eval(chars[1], P(f2, "T+1")), ScalarValue(-1));
  EXPECT_EQ(conductor(chars[1]), P(f2, "T^2"));
}

// A divisor D of H is an induced modulus when χ is constant on unit classes
// mod D; the conductor is the induced modulus dividing all others.
TEST_F(CharsTest, ConductorDividesEveryInducedModulus) {
  for (const auto& h : grid()) {
    const auto us = units(h);
    for (const auto& chi : characters(h)) {
      const Poly d = conductor(chi);
      bool any = false;
      for (const auto& m : divisors(h)) {
        std::map<std::string, ScalarValue> seen;
        bool periodic = true;
        for (const auto& a : us) {
          const std::string key = m.is_one() ? "" : to_string(a % m);
          const auto v = char_eval(chi, a);
          auto [it, inserted] = seen.emplace(key, v);
          if (!inserted && !(it->second == v)) {
            periodic = false;
            break;
          }
        }
        if (periodic) {
          any = true;
          ASSERT_TRUE(divides(d, m)) << h << " conductor " << d << " induced " << m;
        }
        if (m == d) {
          ASSERT_TRUE(periodic);
        }
      }
      ASSERT_TRUE(any);
    }
  }
}

TEST_F(CharsTest, PrimitiveLift) {
  for (const auto& h : grid()) {
    for (const auto& chi : characters(h)) {
      const auto psi = primitive_lift(chi);
      ASSERT_EQ(psi.modulus(), conductor(chi));
      if (psi.modulus().degree() >= 1) {
        ASSERT_TRUE(is_primitive(psi));
      }
      for (const auto& a : units(h)) ASSERT_EQ(char_eval(psi, a), char_eval(chi, a)) << h << " " << a;
    }
  }
}

TEST_F(CharsTest, PrimitiveCharacterLiftsToItself) {
  for (const auto& chi : characters(P(f3, "T^2"))) {
    if (!is_primitive(chi)) continue;
    const auto psi = primitive_lift(chi);
    EXPECT_EQ(psi.exponents(), chi.exponents());
  }
}

TEST_F(CharsTest, LiftOfTrivialIsModulusOne) {
  const auto psi = primitive_lift(characters(P(f3, "T^2+T"))[0]);
  EXPECT_TRUE(psi.modulus().is_one());
  EXPECT_EQ(char_eval(psi, P(f3, "T")), ScalarValue(1));
  EXPECT_EQ(char_eval(psi, Poly(f3)), ScalarValue(1));
}

TEST_F(CharsTest, LiftRecoversInducingCharacter) {
  // χ(A) = ψ(A mod T) on units mod T(T+1), ψ the nontrivial character mod T.
  const Poly h = P(f3, "T^2+T");
  const auto psi_t = characters(P(f3, "T"))[1];
  bool found = false;
  for (const auto& chi : characters(h)) {
    bool induced = true;
    for (const auto& a : units(h)) induced = induced && char_eval(chi, a) == char_eval(psi_t, a);
    if (!induced) continue;
    found = true;
    const auto psi = primitive_lift(chi);
    EXPECT_EQ(psi.modulus(), P(f3, "T"));
    EXPECT_EQ(char_eval(psi, P(f3, "2")), ScalarValue(-1));
  }
  EXPECT_TRUE(found);
}

TEST_F(CharsTest, AdditiveExamples) {
  const Poly t = P(f2, "T");
  for (const auto& b : residues(t)) EXPECT_EQ(additive_char_eval(additive_character(t, Poly(f2)), b), ScalarValue(1));
  EXPECT_EQ(additive_char_eval(additive_character(t, P(f2, "1")), P(f2, "1")), ScalarValue(-1));
  EXPECT_EQ(additive_char_eval(additive_character(t, P(f2, "1")), Poly(f2)), ScalarValue(1));
  EXPECT_EQ(additive_char_eval(additive_character(P(f2, "T^2"), P(f2, "1")), t), ScalarValue(-1));
  EXPECT_EQ(all_additive_characters(t).size(), 2u);
  EXPECT_THROW(additive_character(t, P(f2, "T")), PreconditionError);
}

TEST_F(CharsTest, AdditiveCharactersAreDistinctHomomorphisms) {
  for (const auto& h : grid()) {
    if (abs_value(h) > 64) continue;
    const auto rs = residues(h);
    std::set<std::vector<std::uint32_t>> tables;
    for (const auto& lambda : all_additive_characters(h)) {
      std::vector<std::uint32_t> table;
      for (const auto& b : rs) {
        table.push_back(additive_trace(lambda, b));
        for (const auto& c : rs) {
          ASSERT_EQ(additive_root(lambda, b + c), additive_root(lambda, b) * additive_root(lambda, c));
        }
      }
      tables.insert(table);
    }
    ASSERT_EQ(tables.size(), rs.size()) << h;
  }
}

TEST_F(CharsTest, AdditiveSumOverMultiples) {
  const Poly h = P(f2, "T^2");
  const auto lambda = additive_character(h, P(f2, "1"));
  EXPECT_TRUE(additive_sum_over_multiples_brute(lambda, P(f2, "T")).is_zero());
  EXPECT_EQ(additive_sum_over_multiples_closed(lambda, P(f2, "T")), 0);
  for (const auto& hh : grid()) {
    if (abs_value(hh) > 64) continue;
    for (const auto& m : divisors(hh)) {
      for (const auto& lam : all_additive_characters(hh)) {
        const auto brute = additive_sum_over_multiples_brute(lam, m);
        ASSERT_EQ(brute.rational_value(), std::optional<BigInt>(additive_sum_over_multiples_closed(lam, m)));
        if (lam.w.is_zero()) {
          ASSERT_EQ(brute.rational_value(), std::optional<BigInt>(abs_value(hh) / abs_value(m)));
        }
        if (m == hh) {
          ASSERT_EQ(brute.rational_value(), std::optional<BigInt>(1));
        }
      }
    }
  }
}

}  // namespace
}  // namespace fqmenon
