#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "fqmenon/poly.hpp"
#include "oracle.hpp"

namespace fqmenon {
namespace {

Poly P(const FieldPtr& f, const char* text) { return parse_poly(f, text); }

oracle::IntPoly to_int(const Poly& a) {
  oracle::IntPoly out;
  for (auto c : a.coeffs()) out.push_back(static_cast<int>(c.code()));
  return out;
}

// All polynomials of degree <= d, including zero.
std::vector<Poly> all_polys(const FieldPtr& f, int d) {
  std::vector<Poly> out;
  std::uint64_t count = 1;
  for (int i = 0; i <= d; ++i) count *= f->order();
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(Poly::from_index(f, i));
  return out;
}

class PolyTest : public ::testing::Test {
 protected:
  FieldPtr f2 = Field::make(2, 1);
  FieldPtr f3 = Field::make(3, 1);
  FieldPtr f4 = Field::make(2, 2);
};

TEST_F(PolyTest, DivmodExamples) {
  auto [q1, r1] = divmod(P(f2, "T^2+T"), P(f2, "T"));
  EXPECT_EQ(q1, P(f2, "T+1"));
  EXPECT_TRUE(r1.is_zero());
  auto [q2, r2] = divmod(P(f3, "T^2+1"), P(f3, "T+1"));
  EXPECT_EQ(q2, P(f3, "T+2"));
  EXPECT_EQ(r2, P(f3, "2"));
  const Poly a = P(f3, "2*T^2+T");
  auto [q3, r3] = divmod(a, a);
  EXPECT_TRUE(q3.is_one());
  EXPECT_TRUE(r3.is_zero());
  EXPECT_THROW(divmod(a, Poly(f3)), PreconditionError);
}

TEST_F(PolyTest, ArithmeticMatchesReference) {
  for (const auto& f : {f2, f3}) {
    const int p = static_cast<int>(f->characteristic());
    const auto polys = all_polys(f, 3);
    for (const auto& a : polys) {
      for (const auto& b : polys) {
        ASSERT_EQ(to_int(a * b), oracle::mul(to_int(a), to_int(b), p));
        ASSERT_EQ(to_int(a + b), oracle::add(to_int(a), to_int(b), p));
        if (b.is_monic()) {
          ASSERT_EQ(to_int(a % b), oracle::mod_monic(to_int(a), to_int(b), p));
        }
      }
    }
  }
}

TEST_F(PolyTest, DivmodRoundTrip) {
  for (const auto& f : {f2, f3}) {
    const auto polys = all_polys(f, 4);
    const auto divisors_ = all_polys(f, 2);
    for (const auto& a : polys) {
      for (const auto& b : divisors_) {
        if (b.is_zero()) continue;
        auto [q, r] = divmod(a, b);
        ASSERT_EQ(q * b + r, a);
        ASSERT_TRUE(r.is_zero() || r.degree() < b.degree());
      }
    }
  }
}

TEST_F(PolyTest, GcdExamples) {
  EXPECT_EQ(gcd(P(f2, "T^2+T"), P(f2, "T^2")), P(f2, "T"));
  EXPECT_EQ(gcd(Poly(f3), P(f3, "2*T+1")), P(f3, "T+2"));
  EXPECT_EQ(gcd(P(f3, "2*T+2"), P(f3, "T+1")), P(f3, "T+1"));
  EXPECT_THROW(gcd(Poly(f3), Poly(f3)), PreconditionError);
}

TEST_F(PolyTest, GcdIsGreatestCommonDivisor) {
  for (const auto& f : {f2, f3}) {
    const auto polys = all_polys(f, 3);
    std::vector<Poly> monics;
    for (const auto& d : polys) {
      if (d.is_monic()) monics.push_back(d);
    }
    for (const auto& a : polys) {
      for (const auto& b : polys) {
        if (a.is_zero() && b.is_zero()) continue;
        // Highest-degree monic dividing both, by exhaustive search.
        Poly best = Poly::one(f);
        for (const auto& d : monics) {
          if (divides(d, a) && divides(d, b) && d.degree() > best.degree()) best = d;
        }
        if (a.is_zero() || b.is_zero()) best = (a.is_zero() ? b : a).monic();
        const Poly g = gcd(a, b);
        ASSERT_EQ(g, best) << to_string(a) << ", " << to_string(b);
        ASSERT_TRUE(g.is_monic());
      }
    }
  }
}

TEST_F(PolyTest, ExtendedGcdBezout) {
  const auto polys = all_polys(f3, 2);
  for (const auto& a : polys) {
    for (const auto& b : polys) {
      if (a.is_zero() && b.is_zero()) continue;
      const auto eg = extended_gcd(a, b);
      ASSERT_EQ(a * eg.x + b * eg.y, eg.gcd);
      ASSERT_EQ(eg.gcd, gcd(a, b));
    }
  }
}

TEST_F(PolyTest, LcmExamples) {
  EXPECT_EQ(lcm(P(f2, "T"), P(f2, "T+1")), P(f2, "T^2+T"));
  const Poly p = P(f3, "T^2+1");
  EXPECT_EQ(lcm(pow(p, 2), pow(p, 3)), pow(p, 3));
  EXPECT_EQ(lcm(P(f3, "2*T+1"), Poly::one(f3)), P(f3, "T+2"));
}

TEST_F(PolyTest, CrtExamples) {
  using Pairs = std::vector<std::pair<Poly, Poly>>;
  Pairs a{{Poly::one(f2), P(f2, "T")}, {Poly(f2), P(f2, "T+1")}};
  EXPECT_EQ(crt_solve(a), P(f2, "T+1"));
  Pairs b{{P(f3, "T^2+2"), P(f3, "T+1")}};
  EXPECT_EQ(crt_solve(b), P(f3, "T^2+2") % P(f3, "T+1"));
  Pairs c{{Poly::one(f3), P(f3, "T")}, {Poly::one(f3), P(f3, "T+1")}};
  EXPECT_EQ(crt_solve(c), Poly::one(f3));
  Pairs bad{{Poly::one(f3), P(f3, "T")}, {Poly::one(f3), P(f3, "T^2")}};
  EXPECT_THROW(crt_solve(bad), PreconditionError);
}

TEST_F(PolyTest, CrtSolutionReducesCorrectly) {
  const std::vector<Poly> moduli{P(f3, "T^2"), P(f3, "T+1"), P(f3, "T^2+1")};
  for (const auto& r0 : residues(moduli[0])) {
    for (const auto& r1 : residues(moduli[1])) {
      for (const auto& r2 : residues(moduli[2])) {
        std::vector<std::pair<Poly, Poly>> pairs{{r0, moduli[0]}, {r1, moduli[1]}, {r2, moduli[2]}};
        const Poly x = crt_solve(pairs);
        ASSERT_LT(x.degree(), 5);
        for (const auto& [r, m] : pairs) ASSERT_EQ(x % m, r);
      }
    }
  }
}

TEST_F(PolyTest, ResiduesAndUnits) {
  const auto r = residues(P(f2, "T"));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(r[0].is_zero());
  EXPECT_TRUE(r[1].is_one());
  EXPECT_EQ(units(P(f2, "T^2")), (std::vector<Poly>{P(f2, "1"), P(f2, "T+1")}));
  EXPECT_EQ(units(P(f3, "T")), (std::vector<Poly>{P(f3, "1"), P(f3, "2")}));
  const auto all = residues(P(f3, "T^3"));
  EXPECT_EQ(all.size(), 27u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end(), canonical_less));
}

TEST_F(PolyTest, FactorizeExamples) {
  auto fac = factorize(P(f2, "T^2+T"));
  ASSERT_EQ(fac.factors.size(), 2u);
  EXPECT_EQ(fac.factors[0], std::make_pair(P(f2, "T"), 1));
  EXPECT_EQ(fac.factors[1], std::make_pair(P(f2, "T+1"), 1));
  fac = factorize(P(f2, "T^2+1"));
  ASSERT_EQ(fac.factors.size(), 1u);
  EXPECT_EQ(fac.factors[0], std::make_pair(P(f2, "T+1"), 2));
  EXPECT_TRUE(is_irreducible(P(f3, "T^2+1")));
  fac = factorize(P(f3, "2*T^2+2"));
  EXPECT_EQ(fac.unit, FieldElement(2));
  EXPECT_EQ(fac.factors.size(), 1u);
  EXPECT_EQ(to_string(factorize(P(f3, "T^4+2")), *f3), "(T+1) * (T+2) * (T^2+1)");
}

TEST_F(PolyTest, FactorizationReconstructsInput) {
  for (const auto& f : {f2, f3, f4}) {
    const int maxdeg = f->order() == 4 ? 3 : 5;
    for (const auto& h : monic_polys_up_to(f, maxdeg)) {
      const auto fac = factorize(h);
      ASSERT_EQ(fac.product(f), h);
      for (const auto& [p, e] : fac.factors) {
        ASSERT_TRUE(p.is_monic());
        ASSERT_TRUE(is_irreducible(p));
        ASSERT_GE(e, 1);
      }
    }
  }
}

TEST_F(PolyTest, IrreducibleCountsMatchNecklaceFormula) {
  for (const auto& f : {f2, f3, f4}) {
    const int maxdeg = f->order() == 4 ? 3 : 5;
    for (int d = 1; d <= maxdeg; ++d) {
      const auto irr = monic_irreducibles(f, d);
      EXPECT_EQ(static_cast<std::int64_t>(irr.size()), oracle::irreducible_count(f->order(), d))
          << "q=" << f->order() << " d=" << d;
    }
  }
}

TEST_F(PolyTest, DivisorsExamples) {
  EXPECT_EQ(divisors(P(f2, "T^2")), (std::vector<Poly>{P(f2, "1"), P(f2, "T"), P(f2, "T^2")}));
  EXPECT_EQ(divisors(P(f2, "T^2+T")),
            (std::vector<Poly>{P(f2, "1"), P(f2, "T"), P(f2, "T+1"), P(f2, "T^2+T")}));
  EXPECT_EQ(divisors(P(f3, "2")), (std::vector<Poly>{P(f3, "1")}));
}

TEST_F(PolyTest, DivisorsAreExactlyTheMonicDivisors) {
  for (const auto& h : monic_polys_up_to(f3, 3)) {
    std::vector<Poly> expected;
    for (const auto& d : monic_polys_up_to(f3, h.degree())) {
      if (divides(d, h)) expected.push_back(d);
    }
    expected.insert(expected.begin(), Poly::one(f3));
    ASSERT_EQ(divisors(h), expected) << to_string(h);
  }
}

TEST_F(PolyTest, AbsoluteValue) {
  EXPECT_EQ(abs_value(P(f2, "T^2")), 4);
  EXPECT_EQ(abs_value(P(f3, "T")), 3);
  EXPECT_EQ(abs_value(P(f3, "2")), 1);
  EXPECT_THROW(abs_value(Poly(f3)), PreconditionError);
}

TEST_F(PolyTest, TextRoundTrip) {
  for (const auto& f : {f2, f3, f4}) {
    for (const auto& a : all_polys(f, 3)) ASSERT_EQ(parse_poly(f, to_string(a)), a) << to_string(a);
  }
  EXPECT_EQ(P(f3, "coeffs=[1,2,1]"), P(f3, "T^2+2*T+1"));
  EXPECT_EQ(P(f4, "coeffs=[[1,0],[0,1]]"), P(f4, "[0,1]*T+[1,0]"));
  EXPECT_EQ(to_string(P(f3, "T^2+2*T+1")), "T^2+2*T+1");
}

TEST_F(PolyTest, ParseErrors) {
  for (const char* bad : {"", "T^", "T+", "3*T", "2T", "T^2+T^2", "x", "T + 1", "[1,0]*T", "0*T"}) {
    EXPECT_THROW(P(f3, bad), ParseError) << bad;
  }
  EXPECT_THROW(P(f4, "T+1"), ParseError);
  EXPECT_THROW(P(f4, "[1,2]*T"), ParseError);
}

TEST_F(PolyTest, MixedFieldsRejected) {
  EXPECT_THROW(P(f2, "T") + P(f3, "T"), PreconditionError);
}

TEST_F(PolyTest, CanonicalOrder) {
  const auto polys = monic_polys_up_to(f3, 2);
  EXPECT_TRUE(std::is_sorted(polys.begin(), polys.end(), canonical_less));
  EXPECT_EQ(polys.front(), P(f3, "T"));
  EXPECT_EQ(polys[1], P(f3, "T+1"));
  EXPECT_EQ(polys[3], P(f3, "T^2"));
}

}  // namespace
}  // namespace fqmenon
