#include <gtest/gtest.h>

#include <vector>

#include "fqmenon/multfunc.hpp"
#include "oracle.hpp"

namespace fqmenon {
namespace {

Poly P(const FieldPtr& f, const char* text) { return parse_poly(f, text); }

// Tuples of units mod H whose sum is coprime to M, by direct enumeration over
// polynomials.
std::int64_t phi_k_oracle(const Poly& h, const Poly& m, int k) {
  const auto us = units(h);
  std::int64_t count = 0;
  oracle::for_each_tuple<Poly>(us, k, [&](const std::vector<Poly>& t) {
    Poly sum(h.field());
    for (const auto& x : t) sum += x;
    if (!sum.is_zero() && gcd(sum, m).is_one()) ++count;
    if (sum.is_zero() && m.degree() == 0) ++count;
  });
  return count;
}

class MultFuncTest : public ::testing::Test {
 protected:
  FieldPtr f2 = Field::make(2, 1);
  FieldPtr f3 = Field::make(3, 1);
  FieldPtr f4 = Field::make(2, 2);
};

TEST_F(MultFuncTest, MoebiusExamples) {
  EXPECT_EQ(moebius(P(f2, "T")), -1);
  EXPECT_EQ(moebius(P(f2, "T^2+1")), 0);
  EXPECT_EQ(moebius(P(f2, "T^2+T")), 1);
  EXPECT_EQ(moebius(P(f3, "2")), 1);
  EXPECT_EQ(moebius(P(f3, "1")), 1);
}

TEST_F(MultFuncTest, EulerPhiExamples) {
  EXPECT_EQ(euler_phi(P(f2, "T^2")), 2);
  EXPECT_EQ(euler_phi(P(f2, "T^2+T")), 1);
  EXPECT_EQ(euler_phi(P(f3, "T")), 2);
  EXPECT_EQ(euler_phi(P(f3, "1")), 1);
}

TEST_F(MultFuncTest, EulerPhiCountsUnits) {
  for (const auto& f : {f2, f3, f4}) {
    for (const auto& h : monic_polys_up_to(f, 4)) {
      ASSERT_EQ(euler_phi(h), BigInt(units(h).size())) << h;
    }
  }
}

TEST_F(MultFuncTest, MoebiusSumsToIndicator) {
  for (const auto& f : {f2, f3}) {
    for (const auto& h : monic_polys_up_to(f, 4)) {
      int sum = 0;
      for (const auto& d : divisors(h)) sum += moebius(d);
      ASSERT_EQ(sum, 0) << h;
    }
  }
}

TEST_F(MultFuncTest, TauCountsDivisors) {
  EXPECT_EQ(tau(P(f2, "T^2")), 3);
  for (const auto& h : monic_polys_up_to(f3, 3)) ASSERT_EQ(tau(h), BigInt(divisors(h).size()));
}

TEST_F(MultFuncTest, PhiKExamples) {
  EXPECT_EQ(phi_k_brute(P(f3, "T"), 2), 2);
  EXPECT_EQ(phi_k_brute(P(f2, "T"), 2), 0);
  EXPECT_EQ(phi_k_formula(P(f3, "T"), 2), 2);
  EXPECT_EQ(phi_k_formula(P(f2, "T"), 2), 0);
  EXPECT_EQ(phi_k_two_arg_brute(P(f2, "T^2+T"), P(f2, "T"), 2), 0);
  EXPECT_EQ(phi_k_two_arg_formula(P(f2, "T^2+T"), P(f2, "T"), 2), 0);
}

TEST_F(MultFuncTest, PhiOneIsEuler) {
  for (const auto& h : monic_polys_up_to(f3, 3)) {
    ASSERT_EQ(phi_k_brute(h, 1), euler_phi(h));
    ASSERT_EQ(phi_k_formula(h, 1), euler_phi(h));
  }
}

TEST_F(MultFuncTest, PhiKBruteMatchesTupleOracle) {
  for (const auto& f : {f2, f3}) {
    for (const auto& h : monic_polys_up_to(f, 2)) {
      for (const auto& m : divisors(h)) {
        for (int k = 1; k <= 3; ++k) {
          ASSERT_EQ(phi_k_two_arg_brute(h, m, k), phi_k_oracle(h, m, k)) << h << " " << m << " k=" << k;
        }
      }
    }
  }
}

TEST_F(MultFuncTest, PhiKFormulaMatchesBrute) {
  for (const auto& f : {f2, f3}) {
    for (const auto& h : monic_polys_up_to(f, 3)) {
      for (int k = 1; k <= 3; ++k) ASSERT_EQ(phi_k_formula(h, k), phi_k_brute(h, k)) << h << " k=" << k;
    }
  }
}

TEST_F(MultFuncTest, TwoArgumentFormulaMatchesBrute) {
  for (const auto& f : {f2, f3}) {
    for (const auto& h : monic_polys_up_to(f, 3)) {
      for (const auto& m : divisors(h)) {
        for (int k = 1; k <= 3; ++k) {
          ASSERT_EQ(phi_k_two_arg_formula(h, m, k), phi_k_two_arg_brute(h, m, k)) << h << " " << m;
        }
      }
    }
  }
}

TEST_F(MultFuncTest, TwoArgumentBoundaryCases) {
  for (const auto& h : monic_polys_up_to(f3, 2)) {
    for (int k = 1; k <= 3; ++k) {
      ASSERT_EQ(phi_k_two_arg_formula(h, Poly::one(f3), k), boost::multiprecision::pow(euler_phi(h), k));
      ASSERT_EQ(phi_k_two_arg_formula(h, h, k), phi_k_formula(h, k));
    }
  }
}

TEST_F(MultFuncTest, RecursionHolds) {
  for (const auto& f : {f2, f3}) {
    for (const auto& h : monic_polys_up_to(f, 3)) {
      for (const auto& m : divisors(h)) {
        for (int k = 2; k <= 3; ++k) {
          const Rational r = phi_k_two_arg_recursion(h, m, k);
          ASSERT_EQ(boost::multiprecision::denominator(r), 1);
          ASSERT_EQ(r, Rational(phi_k_two_arg_brute(h, m, k))) << h << " " << m << " k=" << k;
        }
      }
    }
  }
}

TEST_F(MultFuncTest, PhiKOverF4) {
  for (const auto& h : monic_polys_up_to(f4, 2)) {
    for (int k = 1; k <= 3; ++k) ASSERT_EQ(phi_k_formula(h, k), phi_k_brute(h, k)) << h;
  }
}

TEST_F(MultFuncTest, PhiKBudget) {
  EXPECT_THROW(phi_k_brute(P(f3, "T^3"), 3, Budget(100)), BudgetExceeded);
  EXPECT_NO_THROW(phi_k_brute(P(f3, "T^3"), 3, Budget(19683)));
}

TEST_F(MultFuncTest, PhiKPreconditions) {
  EXPECT_THROW(phi_k_brute(P(f3, "T"), 0), PreconditionError);
  EXPECT_THROW(phi_k_formula(P(f3, "1"), 2), PreconditionError);
  EXPECT_THROW(phi_k_two_arg_formula(P(f3, "T"), P(f3, "T+1"), 2), PreconditionError);
}

TEST_F(MultFuncTest, ConvolutionExamples) {
  const auto one = arith_func("one"), mu = arith_func("mu"), abs = arith_func("abs"),
             phi = arith_func("phi");
  EXPECT_EQ(dirichlet_convolution(mu, abs, Poly::one(f2)), abs(Poly::one(f2)));
  EXPECT_EQ(dirichlet_convolution(mu, one, P(f2, "T")), ScalarValue(0));
  EXPECT_EQ(dirichlet_convolution(phi, one, P(f2, "T^2")), ScalarValue(4));
  EXPECT_EQ(abs(P(f2, "T^2")), ScalarValue(4));
  EXPECT_EQ(arith_func("tau")(P(f2, "T^2")), ScalarValue(3));
}

TEST_F(MultFuncTest, ClassicalConvolutionIdentities) {
  const auto one = arith_func("one"), mu = arith_func("mu"), abs = arith_func("abs"),
             phi = arith_func("phi"), tau = arith_func("tau"), unit = arith_func("indicator_unit");
  for (const auto& f : {f2, f3}) {
    for (const auto& h : monic_polys_up_to(f, 3)) {
      ASSERT_EQ(dirichlet_convolution(mu, abs, h), phi(h)) << h;
      ASSERT_EQ(dirichlet_convolution(phi, one, h), abs(h)) << h;
      ASSERT_EQ(dirichlet_convolution(one, one, h), tau(h)) << h;
      ASSERT_EQ(dirichlet_convolution(mu, one, h), unit(h)) << h;
      ASSERT_EQ(convolve(mu, tau)(h), one(h)) << h;
    }
  }
}

TEST_F(MultFuncTest, FunctionsAreUnitInvariant) {
  for (const auto& fn : builtin_functions()) {
    for (const auto& h : monic_polys_up_to(f3, 2)) ASSERT_EQ(fn(h), fn(h.scaled(FieldElement(2))));
  }
}

TEST_F(MultFuncTest, FunctionNames) {
  EXPECT_EQ(arith_func("abs_s:3")(P(f2, "T")), ScalarValue(8));
  EXPECT_THROW(arith_func("sigma"), ParseError);
  EXPECT_THROW(arith_func("abs_s:x"), ParseError);
  EXPECT_THROW(arith_func("abs")(Poly(f2)), PreconditionError);
}

TEST_F(MultFuncTest, AlternatingFactor) {
  EXPECT_EQ(alternating_factor(BigInt(3), 1), Rational(1));
  EXPECT_EQ(alternating_factor(BigInt(3), 2), Rational(1, 2));
  EXPECT_EQ(alternating_factor(BigInt(3), 3), Rational(3, 4));
  EXPECT_EQ(alternating_factor(BigInt(2), 2), Rational(0));
}

}  // namespace
}  // namespace fqmenon
