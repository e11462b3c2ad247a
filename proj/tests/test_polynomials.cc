#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "hofa/error.h"
#include "hofa/polynomial.h"
#include "hofa/torsion.h"
#include "oracles.h"

using namespace hofa;

namespace {

// Values of the monomial formula as numerators over p^(K+1), K = depth(P).
std::vector<long long> naive_values(const NonClassicalPoly& poly) {
  const int p = poly.params().p();
  const int n = poly.params().n();
  const int top = poly.depth();
  const long long modulus = oracle::ipow(p, top + 1);
  std::vector<long long> out(oracle::ipow(p, n));
  for (std::size_t x = 0; x < out.size(); ++x) {
    const auto c = oracle::coords(static_cast<int>(x), p, n);
    long long s = 0;
    for (const auto& m : poly.monomials()) {
      long long term = m.coefficient;
      for (int i = 0; i < n; ++i) {
        for (int e = 0; e < m.exponents[i]; ++e) term = term * c[i] % modulus;
      }
      s += term * oracle::ipow(p, top - m.depth);
    }
    out[x] = s % modulus;
  }
  return out;
}

NonClassicalPoly quarter_x1(int n) { return NonClassicalPoly::coordinate(FieldParams(2, n), 0, 1); }

DegreeCheckOptions mode(DegreeCheck m) {
  DegreeCheckOptions o;
  o.mode = m;
  return o;
}

}  // namespace

TEST(Torsion, ArithmeticNormalizes) {
  const TorsionValue a{2, 1, 1};  // 1/4
  const TorsionValue b{2, 0, 1};  // 1/2
  const auto s = a + b;
  EXPECT_EQ(s.level, 1);
  EXPECT_EQ(s.numerator, 3u);
  EXPECT_EQ((a - a).normalized().numerator, 0u);
  EXPECT_EQ((b + b).to_double(), 0.0);
  EXPECT_NEAR(std::abs(a.character() - std::complex<double>(0, 1)), 0.0, 1e-15);
}

TEST(Evaluate, Examples) {
  const FieldParams params(2, 3);
  const auto zero = NonClassicalPoly::zero(params);
  for (PointIndex x = 0; x < 8; ++x) EXPECT_EQ(zero.evaluate(x).to_double(), 0.0);
  const auto half = NonClassicalPoly::coordinate(params, 0);
  EXPECT_EQ(half.evaluate(std::vector<int>{1, 0, 1}).to_double(), 0.5);
  const auto q = quarter_x1(3);
  std::set<double> values;
  for (PointIndex x = 0; x < 8; ++x) values.insert(q.evaluate(x).to_double());
  EXPECT_EQ(values, (std::set<double>{0.0, 0.25}));
  EXPECT_EQ(q.degree(), 2);
  EXPECT_EQ(q.depth(), 1);
}

TEST(Evaluate, MatchesMonomialFormula) {
  for (int p : {2, 3, 5}) {
    const FieldParams params(p, 2);
    for (int t = 0; t < 20; ++t) {
      CounterRng rng = CounterRng::derive(p, t);
      const auto poly = random_poly(params, 2 * (p - 1) + 1, 1, rng);
      const auto table = poly.table();
      const auto expect = naive_values(poly);
      ASSERT_EQ(table.level(), poly.depth());
      for (std::size_t x = 0; x < expect.size(); ++x) EXPECT_EQ(table.numerator(x), expect[x]);
    }
  }
}

TEST(Representation, RejectsInvalidMonomials) {
  const FieldParams params(2, 2);
  EXPECT_THROW(NonClassicalPoly(params, {Monomial{{2, 0}, 0, 1}}), Error);           // exponent >= p
  EXPECT_THROW(NonClassicalPoly(params, {Monomial{{1, 0}, 0, 1}, Monomial{{1, 0}, 0, 1}}), Error);
  EXPECT_THROW(NonClassicalPoly(params, {Monomial{{0, 0}, 1, 1}}), Error);           // constant above depth 0
  EXPECT_THROW(NonClassicalPoly(params, {Monomial{{1}, 0, 1}}), Error);              // wrong arity
}

TEST(Derivative, Examples) {
  const FieldParams params(2, 3);
  const auto q = quarter_x1(1);
  EXPECT_TRUE(add_derivative(q, 0).is_zero());
  const auto d = add_derivative(q, 1);
  EXPECT_EQ(d.at(0).to_double(), 0.25);
  EXPECT_EQ(d.at(1).to_double(), 0.75);
  const auto lin = NonClassicalPoly::linear(params, {1, 1, 0});
  for (PointIndex h = 0; h < 8; ++h) {
    const auto dh = add_derivative(lin, h);
    EXPECT_TRUE(dh.is_constant());
    EXPECT_EQ(dh.at(0), lin.evaluate(h) - lin.evaluate(PointIndex{0}));
  }
}

TEST(Derivative, LowersDegree) {
  for (int t = 0; t < 30; ++t) {
    CounterRng rng = CounterRng::derive(11, t);
    const FieldParams params(t % 2 == 0 ? 2 : 3, 3);
    const auto poly = random_poly(params, 3, 1, rng);
    if (poly.degree() == 0) continue;
    for (PointIndex h = 0; h < params.size(); ++h) {
      EXPECT_TRUE(verify_degree(add_derivative(poly, h), poly.degree() - 1));
    }
  }
}

TEST(VerifyDegree, Examples) {
  const FieldParams params(2, 2);
  for (auto m : {DegreeCheck::kExhaustive, DegreeCheck::kBasis, DegreeCheck::kRandomized, DegreeCheck::kAuto}) {
    EXPECT_TRUE(verify_degree(NonClassicalPoly::zero(params), 0, mode(m)));
    const NonClassicalPoly x1x2(params, {Monomial{{1, 1}, 0, 1}});
    EXPECT_FALSE(verify_degree(x1x2, 1, mode(m)));
    EXPECT_TRUE(verify_degree(x1x2, 2, mode(m)));
    EXPECT_FALSE(verify_degree(quarter_x1(2), 1, mode(m)));
    EXPECT_TRUE(verify_degree(quarter_x1(2), 2, mode(m)));
  }
}

TEST(VerifyDegree, ZeroAndConstantConventions) {
  const FieldParams params(3, 2);
  EXPECT_TRUE(verify_degree(TorsionTable(params, 0), -1));
  const NonClassicalPoly c(params, {Monomial{{0, 0}, 0, 2}});
  EXPECT_FALSE(verify_degree(c, -1));
  EXPECT_TRUE(verify_degree(c, 0));
  EXPECT_EQ(measured_degree(TorsionTable(params, 0)), -1);
  EXPECT_EQ(measured_degree(c.table()), 0);
}

TEST(VerifyDegree, ModesAgreeWithNaiveOracle) {
  for (int t = 0; t < 40; ++t) {
    CounterRng rng = CounterRng::derive(12, t);
    const int p = t % 2 == 0 ? 2 : 3;
    const int n = p == 2 ? 3 : 2;
    const FieldParams params(p, n);
    const auto poly = random_poly(params, 3, 1, rng);
    const auto vals = naive_values(poly);
    const long long modulus = oracle::ipow(p, poly.depth() + 1);
    for (int d = std::max(0, poly.degree() - 1); d <= poly.degree(); ++d) {
      const bool truth = oracle::degree_at_most_naive(vals, modulus, p, n, d);
      EXPECT_EQ(truth, d == poly.degree());
      EXPECT_EQ(verify_degree(poly, d, mode(DegreeCheck::kExhaustive)), truth);
      EXPECT_EQ(verify_degree(poly, d, mode(DegreeCheck::kBasis)), truth);
    }
  }
}

TEST(VerifyDegree, RandomizedCatchesFalseClaims) {
  const FieldParams params(2, 6);
  const NonClassicalPoly cubic(params, {Monomial{{1, 1, 1, 0, 0, 0}, 0, 1}});
  auto o = mode(DegreeCheck::kRandomized);
  o.samples = 500;
  EXPECT_FALSE(verify_degree(cubic, 2, o));
  EXPECT_TRUE(verify_degree(cubic, 3, o));
}

TEST(VerifyDegree, ExhaustiveCapacityGuard) {
  const FieldParams params(2, 12);
  auto o = mode(DegreeCheck::kExhaustive);
  EXPECT_THROW(verify_degree(NonClassicalPoly::zero(params), 3, o), Error);
}

TEST(Bias, Examples) {
  const FieldParams params(2, 2);
  EXPECT_EQ(bias(NonClassicalPoly::zero(params)), 1.0);
  EXPECT_NEAR(bias(NonClassicalPoly::linear(params, {1, 1})), 0.0, 1e-15);
  EXPECT_NEAR(bias(NonClassicalPoly(params, {Monomial{{1, 1}, 0, 1}})), 0.5, 1e-12);
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_polys(FieldParams(2, 3), 1, 0).size(), 16u);
  EXPECT_EQ(enumerate_polys(FieldParams(2, 3), 2, 0).size(), 128u);
  const auto small = enumerate_polys(FieldParams(2, 1), 2, 1);
  EXPECT_EQ(small.size(), 8u);
  const auto q = quarter_x1(1).table();
  EXPECT_TRUE(std::any_of(small.begin(), small.end(), [&](const NonClassicalPoly& p) {
    return p.table() == q;
  }));
  EXPECT_EQ(poly_count(FieldParams(2, 3), 2, 0), 128u);
}

TEST(Enumerate, EachPolynomialOnce) {
  const FieldParams params(3, 2);
  std::set<std::vector<std::uint32_t>> tables;
  std::uint64_t visits = 0;
  for_each_poly(params, 2, 0, [&](const std::vector<int>&, const TorsionTable& table) {
    tables.insert(std::vector<std::uint32_t>(table.numerators().begin(), table.numerators().end()));
    ++visits;
  });
  EXPECT_EQ(visits, poly_count(params, 2, 0));
  EXPECT_EQ(tables.size(), visits);
}

TEST(Enumerate, TablesMatchCoefficients) {
  const FieldParams params(2, 2);
  const auto keys = admissible_keys(params, 3, 1);
  for_each_poly(params, 3, 1, [&](const std::vector<int>& coeffs, const TorsionTable& table) {
    EXPECT_EQ(poly_from_coefficients(params, keys, coeffs).table().at_level(table.level()), table);
  });
}

TEST(Enumerate, GuardRejectsHugeSpaces) {
  EXPECT_THROW(enumerate_polys(FieldParams(2, 10), 3, 0), Error);
}

TEST(Enumerate, DegreeConsistency) {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& poly : enumerate_polys(FieldParams(2, n), 3, 1)) {
      EXPECT_TRUE(verify_degree(poly, poly.degree()));
      if (poly.degree() > 0) EXPECT_FALSE(verify_degree(poly, poly.degree() - 1));
    }
  }
}

TEST(Enumerate, DepthBoundsValueLevel) {
  for (const auto& poly : enumerate_polys(FieldParams(3, 2), 3, 1)) {
    EXPECT_LE(poly.table().min_level(), poly.depth());
  }
}

TEST(PolyIo, RoundTripAndErrors) {
  CounterRng rng(13);
  const auto poly = random_poly(FieldParams(3, 3), 4, 1, rng);
  std::istringstream in(format_poly(poly));
  EXPECT_EQ(parse_poly(in).table(), poly.table());
  std::istringstream bad("2 2\n0 1 1 0\n0 1 3 0\n");
  try {
    parse_poly(bad, "p.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("p.txt:3"), std::string::npos) << e.what();
  }
}
