#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hofa/decompose.h"
#include "hofa/error.h"
#include "hofa/factor.h"
#include "hofa/gowers.h"
#include "hofa/polynomial.h"
#include "oracles.h"

using namespace hofa;

namespace {

NonClassicalPoly lin(const FieldParams& params, std::vector<int> a) {
  return NonClassicalPoly::linear(params, a);
}

NonClassicalPoly x1x2(const FieldParams& params) {
  std::vector<int> e(params.n(), 0);
  e[0] = e[1] = 1;
  return NonClassicalPoly(params, {Monomial{e, 0, 1}});
}

PolynomialFactor random_factor(const FieldParams& params, int degree, int count, CounterRng& rng) {
  PolynomialFactor factor(params);
  for (int i = 0; i < count; ++i) factor.add(random_poly(params, degree, 0, rng));
  return factor;
}

FiniteFunction restrict_to_atom(const FiniteFunction& f, const PolynomialFactor& factor, std::uint32_t atom) {
  std::vector<double> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = factor.atom_id(x) == atom ? f.real_at(x) : 0.0;
  return FiniteFunction::real(f.params(), std::move(v), RangeKind::kSigned);
}

}  // namespace

TEST(Factor, EmptyFactorHasOneAtom) {
  const PolynomialFactor factor(FieldParams(3, 2));
  EXPECT_EQ(factor.complexity(), 0);
  EXPECT_EQ(factor.order(), 1u);
  EXPECT_EQ(factor.atom_count(), 1u);
  EXPECT_TRUE(atom_of(factor, 4).empty());
}

TEST(Factor, LinearAtoms) {
  const FieldParams params(2, 2);
  const PolynomialFactor one(params, {lin(params, {1, 0})});
  ASSERT_EQ(one.atom_count(), 2u);
  EXPECT_EQ(one.atom_size(0), 2u);
  EXPECT_EQ(one.atom_size(1), 2u);
  const PolynomialFactor two(params, {lin(params, {1, 0}), lin(params, {1, 1})});
  ASSERT_EQ(two.atom_count(), 4u);
  for (std::uint32_t a = 0; a < 4; ++a) EXPECT_EQ(two.atom_size(a), 1u);
}

TEST(Factor, OrderAndLabels) {
  const FieldParams params(3, 2);
  const PolynomialFactor factor(params, {lin(params, {1, 2}), NonClassicalPoly::coordinate(params, 1, 1)});
  EXPECT_EQ(factor.order(), 3u * 9u);
  for (PointIndex x = 0; x < params.size(); ++x) {
    const auto values = atom_of(factor, x);
    EXPECT_EQ(factor.encode(values), factor.label(x));
    EXPECT_EQ(factor.decode(factor.label(x)), values);
  }
  EXPECT_LE(factor.atom_count(), factor.order());
}

TEST(CondExpectation, Examples) {
  const FieldParams params(2, 2);
  CounterRng rng(1);
  const auto f = random_real(params, RangeKind::kUnit, rng);
  const auto e = cond_expectation(f, PolynomialFactor(params));
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(e.real_at(x), mean(f), 1e-15);
  const auto xor_fn = FiniteFunction::finite(params, 2, {0, 1, 1, 0});
  const PolynomialFactor b(params, {lin(params, {1, 0})});
  const auto half = cond_expectation(xor_fn, b);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_EQ(half.real_at(x), 0.5);
  const auto measurable = FiniteFunction::finite(params, 2, {0, 1, 0, 1});
  EXPECT_EQ(l1_distance(cond_expectation(measurable, b), measurable), 0.0);
  EXPECT_TRUE(is_measurable(half, b));
  EXPECT_FALSE(is_measurable(xor_fn, b));
}

TEST(AtomStats, Examples) {
  const FieldParams p4(2, 4);
  const auto equi = atom_stats(PolynomialFactor(p4, {lin(p4, {1, 0, 1, 0}), lin(p4, {0, 1, 1, 1})}));
  EXPECT_EQ(equi.nonempty, 4u);
  for (const auto& [label, prob] : equi.probabilities) EXPECT_EQ(prob, 0.25);
  EXPECT_EQ(equi.max_deviation, 0.0);
  const FieldParams p2(2, 2);
  const auto quad = atom_stats(PolynomialFactor(p2, {x1x2(p2)}));
  ASSERT_EQ(quad.probabilities.size(), 2u);
  EXPECT_EQ(quad.probabilities.begin()->second, 0.75);
  EXPECT_EQ(quad.probabilities.rbegin()->second, 0.25);
}

TEST(AtomStats, EmptyAtomsCountTowardDeviation) {
  const FieldParams params(2, 3);
  const auto s = atom_stats(PolynomialFactor(params, {lin(params, {1, 0, 0}), lin(params, {1, 0, 0})}));
  EXPECT_EQ(s.nonempty, 2u);
  EXPECT_EQ(s.max_deviation, 0.25);
}

TEST(AtomStats, DeviationBoundedByProxyBias) {
  const FieldParams params(2, 8);
  for (int t = 0; t < 10; ++t) {
    CounterRng rng = CounterRng::derive(2, t);
    const auto factor = random_factor(params, 2, 3, rng);
    EXPECT_LE(atom_stats(factor).max_deviation, factor_rank_proxy(factor, false).max_bias + 1e-12);
  }
}

TEST(RankProxy, Examples) {
  const FieldParams params(2, 6);
  EXPECT_NEAR(factor_rank_proxy(PolynomialFactor(params, {lin(params, {1, 0, 0, 0, 0, 0})})).max_bias, 0.0, 1e-15);
  const auto x1 = lin(params, {1, 0, 0, 0, 0, 0});
  EXPECT_NEAR(factor_rank_proxy(PolynomialFactor(params, {x1, x1})).max_bias, 1.0, 1e-15);
}

TEST(RankProxy, MatchesBruteForceOverLambdas) {
  const FieldParams params(2, 6);
  const std::vector<NonClassicalPoly> polys{lin(params, {1, 0, 0, 0, 0, 0}), lin(params, {0, 1, 0, 0, 0, 0}),
                                            x1x2(params)};
  const auto proxy = factor_rank_proxy(PolynomialFactor(params, polys));
  EXPECT_EQ(proxy.combinations, 7u);
  double brute = 0.0;
  for (int lam = 1; lam < 8; ++lam) {
    std::complex<double> s = 0.0;
    for (PointIndex x = 0; x < params.size(); ++x) {
      int v = 0;
      for (int i = 0; i < 3; ++i) {
        if (lam & (1 << i)) v += static_cast<int>(polys[i].evaluate(x).numerator);
      }
      s += (v % 2 == 0) ? 1.0 : -1.0;
    }
    brute = std::max(brute, std::abs(s) / static_cast<double>(params.size()));
  }
  EXPECT_NEAR(proxy.max_bias, brute, 1e-12);
  EXPECT_NEAR(proxy.max_bias, 0.5, 1e-12);
  EXPECT_EQ(proxy.gowers_order, 2);
  EXPECT_LE(proxy.max_gowers, 1.0 + 1e-12);
}

TEST(Inequalities, AtomRestrictionAndL1Bound) {
  const FieldParams params(2, 6);
  for (int t = 0; t < 50; ++t) {
    CounterRng rng = CounterRng::derive(3, t);
    const int d = 1 + t % 2;
    const auto f = random_real(params, RangeKind::kSigned, rng);
    const auto factor = random_factor(params, d, 1 + t % 3, rng);
    const double whole = gowers_norm(f, d + 1);
    for (std::uint32_t a = 0; a < factor.atom_count(); ++a) {
      EXPECT_LE(gowers_norm(restrict_to_atom(f, factor, a), d + 1), whole + 1e-12);
    }
    EXPECT_LE(l1_norm(cond_expectation(f, factor)), std::pow(2.0, d * factor.complexity()) * whole + 1e-12);
  }
}

TEST(Refinement, SemanticChecks) {
  const FieldParams params(2, 3);
  const PolynomialFactor coarse(params, {lin(params, {1, 1, 0})});
  const PolynomialFactor fine(params, {lin(params, {1, 0, 0}), lin(params, {0, 1, 0})});
  EXPECT_TRUE(is_semantic_refinement(fine, coarse));
  EXPECT_FALSE(is_semantic_refinement(coarse, fine));
}

TEST(Refinement, Examples) {
  const FieldParams params(2, 6);
  CounterRng rng(4);
  const auto f = random_finite(params, 2, rng);
  const PolynomialFactor b(params, {lin(params, {1, 0, 0, 1, 0, 0})});
  PolynomialFactor b2 = b;
  b2.add(lin(params, {0, 1, 1, 0, 0, 0}));
  const auto f1 = cond_expectation(f, b);
  const auto zero = FiniteFunction::constant_real(params, 0.0);
  const auto f3 = subtract(f, f1);
  EXPECT_EQ(refinement_error(f, b, b, zero, f3, 1).lhs, 0.0);
  const auto measurable = FiniteFunction::real(params, f1.to_real());
  EXPECT_EQ(refinement_error(measurable, b, b2, zero, zero, 1).lhs, 0.0);
  const auto r = refinement_error(f, b, b2, zero, f3, 1);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.lhs, r.rhs);
  try {
    refinement_error(f, b2, b, zero, f3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotARefinement);
  }
}

TEST(Decompose, MeasurableInputStopsImmediately) {
  const FieldParams params(2, 5);
  const PolynomialFactor b0(params, {lin(params, {1, 1, 0, 0, 0})});
  const auto f = FiniteFunction::finite(params, 2, [&] {
    std::vector<std::uint8_t> v(params.size());
    for (PointIndex x = 0; x < params.size(); ++x) v[x] = static_cast<std::uint8_t>(b0.polys()[0].table.numerator(x));
    return v;
  }());
  const auto dec = decompose(f, {}, b0);
  EXPECT_EQ(dec.factor.complexity(), 1);
  EXPECT_EQ(linf_norm(dec.f2), 0.0);
  EXPECT_EQ(linf_norm(dec.f3), 0.0);
}

TEST(Decompose, SingleCharacterFound) {
  const FieldParams params(2, 5);
  const auto chi = lin(params, {1, 0, 1, 1, 0});
  std::vector<std::uint8_t> v(params.size());
  for (PointIndex x = 0; x < params.size(); ++x) v[x] = 1 - chi.evaluate(x).numerator;  // (1 + (-1)^<a,x>)/2
  const auto f = FiniteFunction::finite(params, 2, v);
  const auto dec = decompose(f, {});
  ASSERT_EQ(dec.factor.complexity(), 1);
  EXPECT_EQ(dec.factor.polys()[0].table, chi.table());
  EXPECT_EQ(l1_distance(dec.f1, f), 0.0);
  EXPECT_EQ(linf_norm(dec.f3), 0.0);
  EXPECT_FALSE(dec.non_convergence);
}

TEST(Decompose, RandomFunctionInvariants) {
  const FieldParams params(2, 8);
  CounterRng rng(5);
  const auto f = random_finite(params, 2, rng);
  DecomposeOptions opts;
  opts.degree = 1;
  opts.tau = 0.1;
  const auto dec = decompose(f, opts);
  for (std::size_t x = 0; x < f.size(); ++x) {
    const double sum = dec.f1.real_at(x) + dec.f2.real_at(x) + dec.f3.real_at(x);
    EXPECT_NEAR(sum, f.real_at(x), 1e-12);
    EXPECT_GE(dec.f1.real_at(x), 0.0);
    EXPECT_LE(dec.f1.real_at(x), 1.0);
    EXPECT_LE(std::abs(dec.f3.real_at(x)), 1.0);
  }
  for (std::size_t i = 1; i < dec.energies.size(); ++i) {
    EXPECT_GE(dec.energies[i] - dec.energies[i - 1], opts.tau * opts.tau - 1e-12);
  }
  // Fourier cross-check: f3 has no mass on the span of the adjoined characters.
  const auto coeffs = oracle::dft(dec.f3.to_real(), 2, 8);
  double fourth = 0.0;
  for (const auto& c : coeffs) fourth += std::pow(std::norm(c), 2);
  EXPECT_NEAR(std::pow(fourth, 0.25), dec.f3_gowers, 1e-9);
  EXPECT_EQ(dec.f3_order, 2);
  for (const auto& poly : dec.factor.polys()) {
    int alpha = 0;
    for (int i = 0; i < 8; ++i) alpha |= static_cast<int>(poly.table.numerator(params.basis(i))) << i;
    EXPECT_NEAR(std::abs(coeffs[alpha]), 0.0, 1e-12);
  }
}

TEST(Decompose, PlantedStructureWithInitialFactor) {
  const FieldParams params(2, 6);
  CounterRng rng(6);
  const auto a = lin(params, {1, 1, 0, 0, 0, 0});
  const auto b = lin(params, {0, 0, 1, 0, 1, 0});
  std::vector<std::uint8_t> v(params.size());
  for (PointIndex x = 0; x < params.size(); ++x) {
    v[x] = static_cast<std::uint8_t>((a.evaluate(x).numerator & b.evaluate(x).numerator) ^ (rng.bernoulli(0.05) ? 1 : 0));
  }
  const auto f = FiniteFunction::finite(params, 2, v);
  const PolynomialFactor b0(params, {a});
  DecomposeOptions opts;
  opts.tau = 0.15;
  const auto dec = decompose(f, opts, b0);
  EXPECT_EQ(dec.initial_complexity, 1);
  EXPECT_GE(dec.factor.complexity(), 2);
  EXPECT_EQ(dec.factor.polys()[0].table, a.table());
  EXPECT_LT(dec.f3_gowers, gowers_norm(subtract(f, cond_expectation(f, b0)), 2));
}

TEST(Decompose, ComplexityCapFlagsNonConvergence) {
  const FieldParams params(2, 6);
  CounterRng rng(7);
  const auto f = random_finite(params, 2, rng);
  DecomposeOptions opts;
  opts.tau = 0.01;
  opts.max_complexity = 2;
  const auto dec = decompose(f, opts);
  EXPECT_TRUE(dec.non_convergence);
  EXPECT_EQ(dec.factor.complexity(), 2);
}

TEST(Decompose, RejectsBadInput) {
  const FieldParams params(2, 4);
  EXPECT_THROW(decompose(FiniteFunction::constant_real(params, -0.5), {}), Error);
  DecomposeOptions opts;
  opts.tau = 0.0;
  EXPECT_THROW(decompose(FiniteFunction::constant_real(params, 0.5), opts), Error);
}

TEST(FactorIo, RoundTripAndRestriction) {
  const FieldParams params(3, 3);
  CounterRng rng(8);
  const auto factor = random_factor(params, 2, 3, rng);
  std::istringstream in(format_factor(factor));
  const auto back = parse_factor(in);
  EXPECT_EQ(back.labels(), factor.labels());
  EXPECT_EQ(back.signature(), factor.signature());
  const auto a = sample_affine_embedding(rng, 2, 3, 3);
  const auto r = factor.restrict(a);
  for (PointIndex x = 0; x < r.params().size(); ++x) EXPECT_EQ(r.label(x), factor.label(a.apply_index(x)));
}

TEST(FactorIo, MismatchedBlockRejected) {
  std::istringstream in("2 2 1\n2 3\n0 1 1 0 0\n");
  EXPECT_THROW(parse_factor(in, "b.txt"), Error);
}
