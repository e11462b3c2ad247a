#include <gtest/gtest.h>

#include <cmath>

#include "hofa/distribution.h"
#include "hofa/error.h"
#include "hofa/function.h"
#include "hofa/gowers.h"
#include "hofa/parallel.h"
#include "hofa/polynomial.h"
#include "oracles.h"

using namespace hofa;

namespace {

FiniteFunction random_pm1(const FieldParams& params, CounterRng& rng) {
  std::vector<double> v(params.size());
  for (auto& x : v) x = rng.bernoulli(0.5) ? 1.0 : -1.0;
  return FiniteFunction::real(params, std::move(v), RangeKind::kSigned);
}

FiniteFunction random_disc(const FieldParams& params, CounterRng& rng) {
  std::vector<Complex> v(params.size());
  for (auto& z : v) z = std::polar(rng.uniform01(), 2.0 * std::numbers::pi * rng.uniform01());
  return FiniteFunction::complex(params, std::move(v));
}

FiniteFunction phase(const NonClassicalPoly& poly) {
  return FiniteFunction::complex(poly.params(), poly.table().characters());
}

}  // namespace

TEST(MultDerivative, Examples) {
  const FieldParams params(2, 2);
  CounterRng rng(1);
  const auto f = random_pm1(params, rng);
  const auto d0 = mult_derivative(f, 0);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(d0.complex_at(x).real(), 1.0, 1e-15);
  const auto one = mult_derivative(FiniteFunction::constant_real(params, 1.0), 3);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(one.complex_at(x).real(), 1.0, 1e-15);
  const auto chi = FiniteFunction::real(params, {1, -1, 1, -1}, RangeKind::kSigned);
  const auto d1 = mult_derivative(chi, params.basis(0));
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(d1.complex_at(x).real(), -1.0, 1e-15);
}

TEST(GowersExact, Examples) {
  for (int d = 1; d <= 4; ++d) EXPECT_NEAR(gowers_norm(FiniteFunction::constant_real(FieldParams(2, 3), 1.0), d), 1.0, 1e-12);
  const FieldParams params(2, 2);
  EXPECT_NEAR(gowers_norm(FiniteFunction::real(params, {1, -1, 1, -1}, RangeKind::kSigned), 2), 1.0, 1e-12);
  EXPECT_NEAR(gowers_norm(FiniteFunction::finite(params, 2, {1, 0, 0, 0}), 2), std::pow(2.0, -1.5), 1e-12);
}

TEST(GowersExact, OrderOneIsAbsoluteMean) {
  CounterRng rng(2);
  const auto f = random_real(FieldParams(3, 3), RangeKind::kSigned, rng);
  EXPECT_NEAR(gowers_norm(f, 1), std::abs(mean(f)), 1e-12);
}

TEST(GowersExact, AgreesWithNaiveDefinition) {
  CounterRng rng(3);
  for (int t = 0; t < 5; ++t) {
    const auto f = random_disc(FieldParams(2, 3), rng);
    for (int d = 1; d <= 3; ++d) {
      EXPECT_NEAR(gowers_norm(f, d), oracle::gowers_naive(f.to_complex(), 2, 3, d), 1e-9);
    }
    const auto g = random_disc(FieldParams(3, 2), rng);
    for (int d = 1; d <= 2; ++d) {
      EXPECT_NEAR(gowers_norm(g, d), oracle::gowers_naive(g.to_complex(), 3, 2, d), 1e-9);
    }
  }
}

TEST(GowersExact, U2MatchesFourierOracle) {
  for (int t = 0; t < 20; ++t) {
    CounterRng rng = CounterRng::derive(4, t);
    const auto f = random_real(FieldParams(2, 6), RangeKind::kSigned, rng);
    EXPECT_NEAR(gowers_norm(f, 2), oracle::u2_fourier(f.to_real(), 2, 6), 1e-9);
    const auto g = random_real(FieldParams(3, 3), RangeKind::kUnit, rng);
    EXPECT_NEAR(gowers_norm(g, 2), oracle::u2_fourier(g.to_real(), 3, 3), 1e-9);
  }
}

TEST(GowersExact, Errors) {
  const auto f = FiniteFunction::constant_real(FieldParams(2, 10), 1.0);
  EXPECT_THROW(gowers_norm(f, 0), Error);
  try {
    gowers_norm(f, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacityExceeded);
  }
}

TEST(GowersExact, Monotone) {
  for (int t = 0; t < 100; ++t) {
    CounterRng rng = CounterRng::derive(5, t);
    const auto f = random_real(FieldParams(2, 4), RangeKind::kSigned, rng);
    double prev = gowers_norm(f, 1);
    for (int d = 2; d <= 3; ++d) {
      const double next = gowers_norm(f, d);
      EXPECT_LE(prev, next + 1e-12);
      prev = next;
    }
  }
}

TEST(GowersExact, BoundedByL1Root) {
  for (int t = 0; t < 100; ++t) {
    CounterRng rng = CounterRng::derive(6, t);
    const auto f = random_real(FieldParams(2, 5), RangeKind::kSigned, rng);
    for (int d = 2; d <= 3; ++d) EXPECT_LE(gowers_norm(f, d), std::pow(l1_norm(f), 1.0 / (1 << d)) + 1e-12);
  }
}

TEST(GowersExact, ClassicalPhasesHaveUnitNorm) {
  int count = 0;
  const FieldParams params(2, 3);
  for (const auto& poly : enumerate_polys(params, 2, 0)) {
    EXPECT_NEAR(gowers_norm(phase(poly), 3), 1.0, 1e-9);
    ++count;
  }
  EXPECT_EQ(count, 128);
  const NonClassicalPoly cubic(params, {Monomial{{1, 1, 1}, 0, 1}});
  EXPECT_LT(gowers_norm(phase(cubic), 3), 1.0 - 1e-3);
  EXPECT_NEAR(gowers_norm(phase(cubic), 4), 1.0, 1e-9);
}

TEST(GowersExact, NonClassicalPhaseNorms) {
  // |x_1|/4 has degree 2: U^3 norm 1, U^2 norm below 1.
  const auto poly = NonClassicalPoly::coordinate(FieldParams(2, 3), 0, 1);
  EXPECT_NEAR(gowers_norm(phase(poly), 3), 1.0, 1e-9);
  EXPECT_LT(gowers_norm(phase(poly), 2), 1.0 - 1e-3);
}

TEST(GowersEstimate, ConstantsAreExact) {
  const FieldParams params(2, 6);
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL}) {
    EXPECT_EQ(gowers_norm_estimate(FiniteFunction::constant_real(params, 1.0), 3, 100, seed).value, 1.0);
    EXPECT_EQ(gowers_norm_estimate(FiniteFunction::constant_real(params, 0.0), 3, 100, seed).value, 0.0);
  }
}

TEST(GowersEstimate, WithinFourStdErrorsMostSeeds) {
  CounterRng rng(7);
  const auto f = random_pm1(FieldParams(2, 8), rng);
  const auto exact = gowers_norm_exact(f, 2);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto est = gowers_norm_estimate(f, 2, 100000, seed);
    EXPECT_FALSE(est.exact);
    EXPECT_GT(est.std_error, 0.0);
    if (std::abs(est.power - exact.power) <= 4.0 * est.std_error) ++good;
  }
  EXPECT_GE(good, 95);
}

TEST(GowersEstimate, IndependentOfThreadCount) {
  CounterRng rng(8);
  const auto f = random_pm1(FieldParams(2, 7), rng);
  set_thread_count(1);
  const auto a = gowers_norm_estimate(f, 3, 5000, 42);
  set_thread_count(3);
  const auto b = gowers_norm_estimate(f, 3, 5000, 42);
  set_thread_count(0);
  EXPECT_EQ(a.power, b.power);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(GowersExact, IndependentOfThreadCount) {
  CounterRng rng(9);
  const auto f = random_disc(FieldParams(3, 4), rng);
  set_thread_count(1);
  const double a = gowers_norm(f, 3);
  set_thread_count(4);
  const double b = gowers_norm(f, 3);
  set_thread_count(0);
  EXPECT_EQ(a, b);
}

TEST(Counting, AffineLineBoundedByGowers) {
  const auto system = affine_subspace_system(2, 1);
  const int s = cs_complexity(system).value();
  const FieldParams params(2, 5);
  for (int t = 0; t < 50; ++t) {
    CounterRng rng = CounterRng::derive(10, t);
    std::vector<FiniteFunction> fs;
    for (std::size_t i = 0; i < system.forms.size(); ++i) fs.push_back(random_real(params, RangeKind::kSigned, rng));
    double bound = 1.0;
    for (const auto& f : fs) bound = std::min(bound, gowers_norm(f, s + 1));
    EXPECT_LE(std::abs(linear_form_average(system, fs)), bound + 1e-12);
  }
}
