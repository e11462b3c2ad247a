#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "hofa/error.h"
#include "hofa/factor.h"
#include "hofa/pipeline.h"
#include "hofa/polynomial.h"
#include "hofa/property.h"
#include "hofa/tester.h"
#include "hofa/transfer.h"
#include "oracles.h"

using namespace hofa;

namespace {

FiniteFunction rm_member(const FieldParams& params, int degree, CounterRng& rng) {
  const auto table = random_poly(params, degree, 0, rng).table();
  std::vector<std::uint8_t> v(params.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = static_cast<std::uint8_t>(table.numerator(x));
  return FiniteFunction::finite(params, params.p(), std::move(v));
}

FiniteFunction with_noise(const FiniteFunction& f, double rate, CounterRng& rng) {
  std::vector<std::uint8_t> v(f.finite_values().begin(), f.finite_values().end());
  for (auto& x : v) {
    if (rng.bernoulli(rate)) x ^= 1;
  }
  return FiniteFunction::finite(f.params(), 2, std::move(v));
}

std::vector<int> as_ints(const FiniteFunction& f) {
  return std::vector<int>(f.finite_values().begin(), f.finite_values().end());
}

}  // namespace

TEST(ReedMuller, DistanceExamples) {
  CounterRng rng(1);
  const auto member = rm_member(FieldParams(2, 4), 2, rng);
  EXPECT_EQ(rm_distance(member, 2), 0.0);
  EXPECT_EQ(rm_distance(FiniteFunction::constant_finite(FieldParams(2, 4), 2, 1), 1), 0.0);
  std::vector<std::uint8_t> cubic(8, 0);
  cubic[7] = 1;
  EXPECT_EQ(rm_distance(FiniteFunction::finite(FieldParams(2, 3), 2, cubic), 2), 0.125);
}

TEST(ReedMuller, AgreesWithBruteForce) {
  for (int t = 0; t < 20; ++t) {
    CounterRng rng = CounterRng::derive(2, t);
    const auto h = random_finite(FieldParams(2, 4), 2, rng);
    for (int d = 1; d <= 2; ++d) EXPECT_DOUBLE_EQ(rm_distance(h, d), oracle::rm_distance_naive(as_ints(h), 4, d));
    // Generic enumeration route agrees with the Walsh-Hadamard route.
    EXPECT_DOUBLE_EQ(property_distance(h, ReedMullerProperty(2, 1)), rm_distance(h, 1));
  }
}

TEST(ReedMuller, TernaryMembership) {
  CounterRng rng(3);
  const ReedMullerProperty rm(3, 2);
  EXPECT_TRUE(rm.is_member(rm_member(FieldParams(3, 3), 2, rng)));
  const FieldParams params(3, 2);
  const NonClassicalPoly cubic(params, {Monomial{{2, 1}, 0, 1}});
  std::vector<std::uint8_t> v(9);
  for (PointIndex x = 0; x < 9; ++x) v[x] = static_cast<std::uint8_t>(cubic.evaluate(x).numerator);
  EXPECT_FALSE(rm.is_member(FiniteFunction::finite(params, 3, v)));
  EXPECT_THROW(ReedMullerProperty(5, 1), Error);
}

TEST(Property, AllFunctionsGivesZeroDistance) {
  std::vector<FiniteFunction> all;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<std::uint8_t> v(4);
    for (int i = 0; i < 4; ++i) v[i] = (mask >> i) & 1;
    all.push_back(FiniteFunction::finite(FieldParams(2, 2), 2, v));
  }
  const EnumeratedProperty everything("all", all);
  CounterRng rng(4);
  EXPECT_EQ(property_distance(random_finite(FieldParams(2, 2), 2, rng), everything), 0.0);
}

TEST(Property, DeltaCloseDistance) {
  auto base = std::make_shared<ReedMullerProperty>(2, 1);
  const DeltaCloseProperty close(base, 0.1);
  CounterRng rng(5);
  const auto h = random_finite(FieldParams(2, 5), 2, rng);
  const double d = rm_distance(h, 1);
  const double expect = std::max(0.0, d * 32 - std::floor(0.1 * 32)) / 32;
  EXPECT_DOUBLE_EQ(close.distance(h), expect);
  EXPECT_EQ(close.is_member(h), d <= 0.1);
}

TEST(Property, AffineInvariance) {
  EXPECT_EQ(check_affine_invariance(ReedMullerProperty(2, 2), 4, 100, 6).violations, 0u);
  EXPECT_EQ(check_affine_invariance(ReedMullerProperty(3, 1), 2, 100, 7).violations, 0u);
  EXPECT_EQ(check_affine_invariance(DeltaCloseProperty(std::make_shared<ReedMullerProperty>(2, 1), 0.25), 2, 100, 8)
                .violations,
            0u);
}

TEST(Property, SpecParsing) {
  EXPECT_EQ(make_property("rm:1", 2)->alphabet(), 2);
  EXPECT_EQ(make_property("rm:2:3", 2)->p(), 3);
  EXPECT_TRUE(make_property("delta:0.1:rm:1", 2)->is_member(FiniteFunction::constant_finite(FieldParams(2, 3), 2, 1)));
  EXPECT_THROW(make_property("cubic", 2), Error);
  EXPECT_THROW(make_property("rm:x", 2), Error);
  const std::string path = std::string(HOFA_TEST_DATA_DIR) + "/members.txt";
  {
    std::ofstream out(path);
    out << "2 1 2\n0 1\n2 1 2\n1 1\n";
  }
  const auto file = make_property("file:" + path, 2);
  EXPECT_TRUE(file->is_member(FiniteFunction::finite(FieldParams(2, 1), 2, {1, 1})));
  EXPECT_FALSE(file->is_member(FiniteFunction::finite(FieldParams(2, 1), 2, {0, 0})));
}

TEST(Tester, MembersAlwaysAccepted) {
  CounterRng rng(9);
  const auto f = rm_member(FieldParams(2, 8), 1, rng);
  TesterConfig cfg;
  cfg.m = 4;
  cfg.trials = 50;
  cfg.eps = 0.1;
  const auto r = distance_tester(f, ReedMullerProperty(2, 1), cfg);
  EXPECT_EQ(r.accept_fraction, 1.0);
  EXPECT_TRUE(r.accept);
  for (double d : r.distances) EXPECT_EQ(d, 0.0);
}

TEST(Tester, DeltaOneAlwaysAccepts) {
  CounterRng rng(10);
  const auto f = random_finite(FieldParams(2, 8), 2, rng);
  TesterConfig cfg;
  cfg.delta = 1.0;
  cfg.eps = 0.1;  // threshold 1.05 lies above every distance
  cfg.m = 4;
  cfg.trials = 30;
  EXPECT_EQ(distance_tester(f, ReedMullerProperty(2, 1), cfg).accept_fraction, 1.0);
}

TEST(Tester, CompletenessAndSoundness) {
  CounterRng rng(11);
  const FieldParams params(2, 10);
  const auto noisy = with_noise(rm_member(params, 1, rng), 0.05, rng);
  const auto random = random_finite(params, 2, rng);
  TesterConfig cfg;
  cfg.delta = 0.05;
  cfg.eps = 0.2;
  cfg.m = 6;
  cfg.trials = 200;
  cfg.seed = 12;
  const ReedMullerProperty rm(2, 1);
  const auto good = distance_tester(noisy, rm, cfg);
  const auto bad = distance_tester(random, rm, cfg);
  EXPECT_GE(good.accept_fraction, 2.0 / 3.0);
  EXPECT_LE(bad.accept_fraction, 1.0 / 3.0);
  EXPECT_LE(1.0 - good.accept_fraction, 0.36);
}

TEST(Tester, DeterministicPerSeed) {
  CounterRng rng(13);
  const auto f = random_finite(FieldParams(2, 8), 2, rng);
  TesterConfig cfg;
  cfg.m = 5;
  cfg.trials = 20;
  cfg.seed = 5;
  EXPECT_EQ(distance_tester(f, ReedMullerProperty(2, 1), cfg).distances,
            distance_tester(f, ReedMullerProperty(2, 1), cfg).distances);
}

TEST(Tester, LargerAlphabetRunsDirectly) {
  CounterRng rng(14);
  const auto f = rm_member(FieldParams(3, 5), 1, rng);
  TesterConfig cfg;
  cfg.m = 2;
  cfg.trials = 20;
  EXPECT_EQ(distance_tester(f, ReedMullerProperty(3, 1), cfg).accept_fraction, 1.0);
}

TEST(Tester, RejectsBadConfig) {
  const auto f = FiniteFunction::constant_finite(FieldParams(2, 4), 2, 0);
  TesterConfig cfg;
  cfg.m = 5;
  EXPECT_THROW(distance_tester(f, ReedMullerProperty(2, 1), cfg), Error);
  cfg.m = 2;
  cfg.eps = 0.0;
  EXPECT_THROW(distance_tester(f, ReedMullerProperty(2, 1), cfg), Error);
}

TEST(Transfer, IdentityAndConstant) {
  const FieldParams params(2, 4);
  CounterRng rng(15);
  PolynomialFactor factor(params);
  factor.add(random_poly(params, 2, 0, rng));
  factor.add(random_poly(params, 1, 0, rng));
  const auto f = random_finite(params, 2, rng);
  const auto phi = cond_expectation(f, factor);
  const TransferOperator same(factor, factor);
  EXPECT_EQ(l1_distance(transfer(same, phi).value, phi), 0.0);
  const auto c = FiniteFunction::constant_real(params, 0.3);
  EXPECT_NEAR(linf_distance(transfer(same, c).value, c), 0.0, 1e-15);
}

TEST(Transfer, RelabelsAcrossSpaces) {
  const FieldParams src(2, 4);
  const FieldParams dst(2, 6);
  const PolynomialFactor source(src, {NonClassicalPoly::linear(src, {1, 0, 0, 0})});
  const PolynomialFactor target(dst, {NonClassicalPoly::linear(dst, {1, 1, 0, 0, 0, 0})});
  std::vector<double> ind(16);
  for (PointIndex x = 0; x < 16; ++x) ind[x] = x & 1U;
  const auto out = transfer(TransferOperator(source, target), FiniteFunction::real(src, ind));
  for (PointIndex y = 0; y < 64; ++y) EXPECT_EQ(out.value.real_at(y), static_cast<double>((y & 1U) ^ ((y >> 1) & 1U)));
  EXPECT_EQ(out.unrealized_points, 0u);
}

TEST(Transfer, UnrealizedLabelsMapToZero) {
  const FieldParams src(2, 3);
  const FieldParams dst(2, 3);
  const auto x1 = NonClassicalPoly::linear(src, {1, 0, 0});
  const PolynomialFactor source(src, {x1, x1});
  const PolynomialFactor target(dst, {x1, NonClassicalPoly::linear(dst, {0, 1, 0})});
  const auto out = transfer(TransferOperator(source, target), FiniteFunction::constant_real(src, 1.0));
  EXPECT_EQ(out.unrealized_atoms, 2u);
  EXPECT_EQ(out.unrealized_points, 4u);
  EXPECT_NEAR(mean(out.value), 0.5, 1e-15);
}

TEST(Transfer, Errors) {
  const FieldParams params(2, 3);
  const PolynomialFactor lin(params, {NonClassicalPoly::linear(params, {1, 0, 0})});
  const PolynomialFactor quad(params, {NonClassicalPoly(params, {Monomial{{1, 1, 0}, 0, 1}})});
  try {
    TransferOperator bad(lin, quad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSignatureMismatch);
  }
  try {
    transfer(TransferOperator(lin, lin), FiniteFunction::finite(params, 2, {0, 0, 1, 0, 0, 0, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotMeasurable);
  }
}

TEST(Psi, Examples) {
  const FieldParams params(2, 2);
  const PolynomialFactor empty(params);
  const auto f = FiniteFunction::finite(params, 2, {0, 1, 0, 1});
  const auto same = construct_psi(f, empty, FiniteFunction::constant_real(params, 0.5));
  EXPECT_EQ(l1_distance(same, f), 0.0);
  const auto psi = construct_psi(f, empty, FiniteFunction::constant_real(params, 0.25));
  EXPECT_EQ(psi.real_at(0), 0.0);
  EXPECT_EQ(psi.real_at(1), 0.5);
  EXPECT_EQ(mean(psi), 0.25);
  const auto up = construct_psi(FiniteFunction::constant_finite(params, 2, 0), empty, FiniteFunction::constant_real(params, 0.7));
  EXPECT_NEAR(up.real_at(2), 0.7, 1e-15);
  const auto down = construct_psi(FiniteFunction::constant_finite(params, 2, 1), empty, FiniteFunction::constant_real(params, 0.2));
  EXPECT_NEAR(down.real_at(3), 0.2, 1e-15);
}

TEST(Psi, IdentitiesOnRandomInstances) {
  const FieldParams params(2, 6);
  for (int t = 0; t < 50; ++t) {
    CounterRng rng = CounterRng::derive(16, t);
    const auto f = random_finite(params, 2, rng);
    PolynomialFactor factor(params);
    for (int i = 0; i < 1 + t % 3; ++i) factor.add(random_poly(params, 2, 0, rng));
    std::vector<double> beta(factor.atom_count());
    for (auto& b : beta) b = rng.uniform01();
    std::vector<double> phi(params.size());
    for (PointIndex x = 0; x < params.size(); ++x) phi[x] = beta[factor.atom_id(x)];
    const auto phi_f = FiniteFunction::real(params, phi);
    const auto psi = construct_psi(f, factor, phi_f);
    EXPECT_LE(linf_distance(cond_expectation(psi, factor), phi_f), 1e-12);
    EXPECT_NEAR(l1_distance(f, psi), l1_distance(cond_expectation(f, factor), phi_f), 1e-12);
  }
}

TEST(Pipeline, MemberInput) {
  CounterRng rng(17);
  const auto f = rm_member(FieldParams(2, 8), 1, rng);
  PipelineConfig cfg;
  cfg.m = 5;
  cfg.embedding_samples = 20;
  cfg.seed = 3;
  const auto r = soundness_pipeline(f, ReedMullerProperty(2, 1), cfg);
  EXPECT_EQ(r.af_h_distance, 0.0);
  EXPECT_LE(r.f_g_distance, cfg.gamma);
  EXPECT_TRUE(r.all_hold());
}

TEST(Pipeline, NoisyMemberBounds) {
  CounterRng rng(18);
  const auto f = with_noise(rm_member(FieldParams(2, 10), 1, rng), 0.05, rng);
  PipelineConfig cfg;
  cfg.m = 6;
  cfg.embedding_samples = 100;
  cfg.seed = 4;
  const auto r = soundness_pipeline(f, ReedMullerProperty(2, 1), cfg);
  for (const auto& c : r.checks) EXPECT_TRUE(c.holds) << c.name << ": " << c.lhs << " > " << c.rhs;
  EXPECT_LE(r.f_g_distance, r.af_h_distance + 10 * cfg.gamma);
  EXPECT_EQ(r.embeddings_tried, 100u);
  EXPECT_GE(r.all_count, 95u);
}

// B0 here is one linear form L. L o A is constant exactly when L vanishes on the
// direction space of A, so E1 fails with probability (2^(n-m) - 1) / (2^n - 1):
// 15/1023 at n=10, m=6. A 99% event rate needs n - m <= 3 for such a factor.
TEST(Pipeline, EventRateMatchesLinearFactorOdds) {
  CounterRng rng(18);
  const auto f = with_noise(rm_member(FieldParams(2, 10), 1, rng), 0.05, rng);
  for (int m : {6, 7}) {
    PipelineConfig cfg;
    cfg.m = m;
    cfg.embedding_samples = 2000;
    cfg.seed = 5;
    const auto r = soundness_pipeline(f, ReedMullerProperty(2, 1), cfg);
    ASSERT_EQ(r.b0_complexity, 1);
    const double q = (std::pow(2.0, 10 - m) - 1) / 1023.0;
    const double expect = 2000 * (1 - q);
    const double sd = std::sqrt(2000 * q * (1 - q));
    EXPECT_NEAR(static_cast<double>(r.e1_count), expect, 4 * sd) << "m=" << m;
    EXPECT_EQ(r.e2_count, 2000u);
    EXPECT_GE(r.e3_count, 1990u);
    if (m == 7) EXPECT_GE(static_cast<double>(r.all_count) / 2000, 0.99);
  }
}

TEST(Pipeline, RejectsNonBoolean) {
  PipelineConfig cfg;
  cfg.m = 2;
  EXPECT_THROW(soundness_pipeline(FiniteFunction::constant_real(FieldParams(2, 4), 0.5), ReedMullerProperty(2, 1), cfg),
               Error);
}
