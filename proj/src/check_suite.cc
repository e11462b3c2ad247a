#include "hofa/check_suite.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hofa/affine.h"
#include "hofa/decompose.h"
#include "hofa/distribution.h"
#include "hofa/factor.h"
#include "hofa/function.h"
#include "hofa/gowers.h"
#include "hofa/polynomial.h"
#include "hofa/transfer.h"

namespace hofa {
namespace {

constexpr double kTol = 1e-9;

class Tally {
 public:
  explicit Tally(std::string name) { result_.name = std::move(name); }

  // lhs <= rhs up to kTol.
  void bound(double lhs, double rhs) {
    ++result_.instances;
    const double slack = rhs - lhs;
    if (result_.instances == 1 || slack < result_.min_slack) result_.min_slack = slack;
    if (slack < -kTol) ++result_.violations;
  }
  void equal(double a, double b, double tol = kTol) {
    ++result_.instances;
    const double slack = tol - std::abs(a - b);
    if (result_.instances == 1 || slack < result_.min_slack) result_.min_slack = slack;
    if (slack < 0) ++result_.violations;
  }
  CheckResult done() const { return result_; }

 private:
  CheckResult result_;
};

struct Sizes {
  int n_fourier;    // F_2^n for the U^2 identity
  int n_norms;      // F_2^n for norm inequalities
  int n_factor;     // F_2^n for factor checks
  int n_mu;         // F_2^n for restriction distributions
  int instances;
};

Sizes sizes_for(CheckScale scale) {
  if (scale == CheckScale::kMedium) return {8, 6, 8, 5, 100};
  return {6, 5, 6, 4, 50};
}

PolynomialFactor random_factor(const FieldParams& params, int degree, int count, CounterRng& rng) {
  PolynomialFactor factor(params);
  for (int i = 0; i < count; ++i) factor.add(random_poly(params, degree, 0, rng));
  return factor;
}

FiniteFunction indicator_product(const FiniteFunction& f, const PolynomialFactor& factor,
                                 std::uint32_t atom) {
  std::vector<double> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    v[x] = factor.atom_id(x) == atom ? f.real_at(x) : 0.0;
  }
  return FiniteFunction::real(f.params(), std::move(v), RangeKind::kSigned);
}

CheckResult check_u2_fourier(const Sizes& s, std::uint64_t seed) {
  Tally t("gowers_u2_fourier");
  const FieldParams params(2, s.n_fourier);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const auto f = random_real(params, RangeKind::kSigned, rng);
    const double fourier = std::pow(fourier_fourth_moment(f.to_real(), 2, s.n_fourier), 0.25);
    t.equal(gowers_norm(f, 2), fourier);
  }
  return t.done();
}

CheckResult check_polynomial_phases(std::uint64_t) {
  Tally t("gowers_polynomial_phase");
  const FieldParams params(2, 3);
  for_each_poly(params, 2, 0, [&](const std::vector<int>&, const TorsionTable& table) {
    const auto chi = FiniteFunction::complex(params, table.characters());
    t.equal(gowers_norm(chi, 3), 1.0);
  });
  return t.done();
}

CheckResult check_monotonicity(const Sizes& s, std::uint64_t seed) {
  Tally t("gowers_monotone");
  const FieldParams params(2, s.n_norms);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const auto f = random_real(params, RangeKind::kSigned, rng);
    double prev = gowers_norm(f, 1);
    for (int d = 2; d <= 3; ++d) {
      const double next = gowers_norm(f, d);
      t.bound(prev, next);
      prev = next;
    }
  }
  return t.done();
}

CheckResult check_gowers_l1(const Sizes& s, std::uint64_t seed) {
  Tally t("gowers_l1");
  const FieldParams params(2, s.n_norms);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const auto f = random_real(params, RangeKind::kSigned, rng);
    const double l1 = l1_norm(f);
    for (int d = 2; d <= 3; ++d) t.bound(gowers_norm(f, d), std::pow(l1, 1.0 / (1 << d)));
  }
  return t.done();
}

CheckResult check_counting(const Sizes& s, std::uint64_t seed) {
  Tally t("counting_affine_line");
  const auto system = affine_subspace_system(2, 1);
  const int complexity = cs_complexity(system).value_or(-1);
  const FieldParams params(2, s.n_norms);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    std::vector<FiniteFunction> fs;
    for (std::size_t j = 0; j < system.forms.size(); ++j) {
      fs.push_back(random_real(params, RangeKind::kSigned, rng));
    }
    double bound = std::numeric_limits<double>::infinity();
    for (const auto& f : fs) bound = std::min(bound, gowers_norm(f, complexity + 1));
    t.bound(std::abs(linear_form_average(system, fs)), complexity < 0 ? -1.0 : bound);
  }
  return t.done();
}

CheckResult check_cs_affine(std::uint64_t) {
  Tally t("cs_affine_subspace");
  for (int p : {2, 3}) {
    for (int k = 1; k <= (p == 2 ? 3 : 1); ++k) {
      const auto c = cs_complexity(affine_subspace_system(p, k));
      t.bound(c ? *c : std::numeric_limits<double>::infinity(), std::pow(p, k));
    }
  }
  return t.done();
}

CheckResult check_atom_restriction(const Sizes& s, std::uint64_t seed) {
  Tally t("atom_restriction");
  const FieldParams params(2, s.n_factor);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const int d = 1 + static_cast<int>(rng.uniform_below(2));
    const auto f = random_real(params, RangeKind::kSigned, rng);
    const auto factor = random_factor(params, d, 2, rng);
    const double whole = gowers_norm(f, d + 1);
    for (std::uint32_t a = 0; a < factor.atom_count(); ++a) {
      t.bound(gowers_norm(indicator_product(f, factor, a), d + 1), whole);
    }
  }
  return t.done();
}

CheckResult check_l1_from_gowers(const Sizes& s, std::uint64_t seed) {
  Tally t("cond_expectation_l1");
  const FieldParams params(2, s.n_factor);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const int d = 1 + static_cast<int>(rng.uniform_below(2));
    const int c = 1 + static_cast<int>(rng.uniform_below(3));
    const auto f = random_real(params, RangeKind::kSigned, rng);
    const auto factor = random_factor(params, d, c, rng);
    t.bound(l1_norm(cond_expectation(f, factor)),
            std::pow(2.0, d * factor.complexity()) * gowers_norm(f, d + 1));
  }
  return t.done();
}

CheckResult check_atom_sizes(const Sizes& s, std::uint64_t seed) {
  Tally t("atom_sizes");
  const FieldParams params(2, s.n_factor);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const auto factor = random_factor(params, 2, 2, rng);
    t.bound(atom_stats(factor).max_deviation, factor_rank_proxy(factor, false).max_bias);
  }
  return t.done();
}

CheckResult check_refinement(const Sizes& s, std::uint64_t seed) {
  Tally t("refinement");
  const FieldParams params(2, s.n_factor);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const auto f = random_finite(params, 2, rng);
    PolynomialFactor coarse = random_factor(params, 1, 1, rng);
    PolynomialFactor fine = coarse;
    fine.add(random_poly(params, 1, 0, rng));
    const auto f1 = cond_expectation(f, coarse);
    const auto f3 = subtract(f, f1);
    const auto f2 = FiniteFunction::constant_real(params, 0.0);
    const auto r = refinement_error(f, coarse, fine, f2, f3, 1);
    t.bound(r.lhs, r.rhs);
  }
  return t.done();
}

CheckResult check_mu_lipschitz(const Sizes& s, std::uint64_t seed) {
  Tally t("mu_lipschitz");
  const FieldParams params(2, s.n_mu);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const auto f = random_real(params, RangeKind::kUnit, rng);
    const auto g = random_real(params, RangeKind::kUnit, rng);
    const auto r = mu_lipschitz_check(f, g, 1);
    t.bound(r.max_outcome_gap, r.outcome_bound);
    t.bound(r.distance, r.distance_bound);
  }
  return t.done();
}

CheckResult check_psi(const Sizes& s, std::uint64_t seed) {
  Tally t("psi_identities");
  const FieldParams params(2, s.n_factor);
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const auto f = random_finite(params, 2, rng);
    const auto factor = random_factor(params, 2, 2, rng);
    std::vector<double> beta(factor.atom_count());
    for (auto& b : beta) b = rng.uniform01();
    std::vector<double> phi(f.size());
    for (std::size_t x = 0; x < phi.size(); ++x) phi[x] = beta[factor.atom_id(x)];
    const auto phi_f = FiniteFunction::real(params, std::move(phi));
    const auto psi = construct_psi(f, factor, phi_f);
    t.equal(linf_distance(cond_expectation(psi, factor), phi_f), 0.0, 1e-12);
    t.equal(l1_distance(f, psi), l1_distance(cond_expectation(f, factor), phi_f), 1e-12);
  }
  return t.done();
}

CheckResult check_degrees(std::uint64_t) {
  Tally t("degree_consistency");
  for (int n = 1; n <= 2; ++n) {
    const FieldParams params(2, n);
    for (const auto& poly : enumerate_polys(params, 3, 1)) {
      const bool upper = verify_degree(poly, poly.degree());
      const bool strict = poly.degree() == 0 || !verify_degree(poly, poly.degree() - 1);
      t.bound(upper && strict ? 0.0 : 1.0, 0.0);
    }
  }
  return t.done();
}

CheckResult check_section(const Sizes& s, std::uint64_t seed) {
  Tally t("section_identity");
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const AffineMap a = sample_affine_embedding(rng, 3, 6, 2);
    const AffineMap back = compose(section_of(a), a);
    std::uint64_t bad = 0;
    for (PointIndex x = 0; x < 8; ++x) bad += back.apply_index(x) != x;
    t.bound(static_cast<double>(bad), 0.0);
  }
  return t.done();
}

CheckResult check_energy(const Sizes& s, std::uint64_t seed) {
  Tally t("energy_increment");
  const FieldParams params(2, s.n_factor);
  DecomposeOptions options;
  options.degree = 1;
  options.tau = 0.15;
  for (int i = 0; i < s.instances; ++i) {
    CounterRng rng = CounterRng::derive(seed, i);
    // A planted linear structure plus noise so the loop has something to find.
    const auto base = random_poly(params, 1, 0, rng).table();
    std::vector<std::uint8_t> v(params.size());
    for (std::size_t x = 0; x < v.size(); ++x) {
      v[x] = static_cast<std::uint8_t>(base.numerator(x) ^ (rng.bernoulli(0.2) ? 1 : 0));
    }
    const auto dec = decompose(FiniteFunction::finite(params, 2, std::move(v)), options);
    for (std::size_t j = 1; j < dec.energies.size(); ++j) {
      t.bound(options.tau * options.tau, dec.energies[j] - dec.energies[j - 1]);
    }
    // The planted linear phase must be picked up.
    t.bound(1.0, static_cast<double>(dec.factor.complexity()));
  }
  return t.done();
}

}  // namespace

double fourier_fourth_moment(const std::vector<double>& values, int p, int n) {
  const FieldParams params(p, n);
  const std::size_t size = values.size();
  std::vector<double> cos_table(p);
  std::vector<double> sin_table(p);
  for (int j = 0; j < p; ++j) {
    cos_table[j] = std::cos(2.0 * std::numbers::pi * j / p);
    sin_table[j] = std::sin(2.0 * std::numbers::pi * j / p);
  }
  CompensatedSum total;
  for (PointIndex alpha = 0; alpha < size; ++alpha) {
    const auto a = params.coords(alpha);
    double re = 0.0;
    double im = 0.0;
    std::vector<int> x(n, 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      int dot = 0;
      for (int i = 0; i < n; ++i) dot += a[i] * x[i];
      dot %= p;
      re += values[idx] * cos_table[dot];
      im -= values[idx] * sin_table[dot];
      for (int i = 0; i < n; ++i) {
        if (++x[i] < p) break;
        x[i] = 0;
      }
    }
    const double mag2 = (re * re + im * im) / (static_cast<double>(size) * size);
    total.add(mag2 * mag2);
  }
  return total.value();
}

std::vector<CheckResult> run_check_suite(CheckScale scale, std::uint64_t seed) {
  const Sizes s = sizes_for(scale);
  // Each check draws from its own derived stream.
  auto sub = [seed](std::uint64_t i) { return CounterRng::derive(seed, i).next(); };
  return {
      check_u2_fourier(s, sub(1)),
      check_polynomial_phases(sub(2)),
      check_monotonicity(s, sub(3)),
      check_gowers_l1(s, sub(4)),
      check_counting(s, sub(5)),
      check_cs_affine(sub(6)),
      check_atom_restriction(s, sub(7)),
      check_l1_from_gowers(s, sub(8)),
      check_atom_sizes(s, sub(9)),
      check_refinement(s, sub(10)),
      check_mu_lipschitz(s, sub(11)),
      check_psi(s, sub(12)),
      check_degrees(sub(13)),
      check_section(s, sub(14)),
      check_energy(s, sub(15)),
  };
}

}  // namespace hofa
