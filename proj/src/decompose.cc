#include "hofa/decompose.h"

#include <cmath>
#include <numbers>

#include "hofa/error.h"
#include "hofa/gowers.h"

namespace hofa {
namespace {

double energy(const FiniteFunction& f1) {
  const double l2 = l2_norm(f1);
  return l2 * l2;
}

struct Candidate {
  double correlation = -1.0;
  std::vector<int> coefficients;
};

Candidate best_candidate(const std::vector<double>& residual, const FieldParams& params,
                         const DecomposeOptions& options) {
  Candidate best;
  std::vector<double> cos_table;
  std::vector<double> sin_table;
  const double size = static_cast<double>(residual.size());
  for_each_poly(
      params, options.degree, options.max_depth,
      [&](const std::vector<int>& coeffs, const TorsionTable& table) {
        if (cos_table.size() != table.modulus()) {
          cos_table.resize(table.modulus());
          sin_table.resize(table.modulus());
          for (std::uint32_t j = 0; j < table.modulus(); ++j) {
            const double a = 2.0 * std::numbers::pi * j / table.modulus();
            cos_table[j] = std::cos(a);
            sin_table[j] = std::sin(a);
          }
        }
        bool zero = true;
        for (int c : coeffs) zero = zero && c == 0;
        if (zero) return;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t x = 0; x < residual.size(); ++x) {
          re += residual[x] * cos_table[table.numerator(x)];
          im -= residual[x] * sin_table[table.numerator(x)];
        }
        const double c = std::hypot(re, im) / size;
        if (c > best.correlation) {
          best.correlation = c;
          best.coefficients = coeffs;
        }
      },
      /*include_constant=*/false);
  return best;
}

}  // namespace

Decomposition decompose(const FiniteFunction& f, const DecomposeOptions& options) {
  return decompose(f, options, PolynomialFactor(f.params()));
}

Decomposition decompose(const FiniteFunction& f, const DecomposeOptions& options,
                        const PolynomialFactor& initial) {
  require(f.is_boolean() || f.kind() == RangeKind::kUnit, ErrorCode::kRange,
          "decomposition needs a {0,1}- or [0,1]-valued function");
  require(initial.params() == f.params(), ErrorCode::kDimension,
          "initial factor lives on a different space");
  require(options.degree >= 1, ErrorCode::kInvalidArgument, "decomposition degree must be >= 1");
  require(options.tau > 0.0, ErrorCode::kInvalidArgument, "tau must be positive");
  require(initial.degree() <= options.degree, ErrorCode::kInvalidArgument,
          "initial factor has degree above the decomposition degree");
  require(poly_count(f.params(), options.degree, options.max_depth, false) != 0,
          ErrorCode::kCapacityExceeded, "candidate search space exceeds 2^24 polynomials");
  require(checked_pow(f.params().size(), options.degree + 1, kMaxGowersWork) != 0,
          ErrorCode::kCapacityExceeded, "certifying ||f3||_U^(d+1) exceeds the enumeration cap");

  const auto keys = admissible_keys(f.params(), options.degree, options.max_depth, false);
  const auto values = f.to_real();
  PolynomialFactor factor = initial;
  FiniteFunction f1 = cond_expectation(f, factor);
  Decomposition out{f1, f1, f1, factor, initial.complexity(), 0.0, 2, 0.0, {}, {}, false};
  out.energies.push_back(energy(f1));
  while (true) {
    std::vector<double> residual(values.size());
    for (std::size_t x = 0; x < values.size(); ++x) residual[x] = values[x] - f1.real_at(x);
    const Candidate best = best_candidate(residual, f.params(), options);
    if (best.correlation < options.tau) break;
    if (factor.complexity() >= options.max_complexity) {
      out.non_convergence = true;
      break;
    }
    factor.add(poly_from_coefficients(f.params(), keys, best.coefficients));
    f1 = cond_expectation(f, factor);
    out.correlations.push_back(best.correlation);
    out.energies.push_back(energy(f1));
  }

  out.factor = factor;
  out.f1 = f1;
  out.f2 = FiniteFunction::real(f.params(), std::vector<double>(f.size(), 0.0), RangeKind::kSigned);
  out.f3 = subtract(f, f1);
  out.f2_l2 = 0.0;
  out.f3_order = options.degree + 1;
  out.f3_gowers = gowers_norm(out.f3, out.f3_order);
  return out;
}

RefinementReport refinement_error(const FiniteFunction& f, const PolynomialFactor& coarse,
                                  const PolynomialFactor& fine, const FiniteFunction& f2,
                                  const FiniteFunction& f3, int d) {
  require(is_semantic_refinement(fine, coarse), ErrorCode::kNotARefinement,
          "second factor is not a semantic refinement of the first");
  RefinementReport report;
  report.lhs = l1_distance(cond_expectation(f, coarse), cond_expectation(f, fine));
  const double scale = std::pow(static_cast<double>(f.params().p()),
                                static_cast<double>(d) * fine.complexity());
  report.rhs = l2_norm(f2) + scale * gowers_norm(f3, d + 1);
  report.holds = report.lhs <= report.rhs + 1e-12;
  return report;
}

}  // namespace hofa
