#include "hofa/transfer.h"

#include <cmath>
#include <set>

#include "hofa/error.h"

namespace hofa {

TransferOperator::TransferOperator(PolynomialFactor source, PolynomialFactor target)
    : source_(std::move(source)), target_(std::move(target)) {
  require(source_.params().p() == target_.params().p(), ErrorCode::kSignatureMismatch,
          "factors over different primes");
  const auto a = source_.signature();
  const auto b = target_.signature();
  require(a.size() == b.size(), ErrorCode::kSignatureMismatch,
          "factors have complexities " + std::to_string(a.size()) + " and " +
              std::to_string(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(a[i] == b[i], ErrorCode::kSignatureMismatch,
            "polynomial " + std::to_string(i) + " has (degree, depth) (" +
                std::to_string(a[i].degree) + ", " + std::to_string(a[i].depth) + ") vs (" +
                std::to_string(b[i].degree) + ", " + std::to_string(b[i].depth) + ")");
  }
}

TransferResult transfer(const TransferOperator& op, const FiniteFunction& phi) {
  const PolynomialFactor& src = op.source();
  const PolynomialFactor& dst = op.target();
  require(phi.params() == src.params(), ErrorCode::kDimension,
          "function does not live on the source factor's space");
  require(!phi.is_complex(), ErrorCode::kRange, "transfer of complex functions is not supported");
  require(is_measurable(phi, src), ErrorCode::kNotMeasurable,
          "function is not constant on the source atoms");
  std::vector<double> gamma(src.atom_count(), 0.0);
  for (std::size_t x = 0; x < phi.size(); ++x) gamma[src.atom_id(x)] = phi.real_at(x);

  TransferResult result{phi};
  std::vector<double> out(dst.params().size(), 0.0);
  std::set<std::uint64_t> missing;
  for (std::size_t x = 0; x < out.size(); ++x) {
    const auto atom = src.find_atom(dst.label(x));
    if (atom) {
      out[x] = gamma[*atom];
    } else {
      ++result.unrealized_points;
      missing.insert(dst.label(x));
    }
  }
  result.unrealized_atoms = missing.size();
  const RangeKind kind = phi.kind() == RangeKind::kSigned ? RangeKind::kSigned : RangeKind::kUnit;
  result.value = FiniteFunction::real(dst.params(), std::move(out), kind);
  return result;
}

FiniteFunction construct_psi(const FiniteFunction& f, const PolynomialFactor& factor,
                             const FiniteFunction& phi) {
  require(f.is_boolean(), ErrorCode::kRange, "repair needs a {0,1}-valued function");
  require(f.params() == factor.params() && phi.params() == factor.params(), ErrorCode::kDimension,
          "function, target and factor live on different spaces");
  require(phi.is_real() || phi.is_boolean(), ErrorCode::kRange, "target must be real-valued");
  for (std::size_t x = 0; x < phi.size(); ++x) {
    const double v = phi.real_at(x);
    require(v >= 0.0 && v <= 1.0, ErrorCode::kRange, "target value outside [0, 1]");
  }
  require(is_measurable(phi, factor), ErrorCode::kNotMeasurable,
          "target is not constant on the atoms");
  std::vector<std::uint64_t> ones(factor.atom_count(), 0);
  std::vector<double> beta(factor.atom_count(), 0.0);
  for (std::size_t x = 0; x < f.size(); ++x) {
    ones[factor.atom_id(x)] += f.finite_at(x);
    beta[factor.atom_id(x)] = phi.real_at(x);
  }
  std::vector<double> psi(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    const auto a = factor.atom_id(x);
    const double alpha =
        static_cast<double>(ones[a]) / static_cast<double>(factor.atom_size(a));
    const double b = beta[a];
    const bool one = f.finite_at(x) != 0;
    // alpha = 1 leaves no f = 0 points and alpha = 0 no f = 1 points, so the
    // divisions below only run with a nonzero denominator.
    if (alpha <= b) {
      psi[x] = one ? 1.0 : (b - alpha) / (1.0 - alpha);
    } else {
      psi[x] = one ? b / alpha : 0.0;
    }
  }
  return FiniteFunction::real(f.params(), std::move(psi), RangeKind::kUnit);
}

}  // namespace hofa
