#include "hofa/factor.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "hofa/error.h"
#include "hofa/gowers.h"
#include "poly_io.h"

namespace hofa {

PolynomialFactor::PolynomialFactor(FieldParams params)
    : params_(params), labels_(params.size(), 0) {
  rebuild_atoms();
}

PolynomialFactor::PolynomialFactor(FieldParams params, const std::vector<NonClassicalPoly>& polys)
    : PolynomialFactor(params) {
  for (const auto& poly : polys) add(poly);
}

void PolynomialFactor::add(const NonClassicalPoly& poly) {
  require(poly.params() == params_, ErrorCode::kDimension,
          "factor polynomial lives on a different space");
  append(FactorPoly{poly.table(), poly.degree(), poly.depth(), poly});
}

void PolynomialFactor::add_table(const TorsionTable& table) {
  const int depth = table.min_level();
  const TorsionTable t = table.at_level(depth);
  append(FactorPoly{t, std::max(0, measured_degree(t)), depth, std::nullopt});
}

void PolynomialFactor::add_table(const TorsionTable& table, PolySignature signature) {
  append(FactorPoly{table.at_level(signature.depth), signature.degree, signature.depth,
                    std::nullopt});
}

void PolynomialFactor::append(FactorPoly poly) {
  require(poly.table.params() == params_, ErrorCode::kDimension,
          "factor polynomial lives on a different space");
  const std::uint64_t modulus = poly.table.modulus();
  require(order_ <= kMaxFactorOrder / modulus, ErrorCode::kCapacityExceeded,
          "factor order exceeds 2^48");
  radix_.push_back(order_);
  for (std::size_t x = 0; x < labels_.size(); ++x) labels_[x] += order_ * poly.table.numerator(x);
  order_ *= modulus;
  polys_.push_back(std::move(poly));
  rebuild_atoms();
}

void PolynomialFactor::rebuild_atoms() {
  atom_ids_.assign(labels_.size(), 0);
  atom_labels_.clear();
  atom_sizes_.clear();
  label_to_atom_.clear();
  for (std::size_t x = 0; x < labels_.size(); ++x) {
    auto [it, inserted] =
        label_to_atom_.try_emplace(labels_[x], static_cast<std::uint32_t>(atom_labels_.size()));
    if (inserted) {
      atom_labels_.push_back(labels_[x]);
      atom_sizes_.push_back(0);
    }
    atom_ids_[x] = it->second;
    ++atom_sizes_[it->second];
  }
}

int PolynomialFactor::degree() const {
  int d = 0;
  for (const auto& p : polys_) d = std::max(d, p.degree);
  return d;
}

std::vector<PolySignature> PolynomialFactor::signature() const {
  std::vector<PolySignature> sig;
  for (const auto& p : polys_) sig.push_back({p.degree, p.depth});
  return sig;
}

std::vector<TorsionValue> PolynomialFactor::decode(std::uint64_t label) const {
  std::vector<TorsionValue> values;
  for (const auto& p : polys_) {
    const std::uint64_t m = p.table.modulus();
    values.push_back({params_.p(), p.depth, static_cast<std::uint32_t>(label % m)});
    label /= m;
  }
  return values;
}

std::uint64_t PolynomialFactor::encode(const std::vector<TorsionValue>& values) const {
  require(values.size() == polys_.size(), ErrorCode::kDimension, "label has the wrong length");
  std::uint64_t label = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const TorsionValue v = values[i].normalized();
    require(v.level <= polys_[i].depth, ErrorCode::kRange, "label value deeper than the factor");
    label += radix_[i] * v.at_level(polys_[i].depth).numerator;
  }
  return label;
}

std::optional<std::uint32_t> PolynomialFactor::find_atom(std::uint64_t label) const {
  const auto it = label_to_atom_.find(label);
  if (it == label_to_atom_.end()) return std::nullopt;
  return it->second;
}

PolynomialFactor PolynomialFactor::restrict(const AffineMap& map) const {
  PolynomialFactor out(map.source_params());
  for (const auto& p : polys_) out.add_table(p.table.restrict(map));
  return out;
}

std::vector<TorsionValue> atom_of(const PolynomialFactor& factor, PointIndex x) {
  require(x < factor.params().size(), ErrorCode::kDimension, "point outside the factor's space");
  return factor.decode(factor.label(x));
}

std::vector<double> atom_means(const FiniteFunction& f, const PolynomialFactor& factor) {
  require(f.params() == factor.params(), ErrorCode::kDimension,
          "function and factor live on different spaces");
  const auto values = f.to_real();
  std::vector<CompensatedSum> sums(factor.atom_count());
  for (std::size_t x = 0; x < values.size(); ++x) sums[factor.atom_id(x)].add(values[x]);
  std::vector<double> means(sums.size());
  for (std::uint32_t a = 0; a < means.size(); ++a) {
    means[a] = sums[a].value() / static_cast<double>(factor.atom_size(a));
  }
  return means;
}

FiniteFunction cond_expectation(const FiniteFunction& f, const PolynomialFactor& factor) {
  require(f.is_real() || f.is_boolean(), ErrorCode::kRange,
          "conditional expectation needs a real or {0,1}-valued function");
  const auto means = atom_means(f, factor);
  std::vector<double> out(f.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = means[factor.atom_id(x)];
  const RangeKind kind = f.is_boolean() ? RangeKind::kUnit : f.kind();
  return FiniteFunction::real(f.params(), std::move(out), kind);
}

bool is_measurable(const FiniteFunction& f, const PolynomialFactor& factor, double tol) {
  require(f.params() == factor.params(), ErrorCode::kDimension,
          "function and factor live on different spaces");
  std::vector<double> first(factor.atom_count(), std::nan(""));
  for (std::size_t x = 0; x < f.size(); ++x) {
    const double v = f.real_at(x);
    double& ref = first[factor.atom_id(x)];
    if (std::isnan(ref)) {
      ref = v;
    } else if (std::abs(ref - v) > tol) {
      return false;
    }
  }
  return true;
}

AtomStats atom_stats(const PolynomialFactor& factor) {
  AtomStats stats;
  stats.order = factor.order();
  stats.nonempty = factor.atom_count();
  const double total = static_cast<double>(factor.params().size());
  const double uniform = 1.0 / static_cast<double>(factor.order());
  for (std::uint32_t a = 0; a < factor.atom_count(); ++a) {
    const double prob = static_cast<double>(factor.atom_size(a)) / total;
    stats.probabilities[factor.atom_label(a)] = prob;
    stats.max_deviation = std::max(stats.max_deviation, std::abs(prob - uniform));
  }
  if (stats.nonempty < factor.order()) stats.max_deviation = std::max(stats.max_deviation, uniform);
  return stats;
}

RankProxy factor_rank_proxy(const PolynomialFactor& factor, bool with_gowers) {
  RankProxy proxy;
  const std::uint64_t order = factor.order();
  require(order <= kMaxRankCombinations, ErrorCode::kCapacityExceeded,
          "rank proxy needs " + std::to_string(order) + " combinations, above 2^20");
  const auto& polys = factor.polys();
  int level = 0;
  for (const auto& p : polys) level = std::max(level, p.depth);
  std::vector<TorsionTable> lifted;
  for (const auto& p : polys) lifted.push_back(p.table.at_level(level));
  const int u = std::max(1, factor.degree());
  if (with_gowers) {
    require(checked_pow(factor.params().size(), u, kMaxGowersWork) != 0,
            ErrorCode::kCapacityExceeded, "Gowers surrogate of the rank proxy is too expensive");
    proxy.gowers_order = u;
  }
  std::vector<std::uint64_t> lambda(polys.size(), 0);
  // Odometer over lambda in prod Z_{p^(k_i+1)}, skipping lambda = 0.
  for (std::uint64_t step = 1; step < order; ++step) {
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (++lambda[i] < polys[i].table.modulus()) break;
      lambda[i] = 0;
    }
    TorsionTable combo(factor.params(), level);
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (lambda[i] != 0) combo = combo + lifted[i].scaled(lambda[i]);
    }
    const double b = combo.bias();
    if (proxy.worst_lambda.empty() || b > proxy.max_bias) {
      proxy.max_bias = b;
      proxy.worst_lambda = lambda;
    }
    if (with_gowers) {
      const auto chi = FiniteFunction::complex(factor.params(), combo.characters());
      proxy.max_gowers = std::max(proxy.max_gowers, gowers_norm(chi, u));
    }
    ++proxy.combinations;
  }
  return proxy;
}

bool is_semantic_refinement(const PolynomialFactor& fine, const PolynomialFactor& coarse) {
  require(fine.params() == coarse.params(), ErrorCode::kDimension,
          "factors live on different spaces");
  std::vector<std::uint64_t> seen(fine.atom_count(), 0);
  std::vector<bool> set(fine.atom_count(), false);
  for (std::size_t x = 0; x < fine.atom_ids().size(); ++x) {
    const auto a = fine.atom_id(x);
    if (!set[a]) {
      set[a] = true;
      seen[a] = coarse.label(x);
    } else if (seen[a] != coarse.label(x)) {
      return false;
    }
  }
  return true;
}

std::string format_factor(const PolynomialFactor& factor) {
  std::ostringstream out;
  out << factor.params().p() << ' ' << factor.params().n() << ' ' << factor.complexity() << '\n';
  for (const auto& p : factor.polys()) {
    require(p.poly.has_value(), ErrorCode::kInvalidArgument,
            "factor polynomial has no coefficient representation");
    out << format_poly(*p.poly);
  }
  return out.str();
}

PolynomialFactor parse_factor(std::istream& in, const std::string& source_name) {
  detail::TextReader reader(in, source_name);
  const auto header = reader.next_line();
  if (header.size() != 3) reader.error("expected factor header 'p n C'");
  int p = 0;
  int n = 0;
  int c = 0;
  try {
    p = std::stoi(header[0]);
    n = std::stoi(header[1]);
    c = std::stoi(header[2]);
  } catch (const std::exception&) {
    reader.error("factor header must be three integers");
  }
  if (c < 0) reader.error("negative complexity");
  if (!(p == 2 || p == 3 || p == 5) || n < 0) reader.error("unsupported field in factor header");
  PolynomialFactor factor{FieldParams(p, n)};
  for (int i = 0; i < c; ++i) {
    if (reader.at_end()) reader.error("expected " + std::to_string(c) + " polynomial blocks");
    auto poly = detail::read_poly(reader);
    if (poly.params().p() != p || poly.params().n() != n) {
      reader.error("polynomial block does not match the factor header");
    }
    factor.add(poly);
  }
  reader.expect_end();
  return factor;
}

}  // namespace hofa
