#include "hofa/property.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hofa/affine.h"
#include "hofa/error.h"
#include "hofa/polynomial.h"

namespace hofa {
namespace {

void require_finite_over(const FiniteFunction& h, int p) {
  require(h.is_finite(), ErrorCode::kRange, "property distance needs a finite-valued function");
  require(h.params().p() == p, ErrorCode::kDimension,
          "function over F_" + std::to_string(h.params().p()) + " tested against a property over F_" +
              std::to_string(p));
}

std::uint64_t hamming_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

std::vector<FiniteFunction> PropertyOracle::enumerate_members(int k) const {
  const FieldParams params(p(), k);
  std::vector<FiniteFunction> out;
  for_each_member(k, [&](std::span<const std::uint8_t> values) {
    out.push_back(FiniteFunction::finite(params, alphabet(),
                                         std::vector<std::uint8_t>(values.begin(), values.end())));
    return true;
  });
  return out;
}

NearestMember PropertyOracle::nearest_member(const FiniteFunction& h) const {
  require_finite_over(h, p());
  const auto values = h.finite_values();
  std::uint64_t best = values.size() + 1;
  std::vector<std::uint8_t> best_values;
  for_each_member(h.params().n(), [&](std::span<const std::uint8_t> member) {
    const std::uint64_t d = hamming_count(values, member);
    if (d < best) {
      best = d;
      best_values.assign(member.begin(), member.end());
    }
    return best != 0;
  });
  require(!best_values.empty(), ErrorCode::kInvalidArgument,
          "property " + name() + " has no members at dimension " + std::to_string(h.params().n()));
  return {static_cast<double>(best) / static_cast<double>(values.size()),
          FiniteFunction::finite(h.params(), alphabet(), std::move(best_values))};
}

ReedMullerProperty::ReedMullerProperty(int p, int degree) : p_(p), degree_(degree) {
  require(p == 2 || p == 3, ErrorCode::kInvalidArgument, "Reed-Muller oracle supports p in {2, 3}");
  require(degree >= 0, ErrorCode::kInvalidArgument, "Reed-Muller degree must be nonnegative");
}

std::string ReedMullerProperty::name() const {
  return "rm:" + std::to_string(degree_) + ":" + std::to_string(p_);
}

bool ReedMullerProperty::is_member(const FiniteFunction& h) const {
  require_finite_over(h, p_);
  const auto values = h.finite_values();
  std::vector<std::uint32_t> numerators(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= p_) return false;
    numerators[i] = values[i];
  }
  DegreeCheckOptions options;
  options.mode = DegreeCheck::kBasis;
  return verify_degree(TorsionTable(h.params(), 0, std::move(numerators)), degree_, options);
}

void ReedMullerProperty::for_each_member(
    int k, const std::function<bool(std::span<const std::uint8_t>)>& visit) const {
  const FieldParams params(p_, k);
  require(checked_pow(p_, static_cast<int>(admissible_keys(params, degree_, 0).size()),
                      kMaxPropertyMembers) != 0,
          ErrorCode::kCapacityExceeded,
          "RM(" + std::to_string(degree_) + ") on F_" + std::to_string(p_) + "^" +
              std::to_string(k) + " has more than 2^22 members");
  std::vector<std::uint8_t> values(params.size());
  bool go = true;
  // for_each_poly cannot stop early, so later visits are skipped instead.
  for_each_poly(params, degree_, 0, [&](const std::vector<int>&, const TorsionTable& table) {
    if (!go) return;
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<std::uint8_t>(table.numerator(i));
    go = visit(values);
  });
}

NearestMember ReedMullerProperty::nearest_member(const FiniteFunction& h) const {
  require_finite_over(h, p_);
  if (p_ != 2 || degree_ != 1 || h.alphabet() != 2) return PropertyOracle::nearest_member(h);
  // Walsh-Hadamard: correlation of (-1)^h with every character.
  const auto values = h.finite_values();
  const std::size_t size = values.size();
  std::vector<std::int64_t> w(size);
  for (std::size_t x = 0; x < size; ++x) w[x] = values[x] ? -1 : 1;
  for (std::size_t len = 1; len < size; len <<= 1) {
    for (std::size_t i = 0; i < size; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const auto a = w[j];
        const auto b = w[j + len];
        w[j] = a + b;
        w[j + len] = a - b;
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t a = 1; a < size; ++a) {
    if (std::llabs(w[a]) > std::llabs(w[best])) best = a;
  }
  const std::uint8_t flip = w[best] < 0 ? 1 : 0;
  std::vector<std::uint8_t> member(size);
  for (std::size_t x = 0; x < size; ++x) {
    member[x] = static_cast<std::uint8_t>((__builtin_popcountll(x & best) & 1) ^ flip);
  }
  const double dist = static_cast<double>(static_cast<std::int64_t>(size) - std::llabs(w[best])) /
                      (2.0 * static_cast<double>(size));
  return {dist, FiniteFunction::finite(h.params(), 2, std::move(member))};
}

DeltaCloseProperty::DeltaCloseProperty(std::shared_ptr<const PropertyOracle> base, double delta)
    : base_(std::move(base)), delta_(delta) {
  require(base_ != nullptr, ErrorCode::kInvalidArgument, "missing base property");
  require(delta >= 0.0 && delta <= 1.0, ErrorCode::kInvalidArgument, "delta must lie in [0, 1]");
}

std::string DeltaCloseProperty::name() const {
  std::ostringstream s;
  s << "delta:" << delta_ << ":" << base_->name();
  return s.str();
}

bool DeltaCloseProperty::is_member(const FiniteFunction& h) const {
  return distance(h) == 0.0;
}

double DeltaCloseProperty::distance(const FiniteFunction& h) const {
  const double n = static_cast<double>(h.size());
  const double base_count = std::round(base_->distance(h) * n);
  const double allowance = std::floor(delta_ * n + 1e-9);
  return std::max(0.0, base_count - allowance) / n;
}

NearestMember DeltaCloseProperty::nearest_member(const FiniteFunction& h) const {
  NearestMember base = base_->nearest_member(h);
  const auto target = h.finite_values();
  std::vector<std::uint8_t> member(base.member.finite_values().begin(),
                                   base.member.finite_values().end());
  auto allowance = static_cast<std::uint64_t>(std::floor(delta_ * h.size() + 1e-9));
  for (std::size_t x = 0; x < member.size() && allowance > 0; ++x) {
    if (member[x] != target[x]) {
      member[x] = target[x];
      --allowance;
    }
  }
  return {distance(h), FiniteFunction::finite(h.params(), alphabet(), std::move(member))};
}

void DeltaCloseProperty::for_each_member(
    int k, const std::function<bool(std::span<const std::uint8_t>)>& visit) const {
  const FieldParams params(p(), k);
  const std::uint64_t total = checked_pow(alphabet(), static_cast<int>(params.size()), 1u << 20);
  require(total != 0, ErrorCode::kCapacityExceeded,
          "enumerating " + name() + " needs every function on F_p^k; too many");
  std::vector<std::uint8_t> values(params.size(), 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    const auto f = FiniteFunction::finite(params, alphabet(), values);
    if (is_member(f) && !visit(values)) return;
    for (auto& v : values) {
      if (++v < alphabet()) break;
      v = 0;
    }
  }
}

EnumeratedProperty::EnumeratedProperty(std::string name, std::vector<FiniteFunction> members)
    : name_(std::move(name)), members_(std::move(members)) {
  require(!members_.empty(), ErrorCode::kInvalidArgument, "enumerated property has no members");
  p_ = members_.front().params().p();
  alphabet_ = members_.front().alphabet();
  for (const auto& m : members_) {
    require(m.is_finite() && m.params().p() == p_ && m.alphabet() == alphabet_,
            ErrorCode::kInvalidArgument, "enumerated members must share p and alphabet");
  }
}

bool EnumeratedProperty::is_member(const FiniteFunction& h) const {
  require_finite_over(h, p_);
  for (const auto& m : members_) {
    if (m.params() == h.params() &&
        hamming_count(m.finite_values(), h.finite_values()) == 0) {
      return true;
    }
  }
  return false;
}

void EnumeratedProperty::for_each_member(
    int k, const std::function<bool(std::span<const std::uint8_t>)>& visit) const {
  for (const auto& m : members_) {
    if (m.params().n() == k && !visit(m.finite_values())) return;
  }
}

double rm_distance(const FiniteFunction& h, int d) {
  return ReedMullerProperty(h.params().p(), d).nearest_member(h).distance;
}

double property_distance(const FiniteFunction& h, const PropertyOracle& property) {
  return property.PropertyOracle::nearest_member(h).distance;
}

std::shared_ptr<const PropertyOracle> make_property(const std::string& spec, int p) {
  const auto fail_spec = [&]() -> std::shared_ptr<const PropertyOracle> {
    fail(ErrorCode::kInvalidArgument,
         "unknown property '" + spec + "' (expected rm:D, rm:D:p, delta:X:<property> or file:PATH)");
  };
  if (spec.rfind("rm:", 0) == 0) {
    std::istringstream in(spec.substr(3));
    int degree = -1;
    char sep = 0;
    int prime = p;
    if (!(in >> degree)) return fail_spec();
    if (in >> sep) {
      if (sep != ':' || !(in >> prime)) return fail_spec();
    }
    return std::make_shared<ReedMullerProperty>(prime, degree);
  }
  if (spec.rfind("delta:", 0) == 0) {
    const auto colon = spec.find(':', 6);
    if (colon == std::string::npos) return fail_spec();
    double delta = 0.0;
    try {
      delta = std::stod(spec.substr(6, colon - 6));
    } catch (const std::exception&) {
      return fail_spec();
    }
    return std::make_shared<DeltaCloseProperty>(make_property(spec.substr(colon + 1), p), delta);
  }
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    require(in.good(), ErrorCode::kIo, "cannot open property file " + path);
    return std::make_shared<EnumeratedProperty>(path, parse_function_blocks(in, path));
  }
  return fail_spec();
}

InvarianceReport check_affine_invariance(const PropertyOracle& property, int k,
                                         std::uint64_t samples, std::uint64_t seed) {
  const auto members = property.enumerate_members(k);
  require(!members.empty(), ErrorCode::kInvalidArgument, "no members at this dimension");
  InvarianceReport report;
  for (std::uint64_t s = 0; s < samples; ++s) {
    CounterRng rng = CounterRng::derive(seed, s);
    const auto& h = members[rng.uniform_below(members.size())];
    const AffineMap a = sample_affine_embedding(rng, k, k, property.p());
    ++report.checked;
    if (!property.is_member(restrict(h, a))) ++report.violations;
  }
  return report;
}

}  // namespace hofa
