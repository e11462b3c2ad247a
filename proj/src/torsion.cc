#include "hofa/torsion.h"

#include <cmath>
#include <numbers>

#include "hofa/error.h"
#include "hofa/function.h"

namespace hofa {
namespace {

// Sums of two numerators must not overflow 32 bits.
constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

std::uint32_t require_modulus(int p, int level) {
  const std::uint32_t m = torsion_modulus(p, level);
  require(m != 0, ErrorCode::kCapacityExceeded,
          "torsion level " + std::to_string(level) + " too deep for p=" + std::to_string(p));
  return m;
}

std::complex<double> unit_root(std::uint64_t numerator, std::uint64_t modulus) {
  if (numerator == 0) return {1.0, 0.0};
  // Exact values on the axes keep classical p=2 characters at exactly +-1.
  if (2 * numerator == modulus) return {-1.0, 0.0};
  if (4 * numerator == modulus) return {0.0, 1.0};
  if (4 * numerator == 3 * modulus) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(numerator) /
                       static_cast<double>(modulus);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

std::uint32_t torsion_modulus(int p, int level) {
  if (level < 0) return 0;
  const std::uint64_t m = checked_pow(static_cast<std::uint64_t>(p), level + 1, kMaxModulus);
  return static_cast<std::uint32_t>(m);
}

TorsionValue TorsionValue::normalized() const {
  TorsionValue v = *this;
  while (v.level > 0 && v.numerator % v.p == 0) {
    v.numerator /= v.p;
    --v.level;
  }
  return v;
}

TorsionValue TorsionValue::at_level(int new_level) const {
  require(new_level >= level, ErrorCode::kInvalidArgument, "cannot lower a torsion level");
  const std::uint32_t scale = require_modulus(p, new_level) / require_modulus(p, level);
  return {p, new_level, numerator * scale};
}

double TorsionValue::to_double() const {
  return static_cast<double>(numerator) / static_cast<double>(require_modulus(p, level));
}

std::complex<double> TorsionValue::character() const {
  return unit_root(numerator, require_modulus(p, level));
}

bool operator==(const TorsionValue& a, const TorsionValue& b) {
  const TorsionValue x = a.normalized();
  const TorsionValue y = b.normalized();
  return x.p == y.p && x.level == y.level && x.numerator == y.numerator;
}

TorsionValue operator+(const TorsionValue& a, const TorsionValue& b) {
  require(a.p == b.p, ErrorCode::kInvalidArgument, "torsion values over different primes");
  const int level = std::max(a.level, b.level);
  const TorsionValue x = a.at_level(level);
  const TorsionValue y = b.at_level(level);
  const std::uint32_t m = require_modulus(a.p, level);
  return {a.p, level, (x.numerator + y.numerator) % m};
}

TorsionValue operator-(const TorsionValue& a, const TorsionValue& b) {
  require(a.p == b.p, ErrorCode::kInvalidArgument, "torsion values over different primes");
  const int level = std::max(a.level, b.level);
  const TorsionValue x = a.at_level(level);
  const TorsionValue y = b.at_level(level);
  const std::uint32_t m = require_modulus(a.p, level);
  return {a.p, level, (x.numerator + m - y.numerator) % m};
}

TorsionTable::TorsionTable(FieldParams params, int level)
    : params_(params),
      level_(level),
      modulus_(require_modulus(params.p(), level)),
      numerators_(params.size(), 0) {}

TorsionTable::TorsionTable(FieldParams params, int level, std::vector<std::uint32_t> numerators)
    : params_(params),
      level_(level),
      modulus_(require_modulus(params.p(), level)),
      numerators_(std::move(numerators)) {
  require(numerators_.size() == params_.size(), ErrorCode::kDimension,
          "torsion table has the wrong length");
  for (auto& v : numerators_) v %= modulus_;
}

bool TorsionTable::is_zero() const {
  for (auto v : numerators_) {
    if (v != 0) return false;
  }
  return true;
}

bool TorsionTable::is_constant() const {
  for (auto v : numerators_) {
    if (v != numerators_.front()) return false;
  }
  return true;
}

int TorsionTable::min_level() const {
  int level = level_;
  std::uint32_t divisor = 1;
  while (level > 0) {
    const std::uint32_t next = divisor * static_cast<std::uint32_t>(params_.p());
    bool divisible = true;
    for (auto v : numerators_) {
      if (v % next != 0) {
        divisible = false;
        break;
      }
    }
    if (!divisible) break;
    divisor = next;
    --level;
  }
  return level;
}

TorsionTable TorsionTable::at_level(int new_level) const {
  if (new_level == level_) return *this;
  TorsionTable out(params_, new_level);
  if (new_level > level_) {
    const std::uint32_t scale = out.modulus_ / modulus_;
    for (std::size_t i = 0; i < size(); ++i) out.numerators_[i] = numerators_[i] * scale;
    return out;
  }
  const std::uint32_t divisor = modulus_ / out.modulus_;
  for (std::size_t i = 0; i < size(); ++i) {
    require(numerators_[i] % divisor == 0, ErrorCode::kRange,
            "table does not fit at torsion level " + std::to_string(new_level));
    out.numerators_[i] = numerators_[i] / divisor;
  }
  return out;
}

TorsionTable TorsionTable::derivative(PointIndex h) const {
  require(h < params_.size(), ErrorCode::kDimension, "direction outside the space");
  const auto shift = params_.translation(h);
  TorsionTable out(params_, level_);
  for (std::size_t x = 0; x < size(); ++x) {
    out.numerators_[x] = (numerators_[shift[x]] + modulus_ - numerators_[x]) % modulus_;
  }
  return out;
}

TorsionTable TorsionTable::restrict(const AffineMap& map) const {
  require(map.p() == params_.p() && map.target_dim() == params_.n(), ErrorCode::kDimension,
          "restriction map does not target the table's space");
  const auto table = map.point_table();
  std::vector<std::uint32_t> out(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) out[i] = numerators_[table[i]];
  return TorsionTable(map.source_params(), level_, std::move(out));
}

TorsionTable TorsionTable::scaled(std::uint64_t lambda) const {
  TorsionTable out(params_, level_);
  const std::uint64_t l = lambda % modulus_;
  for (std::size_t i = 0; i < size(); ++i) {
    out.numerators_[i] = static_cast<std::uint32_t>((l * numerators_[i]) % modulus_);
  }
  return out;
}

std::vector<std::complex<double>> TorsionTable::characters() const {
  std::vector<std::complex<double>> roots(modulus_ <= size() ? modulus_ : 0);
  for (std::uint32_t j = 0; j < roots.size(); ++j) roots[j] = unit_root(j, modulus_);
  std::vector<std::complex<double>> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out[i] = roots.empty() ? unit_root(numerators_[i], modulus_) : roots[numerators_[i]];
  }
  return out;
}

double TorsionTable::bias() const {
  // Histogram the numerators first: every term of the sum is then a root of
  // unity times an exact integer count.
  std::vector<std::uint64_t> counts;
  if (modulus_ <= size()) {
    counts.assign(modulus_, 0);
    for (auto v : numerators_) ++counts[v];
  }
  CompensatedSum re;
  CompensatedSum im;
  if (!counts.empty()) {
    for (std::uint32_t j = 0; j < modulus_; ++j) {
      if (counts[j] == 0) continue;
      const auto z = unit_root(j, modulus_) * static_cast<double>(counts[j]);
      re.add(z.real());
      im.add(z.imag());
    }
  } else {
    for (auto v : numerators_) {
      const auto z = unit_root(v, modulus_);
      re.add(z.real());
      im.add(z.imag());
    }
  }
  const double n = static_cast<double>(size());
  return std::abs(std::complex<double>(re.value() / n, im.value() / n));
}

TorsionTable operator+(const TorsionTable& a, const TorsionTable& b) {
  require(a.params() == b.params(), ErrorCode::kDimension, "tables on different spaces");
  const int level = std::max(a.level(), b.level());
  TorsionTable x = a.at_level(level);
  const TorsionTable y = b.at_level(level);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x.numerator(i) = (x.numerator(i) + y.numerator(i)) % x.modulus();
  }
  return x;
}

TorsionTable operator-(const TorsionTable& a, const TorsionTable& b) {
  require(a.params() == b.params(), ErrorCode::kDimension, "tables on different spaces");
  const int level = std::max(a.level(), b.level());
  TorsionTable x = a.at_level(level);
  const TorsionTable y = b.at_level(level);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x.numerator(i) = (x.numerator(i) + x.modulus() - y.numerator(i)) % x.modulus();
  }
  return x;
}

}  // namespace hofa
