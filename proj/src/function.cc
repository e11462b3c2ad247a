#include "hofa/function.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "hofa/error.h"
#include "text_reader.h"

namespace hofa {
namespace {

constexpr double kRangeSlack = 1e-12;

double checked_real(double v, RangeKind kind) {
  const double lo = kind == RangeKind::kUnit ? 0.0 : -1.0;
  require(std::isfinite(v) && v >= lo - kRangeSlack && v <= 1.0 + kRangeSlack, ErrorCode::kRange,
          "value " + std::to_string(v) + " outside " + range_kind_name(kind));
  return std::clamp(v, lo, 1.0);
}

void require_same_space(const FiniteFunction& f, const FiniteFunction& g) {
  require(f.params() == g.params(), ErrorCode::kDimension,
          "functions live on different spaces");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string range_kind_name(RangeKind kind) {
  switch (kind) {
    case RangeKind::kFinite: return "finite";
    case RangeKind::kUnit: return "[0,1]";
    case RangeKind::kSigned: return "[-1,1]";
    case RangeKind::kComplex: return "complex";
  }
  return "?";
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

FiniteFunction::FiniteFunction(
    FieldParams params, RangeKind kind, int alphabet,
    std::variant<std::vector<std::uint8_t>, std::vector<double>, std::vector<Complex>> values)
    : params_(params), kind_(kind), alphabet_(alphabet), values_(std::move(values)) {}

FiniteFunction FiniteFunction::finite(FieldParams params, int alphabet,
                                      std::vector<std::uint8_t> values) {
  require(alphabet >= 2 && alphabet <= 256, ErrorCode::kInvalidArgument,
          "alphabet size R must be in [2, 256]");
  require(values.size() == params.size(), ErrorCode::kDimension,
          "table has " + std::to_string(values.size()) + " values, expected " +
              std::to_string(params.size()));
  for (auto v : values) {
    require(v < alphabet, ErrorCode::kRange,
            "value " + std::to_string(v) + " outside [0, " + std::to_string(alphabet) + ")");
  }
  return FiniteFunction(params, RangeKind::kFinite, alphabet, std::move(values));
}

FiniteFunction FiniteFunction::real(FieldParams params, std::vector<double> values,
                                    RangeKind kind) {
  require(kind == RangeKind::kUnit || kind == RangeKind::kSigned, ErrorCode::kInvalidArgument,
          "real tables must be [0,1] or [-1,1]");
  require(values.size() == params.size(), ErrorCode::kDimension,
          "table has " + std::to_string(values.size()) + " values, expected " +
              std::to_string(params.size()));
  for (double& v : values) v = checked_real(v, kind);
  return FiniteFunction(params, kind, 0, std::move(values));
}

FiniteFunction FiniteFunction::real_auto(FieldParams params, std::vector<double> values) {
  const bool unit = std::all_of(values.begin(), values.end(),
                                [](double v) { return v >= -kRangeSlack && v <= 1 + kRangeSlack; });
  return real(params, std::move(values), unit ? RangeKind::kUnit : RangeKind::kSigned);
}

FiniteFunction FiniteFunction::complex(FieldParams params, std::vector<Complex> values) {
  require(values.size() == params.size(), ErrorCode::kDimension,
          "table has " + std::to_string(values.size()) + " values, expected " +
              std::to_string(params.size()));
  for (const auto& v : values) {
    require(std::abs(v) <= 1.0 + 1e-9, ErrorCode::kRange, "complex value outside the unit disc");
  }
  return FiniteFunction(params, RangeKind::kComplex, 0, std::move(values));
}

FiniteFunction FiniteFunction::constant_finite(FieldParams params, int alphabet, int value) {
  return finite(params, alphabet,
                std::vector<std::uint8_t>(params.size(), static_cast<std::uint8_t>(value)));
}

FiniteFunction FiniteFunction::constant_real(FieldParams params, double value) {
  return real_auto(params, std::vector<double>(params.size(), value));
}

double FiniteFunction::real_at(std::size_t i) const {
  switch (kind_) {
    case RangeKind::kFinite: return std::get<0>(values_)[i];
    case RangeKind::kUnit:
    case RangeKind::kSigned: return std::get<1>(values_)[i];
    case RangeKind::kComplex: break;
  }
  fail(ErrorCode::kRange, "complex-valued function used where a real one is required");
}

Complex FiniteFunction::complex_at(std::size_t i) const {
  if (kind_ == RangeKind::kComplex) return std::get<2>(values_)[i];
  return Complex(real_at(i), 0.0);
}

std::vector<double> FiniteFunction::to_real() const {
  require(!is_complex(), ErrorCode::kRange,
          "complex-valued function used where a real one is required");
  if (!is_finite()) return std::get<1>(values_);
  const auto& v = std::get<0>(values_);
  return std::vector<double>(v.begin(), v.end());
}

std::vector<Complex> FiniteFunction::to_complex() const {
  if (is_complex()) return std::get<2>(values_);
  std::vector<Complex> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Complex(real_at(i), 0.0);
  return out;
}

FiniteFunction FiniteFunction::as_real() const {
  if (is_real()) return *this;
  require(is_finite(), ErrorCode::kRange, "complex function has no real view");
  const auto v = to_real();
  const bool unit = alphabet_ == 2;
  require(unit, ErrorCode::kRange, "only {0,1}-valued finite tables have a [0,1] view");
  return real(params_, v, RangeKind::kUnit);
}

FiniteFunction restrict(const FiniteFunction& f, const AffineMap& map) {
  require(map.p() == f.params().p() && map.target_dim() == f.params().n(), ErrorCode::kDimension,
          "restriction map targets F_" + std::to_string(map.p()) + "^" +
              std::to_string(map.target_dim()) + " but f lives on F_" +
              std::to_string(f.params().p()) + "^" + std::to_string(f.params().n()));
  const auto table = map.point_table();
  const FieldParams src = map.source_params();
  switch (f.kind()) {
    case RangeKind::kFinite: {
      std::vector<std::uint8_t> out(table.size());
      for (std::size_t i = 0; i < table.size(); ++i) out[i] = f.finite_values()[table[i]];
      return FiniteFunction::finite(src, f.alphabet(), std::move(out));
    }
    case RangeKind::kUnit:
    case RangeKind::kSigned: {
      std::vector<double> out(table.size());
      for (std::size_t i = 0; i < table.size(); ++i) out[i] = f.real_values()[table[i]];
      return FiniteFunction::real(src, std::move(out), f.kind());
    }
    case RangeKind::kComplex: {
      std::vector<Complex> out(table.size());
      for (std::size_t i = 0; i < table.size(); ++i) out[i] = f.complex_values()[table[i]];
      return FiniteFunction::complex(src, std::move(out));
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown range kind");
}

FiniteFunction subtract(const FiniteFunction& f, const FiniteFunction& g) {
  require_same_space(f, g);
  const auto a = f.to_real();
  const auto b = g.to_real();
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return FiniteFunction::real(f.params(), std::move(d), RangeKind::kSigned);
}

double mean(const FiniteFunction& f) {
  require(!f.is_complex(), ErrorCode::kRange, "mean of a complex function");
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(f.real_at(i));
  return s.value() / static_cast<double>(f.size());
}

double l1_norm(const FiniteFunction& f) {
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(std::abs(f.complex_at(i)));
  return s.value() / static_cast<double>(f.size());
}

double l2_norm(const FiniteFunction& f) {
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(std::norm(f.complex_at(i)));
  return std::sqrt(s.value() / static_cast<double>(f.size()));
}

double linf_norm(const FiniteFunction& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f.complex_at(i)));
  return m;
}

double l1_distance(const FiniteFunction& f, const FiniteFunction& g) {
  require_same_space(f, g);
  if (f.is_finite() && g.is_finite()) {
    std::uint64_t total = 0;
    const auto a = f.finite_values();
    const auto b = g.finite_values();
    for (std::size_t i = 0; i < a.size(); ++i) total += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    return static_cast<double>(total) / static_cast<double>(a.size());
  }
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(std::abs(f.complex_at(i) - g.complex_at(i)));
  return s.value() / static_cast<double>(f.size());
}

double l2_distance(const FiniteFunction& f, const FiniteFunction& g) {
  require_same_space(f, g);
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(std::norm(f.complex_at(i) - g.complex_at(i)));
  return std::sqrt(s.value() / static_cast<double>(f.size()));
}

double linf_distance(const FiniteFunction& f, const FiniteFunction& g) {
  require_same_space(f, g);
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    m = std::max(m, std::abs(f.complex_at(i) - g.complex_at(i)));
  }
  return m;
}

double hamming_distance(const FiniteFunction& f, const FiniteFunction& g) {
  require_same_space(f, g);
  require(f.is_finite() && g.is_finite(), ErrorCode::kRange,
          "Hamming distance needs finite-valued tables");
  const auto a = f.finite_values();
  const auto b = g.finite_values();
  std::uint64_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

FiniteFunction round_randomized(const FiniteFunction& f, CounterRng& rng) {
  require(f.kind() == RangeKind::kUnit || f.is_boolean(), ErrorCode::kRange,
          "randomized rounding needs a [0,1]-valued function");
  std::vector<std::uint8_t> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double q = f.real_at(i);
    // Draw unconditionally so the stream position depends only on i.
    const double u = rng.uniform01();
    out[i] = u < q ? 1 : 0;
  }
  return FiniteFunction::finite(f.params(), 2, std::move(out));
}

std::vector<FiniteFunction> indicator_slices(const FiniteFunction& f) {
  require(f.is_finite(), ErrorCode::kRange, "slicing needs a finite-valued function");
  std::vector<FiniteFunction> slices;
  slices.reserve(f.alphabet());
  const auto v = f.finite_values();
  for (int s = 0; s < f.alphabet(); ++s) {
    std::vector<std::uint8_t> ind(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) ind[i] = v[i] == s;
    slices.push_back(FiniteFunction::finite(f.params(), 2, std::move(ind)));
  }
  return slices;
}

FiniteFunction combine_slices(std::span<const FiniteFunction> slices) {
  require(!slices.empty(), ErrorCode::kInvalidArgument, "no slices to combine");
  const FieldParams params = slices.front().params();
  std::vector<std::uint8_t> out(params.size(), 0);
  std::vector<std::uint8_t> covered(params.size(), 0);
  for (std::size_t s = 0; s < slices.size(); ++s) {
    require(slices[s].params() == params && slices[s].is_boolean(), ErrorCode::kDimension,
            "slices must be {0,1}-valued on a common space");
    const auto v = slices[s].finite_values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i]) continue;
      require(!covered[i], ErrorCode::kInvalidArgument, "slices overlap");
      covered[i] = 1;
      out[i] = static_cast<std::uint8_t>(s);
    }
  }
  for (auto c : covered) {
    require(c, ErrorCode::kInvalidArgument, "slices do not cover the space");
  }
  return FiniteFunction::finite(params, static_cast<int>(slices.size()), std::move(out));
}

FiniteFunction random_finite(const FieldParams& params, int alphabet, CounterRng& rng) {
  std::vector<std::uint8_t> values(params.size());
  for (auto& v : values) v = static_cast<std::uint8_t>(rng.uniform_below(alphabet));
  return FiniteFunction::finite(params, alphabet, std::move(values));
}

FiniteFunction random_real(const FieldParams& params, RangeKind kind, CounterRng& rng) {
  std::vector<double> values(params.size());
  for (auto& v : values) {
    v = kind == RangeKind::kSigned ? 2.0 * rng.uniform01() - 1.0 : rng.uniform01();
  }
  return FiniteFunction::real(params, std::move(values), kind);
}

std::string format_function(const FiniteFunction& f) {
  require(!f.is_complex(), ErrorCode::kInvalidArgument,
          "complex functions have no text representation");
  std::ostringstream out;
  const FieldParams& params = f.params();
  out << params.p() << ' ' << params.n() << ' ';
  if (f.is_finite()) {
    out << f.alphabet() << '\n';
  } else {
    out << "real\n";
  }
  // One row per coordinate-0 fibre keeps files readable.
  const std::size_t row = params.n() > 0 ? static_cast<std::size_t>(params.p()) : 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.is_finite()) {
      out << f.finite_at(i);
    } else {
      out << format_double(f.real_at(i));
    }
    out << ((i + 1) % row == 0 ? '\n' : ' ');
  }
  return out.str();
}

namespace {

FiniteFunction read_function(detail::TextReader& reader) {
  const auto header = reader.next_line();
  if (header.size() != 3) reader.error("expected header line 'p n R' or 'p n real'");
  int p = 0;
  int n = 0;
  try {
    p = std::stoi(header[0]);
    n = std::stoi(header[1]);
  } catch (const std::exception&) {
    reader.error("header must start with integers p and n");
  }
  if (!is_supported_prime(p)) reader.error("unsupported prime " + std::to_string(p));
  if (n < 0) reader.error("negative dimension");
  const std::uint64_t size = checked_pow(p, n, kMaxPoints);
  if (size == 0) reader.error("p^n exceeds the dense-table cap of 2^26");
  const FieldParams params(p, n);
  const std::string& range = header[2];
  if (range == "real") {
    std::vector<double> values(size);
    for (std::uint64_t i = 0; i < size; ++i) {
      values[i] = reader.next_double("value " + std::to_string(i));
      if (!(values[i] >= -1.0 && values[i] <= 1.0)) {
        reader.error("real value " + std::to_string(values[i]) + " outside [-1,1]");
      }
    }
    return FiniteFunction::real_auto(params, std::move(values));
  }
  int alphabet = 0;
  try {
    alphabet = std::stoi(range);
  } catch (const std::exception&) {
    reader.error("expected alphabet size R or 'real', found '" + range + "'");
  }
  if (alphabet < 2 || alphabet > 256) reader.error("alphabet size R must be in [2, 256]");
  std::vector<std::uint8_t> values(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    const int v = reader.next_int("value " + std::to_string(i));
    if (v < 0 || v >= alphabet) {
      reader.error("value " + std::to_string(v) + " outside [0, " + std::to_string(alphabet) +
                   ")");
    }
    values[i] = static_cast<std::uint8_t>(v);
  }
  return FiniteFunction::finite(params, alphabet, std::move(values));
}

}  // namespace

FiniteFunction parse_function(std::istream& in, const std::string& source_name) {
  detail::TextReader reader(in, source_name);
  auto f = read_function(reader);
  reader.expect_end();
  return f;
}

std::vector<FiniteFunction> parse_function_blocks(std::istream& in,
                                                  const std::string& source_name) {
  detail::TextReader reader(in, source_name);
  std::vector<FiniteFunction> blocks;
  while (!reader.at_end()) blocks.push_back(read_function(reader));
  return blocks;
}

}  // namespace hofa
