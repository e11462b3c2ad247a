#include "hofa/polynomial.h"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

#include "hofa/error.h"
#include "poly_io.h"

namespace hofa {
namespace {

bool key_less(const Monomial& a, const Monomial& b) {
  if (a.depth != b.depth) return a.depth < b.depth;
  return a.exponents < b.exponents;
}

// c * prod |x_i|^d_i * p^(level - depth) mod p^(level+1).
std::uint32_t monomial_numerator(const Monomial& m, std::span<const int> x, int p, int level,
                                 std::uint32_t modulus) {
  std::uint64_t v = static_cast<std::uint64_t>(m.coefficient);
  for (std::size_t i = 0; i < m.exponents.size() && v != 0; ++i) {
    for (int e = 0; e < m.exponents[i]; ++e) v = (v * static_cast<std::uint64_t>(x[i])) % modulus;
  }
  for (int s = m.depth; s < level; ++s) v = (v * static_cast<std::uint64_t>(p)) % modulus;
  return static_cast<std::uint32_t>(v % modulus);
}

TorsionTable monomial_table(const FieldParams& params, const Monomial& m, int level) {
  TorsionTable out(params, level);
  const int n = params.n();
  std::vector<int> x(n, 0);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out.numerator(idx) = monomial_numerator(m, x, params.p(), level, out.modulus());
    for (int i = 0; i < n; ++i) {
      if (++x[i] < params.p()) break;
      x[i] = 0;
    }
  }
  return out;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

bool exhaustive_check(const TorsionTable& t, int d) {
  if (d < 0) return t.is_zero();
  if (d == 0) return t.is_constant();
  for (PointIndex h = 1; h < t.params().size(); ++h) {
    if (!exhaustive_check(t.derivative(h), d - 1)) return false;
  }
  return true;
}

// Derivatives commute, so non-decreasing basis index sequences suffice.
bool basis_check(const TorsionTable& t, int d, int first) {
  if (d < 0) return t.is_zero();
  if (d == 0) return t.is_constant();
  for (int i = first; i < t.params().n(); ++i) {
    if (!basis_check(t.derivative(t.params().basis(i)), d - 1, i)) return false;
  }
  return true;
}

bool randomized_check(const TorsionTable& t, int d, std::uint64_t samples, std::uint64_t seed) {
  if (d < 0) return t.is_zero();
  const FieldParams& params = t.params();
  const int k = d + 1;
  const std::uint32_t m = t.modulus();
  for (std::uint64_t s = 0; s < samples; ++s) {
    CounterRng rng = CounterRng::derive(seed, s);
    const auto x = static_cast<PointIndex>(rng.uniform_below(params.size()));
    std::vector<PointIndex> y(k);
    for (auto& v : y) v = static_cast<PointIndex>(rng.uniform_below(params.size()));
    std::uint64_t acc = 0;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      PointIndex point = x;
      int bits = 0;
      for (int i = 0; i < k; ++i) {
        if (mask >> i & 1) {
          point = params.add(point, y[i]);
          ++bits;
        }
      }
      const std::uint32_t v = t.numerator(point);
      acc += ((k - bits) % 2 == 0) ? v : m - v;
    }
    if (acc % m != 0) return false;
  }
  return true;
}

}  // namespace

int Monomial::degree(int p) const {
  return std::accumulate(exponents.begin(), exponents.end(), 0) + depth * (p - 1);
}

bool Monomial::is_constant() const {
  return std::all_of(exponents.begin(), exponents.end(), [](int e) { return e == 0; });
}

NonClassicalPoly::NonClassicalPoly(FieldParams params, std::vector<Monomial> monomials)
    : params_(params) {
  const int p = params.p();
  for (auto& m : monomials) {
    require(static_cast<int>(m.exponents.size()) == params.n(), ErrorCode::kDimension,
            "monomial has " + std::to_string(m.exponents.size()) + " exponents, expected " +
                std::to_string(params.n()));
    for (int e : m.exponents) {
      require(e >= 0 && e < p, ErrorCode::kInvalidArgument, "exponent outside [0, p)");
    }
    require(m.depth >= 0, ErrorCode::kInvalidArgument, "negative depth");
    require(!m.is_constant() || m.depth == 0, ErrorCode::kInvalidArgument,
            "constant terms are only allowed at depth 0");
    require(torsion_modulus(p, m.depth) != 0, ErrorCode::kCapacityExceeded, "depth too large");
    m.coefficient = ((m.coefficient % p) + p) % p;
    if (m.coefficient != 0) monomials_.push_back(std::move(m));
  }
  std::sort(monomials_.begin(), monomials_.end(), key_less);
  for (std::size_t i = 1; i < monomials_.size(); ++i) {
    require(key_less(monomials_[i - 1], monomials_[i]), ErrorCode::kInvalidArgument,
            "repeated monomial key");
  }
  for (const auto& m : monomials_) {
    degree_ = std::max(degree_, m.degree(p));
    depth_ = std::max(depth_, m.depth);
  }
}

NonClassicalPoly NonClassicalPoly::coordinate(FieldParams params, int i, int depth, int c) {
  require(i >= 0 && i < params.n(), ErrorCode::kDimension, "coordinate index out of range");
  std::vector<int> e(params.n(), 0);
  e[i] = 1;
  return NonClassicalPoly(params, {Monomial{e, depth, c}});
}

NonClassicalPoly NonClassicalPoly::linear(FieldParams params, const std::vector<int>& a) {
  require(static_cast<int>(a.size()) == params.n(), ErrorCode::kDimension,
          "linear form has the wrong length");
  std::vector<Monomial> terms;
  for (int i = 0; i < params.n(); ++i) {
    std::vector<int> e(params.n(), 0);
    e[i] = 1;
    terms.push_back(Monomial{e, 0, a[i]});
  }
  return NonClassicalPoly(params, std::move(terms));
}

TorsionValue NonClassicalPoly::evaluate(std::span<const int> x) const {
  require(static_cast<int>(x.size()) == params_.n(), ErrorCode::kDimension,
          "point has the wrong dimension");
  const int p = params_.p();
  const std::uint32_t modulus = torsion_modulus(p, depth_);
  std::uint64_t total = 0;
  for (const auto& m : monomials_) total += monomial_numerator(m, x, p, depth_, modulus);
  return {p, depth_, static_cast<std::uint32_t>(total % modulus)};
}

TorsionValue NonClassicalPoly::evaluate(PointIndex x) const {
  require(x < params_.size(), ErrorCode::kDimension, "point index out of range");
  const auto c = params_.coords(x);
  return evaluate(std::span<const int>(c));
}

TorsionTable NonClassicalPoly::table() const {
  TorsionTable out(params_, depth_);
  for (const auto& m : monomials_) {
    const TorsionTable t = monomial_table(params_, m, depth_);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out.numerator(i) = (out.numerator(i) + t.numerator(i)) % out.modulus();
    }
  }
  return out;
}

TorsionTable add_derivative(const NonClassicalPoly& poly, PointIndex h) {
  require(h < poly.params().size(), ErrorCode::kDimension, "direction outside the space");
  return poly.table().derivative(h);
}

double bias(const NonClassicalPoly& poly) { return poly.table().bias(); }

bool verify_degree(const TorsionTable& table, int d, const DegreeCheckOptions& options) {
  const std::uint64_t size = table.params().size();
  const int n = table.params().n();
  DegreeCheck mode = options.mode;
  if (d <= 0) return d < 0 ? table.is_zero() : table.is_constant();
  if (mode == DegreeCheck::kAuto) {
    const std::uint64_t tuples = binomial_capped(n + d - 1, d, options.max_work);
    mode = tuples <= options.max_work / std::max<std::uint64_t>(size, 1) ? DegreeCheck::kBasis
                                                                         : DegreeCheck::kRandomized;
  }
  switch (mode) {
    case DegreeCheck::kExhaustive: {
      const std::uint64_t work = checked_pow(size, d + 1, options.max_work);
      require(work != 0, ErrorCode::kCapacityExceeded,
              "exhaustive degree check needs (p^n)^(d+1) steps, above the work cap");
      return exhaustive_check(table, d);
    }
    case DegreeCheck::kBasis: {
      const std::uint64_t tuples = binomial_capped(n + d - 1, d, options.max_work);
      require(tuples <= options.max_work / std::max<std::uint64_t>(size, 1),
              ErrorCode::kCapacityExceeded, "basis degree check exceeds the work cap");
      return basis_check(table, d, 0);
    }
    case DegreeCheck::kRandomized:
      return randomized_check(table, d, options.samples, options.seed);
    case DegreeCheck::kAuto:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "unknown degree-check mode");
}

bool verify_degree(const NonClassicalPoly& poly, int d, const DegreeCheckOptions& options) {
  return verify_degree(poly.table(), d, options);
}

int measured_degree(const TorsionTable& table) {
  if (table.is_zero()) return -1;
  const int p = table.params().p();
  const int limit = (table.params().n() + table.level() + 1) * (p - 1);
  DegreeCheckOptions options;
  options.mode = DegreeCheck::kBasis;
  for (int d = 0; d <= limit; ++d) {
    if (verify_degree(table, d, options)) return d;
  }
  fail(ErrorCode::kInvalidArgument, "table is not a polynomial of bounded degree");
}

std::vector<MonomialKey> admissible_keys(const FieldParams& params, int max_degree, int max_depth,
                                         bool include_constant) {
  const int p = params.p();
  const int n = params.n();
  std::vector<MonomialKey> keys;
  if (include_constant && max_degree >= 0) keys.push_back({std::vector<int>(n, 0), 0});
  for (int k = 0; k <= max_depth; ++k) {
    const int budget = max_degree - k * (p - 1);
    if (budget < 1) break;
    // Exponent vectors in canonical index order of F_p^n.
    std::vector<int> e(n, 0);
    const std::uint64_t count = params.size();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      const int total = std::accumulate(e.begin(), e.end(), 0);
      if (total >= 1 && total <= budget) keys.push_back({e, k});
      for (int i = 0; i < n; ++i) {
        if (++e[i] < p) break;
        e[i] = 0;
      }
    }
  }
  return keys;
}

std::uint64_t poly_count(const FieldParams& params, int max_degree, int max_depth,
                         bool include_constant) {
  const auto keys = admissible_keys(params, max_degree, max_depth, include_constant);
  return checked_pow(params.p(), static_cast<int>(keys.size()), kMaxEnumeratedPolys);
}

void for_each_poly(const FieldParams& params, int max_degree, int max_depth,
                   const std::function<void(const std::vector<int>&, const TorsionTable&)>& visit,
                   bool include_constant) {
  const auto keys = admissible_keys(params, max_degree, max_depth, include_constant);
  require(checked_pow(params.p(), static_cast<int>(keys.size()), kMaxEnumeratedPolys) != 0,
          ErrorCode::kCapacityExceeded,
          "enumeration of p^" + std::to_string(keys.size()) + " polynomials exceeds 2^24");
  int level = 0;
  for (const auto& k : keys) level = std::max(level, k.depth);
  std::vector<TorsionTable> units;
  units.reserve(keys.size());
  for (const auto& k : keys) units.push_back(monomial_table(params, Monomial{k.exponents, k.depth, 1}, level));

  const int p = params.p();
  TorsionTable table(params, level);
  std::vector<int> coeffs(keys.size(), 0);
  const std::uint32_t m = table.modulus();
  while (true) {
    visit(coeffs, table);
    std::size_t j = 0;
    for (; j < keys.size(); ++j) {
      const auto& u = units[j];
      if (++coeffs[j] < p) {
        for (std::size_t i = 0; i < table.size(); ++i) {
          table.numerator(i) = (table.numerator(i) + u.numerator(i)) % m;
        }
        break;
      }
      // Wrapping from p-1 back to 0 removes (p-1) copies of the monomial.
      coeffs[j] = 0;
      const std::uint64_t back = static_cast<std::uint64_t>(p - 1);
      for (std::size_t i = 0; i < table.size(); ++i) {
        const std::uint64_t sub = (back * u.numerator(i)) % m;
        table.numerator(i) = static_cast<std::uint32_t>((table.numerator(i) + m - sub) % m);
      }
    }
    if (j == keys.size()) break;
  }
}

NonClassicalPoly poly_from_coefficients(const FieldParams& params,
                                        const std::vector<MonomialKey>& keys,
                                        const std::vector<int>& coefficients) {
  require(keys.size() == coefficients.size(), ErrorCode::kDimension,
          "coefficient vector does not match the key list");
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (coefficients[i] != 0) terms.push_back({keys[i].exponents, keys[i].depth, coefficients[i]});
  }
  return NonClassicalPoly(params, std::move(terms));
}

std::vector<NonClassicalPoly> enumerate_polys(const FieldParams& params, int max_degree,
                                              int max_depth) {
  const auto keys = admissible_keys(params, max_degree, max_depth);
  std::vector<NonClassicalPoly> out;
  for_each_poly(params, max_degree, max_depth,
                [&](const std::vector<int>& coeffs, const TorsionTable&) {
                  out.push_back(poly_from_coefficients(params, keys, coeffs));
                });
  return out;
}

NonClassicalPoly random_poly(const FieldParams& params, int max_degree, int max_depth,
                             CounterRng& rng) {
  const auto keys = admissible_keys(params, max_degree, max_depth, false);
  std::vector<int> coeffs(keys.size());
  for (auto& c : coeffs) c = static_cast<int>(rng.uniform_below(params.p()));
  return poly_from_coefficients(params, keys, coeffs);
}

std::string format_poly(const NonClassicalPoly& poly) {
  std::ostringstream out;
  out << poly.params().p() << ' ' << poly.params().n() << '\n';
  for (const auto& m : poly.monomials()) {
    out << m.depth << ' ' << m.coefficient;
    for (int e : m.exponents) out << ' ' << e;
    out << '\n';
  }
  return out.str();
}

namespace detail {

NonClassicalPoly read_poly(TextReader& reader) {
  const auto header = reader.next_line();
  if (header.size() != 2) reader.error("expected polynomial header 'p n'");
  int p = 0;
  int n = 0;
  try {
    p = std::stoi(header[0]);
    n = std::stoi(header[1]);
  } catch (const std::exception&) {
    reader.error("polynomial header must be two integers");
  }
  if (!is_supported_prime(p)) reader.error("unsupported prime " + std::to_string(p));
  if (n < 0) reader.error("negative dimension");
  if (checked_pow(p, n, kMaxPoints) == 0) reader.error("p^n exceeds the dense-table cap");
  const FieldParams params(p, n);
  std::vector<Monomial> terms;
  // A zero-dimensional monomial line has the same width as a header, so with
  // n = 0 a block is read until end of input.
  while (reader.peek_line_width() == static_cast<std::size_t>(n + 2)) {
    const int line = reader.line();
    Monomial m;
    m.depth = reader.next_int("depth k");
    m.coefficient = reader.next_int("coefficient c");
    m.exponents.resize(n);
    for (int& e : m.exponents) e = reader.next_int("exponent");
    if (m.depth < 0) reader.error("negative depth");
    if (m.coefficient < 0 || m.coefficient >= p) reader.error("coefficient outside [0, p)");
    for (int e : m.exponents) {
      if (e < 0 || e >= p) reader.error("exponent outside [0, p)");
    }
    if (m.depth > 0 && m.is_constant()) {
      reader.error("constant terms are only allowed at depth 0");
    }
    for (const auto& prev : terms) {
      if (prev.depth == m.depth && prev.exponents == m.exponents) {
        reader.error("repeated monomial (line " + std::to_string(line) + ")");
      }
    }
    terms.push_back(std::move(m));
  }
  try {
    return NonClassicalPoly(params, std::move(terms));
  } catch (const Error& e) {
    reader.error(e.what());
  }
}

}  // namespace detail

NonClassicalPoly parse_poly(std::istream& in, const std::string& source_name) {
  detail::TextReader reader(in, source_name);
  auto poly = detail::read_poly(reader);
  reader.expect_end();
  return poly;
}

}  // namespace hofa
