#include "hofa/gowers.h"

#include <atomic>
#include <cmath>

#include "hofa/error.h"
#include "hofa/parallel.h"

namespace hofa {
namespace {

std::atomic<bool> g_sabotage{false};

double conj_if_complex(double v) { return v; }
Complex conj_if_complex(Complex v) { return std::conj(v); }

double squared_magnitude(double v) { return v * v; }
double squared_magnitude(Complex v) { return std::norm(v); }

double real_part(double v) { return v; }
double real_part(Complex v) { return v.real(); }

// ||g||_{U^d}^(2^d) via E_y ||Delta_y g||_{U^(d-1)}^(2^(d-1)), bottoming out at
// |E g|^2. At d = 2 the innermost derivative is folded into the mean.
template <typename T>
double gowers_power(const FieldParams& params, const std::vector<T>& g, int d) {
  const std::size_t size = g.size();
  if (d == 1) {
    T total{};
    for (const auto& v : g) total += v;
    return squared_magnitude(total / static_cast<double>(size));
  }
  CompensatedSum outer;
  std::vector<T> delta(size);
  for (std::size_t y = 0; y < size; ++y) {
    const auto shift = params.translation(static_cast<PointIndex>(y));
    if (d == 2) {
      T inner{};
      for (std::size_t x = 0; x < size; ++x) inner += g[shift[x]] * conj_if_complex(g[x]);
      outer.add(squared_magnitude(inner / static_cast<double>(size)));
    } else {
      for (std::size_t x = 0; x < size; ++x) delta[x] = g[shift[x]] * conj_if_complex(g[x]);
      outer.add(gowers_power(params, delta, d - 1));
    }
  }
  return outer.value() / static_cast<double>(size);
}

// Top level split over y so that workers never share buffers; per-y results
// are summed serially in index order.
template <typename T>
double gowers_power_parallel(const FieldParams& params, const std::vector<T>& g, int d) {
  const std::size_t size = g.size();
  if (d == 1) return gowers_power(params, g, 1);
  std::vector<double> per_y(size);
  parallel_for(size, [&](std::size_t y) {
    std::vector<T> delta(size);
    const auto shift = params.translation(static_cast<PointIndex>(y));
    for (std::size_t x = 0; x < size; ++x) delta[x] = g[shift[x]] * conj_if_complex(g[x]);
    per_y[y] = gowers_power(params, delta, d - 1);
  });
  CompensatedSum total;
  for (double v : per_y) total.add(v);
  return total.value() / static_cast<double>(size);
}

template <typename T>
double sample_product(const FieldParams& params, const std::vector<T>& g, int d,
                      CounterRng& rng) {
  const std::uint64_t size = params.size();
  const auto x = static_cast<PointIndex>(rng.uniform_below(size));
  std::vector<PointIndex> y(d);
  for (auto& v : y) v = static_cast<PointIndex>(rng.uniform_below(size));
  T product = T(1.0);
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    PointIndex point = x;
    int bits = 0;
    for (int i = 0; i < d; ++i) {
      if (mask >> i & 1) {
        point = params.add(point, y[i]);
        ++bits;
      }
    }
    // Conjugate whenever |omega| is odd, counted from the all-ones corner.
    product *= (d - bits) % 2 == 1 ? conj_if_complex(g[point]) : g[point];
  }
  return real_part(product);
}

void finalize(GowersEstimate& est) {
  double power = est.power;
  if (power < 0.0) {
    est.clamped = true;
    power = 0.0;
  }
  est.value = std::pow(power, 1.0 / std::ldexp(1.0, est.order));
}

}  // namespace

void set_gowers_sabotage(bool enabled) { g_sabotage.store(enabled); }
bool gowers_sabotage() { return g_sabotage.load(); }

FiniteFunction mult_derivative(const FiniteFunction& f, PointIndex h) {
  require(h < f.params().size(), ErrorCode::kDimension, "direction outside the space");
  const auto shift = f.params().translation(h);
  std::vector<Complex> out(f.size());
  for (std::size_t x = 0; x < out.size(); ++x) {
    out[x] = f.complex_at(shift[x]) * std::conj(f.complex_at(x));
  }
  return FiniteFunction::complex(f.params(), std::move(out));
}

GowersEstimate gowers_norm_exact(const FiniteFunction& f, int order) {
  require(order >= 1, ErrorCode::kInvalidOrder,
          "Gowers order must be at least 1, got " + std::to_string(order));
  const std::uint64_t work = checked_pow(f.params().size(), order, kMaxGowersWork);
  require(work != 0, ErrorCode::kCapacityExceeded,
          "exact U^" + std::to_string(order) + " on " + std::to_string(f.params().size()) +
              " points exceeds the enumeration cap");
  GowersEstimate est;
  est.order = order;
  est.exact = true;
  if (f.is_complex()) {
    est.power = gowers_power_parallel(f.params(), f.to_complex(), order);
  } else {
    est.power = gowers_power_parallel(f.params(), f.to_real(), order);
  }
  finalize(est);
  if (gowers_sabotage()) est.value = std::pow(est.value, 1.05);
  return est;
}

GowersEstimate gowers_norm_estimate(const FiniteFunction& f, int order, std::uint64_t samples,
                                    std::uint64_t seed) {
  require(order >= 1, ErrorCode::kInvalidOrder,
          "Gowers order must be at least 1, got " + std::to_string(order));
  require(order <= 30, ErrorCode::kInvalidOrder, "Gowers order too large for sampling");
  require(samples >= 1, ErrorCode::kInvalidArgument, "need at least one sample");
  std::vector<double> values(samples);
  const bool complex = f.is_complex();
  const auto complex_table = complex ? f.to_complex() : std::vector<Complex>{};
  const auto real_table = complex ? std::vector<double>{} : f.to_real();
  parallel_for(samples, [&](std::size_t i) {
    CounterRng rng = CounterRng::derive(seed, i);
    values[i] = complex ? sample_product(f.params(), complex_table, order, rng)
                        : sample_product(f.params(), real_table, order, rng);
  });
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  const double n = static_cast<double>(samples);
  const double m = sum.value() / n;
  CompensatedSum sq;
  for (double v : values) sq.add((v - m) * (v - m));
  GowersEstimate est;
  est.order = order;
  est.exact = false;
  est.samples = samples;
  est.seed = seed;
  est.power = m;
  est.std_error = samples > 1 ? std::sqrt(sq.value() / (n - 1) / n) : 0.0;
  finalize(est);
  return est;
}

double gowers_norm(const FiniteFunction& f, int order) { return gowers_norm_exact(f, order).value; }

}  // namespace hofa
