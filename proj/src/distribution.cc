#include "hofa/distribution.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "hofa/affine.h"
#include "hofa/error.h"
#include "hofa/gowers.h"
#include "hofa/linalg.h"
#include "hofa/parallel.h"

namespace hofa {
namespace {

// Outcome tables are dense over 2^(p^k) keys.
constexpr std::uint64_t kMaxOutcomePoints = 16;

std::uint64_t outcome_points(const FiniteFunction& f, int k) {
  require(k >= 0 && k <= f.params().n(), ErrorCode::kDimension,
          "restriction dimension k=" + std::to_string(k) + " must lie in [0, n]");
  require(f.is_boolean() || f.kind() == RangeKind::kUnit, ErrorCode::kRange,
          "restriction distributions need a {0,1}- or [0,1]-valued function");
  const std::uint64_t points = checked_pow(f.params().p(), k, kMaxOutcomePoints);
  require(points != 0, ErrorCode::kCapacityExceeded,
          "outcome space 2^(p^k) is too large for k=" + std::to_string(k));
  return points;
}

}  // namespace

double RestrictionDistribution::prob(OutcomeKey v) const {
  const auto it = probs.find(v);
  return it == probs.end() ? 0.0 : it->second;
}

double RestrictionDistribution::total() const {
  CompensatedSum s;
  for (const auto& [key, q] : probs) s.add(q);
  return s.value();
}

RestrictionDistribution mu_exact(const FiniteFunction& f, int k) {
  const std::uint64_t points = outcome_points(f, k);
  const int p = f.params().p();
  const int n = f.params().n();
  const std::uint64_t count = embedding_count(p, k, n, kMaxExactEmbeddings);
  require(count != 0, ErrorCode::kCapacityExceeded,
          "exact restriction distribution needs more than 2^24 embeddings");
  const std::size_t outcomes = std::size_t{1} << points;
  RestrictionDistribution mu;
  mu.p = p;
  mu.k = k;
  if (f.is_boolean()) {
    std::vector<std::uint64_t> counts(outcomes, 0);
    const auto values = f.finite_values();
    for_each_embedding(p, k, n, [&](std::span<const PointIndex> table) {
      OutcomeKey key = 0;
      for (std::size_t i = 0; i < table.size(); ++i) key |= OutcomeKey{values[table[i]]} << i;
      ++counts[key];
    });
    for (std::size_t v = 0; v < outcomes; ++v) {
      if (counts[v] != 0) {
        mu.probs[v] = static_cast<double>(counts[v]) / static_cast<double>(count);
      }
    }
    return mu;
  }
  const auto values = f.real_values();
  std::vector<CompensatedSum> sums(outcomes);
  std::vector<double> weights(outcomes);
  for_each_embedding(p, k, n, [&](std::span<const PointIndex> table) {
    // Product of independent Bernoulli(f(A y)) over the points y.
    weights[0] = 1.0;
    std::size_t filled = 1;
    for (std::size_t i = 0; i < table.size(); ++i) {
      const double q = values[table[i]];
      for (std::size_t v = 0; v < filled; ++v) {
        weights[v | filled] = weights[v] * q;
        weights[v] *= 1.0 - q;
      }
      filled <<= 1;
    }
    for (std::size_t v = 0; v < outcomes; ++v) {
      if (weights[v] != 0.0) sums[v].add(weights[v]);
    }
  });
  for (std::size_t v = 0; v < outcomes; ++v) {
    const double q = sums[v].value() / static_cast<double>(count);
    if (q != 0.0) mu.probs[v] = q;
  }
  return mu;
}

RestrictionDistribution mu_estimate(const FiniteFunction& f, int k, std::uint64_t samples,
                                    std::uint64_t seed) {
  outcome_points(f, k);
  require(samples >= 1, ErrorCode::kInvalidArgument, "need at least one sample");
  const int p = f.params().p();
  const int n = f.params().n();
  std::vector<OutcomeKey> keys(samples);
  const bool boolean = f.is_boolean();
  parallel_for(samples, [&](std::size_t i) {
    CounterRng rng = CounterRng::derive(seed, i);
    const AffineMap a = sample_affine_embedding(rng, k, n, p);
    const auto table = a.point_table();
    OutcomeKey key = 0;
    for (std::size_t y = 0; y < table.size(); ++y) {
      const bool bit = boolean ? f.finite_at(table[y]) != 0 : rng.bernoulli(f.real_at(table[y]));
      key |= OutcomeKey{bit} << y;
    }
    keys[i] = key;
  });
  std::map<OutcomeKey, std::uint64_t> counts;
  for (auto key : keys) ++counts[key];
  RestrictionDistribution mu;
  mu.p = p;
  mu.k = k;
  mu.exact = false;
  mu.samples = samples;
  mu.seed = seed;
  for (const auto& [key, c] : counts) {
    mu.probs[key] = static_cast<double>(c) / static_cast<double>(samples);
  }
  return mu;
}

double stat_distance(const RestrictionDistribution& a, const RestrictionDistribution& b) {
  require(a.p == b.p && a.k == b.k, ErrorCode::kDimension,
          "distributions over different outcome spaces");
  std::set<OutcomeKey> keys;
  for (const auto& [key, q] : a.probs) keys.insert(key);
  for (const auto& [key, q] : b.probs) keys.insert(key);
  CompensatedSum s;
  for (auto key : keys) s.add(std::abs(a.prob(key) - b.prob(key)));
  return 0.5 * s.value();
}

bool LinearFormSystem::has_duplicates() const {
  std::set<std::vector<int>> seen;
  for (const auto& f : forms) {
    if (!seen.insert(f).second) return true;
  }
  return false;
}

LinearFormSystem affine_subspace_system(int p, int k) {
  require(is_supported_prime(p), ErrorCode::kInvalidArgument, "unsupported prime");
  require(k >= 0, ErrorCode::kDimension, "negative dimension");
  const FieldParams params(p, k);
  LinearFormSystem system{p, k + 1, {}};
  for (PointIndex a = 0; a < params.size(); ++a) {
    std::vector<int> form{1};
    const auto c = params.coords(a);
    form.insert(form.end(), c.begin(), c.end());
    system.forms.push_back(std::move(form));
  }
  return system;
}

namespace {

// Fewest parts (at most `budget`) splitting `others` so that `target` is
// outside every part's span. Parts can only lose this property by growing, so
// a failed placement never needs to be retried with a superset.
bool can_partition(int p, const std::vector<std::vector<int>>& others, const std::vector<int>& target,
                   std::size_t next, std::vector<std::vector<std::vector<int>>>& parts,
                   std::size_t budget) {
  if (next == others.size()) return true;
  // Index loop: the recursion may grow `parts`.
  for (std::size_t i = 0; i < parts.size(); ++i) {
    parts[i].push_back(others[next]);
    if (!in_span(p, parts[i], target) && can_partition(p, others, target, next + 1, parts, budget)) {
      return true;
    }
    parts[i].pop_back();
  }
  if (parts.size() < budget) {
    parts.push_back({others[next]});
    if (!in_span(p, parts.back(), target) &&
        can_partition(p, others, target, next + 1, parts, budget)) {
      return true;
    }
    parts.pop_back();
  }
  return false;
}

}  // namespace

std::optional<int> cs_complexity(const LinearFormSystem& system) {
  require(!system.forms.empty(), ErrorCode::kInvalidArgument, "empty linear form system");
  require(system.forms.size() <= kMaxComplexityForms, ErrorCode::kCapacityExceeded,
          "exact complexity search is limited to 12 forms");
  for (const auto& form : system.forms) {
    require(static_cast<int>(form.size()) == system.k, ErrorCode::kDimension,
            "linear form has the wrong number of variables");
  }
  const int p = system.p;
  int worst = 1;
  for (std::size_t i = 0; i < system.forms.size(); ++i) {
    const auto& target = system.forms[i];
    std::vector<std::vector<int>> others;
    for (std::size_t j = 0; j < system.forms.size(); ++j) {
      if (j != i) others.push_back(system.forms[j]);
    }
    // Each other form must avoid target on its own, or no partition exists.
    if (std::all_of(target.begin(), target.end(), [p](int v) { return v % p == 0; })) {
      return std::nullopt;
    }
    for (const auto& o : others) {
      if (in_span(p, std::vector<std::vector<int>>{o}, target)) return std::nullopt;
    }
    std::size_t parts_needed = others.empty() ? 1 : others.size();
    for (std::size_t budget = 1; budget <= others.size(); ++budget) {
      std::vector<std::vector<std::vector<int>>> parts;
      if (can_partition(p, others, target, 0, parts, budget)) {
        parts_needed = budget;
        break;
      }
    }
    worst = std::max(worst, static_cast<int>(parts_needed));
  }
  return worst - 1;
}

double linear_form_average(const LinearFormSystem& system, std::span<const FiniteFunction> fs) {
  require(fs.size() == system.forms.size(), ErrorCode::kDimension,
          "need one function per linear form");
  require(!fs.empty(), ErrorCode::kInvalidArgument, "empty linear form system");
  const FieldParams params = fs.front().params();
  require(params.p() == system.p, ErrorCode::kDimension, "forms and functions use different primes");
  for (const auto& f : fs) {
    require(f.params() == params, ErrorCode::kDimension, "functions live on different spaces");
  }
  const std::uint64_t tuples = checked_pow(params.size(), system.k, kMaxPoints);
  require(tuples != 0, ErrorCode::kCapacityExceeded, "too many variable tuples to enumerate");
  std::vector<std::vector<double>> tables;
  for (const auto& f : fs) tables.push_back(f.to_real());
  const std::size_t size = params.size();
  CompensatedSum total;
  std::vector<PointIndex> x(system.k, 0);
  for (std::uint64_t t = 0; t < tuples; ++t) {
    double product = 1.0;
    for (std::size_t i = 0; i < system.forms.size() && product != 0.0; ++i) {
      PointIndex point = 0;
      for (int j = 0; j < system.k; ++j) {
        const int c = mod_p(system.forms[i][j], system.p);
        if (c != 0) point = params.add(point, params.scale(c, x[j]));
      }
      product *= tables[i][point];
    }
    total.add(product);
    for (int j = 0; j < system.k; ++j) {
      if (++x[j] < size) break;
      x[j] = 0;
    }
  }
  return total.value() / static_cast<double>(tuples);
}

LipschitzReport mu_lipschitz_check(const FiniteFunction& f, const FiniteFunction& g, int k) {
  require(f.params() == g.params(), ErrorCode::kDimension, "functions live on different spaces");
  const int p = f.params().p();
  const std::uint64_t pk = checked_pow(p, k, kMaxOutcomePoints);
  require(pk != 0, ErrorCode::kCapacityExceeded, "p^k too large for the Lipschitz check");
  LipschitzReport report;
  report.order = static_cast<int>(pk) + 1;
  report.gowers = gowers_norm(subtract(f, g), report.order);
  const auto mf = mu_exact(f, k);
  const auto mg = mu_exact(g, k);
  std::set<OutcomeKey> keys;
  for (const auto& [key, q] : mf.probs) keys.insert(key);
  for (const auto& [key, q] : mg.probs) keys.insert(key);
  for (auto key : keys) {
    report.max_outcome_gap = std::max(report.max_outcome_gap, std::abs(mf.prob(key) - mg.prob(key)));
  }
  report.distance = stat_distance(mf, mg);
  report.outcome_bound = static_cast<double>(pk) * report.gowers;
  report.distance_bound = std::ldexp(1.0, static_cast<int>(pk)) * report.outcome_bound;
  report.holds = report.max_outcome_gap <= report.outcome_bound + 1e-12 &&
                 report.distance <= report.distance_bound + 1e-12;
  return report;
}

}  // namespace hofa
