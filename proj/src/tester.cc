#include "hofa/tester.h"

#include "hofa/affine.h"
#include "hofa/error.h"
#include "hofa/parallel.h"

namespace hofa {

TesterResult distance_tester(const FiniteFunction& f, const PropertyOracle& property,
                             const TesterConfig& cfg) {
  require(cfg.delta >= 0.0 && cfg.delta <= 1.0 && cfg.eps > 0.0, ErrorCode::kInvalidArgument,
          "need 0 <= delta <= 1 and eps > 0");
  require(cfg.m >= 0 && cfg.m <= f.params().n(), ErrorCode::kDimension,
          "restriction dimension m=" + std::to_string(cfg.m) + " must lie in [0, n]");
  require(cfg.trials >= 1, ErrorCode::kInvalidArgument, "need at least one trial");
  require(f.is_finite(), ErrorCode::kRange, "the tester needs a finite-valued function");
  require(f.params().p() == property.p(), ErrorCode::kDimension,
          "function and property use different primes");

  TesterResult result;
  result.threshold = cfg.threshold();
  result.distances.assign(cfg.trials, 0.0);
  parallel_for(cfg.trials, [&](std::size_t t) {
    CounterRng rng = CounterRng::derive(cfg.seed, t);
    const AffineMap a = sample_affine_embedding(rng, cfg.m, f.params().n(), f.params().p());
    result.distances[t] = property.distance(restrict(f, a));
  });
  for (double d : result.distances) result.accepted += d < result.threshold;
  result.accept_fraction =
      static_cast<double>(result.accepted) / static_cast<double>(cfg.trials);
  result.accept = 2 * result.accepted > cfg.trials;
  return result;
}

}  // namespace hofa
