#include "gamedyn/stats.h"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <stdexcept>

namespace gamedyn::stats {

double reg_inc_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0) || !(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("reg_inc_beta: need x in [0,1], a > 0, b > 0");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double beta_quantile(double target, double a, double b) {
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 60 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (reg_inc_beta(mid, a, b) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

IntervalEstimate clopper_pearson(std::int64_t successes, std::int64_t trials,
                                 double confidence) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw std::invalid_argument("clopper_pearson: need 0 <= k <= s, s >= 1");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("clopper_pearson: confidence must be in (0,1)");
  }
  const double alpha = 1.0 - confidence;
  const auto k = static_cast<double>(successes);
  const auto s = static_cast<double>(trials);
  IntervalEstimate est;
  est.confidence = confidence;
  est.point = k / s;
  est.lo = successes == 0 ? 0.0 : beta_quantile(alpha / 2.0, k, s - k + 1.0);
  est.hi = successes == trials ? 1.0
                               : beta_quantile(1.0 - alpha / 2.0, k + 1.0, s - k);
  return est;
}

SummaryStat mean_and_se(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("mean_and_se: empty input");
  SummaryStat out;
  out.count = static_cast<std::int64_t>(samples.size());
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.mean = sum / static_cast<double>(out.count);
  if (out.count == 1) {
    out.single_sample = true;
    return out;
  }
  double ss = 0.0;
  for (double v : samples) ss += (v - out.mean) * (v - out.mean);
  const double stddev = std::sqrt(ss / static_cast<double>(out.count - 1));
  out.se = stddev / std::sqrt(static_cast<double>(out.count));
  return out;
}

}  // namespace gamedyn::stats
