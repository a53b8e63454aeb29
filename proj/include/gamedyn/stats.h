#ifndef GAMEDYN_STATS_H_
#define GAMEDYN_STATS_H_

#include <cstdint>
#include <span>

namespace gamedyn::stats {

inline constexpr double kDefaultConfidence = 0.995;

struct IntervalEstimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double confidence = kDefaultConfidence;
};

struct SummaryStat {
  double mean = 0.0;
  // Sample standard deviation over sqrt(count); 0 for a single sample.
  double se = 0.0;
  std::int64_t count = 0;
  bool single_sample = false;
};

// Regularized incomplete beta I_x(a, b). Throws std::domain_error outside
// x in [0, 1], a > 0, b > 0.
double reg_inc_beta(double x, double a, double b);

// p such that I_p(a, b) == target, by bisection.
double beta_quantile(double target, double a, double b);

// Exact binomial interval from Beta quantiles at level alpha/2 on each side.
IntervalEstimate clopper_pearson(std::int64_t successes, std::int64_t trials,
                                 double confidence = kDefaultConfidence);

// Throws std::invalid_argument on empty input.
SummaryStat mean_and_se(std::span<const double> samples);

}  // namespace gamedyn::stats

#endif  // GAMEDYN_STATS_H_
