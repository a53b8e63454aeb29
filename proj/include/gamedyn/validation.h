#ifndef GAMEDYN_VALIDATION_H_
#define GAMEDYN_VALIDATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gamedyn {

struct SuiteOptions {
  std::uint64_t seed = 0;
  // 0 selects the suite's default run count.
  std::int64_t runs = 0;
  int threads = 0;
};

struct SuiteReport {
  std::string suite;
  bool passed = false;
  std::int64_t runs = 0;
  // Ordered key/value metrics, rendered as JSON by the CLI.
  std::vector<std::pair<std::string, double>> metrics;
  std::string message;
};

// lemma1, remark, indd, agreement, theorem1, gradcheck.
const std::vector<std::string>& suite_names();

// Throws std::invalid_argument for unknown suite names.
SuiteReport run_suite(std::string_view name, const SuiteOptions& options);

// Smallest integer T with 0.75^T <= eps.
int theorem1_step_bound(double eps);

}  // namespace gamedyn

#endif  // GAMEDYN_VALIDATION_H_
