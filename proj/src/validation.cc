#include "gamedyn/validation.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>

#include "gamedyn/dynamics.h"
#include "gamedyn/experiment.h"
#include "gamedyn/game.h"
#include "gamedyn/kernels.h"
#include "gamedyn/random.h"
#include "gamedyn/spgd.h"
#include "gamedyn/stats.h"

namespace gamedyn {
namespace {

// Per-game facts gathered by the two-player suites.
struct TwoPlayerRun {
  DynOutcome sbrd;
  bool fixed_point_is_nash = true;
  bool cross_nash = true;
  bool indd_two_cycle = true;
  bool coincide = false;
};

std::vector<TwoPlayerRun> run_two_player(const SuiteOptions& opt, std::uint64_t suite_id,
                                         int m, std::int64_t runs, bool with_indd) {
  std::vector<TwoPlayerRun> out(static_cast<std::size_t>(runs));
  std::exception_ptr failure;
  const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t r = 0; r < runs; ++r) {
    try {
      const GameSpec spec{2, m, 1.0, derive_seed(opt.seed, suite_id, static_cast<std::uint64_t>(r))};
      const Game game = sample_game(spec);
      const ActionProfile start{0, 0};
      TwoPlayerRun& run = out[r];
      run.sbrd = run_sbrd(game, start, default_max_steps(game));
      if (run.sbrd.is_fixed_point()) {
        run.fixed_point_is_nash = is_pure_nash(game, run.sbrd.members.front());
      }
      if (run.sbrd.is_two_cycle()) run.cross_nash = cross_profiles_are_nash(game, run.sbrd);
      if (with_indd) {
        const AgreementReport rep = compare_sbrd_indd(game, start, default_max_steps(game));
        run.indd_two_cycle = rep.indd.is_two_cycle();
        run.coincide = rep.coincide;
      }
    } catch (...) {
#pragma omp critical(gamedyn_suite_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

SuiteReport lemma1_suite(const SuiteOptions& opt) {
  const std::int64_t runs = opt.runs > 0 ? opt.runs : 1000;
  const auto results = run_two_player(opt, 1, 50, runs, false);
  std::int64_t fixed = 0, two = 0, longer = 0, truncated = 0, unsound = 0;
  for (const auto& r : results) {
    if (r.sbrd.is_fixed_point()) ++fixed;
    else if (r.sbrd.is_two_cycle()) ++two;
    else if (r.sbrd.is_cycle()) ++longer;
    else ++truncated;
    if (!r.fixed_point_is_nash) ++unsound;
  }
  SuiteReport rep{"lemma1", longer == 0 && unsound == 0, runs, {}, ""};
  rep.metrics = {{"fixed_points", double(fixed)}, {"two_cycles", double(two)},
                 {"longer_cycles", double(longer)}, {"truncated", double(truncated)},
                 {"fixed_points_not_nash", double(unsound)}};
  rep.message = rep.passed ? "every terminal orbit has length one or two"
                           : "observed a cycle of length >= 3 or an unsound fixed point";
  return rep;
}

SuiteReport remark_suite(const SuiteOptions& opt) {
  const std::int64_t runs = opt.runs > 0 ? opt.runs : 1000;
  const auto results = run_two_player(opt, 1, 50, runs, false);
  std::int64_t two = 0, failing = 0;
  for (const auto& r : results) {
    if (!r.sbrd.is_two_cycle()) continue;
    ++two;
    if (!r.cross_nash) ++failing;
  }
  SuiteReport rep{"remark", failing == 0, runs, {}, ""};
  rep.metrics = {{"two_cycles", double(two)}, {"cross_profiles_not_nash", double(failing)}};
  rep.message = rep.passed ? "both cross profiles of every two-cycle are pure NE"
                           : "a two-cycle has a cross profile that is not a NE";
  return rep;
}

SuiteReport indd_suite(const SuiteOptions& opt, bool agreement) {
  const std::int64_t runs = opt.runs > 0 ? opt.runs : 1000;
  const auto results = run_two_player(opt, 2, 500, runs, true);
  std::int64_t indd_two = 0, coincide = 0;
  for (const auto& r : results) {
    if (r.indd_two_cycle) ++indd_two;
    if (r.coincide) ++coincide;
  }
  const double frac = double(coincide) / double(runs);
  if (!agreement) {
    SuiteReport rep{"indd", indd_two == runs, runs, {}, ""};
    rep.metrics = {{"indd_two_cycles", double(indd_two)}};
    rep.message = rep.passed ? "INDD terminated in a two-cycle on every game"
                             : "INDD terminated outside a two-cycle";
    return rep;
  }
  SuiteReport rep{"agreement", frac >= 0.90, runs, {}, ""};
  rep.metrics = {{"coincide", double(coincide)}, {"coincide_fraction", frac},
                 {"threshold", 0.90}};
  rep.message = rep.passed ? "SBRD and INDD coincide up to INDD termination in >= 90% of games"
                           : "SBRD/INDD agreement below 90%";
  return rep;
}

SuiteReport theorem1_suite(const SuiteOptions& opt) {
  const std::int64_t runs = opt.runs > 0 ? opt.runs : 1000;
  const auto results = run_two_player(opt, 2, 500, runs, false);
  const int bound = theorem1_step_bound(0.05);
  std::int64_t two = 0, fast = 0;
  for (const auto& r : results) {
    if (!r.sbrd.is_two_cycle()) continue;
    ++two;
    if (r.sbrd.steps_to_terminal <= bound) ++fast;
  }
  const auto ci = stats::clopper_pearson(two, runs);
  const double frac_two = double(two) / double(runs);
  const double frac_fast = double(fast) / double(runs);
  SuiteReport rep{"theorem1", frac_two >= 0.95 && ci.lo >= 0.92 && frac_fast >= 0.90, runs, {}, ""};
  rep.metrics = {{"two_cycle_fraction", frac_two}, {"two_cycle_cp_lo", ci.lo},
                 {"within_bound_fraction", frac_fast}, {"step_bound", double(bound)}};
  rep.message = rep.passed ? "two-cycle reached quickly with high probability"
                           : "two-cycle frequency or speed below threshold";
  return rep;
}

// Player-i payoff as a function of its own logits, through the direct
// per-profile sum rather than the blocked kernel.
double payoff_of_logits(const Game& game, MixedProfile x, int player,
                        const std::vector<double>& logits) {
  x[player] = softmax(logits);
  return kernels::expected_payoffs_reference(game, x)[player];
}

SuiteReport gradcheck_suite(const SuiteOptions& opt) {
  const std::int64_t runs = opt.runs > 0 ? opt.runs : 20;
  constexpr double kStep = 1e-5;
  double worst_rel = 0.0, worst_sum = 0.0;
  for (std::int64_t r = 0; r < runs; ++r) {
    const std::uint64_t seed = derive_seed(opt.seed, 3, static_cast<std::uint64_t>(r));
    const CounterStream stream(seed, 77);
    const int n = 2 + static_cast<int>(stream.below(0, 2));
    const int m = 2 + static_cast<int>(stream.below(1, 5));
    const double lambda = stream.uniform(2);
    const Game game = sample_game({n, m, lambda, seed});
    std::vector<std::vector<double>> logits(n, std::vector<double>(m));
    MixedProfile x(n);
    std::uint64_t c = 10;
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < m; ++a) logits[i][a] = stream.normal(c++);
      x[i] = softmax(logits[i]);
    }
    for (int i = 0; i < n; ++i) {
      const auto g = policy_gradient(game, x, i);
      double sum = 0.0, diff = 0.0, scale = 0.0;
      for (int a = 0; a < m; ++a) {
        auto up = logits[i], down = logits[i];
        up[a] += kStep;
        down[a] -= kStep;
        const double fd = (payoff_of_logits(game, x, i, up) -
                           payoff_of_logits(game, x, i, down)) / (2 * kStep);
        diff = std::max(diff, std::abs(fd - g[a]));
        scale = std::max(scale, std::abs(g[a]));
        sum += g[a];
      }
      worst_rel = std::max(worst_rel, diff / std::max(scale, 1e-12));
      worst_sum = std::max(worst_sum, std::abs(sum));
    }
  }
  SuiteReport rep{"gradcheck", worst_rel <= 1e-5 && worst_sum <= 1e-12, runs, {}, ""};
  rep.metrics = {{"max_relative_error", worst_rel}, {"max_abs_component_sum", worst_sum}};
  rep.message = rep.passed ? "analytic gradients match central differences"
                           : "gradient mismatch against central differences";
  return rep;
}

}  // namespace

int theorem1_step_bound(double eps) {
  return static_cast<int>(std::ceil(std::log(eps) / std::log(0.75)));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> kNames = {"lemma1", "remark",   "indd",
                                                  "agreement", "theorem1", "gradcheck"};
  return kNames;
}

SuiteReport run_suite(std::string_view name, const SuiteOptions& options) {
  if (name == "lemma1") return lemma1_suite(options);
  if (name == "remark") return remark_suite(options);
  if (name == "indd") return indd_suite(options, false);
  if (name == "agreement") return indd_suite(options, true);
  if (name == "theorem1") return theorem1_suite(options);
  if (name == "gradcheck") return gradcheck_suite(options);
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

}  // namespace gamedyn
