#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "gamedyn/game.h"
#include "gamedyn/kernels.h"
#include "gamedyn/random.h"

using namespace gamedyn;

namespace {

MixedProfile random_mixed(int n, int m, std::uint64_t seed) {
  const CounterStream s(seed, 1);
  std::uint64_t c = 0;
  MixedProfile x(n, std::vector<double>(m));
  for (auto& xi : x) {
    double t = 0;
    for (double& v : xi) t += (v = s.uniform(c++));
    for (double& v : xi) v /= t;
  }
  return x;
}

}  // namespace

TEST_CASE("marginal kernel matches the naive per-profile sum") {
  for (int n = 2; n <= 4; ++n) {
    for (double lambda : {0.0, 0.7, 1.0}) {
      const int m = n == 4 ? 6 : 9;
      const Game g = sample_game({n, m, lambda, static_cast<std::uint64_t>(n * 10)});
      const auto x = random_mixed(n, m, 3);
      const auto fast = kernels::marginal_payoffs(g, x);
      const auto ref = kernels::marginal_payoffs_reference(g, x);
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < m; ++a) CHECK(std::abs(fast[i][a] - ref[i][a]) < 1e-12);
      }
      const auto e = kernels::expected_payoffs(g, x);
      const auto er = kernels::expected_payoffs_reference(g, x);
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(e[i] - er[i]) < 1e-12);
        double via_q = 0;
        for (int a = 0; a < m; ++a) via_q += x[i][a] * fast[i][a];
        CHECK(std::abs(via_q - e[i]) < 1e-9);
      }
    }
  }
}

TEST_CASE("parallel kernels are thread-count independent above the threshold") {
  const Game g = sample_game({3, 40, 0.5, 8});
  REQUIRE(g.num_profiles() >= kernels::kParallelThreshold);
  const auto x = random_mixed(3, 40, 9);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto q1 = kernels::marginal_payoffs(g, x);
  const auto e1 = kernels::expected_payoffs(g, x);
  const Game g1 = sample_game({3, 40, 0.5, 8});
  omp_set_num_threads(4);
  const auto q4 = kernels::marginal_payoffs(g, x);
  const auto e4 = kernels::expected_payoffs(g, x);
  const Game g4 = sample_game({3, 40, 0.5, 8});
  omp_set_num_threads(saved);
  CHECK(q1 == q4);
  CHECK(e1 == e4);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::equal(g1.payoffs(i).begin(), g1.payoffs(i).end(), g4.payoffs(i).begin()));
  }
}

TEST_CASE("fill_payoffs follows the common-factor construction") {
  const GameSpec spec{2, 5, 0.36, 17};
  std::vector<std::vector<double>> tables(2, std::vector<double>(25));
  kernels::fill_payoffs_reference(spec, tables);
  const CounterStream z(17, 0), w0(17, 1), w1(17, 2);
  for (std::uint64_t k = 0; k < 25; ++k) {
    CHECK(tables[0][k] == doctest::Approx(0.6 * z.normal(k) + 0.8 * w0.normal(k)));
    CHECK(tables[1][k] == doctest::Approx(0.6 * z.normal(k) + 0.8 * w1.normal(k)));
  }
}
