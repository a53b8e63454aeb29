// Serial reference vs OpenMP kernels for payoff generation and marginals.
#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <vector>

#include "gamedyn/game.h"
#include "gamedyn/kernels.h"

using namespace gamedyn;

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 3;
  const int m = argc > 2 ? std::atoi(argv[2]) : 100;
  const int max_threads = argc > 3 ? std::atoi(argv[3]) : omp_get_max_threads();
  const GameSpec spec{n, m, 0.5, 42};
  const std::uint64_t profiles = checked_profile_count(n, m);
  std::cout << "n=" << n << " m=" << m << " profiles=" << profiles << std::endl;

  std::vector<std::vector<double>> tables(n, std::vector<double>(profiles));
  double t0 = omp_get_wtime();
  kernels::fill_payoffs_reference(spec, tables);
  double t1 = omp_get_wtime();
  std::cout << "fill_payoffs serial: " << t1 - t0 << " sec" << std::endl;
  const double check = tables[0][profiles / 2];

  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    t0 = omp_get_wtime();
    kernels::fill_payoffs(spec, tables);
    t1 = omp_get_wtime();
    std::cout << "fill_payoffs threads: " << threads << ", time: " << t1 - t0
              << " sec, match: " << (tables[0][profiles / 2] == check) << std::endl;
  }

  const Game game = sample_game(spec);
  const MixedProfile x = uniform_profile(n, m);
  t0 = omp_get_wtime();
  const auto ref = kernels::marginal_payoffs_reference(game, x);
  t1 = omp_get_wtime();
  std::cout << "marginal_payoffs serial: " << t1 - t0 << " sec" << std::endl;
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    t0 = omp_get_wtime();
    const auto q = kernels::marginal_payoffs(game, x);
    t1 = omp_get_wtime();
    std::cout << "marginal_payoffs threads: " << threads << ", time: " << t1 - t0
              << " sec, q[0][0]: " << q[0][0] << " (serial " << ref[0][0] << ")" << std::endl;
  }
  return 0;
}
