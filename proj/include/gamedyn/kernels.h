#ifndef GAMEDYN_KERNELS_H_
#define GAMEDYN_KERNELS_H_

// Data-parallel tensor kernels. Each OpenMP kernel has a plain serial
// reference kept for tests and benchmarks. Parallel kernels partition work
// by player 0's action and combine partial results in ascending block order,
// so their output does not depend on the thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "gamedyn/game.h"

namespace gamedyn::kernels {

// Below this many profiles the parallel kernels run on the calling thread.
inline constexpr std::uint64_t kParallelThreshold = 1 << 15;

// Writes the correlated Gaussian payoffs for `spec` into `tables` (one table
// when correlation == 1, else one per player). Tables must be presized.
void fill_payoffs(const GameSpec& spec,
                  std::span<std::vector<double>> tables);
void fill_payoffs_reference(const GameSpec& spec,
                            std::span<std::vector<double>> tables);

// q[i][a] = sum_{a_-i} u_i(a, a_-i) prod_{j != i} x_{j, a_j} for every player.
std::vector<std::vector<double>> marginal_payoffs(const Game& game,
                                                  const MixedProfile& x);
// Direct per-profile evaluation of the same sums.
std::vector<std::vector<double>> marginal_payoffs_reference(
    const Game& game, const MixedProfile& x);

std::vector<double> expected_payoffs(const Game& game, const MixedProfile& x);
std::vector<double> expected_payoffs_reference(const Game& game,
                                               const MixedProfile& x);

}  // namespace gamedyn::kernels

#endif  // GAMEDYN_KERNELS_H_
