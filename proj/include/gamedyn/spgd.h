#ifndef GAMEDYN_SPGD_H_
#define GAMEDYN_SPGD_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gamedyn/game.h"

namespace gamedyn {

struct SpgdConfig {
  double learning_rate = 0.5;
  std::int64_t max_iters = 100'000;
  double gap_tol = 1e-3;
  std::int64_t record_every = 1;

  void validate() const;
};

// Raised when the logits stop being finite (learning rate too large).
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpgdOutcome {
  MixedProfile final;
  std::int64_t iters = 0;
  bool converged = false;
  double final_gap = 0.0;
  std::vector<double> terminal_expected_payoffs;
  // Mean over recorded iterations of the player-averaged expected payoff.
  double trajectory_mean_payoff = 0.0;
  ActionProfile rounded_profile;
  bool rounded_is_nash = false;

  double terminal_mean_payoff() const;
};

std::vector<double> softmax(std::span<const double> logits);

// q_i(a) = u_i(a, x_-i) for each of the player's actions.
std::vector<double> marginal_payoffs(const Game& game, const MixedProfile& x,
                                     int player);

// Gradient of u_i with respect to player i's softmax logits:
// g_a = x_{i,a} (q_i(a) - u_i(x)).
std::vector<double> policy_gradient(const Game& game, const MixedProfile& x,
                                    int player);

// max_i (max_a q_i(a) - u_i(x)); zero exactly at a Nash equilibrium.
double ne_gap(const Game& game, const MixedProfile& x);

// Simultaneous softmax policy gradient ascent with exact gradients. Starts
// from uniform logits unless `init` is given (its logits are log x).
// Stops when ne_gap < gap_tol or after max_iters updates.
// `observer`, when set, sees every iteration's gap and expected payoffs.
using SpgdObserver = std::function<void(std::int64_t iter, double gap,
                                        const std::vector<double>& payoffs)>;

SpgdOutcome run_spgd(const Game& game, const SpgdConfig& cfg,
                     const std::optional<MixedProfile>& init = std::nullopt,
                     const SpgdObserver& observer = {});

}  // namespace gamedyn

#endif  // GAMEDYN_SPGD_H_
