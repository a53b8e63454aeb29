#ifndef GAMEDYN_DYNAMICS_H_
#define GAMEDYN_DYNAMICS_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gamedyn/game.h"

namespace gamedyn {

enum class TerminalKind { kFixedPoint, kCycle, kTruncated };

const char* terminal_kind_name(TerminalKind kind);

// Terminal behaviour of a deterministic pure-strategy dynamic.
struct DynOutcome {
  TerminalKind kind = TerminalKind::kTruncated;
  // Fixed point: the single NE profile. Cycle: the distinct members in visit
  // order; the dynamic maps members[k] to members[k+1] and the last one back
  // to the first.
  std::vector<ActionProfile> members;
  // Period of the terminal orbit (1 for a fixed point, 0 when truncated).
  int cycle_length = 0;
  // First time T at which a profile recurs, i.e. a^T == a^s for some s < T.
  std::int64_t steps_to_terminal = 0;
  // a^0 .. a^T, filled only when requested.
  std::optional<std::vector<ActionProfile>> trajectory;

  bool is_fixed_point() const { return kind == TerminalKind::kFixedPoint; }
  bool is_cycle() const { return kind == TerminalKind::kCycle; }
  bool is_two_cycle() const { return is_cycle() && cycle_length == 2; }
};

// min(m^n + 1, 1e5).
std::int64_t default_max_steps(const Game& game);

// Simultaneous best-response dynamics: every player best-responds to the
// previous profile. Stops at the first revisited profile.
DynOutcome run_sbrd(const Game& game, const ActionProfile& start,
                    std::int64_t max_steps, bool keep_trajectory = false);

// One synchronous best-response step on a flat profile index.
std::uint64_t sbrd_step(const Game& game, std::uint64_t index);

// Raised when an INDD player has no eligible action left.
class ExhaustionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-player history of the two-player independent dynamic. A player may
// replay the action from two periods ago or any action never played before.
class InddHistory {
 public:
  InddHistory(int num_actions, const ActionProfile& start);

  int time() const { return time_; }
  const std::vector<int>& played(int player) const { return played_[player]; }

  // Whether `action` is eligible for `player` at the next period.
  bool eligible(int player, int action) const;
  void advance(const ActionProfile& next);

 private:
  std::vector<std::vector<bool>> used_;
  std::vector<std::vector<int>> played_;
  int time_ = 0;
};

// Two-player independent dynamic. Requires n == 2 (ArityError) and m >= 3
// (std::invalid_argument). Terminates on the first repeated profile, which
// is always a two-cycle.
DynOutcome run_indd(const Game& game, const ActionProfile& start,
                    std::int64_t max_steps, bool keep_trajectory = false);

// For a two-cycle between (a, b) and (a', b'), whether both cross profiles
// (a, b') and (a', b) are pure NE.
bool cross_profiles_are_nash(const Game& game, const DynOutcome& cycle);

struct AgreementReport {
  bool coincide = false;
  // First period at which SBRD and INDD play different profiles.
  std::optional<std::int64_t> divergence_time;
  std::int64_t indd_termination_time = 0;
  DynOutcome indd;
};

// Runs INDD and SBRD from the same start on the same game and compares the
// trajectories period by period up to INDD's termination time.
AgreementReport compare_sbrd_indd(const Game& game, const ActionProfile& start,
                                  std::int64_t max_steps);

}  // namespace gamedyn

#endif  // GAMEDYN_DYNAMICS_H_
