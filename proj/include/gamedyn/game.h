#ifndef GAMEDYN_GAME_H_
#define GAMEDYN_GAME_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gamedyn {

// Joint action, one entry per player, each in [0, m).
using ActionProfile = std::vector<int>;

// One probability vector per player.
using MixedProfile = std::vector<std::vector<double>>;

inline constexpr std::uint64_t kDefaultMaxEntries = 100'000'000;

// Raised when a game or an enumeration would exceed its memory bound.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Raised when an operation is applied to a game with the wrong player count.
class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GameSpec {
  int num_players = 2;
  int num_actions = 2;
  // Pairwise correlation between players' payoffs at each profile.
  double correlation = 1.0;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on out-of-range fields and CapacityError
  // when num_players * num_actions^num_players exceeds max_entries.
  void validate(std::uint64_t max_entries = kDefaultMaxEntries) const;
};

// m^n, or 0 if it overflows 64 bits.
std::uint64_t checked_profile_count(int num_players, int num_actions);

// Normal-form game with dense payoff tables. Profiles are indexed row-major
// with player 0 most significant: index(a) = sum_i a_i * m^(n-1-i).
//
// A potential game stores a single table that every player reads.
class Game {
 public:
  // General game from one table per player. Allows m == 1 for degenerate
  // hand-built games.
  static Game from_tables(int num_players, int num_actions,
                          std::vector<std::vector<double>> tables);
  // Potential game where every player's payoff is `potential`.
  static Game from_potential(int num_players, int num_actions,
                             std::vector<double> potential);

  const GameSpec& spec() const { return spec_; }
  int num_players() const { return spec_.num_players; }
  int num_actions() const { return spec_.num_actions; }
  std::uint64_t num_profiles() const { return num_profiles_; }
  bool is_potential() const { return tables_.size() == 1; }

  std::span<const double> payoffs(int player) const {
    return tables_[is_potential() ? 0 : player];
  }
  double payoff_at(int player, std::uint64_t index) const {
    return payoffs(player)[index];
  }

  // Distance in the flat index between adjacent actions of `player`.
  std::uint64_t stride(int player) const { return strides_[player]; }
  int action_at(std::uint64_t index, int player) const {
    return static_cast<int>((index / strides_[player]) %
                            static_cast<std::uint64_t>(spec_.num_actions));
  }

  std::uint64_t profile_index(const ActionProfile& profile) const;
  ActionProfile profile_at(std::uint64_t index) const;

  // Throws std::invalid_argument unless the profile has n in-range entries.
  void check_profile(const ActionProfile& profile) const;
  // Throws std::invalid_argument unless every strategy is a simplex vector
  // of length m (entries >= 0, sum within 1e-9 of 1).
  void check_mixed(const MixedProfile& x) const;

 private:
  friend Game sample_game(const GameSpec&, std::uint64_t);
  friend Game sample_game_reference(const GameSpec&, std::uint64_t);

  Game(GameSpec spec, std::vector<std::vector<double>> tables);

  GameSpec spec_;
  std::uint64_t num_profiles_ = 0;
  std::vector<std::uint64_t> strides_;
  std::vector<std::vector<double>> tables_;
};

// Draws a game whose payoffs at each profile are jointly Gaussian with unit
// marginals and pairwise correlation spec.correlation, independent across
// profiles: u_i(a) = sqrt(c) Z(a) + sqrt(1 - c) W_i(a). A pure function of
// the spec. Fills the tables in parallel with OpenMP.
Game sample_game(const GameSpec& spec,
                 std::uint64_t max_entries = kDefaultMaxEntries);

// Single-threaded fill with the same draws; bit-identical to sample_game.
Game sample_game_reference(const GameSpec& spec,
                           std::uint64_t max_entries = kDefaultMaxEntries);

double payoff(const Game& game, int player, const ActionProfile& profile);

// u_i(x) = sum_a u_i(a) prod_j x_{j,a_j}.
double expected_payoff(const Game& game, const MixedProfile& x, int player);
// All players in one pass over the profiles.
std::vector<double> expected_payoffs(const Game& game, const MixedProfile& x);

// Argmax of the player's payoff against the rest of `profile`; the lowest
// action index wins ties.
int best_response(const Game& game, int player, const ActionProfile& profile);
int best_response_at(const Game& game, int player, std::uint64_t index);

bool is_pure_nash(const Game& game, const ActionProfile& profile);
bool is_pure_nash_at(const Game& game, std::uint64_t index);

inline constexpr std::uint64_t kMaxEnumeratedProfiles = 10'000'000;

// Every pure NE in ascending profile-index order. Throws CapacityError when
// m^n exceeds kMaxEnumeratedProfiles.
std::vector<ActionProfile> enumerate_pure_nash(const Game& game);

MixedProfile uniform_profile(int num_players, int num_actions);
MixedProfile pure_profile(const Game& game, const ActionProfile& profile);

std::string format_profile(const ActionProfile& profile);

}  // namespace gamedyn

#endif  // GAMEDYN_GAME_H_
