#include "gamedyn/game.h"

#include <cmath>
#include <sstream>
#include <utility>

#include "gamedyn/kernels.h"

namespace gamedyn {

std::uint64_t checked_profile_count(int num_players, int num_actions) {
  if (num_players < 1 || num_actions < 1) return 0;
  std::uint64_t count = 1;
  for (int i = 0; i < num_players; ++i) {
    if (count > UINT64_MAX / static_cast<std::uint64_t>(num_actions)) return 0;
    count *= static_cast<std::uint64_t>(num_actions);
  }
  return count;
}

void GameSpec::validate(std::uint64_t max_entries) const {
  if (num_players < 2) {
    throw std::invalid_argument("num_players must be >= 2, got " +
                                std::to_string(num_players));
  }
  if (num_actions < 2) {
    throw std::invalid_argument("num_actions must be >= 2, got " +
                                std::to_string(num_actions));
  }
  if (!(correlation >= 0.0 && correlation <= 1.0)) {
    throw std::invalid_argument("correlation must lie in [0, 1]");
  }
  const std::uint64_t profiles = checked_profile_count(num_players, num_actions);
  if (profiles == 0 ||
      profiles > max_entries / static_cast<std::uint64_t>(num_players)) {
    throw CapacityError("game with n=" + std::to_string(num_players) +
                        ", m=" + std::to_string(num_actions) +
                        " exceeds the payoff-entry cap of " +
                        std::to_string(max_entries));
  }
}

Game::Game(GameSpec spec, std::vector<std::vector<double>> tables)
    : spec_(spec), tables_(std::move(tables)) {
  num_profiles_ = checked_profile_count(spec_.num_players, spec_.num_actions);
  strides_.assign(spec_.num_players, 1);
  for (int i = spec_.num_players - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * static_cast<std::uint64_t>(spec_.num_actions);
  }
}

Game Game::from_tables(int num_players, int num_actions,
                       std::vector<std::vector<double>> tables) {
  if (num_players < 1 || num_actions < 1) {
    throw std::invalid_argument("game needs at least one player and action");
  }
  const std::uint64_t profiles = checked_profile_count(num_players, num_actions);
  if (profiles == 0) throw CapacityError("profile count overflows");
  if (tables.size() != static_cast<std::size_t>(num_players)) {
    throw std::invalid_argument("expected one payoff table per player");
  }
  for (const auto& t : tables) {
    if (t.size() != profiles) {
      throw std::invalid_argument("payoff table has " +
                                  std::to_string(t.size()) + " entries, need " +
                                  std::to_string(profiles));
    }
    for (double v : t) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite payoff");
    }
  }
  GameSpec spec{num_players, num_actions, 0.0, 0};
  return Game(spec, std::move(tables));
}

Game Game::from_potential(int num_players, int num_actions,
                          std::vector<double> potential) {
  if (num_players < 1 || num_actions < 1) {
    throw std::invalid_argument("game needs at least one player and action");
  }
  const std::uint64_t profiles = checked_profile_count(num_players, num_actions);
  if (profiles == 0) throw CapacityError("profile count overflows");
  if (potential.size() != profiles) {
    throw std::invalid_argument("potential table has wrong size");
  }
  for (double v : potential) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite payoff");
  }
  GameSpec spec{num_players, num_actions, 1.0, 0};
  std::vector<std::vector<double>> tables;
  tables.push_back(std::move(potential));
  return Game(spec, std::move(tables));
}

std::uint64_t Game::profile_index(const ActionProfile& profile) const {
  std::uint64_t index = 0;
  for (int i = 0; i < spec_.num_players; ++i) {
    index += static_cast<std::uint64_t>(profile[i]) * strides_[i];
  }
  return index;
}

ActionProfile Game::profile_at(std::uint64_t index) const {
  ActionProfile profile(spec_.num_players);
  for (int i = 0; i < spec_.num_players; ++i) profile[i] = action_at(index, i);
  return profile;
}

void Game::check_profile(const ActionProfile& profile) const {
  if (profile.size() != static_cast<std::size_t>(spec_.num_players)) {
    throw std::invalid_argument("profile length " +
                                std::to_string(profile.size()) +
                                " != number of players");
  }
  for (int a : profile) {
    if (a < 0 || a >= spec_.num_actions) {
      throw std::invalid_argument("action " + std::to_string(a) +
                                  " out of range");
    }
  }
}

void Game::check_mixed(const MixedProfile& x) const {
  if (x.size() != static_cast<std::size_t>(spec_.num_players)) {
    throw std::invalid_argument("mixed profile needs one strategy per player");
  }
  for (const auto& xi : x) {
    if (xi.size() != static_cast<std::size_t>(spec_.num_actions)) {
      throw std::invalid_argument("strategy length != number of actions");
    }
    double sum = 0.0;
    for (double p : xi) {
      if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("strategy does not sum to 1");
    }
  }
}

namespace {

std::vector<std::vector<double>> allocate_tables(const GameSpec& spec) {
  const std::uint64_t profiles =
      checked_profile_count(spec.num_players, spec.num_actions);
  const std::size_t count = spec.correlation == 1.0 ? 1 : spec.num_players;
  return std::vector<std::vector<double>>(count,
                                          std::vector<double>(profiles));
}

}  // namespace

Game sample_game(const GameSpec& spec, std::uint64_t max_entries) {
  spec.validate(max_entries);
  auto tables = allocate_tables(spec);
  kernels::fill_payoffs(spec, tables);
  return Game(spec, std::move(tables));
}

Game sample_game_reference(const GameSpec& spec, std::uint64_t max_entries) {
  spec.validate(max_entries);
  auto tables = allocate_tables(spec);
  kernels::fill_payoffs_reference(spec, tables);
  return Game(spec, std::move(tables));
}

double payoff(const Game& game, int player, const ActionProfile& profile) {
  game.check_profile(profile);
  return game.payoff_at(player, game.profile_index(profile));
}

double expected_payoff(const Game& game, const MixedProfile& x, int player) {
  return expected_payoffs(game, x)[player];
}

std::vector<double> expected_payoffs(const Game& game, const MixedProfile& x) {
  game.check_mixed(x);
  return kernels::expected_payoffs(game, x);
}

int best_response_at(const Game& game, int player, std::uint64_t index) {
  const auto table = game.payoffs(player);
  const std::uint64_t stride = game.stride(player);
  const std::uint64_t base =
      index - static_cast<std::uint64_t>(game.action_at(index, player)) * stride;
  int best = 0;
  double best_value = table[base];
  for (int a = 1; a < game.num_actions(); ++a) {
    const double v = table[base + static_cast<std::uint64_t>(a) * stride];
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

int best_response(const Game& game, int player, const ActionProfile& profile) {
  game.check_profile(profile);
  return best_response_at(game, player, game.profile_index(profile));
}

bool is_pure_nash_at(const Game& game, std::uint64_t index) {
  for (int i = 0; i < game.num_players(); ++i) {
    const auto table = game.payoffs(i);
    const std::uint64_t stride = game.stride(i);
    const std::uint64_t base =
        index - static_cast<std::uint64_t>(game.action_at(index, i)) * stride;
    const double current = table[index];
    for (int a = 0; a < game.num_actions(); ++a) {
      if (table[base + static_cast<std::uint64_t>(a) * stride] > current) {
        return false;
      }
    }
  }
  return true;
}

bool is_pure_nash(const Game& game, const ActionProfile& profile) {
  game.check_profile(profile);
  return is_pure_nash_at(game, game.profile_index(profile));
}

std::vector<ActionProfile> enumerate_pure_nash(const Game& game) {
  if (game.num_profiles() > kMaxEnumeratedProfiles) {
    throw CapacityError("enumerate_pure_nash limited to " +
                        std::to_string(kMaxEnumeratedProfiles) + " profiles");
  }
  std::vector<ActionProfile> result;
  for (std::uint64_t idx = 0; idx < game.num_profiles(); ++idx) {
    if (is_pure_nash_at(game, idx)) result.push_back(game.profile_at(idx));
  }
  return result;
}

MixedProfile uniform_profile(int num_players, int num_actions) {
  return MixedProfile(num_players,
                      std::vector<double>(num_actions, 1.0 / num_actions));
}

MixedProfile pure_profile(const Game& game, const ActionProfile& profile) {
  game.check_profile(profile);
  MixedProfile x(game.num_players(),
                 std::vector<double>(game.num_actions(), 0.0));
  for (int i = 0; i < game.num_players(); ++i) x[i][profile[i]] = 1.0;
  return x;
}

std::string format_profile(const ActionProfile& profile) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out << ',';
    out << profile[i];
  }
  out << ')';
  return out.str();
}

}  // namespace gamedyn
