#include "gamedyn/dynamics.h"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace gamedyn {

const char* terminal_kind_name(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::kFixedPoint: return "NE";
    case TerminalKind::kCycle: return "CYCLE";
    case TerminalKind::kTruncated: return "TRUNCATED";
  }
  return "TRUNCATED";
}

std::int64_t default_max_steps(const Game& game) {
  constexpr std::int64_t kCap = 100'000;
  const std::uint64_t profiles = game.num_profiles();
  if (profiles >= static_cast<std::uint64_t>(kCap)) return kCap;
  return std::min<std::int64_t>(static_cast<std::int64_t>(profiles) + 1, kCap);
}

std::uint64_t sbrd_step(const Game& game, std::uint64_t index) {
  std::uint64_t next = 0;
  for (int i = 0; i < game.num_players(); ++i) {
    next += static_cast<std::uint64_t>(best_response_at(game, i, index)) *
            game.stride(i);
  }
  return next;
}

namespace {

// Shared first-visit bookkeeping for both dynamics. `step(t, index)` returns
// a^t given a^{t-1}.
template <typename Step>
DynOutcome iterate_until_repeat(const Game& game, std::uint64_t start,
                                std::int64_t max_steps, bool keep_trajectory,
                                Step step) {
  std::vector<std::uint64_t> path{start};
  std::unordered_map<std::uint64_t, std::int64_t> first_visit{{start, 0}};
  DynOutcome out;
  std::uint64_t current = start;
  for (std::int64_t t = 1; t <= max_steps; ++t) {
    current = step(t, current);
    path.push_back(current);
    const auto [it, fresh] = first_visit.emplace(current, t);
    if (fresh) continue;
    const std::int64_t s = it->second;
    out.steps_to_terminal = t;
    out.cycle_length = static_cast<int>(t - s);
    out.kind = out.cycle_length == 1 ? TerminalKind::kFixedPoint
                                     : TerminalKind::kCycle;
    for (std::int64_t k = s; k < t; ++k) out.members.push_back(game.profile_at(path[k]));
    break;
  }
  if (out.kind == TerminalKind::kTruncated) out.steps_to_terminal = max_steps;
  if (keep_trajectory) {
    std::vector<ActionProfile> traj;
    traj.reserve(path.size());
    for (std::uint64_t idx : path) traj.push_back(game.profile_at(idx));
    out.trajectory = std::move(traj);
  }
  return out;
}

void check_max_steps(std::int64_t max_steps) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

}  // namespace

DynOutcome run_sbrd(const Game& game, const ActionProfile& start,
                    std::int64_t max_steps, bool keep_trajectory) {
  game.check_profile(start);
  check_max_steps(max_steps);
  return iterate_until_repeat(
      game, game.profile_index(start), max_steps, keep_trajectory,
      [&game](std::int64_t, std::uint64_t prev) { return sbrd_step(game, prev); });
}

InddHistory::InddHistory(int num_actions, const ActionProfile& start)
    : used_(2, std::vector<bool>(num_actions, false)), played_(2) {
  for (int p = 0; p < 2; ++p) {
    used_[p][start[p]] = true;
    played_[p].push_back(start[p]);
  }
}

bool InddHistory::eligible(int player, int action) const {
  const auto& hist = played_[player];
  // From period 2 on, the action from two periods back may be replayed.
  if (hist.size() >= 2 && action == hist[hist.size() - 2]) return true;
  return !used_[player][action];
}

void InddHistory::advance(const ActionProfile& next) {
  for (int p = 0; p < 2; ++p) {
    used_[p][next[p]] = true;
    played_[p].push_back(next[p]);
  }
  ++time_;
}

DynOutcome run_indd(const Game& game, const ActionProfile& start,
                    std::int64_t max_steps, bool keep_trajectory) {
  if (game.num_players() != 2) {
    throw ArityError("INDD is defined for two-player games only");
  }
  if (game.num_actions() < 3) {
    throw std::invalid_argument("INDD needs at least 3 actions per player");
  }
  game.check_profile(start);
  check_max_steps(max_steps);

  const int m = game.num_actions();
  InddHistory history(m, start);
  const auto u0 = game.payoffs(0);
  const auto u1 = game.payoffs(1);

  auto step = [&](std::int64_t, std::uint64_t prev) {
    const int a_prev = game.action_at(prev, 0);
    const int b_prev = game.action_at(prev, 1);
    ActionProfile next(2, -1);
    double best0 = 0.0;
    double best1 = 0.0;
    for (int c = 0; c < m; ++c) {
      if (history.eligible(0, c)) {
        const double v = u0[static_cast<std::uint64_t>(c) * m + b_prev];
        if (next[0] < 0 || v > best0) {
          best0 = v;
          next[0] = c;
        }
      }
      if (history.eligible(1, c)) {
        const double v = u1[static_cast<std::uint64_t>(a_prev) * m + c];
        if (next[1] < 0 || v > best1) {
          best1 = v;
          next[1] = c;
        }
      }
    }
    if (next[0] < 0 || next[1] < 0) {
      throw ExhaustionError("INDD eligible set empty at period " +
                            std::to_string(history.time() + 1));
    }
    history.advance(next);
    return game.profile_index(next);
  };
  return iterate_until_repeat(game, game.profile_index(start), max_steps,
                              keep_trajectory, step);
}

bool cross_profiles_are_nash(const Game& game, const DynOutcome& cycle) {
  if (game.num_players() != 2) {
    throw ArityError("cross-profile check needs a two-player game");
  }
  if (!cycle.is_two_cycle() || cycle.members.size() != 2) {
    throw ArityError("cross-profile check needs a cycle of length 2");
  }
  const ActionProfile& p = cycle.members[0];
  const ActionProfile& q = cycle.members[1];
  return is_pure_nash(game, {p[0], q[1]}) && is_pure_nash(game, {q[0], p[1]});
}

AgreementReport compare_sbrd_indd(const Game& game, const ActionProfile& start,
                                  std::int64_t max_steps) {
  if (game.num_players() != 2) {
    throw ArityError("SBRD/INDD comparison needs a two-player game");
  }
  AgreementReport report;
  report.indd = run_indd(game, start, max_steps, /*keep_trajectory=*/true);
  const auto& indd_path = *report.indd.trajectory;
  report.indd_termination_time = static_cast<std::int64_t>(indd_path.size()) - 1;

  std::uint64_t sbrd = game.profile_index(start);
  for (std::int64_t t = 1; t <= report.indd_termination_time; ++t) {
    sbrd = sbrd_step(game, sbrd);
    if (sbrd != game.profile_index(indd_path[t])) {
      report.divergence_time = t;
      break;
    }
  }
  report.coincide = !report.divergence_time.has_value();
  return report;
}

}  // namespace gamedyn
