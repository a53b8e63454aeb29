#include "gamedyn/kernels.h"

#include <omp.h>

#include <cmath>
#include <cstdint>

#include "gamedyn/random.h"

namespace gamedyn::kernels {
namespace {

// Stream 0 carries the common factor Z, stream i+1 player i's idiosyncratic W_i.
struct PayoffDraw {
  explicit PayoffDraw(const GameSpec& spec)
      : common(spec.seed, 0),
        weight_common(std::sqrt(spec.correlation)),
        weight_own(std::sqrt(1.0 - spec.correlation)),
        num_players(spec.num_players) {
    own.reserve(spec.num_players);
    for (int i = 0; i < spec.num_players; ++i) own.emplace_back(spec.seed, i + 1);
  }

  void fill(std::span<std::vector<double>> tables, std::uint64_t idx) const {
    if (tables.size() == 1) {
      tables[0][idx] = common.normal(idx);
    } else if (weight_common == 0.0) {
      for (int i = 0; i < num_players; ++i) tables[i][idx] = own[i].normal(idx);
    } else {
      const double z = weight_common * common.normal(idx);
      for (int i = 0; i < num_players; ++i) {
        tables[i][idx] = z + weight_own * own[i].normal(idx);
      }
    }
  }

  CounterStream common;
  std::vector<CounterStream> own;
  double weight_common;
  double weight_own;
  int num_players;
};

// Row r spans the m contiguous profiles that differ only in the last
// player's action. Rows are grouped into blocks by player 0's action.
struct RowLayout {
  explicit RowLayout(const Game& game)
      : n(game.num_players()),
        m(game.num_actions()),
        rows(game.num_profiles() / static_cast<std::uint64_t>(m)),
        rows_per_block(n >= 2 ? rows / static_cast<std::uint64_t>(m) : rows),
        blocks(n >= 2 ? m : 1) {}

  // Fills prefix[k] = prod_{j<k} x_j[a_j] and suffix[k] = prod_{k<j<n-1}
  // x_j[a_j] for the leading n-1 players of row r; returns their actions.
  void weights(const MixedProfile& x, std::uint64_t r, std::vector<int>& actions,
               std::vector<double>& prefix, std::vector<double>& suffix) const {
    std::uint64_t rest = r;
    for (int j = n - 2; j >= 0; --j) {
      actions[j] = static_cast<int>(rest % static_cast<std::uint64_t>(m));
      rest /= static_cast<std::uint64_t>(m);
    }
    prefix[0] = 1.0;
    for (int j = 0; j < n - 1; ++j) prefix[j + 1] = prefix[j] * x[j][actions[j]];
    suffix[n - 1] = 1.0;
    for (int j = n - 2; j >= 0; --j) {
      suffix[j] = suffix[j + 1] * (j + 1 < n - 1 ? x[j + 1][actions[j + 1]] : 1.0);
    }
  }

  int n;
  int m;
  std::uint64_t rows;
  std::uint64_t rows_per_block;
  int blocks;
};

double dot(const double* a, const double* b, int len) {
  double s = 0.0;
  for (int k = 0; k < len; ++k) s += a[k] * b[k];
  return s;
}

bool run_parallel(const Game& game) {
  return game.num_profiles() >= kParallelThreshold && !omp_in_parallel();
}

}  // namespace

void fill_payoffs(const GameSpec& spec, std::span<std::vector<double>> tables) {
  const PayoffDraw draw(spec);
  const auto profiles = static_cast<std::int64_t>(tables[0].size());
  const bool parallel =
      profiles >= static_cast<std::int64_t>(kParallelThreshold) && !omp_in_parallel();
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t idx = 0; idx < profiles; ++idx) {
    draw.fill(tables, static_cast<std::uint64_t>(idx));
  }
}

void fill_payoffs_reference(const GameSpec& spec,
                            std::span<std::vector<double>> tables) {
  const PayoffDraw draw(spec);
  for (std::uint64_t idx = 0; idx < tables[0].size(); ++idx) draw.fill(tables, idx);
}

std::vector<std::vector<double>> marginal_payoffs(const Game& game,
                                                  const MixedProfile& x) {
  const RowLayout layout(game);
  const int n = layout.n;
  const int m = layout.m;
  std::vector<std::vector<double>> q(n, std::vector<double>(m, 0.0));
  if (n == 1) {
    const auto table = game.payoffs(0);
    q[0].assign(table.begin(), table.end());
    return q;
  }

  // partial[b * n * m + i * m + a]: block b's contribution to q[i][a].
  std::vector<double> partial(static_cast<std::size_t>(layout.blocks) * n * m, 0.0);
  const double* last = x[n - 1].data();
  const bool shared = game.is_potential();

#pragma omp parallel if (run_parallel(game))
  {
    std::vector<int> actions(n);
    std::vector<double> prefix(n), suffix(n), dots(n);
#pragma omp for schedule(static)
    for (int b = 0; b < layout.blocks; ++b) {
      double* out = partial.data() + static_cast<std::size_t>(b) * n * m;
      const std::uint64_t first = static_cast<std::uint64_t>(b) * layout.rows_per_block;
      for (std::uint64_t r = first; r < first + layout.rows_per_block; ++r) {
        layout.weights(x, r, actions, prefix, suffix);
        const std::uint64_t base = r * static_cast<std::uint64_t>(m);
        for (int i = 0; i < n - 1; ++i) {
          if (i == 0 || !shared) dots[i] = dot(last, game.payoffs(i).data() + base, m);
          else dots[i] = dots[0];
          out[i * m + actions[i]] += prefix[i] * suffix[i] * dots[i];
        }
        const double* row = game.payoffs(n - 1).data() + base;
        const double w = prefix[n - 1];
        double* q_last = out + (n - 1) * m;
        for (int a = 0; a < m; ++a) q_last[a] += w * row[a];
      }
    }
  }

  for (int b = 0; b < layout.blocks; ++b) {
    const double* part = partial.data() + static_cast<std::size_t>(b) * n * m;
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < m; ++a) q[i][a] += part[i * m + a];
    }
  }
  return q;
}

std::vector<std::vector<double>> marginal_payoffs_reference(
    const Game& game, const MixedProfile& x) {
  const int n = game.num_players();
  std::vector<std::vector<double>> q(n, std::vector<double>(game.num_actions(), 0.0));
  for (std::uint64_t idx = 0; idx < game.num_profiles(); ++idx) {
    const ActionProfile a = game.profile_at(idx);
    for (int i = 0; i < n; ++i) {
      double w = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) w *= x[j][a[j]];
      }
      q[i][a[i]] += w * game.payoff_at(i, idx);
    }
  }
  return q;
}

std::vector<double> expected_payoffs(const Game& game, const MixedProfile& x) {
  const RowLayout layout(game);
  const int n = layout.n;
  const int m = layout.m;
  std::vector<double> result(n, 0.0);
  if (n == 1) {
    result[0] = dot(x[0].data(), game.payoffs(0).data(), m);
    return result;
  }

  std::vector<double> partial(static_cast<std::size_t>(layout.blocks) * n, 0.0);
  const double* last = x[n - 1].data();
  const bool shared = game.is_potential();

#pragma omp parallel if (run_parallel(game))
  {
    std::vector<int> actions(n);
    std::vector<double> prefix(n), suffix(n);
#pragma omp for schedule(static)
    for (int b = 0; b < layout.blocks; ++b) {
      double* out = partial.data() + static_cast<std::size_t>(b) * n;
      const std::uint64_t first = static_cast<std::uint64_t>(b) * layout.rows_per_block;
      for (std::uint64_t r = first; r < first + layout.rows_per_block; ++r) {
        layout.weights(x, r, actions, prefix, suffix);
        const std::uint64_t base = r * static_cast<std::uint64_t>(m);
        const double w = prefix[n - 1];
        double d0 = 0.0;
        for (int i = 0; i < n; ++i) {
          const double d = (i == 0 || !shared)
                               ? dot(last, game.payoffs(i).data() + base, m)
                               : d0;
          if (i == 0) d0 = d;
          out[i] += w * d;
        }
      }
    }
  }

  for (int b = 0; b < layout.blocks; ++b) {
    for (int i = 0; i < n; ++i) result[i] += partial[static_cast<std::size_t>(b) * n + i];
  }
  return result;
}

std::vector<double> expected_payoffs_reference(const Game& game,
                                               const MixedProfile& x) {
  const int n = game.num_players();
  std::vector<double> result(n, 0.0);
  for (std::uint64_t idx = 0; idx < game.num_profiles(); ++idx) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) w *= x[j][game.action_at(idx, j)];
    for (int i = 0; i < n; ++i) result[i] += w * game.payoff_at(i, idx);
  }
  return result;
}

}  // namespace gamedyn::kernels
