#include "gamedyn/spgd.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gamedyn/kernels.h"

namespace gamedyn {

void SpgdConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(gap_tol > 0.0)) throw std::invalid_argument("gap tolerance must be positive");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
}

double SpgdOutcome::terminal_mean_payoff() const {
  if (terminal_expected_payoffs.empty()) return 0.0;
  return std::accumulate(terminal_expected_payoffs.begin(),
                         terminal_expected_payoffs.end(), 0.0) /
         static_cast<double>(terminal_expected_payoffs.size());
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t a = 0; a < logits.size(); ++a) {
    out[a] = std::exp(logits[a] - top);
    total += out[a];
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> marginal_payoffs(const Game& game, const MixedProfile& x,
                                     int player) {
  game.check_mixed(x);
  return kernels::marginal_payoffs(game, x)[player];
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double gap_from_marginals(const MixedProfile& x,
                          const std::vector<std::vector<double>>& q,
                          std::vector<double>* values) {
  double gap = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double value = dot(x[i], q[i]);
    if (values) (*values)[i] = value;
    const double best = *std::max_element(q[i].begin(), q[i].end());
    gap = std::max(gap, best - value);
  }
  return gap;
}

}  // namespace

std::vector<double> policy_gradient(const Game& game, const MixedProfile& x,
                                    int player) {
  const std::vector<double> q = marginal_payoffs(game, x, player);
  const std::vector<double>& xi = x[player];
  const double value = dot(xi, q);
  std::vector<double> g(q.size());
  for (std::size_t a = 0; a < q.size(); ++a) g[a] = xi[a] * (q[a] - value);
  return g;
}

double ne_gap(const Game& game, const MixedProfile& x) {
  game.check_mixed(x);
  return gap_from_marginals(x, kernels::marginal_payoffs(game, x), nullptr);
}

SpgdOutcome run_spgd(const Game& game, const SpgdConfig& cfg,
                     const std::optional<MixedProfile>& init,
                     const SpgdObserver& observer) {
  cfg.validate();
  const int n = game.num_players();
  const int m = game.num_actions();
  std::vector<std::vector<double>> logits(n, std::vector<double>(m, 0.0));
  if (init) {
    game.check_mixed(*init);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < m; ++a) {
        if (!((*init)[i][a] > 0.0)) {
          throw std::invalid_argument("SPGD initial strategies must be interior");
        }
        logits[i][a] = std::log((*init)[i][a]);
      }
    }
  }

  SpgdOutcome out;
  MixedProfile x(n);
  std::vector<double> values(n);
  double recorded_sum = 0.0;
  std::int64_t recorded = 0;
  for (std::int64_t k = 0;; ++k) {
    for (int i = 0; i < n; ++i) x[i] = softmax(logits[i]);
    const auto q = kernels::marginal_payoffs(game, x);
    const double gap = gap_from_marginals(x, q, &values);
    if (observer) observer(k, gap, values);

    if (k % cfg.record_every == 0) {
      recorded_sum += std::accumulate(values.begin(), values.end(), 0.0) / n;
      ++recorded;
    }
    if (gap < cfg.gap_tol || k == cfg.max_iters) {
      out.iters = k;
      out.converged = gap < cfg.gap_tol;
      out.final_gap = gap;
      break;
    }

    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < m; ++a) {
        logits[i][a] += cfg.learning_rate * x[i][a] * (q[i][a] - values[i]);
        if (!std::isfinite(logits[i][a])) {
          throw DivergenceError("SPGD logits became non-finite at iteration " +
                                std::to_string(k));
        }
      }
    }
  }

  out.final = x;
  out.terminal_expected_payoffs = values;
  out.trajectory_mean_payoff = recorded_sum / static_cast<double>(recorded);
  out.rounded_profile.resize(n);
  for (int i = 0; i < n; ++i) {
    out.rounded_profile[i] = static_cast<int>(
        std::max_element(x[i].begin(), x[i].end()) - x[i].begin());
  }
  out.rounded_is_nash = is_pure_nash(game, out.rounded_profile);
  return out;
}

}  // namespace gamedyn
