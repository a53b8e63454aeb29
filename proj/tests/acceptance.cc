// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gamedyn/dynamics.h"
#include "gamedyn/experiment.h"
#include "gamedyn/game.h"
#include "gamedyn/spgd.h"
#include "gamedyn/stats.h"
#include "gamedyn/validation.h"

using namespace gamedyn;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string metrics_text(const SuiteReport& rep) {
  std::ostringstream os;
  os << "runs=" << rep.runs;
  for (const auto& [k, v] : rep.metrics) os << ' ' << k << '=' << v;
  return os.str();
}

constexpr std::uint64_t kSeed = 20240611;

Verdict lemma1() {
  const auto rep = run_suite("lemma1", {kSeed, 2000, 0});
  return {rep.passed, metrics_text(rep)};
}

Verdict remark() {
  const auto rep = run_suite("remark", {kSeed, 2000, 0});
  return {rep.passed, metrics_text(rep)};
}

Verdict theorem1() {
  const auto rep = run_suite("theorem1", {kSeed, 1000, 0});
  return {rep.passed, metrics_text(rep)};
}

Verdict indd() {
  const auto a = run_suite("indd", {kSeed, 1000, 0});
  const auto b = run_suite("agreement", {kSeed, 1000, 0});
  return {a.passed && b.passed, metrics_text(a) + " | " + metrics_text(b)};
}

Verdict three_player() {
  SweepConfig cfg;
  cfg.num_players = 3;
  cfg.num_actions = 50;
  cfg.lambda_grid = fine7_grid();
  cfg.grid_name = "fine7";
  cfg.samples_per_point = 500;
  cfg.master_seed = kSeed;
  cfg.timing = false;
  const auto rows = aggregate(run_records(cfg));
  std::ostringstream os;
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << rows[i].lambda << ':' << rows[i].p_ne.point << " ";
    for (std::size_t j = 0; j < i; ++j) {
      if (rows[i].p_ne.hi < rows[j].p_ne.lo) monotone = false;
    }
  }
  const auto& last = rows.back();
  const bool ok = last.lambda == 1.0 && last.p_ne.lo >= 0.90 && monotone;
  os << "| p_ne(1)=" << last.p_ne.point << " cp=[" << last.p_ne.lo << "," << last.p_ne.hi
     << "] monotone=" << monotone;
  return {ok, os.str()};
}

Verdict correlation() {
  bool ok = true;
  std::ostringstream os;
  for (double lambda : {0.25, 0.5, 0.9}) {
    const Game game = sample_game({3, 100, lambda, kSeed});
    const auto n = static_cast<double>(game.num_profiles());
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const auto u = game.payoffs(i), v = game.payoffs(j);
        double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
        for (std::size_t k = 0; k < u.size(); ++k) {
          su += u[k];
          sv += v[k];
          suu += u[k] * u[k];
          svv += v[k] * v[k];
          suv += u[k] * v[k];
        }
        const double cov = suv / n - (su / n) * (sv / n);
        const double r = cov / std::sqrt((suu / n - su * su / n / n) * (svv / n - sv * sv / n / n));
        if (std::abs(r - lambda) > 0.005) ok = false;
        os << "r" << i << j << "(" << lambda << ")=" << r << " ";
      }
    }
  }
  return {ok, os.str()};
}

Verdict clopper() {
  const double c = std::pow(0.0025, 0.1);
  const auto zero = stats::clopper_pearson(0, 10, 0.995);
  const auto all = stats::clopper_pearson(10, 10, 0.995);
  bool ok = std::abs(zero.hi - (1 - c)) <= 1e-6 && std::abs(all.lo - c) <= 1e-6;
  double worst_sym = 0;
  for (int s : {1, 7, 30, 101}) {
    for (int k = 0; k <= s; ++k) {
      const auto a = stats::clopper_pearson(k, s), b = stats::clopper_pearson(s - k, s);
      worst_sym = std::max({worst_sym, std::abs(a.lo - (1 - b.hi)), std::abs(a.hi - (1 - b.lo))});
    }
  }
  ok = ok && worst_sym <= 1e-9;
  std::mt19937_64 rng(kSeed);
  int covered = 0;
  const int datasets = 2000;
  for (int d = 0; d < datasets; ++d) {
    const double p = (d % 3 == 0) ? 0.1 : (d % 3 == 1) ? 0.5 : 0.9;
    const int s = 200;
    const int k = std::binomial_distribution<int>(s, p)(rng);
    const auto ci = stats::clopper_pearson(k, s);
    covered += ci.lo <= p && p <= ci.hi;
  }
  const double coverage = double(covered) / datasets;
  ok = ok && coverage >= 0.99;
  std::ostringstream os;
  os << "hi(0,10)=" << zero.hi << " lo(10,10)=" << all.lo << " max_symmetry_err=" << worst_sym
     << " coverage=" << coverage;
  return {ok, os.str()};
}

Verdict gradient() {
  const auto rep = run_suite("gradcheck", {kSeed, 20, 0});
  return {rep.passed, metrics_text(rep)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

Verdict sbrd_vs_spgd() {
  SweepConfig cfg;
  cfg.num_players = 3;
  cfg.num_actions = 20;
  cfg.lambda_grid = {0.95};
  cfg.grid_name = "custom";
  cfg.samples_per_point = 100;
  cfg.algorithms = {Algorithm::kSbrd, Algorithm::kSpgd};
  cfg.master_seed = kSeed;
  cfg.timing = false;
  cfg.spgd.learning_rate = 0.5;
  cfg.spgd.gap_tol = 1e-3;
  const auto records = run_records(cfg);
  std::vector<double> sbrd_steps, spgd_iters, sbrd_terminal, spgd_terminal, spgd_traj;
  for (const auto& r : records) {
    if (r.algorithm == Algorithm::kSbrd) {
      sbrd_steps.push_back(double(r.steps_or_iters));
      if (r.terminal_mean_payoff) sbrd_terminal.push_back(*r.terminal_mean_payoff);
    } else {
      spgd_iters.push_back(double(r.steps_or_iters));
      spgd_terminal.push_back(*r.terminal_mean_payoff);
      spgd_traj.push_back(*r.trajectory_mean_payoff);
    }
  }
  auto mean = [](const std::vector<double>& v) {
    return stats::mean_and_se(v).mean;
  };
  const double med_sbrd = median(sbrd_steps), med_spgd = median(spgd_iters);
  const double m_sbrd = mean(sbrd_terminal), m_spgd = mean(spgd_terminal),
               m_traj = mean(spgd_traj);
  const bool ok = med_spgd >= 50 * med_sbrd && std::abs(m_spgd - m_sbrd) <= 0.15 &&
                  m_traj < m_sbrd;
  std::ostringstream os;
  os << "median_sbrd_steps=" << med_sbrd << " median_spgd_iters=" << med_spgd
     << " sbrd_terminal=" << m_sbrd << " (n=" << sbrd_terminal.size() << ")"
     << " spgd_terminal=" << m_spgd << " spgd_trajectory=" << m_traj;
  return {ok, os.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "gamedyn_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> bodies;
  for (int threads : {1, 4, 8}) {
    SweepConfig cfg = preset_config("fig2");
    cfg.master_seed = kSeed;
    cfg.threads = threads;
    cfg.timing = false;
    const auto path = dir / ("fig2_t" + std::to_string(threads) + ".csv");
    run_sweep(cfg, path.string());
    bodies.push_back(slurp(path));
  }
  std::filesystem::remove_all(dir);
  const bool ok = !bodies[0].empty() && bodies[0] == bodies[1] && bodies[0] == bodies[2];
  return {ok, "bytes=" + std::to_string(bodies[0].size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 two-player orbits have length one or two", lemma1},
      {"2 two-cycle cross profiles are NE", remark},
      {"3 two-cycle reached quickly at m=500", theorem1},
      {"4 INDD two-cycles and SBRD agreement", indd},
      {"5 three-player NE probability", three_player},
      {"6 payoff correlation fidelity", correlation},
      {"7 Clopper-Pearson exactness and coverage", clopper},
      {"8 gradient against finite differences", gradient},
      {"9 SBRD vs SPGD speed and value", sbrd_vs_spgd},
      {"10 thread-count determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !v.pass;
    std::printf("%s criterion %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
