#include "gamedyn/cli.h"

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "gamedyn/dynamics.h"
#include "gamedyn/experiment.h"
#include "gamedyn/game.h"
#include "gamedyn/plot.h"
#include "gamedyn/spgd.h"
#include "gamedyn/validation.h"

namespace gamedyn {

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty() || text.front() == '-') {
    throw std::invalid_argument("seed must be a non-negative integer");
  }
  const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(hex ? text.substr(2) : text, &used, hex ? 16 : 10);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad seed '" + text + "'");
  }
  if (used != text.size() - (hex ? 2 : 0)) throw std::invalid_argument("bad seed '" + text + "'");
  return value;
}

namespace {

// Errors in user input discovered after argument parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

int default_threads() {
  if (const char* env = std::getenv("GAMEDYN_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
  }
  return 0;
}

struct SpgdFlags {
  double eta = SpgdConfig{}.learning_rate;
  std::int64_t max_iters = SpgdConfig{}.max_iters;
  double gap_tol = SpgdConfig{}.gap_tol;
  std::int64_t record_every = SpgdConfig{}.record_every;

  void attach(CLI::App* cmd) {
    cmd->add_option("--eta", eta, "SPGD learning rate")->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "SPGD iteration budget")->capture_default_str();
    cmd->add_option("--gap-tol", gap_tol, "SPGD Nash-gap stopping tolerance")
        ->capture_default_str();
    cmd->add_option("--record-every", record_every, "SPGD payoff recording stride")
        ->capture_default_str();
  }
  SpgdConfig config() const { return {eta, max_iters, gap_tol, record_every}; }
};

// --start fixed | random | comma-separated actions.
ActionProfile resolve_start(const std::string& text, const Game& game) {
  if (text == "fixed") return start_profile(StartMode::kFixedZero, game.spec());
  if (text == "random") return start_profile(StartMode::kRandom, game.spec());
  ActionProfile start;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) start.push_back(std::stoi(item));
  game.check_profile(start);
  return start;
}

StartMode parse_start_mode(const std::string& text) {
  if (text == "fixed") return StartMode::kFixedZero;
  if (text == "random") return StartMode::kRandom;
  throw UsageError("--start must be fixed or random");
}

void print_aggregates(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << std::left << std::setw(8) << "lambda" << std::setw(6) << "algo" << std::setw(8)
      << "count" << std::setw(26) << "p_ne [99.5% CP]" << std::setw(26)
      << "p_two_cycle [99.5% CP]" << "mean_steps +/- 2SE\n";
  for (const auto& r : rows) {
    std::ostringstream ne, two, steps;
    ne << std::fixed << std::setprecision(4) << r.p_ne.point << " [" << r.p_ne.lo << ","
       << r.p_ne.hi << "]";
    two << std::fixed << std::setprecision(4) << r.p_two_cycle.point << " ["
        << r.p_two_cycle.lo << "," << r.p_two_cycle.hi << "]";
    steps << std::fixed << std::setprecision(3) << r.steps.mean << " +/- " << 2 * r.steps.se;
    out << std::left << std::setw(8) << std::setprecision(4) << r.lambda << std::setw(6)
        << algorithm_name(r.algorithm) << std::setw(8) << r.count << std::setw(26) << ne.str()
        << std::setw(26) << two.str() << steps.str() << '\n';
  }
}

// Paired comparison of SBRD against INDD or SPGD on shared games.
struct ComparisonRow {
  int grid_index = 0;
  double lambda = 0;
  std::int64_t sample = 0;
  std::uint64_t seed = 0;
  DynOutcome sbrd;
  double sbrd_payoff = 0;
  bool has_sbrd_payoff = false;
  // INDD
  std::optional<AgreementReport> agreement;
  // SPGD
  std::optional<SpgdOutcome> spgd;
};

std::string opt_real(bool has, double v) { return has ? format_real(v) : "NA"; }

int run_compare(const SweepConfig& cfg, Algorithm other, const std::string& start_text,
                const std::string& out_path, std::ostream& out) {
  cfg.validate();
  const auto points = static_cast<std::int64_t>(cfg.lambda_grid.size());
  const std::int64_t tasks = points * cfg.samples_per_point;
  std::vector<ComparisonRow> rows(static_cast<std::size_t>(tasks));
  std::exception_ptr failure;
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t task = 0; task < tasks; ++task) {
    try {
      ComparisonRow& row = rows[task];
      row.grid_index = static_cast<int>(task / cfg.samples_per_point);
      row.sample = task % cfg.samples_per_point;
      row.lambda = cfg.lambda_grid[row.grid_index];
      row.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(row.grid_index),
                             static_cast<std::uint64_t>(row.sample));
      const Game game = sample_game({cfg.num_players, cfg.num_actions, row.lambda, row.seed});
      const ActionProfile start = resolve_start(start_text, game);
      const std::int64_t max_steps =
          cfg.sbrd_max_steps > 0 ? cfg.sbrd_max_steps : default_max_steps(game);
      row.sbrd = run_sbrd(game, start, max_steps);
      if (row.sbrd.is_fixed_point()) {
        const auto idx = game.profile_index(row.sbrd.members.front());
        for (int i = 0; i < game.num_players(); ++i) row.sbrd_payoff += game.payoff_at(i, idx);
        row.sbrd_payoff /= game.num_players();
        row.has_sbrd_payoff = true;
      }
      if (other == Algorithm::kIndd) {
        row.agreement = compare_sbrd_indd(game, start, max_steps);
      } else {
        row.spgd = run_spgd(game, cfg.spgd);
      }
    } catch (...) {
#pragma omp critical(gamedyn_compare_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + out_path);
  }
  std::ostream& csv = out_path.empty() ? out : file;

  std::int64_t coincide = 0, sbrd_ne = 0, spgd_converged = 0;
  if (other == Algorithm::kIndd) {
    csv << "grid_index,lambda,sample_index,seed,sbrd_kind,sbrd_cycle_length,sbrd_steps,"
           "indd_kind,indd_cycle_length,indd_steps,coincide,divergence_time\n";
    for (const auto& r : rows) {
      const auto& a = *r.agreement;
      coincide += a.coincide;
      csv << r.grid_index << ',' << format_real(r.lambda) << ',' << r.sample << ',' << r.seed
          << ',' << terminal_kind_name(r.sbrd.kind) << ',' << r.sbrd.cycle_length << ','
          << r.sbrd.steps_to_terminal << ',' << terminal_kind_name(a.indd.kind) << ','
          << a.indd.cycle_length << ',' << a.indd_termination_time << ','
          << (a.coincide ? 1 : 0) << ','
          << (a.divergence_time ? std::to_string(*a.divergence_time) : "NA") << '\n';
    }
  } else {
    csv << "grid_index,lambda,sample_index,seed,sbrd_kind,sbrd_steps,sbrd_terminal_payoff,"
           "spgd_kind,spgd_iters,spgd_terminal_payoff,spgd_trajectory_payoff,"
           "spgd_rounded_is_nash,same_equilibrium,payoff_difference\n";
    for (const auto& r : rows) {
      const auto& s = *r.spgd;
      sbrd_ne += r.sbrd.is_fixed_point();
      spgd_converged += s.converged;
      const bool same = r.sbrd.is_fixed_point() && s.rounded_profile == r.sbrd.members.front();
      csv << r.grid_index << ',' << format_real(r.lambda) << ',' << r.sample << ',' << r.seed
          << ',' << terminal_kind_name(r.sbrd.kind) << ',' << r.sbrd.steps_to_terminal << ','
          << opt_real(r.has_sbrd_payoff, r.sbrd_payoff) << ','
          << (s.converged ? "SPGD_CONVERGED" : "SPGD_MAXITER") << ',' << s.iters << ','
          << format_real(s.terminal_mean_payoff()) << ','
          << format_real(s.trajectory_mean_payoff) << ',' << (s.rounded_is_nash ? 1 : 0)
          << ',' << (same ? 1 : 0) << ','
          << opt_real(r.has_sbrd_payoff, s.terminal_mean_payoff() - r.sbrd_payoff) << '\n';
    }
  }
  if (!out_path.empty()) {
    out << "games=" << tasks;
    if (other == Algorithm::kIndd) {
      out << " coincide=" << coincide << '\n';
    } else {
      out << " sbrd_ne=" << sbrd_ne << " spgd_converged=" << spgd_converged << '\n';
    }
  }
  return kExitOk;
}

nlohmann::json report_json(const SuiteReport& rep) {
  nlohmann::json j;
  j["suite"] = rep.suite;
  j["passed"] = rep.passed;
  j["runs"] = rep.runs;
  j["message"] = rep.message;
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [k, v] : rep.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best-response and policy-gradient dynamics in random games", "gamedyn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GAMEDYN_VERSION);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over a lambda grid");
  std::string preset, grid = "coarse21", algos = "sbrd", seed_text = "0", start = "fixed";
  std::string out_path;
  int players = 2, actions = 50, threads = default_threads();
  std::int64_t samples = 100, max_steps = 0;
  bool no_timing = false;
  SpgdFlags sweep_spgd;
  sweep->add_option("--preset", preset, "fig1..fig6; explicit flags override it");
  auto* o_players = sweep->add_option("--players", players, "number of players n");
  auto* o_actions = sweep->add_option("--actions", actions, "actions per player m");
  auto* o_grid = sweep->add_option("--grid", grid, "coarse21, fine7 or a comma list");
  auto* o_samples = sweep->add_option("--samples", samples, "games per grid point");
  auto* o_algos = sweep->add_option("--algo", algos, "comma list of sbrd, indd, spgd");
  sweep->add_option("--seed", seed_text, "master seed (decimal or 0x hex)");
  sweep->add_option("--start", start, "fixed or random start profile");
  sweep->add_option("--threads", threads, "worker threads (default $GAMEDYN_THREADS)");
  sweep->add_option("--max-steps", max_steps, "SBRD/INDD step cap (0 = automatic)");
  sweep->add_option("--out", out_path, "output CSV path")->required();
  sweep->add_flag("--no-timing", no_timing, "write NA for timing columns");
  sweep_spgd.attach(sweep);

  // run
  auto* run = app.add_subcommand("run", "run one algorithm on one game");
  int run_players = 2, run_actions = 50;
  double run_lambda = 1.0;
  std::string run_seed = "0", run_algo = "sbrd", run_start = "fixed";
  std::int64_t run_max_steps = 0;
  bool trace = false;
  SpgdFlags run_spgd_flags;
  run->add_option("--players", run_players, "number of players n")->capture_default_str();
  run->add_option("--actions", run_actions, "actions per player m")->capture_default_str();
  run->add_option("--lambda", run_lambda, "payoff correlation")->capture_default_str();
  run->add_option("--seed", run_seed, "game seed (decimal or 0x hex)");
  run->add_option("--algo", run_algo, "sbrd, indd or spgd");
  run->add_option("--start", run_start, "fixed, random or comma-separated actions");
  run->add_option("--max-steps", run_max_steps, "step cap (0 = automatic)");
  run->add_flag("--trace", trace, "print the trajectory");
  run_spgd_flags.attach(run);

  // compare
  auto* compare = app.add_subcommand("compare", "paired SBRD/INDD or SBRD/SPGD comparison");
  int cmp_players = 2, cmp_actions = 50, cmp_threads = default_threads();
  std::string cmp_grid = "1", cmp_pair = "sbrd,indd", cmp_seed = "0", cmp_start = "fixed";
  std::string cmp_out;
  std::int64_t cmp_samples = 100;
  SpgdFlags cmp_spgd;
  compare->add_option("--players", cmp_players, "number of players n");
  compare->add_option("--actions", cmp_actions, "actions per player m");
  compare->add_option("--grid", cmp_grid, "coarse21, fine7 or a comma list");
  compare->add_option("--samples", cmp_samples, "games per grid point");
  compare->add_option("--pair", cmp_pair, "sbrd,indd or sbrd,spgd");
  compare->add_option("--seed", cmp_seed, "master seed (decimal or 0x hex)");
  compare->add_option("--start", cmp_start, "fixed or random start profile");
  compare->add_option("--threads", cmp_threads, "worker threads");
  compare->add_option("--out", cmp_out, "output CSV (default stdout)");
  cmp_spgd.attach(compare);

  // plot
  auto* plot = app.add_subcommand("plot", "render an SVG line chart from a sweep CSV");
  std::string plot_in, plot_metric, plot_series, plot_out, plot_title, plot_x = "lambda",
                                                                      plot_y;
  plot->add_option("--in", plot_in, "sweep CSV")->required();
  plot->add_option("--metric", plot_metric,
                   "p_two_cycle, p_ne, mean_steps, mean_wall, terminal_payoff, traj_payoff")
      ->required();
  plot->add_option("--series", plot_series, "comma list of algorithms (default: all)");
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("--title", plot_title, "chart title");
  plot->add_option("--xlabel", plot_x, "x-axis label");
  plot->add_option("--ylabel", plot_y, "y-axis label");

  // validate
  auto* validate = app.add_subcommand("validate", "run a theory check suite");
  std::string suite = "all", val_seed = "0";
  std::int64_t val_runs = 0;
  int val_threads = default_threads();
  validate->add_option("--suite", suite,
                       "lemma1, remark, indd, agreement, theorem1, gradcheck or all");
  validate->add_option("--seed", val_seed, "master seed (decimal or 0x hex)");
  validate->add_option("--runs", val_runs, "override the suite's run count");
  validate->add_option("--threads", val_threads, "worker threads");

  auto* list = app.add_subcommand("presets", "list the experiment presets");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep->parsed()) {
      SweepConfig cfg = preset.empty() ? SweepConfig{} : preset_config(preset);
      if (preset.empty() || o_players->count()) cfg.num_players = players;
      if (preset.empty() || o_actions->count()) cfg.num_actions = actions;
      if (preset.empty() || o_grid->count()) {
        cfg.lambda_grid = parse_grid(grid);
        cfg.grid_name = (grid == "coarse21" || grid == "fine7") ? grid : "custom";
      }
      if (preset.empty() || o_samples->count()) cfg.samples_per_point = samples;
      if (preset.empty() || o_algos->count()) cfg.algorithms = parse_algorithms(algos);
      cfg.master_seed = parse_seed(seed_text);
      cfg.start_mode = parse_start_mode(start);
      cfg.threads = threads;
      cfg.sbrd_max_steps = max_steps;
      cfg.timing = !no_timing;
      cfg.spgd = sweep_spgd.config();
      cfg.validate();
      const SweepResult result = run_sweep(cfg, out_path);
      out << "wrote " << result.records.size() << " records to " << out_path << '\n';
      print_aggregates(out, result.aggregates);
      return kExitOk;
    }

    if (run->parsed()) {
      const GameSpec spec{run_players, run_actions, run_lambda, parse_seed(run_seed)};
      const Game game = sample_game(spec);
      const ActionProfile start_profile_ = resolve_start(run_start, game);
      const Algorithm algo = parse_algorithm(run_algo);
      const std::int64_t steps = run_max_steps > 0 ? run_max_steps : default_max_steps(game);
      out << "game players=" << spec.num_players << " actions=" << spec.num_actions
          << " lambda=" << format_real(spec.correlation) << " seed=" << spec.seed << '\n';
      out << "algorithm=" << algorithm_name(algo) << '\n';
      if (algo == Algorithm::kSpgd) {
        SpgdObserver observer;
        if (trace) {
          observer = [&out](std::int64_t k, double gap, const std::vector<double>& v) {
            out << "iter=" << k << " gap=" << format_real(gap) << " payoffs=";
            for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_real(v[i]);
            out << '\n';
          };
        }
        const SpgdOutcome res = run_spgd(game, run_spgd_flags.config(), std::nullopt, observer);
        out << "terminal=" << (res.converged ? "SPGD_CONVERGED" : "SPGD_MAXITER")
            << " iters=" << res.iters << " gap=" << format_real(res.final_gap) << '\n'
            << "terminal_mean_payoff=" << format_real(res.terminal_mean_payoff()) << '\n'
            << "trajectory_mean_payoff=" << format_real(res.trajectory_mean_payoff) << '\n'
            << "rounded_profile=" << format_profile(res.rounded_profile)
            << " rounded_is_nash=" << (res.rounded_is_nash ? 1 : 0) << '\n';
        return kExitOk;
      }
      const DynOutcome res = algo == Algorithm::kSbrd ? run_sbrd(game, start_profile_, steps, trace)
                                                      : run_indd(game, start_profile_, steps, trace);
      out << "terminal=" << terminal_kind_name(res.kind) << " cycle_length=" << res.cycle_length
          << " steps=" << res.steps_to_terminal << '\n';
      out << "members=";
      for (std::size_t k = 0; k < res.members.size(); ++k) {
        out << (k ? " " : "") << format_profile(res.members[k]);
      }
      out << '\n';
      if (game.num_players() == 2 && res.is_two_cycle()) {
        out << "cross_nash=" << (cross_profiles_are_nash(game, res) ? 1 : 0) << '\n';
      }
      if (trace && res.trajectory) {
        for (std::size_t t = 0; t < res.trajectory->size(); ++t) {
          out << "t=" << t << ' ' << format_profile((*res.trajectory)[t]) << '\n';
        }
      }
      return kExitOk;
    }

    if (compare->parsed()) {
      const auto pair = parse_algorithms(cmp_pair);
      if (pair.size() != 2 || pair[0] != Algorithm::kSbrd) {
        throw UsageError("--pair must be sbrd,indd or sbrd,spgd");
      }
      SweepConfig cfg;
      cfg.num_players = cmp_players;
      cfg.num_actions = cmp_actions;
      cfg.lambda_grid = parse_grid(cmp_grid);
      cfg.samples_per_point = cmp_samples;
      cfg.algorithms = pair;
      cfg.master_seed = parse_seed(cmp_seed);
      cfg.threads = cmp_threads;
      cfg.spgd = cmp_spgd.config();
      parse_start_mode(cmp_start);
      return run_compare(cfg, pair[1], cmp_start, cmp_out, out);
    }

    if (plot->parsed()) {
      PlotSpec spec;
      spec.input_csv = plot_in;
      spec.metric = parse_plot_metric(plot_metric);
      if (!plot_series.empty()) spec.series = parse_algorithms(plot_series);
      spec.output_path = plot_out;
      spec.title = plot_title;
      spec.x_label = plot_x;
      spec.y_label = plot_y;
      std::vector<SampleRecord> records;
      try {
        records = read_csv_file(plot_in);
      } catch (const std::exception& e) {
        throw UsageError(std::string("cannot read sweep CSV: ") + e.what());
      }
      if (records.empty()) throw UsageError("sweep CSV has no records");
      const std::string svg = render_line_plot(spec, aggregate(records));
      std::ofstream file(plot_out, std::ios::binary | std::ios::trunc);
      if (!file) throw std::runtime_error("cannot write " + plot_out);
      file << svg;
      if (!file) throw std::runtime_error("write failed for " + plot_out);
      out << "wrote " << plot_out << '\n';
      return kExitOk;
    }

    if (validate->parsed()) {
      std::vector<std::string> names;
      if (suite == "all") {
        names = suite_names();
      } else {
        if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
          throw UsageError("unknown suite '" + suite + "'");
        }
        names.push_back(suite);
      }
      const SuiteOptions opts{parse_seed(val_seed), val_runs, val_threads};
      bool ok = true;
      for (const auto& name : names) {
        const SuiteReport rep = run_suite(name, opts);
        out << (rep.passed ? "PASS " : "FAIL ") << rep.suite << " runs=" << rep.runs;
        for (const auto& [k, v] : rep.metrics) out << ' ' << k << '=' << v;
        out << " : " << rep.message << '\n';
        if (!rep.passed) {
          ok = false;
          err << report_json(rep).dump() << '\n';
        }
      }
      return ok ? kExitOk : kExitValidation;
    }

    if (list->parsed()) {
      for (const auto& p : presets()) {
        std::string names;
        for (Algorithm a : p.algorithms) names += std::string(names.empty() ? "" : ",") + algorithm_name(a);
        out << p.name << "  players=" << p.num_players << " actions=" << p.num_actions
            << " grid=" << p.grid << " samples=" << p.samples << " algorithms=" << names
            << "  # " << p.description << '\n';
      }
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace gamedyn
