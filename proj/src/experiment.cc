#include "gamedyn/experiment.h"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "gamedyn/dynamics.h"
#include "gamedyn/random.h"

namespace gamedyn {

const char* algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kSbrd: return "SBRD";
    case Algorithm::kIndd: return "INDD";
    case Algorithm::kSpgd: return "SPGD";
  }
  return "SBRD";
}

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t pos = s.find(sep, begin);
    parts.emplace_back(s.substr(begin, pos == std::string_view::npos ? s.npos : pos - begin));
    if (pos == std::string_view::npos) break;
    begin = pos + 1;
  }
  return parts;
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  const std::string u = upper(trim(name));
  if (u == "SBRD") return Algorithm::kSbrd;
  if (u == "INDD") return Algorithm::kIndd;
  if (u == "SPGD") return Algorithm::kSpgd;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> parse_algorithms(std::string_view list) {
  std::vector<Algorithm> algos;
  for (const auto& part : split(list, ',')) {
    if (trim(part).empty()) continue;
    algos.push_back(parse_algorithm(part));
  }
  std::sort(algos.begin(), algos.end());
  algos.erase(std::unique(algos.begin(), algos.end()), algos.end());
  if (algos.empty()) throw std::invalid_argument("no algorithms selected");
  return algos;
}

const char* record_kind_name(RecordKind kind) {
  switch (kind) {
    case RecordKind::kNe: return "NE";
    case RecordKind::kCycle: return "CYCLE";
    case RecordKind::kTruncated: return "TRUNCATED";
    case RecordKind::kSpgdConverged: return "SPGD_CONVERGED";
    case RecordKind::kSpgdMaxIter: return "SPGD_MAXITER";
  }
  return "TRUNCATED";
}

namespace {

RecordKind parse_record_kind(std::string_view s) {
  for (RecordKind k : {RecordKind::kNe, RecordKind::kCycle, RecordKind::kTruncated,
                       RecordKind::kSpgdConverged, RecordKind::kSpgdMaxIter}) {
    if (s == record_kind_name(k)) return k;
  }
  throw std::runtime_error("unknown terminal_kind '" + std::string(s) + "'");
}

}  // namespace

// Integer numerators keep the end points exact (the last fine7 point is 1.0).
std::vector<double> coarse21_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

std::vector<double> fine7_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 6; ++i) grid.push_back((850 + 25 * i) / 1000.0);
  return grid;
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string t = trim(text);
  if (t == "coarse21") return coarse21_grid();
  if (t == "fine7") return fine7_grid();
  std::vector<double> grid;
  for (const auto& part : split(t, ',')) {
    const std::string p = trim(part);
    if (p.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != p.size()) throw std::invalid_argument("bad grid value '" + p + "'");
    grid.push_back(v);
  }
  if (grid.empty()) throw std::invalid_argument("empty lambda grid");
  return grid;
}

void SweepConfig::validate() const {
  GameSpec probe{num_players, num_actions, 0.5, 0};
  probe.validate();
  if (lambda_grid.empty()) throw std::invalid_argument("lambda grid is empty");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    const double v = lambda_grid[k];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("lambda grid values must lie in [0, 1]");
    }
    if (k > 0 && !(v > lambda_grid[k - 1])) {
      throw std::invalid_argument("lambda grid must be strictly increasing");
    }
  }
  if (samples_per_point < 1) throw std::invalid_argument("samples must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  if (std::find(algorithms.begin(), algorithms.end(), Algorithm::kIndd) !=
      algorithms.end()) {
    if (num_players != 2) throw std::invalid_argument("INDD requires exactly 2 players");
    if (num_actions < 3) throw std::invalid_argument("INDD requires at least 3 actions");
  }
  if (sbrd_max_steps < 0) throw std::invalid_argument("max steps must be >= 0");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  spgd.validate();
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> kPresets = {
      {"fig1", 2, 50, "coarse21", 10000, {Algorithm::kSbrd},
       "two-player SBRD: two-cycle probability and steps vs lambda"},
      {"fig2", 3, 50, "coarse21", 1000, {Algorithm::kSbrd},
       "three-player SBRD: NE probability and steps vs lambda"},
      {"fig3", 3, 50, "fine7", 1000, {Algorithm::kSbrd, Algorithm::kSpgd},
       "three-player SBRD vs SPGD in near-potential games"},
      {"fig4", 2, 500, "coarse21", 1000, {Algorithm::kSbrd},
       "two-player SBRD with 500 actions"},
      {"fig5", 3, 100, "coarse21", 1000, {Algorithm::kSbrd},
       "three-player SBRD with 100 actions"},
      {"fig6", 4, 50, "coarse21", 1000, {Algorithm::kSbrd},
       "four-player SBRD with 50 actions"},
  };
  return kPresets;
}

SweepConfig preset_config(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name != name) continue;
    SweepConfig cfg;
    cfg.num_players = p.num_players;
    cfg.num_actions = p.num_actions;
    cfg.grid_name = p.grid;
    cfg.lambda_grid = parse_grid(p.grid);
    cfg.samples_per_point = p.samples;
    cfg.algorithms = p.algorithms;
    cfg.preset = p.name;
    return cfg;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t grid_index,
                          std::uint64_t sample_index) {
  const std::uint64_t key = master ^ (grid_index * kSeedGridMultiplier) ^
                            (sample_index * kSeedSampleMultiplier);
  return mix64(key + kGoldenGamma);
}

ActionProfile start_profile(StartMode mode, const GameSpec& spec) {
  ActionProfile start(spec.num_players, 0);
  if (mode == StartMode::kRandom) {
    // Payoffs use streams 0..n; this one sits far outside that range.
    const CounterStream stream(spec.seed, 0x5747'4152'5400ULL);
    for (int i = 0; i < spec.num_players; ++i) {
      start[i] = static_cast<int>(
          stream.below(static_cast<std::uint64_t>(i),
                       static_cast<std::uint64_t>(spec.num_actions)));
    }
  }
  return start;
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(to - from).count();
}

double mean_payoff_at(const Game& game, const ActionProfile& profile) {
  const std::uint64_t idx = game.profile_index(profile);
  double sum = 0.0;
  for (int i = 0; i < game.num_players(); ++i) sum += game.payoff_at(i, idx);
  return sum / game.num_players();
}

void fill_from_outcome(const Game& game, const DynOutcome& out, SampleRecord& rec) {
  switch (out.kind) {
    case TerminalKind::kFixedPoint:
      rec.kind = RecordKind::kNe;
      rec.terminal_mean_payoff = mean_payoff_at(game, out.members.front());
      break;
    case TerminalKind::kCycle:
      rec.kind = RecordKind::kCycle;
      rec.cycle_length = out.cycle_length;
      if (game.num_players() == 2 && out.is_two_cycle()) {
        rec.cross_nash = cross_profiles_are_nash(game, out);
      }
      break;
    case TerminalKind::kTruncated:
      rec.kind = RecordKind::kTruncated;
      break;
  }
  rec.steps_or_iters = out.steps_to_terminal;
}

}  // namespace

std::vector<SampleRecord> run_sample(const SweepConfig& cfg, int grid_index,
                                     std::int64_t sample_index) {
  const double lambda = cfg.lambda_grid.at(grid_index);
  const GameSpec spec{cfg.num_players, cfg.num_actions, lambda,
                      derive_seed(cfg.master_seed, static_cast<std::uint64_t>(grid_index),
                                  static_cast<std::uint64_t>(sample_index))};
  const auto gen_begin = Clock::now();
  const Game game = sample_game(spec);
  const std::int64_t gen_ns = elapsed_ns(gen_begin, Clock::now());

  const ActionProfile start = start_profile(cfg.start_mode, spec);
  const std::int64_t max_steps =
      cfg.sbrd_max_steps > 0 ? cfg.sbrd_max_steps : default_max_steps(game);

  std::vector<SampleRecord> records;
  for (Algorithm algo : cfg.algorithms) {
    SampleRecord rec;
    rec.grid_index = grid_index;
    rec.lambda = lambda;
    rec.n = cfg.num_players;
    rec.m = cfg.num_actions;
    rec.sample_index = sample_index;
    rec.seed = spec.seed;
    rec.algorithm = algo;

    const auto begin = Clock::now();
    switch (algo) {
      case Algorithm::kSbrd:
        fill_from_outcome(game, run_sbrd(game, start, max_steps), rec);
        break;
      case Algorithm::kIndd:
        fill_from_outcome(game, run_indd(game, start, max_steps), rec);
        break;
      case Algorithm::kSpgd: {
        const SpgdOutcome out = run_spgd(game, cfg.spgd);
        rec.kind = out.converged ? RecordKind::kSpgdConverged : RecordKind::kSpgdMaxIter;
        rec.steps_or_iters = out.iters;
        rec.terminal_mean_payoff = out.terminal_mean_payoff();
        rec.trajectory_mean_payoff = out.trajectory_mean_payoff;
        rec.rounded_is_nash = out.rounded_is_nash;
        break;
      }
    }
    const std::int64_t run_ns = elapsed_ns(begin, Clock::now());
    if (cfg.timing) {
      rec.wall_ns = run_ns;
      rec.total_wall_ns = gen_ns + run_ns;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SampleRecord> run_records(const SweepConfig& cfg) {
  cfg.validate();
  const auto points = static_cast<std::int64_t>(cfg.lambda_grid.size());
  const std::int64_t tasks = points * cfg.samples_per_point;
  std::vector<std::vector<SampleRecord>> slots(static_cast<std::size_t>(tasks));
  std::exception_ptr failure;
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t task = 0; task < tasks; ++task) {
    try {
      slots[task] = run_sample(cfg, static_cast<int>(task / cfg.samples_per_point),
                               task % cfg.samples_per_point);
    } catch (...) {
#pragma omp critical(gamedyn_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SampleRecord> records;
  records.reserve(static_cast<std::size_t>(tasks) * cfg.algorithms.size());
  for (auto& slot : slots) {
    for (auto& rec : slot) records.push_back(std::move(rec));
  }
  return records;
}

std::vector<AggregateRow> aggregate(const std::vector<SampleRecord>& records,
                                    double confidence) {
  std::map<std::pair<int, Algorithm>, std::vector<const SampleRecord*>> groups;
  for (const auto& rec : records) groups[{rec.grid_index, rec.algorithm}].push_back(&rec);

  std::vector<AggregateRow> rows;
  for (const auto& [key, group] : groups) {
    if (group.empty()) throw std::invalid_argument("empty aggregation group");
    AggregateRow row;
    row.grid_index = key.first;
    row.algorithm = key.second;
    row.lambda = group.front()->lambda;
    row.count = static_cast<std::int64_t>(group.size());

    std::vector<double> steps, wall, terminal, trajectory;
    for (const SampleRecord* rec : group) {
      if (rec->kind == RecordKind::kNe || rec->kind == RecordKind::kSpgdConverged) {
        ++row.ne_count;
      }
      if (rec->kind == RecordKind::kCycle && rec->cycle_length == 2) ++row.two_cycle_count;
      steps.push_back(static_cast<double>(rec->steps_or_iters));
      if (rec->wall_ns) wall.push_back(static_cast<double>(*rec->wall_ns));
      if (rec->terminal_mean_payoff) terminal.push_back(*rec->terminal_mean_payoff);
      if (rec->trajectory_mean_payoff) trajectory.push_back(*rec->trajectory_mean_payoff);
    }
    row.p_ne = stats::clopper_pearson(row.ne_count, row.count, confidence);
    row.p_two_cycle = stats::clopper_pearson(row.two_cycle_count, row.count, confidence);
    row.steps = stats::mean_and_se(steps);
    if (!wall.empty()) row.wall_ns = stats::mean_and_se(wall);
    if (!terminal.empty()) row.terminal_payoff = stats::mean_and_se(terminal);
    if (!trajectory.empty()) row.trajectory_payoff = stats::mean_and_se(trajectory);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

template <typename T>
std::string na_or(const std::optional<T>& v) {
  if (!v) return "NA";
  if constexpr (std::is_same_v<T, double>) {
    return format_real(*v);
  } else if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else {
    return std::to_string(*v);
  }
}

std::optional<std::int64_t> parse_opt_int(const std::string& s) {
  if (s == "NA") return std::nullopt;
  return std::stoll(s);
}

std::optional<double> parse_opt_real(const std::string& s) {
  if (s == "NA") return std::nullopt;
  return std::stod(s);
}

std::optional<bool> parse_opt_bool(const std::string& s) {
  if (s == "NA") return std::nullopt;
  if (s == "1") return true;
  if (s == "0") return false;
  throw std::runtime_error("expected 0, 1 or NA, got '" + s + "'");
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SampleRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.grid_index << ',' << format_real(r.lambda) << ',' << r.n << ',' << r.m
        << ',' << r.sample_index << ',' << r.seed << ',' << algorithm_name(r.algorithm)
        << ',' << record_kind_name(r.kind) << ',' << r.cycle_length << ','
        << r.steps_or_iters << ',' << na_or(r.wall_ns) << ',' << na_or(r.total_wall_ns)
        << ',' << na_or(r.cross_nash) << ',' << na_or(r.terminal_mean_payoff) << ','
        << na_or(r.trajectory_mean_payoff) << ',' << na_or(r.rounded_is_nash) << '\n';
  }
}

std::vector<SampleRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header");

  std::vector<SampleRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 16) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 16 fields");
    }
    try {
      SampleRecord r;
      r.grid_index = std::stoi(f[0]);
      r.lambda = std::stod(f[1]);
      r.n = std::stoi(f[2]);
      r.m = std::stoi(f[3]);
      r.sample_index = std::stoll(f[4]);
      r.seed = std::stoull(f[5]);
      r.algorithm = parse_algorithm(f[6]);
      r.kind = parse_record_kind(f[7]);
      r.cycle_length = std::stoi(f[8]);
      r.steps_or_iters = std::stoll(f[9]);
      r.wall_ns = parse_opt_int(f[10]);
      r.total_wall_ns = parse_opt_int(f[11]);
      r.cross_nash = parse_opt_bool(f[12]);
      r.terminal_mean_payoff = parse_opt_real(f[13]);
      r.trajectory_mean_payoff = parse_opt_real(f[14]);
      r.rounded_is_nash = parse_opt_bool(f[15]);
      records.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<SampleRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

void write_aggregates_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "grid_index,lambda,algorithm,count,ne_count,p_ne,p_ne_lo,p_ne_hi,"
         "two_cycle_count,p_two_cycle,p_two_cycle_lo,p_two_cycle_hi,"
         "mean_steps,se_steps,mean_wall_ns,se_wall_ns,mean_terminal_payoff,"
         "se_terminal_payoff,mean_traj_payoff,se_traj_payoff\n";
  auto stat = [](const std::optional<stats::SummaryStat>& s) {
    if (!s) return std::string("NA,NA");
    return format_real(s->mean) + ',' + format_real(s->se);
  };
  for (const auto& r : rows) {
    out << r.grid_index << ',' << format_real(r.lambda) << ','
        << algorithm_name(r.algorithm) << ',' << r.count << ',' << r.ne_count << ','
        << format_real(r.p_ne.point) << ',' << format_real(r.p_ne.lo) << ','
        << format_real(r.p_ne.hi) << ',' << r.two_cycle_count << ','
        << format_real(r.p_two_cycle.point) << ',' << format_real(r.p_two_cycle.lo)
        << ',' << format_real(r.p_two_cycle.hi) << ',' << stat(r.steps) << ','
        << stat(r.wall_ns) << ',' << stat(r.terminal_payoff) << ','
        << stat(r.trajectory_payoff) << '\n';
  }
}

void write_meta(std::ostream& out, const SweepConfig& cfg) {
  std::string algos;
  for (Algorithm a : cfg.algorithms) {
    if (!algos.empty()) algos += ',';
    algos += algorithm_name(a);
  }
  std::string grid;
  for (double v : cfg.lambda_grid) {
    if (!grid.empty()) grid += ',';
    grid += format_real(v);
  }
  out << "software=gamedyn\n"
      << "version=" << GAMEDYN_VERSION << '\n'
      << "preset=" << (cfg.preset.empty() ? "none" : cfg.preset) << '\n'
      << "players=" << cfg.num_players << '\n'
      << "actions=" << cfg.num_actions << '\n'
      << "grid_name=" << (cfg.grid_name.empty() ? "custom" : cfg.grid_name) << '\n'
      << "grid=" << grid << '\n'
      << "samples=" << cfg.samples_per_point << '\n'
      << "algorithms=" << algos << '\n'
      << "master_seed=" << cfg.master_seed << '\n'
      << "seed_derivation=splitmix64(master ^ grid*" << kSeedGridMultiplier
      << " ^ sample*" << kSeedSampleMultiplier << ")\n"
      << "payoff_model=u_i=sqrt(lambda)Z+sqrt(1-lambda)W_i, standard normal\n"
      << "sbrd_max_steps="
      << (cfg.sbrd_max_steps > 0 ? std::to_string(cfg.sbrd_max_steps) : "auto") << '\n'
      << "start=" << (cfg.start_mode == StartMode::kRandom ? "random" : "fixed") << '\n'
      << "threads=" << (cfg.threads > 0 ? std::to_string(cfg.threads) : "auto") << '\n'
      << "timing=" << (cfg.timing ? "on" : "off") << '\n'
      << "spgd_eta=" << format_real(cfg.spgd.learning_rate) << '\n'
      << "spgd_max_iters=" << cfg.spgd.max_iters << '\n'
      << "spgd_gap_tol=" << format_real(cfg.spgd.gap_tol) << '\n'
      << "spgd_record_every=" << cfg.spgd.record_every << '\n'
      << "spgd_init=uniform\n"
      << "terminal_mean_payoff=mean over players of the payoff at the fixed point "
         "(SBRD/INDD) or of the final expected payoff (SPGD)\n"
      << "trajectory_mean_payoff=mean over recorded SPGD iterations of the "
         "player-averaged expected payoff\n"
      << "wall_ns=dynamics only; total_wall_ns=game generation plus dynamics\n";
}

std::string sidecar_path(const std::string& csv_path, std::string_view suffix) {
  std::filesystem::path p(csv_path);
  p.replace_extension();
  return p.string() + std::string(suffix);
}

SweepResult run_sweep(const SweepConfig& cfg, const std::string& csv_path) {
  cfg.validate();
  const std::string meta_path = sidecar_path(csv_path, ".meta");
  const std::string agg_path = sidecar_path(csv_path, ".agg.csv");
  const std::vector<std::string> outputs{csv_path, meta_path, agg_path};

  auto remove_all = [&outputs] {
    std::error_code ec;
    for (const auto& p : outputs) {
      std::filesystem::remove(p, ec);
      std::filesystem::remove(p + ".tmp", ec);
    }
  };

  SweepResult result;
  try {
    result.records = run_records(cfg);
    result.aggregates = aggregate(result.records);

    auto write_file = [](const std::string& path, auto&& body) {
      std::ofstream out(path + ".tmp", std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + path);
      body(out);
      out.close();
      if (!out) throw std::runtime_error("write failed for " + path);
    };
    write_file(csv_path, [&](std::ostream& o) { write_csv(o, result.records); });
    write_file(meta_path, [&](std::ostream& o) { write_meta(o, cfg); });
    write_file(agg_path, [&](std::ostream& o) { write_aggregates_csv(o, result.aggregates); });
    for (const auto& p : outputs) std::filesystem::rename(p + ".tmp", p);
  } catch (...) {
    remove_all();
    throw;
  }
  return result;
}

}  // namespace gamedyn
