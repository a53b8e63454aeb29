#ifndef GAMEDYN_EXPERIMENT_H_
#define GAMEDYN_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gamedyn/game.h"
#include "gamedyn/spgd.h"
#include "gamedyn/stats.h"

namespace gamedyn {

// Listed in CSV record order.
enum class Algorithm { kSbrd, kIndd, kSpgd };

const char* algorithm_name(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);
// Comma-separated, case-insensitive; result sorted and deduplicated.
std::vector<Algorithm> parse_algorithms(std::string_view list);

enum class StartMode { kFixedZero, kRandom };

enum class RecordKind { kNe, kCycle, kTruncated, kSpgdConverged, kSpgdMaxIter };

const char* record_kind_name(RecordKind kind);

// Named lambda grids: i/20 for i in 0..20, and 0.85 + 0.025 i for i in 0..6.
std::vector<double> coarse21_grid();
std::vector<double> fine7_grid();
// "coarse21", "fine7", or a comma-separated list of reals.
std::vector<double> parse_grid(std::string_view text);

struct SweepConfig {
  int num_players = 2;
  int num_actions = 50;
  std::vector<double> lambda_grid = coarse21_grid();
  std::string grid_name = "coarse21";
  std::int64_t samples_per_point = 100;
  std::vector<Algorithm> algorithms{Algorithm::kSbrd};
  std::uint64_t master_seed = 0;
  // 0 selects min(m^n + 1, 1e5).
  std::int64_t sbrd_max_steps = 0;
  SpgdConfig spgd;
  StartMode start_mode = StartMode::kFixedZero;
  // 0 uses the OpenMP default.
  int threads = 0;
  bool timing = true;
  std::string preset;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct Preset {
  std::string name;
  int num_players;
  int num_actions;
  std::string grid;
  std::int64_t samples;
  std::vector<Algorithm> algorithms;
  std::string description;
};

const std::vector<Preset>& presets();
// Throws std::invalid_argument for unknown names.
SweepConfig preset_config(std::string_view name);

// Odd multipliers mixed into the per-sample seed.
inline constexpr std::uint64_t kSeedGridMultiplier = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kSeedSampleMultiplier = 0xC2B2AE3D27D4EB4FULL;

// SplitMix64 step applied to master ^ (grid * C1) ^ (sample * C2).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t grid_index,
                          std::uint64_t sample_index);

// (0,...,0) for kFixedZero; otherwise drawn from a stream of `seed` that is
// disjoint from the payoff streams.
ActionProfile start_profile(StartMode mode, const GameSpec& spec);

struct SampleRecord {
  int grid_index = 0;
  double lambda = 0.0;
  int n = 0;
  int m = 0;
  std::int64_t sample_index = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kSbrd;
  RecordKind kind = RecordKind::kTruncated;
  int cycle_length = 0;
  std::int64_t steps_or_iters = 0;
  std::optional<std::int64_t> wall_ns;
  std::optional<std::int64_t> total_wall_ns;
  std::optional<bool> cross_nash;
  std::optional<double> terminal_mean_payoff;
  std::optional<double> trajectory_mean_payoff;
  std::optional<bool> rounded_is_nash;

  bool operator==(const SampleRecord&) const = default;
};

// One record per selected algorithm, all on the same game and start.
std::vector<SampleRecord> run_sample(const SweepConfig& cfg, int grid_index,
                                     std::int64_t sample_index);

// Every (grid point, sample, algorithm) record in ascending order, computed
// on a pool of cfg.threads workers.
std::vector<SampleRecord> run_records(const SweepConfig& cfg);

struct AggregateRow {
  int grid_index = 0;
  double lambda = 0.0;
  Algorithm algorithm = Algorithm::kSbrd;
  std::int64_t count = 0;
  std::int64_t ne_count = 0;
  std::int64_t two_cycle_count = 0;
  // NE (or SPGD convergence) and two-cycle proportions.
  stats::IntervalEstimate p_ne;
  stats::IntervalEstimate p_two_cycle;
  stats::SummaryStat steps;
  std::optional<stats::SummaryStat> wall_ns;
  std::optional<stats::SummaryStat> terminal_payoff;
  std::optional<stats::SummaryStat> trajectory_payoff;
};

// Groups by (grid_index, algorithm) in ascending order.
std::vector<AggregateRow> aggregate(const std::vector<SampleRecord>& records,
                                    double confidence = stats::kDefaultConfidence);

inline constexpr std::string_view kCsvHeader =
    "grid_index,lambda,n,m,sample_index,seed,algorithm,terminal_kind,"
    "cycle_length,steps_or_iters,wall_ns,total_wall_ns,cross_nash,"
    "terminal_mean_payoff,trajectory_mean_payoff,rounded_is_nash";

// %.17g, which round-trips every double.
std::string format_real(double value);

void write_csv(std::ostream& out, const std::vector<SampleRecord>& records);
// Throws std::runtime_error on a malformed header or row.
std::vector<SampleRecord> read_csv(std::istream& in);
std::vector<SampleRecord> read_csv_file(const std::string& path);

void write_aggregates_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
void write_meta(std::ostream& out, const SweepConfig& cfg);

struct SweepResult {
  std::vector<SampleRecord> records;
  std::vector<AggregateRow> aggregates;
};

// Runs the sweep and writes `csv_path`, `<base>.meta` and `<base>.agg.csv`
// where <base> is csv_path without its extension. On failure every partial
// file is removed.
SweepResult run_sweep(const SweepConfig& cfg, const std::string& csv_path);

std::string sidecar_path(const std::string& csv_path, std::string_view suffix);

}  // namespace gamedyn

#endif  // GAMEDYN_EXPERIMENT_H_
