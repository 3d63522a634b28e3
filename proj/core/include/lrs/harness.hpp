#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrs/optimizer.hpp"
#include "lrs/problems.hpp"

namespace lrs {

enum class EtaSchedule { constant, inv_sqrt_t };

/// Seed values for the adaptive-rank policy (ada_orth_dion only).
struct RankPolicyConfig {
  double alpha = 0.1;
  double gamma = 1.1;
  int r_min = 8;
  int r_max = 0;     // 0 = use the initial rank
  int round_to = 8;
  int cadence = 1;   // evaluate the policy every this many steps
  std::optional<int> freeze_after;  // stop adapting after this step
};

struct ExperimentConfig {
  ProblemSpec problem;
  Algorithm algorithm = Algorithm::orth_dion;
  int rank = 8;
  int steps = 100;
  EtaSchedule eta_schedule = EtaSchedule::constant;
  double eta_c = 0.01;
  double beta = 1.0;
  double mu = 0.0;  // polyak_dion only
  std::optional<RankPolicyConfig> rank_policy;
  DiagnosticsMode diagnostics_mode = DiagnosticsMode::full;
  std::uint64_t seed = 0;
  std::string output_path;       // file stem; empty disables writing
  bool store_raw_vbar = false;   // store the raw right factor as warm start

  /// The (constant) step size: eta_c, or eta_c / sqrt(steps).
  double eta_value() const;
};

/// Throws ValidationError naming the offending field.
void validate_config(const ExperimentConfig& config);

/// Parses the JSON configuration document; errors carry the field path.
ExperimentConfig parse_config(const std::string& json_text);

/// Canonical JSON form; parsing it reproduces the run.
std::string config_to_json(const ExperimentConfig& config);

struct StepRecord {
  int step = 0;
  int layer = 0;
  double loss = 0.0;
  double kyfan_grad_r = 0.0;
  StepDiagnostics diag;
  int rank = 0;
};

struct RunSummary {
  double min_kyfan_grad = 0.0;
  double mean_nu = 0.0;
  double final_r_ratio = 0.0;
  double wall_time_sec = 0.0;
  bool aborted = false;
  int abort_step = -1;
};

struct RunLog {
  ExperimentConfig config;
  std::vector<StepRecord> records;
  RunSummary summary;
};

/// Runs one experiment. Deterministic given the config: repeated calls
/// produce identical records. When config.output_path is non-empty, writes
/// <stem>.json (config echo + summary) and <stem>.csv (per-step records).
/// A non-finite objective aborts the run; the partial log carries the abort
/// marker.
RunLog run_experiment(const ExperimentConfig& config);

/// Fixed CSV header shared by every run log.
std::string run_csv_header();

void write_run_csv(const RunLog& log, std::ostream& out);
void write_run_json(const RunLog& log, std::ostream& out);
void write_run_files(const RunLog& log, const std::string& stem);

struct BetaSweepRow {
  double beta = 0.0;
  double final_metric = 0.0;   // min Ky Fan gradient norm of the run
  double mean_r_ratio = 0.0;
  double mean_phi = 0.0;
};

/// One run per beta with a shared seed; rows sorted by beta.
std::vector<BetaSweepRow> run_beta_sweep(const ExperimentConfig& base,
                                         std::span<const double> betas);

struct NuTraceSeries {
  int rank = 0;
  Algorithm algorithm = Algorithm::dion;
  std::vector<double> nu;  // per-step dual-norm factor
};

struct NuTraceResult {
  std::vector<NuTraceSeries> series;
  double max_orth_deviation = 0.0;  // max |nu - 1| over orth_dion series
  bool orth_flatline_ok = false;    // max_orth_deviation <= 1e-8
};

/// Runs dion and orth_dion at each rank on the base config and collects
/// the per-step nu series.
NuTraceResult run_nu_trace(const ExperimentConfig& base,
                           std::span<const int> ranks);

const char* algorithm_name(Algorithm algorithm);

}  // namespace lrs
