#include "lrs/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lrs/adarank.hpp"
#include "lrs/factor_ops.hpp"
#include "lrs/spectral.hpp"

namespace lrs {

namespace {

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

StepOutcome dispatch_step(Algorithm algorithm, const LayerOptState& state,
                          const Matrix& g, Rng& rng, DiagnosticsMode mode) {
  switch (algorithm) {
    case Algorithm::dion:
      return dion_step(state, g, rng, mode);
    case Algorithm::orth_dion:
    case Algorithm::ada_orth_dion:
      return orth_dion_step(state, g, rng, mode);
    case Algorithm::exact_polar:
      return exact_polar_step(state, g, rng, mode);
    case Algorithm::polyak_dion:
      return polyak_dion_step(state, g, rng, mode);
  }
  throw ValidationError("run_experiment: unknown algorithm");
}

}  // namespace

RunLog run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto start_time = std::chrono::steady_clock::now();

  RunLog log;
  log.config = config;
  log.records.reserve(static_cast<std::size_t>(config.steps));

  Rng root(config.seed);
  Rng state_rng = root.fork("state-init");
  Rng step_rng = root.fork("step");
  Rng noise_rng = root.fork("stream-noise");
  Rng resize_rng = root.fork("rank-resize");

  const bool is_quadratic =
      config.problem.kind == ProblemKind::planted_quadratic;
  std::optional<PlantedQuadratic> quadratic;
  std::optional<GradientStream> stream;
  Matrix x0;
  if (is_quadratic) {
    quadratic = PlantedQuadratic::from_spec(config.problem);
    x0 = quadratic->initial_point();
  } else {
    stream = GradientStream::from_spec(config.problem);
    x0 = Matrix::Zero(config.problem.m, config.problem.n);
  }

  LayerOptState state =
      make_initial_state(x0, config.rank, config.eta_value(), config.beta,
                         config.mu, config.algorithm, state_rng);
  state.reorthogonalize_warm_start = !config.store_raw_vbar;

  RankPolicyState policy;
  RankPolicyConfig policy_config;
  if (config.algorithm == Algorithm::ada_orth_dion) {
    policy_config = config.rank_policy.value_or(RankPolicyConfig{});
    if (policy_config.r_max <= 0) policy_config.r_max = config.rank;
    policy.r_current = config.rank;
    policy.ema = static_cast<double>(config.rank);
    policy.alpha = policy_config.alpha;
    policy.gamma = policy_config.gamma;
    policy.r_min = policy_config.r_min;
    policy.r_max = policy_config.r_max;
    policy.round_to = policy_config.round_to;
  }

  Matrix prev_g_out;
  double nu_sum = 0.0;
  double min_kyfan = std::numeric_limits<double>::infinity();

  for (int t = 0; t < config.steps; ++t) {
    const Matrix g = is_quadratic ? quadratic->gradient(state.x)
                                  : stream->next(noise_rng);
    const double loss = is_quadratic ? quadratic->value(state.x) : 0.0;
    if (!std::isfinite(loss) || !g.allFinite()) {
      log.summary.aborted = true;
      log.summary.abort_step = t;
      break;
    }

    StepOutcome outcome;
    try {
      outcome =
          dispatch_step(config.algorithm, state, g, step_rng,
                        config.diagnostics_mode);
    } catch (const DegenerateRankError&) {
      log.summary.aborted = true;
      log.summary.abort_step = t;
      break;
    }
    if (t > 0) {
      outcome.diagnostics.phi =
          measure_persistence(outcome.gradient_out_of_subspace, prev_g_out);
    }
    prev_g_out = outcome.gradient_out_of_subspace;

    StepRecord record;
    record.step = t;
    record.layer = 0;
    record.loss = loss;
    record.kyfan_grad_r = kyfan_norm(g, state.rank);
    record.diag = outcome.diagnostics;
    record.rank = state.rank;
    log.records.push_back(record);

    nu_sum += outcome.diagnostics.nu;
    min_kyfan = std::min(min_kyfan, record.kyfan_grad_r);

    state = std::move(outcome.state);

    if (config.algorithm == Algorithm::ada_orth_dion &&
        (t + 1) % policy_config.cadence == 0 &&
        !(policy_config.freeze_after.has_value() &&
          t >= *policy_config.freeze_after)) {
      policy = rank_policy_update(policy, outcome.diagnostics.erank);
      if (policy.r_current != state.rank) {
        auto [v_resized, u_resized] = resize_factors(
            state.v, outcome.left_factor, policy.r_current, resize_rng);
        state.v = std::move(v_resized);
        state.rank = policy.r_current;
      }
    }
  }

  if (!log.records.empty()) {
    log.summary.min_kyfan_grad = min_kyfan;
    log.summary.mean_nu = nu_sum / static_cast<double>(log.records.size());
    log.summary.final_r_ratio = log.records.back().diag.r_ratio;
  }
  log.summary.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    start_time)
          .count();

  if (!config.output_path.empty()) {
    write_run_files(log, config.output_path);
  }
  return log;
}

std::string run_csv_header() {
  return "step,layer,loss,kyfan_grad_r,nu,delta,eps_proj,eps_proj_G,eps_hat,"
         "phi,r_ratio,gamma_tilde,kappa_G,rho,erank,rank,degenerate";
}

void write_run_csv(const RunLog& log, std::ostream& out) {
  out << run_csv_header() << '\n';
  for (const StepRecord& r : log.records) {
    out << r.step << ',' << r.layer << ',' << format_double(r.loss) << ','
        << format_double(r.kyfan_grad_r) << ',' << format_double(r.diag.nu)
        << ',' << format_double(r.diag.delta) << ','
        << format_double(r.diag.eps_proj) << ','
        << format_double(r.diag.eps_proj_g) << ','
        << format_double(r.diag.eps_hat) << ',' << format_double(r.diag.phi)
        << ',' << format_double(r.diag.r_ratio) << ','
        << format_double(r.diag.gamma_tilde) << ','
        << format_double(r.diag.kappa_g) << ',' << format_double(r.diag.rho)
        << ',' << format_double(r.diag.erank) << ',' << r.rank << ','
        << (r.diag.degenerate ? 1 : 0) << '\n';
  }
}

void write_run_json(const RunLog& log, std::ostream& out) {
  out << "{\n\"config\": " << config_to_json(log.config)
      << ",\n\"summary\": {\n";
  out << "  \"min_kyfan_grad\": " << format_double(log.summary.min_kyfan_grad)
      << ",\n";
  out << "  \"mean_nu\": " << format_double(log.summary.mean_nu) << ",\n";
  out << "  \"final_r_ratio\": " << format_double(log.summary.final_r_ratio)
      << ",\n";
  out << "  \"wall_time_sec\": " << format_double(log.summary.wall_time_sec)
      << ",\n";
  out << "  \"aborted\": " << (log.summary.aborted ? "true" : "false") << ",\n";
  out << "  \"abort_step\": " << log.summary.abort_step << ",\n";
  out << "  \"records\": " << log.records.size() << "\n}\n}\n";
}

void write_run_files(const RunLog& log, const std::string& stem) {
  const std::filesystem::path base(stem);
  if (base.has_parent_path()) {
    std::filesystem::create_directories(base.parent_path());
  }
  std::ofstream json_out(stem + ".json");
  if (!json_out) {
    throw ValidationError("output_path: cannot open " + stem + ".json");
  }
  write_run_json(log, json_out);
  std::ofstream csv_out(stem + ".csv", std::ios::binary);
  if (!csv_out) {
    throw ValidationError("output_path: cannot open " + stem + ".csv");
  }
  write_run_csv(log, csv_out);
}

std::vector<BetaSweepRow> run_beta_sweep(const ExperimentConfig& base,
                                         std::span<const double> betas) {
  std::vector<double> sorted(betas.begin(), betas.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<BetaSweepRow> rows;
  for (double beta : sorted) {
    if (beta < 0.0 || beta > 1.0) {
      throw ValidationError("sweep: beta must be in [0, 1]");
    }
    ExperimentConfig config = base;
    config.beta = beta;
    config.output_path.clear();
    RunLog log = run_experiment(config);
    BetaSweepRow row;
    row.beta = beta;
    row.final_metric = log.summary.min_kyfan_grad;
    double phi_sum = 0.0;
    double ratio_sum = 0.0;
    for (const StepRecord& r : log.records) {
      phi_sum += r.diag.phi;
      ratio_sum += r.diag.r_ratio;
    }
    const double count = std::max<double>(1.0, log.records.size());
    row.mean_r_ratio = ratio_sum / count;
    row.mean_phi = phi_sum / count;
    rows.push_back(row);
  }
  return rows;
}

NuTraceResult run_nu_trace(const ExperimentConfig& base,
                           std::span<const int> ranks) {
  NuTraceResult result;
  for (int rank : ranks) {
    if (rank < 1 || rank > std::min(base.problem.m, base.problem.n)) {
      throw ValidationError("trace: rank outside [1, min(m, n)]");
    }
    for (Algorithm algorithm : {Algorithm::dion, Algorithm::orth_dion}) {
      ExperimentConfig config = base;
      config.algorithm = algorithm;
      config.rank = rank;
      config.mu = 0.0;
      config.rank_policy.reset();
      config.output_path.clear();
      RunLog log = run_experiment(config);
      NuTraceSeries series;
      series.rank = rank;
      series.algorithm = algorithm;
      series.nu.reserve(log.records.size());
      for (const StepRecord& r : log.records) {
        series.nu.push_back(r.diag.nu);
        if (algorithm == Algorithm::orth_dion) {
          result.max_orth_deviation =
              std::max(result.max_orth_deviation, std::abs(r.diag.nu - 1.0));
        }
      }
      result.series.push_back(std::move(series));
    }
  }
  result.orth_flatline_ok = result.max_orth_deviation <= 1e-8;
  return result;
}

}  // namespace lrs
