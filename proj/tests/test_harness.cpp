#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "lrs/harness.hpp"

using namespace lrs;

namespace {

ExperimentConfig quadratic_config() {
  ExperimentConfig config;
  config.problem.kind = ProblemKind::planted_quadratic;
  config.problem.m = 16;
  config.problem.n = 12;
  config.problem.target_spectrum = {6.0, 4.0, 2.0, 1.0};
  config.problem.gap_index = 3;
  config.problem.seed = 5;
  config.algorithm = Algorithm::exact_polar;
  config.rank = 3;
  config.steps = 120;
  config.eta_schedule = EtaSchedule::constant;
  config.eta_c = 0.05;
  config.beta = 1.0;
  config.seed = 11;
  return config;
}

ExperimentConfig stream_config() {
  ExperimentConfig config;
  config.problem.kind = ProblemKind::gradient_stream;
  config.problem.m = 14;
  config.problem.n = 10;
  config.problem.target_spectrum = {5.0, 3.0, 2.0};
  config.problem.gap_index = 3;
  config.problem.regime = Regime::stochastic;
  config.problem.noise_scale = 0.5;
  config.problem.seed = 9;
  config.algorithm = Algorithm::orth_dion;
  config.rank = 3;
  config.steps = 150;
  config.eta_c = 0.02;
  config.beta = 1.0;
  config.seed = 13;
  return config;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config JSON round-trips through parse") {
  ExperimentConfig config = stream_config();
  config.diagnostics_mode = DiagnosticsMode::fast;
  config.store_raw_vbar = true;
  config.output_path = "runs/example";
  const ExperimentConfig parsed = parse_config(config_to_json(config));
  CHECK(parsed.problem.m == config.problem.m);
  CHECK(parsed.problem.target_spectrum == config.problem.target_spectrum);
  CHECK(parsed.problem.regime == config.problem.regime);
  CHECK(parsed.algorithm == config.algorithm);
  CHECK(parsed.rank == config.rank);
  CHECK(parsed.steps == config.steps);
  CHECK(parsed.eta_c == config.eta_c);
  CHECK(parsed.beta == config.beta);
  CHECK(parsed.diagnostics_mode == config.diagnostics_mode);
  CHECK(parsed.seed == config.seed);
  CHECK(parsed.output_path == config.output_path);
  CHECK(parsed.store_raw_vbar == config.store_raw_vbar);
}

TEST_CASE("config validation errors carry the field path") {
  try {
    parse_config(R"({"algorithm": "orth_dion"})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("problem") != std::string::npos);
  }
  ExperimentConfig config = stream_config();
  config.mu = 0.5;  // mu without polyak_dion
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config = stream_config();
  config.rank_policy = RankPolicyConfig{};
  CHECK_THROWS_AS(validate_config(config), ValidationError);
  config = stream_config();
  config.beta = 1.5;
  CHECK_THROWS_AS(validate_config(config), ValidationError);
}

TEST_CASE("eta schedules") {
  ExperimentConfig config = quadratic_config();
  config.eta_c = 0.8;
  CHECK(config.eta_value() == 0.8);
  config.eta_schedule = EtaSchedule::inv_sqrt_t;
  config.steps = 400;
  CHECK(config.eta_value() == doctest::Approx(0.8 / 20.0));
}

TEST_CASE("exact polar on the quadratic descends monotonically") {
  const RunLog log = run_experiment(quadratic_config());
  REQUIRE(log.records.size() == 120);
  CHECK_FALSE(log.summary.aborted);
  for (std::size_t t = 1; t < log.records.size(); ++t) {
    CHECK(log.records[t].loss <= log.records[t - 1].loss + 1e-12);
  }
}

TEST_CASE("orth_dion mean nu is pinned at one") {
  const RunLog log = run_experiment(stream_config());
  CHECK(std::abs(log.summary.mean_nu - 1.0) <= 1e-8);
}

TEST_CASE("summary aggregates match the records") {
  const RunLog log = run_experiment(stream_config());
  REQUIRE(static_cast<int>(log.records.size()) == log.config.steps);
  double min_grad = log.records.front().kyfan_grad_r;
  for (const StepRecord& r : log.records) {
    min_grad = std::min(min_grad, r.kyfan_grad_r);
  }
  CHECK(std::abs(log.summary.min_kyfan_grad - min_grad) <= 1e-12);
  CHECK(log.summary.final_r_ratio == log.records.back().diag.r_ratio);
}

TEST_CASE("paired dion and orth_dion runs share the tracking-error trace") {
  ExperimentConfig config = stream_config();
  const RunLog orth = run_experiment(config);
  config.algorithm = Algorithm::dion;
  const RunLog dion = run_experiment(config);
  REQUIRE(orth.records.size() == dion.records.size());
  double max_eps_diff = 0.0;
  double max_nu_diff = 0.0;
  for (std::size_t t = 0; t < orth.records.size(); ++t) {
    max_eps_diff = std::max(max_eps_diff,
                            std::abs(orth.records[t].diag.eps_proj -
                                     dion.records[t].diag.eps_proj));
    max_nu_diff = std::max(
        max_nu_diff,
        std::abs(orth.records[t].diag.nu - dion.records[t].diag.nu));
  }
  CHECK(max_eps_diff <= 1e-10);
  CHECK(max_nu_diff > 1e-4);  // the dual norms genuinely differ
}

TEST_CASE("identical configs produce byte-identical CSV") {
  const ExperimentConfig config = stream_config();
  const RunLog a = run_experiment(config);
  const RunLog b = run_experiment(config);
  std::ostringstream csv_a;
  std::ostringstream csv_b;
  write_run_csv(a, csv_a);
  write_run_csv(b, csv_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(csv_a.str().rfind(run_csv_header(), 0) == 0);
}

TEST_CASE("numerical blow-up aborts with a marker and partial log") {
  ExperimentConfig config = quadratic_config();
  // Spectral steps move by eta * sqrt(r) per step, so the objective only
  // overflows once the iterate itself leaves the representable range.
  config.eta_c = 1e200;
  const RunLog log = run_experiment(config);
  CHECK(log.summary.aborted);
  CHECK(log.summary.abort_step >= 0);
  CHECK(static_cast<int>(log.records.size()) < config.steps);
}

TEST_CASE("polyak_dion on a stream keeps the residual ratio at zero") {
  ExperimentConfig config = stream_config();
  config.algorithm = Algorithm::polyak_dion;
  config.mu = 0.95;
  config.steps = 60;
  const RunLog log = run_experiment(config);
  for (const StepRecord& r : log.records) {
    CHECK(r.diag.r_ratio == 0.0);
  }
}

TEST_CASE("ada_orth_dion adapts the rank within policy bounds") {
  ExperimentConfig config = stream_config();
  config.algorithm = Algorithm::ada_orth_dion;
  config.rank = 8;
  config.steps = 80;
  RankPolicyConfig policy;
  policy.alpha = 0.25;
  policy.gamma = 1.1;
  policy.r_min = 2;
  policy.r_max = 8;
  policy.round_to = 2;
  config.rank_policy = policy;
  const RunLog log = run_experiment(config);
  CHECK_FALSE(log.summary.aborted);
  bool changed = false;
  for (const StepRecord& r : log.records) {
    CHECK(r.rank >= policy.r_min);
    CHECK(r.rank <= policy.r_max);
    changed = changed || r.rank != config.rank;
  }
  // The planted stream has effective rank ~3, so the policy must shrink.
  CHECK(changed);
  CHECK(log.records.back().rank < 8);
}

TEST_CASE("beta sweep rows are sorted and beta=0 kills the residual") {
  ExperimentConfig config = stream_config();
  config.steps = 60;
  const std::vector<double> betas{1.0, 0.5, 0.0};
  const auto rows = run_beta_sweep(config, betas);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].beta == 0.0);
  CHECK(rows[1].beta == 0.5);
  CHECK(rows[2].beta == 1.0);
  CHECK(rows[0].mean_r_ratio == 0.0);
  CHECK(rows[2].mean_r_ratio > 0.0);
}

TEST_CASE("nu trace flags orth_dion flatline and rank-1 dion") {
  ExperimentConfig config = stream_config();
  config.steps = 40;
  const std::vector<int> ranks{1, 3};
  const NuTraceResult result = run_nu_trace(config, ranks);
  REQUIRE(result.series.size() == 4);
  CHECK(result.orth_flatline_ok);
  for (const NuTraceSeries& series : result.series) {
    if (series.rank == 1) {
      // A single column is always unit after either normalization.
      for (double nu : series.nu) CHECK(nu == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

}  // TEST_SUITE
