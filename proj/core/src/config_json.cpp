#include <json.hpp>

#include <cmath>

#include "lrs/harness.hpp"

namespace lrs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& field(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    fail(path.empty() ? key : path + "." + key, "missing");
  }
  return *it;
}

std::string subpath(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

int get_int(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_number_integer()) fail(subpath(path, key), "must be an integer");
  return v.get<int>();
}

double get_double(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_number()) fail(subpath(path, key), "must be a number");
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_string()) fail(subpath(path, key), "must be a string");
  return v.get<std::string>();
}

ProblemKind parse_kind(const std::string& s, const std::string& path) {
  if (s == "planted_quadratic") return ProblemKind::planted_quadratic;
  if (s == "gradient_stream") return ProblemKind::gradient_stream;
  fail(path, "unknown kind '" + s + "'");
}

Regime parse_regime(const std::string& s, const std::string& path) {
  if (s == "coherent") return Regime::coherent;
  if (s == "stochastic") return Regime::stochastic;
  if (s == "anticorrelated") return Regime::anticorrelated;
  fail(path, "unknown regime '" + s + "'");
}

Algorithm parse_algorithm(const std::string& s, const std::string& path) {
  if (s == "dion") return Algorithm::dion;
  if (s == "orth_dion") return Algorithm::orth_dion;
  if (s == "ada_orth_dion") return Algorithm::ada_orth_dion;
  if (s == "exact_polar") return Algorithm::exact_polar;
  if (s == "polyak_dion") return Algorithm::polyak_dion;
  fail(path, "unknown algorithm '" + s + "'");
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::coherent: return "coherent";
    case Regime::stochastic: return "stochastic";
    case Regime::anticorrelated: return "anticorrelated";
  }
  return "stochastic";
}

const char* kind_name(ProblemKind kind) {
  return kind == ProblemKind::planted_quadratic ? "planted_quadratic"
                                                : "gradient_stream";
}

ProblemSpec parse_problem(const json& j) {
  ProblemSpec spec;
  spec.kind = parse_kind(get_string(j, "problem", "kind"), "problem.kind");
  spec.m = get_int(j, "problem", "m");
  spec.n = get_int(j, "problem", "n");
  const json& spectrum = field(j, "problem", "target_spectrum");
  if (!spectrum.is_array() || spectrum.empty()) {
    fail("problem.target_spectrum", "must be a non-empty array");
  }
  for (const auto& v : spectrum) {
    if (!v.is_number()) fail("problem.target_spectrum", "entries must be numbers");
    spec.target_spectrum.push_back(v.get<double>());
  }
  spec.gap_index = get_int(j, "problem", "gap_index");
  if (j.contains("tail")) spec.tail = get_double(j, "problem", "tail");
  if (j.contains("regime")) {
    spec.regime =
        parse_regime(get_string(j, "problem", "regime"), "problem.regime");
  }
  if (j.contains("noise_scale")) {
    spec.noise_scale = get_double(j, "problem", "noise_scale");
  }
  if (j.contains("seed")) {
    const json& v = field(j, "problem", "seed");
    if (!v.is_number_unsigned()) fail("problem.seed", "must be unsigned");
    spec.seed = v.get<std::uint64_t>();
  }
  return spec;
}

RankPolicyConfig parse_rank_policy(const json& j) {
  RankPolicyConfig policy;
  if (j.contains("alpha")) policy.alpha = get_double(j, "rank_policy", "alpha");
  if (j.contains("gamma")) policy.gamma = get_double(j, "rank_policy", "gamma");
  if (j.contains("r_min")) policy.r_min = get_int(j, "rank_policy", "r_min");
  if (j.contains("r_max")) policy.r_max = get_int(j, "rank_policy", "r_max");
  if (j.contains("round_to")) {
    policy.round_to = get_int(j, "rank_policy", "round_to");
  }
  if (j.contains("cadence")) policy.cadence = get_int(j, "rank_policy", "cadence");
  if (j.contains("freeze_after")) {
    policy.freeze_after = get_int(j, "rank_policy", "freeze_after");
  }
  return policy;
}

}  // namespace

double ExperimentConfig::eta_value() const {
  return eta_schedule == EtaSchedule::constant
             ? eta_c
             : eta_c / std::sqrt(static_cast<double>(steps));
}

void validate_config(const ExperimentConfig& config) {
  validate(config.problem);
  if (config.rank < 1 ||
      config.rank > std::min(config.problem.m, config.problem.n)) {
    throw ValidationError("rank: outside [1, min(m, n)]");
  }
  if (config.steps < 1) {
    throw ValidationError("steps: must be positive");
  }
  if (!(config.eta_c > 0.0) || !std::isfinite(config.eta_c)) {
    throw ValidationError("eta.c: must be positive and finite");
  }
  if (config.beta < 0.0 || config.beta > 1.0) {
    throw ValidationError("beta: must be in [0, 1]");
  }
  if (config.mu < 0.0 || config.mu >= 1.0) {
    throw ValidationError("mu: must be in [0, 1)");
  }
  if (config.mu != 0.0 && config.algorithm != Algorithm::polyak_dion) {
    throw ValidationError("mu: only valid with algorithm polyak_dion");
  }
  if (config.rank_policy.has_value() &&
      config.algorithm != Algorithm::ada_orth_dion) {
    throw ValidationError("rank_policy: only valid with algorithm ada_orth_dion");
  }
  if (config.rank_policy.has_value()) {
    const RankPolicyConfig& p = *config.rank_policy;
    if (p.alpha <= 0.0 || p.alpha > 1.0) {
      throw ValidationError("rank_policy.alpha: must be in (0, 1]");
    }
    if (p.gamma < 1.0) {
      throw ValidationError("rank_policy.gamma: must be >= 1");
    }
    if (p.r_min < 1) {
      throw ValidationError("rank_policy.r_min: must be positive");
    }
    const int r_max = p.r_max > 0 ? p.r_max : config.rank;
    if (r_max < p.r_min) {
      throw ValidationError("rank_policy.r_max: must be >= r_min");
    }
    if (r_max > std::min(config.problem.m, config.problem.n)) {
      throw ValidationError("rank_policy.r_max: exceeds min(m, n)");
    }
    if (p.round_to < 1) {
      throw ValidationError("rank_policy.round_to: must be positive");
    }
    if (p.cadence < 1) {
      throw ValidationError("rank_policy.cadence: must be positive");
    }
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig config;
  config.problem = parse_problem(field(j, "", "problem"));
  config.algorithm =
      parse_algorithm(get_string(j, "", "algorithm"), "algorithm");
  config.rank = get_int(j, "", "rank");
  config.steps = get_int(j, "", "steps");
  const json& eta = field(j, "", "eta");
  const std::string schedule = get_string(eta, "eta", "schedule");
  if (schedule == "constant") {
    config.eta_schedule = EtaSchedule::constant;
  } else if (schedule == "inv_sqrt_t") {
    config.eta_schedule = EtaSchedule::inv_sqrt_t;
  } else {
    fail("eta.schedule", "must be 'constant' or 'inv_sqrt_t'");
  }
  config.eta_c = get_double(eta, "eta", "c");
  if (j.contains("beta")) config.beta = get_double(j, "", "beta");
  if (j.contains("mu")) config.mu = get_double(j, "", "mu");
  if (j.contains("rank_policy") && !j["rank_policy"].is_null()) {
    config.rank_policy = parse_rank_policy(j["rank_policy"]);
  }
  if (j.contains("diagnostics_mode")) {
    const std::string mode = get_string(j, "", "diagnostics_mode");
    if (mode == "full") {
      config.diagnostics_mode = DiagnosticsMode::full;
    } else if (mode == "fast") {
      config.diagnostics_mode = DiagnosticsMode::fast;
    } else {
      fail("diagnostics_mode", "must be 'full' or 'fast'");
    }
  }
  if (j.contains("seed")) {
    const json& v = field(j, "", "seed");
    if (!v.is_number_unsigned()) fail("seed", "must be unsigned");
    config.seed = v.get<std::uint64_t>();
  }
  if (j.contains("output_path")) {
    config.output_path = get_string(j, "", "output_path");
  }
  if (j.contains("store_raw_vbar")) {
    const json& v = field(j, "", "store_raw_vbar");
    if (!v.is_boolean()) fail("store_raw_vbar", "must be a boolean");
    config.store_raw_vbar = v.get<bool>();
  }
  validate_config(config);
  return config;
}

std::string config_to_json(const ExperimentConfig& config) {
  json problem{
      {"kind", kind_name(config.problem.kind)},
      {"m", config.problem.m},
      {"n", config.problem.n},
      {"target_spectrum", config.problem.target_spectrum},
      {"gap_index", config.problem.gap_index},
      {"tail", config.problem.tail},
      {"regime", regime_name(config.problem.regime)},
      {"noise_scale", config.problem.noise_scale},
      {"seed", config.problem.seed},
  };
  json j{
      {"problem", problem},
      {"algorithm", algorithm_name(config.algorithm)},
      {"rank", config.rank},
      {"steps", config.steps},
      {"eta",
       {{"schedule", config.eta_schedule == EtaSchedule::constant
                         ? "constant"
                         : "inv_sqrt_t"},
        {"c", config.eta_c}}},
      {"beta", config.beta},
      {"mu", config.mu},
      {"diagnostics_mode",
       config.diagnostics_mode == DiagnosticsMode::full ? "full" : "fast"},
      {"seed", config.seed},
      {"output_path", config.output_path},
      {"store_raw_vbar", config.store_raw_vbar},
  };
  if (config.rank_policy.has_value()) {
    const RankPolicyConfig& p = *config.rank_policy;
    json policy{
        {"alpha", p.alpha},   {"gamma", p.gamma},       {"r_min", p.r_min},
        {"r_max", p.r_max},   {"round_to", p.round_to}, {"cadence", p.cadence},
    };
    if (p.freeze_after.has_value()) policy["freeze_after"] = *p.freeze_after;
    j["rank_policy"] = policy;
  }
  return j.dump(2);
}

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::dion: return "dion";
    case Algorithm::orth_dion: return "orth_dion";
    case Algorithm::ada_orth_dion: return "ada_orth_dion";
    case Algorithm::exact_polar: return "exact_polar";
    case Algorithm::polyak_dion: return "polyak_dion";
  }
  return "orth_dion";
}

}  // namespace lrs
