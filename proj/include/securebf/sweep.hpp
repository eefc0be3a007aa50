#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "securebf/config.hpp"
#include "securebf/sca_common.hpp"

namespace securebf {

enum class Scheme { asbd, without_an, oma_w_an, osbd, noma_wo_eh, oma_wo_eh, oma_w_eh, power_control };

std::string to_string(Scheme s);
/// Accepts the CLI spellings (asbd, without-an, oma-w-an, osbd, noma-wo-eh,
/// oma-wo-eh, oma-w-eh, power-control). Throws ConfigError otherwise.
Scheme parse_scheme(const std::string& name);

enum class SweepParam { p_s_dbm, n_1, n_s, r_1, gamma };

std::string to_string(SweepParam s);
SweepParam parse_sweep_param(const std::string& name);

/// Copy of `base` with the swept parameter set to `value`.
SystemParams apply_sweep_value(const SystemParams& base, SweepParam param, double value);

/// One scheme run on one channel realization, scored by the metrics module.
struct RunRecord {
  bool feasible = false;
  double ssr = 0.0;  ///< bits; 0 when infeasible
  int iterations = 0;
  double solve_ms = 0.0;
  conic::Status status = conic::Status::optimal;
  bool numerical_failure = false;  ///< no feasible point and the last subproblem failed numerically
  BeamformingSolution solution;
};

RunRecord run_scheme(Scheme scheme, const ChannelSet& ch, const SystemParams& params, const TraceSink& trace = {});

struct SweepConfig {
  Scenario scenario;
  std::vector<Scheme> schemes{Scheme::asbd};
  SweepParam param = SweepParam::p_s_dbm;
  std::vector<double> values{30.0};
  int realizations = 500;
  std::uint64_t seed = 0;
  int workers = 1;
  bool real_channels = false;  ///< strip imaginary parts (oracle-sized checks)
  bool timing = false;         ///< report wall-clock means; off keeps output byte-stable
  std::string trace_path;      ///< JSON-lines iteration trace; empty = none

  /// Throws ConfigError for an empty scheme list, realizations < 1, unsorted
  /// values, or a scheme that cannot run at some swept value.
  void validate() const;
};

/// Reads the optional "sweep" object of a scenario document: schemes, param,
/// values, realizations, seed, workers, real_channels.
SweepConfig sweep_config_from_json(const nlohmann::json& doc);

struct SweepRow {
  Scheme scheme = Scheme::asbd;
  SweepParam param = SweepParam::p_s_dbm;
  double value = 0.0;
  double mean_ssr = 0.0;  ///< over feasible realizations
  double stderr_ssr = 0.0;
  double feasible_frac = 0.0;
  double mean_iters = 0.0;
  double mean_ms = 0.0;  ///< 0 unless timing is on
  int numerical_failures = 0;
  std::vector<std::optional<double>> samples;  ///< per-realization SSR, empty when infeasible
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int numerical_failures() const;
};

/// Realization r uses the channel seed derive_key(seed, r) for every scheme
/// and value, so rows are paired. Work is spread over `workers` threads;
/// results are reduced in realization order.
SweepResult run_sweep(const SweepConfig& config);

std::string sweep_csv_header();
std::string to_csv(const SweepResult& result);
nlohmann::json to_json(const SweepResult& result);
/// Inverse of to_csv (samples are not carried by the CSV).
SweepResult parse_csv(const std::string& text);

/// Writes `<path>` as CSV and `<path minus .csv>.json` as its JSON twin.
/// Throws std::runtime_error when a file cannot be written.
void emit_results(const SweepResult& result, const std::string& path);

}  // namespace securebf
