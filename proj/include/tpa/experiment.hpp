#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tpa/perturb.hpp"

namespace tpa {

// Which bound (or update identity) an experiment exercises. Tokens match the
// CLI: T3_1 T3_2 T3_3 T4_1 T4_2 T4_3 T4_4 T5_2 SMW_INV SMW_PINV.
enum class ExperimentKind {
  kInvPosterior,       // T3_1
  kInvPrior,           // T3_2
  kEquation,           // T3_3
  kPinvGeneral,        // T4_1
  kPinvRankPreserving, // T4_2
  kPinvRelative,       // T4_3
  kLstsq,              // T4_4
  kSmwSolve,           // T5_2
  kSmwInv,             // SMW_INV:  smw_inverse vs direct inverse
  kSmwPinv,            // SMW_PINV: smw_pinv vs direct pinv
};

std::optional<ExperimentKind> parse_experiment_kind(const std::string& token);
std::string experiment_kind_token(ExperimentKind kind);

enum class ReportFormat { kCsv, kJson };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kInvPrior;
  int n1 = 4, n2 = 4, n3 = 3;
  int n4 = 2;  // right-hand-side width / update width where applicable
  int trials = 100;
  std::uint64_t seed = 0;
  double perturbation_scale = 1e-3;
  std::optional<std::vector<int>> rank_profile;
  std::string output_path;  // empty = stdout
  ReportFormat format = ReportFormat::kCsv;
};

struct ExperimentRow {
  int trial = 0;
  std::uint64_t seed = 0;
  BoundReport report;
};

struct ExperimentSummary {
  int trials = 0;
  int applicable = 0;
  int hypothesis_violations = 0;
  int bound_violations = 0;
  double max_ratio_f = 0.0;  // max actual/bound over applicable rows
  double max_ratio_2 = 0.0;
  bool all_hold = true;      // every applicable row holds (extras included)
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  ExperimentSummary summary;
};

// Runs config.trials seeded trials (parallel across trials, deterministic:
// trial i uses trial_seed(config.seed, i) and rows are emitted in trial
// order regardless of thread count). Throws InfeasibleDims / DimensionMismatch
// on configs whose instance family cannot exist at the given dims.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Fixed CSV layout: one row per trial, then one '#'-prefixed summary line.
// Floats carry 17 significant digits. Identical configs produce identical
// bytes.
void write_csv(const ExperimentResult& result, std::ostream& out);
void write_json(const ExperimentResult& result, std::ostream& out);

// Column documentation for --help.
std::string csv_columns_doc();

// JSON (de)serialization of configs, used for shipped experiment files.
ExperimentConfig config_from_json_file(const std::string& path);
void config_to_json_file(const ExperimentConfig& config, const std::string& path);

}  // namespace tpa
