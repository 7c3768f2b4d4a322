// Copyright 2026 The afford Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner: train on the base game, evaluate on a variant, and
// emit score tables and learning curves.

#ifndef AFFORD_HARNESS_H_
#define AFFORD_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afford/gamespec.h"

namespace afford {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Algorithm { kQLearn, kDqn, kRandom };
std::string_view to_string(Algorithm algorithm);
// Throws ContractViolation on an unknown name.
Algorithm parse_algorithm(std::string_view text);

struct ExperimentConfig {
  std::string game = "myaliensv1";
  std::string spec_path;  // custom game file; overrides the built-in named `game`
  VariantName variant = VariantName::kBase;
  Algorithm algorithm = Algorithm::kQLearn;
  std::optional<std::int64_t> epochs;  // unset: the algorithm default
  int eval_runs = 20;
  std::int64_t eval_interval = 10000;
  std::uint64_t seed = 1;
  std::optional<int> k;        // encoder half-width override
  bool wide_encoder = false;   // single plane, k = 12
  int calibration_steps = 5000;
  std::string output_dir;      // empty: nothing written
};

// Throws ContractViolation on eval_runs < 1, epochs < 0 or eval_interval < 0.
// Training steps: `epochs` when set, else 1,000,000 for dqn and 500,000
// for the others.
std::int64_t epochs_for(const ExperimentConfig& config);

void validate(const ExperimentConfig& config);

// Applies one "key = value" setting; throws ContractViolation on unknown keys
// or malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Reads "key = value" lines; '#' starts a comment.
ExperimentConfig load_config(std::istream& in, ExperimentConfig base = {});

// Canonical "key = value" echo, readable by load_config.
void write_config(const ExperimentConfig& config, std::ostream& out);

// actual / max_achievable. Throws ContractViolation if max_achievable <= 0.
double normalized_score(double actual, double max_achievable);

struct EvalPoint {
  std::int64_t epoch = 0;
  std::vector<int> scores;
  double mean_score = 0.0;
  double mean_normalized = 0.0;
};

struct RunRecord {
  ExperimentConfig config;
  int max_score = 0;
  bool skipped = false;  // variant not applicable to the game
  std::string skip_reason;
  std::vector<EvalPoint> points;
  std::int64_t eval_steps = 0;     // in the final evaluation
  std::int64_t unseen_steps = 0;   // final-evaluation steps on never-trained state keys
  std::string model_text;          // exported Q-table, when trained
  std::string model_binary;        // DQN checkpoint, when trained
  double wall_seconds = 0.0;

  const EvalPoint* final_point() const { return points.empty() ? nullptr : &points.back(); }
};

EvalPoint make_eval_point(std::int64_t epoch, std::vector<int> scores, int max_score);

// The game spec the experiment names (built-in or file).
GameSpec load_game(const ExperimentConfig& config);

// Trains on the base game and evaluates greedily on the configured variant.
// Inapplicable variants yield a skipped record. Writes the cell directory
// when output_dir is set.
RunRecord run_experiment(const ExperimentConfig& config);

// Evaluates an exported model (Q-table or DQN checkpoint) on `config`'s
// game and variant without training.
RunRecord evaluate_model(const ExperimentConfig& config, const std::string& model_path);

// Score grid: rows Random, Base, Mod-Position, Mod-ColorSize, Mod-Image (only
// those with records), a DQN and an Ours column per game. Random records fill
// both columns of their game; skipped cells print NA.
void emit_table_csv(const std::vector<RunRecord>& records, std::ostream& out);
void emit_table_text(const std::vector<RunRecord>& records, std::ostream& out);

// "epoch,mean_normalized,run_0,..." with one row per evaluation point.
void emit_curves(const RunRecord& record, std::ostream& out);

// Directory name of an experiment cell: <game>_<variant>_<algorithm>.
std::string cell_name(const ExperimentConfig& config);

// The full grid over the built-in games: random on base, then qlearn and dqn
// on every variant.
std::vector<ExperimentConfig> full_grid(const ExperimentConfig& base);

}  // namespace afford

#endif  // AFFORD_HARNESS_H_
