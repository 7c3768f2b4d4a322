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

#include "afford/harness.h"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "afford/dqn.h"
#include "afford/encoder.h"
#include "afford/environment.h"
#include "afford/error.h"
#include "afford/pipeline.h"
#include "afford/qlearner.h"
#include "afford/seed.h"

namespace afford {

namespace {

// Salts for the independent random streams of one experiment.
enum Salt : std::uint64_t {
  kTrainPipeline = 100,
  kEvalPipeline,
  kLearner,
  kEvalEpisodes,
  kVariant,
  kDqn,
};

std::string fixed(double v, int precision) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  std::string s(buf, res.ptr);
  // No negative zero.
  if (s[0] == '-' && s.find_first_not_of("0.", 1) == std::string::npos) s.erase(0, 1);
  return s;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ContractViolation("bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

EncoderConfig encoder_for(const ExperimentConfig& config, const GameSpec& spec) {
  EncoderConfig enc = config.wide_encoder ? wide_encoder_config() : builtin_encoder_config(spec.name);
  if (config.k) enc.k = *config.k;
  validate(enc);
  return enc;
}

GameSpec eval_spec(const ExperimentConfig& config, const GameSpec& base) {
  const VariantKind kind =
      make_variant(base, config.variant, mix_seed(config.seed, kVariant));
  return apply_variant(base, kind);
}

Perceiver eval_perceiver(const ExperimentConfig& config, GameEnv& env, const EncoderConfig& enc) {
  PipelineOptions options;
  options.calibration_steps = config.calibration_steps;
  options.seed = mix_seed(config.seed, kEvalPipeline);
  PipelineResult p = run_pipeline(env, options);
  return Perceiver(p.profile, enc, env.game().spec().grid_width, p.model);
}

struct Row {
  const char* label;
  bool random;
  VariantName variant;
};

constexpr Row kRows[] = {
    {"Random", true, VariantName::kBase},
    {"Base", false, VariantName::kBase},
    {"Mod-Position", false, VariantName::kModPosition},
    {"Mod-ColorSize", false, VariantName::kModColorSize},
    {"Mod-Image", false, VariantName::kModImage},
};

struct Grid {
  std::vector<std::string> games;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // label then cells
};

std::string record_game(const RunRecord& r) { return r.config.game; }

std::string cell_text(const RunRecord& r) {
  if (r.skipped) return "NA";
  const EvalPoint* p = r.final_point();
  return p ? fixed(p->mean_normalized, 2) : "-";
}

Grid build_grid(const std::vector<RunRecord>& records) {
  Grid g;
  for (const auto& r : records) {
    const std::string game = record_game(r);
    if (std::find(g.games.begin(), g.games.end(), game) == g.games.end()) g.games.push_back(game);
  }
  g.header.push_back("variant");
  for (const auto& game : g.games) {
    g.header.push_back(game + "_dqn");
    g.header.push_back(game + "_ours");
  }
  for (const Row& row : kRows) {
    std::vector<std::string> cells(2 * g.games.size(), "-");
    bool any = false;
    for (const auto& r : records) {
      const bool is_random = r.config.algorithm == Algorithm::kRandom;
      if (is_random != row.random || r.config.variant != row.variant) continue;
      const std::size_t gi =
          std::find(g.games.begin(), g.games.end(), record_game(r)) - g.games.begin();
      any = true;
      if (is_random) {
        cells[2 * gi] = cells[2 * gi + 1] = cell_text(r);
      } else {
        cells[2 * gi + (r.config.algorithm == Algorithm::kDqn ? 0 : 1)] = cell_text(r);
      }
    }
    if (!any) continue;
    cells.insert(cells.begin(), row.label);
    g.rows.push_back(std::move(cells));
  }
  return g;
}

void write_cell_dir(const RunRecord& record) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(record.config.output_dir) / cell_name(record.config);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(dir / name, mode);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("config.txt");
    write_config(record.config, f);
  }
  {
    auto f = open("curve.csv");
    emit_curves(record, f);
  }
  {
    auto f = open("table.csv");
    emit_table_csv({record}, f);
  }
  {
    auto f = open("meta.txt");
    f << "version " << kVersion << "\nwall_seconds " << fixed(record.wall_seconds, 3) << '\n';
  }
  if (!record.model_text.empty()) {
    auto f = open("model.qtable");
    f << record.model_text;
  }
  if (!record.model_binary.empty()) {
    auto f = open("model.dqn", std::ios::out | std::ios::binary);
    f << record.model_binary;
  }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kQLearn: return "qlearn";
    case Algorithm::kDqn: return "dqn";
    case Algorithm::kRandom: return "random";
  }
  return "qlearn";
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm a : {Algorithm::kQLearn, Algorithm::kDqn, Algorithm::kRandom}) {
    if (to_string(a) == text) return a;
  }
  throw ContractViolation("unknown algorithm '" + std::string(text) + "'");
}

std::int64_t epochs_for(const ExperimentConfig& config) {
  if (config.epochs) return *config.epochs;
  return config.algorithm == Algorithm::kDqn ? 1000000 : 500000;
}

void validate(const ExperimentConfig& config) {
  if (config.eval_runs < 1) throw ContractViolation("eval_runs must be at least 1");
  if (config.epochs && *config.epochs < 0) throw ContractViolation("epochs must be non-negative");
  if (config.eval_interval < 0) throw ContractViolation("eval_interval must be non-negative");
  if (config.calibration_steps < 0) throw ContractViolation("calibration_steps must be non-negative");
  if (config.k && *config.k < 1) throw ContractViolation("k must be at least 1");
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  if (key == "game") config.game = value;
  else if (key == "spec") config.spec_path = value;
  else if (key == "variant") config.variant = parse_variant_name(value);
  else if (key == "algo") config.algorithm = parse_algorithm(value);
  else if (key == "epochs") {
    config.epochs = value == "default"
                        ? std::nullopt
                        : std::optional<std::int64_t>(parse_number<std::int64_t>(key, value));
  }
  else if (key == "eval_runs") config.eval_runs = parse_number<int>(key, value);
  else if (key == "eval_interval") config.eval_interval = parse_number<std::int64_t>(key, value);
  else if (key == "seed") config.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "k") config.k = value == "default" ? std::nullopt : std::optional<int>(parse_number<int>(key, value));
  else if (key == "wide_encoder") {
    if (value != "true" && value != "false") throw ContractViolation("wide_encoder must be true or false");
    config.wide_encoder = value == "true";
  } else if (key == "calibration_steps") config.calibration_steps = parse_number<int>(key, value);
  else if (key == "output") config.output_dir = value;
  else throw ContractViolation("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig load_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ContractViolation("config line " + std::to_string(number) + ": expected key = value");
    }
    apply_setting(base, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
  validate(base);
  return base;
}

void write_config(const ExperimentConfig& config, std::ostream& out) {
  out << "game = " << config.game << '\n';
  if (!config.spec_path.empty()) out << "spec = " << config.spec_path << '\n';
  out << "variant = " << to_string(config.variant) << '\n'
      << "algo = " << to_string(config.algorithm) << '\n'
      << "epochs = " << epochs_for(config) << '\n'
      << "eval_runs = " << config.eval_runs << '\n'
      << "eval_interval = " << config.eval_interval << '\n'
      << "seed = " << config.seed << '\n'
      << "k = " << (config.k ? std::to_string(*config.k) : "default") << '\n'
      << "wide_encoder = " << (config.wide_encoder ? "true" : "false") << '\n'
      << "calibration_steps = " << config.calibration_steps << '\n';
}

double normalized_score(double actual, double max_achievable) {
  if (!(max_achievable > 0)) throw ContractViolation("maximum achievable score must be positive");
  return actual / max_achievable;
}

EvalPoint make_eval_point(std::int64_t epoch, std::vector<int> scores, int max_score) {
  EvalPoint p;
  p.epoch = epoch;
  p.scores = std::move(scores);
  if (!p.scores.empty()) {
    const double n = static_cast<double>(p.scores.size());
    p.mean_score = std::accumulate(p.scores.begin(), p.scores.end(), 0.0) / n;
    p.mean_normalized = normalized_score(p.mean_score, max_score);
  }
  return p;
}

GameSpec load_game(const ExperimentConfig& config) {
  if (config.spec_path.empty()) return builtin_spec(config.game);
  std::ifstream in(config.spec_path);
  if (!in) throw IoError("cannot read " + config.spec_path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

RunRecord run_experiment(const ExperimentConfig& config_in) {
  const auto started = std::chrono::steady_clock::now();
  validate(config_in);
  RunRecord record;
  record.config = config_in;
  const ExperimentConfig& config = record.config;
  const GameSpec base = load_game(config);
  record.config.game = base.name;
  record.max_score = base.max_score;

  GameSpec variant;
  try {
    variant = eval_spec(config, base);
  } catch (const NotApplicable& e) {
    record.skipped = true;
    record.skip_reason = e.what();
    if (!config.output_dir.empty()) write_cell_dir(record);
    return record;
  }

  // Training always runs on the base game; only evaluation sees the variant.
  GameEnv train_env(base);
  GameEnv eval_env(variant);
  const std::uint64_t eval_seed = mix_seed(config.seed, kEvalEpisodes);

  const std::int64_t epochs = epochs_for(config);
  switch (config.algorithm) {
    case Algorithm::kRandom: {
      record.points.push_back(make_eval_point(
          0, evaluate_random(eval_env, config.eval_runs, eval_seed), base.max_score));
      break;
    }
    case Algorithm::kQLearn: {
      const EncoderConfig enc = encoder_for(config, base);
      PipelineOptions options;
      options.calibration_steps = config.calibration_steps;
      options.seed = mix_seed(config.seed, kTrainPipeline);
      PipelineResult p = run_pipeline(train_env, options);
      Perceiver trainer(p.profile, enc, base.grid_width, p.model);
      const Perceiver evaluator = eval_perceiver(config, eval_env, enc);
      LearnerConfig learner;
      learner.seed = mix_seed(config.seed, kLearner);
      learner.decay_steps = std::max<std::int64_t>(1, epochs / 2);
      EvalResult last;
      auto evaluate = [&](std::int64_t epoch, const QTable& table) {
        last = evaluate_greedy(eval_env, evaluator, table, config.eval_runs, eval_seed);
        record.points.push_back(make_eval_point(epoch, last.scores, base.max_score));
      };
      TrainResult trained =
          train(train_env, trainer, learner, epochs, config.eval_interval, evaluate);
      if (record.points.empty() || record.points.back().epoch != epochs) {
        evaluate(epochs, trained.table);
      }
      record.eval_steps = last.steps;
      record.unseen_steps = last.unseen_steps;
      std::ostringstream model;
      trained.table.write(model);
      record.model_text = model.str();
      break;
    }
    case Algorithm::kDqn: {
      DqnConfig dqn;
      dqn.seed = mix_seed(config.seed, kDqn);
      dqn.decay_steps = std::max<std::int64_t>(1, epochs / 2);
      auto evaluate = [&](std::int64_t epoch, const DenseNet& net) {
        record.points.push_back(make_eval_point(
            epoch, evaluate_dqn(eval_env, net, config.eval_runs, eval_seed, dqn.cell_px),
            base.max_score));
      };
      DqnResult trained = dqn_train(train_env, dqn, epochs, config.eval_interval, evaluate);
      if (record.points.empty() || record.points.back().epoch != epochs) {
        evaluate(epochs, trained.net);
      }
      std::ostringstream model(std::ios::out | std::ios::binary);
      write_checkpoint(trained.net, model);
      record.model_binary = model.str();
      break;
    }
  }
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!config.output_dir.empty()) write_cell_dir(record);
  return record;
}

RunRecord evaluate_model(const ExperimentConfig& config_in, const std::string& model_path) {
  validate(config_in);
  RunRecord record;
  record.config = config_in;
  const ExperimentConfig& config = record.config;
  const GameSpec base = load_game(config);
  record.config.game = base.name;
  record.max_score = base.max_score;
  GameSpec variant;
  try {
    variant = eval_spec(config, base);
  } catch (const NotApplicable& e) {
    record.skipped = true;
    record.skip_reason = e.what();
    return record;
  }
  std::ifstream in(model_path, std::ios::binary);
  if (!in) throw IoError("cannot read " + model_path);
  std::string first;
  std::getline(in, first);
  in.seekg(0);
  GameEnv eval_env(variant);
  const std::uint64_t eval_seed = mix_seed(config.seed, kEvalEpisodes);
  std::vector<int> scores;
  if (first == "afford-dqn 1") {
    record.config.algorithm = Algorithm::kDqn;
    const DenseNet net = read_checkpoint(in);
    scores = evaluate_dqn(eval_env, net, config.eval_runs, eval_seed);
  } else {
    record.config.algorithm = Algorithm::kQLearn;
    const QTable table = QTable::read(in);
    if (table.num_actions() != eval_env.num_keys()) {
      throw ContractViolation("model has " + std::to_string(table.num_actions()) +
                              " actions, game has " + std::to_string(eval_env.num_keys()));
    }
    const Perceiver evaluator = eval_perceiver(config, eval_env, encoder_for(config, base));
    EvalResult r = evaluate_greedy(eval_env, evaluator, table, config.eval_runs, eval_seed);
    record.eval_steps = r.steps;
    record.unseen_steps = r.unseen_steps;
    scores = std::move(r.scores);
  }
  record.points.push_back(make_eval_point(epochs_for(config), std::move(scores), base.max_score));
  return record;
}

void emit_table_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  const Grid g = build_grid(records);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(g.header);
  for (const auto& row : g.rows) line(row);
}

void emit_table_text(const std::vector<RunRecord>& records, std::ostream& out) {
  const Grid g = build_grid(records);
  std::vector<std::size_t> width(g.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) width[i] = std::max(width[i], cells[i].size());
  };
  measure(g.header);
  for (const auto& row : g.rows) measure(row);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == 0) out << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
      else out << "  " << std::right << std::setw(static_cast<int>(width[i])) << cells[i];
    }
    out << '\n';
  };
  line(g.header);
  for (const auto& row : g.rows) line(row);
}

void emit_curves(const RunRecord& record, std::ostream& out) {
  std::size_t runs = 0;
  for (const auto& p : record.points) runs = std::max(runs, p.scores.size());
  out << "epoch,mean_normalized";
  for (std::size_t i = 0; i < runs; ++i) out << ",run_" << i;
  out << '\n';
  for (const auto& p : record.points) {
    out << p.epoch << ',' << fixed(p.mean_normalized, 6);
    for (int s : p.scores) out << ',' << fixed(normalized_score(s, record.max_score), 6);
    out << '\n';
  }
}

std::string cell_name(const ExperimentConfig& config) {
  return config.game + "_" + std::string(to_string(config.variant)) + "_" +
         std::string(to_string(config.algorithm));
}

std::vector<ExperimentConfig> full_grid(const ExperimentConfig& base) {
  std::vector<ExperimentConfig> out;
  for (const auto& [name, spec] : builtin_specs()) {
    ExperimentConfig c = base;
    c.game = name;
    c.spec_path.clear();
    c.variant = VariantName::kBase;
    c.algorithm = Algorithm::kRandom;
    out.push_back(c);
    for (VariantName v : {VariantName::kBase, VariantName::kModPosition,
                          VariantName::kModColorSize, VariantName::kModImage}) {
      for (Algorithm a : {Algorithm::kDqn, Algorithm::kQLearn}) {
        c.variant = v;
        c.algorithm = a;
        out.push_back(c);
      }
    }
  }
  return out;
}

}  // namespace afford
