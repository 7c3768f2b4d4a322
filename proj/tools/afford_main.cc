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

// The afford command-line tool.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "afford/agent_id.h"
#include "afford/environment.h"
#include "afford/error.h"
#include "afford/gamespec.h"
#include "afford/harness.h"
#include "afford/pipeline.h"

namespace {

using afford::ExperimentConfig;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw afford::IoError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Options shared by the experiment verbs. Values set on the command line
// override the config file.
struct ExperimentFlags {
  std::string config_path;
  std::string game, spec, variant, algo, output;
  std::int64_t epochs = 0, interval = 0;
  int runs = 0, k = 0, calibration = 0;
  std::uint64_t seed = 0;
  bool wide = false;

  void add_to(CLI::App& app, bool training) {
    app.add_option("--config", config_path, "Config file of key = value lines");
    app.add_option("--game", game, "Built-in game name");
    app.add_option("--spec", spec, "Game description file instead of a built-in");
    app.add_option("--variant", variant, "base | mod-position | mod-colorsize | mod-image");
    app.add_option("--runs", runs, "Evaluation runs");
    app.add_option("--seed", seed, "Experiment seed");
    app.add_option("--k", k, "Encoder half-width override");
    app.add_option("--calibration", calibration, "Random steps used to calibrate categories");
    app.add_flag("--wide", wide, "Use the single-plane k = 12 encoder");
    if (training) {
      app.add_option("--algo", algo, "qlearn | dqn | random");
      app.add_option("--epochs", epochs, "Environment steps of training (default 500000, dqn 1000000)");
      app.add_option("--interval", interval, "Steps between evaluations (0: final only)");
      app.add_option("--output", output, "Directory for experiment cells");
    }
  }

  ExperimentConfig resolve(const CLI::App& app) const {
    ExperimentConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw afford::IoError("cannot read " + config_path);
      config = afford::load_config(in);
    }
    auto set = [&](const char* flag) { return app.count(flag) > 0; };
    if (set("--game")) config.game = game;
    if (set("--spec")) config.spec_path = spec;
    if (set("--variant")) config.variant = afford::parse_variant_name(variant);
    if (set("--algo")) config.algorithm = afford::parse_algorithm(algo);
    if (set("--epochs")) config.epochs = epochs;
    if (set("--interval")) config.eval_interval = interval;
    if (set("--runs")) config.eval_runs = runs;
    if (set("--seed")) config.seed = seed;
    if (set("--k")) config.k = k;
    if (set("--calibration")) config.calibration_steps = calibration;
    if (set("--wide")) config.wide_encoder = wide;
    if (set("--output")) config.output_dir = output;
    afford::validate(config);
    return config;
  }
};

void print_summary(const afford::RunRecord& record) {
  const auto& c = record.config;
  std::cout << "game " << c.game << "\nvariant " << afford::to_string(c.variant)
            << "\nalgo " << afford::to_string(c.algorithm) << '\n';
  if (record.skipped) {
    std::cout << "result NA (" << record.skip_reason << ")\n";
    return;
  }
  if (const auto* p = record.final_point()) {
    std::cout << "runs " << p->scores.size() << "\nmean_score " << p->mean_score
              << "\nmean_normalized " << p->mean_normalized << '\n';
  }
  if (record.eval_steps > 0) {
    std::cout << "unseen_state_fraction "
              << static_cast<double>(record.unseen_steps) / record.eval_steps << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Affordance-category game agents and their benchmark harness"};
  app.require_subcommand(1);

  auto* identify = app.add_subcommand("identify", "Identify the agent and its key bindings");
  std::string id_game, id_spec, id_variant = "base";
  std::uint64_t id_seed = 1;
  identify->add_option("game", id_game, "Built-in game name");
  identify->add_option("--spec", id_spec, "Game description file");
  identify->add_option("--variant", id_variant, "Variant to probe");
  identify->add_option("--seed", id_seed, "Probe seed");

  auto* train = app.add_subcommand("train", "Train on the base game and evaluate");
  ExperimentFlags train_flags;
  train_flags.add_to(*train, true);

  auto* eval = app.add_subcommand("eval", "Evaluate an exported model on a variant");
  ExperimentFlags eval_flags;
  std::string model_path;
  eval_flags.add_to(*eval, false);
  eval->add_option("--model", model_path, "Q-table or DQN checkpoint")->required();

  auto* bench = app.add_subcommand("bench", "Run the score grid over the built-in games");
  ExperimentFlags bench_flags;
  bool full = false;
  bench_flags.add_to(*bench, true);
  bench->add_flag("--full", full, "Every game, variant and algorithm")->required();

  auto* spec = app.add_subcommand("spec", "Game description tooling");
  spec->require_subcommand(1);
  auto* spec_parse = spec->add_subcommand("parse", "Validate a file and print its canonical form");
  std::string parse_path;
  spec_parse->add_option("file", parse_path)->required();
  auto* spec_variant = spec->add_subcommand("variant", "Print a variant of a game");
  std::string variant_source, variant_name = "base";
  std::uint64_t variant_seed = 1;
  spec_variant->add_option("game", variant_source, "Built-in name or file")->required();
  spec_variant->add_option("--variant", variant_name)->required();
  spec_variant->add_option("--seed", variant_seed);

  CLI11_PARSE(app, argc, argv);

  if (*identify) {
    const afford::GameSpec base = id_spec.empty() ? afford::builtin_spec(id_game)
                                                  : afford::parse(read_file(id_spec));
    const auto name = afford::parse_variant_name(id_variant);
    afford::GameEnv env(
        afford::apply_variant(base, afford::make_variant(base, name, id_seed)));
    afford::PipelineOptions options;
    options.seed = id_seed;
    options.calibration_steps = 0;
    const afford::PipelineResult result = afford::run_pipeline(env, options);
    std::cout << afford::format_report(result.report, result.profile);
  } else if (*train) {
    print_summary(afford::run_experiment(train_flags.resolve(*train)));
  } else if (*eval) {
    print_summary(afford::evaluate_model(eval_flags.resolve(*eval), model_path));
  } else if (*bench) {
    const ExperimentConfig base = bench_flags.resolve(*bench);
    std::vector<afford::RunRecord> records;
    for (const auto& cell : afford::full_grid(base)) {
      std::cerr << "running " << afford::cell_name(cell) << '\n';
      records.push_back(afford::run_experiment(cell));
    }
    afford::emit_table_text(records, std::cout);
    if (!base.output_dir.empty()) {
      std::ofstream csv(base.output_dir + "/table.csv");
      if (!csv) throw afford::IoError("cannot write " + base.output_dir + "/table.csv");
      afford::emit_table_csv(records, csv);
    }
  } else if (*spec_parse) {
    std::cout << afford::serialize(afford::parse(read_file(parse_path)));
  } else if (*spec_variant) {
    const auto& specs = afford::builtin_specs();
    const afford::GameSpec base = specs.count(variant_source)
                                      ? specs.at(variant_source)
                                      : afford::parse(read_file(variant_source));
    const auto name = afford::parse_variant_name(variant_name);
    std::cout << afford::serialize(
        afford::apply_variant(base, afford::make_variant(base, name, variant_seed)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const afford::SyntaxError& e) {
    std::cerr << "error kind=" << e.kind() << " line=" << e.line() << " column=" << e.column()
              << " message=" << e.what() << '\n';
  } catch (const afford::Error& e) {
    std::cerr << "error kind=" << e.kind() << " message=" << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error kind=internal message=" << e.what() << '\n';
  }
  return 2;
}
