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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "afford/agent_id.h"
#include "afford/dqn.h"
#include "afford/encoder.h"
#include "afford/environment.h"
#include "afford/gamespec.h"
#include "afford/harness.h"
#include "afford/pipeline.h"
#include "afford/qlearner.h"
#include "afford/seed.h"

namespace afford {
namespace {

constexpr std::array<const char*, 4> kGames = {"myaliensv1", "myaliensv2", "roadrash",
                                               "spaceinvaders"};
constexpr std::uint64_t kSeed = 1;
constexpr int kEvalRuns = 20;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

double mean(const std::vector<int>& v) {
  double s = 0;
  for (int x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Trained base-game policies shared by several criteria.
struct Trained {
  RunRecord record;
  QTable table;
};

std::map<std::string, Trained>& trained_policies() {
  static std::map<std::string, Trained> cache;
  if (cache.empty()) {
    for (const char* game : kGames) {
      ExperimentConfig c;
      c.game = game;
      c.epochs = 500000;
      c.eval_interval = 0;
      c.eval_runs = kEvalRuns;
      c.seed = kSeed;
      RunRecord r = run_experiment(c);
      std::istringstream model(r.model_text);
      QTable table = QTable::read(model);
      cache.emplace(game, Trained{std::move(r), std::move(table)});
    }
  }
  return cache;
}

Perceiver evaluator(GameEnv& env, const EncoderConfig& enc, std::uint64_t seed) {
  PipelineOptions options;
  options.seed = seed;
  PipelineResult p = run_pipeline(env, options);
  return Perceiver(p.profile, enc, env.game().spec().grid_width, p.model);
}

Verdict random_baseline() {
  const std::map<std::string, double> expected = {{"myaliensv1", -0.20}, {"myaliensv2", -0.33}};
  Verdict o{true, ""};
  for (const char* game : kGames) {
    ExperimentConfig c;
    c.game = game;
    c.algorithm = Algorithm::kRandom;
    c.eval_runs = 100;
    c.seed = kSeed;
    const RunRecord r = run_experiment(c);
    const double score = r.final_point()->mean_normalized;
    o.detail += std::string(game) + "=" + fmt(score) + " ";
    if (auto it = expected.find(game); it != expected.end()) {
      o.pass = o.pass && std::abs(score - it->second) <= 0.05;
    }
  }
  return o;
}

Verdict trained_performance() {
  const std::map<std::string, double> threshold = {
      {"myaliensv1", 0.6}, {"myaliensv2", 0.4}, {"roadrash", 0.4}, {"spaceinvaders", 1.0}};
  Verdict o{true, ""};
  for (auto& [game, t] : trained_policies()) {
    const double score = t.record.final_point()->mean_normalized;
    o.detail += game + "=" + fmt(score) + " ";
    o.pass = o.pass && score >= threshold.at(game);
  }
  return o;
}

Verdict variant_invariance() {
  Verdict o{true, ""};
  const std::uint64_t pipeline_seed = mix_seed(kSeed, 7);
  const std::uint64_t episode_seed = mix_seed(kSeed, 8);
  for (auto& [game, t] : trained_policies()) {
    const GameSpec& base = builtin_spec(game);
    const EncoderConfig enc = builtin_encoder_config(game);
    GameEnv base_env(base);
    const EvalResult ref = evaluate_greedy(base_env, evaluator(base_env, enc, pipeline_seed),
                                           t.table, kEvalRuns, episode_seed, true);
    for (VariantName v : {VariantName::kModColorSize, VariantName::kModImage}) {
      if (!variant_applicable(base, v)) continue;
      GameEnv env(apply_variant(base, make_variant(base, v)));
      const EvalResult got = evaluate_greedy(env, evaluator(env, enc, pipeline_seed), t.table,
                                             kEvalRuns, episode_seed, true);
      const bool keys = got.keys == ref.keys;
      const bool scores = got.scores == ref.scores;
      o.detail += game + "/" + std::string(to_string(v)) + (keys && scores ? "=same " : "=DIFF ");
      o.pass = o.pass && keys && scores;
    }
  }
  return o;
}

Verdict position_degradation() {
  const Trained& t = trained_policies().at("spaceinvaders");
  const std::filesystem::path model =
      std::filesystem::temp_directory_path() / "afford_acceptance_si.qtable";
  std::ofstream(model) << t.record.model_text;
  ExperimentConfig c = t.record.config;
  c.variant = VariantName::kModPosition;
  const RunRecord r = evaluate_model(c, model.string());
  std::filesystem::remove(model);
  const double base = t.record.final_point()->mean_normalized;
  const double moved = r.final_point()->mean_normalized;
  const double unseen =
      r.eval_steps ? static_cast<double>(r.unseen_steps) / static_cast<double>(r.eval_steps) : 0;
  return {moved < base && unseen > 0,
          "base=" + fmt(base) + " mod-position=" + fmt(moved) + " unseen_fraction=" +
              fmt(unseen, 6)};
}

KeyEffect expected_effect(const KeyDef& key) {
  switch (key.kind) {
    case KeyDef::Kind::kNoop: return KeyEffect::kNoEffect;
    case KeyDef::Kind::kFire: return KeyEffect::kFire;
    case KeyDef::Kind::kMove:
      if (key.delta.x != 0) return key.delta.x < 0 ? KeyEffect::kMoveLeft : KeyEffect::kMoveRight;
      return key.delta.y < 0 ? KeyEffect::kMoveUp : KeyEffect::kMoveDown;
  }
  return KeyEffect::kNoEffect;
}

bool subset(const std::vector<AppearanceSignature>& a, const std::vector<AppearanceSignature>& b) {
  return std::all_of(a.begin(), a.end(), [&](const auto& s) {
    return std::find(b.begin(), b.end(), s) != b.end();
  });
}

Verdict pipeline_correctness() {
  Verdict o{true, ""};
  int base_count = 0, variant_count = 0;
  for (const char* game : kGames) {
    const GameSpec& base = builtin_spec(game);
    for (VariantName v : {VariantName::kBase, VariantName::kModPosition,
                          VariantName::kModColorSize, VariantName::kModImage}) {
      if (!variant_applicable(base, v)) continue;
      (v == VariantName::kBase ? base_count : variant_count)++;
      const GameSpec spec = apply_variant(base, make_variant(base, v, kSeed));
      const ObjectClassDef* player = spec.find_class(spec.player_class());
      GameEnv env(spec);
      IdentifyOptions options;
      options.seed = kSeed;
      bool ok = false;
      try {
        const Identification id = identify_agent(env, options);
        ok = id.profile.signature == AppearanceSignature{player->color, player->size};
        const auto& stages = id.report.candidates_after_each_stage;
        ok = ok && !stages.empty() && subset(stages[0], id.report.initial);
        for (std::size_t i = 1; i < stages.size(); ++i) ok = ok && subset(stages[i], stages[i - 1]);
        const auto keys = discover_key_bindings(env, id.profile.signature);
        ok = ok && keys.size() == spec.actions.size();
        for (std::size_t k = 0; ok && k < keys.size(); ++k) {
          ok = keys[k] == expected_effect(spec.actions[k]);
        }
      } catch (const std::exception&) {
        ok = false;
      }
      if (!ok) o.detail += std::string(game) + "/" + std::string(to_string(v)) + "=WRONG ";
      o.pass = o.pass && ok;
    }
  }
  o.detail += std::to_string(base_count) + " base games, " + std::to_string(variant_count) +
              " applicable variants";
  return o;
}

Verdict learning_oracles() {
  // Chain 0-1-2: action 1 steps right, action 0 left; leaving either end
  // terminates with reward +1 on the right and -1 on the left.
  const LearnerConfig cfg;
  auto step = [](int s, int a) -> std::pair<int, double> {
    const int n = a == 0 ? s - 1 : s + 1;
    if (n < 0) return {-1, -1.0};
    if (n > 2) return {-1, 1.0};
    return {n, 0.0};
  };
  std::array<std::array<double, 2>, 3> q_star{};
  for (int it = 0; it < 2000; ++it) {
    auto next = q_star;
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        const auto [n, r] = step(s, a);
        next[s][a] = n < 0 ? r : r + cfg.gamma * std::max(q_star[n][0], q_star[n][1]);
      }
    }
    q_star = next;
  }
  QTable q(2);
  std::mt19937_64 rng(kSeed);
  const std::vector<int> actions = {0, 1};
  int s = 1;
  for (int t = 0; t < 200000; ++t) {
    const int a = select_action(q, s, actions, 1.0, rng);
    const auto [n, r] = step(s, a);
    update(q, s, a, r, n < 0 ? 0 : n, n < 0, cfg);
    s = n < 0 ? static_cast<int>(rng() % 3) : n;
  }
  double q_err = 0;
  for (int st = 0; st < 3; ++st) {
    for (int a = 0; a < 2; ++a) q_err = std::max(q_err, std::abs(q.value(st, a) - q_star[st][a]));
  }

  // Gradient check against central differences.
  double grad_err = 0;
  constexpr double kStep = 1e-5;
  for (int c = 0; c < 100; ++c) {
    const int in = 2 + static_cast<int>(rng() % 6);
    const int hidden = 2 + static_cast<int>(rng() % 8);
    const int out = 2 + static_cast<int>(rng() % 3);
    const DenseNet net = make_net({in, hidden, out}, rng());
    const DenseNet target = make_net({in, hidden, out}, rng());
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<DqnTransition> batch(4);
    for (auto& tr : batch) {
      tr.frame = Eigen::VectorXd::NullaryExpr(in, [&] { return normal(rng); });
      tr.next_frame = Eigen::VectorXd::NullaryExpr(in, [&] { return normal(rng); });
      tr.action = static_cast<int>(rng() % out);
      tr.reward = normal(rng);
      tr.terminal = rng() % 3 == 0;
    }
    const Gradients g = backward(net, batch, cfg.gamma, target);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      for (Eigen::Index i = 0; i < net.weights[l].size(); ++i) {
        DenseNet plus = net, minus = net;
        plus.weights[l].data()[i] += kStep;
        minus.weights[l].data()[i] -= kStep;
        const double numeric = (td_loss(plus, batch, cfg.gamma, target) -
                                td_loss(minus, batch, cfg.gamma, target)) / (2 * kStep);
        const double analytic = g.weights[l].data()[i];
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-3});
        grad_err = std::max(grad_err, std::abs(numeric - analytic) / scale);
      }
    }
  }

  // Sample consumption per epoch once the replay buffer is warm.
  GameEnv env(builtin_spec("roadrash"));
  DqnConfig dqn;
  dqn.hidden = {16};
  dqn.seed = kSeed;
  const std::int64_t epochs = 1000;
  const DqnResult d = dqn_train(env, dqn, epochs);
  const std::int64_t warm_epochs = epochs - (dqn.batch_size - 1);
  const double dqn_per_epoch = static_cast<double>(d.samples_consumed) / warm_epochs;
  const double q_per_epoch = 1.0;  // one tabular update per step
  const double ratio = dqn_per_epoch / q_per_epoch;

  return {q_err <= 1e-6 && grad_err <= 1e-4 && ratio == 32.0,
          "chain_max_error=" + fmt(q_err, 9) + " grad_rel_error=" + fmt(grad_err, 7) +
              " sample_ratio=" + fmt(ratio, 1) + ":1"};
}

Verdict dqn_baseline_sensitivity() {
  const GameSpec& base = builtin_spec("roadrash");
  GameEnv env(base);
  DqnConfig cfg;
  cfg.seed = kSeed;
  cfg.decay_steps = 10000;
  const DqnResult d = dqn_train(env, cfg, 20000);
  const std::uint64_t eval_seed = mix_seed(kSeed, 9);
  const std::vector<int> ref = evaluate_dqn(env, d.net, kEvalRuns, eval_seed);
  Verdict o{d.net.finite(), "base=" + fmt(mean(ref), 1) + " "};
  for (VariantName v : {VariantName::kModColorSize, VariantName::kModImage}) {
    GameEnv venv(apply_variant(base, make_variant(base, v)));
    const std::vector<int> got = evaluate_dqn(venv, d.net, kEvalRuns, eval_seed);
    o.detail += std::string(to_string(v)) + "=" + fmt(mean(got), 1) +
                (got == ref ? "(unchanged) " : "(changed) ");
    o.pass = o.pass && got != ref;
  }
  o.detail += "tabular unchanged, see variant_invariance";
  return o;
}

Verdict determinism() {
  std::vector<ExperimentConfig> cells;
  ExperimentConfig c;
  c.seed = kSeed;
  c.eval_runs = 5;
  c.game = "roadrash";
  c.epochs = 20000;
  c.eval_interval = 5000;
  cells.push_back(c);
  c.algorithm = Algorithm::kDqn;
  c.epochs = 500;
  c.eval_interval = 250;
  cells.push_back(c);
  c.game = "spaceinvaders";
  c.algorithm = Algorithm::kRandom;
  cells.push_back(c);
  c.algorithm = Algorithm::kQLearn;
  c.variant = VariantName::kModPosition;
  c.epochs = 20000;
  c.eval_interval = 10000;
  cells.push_back(c);
  auto render = [&] {
    std::vector<RunRecord> records;
    std::ostringstream curves;
    for (const auto& cell : cells) {
      records.push_back(run_experiment(cell));
      emit_curves(records.back(), curves);
    }
    std::ostringstream table;
    emit_table_csv(records, table);
    return table.str() + curves.str();
  };
  const std::string first = render();
  const std::string second = render();
  return {first == second, std::to_string(cells.size()) + " cells, " +
                               std::to_string(first.size()) + " bytes compared"};
}

}  // namespace
}  // namespace afford

int main() {
  using Check = std::pair<const char*, std::function<afford::Verdict()>>;
  const std::vector<Check> checks = {
      {"random_baseline", afford::random_baseline},
      {"trained_performance", afford::trained_performance},
      {"variant_invariance", afford::variant_invariance},
      {"position_degradation", afford::position_degradation},
      {"pipeline_correctness", afford::pipeline_correctness},
      {"learning_oracles", afford::learning_oracles},
      {"dqn_baseline_sensitivity", afford::dqn_baseline_sensitivity},
      {"determinism", afford::determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto started = std::chrono::steady_clock::now();
    afford::Verdict o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first,
                o.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failed,
              checks.size());
  return failed == 0 ? 0 : 1;
}
