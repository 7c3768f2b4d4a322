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

// Tabular Q-learning over encoded state keys.

#ifndef AFFORD_QLEARNER_H_
#define AFFORD_QLEARNER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "afford/environment.h"

namespace afford {

class Perceiver;

// Q(s, a) and update counts. Absent entries read as 0.
class QTable {
 public:
  explicit QTable(int num_actions = 1);

  int num_actions() const { return num_actions_; }
  double value(std::uint64_t s, int a) const;
  std::uint64_t count(std::uint64_t s, int a) const;
  double max_value(std::uint64_t s) const;
  bool contains(std::uint64_t s) const { return rows_.count(s) != 0; }
  std::size_t num_states() const { return rows_.size(); }

  void set(std::uint64_t s, int a, double value);
  // Sets Q(s, a) and counts one update.
  void record_update(std::uint64_t s, int a, double value);

  // Sorted "state_key action value count" lines after an "actions N" header.
  void write(std::ostream& out) const;
  static QTable read(std::istream& in);

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  struct Row {
    std::vector<double> values;
    std::vector<std::uint64_t> counts;
    friend bool operator==(const Row&, const Row&) = default;
  };
  Row& row(std::uint64_t s);
  void check_action(int a) const;

  int num_actions_;
  std::unordered_map<std::uint64_t, Row> rows_;
};

struct LearnerConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.01;
  std::int64_t decay_steps = 250000;
  std::uint64_t seed = 0;
};

// Linear from start to end over decay_steps, then flat.
double epsilon_at(const LearnerConfig& config, std::int64_t t);

// Epsilon-greedy; greedy ties are broken uniformly at random. Throws
// ContractViolation on an empty action set.
int select_action(const QTable& q, std::uint64_t s, std::span<const int> actions,
                  double epsilon, std::mt19937_64& rng);

// One Bellman backup of Q(s, a).
void update(QTable& q, std::uint64_t s, int a, double reward, std::uint64_t s_next,
            bool terminal, const LearnerConfig& config);

struct EpisodeLog {
  std::int64_t end_epoch = 0;
  int score = 0;
};

struct TrainResult {
  QTable table;
  std::vector<EpisodeLog> episodes;
};

using IntervalHook = std::function<void(std::int64_t epoch, const QTable& table)>;

// Runs exactly `epochs` environment steps with one update per step. The hook,
// if set, runs after every `interval` steps.
TrainResult train(Environment& env, Perceiver& perceiver, const LearnerConfig& config,
                  std::int64_t epochs, std::int64_t interval = 0,
                  const IntervalHook& hook = {});

}  // namespace afford

#endif  // AFFORD_QLEARNER_H_
